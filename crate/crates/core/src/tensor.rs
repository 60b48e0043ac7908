//! Dense multi-index arrays with a common dimension for every slot.

use crate::jets::Jet;
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<E> {
    dim: usize,
    rank: usize,
    data: Vec<E>,
}

impl<E: Clone> Tensor<E> {
    pub fn filled(dim: usize, rank: usize, value: E) -> Self {
        Tensor { dim, rank, data: vec![value; dim.pow(rank as u32)] }
    }

    pub fn from_fn(dim: usize, rank: usize, mut f: impl FnMut(&[usize]) -> E) -> Self {
        let len = dim.pow(rank as u32);
        let mut data = Vec::with_capacity(len);
        let mut idx = vec![0usize; rank];
        for _ in 0..len {
            data.push(f(&idx));
            for slot in (0..rank).rev() {
                idx[slot] += 1;
                if idx[slot] < dim {
                    break;
                }
                idx[slot] = 0;
            }
        }
        Tensor { dim, rank, data }
    }

    pub fn try_from_fn<Err>(
        dim: usize,
        rank: usize,
        mut f: impl FnMut(&[usize]) -> Result<E, Err>,
    ) -> Result<Self, Err> {
        let mut first_err = None;
        let t = Tensor::<Option<E>>::from_fn(dim, rank, |idx| -> Option<E> {
            if first_err.is_some() {
                return None;
            }
            match f(idx) {
                Ok(v) => Some(v),
                Err(e) => {
                    first_err = Some(e);
                    None
                }
            }
        });
        if let Some(e) = first_err {
            return Err(e);
        }
        Ok(Tensor { dim, rank, data: t.data.into_iter().map(|v| v.unwrap()).collect() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &E {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: E) {
        let o = self.offset(idx);
        self.data[o] = value;
    }

    pub fn map<F: Clone>(&self, f: impl FnMut(&E) -> F) -> Tensor<F> {
        Tensor { dim: self.dim, rank: self.rank, data: self.data.iter().map(f).collect() }
    }

    /// All multi-indices in storage order.
    pub fn indices(&self) -> Vec<Vec<usize>> {
        Tensor::from_fn(self.dim, self.rank, |idx| idx.to_vec()).data
    }
}

impl<T: Field> Tensor<T> {
    pub fn zeros(dim: usize, rank: usize) -> Self {
        Self::filled(dim, rank, T::zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.magnitude()).fold(0.0, f64::max)
    }

    pub fn zip_with(&self, other: &Self, mut f: impl FnMut(T, T) -> T) -> Self {
        assert_eq!((self.dim, self.rank), (other.dim, other.rank), "tensor shape mismatch");
        Tensor {
            dim: self.dim,
            rank: self.rank,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    /// Largest deviation from symmetry under swapping slots `a` and `b`.
    pub fn asymmetry(&self, a: usize, b: usize) -> f64 {
        let mut worst = 0.0f64;
        for idx in self.indices() {
            let mut swapped = idx.clone();
            swapped.swap(a, b);
            worst = worst.max((*self.get(&idx) - *self.get(&swapped)).magnitude());
        }
        worst
    }
}

impl<T: Field> Tensor<Jet<T>> {
    /// Base-point values of a jet-valued tensor.
    pub fn values(&self) -> Tensor<T> {
        self.map(Jet::value)
    }

    pub fn truncate(&self, order: usize) -> Self {
        self.map(|j| j.truncate(order))
    }
}
