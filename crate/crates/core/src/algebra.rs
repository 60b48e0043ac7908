//! Symplectic linear algebra on the contact hyperplane and on `ℝ^{2n}`.
//!
//! Hyperplane indices run over `0..2n−2`; the manifold index `2n−2` is the
//! Reeb direction. Ambient indices are ordered `(∞, 1, …, 2n−2, 0)`, i.e.
//! position 0 is `∞`, positions `1..=2n−2` the hyperplane and `2n−1` is `0`.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Field, Real};
use crate::tensor::Tensor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dimensions {
    n: usize,
}

impl Dimensions {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension(format!("n must be at least 2, got {n}")));
        }
        Ok(Dimensions { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of the contact hyperplane, `2n − 2`.
    pub fn hyperplane(&self) -> usize {
        2 * self.n - 2
    }

    /// Dimension of the contact manifold, `2n − 1`.
    pub fn manifold(&self) -> usize {
        2 * self.n - 1
    }

    pub fn ambient(&self) -> usize {
        2 * self.n
    }

    /// Index of the Reeb direction among frame/coordinate indices.
    pub fn reeb(&self) -> usize {
        self.hyperplane()
    }

    pub fn require_three_dimensional(&self) -> Result<()> {
        if self.n != 2 {
            return Err(Error::Dimension(format!("operation needs n = 2, got n = {}", self.n)));
        }
        Ok(())
    }

    pub fn require_at_least_five_dimensional(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::Dimension(format!("operation needs n ≥ 3, got n = {}", self.n)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexDirection {
    Raise,
    Lower,
}

/// `ω_ij`, `ω^kl` and the ambient `Ω_IJ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticForm<T> {
    dims: Dimensions,
    omega: Matrix<T>,
    omega_upper: Matrix<T>,
    ambient: Matrix<T>,
}

impl<T: Field> SymplecticForm<T> {
    /// `ω = [[0, I], [−I, 0]]` on the hyperplane, `Ω_∞0 = 1`.
    pub fn standard(dims: Dimensions) -> Self {
        let m = dims.hyperplane();
        let h = m / 2;
        let omega = Matrix::from_fn(m, m, |i, j| {
            if j == i + h && i < h {
                T::one()
            } else if i == j + h && j < h {
                -T::one()
            } else {
                T::zero()
            }
        });
        // ω^{kl} ω_{lj} = −δ: for this block form ω^{-1} = −ω, so ω^{kl} = ω_{kl}
        let omega_upper = omega.clone();
        let a = dims.ambient();
        let mut ambient = Matrix::zeros(a, a);
        ambient[(0, a - 1)] = T::one();
        ambient[(a - 1, 0)] = -T::one();
        for i in 0..m {
            for j in 0..m {
                ambient[(1 + i, 1 + j)] = omega[(i, j)];
            }
        }
        SymplecticForm { dims, omega, omega_upper, ambient }
    }

    pub fn dims(&self) -> Dimensions {
        self.dims
    }

    pub fn hyperplane_dim(&self) -> usize {
        self.dims.hyperplane()
    }

    pub fn manifold_dim(&self) -> usize {
        self.dims.manifold()
    }

    pub fn omega(&self) -> &Matrix<T> {
        &self.omega
    }

    pub fn omega_upper(&self) -> &Matrix<T> {
        &self.omega_upper
    }

    pub fn ambient(&self) -> &Matrix<T> {
        &self.ambient
    }

    /// `ω_ij` extended by zero to manifold indices.
    pub fn omega_frame(&self, a: usize, b: usize) -> T {
        let m = self.hyperplane_dim();
        if a < m && b < m {
            self.omega[(a, b)]
        } else {
            T::zero()
        }
    }

    /// `γ^p = ω^{pq} γ_q`.
    pub fn raise(&self, covector: &[T]) -> Vec<T> {
        self.omega_upper.mat_vec(covector)
    }

    /// `γ_p = γ^q ω_qp`.
    pub fn lower(&self, vector: &[T]) -> Vec<T> {
        self.omega.transpose().mat_vec(vector)
    }

    /// Raises or lowers one hyperplane slot of a tensor with the conventions
    /// `γ^p = ω^{pq}γ_q` and `γ_p = γ^q ω_qp`.
    pub fn index_adjust(
        &self,
        tensor: &Tensor<T>,
        slot: usize,
        direction: IndexDirection,
    ) -> Result<Tensor<T>> {
        if slot >= tensor.rank() {
            return Err(Error::SlotOutOfRange { slot, rank: tensor.rank() });
        }
        let m = self.hyperplane_dim();
        if tensor.dim() != m {
            return Err(Error::Shape(format!(
                "tensor slots have dimension {}, hyperplane has {m}",
                tensor.dim()
            )));
        }
        Ok(Tensor::from_fn(m, tensor.rank(), |idx| {
            let mut src = idx.to_vec();
            let mut acc = T::zero();
            for q in 0..m {
                src[slot] = q;
                let w = match direction {
                    IndexDirection::Raise => self.omega_upper[(idx[slot], q)],
                    IndexDirection::Lower => self.omega[(q, idx[slot])],
                };
                if w != T::zero() {
                    acc += w * *tensor.get(&src);
                }
            }
            acc
        }))
    }
}

/// Max-entry residual of `AᵀΩA − Ω`, i.e. of `A_I^P A_J^Q Ω_PQ − Ω_IJ`.
pub fn symplectic_residual<T: Field>(a: &Matrix<T>, form: &SymplecticForm<T>) -> Result<f64> {
    let k = form.dims().ambient();
    if a.rows() != k || a.cols() != k {
        return Err(Error::Shape(format!("expected a {k}x{k} matrix, got {}x{}", a.rows(), a.cols())));
    }
    Ok(a.transpose().matmul(form.ambient()).matmul(a).sub(form.ambient()).max_abs())
}

pub fn is_symplectic<T: Field>(a: &Matrix<T>, form: &SymplecticForm<T>, tol: f64) -> Result<bool> {
    Ok(symplectic_residual(a, form)? <= tol)
}

/// Residual of the infinitesimal condition `gᵀΩ + Ωg = 0`.
pub fn sp_residual<T: Field>(g: &Matrix<T>, form: &SymplecticForm<T>) -> f64 {
    let o = form.ambient();
    g.transpose().matmul(o).add(&o.matmul(g)).max_abs()
}

/// An element of `Sp(n, ℝ)` checked at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SpElement<T> {
    matrix: Matrix<T>,
    tolerance: f64,
}

impl<T: Field> SpElement<T> {
    pub fn new(matrix: Matrix<T>, form: &SymplecticForm<T>, tolerance: f64) -> Result<Self> {
        let r = symplectic_residual(&matrix, form)?;
        if r > tolerance {
            return Err(Error::DegenerateMap(format!(
                "matrix is not symplectic (residual {r:e} > {tolerance:e})"
            )));
        }
        Ok(SpElement { matrix, tolerance })
    }

    pub fn identity(dims: Dimensions) -> Self {
        SpElement { matrix: Matrix::identity(dims.ambient()), tolerance: 0.0 }
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn inverse(&self, form: &SymplecticForm<T>) -> Result<Self> {
        // A⁻¹ = −Ω Aᵀ Ω for symplectic A
        let o = form.ambient();
        let inv = o.matmul(&self.matrix.transpose()).matmul(o).scale(-T::one());
        Ok(SpElement { matrix: inv, tolerance: self.tolerance })
    }

    pub fn compose(&self, other: &Self) -> Self {
        SpElement {
            matrix: self.matrix.matmul(&other.matrix),
            tolerance: self.tolerance.max(other.tolerance),
        }
    }
}

impl<T: Real> SpElement<T> {
    /// `exp(g)` for `g ∈ 𝔰𝔭(n, ℝ)`.
    pub fn exp(g: &Matrix<T>, form: &SymplecticForm<T>, tolerance: f64) -> Result<Self> {
        Self::new(g.exp(), form, tolerance)
    }
}

/// Block data of `h ∈ 𝔰𝔭(n, ℝ)`:
///
/// ```text
/// h = ( a    c_q      c_0 )
///     ( b^p  A_q^p    c^p )
///     ( b_0  −b_q     −a  )
/// ```
///
/// with `A_qp` symmetric. `s` stores `A_qp`, `c` stores the lowered `c_q`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpBlock<T> {
    pub a: T,
    pub b: Vec<T>,
    pub b0: T,
    pub s: Matrix<T>,
    pub c: Vec<T>,
    pub c0: T,
}

impl<T: Field> SpBlock<T> {
    pub fn zero(dims: Dimensions) -> Self {
        let m = dims.hyperplane();
        SpBlock {
            a: T::zero(),
            b: vec![T::zero(); m],
            b0: T::zero(),
            s: Matrix::zeros(m, m),
            c: vec![T::zero(); m],
            c0: T::zero(),
        }
    }

    /// Number of free parameters, `dim 𝔰𝔭(n, ℝ) = n(2n + 1)`.
    pub fn parameter_count(dims: Dimensions) -> usize {
        let m = dims.hyperplane();
        2 * m + 3 + m * (m + 1) / 2
    }

    /// Block data from a flat parameter vector (ordering `a, b, b0, s, c, c0`).
    pub fn from_parameters(dims: Dimensions, params: &[T]) -> Result<Self> {
        if params.len() != Self::parameter_count(dims) {
            return Err(Error::Malformed(format!(
                "expected {} sp parameters, got {}",
                Self::parameter_count(dims),
                params.len()
            )));
        }
        let m = dims.hyperplane();
        let mut it = params.iter().copied();
        let mut next = || it.next().expect("length checked");
        let a = next();
        let b = (0..m).map(|_| next()).collect();
        let b0 = next();
        let mut s = Matrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let v = next();
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        let c = (0..m).map(|_| next()).collect();
        let c0 = next();
        Ok(SpBlock { a, b, b0, s, c, c0 })
    }

    pub fn to_parameters(&self) -> Vec<T> {
        let m = self.b.len();
        let mut out = vec![self.a];
        out.extend(&self.b);
        out.push(self.b0);
        for i in 0..m {
            for j in i..m {
                out.push(self.s[(i, j)]);
            }
        }
        out.extend(&self.c);
        out.push(self.c0);
        out
    }

    /// `b_q = b^r ω_rq`.
    pub fn b_lower(&self, form: &SymplecticForm<T>) -> Vec<T> {
        form.lower(&self.b)
    }

    /// `c^p = ω^{pq} c_q`.
    pub fn c_upper(&self, form: &SymplecticForm<T>) -> Vec<T> {
        form.raise(&self.c)
    }

    /// `A_q^p = ω^{pr} A_qr`.
    pub fn a_mixed(&self, form: &SymplecticForm<T>) -> Matrix<T> {
        let m = form.hyperplane_dim();
        let wu = form.omega_upper();
        // entry (q, p) holds A_q^p
        Matrix::from_fn(m, m, |q, p| (0..m).fold(T::zero(), |acc, r| acc + wu[(p, r)] * self.s[(q, r)]))
    }

    pub fn to_matrix(&self, form: &SymplecticForm<T>) -> Matrix<T> {
        let m = form.hyperplane_dim();
        let k = m + 2;
        let last = k - 1;
        let bl = self.b_lower(form);
        let cu = self.c_upper(form);
        let am = self.a_mixed(form);
        let mut h = Matrix::zeros(k, k);
        h[(0, 0)] = self.a;
        h[(last, last)] = -self.a;
        h[(0, last)] = self.c0;
        h[(last, 0)] = self.b0;
        for p in 0..m {
            h[(0, 1 + p)] = self.c[p];
            h[(1 + p, 0)] = self.b[p];
            h[(1 + p, last)] = cu[p];
            h[(last, 1 + p)] = -bl[p];
            for q in 0..m {
                h[(1 + p, 1 + q)] = am[(q, p)];
            }
        }
        h
    }

    /// Reads block data off a matrix; the projection is exact on `𝔰𝔭`.
    pub fn from_matrix(g: &Matrix<T>, form: &SymplecticForm<T>) -> Self {
        let m = form.hyperplane_dim();
        let last = m + 1;
        let two = T::from_i64(2);
        let b: Vec<T> = (0..m).map(|p| g[(1 + p, 0)]).collect();
        let c: Vec<T> = (0..m).map(|p| g[(0, 1 + p)]).collect();
        // A_qs = A_q^p ω_ps, symmetrised
        let w = form.omega();
        let lowered = Matrix::from_fn(m, m, |q, s| {
            (0..m).fold(T::zero(), |acc, p| acc + g[(1 + p, 1 + q)] * w[(p, s)])
        });
        let s = Matrix::from_fn(m, m, |q, r| (lowered[(q, r)] + lowered[(r, q)]) / two);
        SpBlock {
            a: (g[(0, 0)] - g[(last, last)]) / two,
            b,
            b0: g[(last, 0)],
            s,
            c,
            c0: g[(0, last)],
        }
    }
}

/// The frame generators `e_α` and a spanning set of `𝔰𝔭(n, ℝ)`.
#[derive(Clone, Debug)]
pub struct SpBasis<T> {
    /// `e_α` ordered `(e_1, …, e_{2n−2}, e_0)`.
    pub frame_generators: Vec<Matrix<T>>,
    /// One generator per block parameter.
    pub generators: Vec<SpBlock<T>>,
}

impl<T: Field> SpBasis<T> {
    pub fn generator_matrices(&self, form: &SymplecticForm<T>) -> Vec<Matrix<T>> {
        self.generators.iter().map(|g| g.to_matrix(form)).collect()
    }
}

/// `e_α` with rows `(0, 0, 0)`, `(δ_α^j, 0, 0)`, `(δ_α^0, −ω_αq, 0)`.
pub fn frame_generator<T: Field>(form: &SymplecticForm<T>, alpha: usize) -> Matrix<T> {
    let m = form.hyperplane_dim();
    let last = m + 1;
    let mut e = Matrix::zeros(m + 2, m + 2);
    if alpha == m {
        e[(last, 0)] = T::one();
    } else {
        e[(1 + alpha, 0)] = T::one();
        for q in 0..m {
            e[(last, 1 + q)] = -form.omega()[(alpha, q)];
        }
    }
    e
}

pub fn sp_basis<T: Field>(form: &SymplecticForm<T>) -> SpBasis<T> {
    let dims = form.dims();
    let count = SpBlock::<T>::parameter_count(dims);
    let generators = (0..count)
        .map(|k| {
            let params: Vec<T> =
                (0..count).map(|i| if i == k { T::one() } else { T::zero() }).collect();
            SpBlock::from_parameters(dims, &params).expect("parameter count matches")
        })
        .collect();
    let frame_generators = (0..dims.manifold()).map(|a| frame_generator(form, a)).collect();
    SpBasis { frame_generators, generators }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(n: usize) -> SymplecticForm<f64> {
        SymplecticForm::standard(Dimensions::new(n).unwrap())
    }

    #[test]
    fn n_below_two_rejected() {
        assert!(Dimensions::new(1).is_err());
    }

    #[test]
    fn standard_form_n2() {
        let f = form(2);
        assert_eq!(f.omega().to_rows(), vec![vec![0.0, 1.0], vec![-1.0, 0.0]]);
        let prod = f.omega_upper().matmul(f.omega());
        assert_eq!(prod, Matrix::identity(2).scale(-1.0));
    }

    #[test]
    fn ambient_block_n3() {
        let f = form(3);
        let o = f.ambient();
        assert_eq!(o.rows(), 6);
        assert_eq!(o.add(&o.transpose()).max_abs(), 0.0);
        assert_eq!(o[(0, 5)], 1.0);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(o[(1 + i, 1 + j)], f.omega()[(i, j)]);
            }
        }
    }

    #[test]
    fn raise_example() {
        let f = form(2);
        assert_eq!(f.raise(&[1.0, 0.0]), vec![0.0, -1.0]);
        assert_eq!(f.lower(&f.raise(&[0.3, -0.7])), vec![0.3, -0.7]);
    }

    #[test]
    fn slot_out_of_range() {
        let f = form(2);
        let t = Tensor::<f64>::zeros(2, 2);
        assert!(matches!(
            f.index_adjust(&t, 2, IndexDirection::Raise),
            Err(Error::SlotOutOfRange { slot: 2, rank: 2 })
        ));
    }

    #[test]
    fn basis_is_in_sp_and_has_right_size() {
        for n in [2, 3] {
            let f = form(n);
            let basis = sp_basis(&f);
            assert_eq!(basis.generators.len(), n * (2 * n + 1));
            for g in basis.generator_matrices(&f).iter().chain(&basis.frame_generators) {
                assert!(sp_residual(g, &f) == 0.0);
            }
        }
    }

    #[test]
    fn e0_single_entry() {
        let f = form(2);
        let e0 = frame_generator(&f, 2);
        let nonzero: Vec<_> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| e0[(i, j)] != 0.0)
            .collect();
        assert_eq!(nonzero, vec![(3, 0)]);
    }

    #[test]
    fn block_roundtrip() {
        let f = form(3);
        let dims = f.dims();
        let params: Vec<f64> =
            (0..SpBlock::<f64>::parameter_count(dims)).map(|i| (i as f64 * 0.37).sin()).collect();
        let blk = SpBlock::from_parameters(dims, &params).unwrap();
        let back = SpBlock::from_matrix(&blk.to_matrix(&f), &f);
        let err = back
            .to_parameters()
            .iter()
            .zip(&params)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-15);
    }

    #[test]
    fn symplectic_checks() {
        let f = form(2);
        assert!(is_symplectic(&Matrix::identity(4), &f, 1e-12).unwrap());
        let g = frame_generator(&f, 2).scale(0.7);
        assert!(is_symplectic(&g.exp(), &f, 1e-10).unwrap());
        let mut p = Matrix::identity(4);
        p[(0, 1)] += 0.1;
        assert!(!is_symplectic(&p, &f, 1e-10).unwrap());
        assert!(is_symplectic(&Matrix::<f64>::identity(3), &f, 1e-10).is_err());
    }
}
