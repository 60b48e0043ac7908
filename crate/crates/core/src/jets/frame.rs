use super::jet::Jet;
use crate::algebra::SymplecticForm;
use crate::error::{Error, Result};
use crate::scalar::Field;

/// The left-invariant frame `X_i = ∂_i + ω_ip x^p ∂_0`, `X_0 = 2∂_0` acting on
/// jets expanded around a fixed base point.
///
/// Coordinates are ordered `(x^1, …, x^{2n−2}, x^0)`, so the Reeb index is
/// `2n − 2`.
#[derive(Clone, Debug)]
pub struct FlatFrame<T: Field> {
    form: SymplecticForm<T>,
    coords: Vec<Jet<T>>,
}

impl<T: Field> FlatFrame<T> {
    pub fn new(form: SymplecticForm<T>, point: &[T], order: usize) -> Result<Self> {
        if point.len() != form.manifold_dim() {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, expected {}",
                point.len(),
                form.manifold_dim()
            )));
        }
        Ok(FlatFrame { coords: Jet::coordinates(point, order), form })
    }

    pub fn form(&self) -> &SymplecticForm<T> {
        &self.form
    }

    /// Coordinate jets at the base point.
    pub fn coordinates(&self) -> &[Jet<T>] {
        &self.coords
    }

    pub fn point(&self) -> Vec<T> {
        self.coords.iter().map(Jet::value).collect()
    }

    pub fn reeb(&self) -> usize {
        self.form.hyperplane_dim()
    }

    /// `X_alpha(f)`, one order lower than `f`.
    pub fn apply(&self, alpha: usize, f: &Jet<T>) -> Result<Jet<T>> {
        if f.order() == 0 {
            return Err(Error::OrderBudget { needed: 1, max: 0 });
        }
        let reeb = self.reeb();
        let d0 = f.derivative(reeb);
        if alpha == reeb {
            return Ok(d0.scale(T::from_i64(2)));
        }
        let mut out = f.derivative(alpha);
        let order = out.order();
        for p in 0..reeb {
            let w = self.form.omega()[(alpha, p)];
            if w != T::zero() {
                out += &(&self.coords[p].truncate(order) * &d0).scale(w);
            }
        }
        Ok(out)
    }

    /// `X_alpha` applied to each jet.
    pub fn apply_all(&self, alpha: usize, fs: &[Jet<T>]) -> Result<Vec<Jet<T>>> {
        fs.iter().map(|f| self.apply(alpha, f)).collect()
    }
}
