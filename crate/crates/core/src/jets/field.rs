use std::collections::BTreeMap;
use std::sync::Arc;

use super::frame::FlatFrame;
use super::jet::Jet;
use super::layout::MAX_ORDER;
use crate::algebra::SymplecticForm;
use crate::error::{Error, Result};
use crate::scalar::Field;

/// A function on `ℝ^d` that can be evaluated on jets.
///
/// `eval` substitutes jets for the variables, so composing a field with a
/// map is just `field.eval(&map_jets)`.
pub trait ScalarField<T: Field>: Send + Sync {
    fn dim(&self) -> usize;

    fn eval(&self, inputs: &[Jet<T>]) -> Result<Jet<T>>;

    /// Value and all partial derivatives up to `order` at `x`.
    fn jet_at(&self, x: &[T], order: usize) -> Result<Jet<T>> {
        if order > MAX_ORDER {
            return Err(Error::OrderBudget { needed: order, max: MAX_ORDER });
        }
        if x.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, field expects {}",
                x.len(),
                self.dim()
            )));
        }
        self.eval(&Jet::coordinates(x, order))
    }

    fn value_at(&self, x: &[T]) -> Result<T> {
        Ok(self.jet_at(x, 0)?.value())
    }
}

impl<T: Field, F: ScalarField<T> + ?Sized> ScalarField<T> for Arc<F> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, inputs: &[Jet<T>]) -> Result<Jet<T>> {
        (**self).eval(inputs)
    }
}

/// Sparse multivariate polynomial, monomials keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    dim: usize,
    terms: BTreeMap<Vec<u8>, T>,
}

impl<T: Field> Polynomial<T> {
    pub fn zero(dim: usize) -> Self {
        Polynomial { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: T) -> Self {
        Self::monomial(dim, c, &vec![0; dim])
    }

    pub fn variable(dim: usize, var: usize) -> Self {
        let mut exps = vec![0; dim];
        exps[var] = 1;
        Self::monomial(dim, T::one(), &exps)
    }

    pub fn monomial(dim: usize, coeff: T, exponents: &[u8]) -> Self {
        assert_eq!(exponents.len(), dim, "exponent vector length mismatch");
        let mut p = Self::zero(dim);
        p.add_term(coeff, exponents.to_vec());
        p
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (T, Vec<u8>)>) -> Result<Self> {
        let mut p = Self::zero(dim);
        for (c, exps) in terms {
            if exps.len() != dim {
                return Err(Error::Shape(format!(
                    "monomial has {} exponents, expected {dim}",
                    exps.len()
                )));
            }
            p.add_term(c, exps);
        }
        Ok(p)
    }

    fn add_term(&mut self, coeff: T, exps: Vec<u8>) {
        if coeff == T::zero() {
            return;
        }
        let v = self.terms.get(&exps).copied().unwrap_or_else(T::zero) + coeff;
        if v == T::zero() {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], T)> {
        self.terms.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|k| k.iter().map(|&e| e as usize).sum()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, exponents: &[u8]) -> T {
        self.terms.get(exponents).copied().unwrap_or_else(T::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, &v) in &other.terms {
            out.add_term(v, k.clone());
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, &v) in &self.terms {
            out.add_term(v * s, k.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-T::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (ka, &va) in &self.terms {
            for (kb, &vb) in &other.terms {
                let exps = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                out.add_term(va * vb, exps);
            }
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, &v) in &self.terms {
            if k[var] == 0 {
                continue;
            }
            let mut exps = k.clone();
            exps[var] -= 1;
            out.add_term(v * T::from_i64(k[var] as i64), exps);
        }
        out
    }

    pub fn evaluate(&self, x: &[T]) -> T {
        self.terms.iter().fold(T::zero(), |acc, (k, &v)| {
            let mut term = v;
            for (xi, &e) in x.iter().zip(k) {
                for _ in 0..e {
                    term *= *xi;
                }
            }
            acc + term
        })
    }

    /// Applies the flat frame field `X_alpha` symbolically.
    pub fn frame_derivative(&self, alpha: usize, form: &SymplecticForm<T>) -> Self {
        let reeb = form.hyperplane_dim();
        let d0 = self.derivative(reeb);
        if alpha == reeb {
            return d0.scale(T::from_i64(2));
        }
        let mut out = self.derivative(alpha);
        for p in 0..reeb {
            let w = form.omega()[(alpha, p)];
            if w != T::zero() {
                out = out.add(&Polynomial::variable(self.dim, p).mul(&d0).scale(w));
            }
        }
        out
    }
}

impl<T: Field> ScalarField<T> for Polynomial<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, inputs: &[Jet<T>]) -> Result<Jet<T>> {
        if inputs.len() != self.dim {
            return Err(Error::Dimension(format!(
                "polynomial in {} variables given {} inputs",
                self.dim,
                inputs.len()
            )));
        }
        let proto = inputs
            .first()
            .ok_or_else(|| Error::Dimension("polynomial in zero variables".into()))?;
        let mut acc = proto.zero_like();
        for (k, &v) in &self.terms {
            let mut term = proto.constant_like(v);
            for (x, &e) in inputs.iter().zip(k) {
                if e > 0 {
                    term = &term * &x.powi(e as i32);
                }
            }
            acc += &term;
        }
        Ok(acc)
    }
}

/// Dense univariate polynomial with ascending coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly1<T> {
    coeffs: Vec<T>,
}

impl<T: Field> Poly1<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Poly1 { coeffs }
    }

    pub fn zero() -> Self {
        Poly1 { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == T::zero())
    }

    pub fn neg(&self) -> Self {
        Poly1 { coeffs: self.coeffs.iter().map(|&c| -c).collect() }
    }

    pub fn derivative(&self) -> Self {
        Poly1 {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| c * T::from_i64(j as i64))
                .collect(),
        }
    }

    /// The primitive `k` with `k′(s) = s·h′(s) − h(s)` and `k(0) = 0`.
    pub fn shear_primitive(&self) -> Self {
        let mut coeffs = vec![T::zero(); self.coeffs.len() + 1];
        for (j, &a) in self.coeffs.iter().enumerate() {
            // s h′ − h contributes (j − 1) a_j s^j
            coeffs[j + 1] = a * T::ratio(j as i64 - 1, j as i64 + 1);
        }
        Poly1 { coeffs }
    }

    pub fn evaluate(&self, s: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * s + c)
    }

    pub fn eval_jet(&self, s: &Jet<T>) -> Jet<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(s.zero_like(), |acc, &c| (&acc * s).add_scalar(c))
    }
}

/// `X_α(f)` of another field, itself evaluable on jets.
///
/// Each evaluation consumes one extra jet order of the inner field, so
/// iterated frame derivatives are limited by [`MAX_ORDER`].
pub struct FrameDerivativeField<T: Field, F> {
    inner: F,
    alpha: usize,
    form: SymplecticForm<T>,
}

impl<T: Field, F: ScalarField<T>> FrameDerivativeField<T, F> {
    pub fn new(inner: F, alpha: usize, form: SymplecticForm<T>) -> Self {
        FrameDerivativeField { inner, alpha, form }
    }
}

impl<T: Field, F: ScalarField<T>> ScalarField<T> for FrameDerivativeField<T, F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, inputs: &[Jet<T>]) -> Result<Jet<T>> {
        let order = inputs.iter().map(Jet::order).min().unwrap_or(0);
        if order + 1 > MAX_ORDER {
            return Err(Error::OrderBudget { needed: order + 1, max: MAX_ORDER });
        }
        let base: Vec<T> = inputs.iter().map(Jet::value).collect();
        let frame = FlatFrame::new(self.form.clone(), &base, order + 1)?;
        let inner = self.inner.jet_at(&base, order + 1)?;
        let xf = frame.apply(self.alpha, &inner)?;
        Ok(xf.compose(inputs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn product_field_jet() {
        let f = Polynomial::monomial(3, 1.0, &[1, 1, 0]);
        let j = f.jet_at(&[1.0, 2.0, 0.0], 2).unwrap();
        assert_eq!(j.value(), 2.0);
        assert_eq!(j.gradient(), vec![2.0, 1.0, 0.0]);
        let h = j.hessian();
        assert_eq!(h[0][1], 1.0);
        assert_eq!(h[1][0], 1.0);
        assert_eq!(h[0][0], 0.0);
        assert_eq!(h[2][2], 0.0);
    }

    #[test]
    fn shear_primitive_of_square() {
        let r = Rational64::from_integer;
        let h = Poly1::new(vec![r(0), r(0), r(1)]);
        let k = h.shear_primitive();
        assert_eq!(k.evaluate(r(3)), r(9));
        assert_eq!(k.coeffs()[3], Rational64::new(1, 3));
    }

    #[test]
    fn exact_rational_jets() {
        let r = Rational64::from_integer;
        let f = Polynomial::monomial(2, r(1), &[3, 1]);
        let j = f.jet_at(&[r(2), r(1)], 4).unwrap();
        assert_eq!(j.partial(&[0, 0, 0, 1]), r(6));
        assert_eq!(j.partial(&[0, 0, 1]), r(12));
    }
}
