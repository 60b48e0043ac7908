use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use super::layout::Layout;
use crate::scalar::{Field, Real};

/// Truncated multivariate Taylor polynomial: the value of a function at a
/// point together with all of its partial derivatives up to `order`.
///
/// Coefficients are Taylor coefficients `∂^m f / m!` indexed by the
/// monomials of the shared [`Layout`].
#[derive(Clone)]
pub struct Jet<T> {
    layout: Arc<Layout>,
    coeffs: Vec<T>,
}

impl<T: Field> Jet<T> {
    pub fn from_coeffs(layout: Arc<Layout>, coeffs: Vec<T>) -> Self {
        assert_eq!(layout.len(), coeffs.len(), "coefficient count does not match layout");
        Jet { layout, coeffs }
    }

    pub fn constant(dim: usize, order: usize, value: T) -> Self {
        let layout = Layout::get(dim, order);
        let mut coeffs = vec![T::zero(); layout.len()];
        coeffs[0] = value;
        Jet { layout, coeffs }
    }

    /// The coordinate function `x_var` expanded around `value`.
    pub fn variable(dim: usize, order: usize, value: T, var: usize) -> Self {
        let mut jet = Self::constant(dim, order, value);
        if order > 0 {
            jet.coeffs[1 + var] = T::one();
        }
        jet
    }

    /// Jets of every coordinate function at `point`.
    pub fn coordinates(point: &[T], order: usize) -> Vec<Self> {
        (0..point.len())
            .map(|i| Self::variable(point.len(), order, point[i], i))
            .collect()
    }

    /// Constant with the same dimension and order as `self`.
    pub fn constant_like(&self, value: T) -> Self {
        let mut coeffs = vec![T::zero(); self.coeffs.len()];
        coeffs[0] = value;
        Jet { layout: self.layout.clone(), coeffs }
    }

    pub fn zero_like(&self) -> Self {
        self.constant_like(T::zero())
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn order(&self) -> usize {
        self.layout.order()
    }

    pub fn value(&self) -> T {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Taylor coefficient of the monomial with the given exponents.
    pub fn coefficient(&self, exponents: &[u8]) -> T {
        self.layout
            .index_of(exponents)
            .map(|i| self.coeffs[i])
            .unwrap_or_else(T::zero)
    }

    /// Partial derivative `∂_{vars[0]} ∂_{vars[1]} ... f` at the base point.
    pub fn partial(&self, vars: &[usize]) -> T {
        let mut exps = vec![0u8; self.dim()];
        for &v in vars {
            exps[v] += 1;
        }
        let mut factor = T::one();
        for &e in &exps {
            for k in 2..=e as i64 {
                factor *= T::from_i64(k);
            }
        }
        self.coefficient(&exps) * factor
    }

    pub fn gradient(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.partial(&[i])).collect()
    }

    pub fn hessian(&self) -> Vec<Vec<T>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.partial(&[i, j])).collect())
            .collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        if order >= self.order() {
            return self.clone();
        }
        let layout = Layout::get(self.dim(), order);
        let coeffs = self.coeffs[..layout.len()].to_vec();
        Jet { layout, coeffs }
    }

    /// `∂f/∂x_var` as a jet one order lower.
    ///
    /// Panics on an order-0 jet; callers budget orders up front.
    pub fn derivative(&self, var: usize) -> Self {
        assert!(self.order() > 0, "cannot differentiate an order-0 jet");
        let layout = Layout::get(self.dim(), self.order() - 1);
        let mut coeffs = vec![T::zero(); layout.len()];
        for &(src, dst, factor) in self.layout.derivative_table(var) {
            coeffs[dst as usize] = self.coeffs[src as usize] * T::from_i64(factor as i64);
        }
        Jet { layout, coeffs }
    }

    pub fn scale(&self, factor: T) -> Self {
        Jet {
            layout: self.layout.clone(),
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    pub fn add_scalar(&self, value: T) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += value;
        out
    }

    fn binary_layout(&self, other: &Self) -> (Arc<Layout>, usize) {
        assert_eq!(self.dim(), other.dim(), "jet dimension mismatch");
        if self.order() <= other.order() {
            (self.layout.clone(), self.coeffs.len())
        } else {
            (other.layout.clone(), other.coeffs.len())
        }
    }

    fn add_ref(&self, other: &Self) -> Self {
        let (layout, len) = self.binary_layout(other);
        let coeffs = (0..len).map(|i| self.coeffs[i] + other.coeffs[i]).collect();
        Jet { layout, coeffs }
    }

    fn sub_ref(&self, other: &Self) -> Self {
        let (layout, len) = self.binary_layout(other);
        let coeffs = (0..len).map(|i| self.coeffs[i] - other.coeffs[i]).collect();
        Jet { layout, coeffs }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let (layout, len) = self.binary_layout(other);
        let mut coeffs = vec![T::zero(); len];
        for &(a, b, c) in layout.products() {
            let (a, b) = (a as usize, b as usize);
            coeffs[c as usize] += self.coeffs[a] * other.coeffs[b];
        }
        Jet { layout, coeffs }
    }

    /// The part of the jet without its constant term.
    fn nilpotent(&self) -> Self {
        let mut h = self.clone();
        h.coeffs[0] = T::zero();
        h
    }

    /// `1/f`. Returns `None` when the value is exactly zero.
    pub fn checked_recip(&self) -> Option<Self> {
        let v = self.value();
        if v == T::zero() {
            return None;
        }
        Some(self.recip_unchecked(v))
    }

    fn recip_unchecked(&self, v: T) -> Self {
        // 1/(v + h) = (1/v) Σ_k (-h/v)^k, truncated at the jet order
        let inv = T::one() / v;
        let q = self.nilpotent().scale(-inv);
        let mut acc = self.constant_like(T::one());
        for _ in 0..self.order() {
            acc = (&q * &acc).add_scalar(T::one());
        }
        acc.scale(inv)
    }

    pub fn powi(&self, exponent: i32) -> Self {
        if exponent < 0 {
            return self.recip_unchecked(self.value()).powi(-exponent);
        }
        let mut result = self.constant_like(T::one());
        let mut base = self.clone();
        let mut e = exponent as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Substitute `inputs` for the variables of `self`.
    ///
    /// `self` is read as a Taylor polynomial around the values of `inputs`;
    /// the result has the order of the lower of the two.
    pub fn compose(&self, inputs: &[Jet<T>]) -> Jet<T> {
        assert_eq!(inputs.len(), self.dim(), "composition arity mismatch");
        let order = inputs.iter().map(Jet::order).min().unwrap_or(0).min(self.order());
        let proto = inputs
            .first()
            .map(|j| j.truncate(order))
            .unwrap_or_else(|| Jet::constant(0, order, T::zero()));
        let deltas: Vec<Jet<T>> = inputs.iter().map(|j| j.truncate(order).nilpotent()).collect();
        let mut powers: Vec<Vec<Jet<T>>> = Vec::with_capacity(deltas.len());
        for d in &deltas {
            let mut row = vec![proto.constant_like(T::one())];
            for k in 1..=order {
                let next = &row[k - 1] * d;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = proto.zero_like();
        let len = self.layout.prefix_len(order);
        for (idx, exps) in self.layout.exponents()[..len].iter().enumerate() {
            let c = self.coeffs[idx];
            if c == T::zero() {
                continue;
            }
            let mut term: Option<Jet<T>> = None;
            for (var, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = &powers[var][e as usize];
                term = Some(match term {
                    None => p.clone(),
                    Some(t) => &t * p,
                });
            }
            match term {
                None => out.coeffs[0] += c,
                Some(t) => out += &t.scale(c),
            }
        }
        out
    }

    pub fn max_coeff_magnitude(&self) -> f64 {
        self.coeffs.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }
}

impl<T: Real> Jet<T> {
    /// `f^e` for real `e`, via the binomial series around the value.
    pub fn powf(&self, exponent: T) -> Self {
        let v = self.value();
        let h = self.nilpotent();
        let mut result = self.constant_like(v.powf(exponent));
        let mut h_power = self.constant_like(T::one());
        let mut binom = T::one();
        for k in 1..=self.order() {
            let kk = T::from_i64(k as i64);
            binom = binom * (exponent - kk + T::one()) / kk;
            h_power = &h_power * &h;
            result += &h_power.scale(binom * v.powf(exponent - kk));
        }
        result
    }

    pub fn sqrt(&self) -> Self {
        self.powf(T::from_f64(0.5))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }
}

impl<T: Field> fmt::Debug for Jet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("dim", &self.dim())
            .field("order", &self.order())
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

macro_rules! jet_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl<T: Field> $trait<&Jet<T>> for &Jet<T> {
            type Output = Jet<T>;
            fn $method(self, rhs: &Jet<T>) -> Jet<T> {
                self.$inner(rhs)
            }
        }
        impl<T: Field> $trait<Jet<T>> for Jet<T> {
            type Output = Jet<T>;
            fn $method(self, rhs: Jet<T>) -> Jet<T> {
                self.$inner(&rhs)
            }
        }
        impl<T: Field> $trait<&Jet<T>> for Jet<T> {
            type Output = Jet<T>;
            fn $method(self, rhs: &Jet<T>) -> Jet<T> {
                self.$inner(rhs)
            }
        }
        impl<T: Field> $trait<Jet<T>> for &Jet<T> {
            type Output = Jet<T>;
            fn $method(self, rhs: Jet<T>) -> Jet<T> {
                self.$inner(&rhs)
            }
        }
    };
}

jet_binop!(Add, add, add_ref);
jet_binop!(Sub, sub, sub_ref);
jet_binop!(Mul, mul, mul_ref);

impl<T: Field> Jet<T> {
    fn div_ref(&self, rhs: &Jet<T>) -> Jet<T> {
        self.mul_ref(&rhs.recip_unchecked(rhs.value()))
    }
}

jet_binop!(Div, div, div_ref);

impl<T: Field> Neg for Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        self.scale(-T::one())
    }
}

impl<T: Field> Neg for &Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        self.scale(-T::one())
    }
}

impl<T: Field> AddAssign<&Jet<T>> for Jet<T> {
    fn add_assign(&mut self, rhs: &Jet<T>) {
        if rhs.order() < self.order() {
            *self = self.truncate(rhs.order());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += *b;
        }
    }
}

impl<T: Field> AddAssign<Jet<T>> for Jet<T> {
    fn add_assign(&mut self, rhs: Jet<T>) {
        *self += &rhs;
    }
}

impl<T: Field> SubAssign<&Jet<T>> for Jet<T> {
    fn sub_assign(&mut self, rhs: &Jet<T>) {
        if rhs.order() < self.order() {
            *self = self.truncate(rhs.order());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= *b;
        }
    }
}

impl<T: Field> MulAssign<T> for Jet<T> {
    fn mul_assign(&mut self, rhs: T) {
        for c in &mut self.coeffs {
            *c *= rhs;
        }
    }
}

impl<T: Field> Mul<T> for Jet<T> {
    type Output = Jet<T>;
    fn mul(self, rhs: T) -> Jet<T> {
        self.scale(rhs)
    }
}

impl<T: Field> Mul<T> for &Jet<T> {
    type Output = Jet<T>;
    fn mul(self, rhs: T) -> Jet<T> {
        self.scale(rhs)
    }
}

impl<T: Field> Add<T> for Jet<T> {
    type Output = Jet<T>;
    fn add(self, rhs: T) -> Jet<T> {
        self.add_scalar(rhs)
    }
}

impl<T: Field> Add<T> for &Jet<T> {
    type Output = Jet<T>;
    fn add(self, rhs: T) -> Jet<T> {
        self.add_scalar(rhs)
    }
}

/// Sum of jets; `None` for an empty iterator.
pub fn sum_jets<T: Field, I: IntoIterator<Item = Jet<T>>>(items: I) -> Option<Jet<T>> {
    let mut iter = items.into_iter();
    let mut acc = iter.next()?;
    for j in iter {
        acc += &j;
    }
    Some(acc)
}
