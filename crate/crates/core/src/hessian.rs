//! The contact Hessian on weight-one densities, its transform under a
//! contactomorphism, reconstruction of the map from kernel ratios and the
//! infinitesimal action of `𝔰𝔭(n, ℝ)` on densities.

use std::sync::Arc;

use crate::algebra::{SpBlock, SymplecticForm};
use crate::error::{Error, Result};
use crate::flat_model::{conformal_factor_jet, ContactMap};
use crate::jets::{FlatFrame, FrameDerivativeField, Jet, Polynomial, ScalarField, MAX_ORDER};
use crate::matrix::Matrix;
use crate::scalar::{Field, Real};
use crate::schwarzian::schwarzian_jets;
use crate::tensor::Tensor;

const WEIGHT_EPSILON: f64 = 1e-12;

/// A density of weight `λ`, represented in the trivialization by `θ`.
#[derive(Clone)]
pub struct DensityField<T: Field> {
    weight: T,
    rep: Arc<dyn ScalarField<T>>,
}

impl<T: Field> DensityField<T> {
    pub fn new(weight: T, rep: Arc<dyn ScalarField<T>>) -> Self {
        DensityField { weight, rep }
    }

    pub fn from_polynomial(weight: T, p: Polynomial<T>) -> Self {
        DensityField { weight, rep: Arc::new(p) }
    }

    pub fn weight(&self) -> T {
        self.weight
    }

    pub fn rep(&self) -> &Arc<dyn ScalarField<T>> {
        &self.rep
    }

    pub fn jet_at(&self, x: &[T], order: usize) -> Result<Jet<T>> {
        self.rep.jet_at(x, order)
    }

    pub fn value_at(&self, x: &[T]) -> Result<T> {
        self.rep.value_at(x)
    }

    fn require_weight_one(&self) -> Result<()> {
        let w = self.weight - T::one();
        if w.magnitude() > WEIGHT_EPSILON {
            return Err(Error::Weight { found: self.weight.approx(), expected: 1.0 });
        }
        Ok(())
    }
}

/// `L_ij u` from the flat-model coordinate formula.
pub fn contact_hessian<T: Field>(u: &DensityField<T>, x: &[T], form: &SymplecticForm<T>) -> Result<Matrix<T>> {
    u.require_weight_one()?;
    let j = u.jet_at(x, 2)?;
    Ok(hessian_from_jet(&j, x, form))
}

fn hessian_from_jet<T: Field>(j: &Jet<T>, x: &[T], form: &SymplecticForm<T>) -> Matrix<T> {
    let m = form.hyperplane_dim();
    let r = m;
    let w = form.omega();
    // ω_ip x^p
    let wx: Vec<T> = (0..m).map(|i| (0..m).fold(T::zero(), |acc, p| acc + w[(i, p)] * x[p])).collect();
    Matrix::from_fn(m, m, |i, k| {
        j.partial(&[i, k])
            + wx[i] * j.partial(&[k, r])
            + wx[k] * j.partial(&[i, r])
            + wx[i] * wx[k] * j.partial(&[r, r])
    })
}

/// `X_(i X_j) u` from iterated flat frame derivatives.
pub fn hessian_from_frames<T: Field>(u: &DensityField<T>, x: &[T], form: &SymplecticForm<T>) -> Result<Matrix<T>> {
    u.require_weight_one()?;
    let frame = FlatFrame::new(form.clone(), x, 2)?;
    let j = u.jet_at(x, 2)?;
    let m = form.hyperplane_dim();
    let first: Vec<Jet<T>> = (0..m).map(|k| frame.apply(k, &j)).collect::<Result<_>>()?;
    let mut out = Matrix::zeros(m, m);
    let half = T::ratio(1, 2);
    for i in 0..m {
        for k in 0..m {
            let v = frame.apply(i, &first[k])?.value() + frame.apply(k, &first[i])?.value();
            out[(i, k)] = v * half;
        }
    }
    Ok(out)
}

/// Symbolic `X_(i X_j) u` for a polynomial, all pairs `i ≤ j`.
pub fn hessian_polynomials<T: Field>(u: &Polynomial<T>, form: &SymplecticForm<T>) -> Vec<Polynomial<T>> {
    let m = form.hyperplane_dim();
    let first: Vec<Polynomial<T>> = (0..m).map(|k| u.frame_derivative(k, form)).collect();
    let half = T::ratio(1, 2);
    let mut out = Vec::new();
    for i in 0..m {
        for k in i..m {
            out.push(
                first[k].frame_derivative(i, form).add(&first[i].frame_derivative(k, form)).scale(half),
            );
        }
    }
    out
}

/// The densities `1, x^1, …, x^{2n−2}, x^0` spanning the kernel of `L`, in
/// ambient index order.
pub fn kernel_basis<T: Field>(form: &SymplecticForm<T>) -> Vec<Polynomial<T>> {
    let d = form.manifold_dim();
    std::iter::once(Polynomial::constant(d, T::one()))
        .chain((0..d).map(|v| Polynomial::variable(d, v)))
        .collect()
}

/// All monomials of total degree `≤ degree` in `dim` variables.
pub fn monomials<T: Field>(dim: usize, degree: usize) -> Vec<Polynomial<T>> {
    fn rec(dim: usize, left: usize, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == dim {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=left {
            prefix.push(e as u8);
            rec(dim, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut exps = Vec::new();
    rec(dim, degree, &mut Vec::new(), &mut exps);
    exps.into_iter().map(|e| Polynomial::monomial(dim, T::one(), &e)).collect()
}

/// Dimension of the kernel of `L` restricted to polynomials of degree
/// `≤ degree`, by rank of the coefficient matrix (`tol = 0` for exact scalars).
pub fn hessian_kernel_dimension<T: Field>(form: &SymplecticForm<T>, degree: usize, tol: f64) -> usize {
    let basis = monomials::<T>(form.manifold_dim(), degree);
    let images: Vec<Vec<Polynomial<T>>> = basis.iter().map(|b| hessian_polynomials(b, form)).collect();
    let mut keys: Vec<(usize, Vec<u8>)> = Vec::new();
    for img in &images {
        for (slot, p) in img.iter().enumerate() {
            for (k, _) in p.terms() {
                keys.push((slot, k.to_vec()));
            }
        }
    }
    keys.sort();
    keys.dedup();
    let mat = Matrix::from_fn(keys.len().max(1), basis.len(), |row, col| {
        keys.get(row).map_or(T::zero(), |(slot, k)| images[col][*slot].coefficient(k))
    });
    basis.len() - mat.rank(tol)
}

/// `S_ij^k` to first order at `x`, with `X_p S_ij^p`.
struct SchwarzianData<T> {
    s: Tensor<T>,
    divergence: Matrix<T>,
}

fn schwarzian_data<T: Real>(phi: &ContactMap<T>, x: &[T]) -> Result<SchwarzianData<T>> {
    let form = phi.form();
    let m = form.hyperplane_dim();
    let sj = schwarzian_jets(phi, x, 1)?;
    let frame = FlatFrame::new(form.clone(), x, 1)?;
    let mut divergence = Matrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let mut acc = T::zero();
            for p in 0..m {
                acc += frame.apply(p, sj.get(&[i, j, p]))?.value();
            }
            divergence[(i, j)] = acc;
        }
    }
    Ok(SchwarzianData { s: sj.values(), divergence })
}

/// `^φL_ij u = L_ij u − S_ij^k X_k u + (1/2n)(X_p S_ij^p − S_qj^p S_ip^q) u`.
pub fn transformed_hessian<T: Real>(phi: &ContactMap<T>, u: &DensityField<T>, x: &[T]) -> Result<Matrix<T>> {
    u.require_weight_one()?;
    let form = phi.form();
    let m = form.hyperplane_dim();
    let data = schwarzian_data(phi, x)?;
    let j = u.jet_at(x, 2)?;
    let frame = FlatFrame::new(form.clone(), x, 2)?;
    let xu: Vec<T> = (0..m).map(|k| Ok(frame.apply(k, &j)?.value())).collect::<Result<_>>()?;
    let l = hessian_from_jet(&j, x, form);
    let inv_2n = T::one() / T::from_i64(2 * form.dims().n() as i64);
    let uv = j.value();
    Ok(Matrix::from_fn(m, m, |i, k| {
        let mut v = l[(i, k)];
        for q in 0..m {
            v -= *data.s.get(&[i, k, q]) * xu[q];
        }
        let mut quad = T::zero();
        for p in 0..m {
            for q in 0..m {
                quad += *data.s.get(&[q, k, p]) * *data.s.get(&[i, p, q]);
            }
        }
        v + inv_2n * (data.divergence[(i, k)] - quad) * uv
    }))
}

/// Residual of `X_iX_j f + X_jX_i f = 2S_ij^p X_p f − (1/n)(X_p S_ij^p − S_pi^q S_qj^p) f`
/// with the zeroth-order term carrying the factor `f`.
pub fn schwarzian_pde_residual<T: Real>(phi: &ContactMap<T>, f: &DensityField<T>, x: &[T]) -> Result<f64> {
    let form = phi.form();
    let m = form.hyperplane_dim();
    let data = schwarzian_data(phi, x)?;
    let frame = FlatFrame::new(form.clone(), x, 2)?;
    let j = f.jet_at(x, 2)?;
    let first: Vec<Jet<T>> = (0..m).map(|k| frame.apply(k, &j)).collect::<Result<_>>()?;
    let inv_n = T::one() / T::from_i64(form.dims().n() as i64);
    let two = T::from_i64(2);
    let mut worst = 0.0f64;
    for i in 0..m {
        for k in 0..m {
            let lhs = frame.apply(i, &first[k])?.value() + frame.apply(k, &first[i])?.value();
            let mut rhs = T::zero();
            let mut quad = T::zero();
            for p in 0..m {
                rhs += two * *data.s.get(&[i, k, p]) * first[p].value();
                for q in 0..m {
                    quad += *data.s.get(&[p, i, q]) * *data.s.get(&[q, k, p]);
                }
            }
            rhs -= inv_n * (data.divergence[(i, k)] - quad) * j.value();
            worst = worst.max((lhs - rhs).as_f64().abs());
        }
    }
    Ok(worst)
}

/// The conformal factor `c` of `φ*θ = cθ` as a field.
pub struct ConformalFactorField<T: Real> {
    map: ContactMap<T>,
}

impl<T: Real> ConformalFactorField<T> {
    pub fn new(map: ContactMap<T>) -> Self {
        ConformalFactorField { map }
    }
}

impl<T: Real> ScalarField<T> for ConformalFactorField<T> {
    fn dim(&self) -> usize {
        self.map.form().manifold_dim()
    }

    fn eval(&self, inputs: &[Jet<T>]) -> Result<Jet<T>> {
        let order = inputs.iter().map(Jet::order).min().unwrap_or(0);
        if order + 1 > MAX_ORDER {
            return Err(Error::OrderBudget { needed: order + 1, max: MAX_ORDER });
        }
        let base: Vec<T> = inputs.iter().map(Jet::value).collect();
        let phi = self.map.jets_at(&base, order + 1)?;
        Ok(conformal_factor_jet(self.map.form(), &phi).compose(inputs))
    }
}

/// `x ↦ c(x)^e · rep(φ(x))`.
pub struct PulledBackField<T: Real> {
    map: ContactMap<T>,
    factor: ConformalFactorField<T>,
    inner: Arc<dyn ScalarField<T>>,
    exponent: T,
}

impl<T: Real> ScalarField<T> for PulledBackField<T> {
    fn dim(&self) -> usize {
        self.map.form().manifold_dim()
    }

    fn eval(&self, inputs: &[Jet<T>]) -> Result<Jet<T>> {
        let phi = self.map.eval(inputs)?;
        let composed = self.inner.eval(&phi)?;
        if self.exponent == T::zero() {
            return Ok(composed);
        }
        let c = self.factor.eval(inputs)?;
        if !(c.value() > T::zero()) {
            return Err(Error::DegenerateMap(format!(
                "conformal factor {:e} is not positive",
                c.value().as_f64()
            )));
        }
        Ok(&c.powf(self.exponent) * &composed)
    }
}

/// `φ*u` with the density factor `c^{exponent}`.
pub fn pullback_density_with_exponent<T: Real>(phi: &ContactMap<T>, u: &DensityField<T>, exponent: T) -> DensityField<T> {
    DensityField {
        weight: u.weight,
        rep: Arc::new(PulledBackField {
            map: phi.clone(),
            factor: ConformalFactorField::new(phi.clone()),
            inner: u.rep.clone(),
            exponent,
        }),
    }
}

/// The exponent of `c` carried by the pullback of a density of weight `λ`.
pub fn density_exponent<T: Real>(weight: T) -> T {
    -weight / T::from_i64(2)
}

/// `φ*u` on densities of weight `λ`: `c^{−λ/2} · u∘φ`.
pub fn pullback_density<T: Real>(phi: &ContactMap<T>, u: &DensityField<T>) -> DensityField<T> {
    pullback_density_with_exponent(phi, u, density_exponent(u.weight))
}

/// Pulled-back kernel data at a point.
#[derive(Clone, Debug)]
pub struct Reconstruction<T> {
    /// `f^∞, f^1, …, f^{2n−2}, f^0` at `x`.
    pub f: Vec<T>,
    /// `f^α / f^∞` in the order `1, …, 2n−2, 0`.
    pub ratios: Vec<T>,
    /// `max |f^α/f^∞ − φ^α(x)|`.
    pub ratio_residual: f64,
    /// Largest entry of `^φL f` over the `2n` pulled-back densities.
    pub kernel_residual: f64,
    /// Largest residual of the second-order system over the `2n` densities.
    pub pde_residual: f64,
}

pub fn reconstruct_ratio<T: Real>(phi: &ContactMap<T>, x: &[T]) -> Result<Reconstruction<T>> {
    let form = phi.form();
    let basis = kernel_basis(form);
    let mut f = Vec::with_capacity(basis.len());
    let mut kernel_residual = 0.0f64;
    let mut pde_residual = 0.0f64;
    for b in basis {
        let density = pullback_density(phi, &DensityField::from_polynomial(T::one(), b));
        f.push(density.value_at(x)?);
        kernel_residual = kernel_residual.max(transformed_hessian(phi, &density, x)?.max_abs());
        pde_residual = pde_residual.max(schwarzian_pde_residual(phi, &density, x)?);
    }
    if !(f[0].as_f64().abs() > 0.0) {
        return Err(Error::SingularPoint("f^∞ vanishes".into()));
    }
    let ratios: Vec<T> = f[1..].iter().map(|&v| v / f[0]).collect();
    let y = phi.apply(x)?;
    let ratio_residual = ratios.iter().zip(&y).fold(0.0f64, |acc, (&r, &v)| acc.max((r - v).as_f64().abs()));
    Ok(Reconstruction { f, ratios, ratio_residual, kernel_residual, pde_residual })
}

/// Largest `^φL` entry over the `2n` kernel densities pulled back with the
/// factor `c^{exponent}` instead of the weight-determined one.
pub fn kernel_residual_with_exponent<T: Real>(phi: &ContactMap<T>, x: &[T], exponent: T) -> Result<f64> {
    let mut worst = 0.0f64;
    for b in kernel_basis(phi.form()) {
        let density = pullback_density_with_exponent(phi, &DensityField::from_polynomial(T::one(), b), exponent);
        worst = worst.max(transformed_hessian(phi, &density, x)?.max_abs());
    }
    Ok(worst)
}

/// Coefficients of `X^h = G^p X_p + F X_0` for an `𝔰𝔭` element.
#[derive(Clone, Debug)]
pub struct ActionCoefficients<T> {
    pub hyperplane: Vec<Polynomial<T>>,
    pub reeb: Polynomial<T>,
    /// `a + c_p x^p + c_0 x^0`.
    pub weight_term: Polynomial<T>,
}

pub fn action_coefficients<T: Field>(h: &SpBlock<T>, form: &SymplecticForm<T>) -> ActionCoefficients<T> {
    let m = form.hyperplane_dim();
    let d = m + 1;
    let x = |v: usize| Polynomial::variable(d, v);
    let k = |v: T| Polynomial::constant(d, v);
    let half = T::ratio(1, 2);
    let b_low = h.b_lower(form);
    let c_up = h.c_upper(form);
    let a_mixed = h.a_mixed(form);
    // c_q x^q + c_0 x^0
    let mut cx = x(m).scale(h.c0);
    for q in 0..m {
        cx = cx.add(&x(q).scale(h.c[q]));
    }
    let mut reeb = k(-half * h.b0).add(&x(m).scale(h.a)).add(&x(m).mul(&x(m)).scale(half * h.c0));
    for p in 0..m {
        reeb = reeb.add(&x(p).scale(b_low[p])).add(&x(p).mul(&x(m)).scale(h.c[p]));
        for q in 0..m {
            reeb = reeb.add(&x(p).mul(&x(q)).scale(half * h.s[(p, q)]));
        }
    }
    let hyperplane = (0..m)
        .map(|p| {
            let mut g = k(-h.b[p]).sub(&x(m).scale(c_up[p])).add(&cx.mul(&x(p)));
            for q in 0..m {
                let coeff = if p == q { h.a } else { T::zero() } - a_mixed[(q, p)];
                g = g.add(&x(q).scale(coeff));
            }
            g
        })
        .collect();
    let weight_term = cx.add(&k(h.a));
    ActionCoefficients { hyperplane, reeb, weight_term }
}

/// `D^h_λ u = X^h u − λ(a + c_p x^p + c_0 x^0) u` on a polynomial.
pub fn infinitesimal_action<T: Field>(h: &SpBlock<T>, weight: T, u: &Polynomial<T>, form: &SymplecticForm<T>) -> Polynomial<T> {
    let coeffs = action_coefficients(h, form);
    let m = form.hyperplane_dim();
    let mut out = coeffs.reeb.mul(&u.frame_derivative(m, form));
    for p in 0..m {
        out = out.add(&coeffs.hyperplane[p].mul(&u.frame_derivative(p, form)));
    }
    out.sub(&coeffs.weight_term.mul(u).scale(weight))
}

/// `D^h_λ u` for a density given by an arbitrary field, evaluated through jets.
pub struct InfinitesimalActionField<T: Field> {
    coeffs: ActionCoefficients<T>,
    weight: T,
    frame_derivatives: Vec<FrameDerivativeField<T, Arc<dyn ScalarField<T>>>>,
    inner: Arc<dyn ScalarField<T>>,
}

impl<T: Field> InfinitesimalActionField<T> {
    pub fn new(h: &SpBlock<T>, u: &DensityField<T>, form: &SymplecticForm<T>) -> Self {
        let d = form.manifold_dim();
        InfinitesimalActionField {
            coeffs: action_coefficients(h, form),
            weight: u.weight,
            frame_derivatives: (0..d)
                .map(|a| FrameDerivativeField::new(u.rep.clone(), a, form.clone()))
                .collect(),
            inner: u.rep.clone(),
        }
    }

    pub fn into_density(self) -> DensityField<T> {
        let w = self.weight;
        DensityField::new(w, Arc::new(self))
    }
}

impl<T: Field> ScalarField<T> for InfinitesimalActionField<T> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, inputs: &[Jet<T>]) -> Result<Jet<T>> {
        let m = self.frame_derivatives.len() - 1;
        let mut acc = &self.coeffs.reeb.eval(inputs)? * &self.frame_derivatives[m].eval(inputs)?;
        for p in 0..m {
            acc += &(&self.coeffs.hyperplane[p].eval(inputs)? * &self.frame_derivatives[p].eval(inputs)?);
        }
        let u = self.inner.eval(inputs)?;
        acc -= &(&self.coeffs.weight_term.eval(inputs)? * &u).scale(self.weight);
        Ok(acc)
    }
}

/// `D^{h1} D^{h2} − D^{h2} D^{h1} − sign · D^{[h1, h2]}` on `u`, with
/// `[h1, h2] = h1 h2 − h2 h1`.
pub fn commutator_defect<T: Field>(
    h1: &SpBlock<T>,
    h2: &SpBlock<T>,
    weight: T,
    u: &Polynomial<T>,
    form: &SymplecticForm<T>,
    sign: T,
) -> Polynomial<T> {
    let d = |h: &SpBlock<T>, p: &Polynomial<T>| infinitesimal_action(h, weight, p, form);
    let bracket = h1.to_matrix(form).commutator(&h2.to_matrix(form));
    let h12 = SpBlock::from_matrix(&bracket, form);
    d(h1, &d(h2, u)).sub(&d(h2, &d(h1, u))).sub(&d(&h12, u).scale(sign))
}

/// The sign `σ` with `[D^{h1}, D^{h2}] = σ D^{[h1, h2]}`.
pub const COMMUTATOR_SIGN: i64 = 1;
