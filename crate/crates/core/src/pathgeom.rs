//! The contact path reduction: the cubic fiber polynomial `f⁰` and its
//! inverse, the three-dimensional cubic-in-slope geodesic ODE, and the
//! vanishing-contact-torsion identity on the projectivized contact bundle.
//!
//! Contact indices are ordered `(∞, 1, …, 2m−2, 0)`; the fiber coordinate
//! `u^α` of the chart `a^∞ ≠ 0` is polynomial variable `α − 1`.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};

use crate::error::{Error, Result};
use crate::flat_model::ContactMap;
use crate::jets::{Polynomial, ScalarField};
use crate::scalar::{Field, Real};
use crate::schwarzian::schwarzian;
use crate::tensor::Tensor;

/// Lowered contact-direction coefficients `Γ_IJK` at a base point, over the
/// `2m` contact indices.
#[derive(Clone, Debug, PartialEq)]
pub struct ChristoffelSet<T> {
    gamma: Tensor<T>,
}

impl<T: Field> ChristoffelSet<T> {
    pub fn new(gamma: Tensor<T>) -> Result<Self> {
        if gamma.rank() != 3 || gamma.dim() < 2 || gamma.dim() % 2 != 0 {
            return Err(Error::Shape("christoffel set needs 2m contact indices and rank 3".into()));
        }
        Ok(ChristoffelSet { gamma })
    }

    /// Half-rank `m` of the contact distribution.
    pub fn half_rank(&self) -> usize {
        self.gamma.dim() / 2
    }

    pub fn gamma(&self) -> &Tensor<T> {
        &self.gamma
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> T {
        *self.gamma.get(&[i, j, k])
    }

    /// `Γ_(IJK)`.
    pub fn symmetrized(&self) -> Self {
        let sixth = T::ratio(1, 6);
        let g = &self.gamma;
        ChristoffelSet {
            gamma: Tensor::from_fn(g.dim(), 3, |x| {
                let (i, j, k) = (x[0], x[1], x[2]);
                (self.get(i, j, k) + self.get(i, k, j) + self.get(j, i, k) + self.get(j, k, i) + self.get(k, i, j)
                    + self.get(k, j, i))
                    * sixth
            }),
        }
    }

    /// `Γ_IJK = Γ_(IJK) + ½τ_IJK − ⅙τ_KIJ − ⅙τ_KJI` from a symmetric part
    /// and a torsion with `τ_IJK = τ_[IJ]K`, `τ_[IJK] = 0`.
    pub fn with_torsion(symmetric: &Self, tau: &Tensor<T>) -> Result<Self> {
        if tau.dim() != symmetric.gamma.dim() || tau.rank() != 3 {
            return Err(Error::Shape("torsion must match the christoffel set".into()));
        }
        let half = T::ratio(1, 2);
        let sixth = T::ratio(1, 6);
        Ok(ChristoffelSet {
            gamma: Tensor::from_fn(tau.dim(), 3, |x| {
                let (i, j, k) = (x[0], x[1], x[2]);
                symmetric.get(i, j, k) + half * *tau.get(&[i, j, k])
                    - sixth * *tau.get(&[k, i, j])
                    - sixth * *tau.get(&[k, j, i])
            }),
        })
    }
}

/// The symplectic form on contact indices: `Ω_∞0 = 1` and the standard
/// block on `1, …, 2m−2`.
pub fn contact_omega<T: Field>(m: usize) -> Vec<Vec<T>> {
    let size = 2 * m;
    let h = m - 1;
    let mut w = vec![vec![T::zero(); size]; size];
    w[0][size - 1] = T::one();
    w[size - 1][0] = -T::one();
    for a in 0..h {
        w[1 + a][1 + h + a] = T::one();
        w[1 + h + a][1 + a] = -T::one();
    }
    w
}

/// `U^I = (1, u^α)` as polynomials in the fiber variables.
fn homogeneous_fiber<T: Field>(m: usize) -> Vec<Polynomial<T>> {
    let vars = 2 * m - 1;
    std::iter::once(Polynomial::constant(vars, T::one()))
        .chain((0..vars).map(|v| Polynomial::variable(vars, v)))
        .collect()
}

/// `F_K = U^I U^J Γ_IJK`.
fn contracted_twice<T: Field>(g: &ChristoffelSet<T>) -> Vec<Polynomial<T>> {
    let size = g.gamma.dim();
    let u = homogeneous_fiber::<T>(g.half_rank());
    (0..size)
        .map(|k| {
            let mut acc = Polynomial::zero(size - 1);
            for i in 0..size {
                for j in 0..size {
                    let c = g.get(i, j, k);
                    if c != T::zero() {
                        acc = acc.add(&u[i].mul(&u[j]).scale(c));
                    }
                }
            }
            acc
        })
        .collect()
}

/// `f⁰ = Γ_(IJK) U^I U^J U^K`, a cubic in the fiber variables.
pub fn f0_polynomial<T: Field>(g: &ChristoffelSet<T>) -> Polynomial<T> {
    let size = g.gamma.dim();
    let u = homogeneous_fiber::<T>(g.half_rank());
    let f = contracted_twice(g);
    (0..size).fold(Polynomial::zero(size - 1), |acc, k| acc.add(&f[k].mul(&u[k])))
}

/// `f⁰` at the fiber point `u`.
pub fn f0_from_christoffels<T: Field>(g: &ChristoffelSet<T>, u: &[T]) -> T {
    f0_polynomial(g).evaluate(u)
}

/// Recovers `Γ_(IJK)` from the third-order fiber jet of `f` at `u0`;
/// quartic dependence on the fiber means the path geometry is not contact
/// projective.
pub fn christoffels_from_f<T: Field>(f: &dyn ScalarField<T>, u0: &[T]) -> Result<ChristoffelSet<T>> {
    let vars = f.dim();
    if vars % 2 == 0 {
        return Err(Error::Dimension("fiber dimension must be odd".into()));
    }
    let jet = f.jet_at(u0, 4)?;
    let mut quartic = 0.0f64;
    for a in 0..vars {
        for b in a..vars {
            for c in b..vars {
                for d in c..vars {
                    quartic = quartic.max(jet.partial(&[a, b, c, d]).magnitude());
                }
            }
        }
    }
    if quartic > 0.0 {
        return Err(Error::NotContactProjective(format!("fourth fiber derivative {quartic:e} is nonzero")));
    }
    let size = vars + 1;
    let half = T::ratio(1, 2);
    let third = T::ratio(1, 3);
    let sixth = T::ratio(1, 6);
    let f3 = |a: usize, b: usize, c: usize| jet.partial(&[a, b, c]);
    let f2 = |a: usize, b: usize| jet.partial(&[a, b]);
    let f1 = |a: usize| jet.partial(&[a]);
    let mut gamma = Tensor::zeros(size, 3);
    let mut set = |i: usize, j: usize, k: usize, v: T| {
        for p in [[i, j, k], [i, k, j], [j, i, k], [j, k, i], [k, i, j], [k, j, i]] {
            gamma.set(&p, v);
        }
    };
    for a in 0..vars {
        for b in 0..vars {
            for c in 0..vars {
                set(a + 1, b + 1, c + 1, sixth * f3(a, b, c));
            }
            let mut v = sixth * f2(a, b);
            for c in 0..vars {
                v -= sixth * u0[c] * f3(a, b, c);
            }
            set(a + 1, b + 1, 0, v);
        }
        let mut v = third * f1(a);
        for b in 0..vars {
            v -= third * u0[b] * f2(a, b);
            for c in 0..vars {
                v += sixth * u0[b] * u0[c] * f3(a, b, c);
            }
        }
        set(a + 1, 0, 0, v);
    }
    let mut v = jet.value();
    for a in 0..vars {
        v -= u0[a] * f1(a);
        for b in 0..vars {
            v += half * u0[a] * u0[b] * f2(a, b);
            for c in 0..vars {
                v -= sixth * u0[a] * u0[b] * u0[c] * f3(a, b, c);
            }
        }
    }
    set(0, 0, 0, v);
    ChristoffelSet::new(gamma)
}

/// The vanishing-contact-torsion defect `3f_p + A_p(f⁰)` for `p = 1, …, 2m−2`
/// as polynomials in the fiber variables, with
/// `f_p = u_p F_0 − F_p`, `f⁰ = u^0 F_0 + F_∞ − u^p f_p`,
/// `A_p = ∂/∂u^p − u_p ∂/∂u^0` and `u_p = u^q ω_qp`.
pub fn torsion_defect_polynomials<T: Field>(g: &ChristoffelSet<T>) -> Result<Vec<Polynomial<T>>> {
    let m = g.half_rank();
    if m < 2 {
        return Err(Error::Vacuous("the torsion identity needs hyperplane fiber directions (m ≥ 2)".into()));
    }
    let size = 2 * m;
    let h = size - 2;
    let vars = size - 1;
    let zero_idx = size - 1;
    let w = contact_omega::<T>(m);
    let uvar = |i: usize| Polynomial::<T>::variable(vars, i - 1);
    let lower_u: Vec<Polynomial<T>> = (1..=h)
        .map(|p| (1..=h).fold(Polynomial::zero(vars), |acc, q| acc.add(&uvar(q).scale(w[q][p]))))
        .collect();
    let f = contracted_twice(g);
    let fp: Vec<Polynomial<T>> = (1..=h).map(|p| lower_u[p - 1].mul(&f[zero_idx]).sub(&f[p])).collect();
    let mut f0 = uvar(zero_idx).mul(&f[zero_idx]).add(&f[0]);
    for p in 1..=h {
        f0 = f0.sub(&uvar(p).mul(&fp[p - 1]));
    }
    Ok((1..=h)
        .map(|p| {
            let a = f0.derivative(p - 1).sub(&lower_u[p - 1].mul(&f0.derivative(zero_idx - 1)));
            fp[p - 1].scale(T::from_i64(3)).add(&a)
        })
        .collect())
}

/// The torsion polynomial
/// `u^αu^β(τ_p(αβ) − u_pτ_0(αβ)) + 2u^α(τ_p(α∞) − u_pτ_0(α∞)) + (τ_p∞∞ − u_pτ_0∞∞)`,
/// the expansion of `U^IU^J(τ_p(IJ) − u_pτ_0(IJ))`.
pub fn torsion_polynomials<T: Field>(tau: &Tensor<T>) -> Result<Vec<Polynomial<T>>> {
    torsion_polynomials_with_middle(tau, T::from_i64(2))
}

/// The torsion polynomial with an arbitrary coefficient `c` on the term
/// linear in `u^α`.
pub fn torsion_polynomials_with_middle<T: Field>(tau: &Tensor<T>, middle: T) -> Result<Vec<Polynomial<T>>> {
    let size = tau.dim();
    if size < 4 || size % 2 != 0 {
        return Err(Error::Vacuous("the torsion identity needs hyperplane fiber directions (m ≥ 2)".into()));
    }
    let m = size / 2;
    let h = size - 2;
    let vars = size - 1;
    let zero_idx = size - 1;
    let w = contact_omega::<T>(m);
    let uvar = |i: usize| Polynomial::<T>::variable(vars, i - 1);
    let half = T::ratio(1, 2);
    let sym = |a: usize, b: usize, c: usize| (*tau.get(&[a, b, c]) + *tau.get(&[a, c, b])) * half;
    Ok((1..=h)
        .map(|p| {
            let up = (1..=h).fold(Polynomial::zero(vars), |acc, q| acc.add(&uvar(q).scale(w[q][p])));
            let coeff = |a: usize, b: usize| {
                Polynomial::constant(vars, sym(p, a, b)).sub(&up.scale(sym(zero_idx, a, b)))
            };
            let mut acc = coeff(0, 0);
            for a in 1..size {
                acc = acc.add(&uvar(a).mul(&coeff(a, 0)).scale(middle));
                for b in 1..size {
                    acc = acc.add(&uvar(a).mul(&uvar(b)).mul(&coeff(a, b)));
                }
            }
            acc
        })
        .collect())
}

/// `3f_p + A_p(f⁰)` at the fiber point `u`.
pub fn torsion_defect<T: Field>(g: &ChristoffelSet<T>, u: &[T]) -> Result<Vec<T>> {
    Ok(torsion_defect_polynomials(g)?.iter().map(|p| p.evaluate(u)).collect())
}

/// Right side of the contact geodesic system with `x^∞` as parameter:
/// `ẍ^γ = u^γ P^∞ − P^γ` where `P^K = U^IU^J Γ_(IJ)^K`, `U = (1, u)` and
/// `Γ_IJ^K = Ω^{KL}Γ_IJL`.
pub fn path_acceleration<T: Field>(g: &ChristoffelSet<T>, u: &[T]) -> Result<Vec<T>> {
    let size = g.gamma.dim();
    if u.len() != size - 1 {
        return Err(Error::Shape(format!("expected {} fiber velocities, got {}", size - 1, u.len())));
    }
    let w = contact_omega::<T>(g.half_rank());
    let uu: Vec<T> = std::iter::once(T::one()).chain(u.iter().copied()).collect();
    let lower: Vec<T> = (0..size)
        .map(|k| {
            let mut acc = T::zero();
            for i in 0..size {
                for j in 0..size {
                    acc += uu[i] * uu[j] * g.get(i, j, k);
                }
            }
            acc
        })
        .collect();
    let upper: Vec<T> =
        (0..size).map(|k| (0..size).fold(T::zero(), |acc, l| acc + w[k][l] * lower[l])).collect();
    Ok((1..size).map(|c| uu[c] * upper[0] - upper[c]).collect())
}

/// Three-dimensional contact-direction coefficients `(Γ_000, Γ_00∞, Γ_∞∞0, Γ_∞∞∞)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicCoefficients<T> {
    pub g000: T,
    pub g00i: T,
    pub gii0: T,
    pub giii: T,
}

impl<T: Field> CubicCoefficients<T> {
    pub fn zero() -> Self {
        CubicCoefficients { g000: T::zero(), g00i: T::zero(), gii0: T::zero(), giii: T::zero() }
    }

    /// `s³Γ_000 + 3s²Γ_00∞ + 3sΓ_∞∞0 + Γ_∞∞∞`.
    pub fn slope_acceleration(&self, s: T) -> T {
        let three = T::from_i64(3);
        ((self.g000 * s + three * self.g00i) * s + three * self.gii0) * s + self.giii
    }

    /// From a three-dimensional christoffel set (`m = 1`, indices `∞, 0`).
    pub fn from_set(g: &ChristoffelSet<T>) -> Result<Self> {
        if g.half_rank() != 1 {
            return Err(Error::Dimension("the cubic slope ODE is three-dimensional".into()));
        }
        Ok(CubicCoefficients { g000: g.get(1, 1, 1), g00i: g.get(1, 1, 0), gii0: g.get(0, 0, 1), giii: g.get(0, 0, 0) })
    }

    pub fn to_set(&self) -> ChristoffelSet<T> {
        let mut t = Tensor::zeros(2, 3);
        let mut set = |i: usize, j: usize, k: usize, v: T| {
            for p in [[i, j, k], [i, k, j], [j, i, k], [j, k, i], [k, i, j], [k, j, i]] {
                t.set(&p, v);
            }
        };
        set(1, 1, 1, self.g000);
        set(1, 1, 0, self.g00i);
        set(0, 0, 1, self.gii0);
        set(0, 0, 0, self.giii);
        ChristoffelSet { gamma: t }
    }
}

/// Path coordinates `(x^∞, x^0, z)` of a three-dimensional main-text point
/// `(x^1, x^2, x^0)`; the renaming is its own inverse on coordinates.
pub fn path_point_from_main<T: Copy>(x: &[T]) -> [T; 3] {
    [x[0], x[1], x[2]]
}

/// Cubic coefficients of `flat + S(φ)` at a three-dimensional point, through
/// `Γ_000 = S_222`, `Γ_00∞ = S_221`, `Γ_∞∞0 = S_112`, `Γ_∞∞∞ = S_111` with
/// `S_ijk = S_ij^l ω_lk`.
pub fn cubic_from_schwarzian<T: Real>(map: &ContactMap<T>, x: &[T]) -> Result<CubicCoefficients<T>> {
    map.dims().require_three_dimensional()?;
    let s = schwarzian(map, x)?.lowered;
    Ok(CubicCoefficients {
        g000: *s.get(&[1, 1, 1]),
        g00i: *s.get(&[1, 1, 0]),
        gii0: *s.get(&[0, 0, 1]),
        giii: *s.get(&[0, 0, 0]),
    })
}

/// A point of a three-dimensional contact geodesic parametrized by `t = x^∞`,
/// with `w` an independently integrated copy of `dz/dt`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathState<T> {
    pub t: T,
    pub x0: T,
    pub z: T,
    pub slope: T,
    pub w: T,
}

impl<T: Real> PathState<T> {
    /// Starts on the constraint `dz/dt = x^0 − t·slope`.
    pub fn new(t: T, x0: T, z: T, slope: T) -> Self {
        PathState { t, x0, z, slope, w: x0 - t * slope }
    }

    /// `|w − (x^0 − t·slope)|`.
    pub fn constraint_drift(&self) -> T {
        (self.w - (self.x0 - self.t * self.slope)).abs()
    }
}

/// The cubic-in-slope geodesic ODE with base-point dependent coefficients.
pub struct CubicSlopeOde<T> {
    coefficients: Box<dyn Fn(&[T; 3]) -> Result<CubicCoefficients<T>> + Send + Sync>,
}

impl<T: Real> CubicSlopeOde<T> {
    pub fn new(f: impl Fn(&[T; 3]) -> Result<CubicCoefficients<T>> + Send + Sync + 'static) -> Self {
        CubicSlopeOde { coefficients: Box::new(f) }
    }

    pub fn constant(c: CubicCoefficients<T>) -> Self {
        Self::new(move |_| Ok(c))
    }

    /// The flat structure: all contact geodesics are the lines `(t, at+b, bt+c)`.
    pub fn flat() -> Self {
        Self::constant(CubicCoefficients::zero())
    }

    /// Coefficients of `flat + S(φ)` in three dimensions.
    pub fn from_map(map: ContactMap<T>) -> Result<Self> {
        map.dims().require_three_dimensional()?;
        Ok(Self::new(move |p| cubic_from_schwarzian(&map, p)))
    }

    /// `(dx^0/dt, dz/dt, dslope/dt, dw/dt)` with `dz/dt = x^0 − t·slope` and
    /// `dw/dt = −t·dslope/dt`.
    pub fn rhs(&self, s: &PathState<T>) -> Result<[T; 4]> {
        let c = (self.coefficients)(&[s.t, s.x0, s.z])?;
        let acc = c.slope_acceleration(s.slope);
        Ok([s.slope, s.x0 - s.t * s.slope, acc, -s.t * acc])
    }
}

/// Integration output: sampled states, including the initial one.
#[derive(Clone, Debug)]
pub struct Trajectory<T> {
    pub states: Vec<PathState<T>>,
    pub max_drift: T,
}

fn advance<T: Real>(s: &PathState<T>, k: &[T; 4], h: T) -> PathState<T> {
    PathState { t: s.t + h, x0: s.x0 + h * k[0], z: s.z + h * k[1], slope: s.slope + h * k[2], w: s.w + h * k[3] }
}

/// Classical fixed-step RK4 from `init` to `t_end`; a step whose constraint
/// drift exceeds `drift_budget` is rejected.
pub fn integrate_geodesic<T: Real>(
    ode: &CubicSlopeOde<T>,
    init: PathState<T>,
    t_end: T,
    step: T,
    drift_budget: T,
) -> Result<Trajectory<T>> {
    if !(step > T::zero()) {
        return Err(Error::StepRejected("step must be positive".into()));
    }
    let span = t_end - init.t;
    let steps = (span.abs() / step).ceil().to_usize().unwrap_or(0).max(1);
    let h = span / T::from_i64(steps as i64);
    let half = T::from_f64(0.5);
    let sixth = T::one() / T::from_i64(6);
    let two = T::from_i64(2);
    let mut states = Vec::with_capacity(steps + 1);
    let mut s = init;
    let mut max_drift = s.constraint_drift();
    states.push(s);
    for _ in 0..steps {
        let k1 = ode.rhs(&s)?;
        let k2 = ode.rhs(&advance(&s, &k1, h * half))?;
        let k3 = ode.rhs(&advance(&s, &k2, h * half))?;
        let k4 = ode.rhs(&advance(&s, &k3, h))?;
        let k: [T; 4] = std::array::from_fn(|i| (k1[i] + two * k2[i] + two * k3[i] + k4[i]) * sixth);
        let next = advance(&s, &k, h);
        let drift = next.constraint_drift();
        if !drift.is_finite() || drift > drift_budget {
            return Err(Error::StepRejected(format!(
                "constraint drift {:e} at t = {:e}",
                drift.as_f64(),
                next.t.as_f64()
            )));
        }
        max_drift = max_drift.max(drift);
        s = next;
        states.push(s);
    }
    Ok(Trajectory { states, max_drift })
}

/// Least-squares line through points of `ℝ³`: returns the largest distance
/// of a point from the principal axis through the centroid.
pub fn line_fit_residual(points: &[[f64; 3]]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let n = points.len() as f64;
    let centroid = points.iter().fold(Vector3::zeros(), |acc, p| acc + Vector3::from(*p)) / n;
    let cov = points.iter().fold(Matrix3::zeros(), |acc, p| {
        let d = Vector3::from(*p) - centroid;
        acc + d * d.transpose()
    });
    let eig = SymmetricEigen::new(cov);
    let (imax, _) = eig.eigenvalues.iter().enumerate().fold((0, f64::NEG_INFINITY), |best, (i, &v)| {
        if v > best.1 {
            (i, v)
        } else {
            best
        }
    });
    let axis = eig.eigenvectors.column(imax).into_owned();
    points
        .iter()
        .map(|p| {
            let d = Vector3::from(*p) - centroid;
            (d - axis * axis.dot(&d)).norm()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn set_3d(c: CubicCoefficients<f64>) -> ChristoffelSet<f64> {
        c.to_set()
    }

    #[test]
    fn zero_christoffels_give_zero_f0() {
        let g = ChristoffelSet::new(Tensor::<f64>::zeros(4, 3)).unwrap();
        assert!(f0_polynomial(&g).is_zero());
    }

    #[test]
    fn constant_term_only() {
        let g = set_3d(CubicCoefficients { giii: 5.0, ..CubicCoefficients::zero() });
        for u in [-1.0, 0.0, 0.7] {
            assert_eq!(f0_from_christoffels(&g, &[u]), 5.0);
        }
    }

    #[test]
    fn cubic_monomial_recovers_leading_coefficient() {
        let f = Polynomial::monomial(1, Rational64::from_integer(1), &[3]);
        let g = christoffels_from_f(&f, &[Rational64::from_integer(0)]).unwrap();
        assert_eq!(g.get(1, 1, 1), Rational64::from_integer(1));
        assert_eq!(g.get(1, 1, 0), Rational64::from_integer(0));
        assert_eq!(g.get(0, 0, 0), Rational64::from_integer(0));
    }

    #[test]
    fn quartic_is_not_contact_projective() {
        let f = Polynomial::monomial(1, 1.0, &[4]);
        assert!(matches!(christoffels_from_f(&f, &[0.3]), Err(Error::NotContactProjective(_))));
    }

    #[test]
    fn torsion_identity_is_vacuous_in_three_dimensions() {
        let g = ChristoffelSet::new(Tensor::<f64>::zeros(2, 3)).unwrap();
        assert!(matches!(torsion_defect(&g, &[0.0]), Err(Error::Vacuous(_))));
    }

    #[test]
    fn contact_line_satisfies_constraint() {
        for t in [-1.0, 0.0, 0.5, 2.0] {
            let s = PathState::new(t, 2.0 * t + 1.0, t + 5.0, 2.0);
            assert_eq!(s.w, 1.0);
            assert_eq!(s.constraint_drift(), 0.0);
        }
    }

    #[test]
    fn constant_forcing_gives_parabola() {
        let ode = CubicSlopeOde::<f64>::constant(CubicCoefficients { giii: 1.0, ..CubicCoefficients::zero() });
        let tr = integrate_geodesic(&ode, PathState::new(0.0, 0.4, 0.0, 0.0), 1.0, 0.1, 1e-9).unwrap();
        for s in &tr.states {
            assert!((s.x0 - (0.4 + s.t * s.t / 2.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn nonpositive_step_is_rejected() {
        let ode = CubicSlopeOde::<f64>::flat();
        let init = PathState::new(0.0, 0.0, 0.0, 1.0);
        assert!(matches!(integrate_geodesic(&ode, init, 1.0, 0.0, 1e-9), Err(Error::StepRejected(_))));
    }

    #[test]
    fn blow_up_is_rejected() {
        let ode = CubicSlopeOde::constant(CubicCoefficients { g000: 1.0, ..CubicCoefficients::zero() });
        let init = PathState::new(0.0, 0.0, 0.0, 2.0);
        assert!(matches!(integrate_geodesic(&ode, init, 1.0, 0.05, 1e-6), Err(Error::StepRejected(_))));
    }

    #[test]
    fn general_system_specializes_to_cubic_slope() {
        let c = CubicCoefficients::<f64> { g000: 0.3, g00i: -0.7, gii0: 1.1, giii: 0.4 };
        for s in [-0.8, 0.0, 0.6] {
            let acc = path_acceleration(&c.to_set(), &[s]).unwrap();
            assert!((acc[0] - c.slope_acceleration(s)).abs() < 1e-14);
        }
    }

    #[test]
    fn line_fit_of_collinear_points_is_zero() {
        let pts: Vec<[f64; 3]> = (0..10).map(|k| {
            let t = k as f64 * 0.1;
            [t, 2.0 * t + 1.0, -t]
        })
        .collect();
        assert!(line_fit_residual(&pts) < 1e-14);
        assert!(line_fit_residual(&[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]) > 0.1);
    }
}
