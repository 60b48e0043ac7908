//! Frame matrices, the difference tensor `λ`, the contact Schwarzian `S(φ)`,
//! tensor pullback, the cocycle defect and the normalized representative.

use crate::algebra::SymplecticForm;
use crate::error::{Error, Result};
use crate::flat_model::{conformal_factor_jet, ContactMap, DEGENERATE_EPSILON};
use crate::jets::{jet_matrix_inverse, FlatFrame, Jet, JetMatrix};
use crate::matrix::Matrix;
use crate::scalar::Real;
use crate::tensor::Tensor;

/// `A_α^β`, its inverse `B` and `c` at a point.
#[derive(Clone, Debug)]
pub struct FrameMatrix<T> {
    pub a: Matrix<T>,
    pub b: Matrix<T>,
    pub c: T,
}

impl<T: Real> FrameMatrix<T> {
    /// `−c⁻¹ A^j{}_i`, stored with entry `(i, j)`.
    pub fn closed_form_inverse_block(&self, form: &SymplecticForm<T>) -> Matrix<T> {
        let m = form.hyperplane_dim();
        let wu = form.omega_upper();
        let w = form.omega();
        Matrix::from_fn(m, m, |i, j| {
            let mut acc = T::zero();
            for p in 0..m {
                for q in 0..m {
                    acc += wu[(j, p)] * self.a[(p, q)] * w[(q, i)];
                }
            }
            -acc / self.c
        })
    }

    /// Residual of `A_i^p A_j^q ω_pq = c ω_ij`.
    pub fn symplectic_block_residual(&self, form: &SymplecticForm<T>) -> f64 {
        let m = form.hyperplane_dim();
        let w = form.omega();
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                let mut acc = T::zero();
                for p in 0..m {
                    for q in 0..m {
                        acc += self.a[(i, p)] * self.a[(j, q)] * w[(p, q)];
                    }
                }
                worst = worst.max((acc - self.c * w[(i, j)]).as_f64().abs());
            }
        }
        worst
    }
}

/// Jets at a point of everything the Schwarzian pipeline derives from `φ`.
///
/// With `φ` expanded to order `K`, `A`, `B` and `c` carry order `K − 1` and
/// `λ`, `γ` order `K − 2`.
#[derive(Clone, Debug)]
pub struct FrameJets<T: Real> {
    frame: FlatFrame<T>,
    phi: Vec<Jet<T>>,
    a: JetMatrix<T>,
    b: JetMatrix<T>,
    c: Jet<T>,
}

impl<T: Real> FrameJets<T> {
    pub fn new(map: &ContactMap<T>, x: &[T], order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::OrderBudget { needed: 1, max: 0 });
        }
        let form = map.form().clone();
        let frame = FlatFrame::new(form.clone(), x, order)?;
        let phi = map.jets_at(x, order)?;
        let m = form.hyperplane_dim();
        let d = m + 1;
        let w = form.omega();
        let half = T::from_f64(0.5);
        let mut a = Vec::with_capacity(d);
        for alpha in 0..d {
            let xphi = frame.apply_all(alpha, &phi)?;
            let mut row: Vec<Jet<T>> = xphi[..m].to_vec();
            let mut a0 = xphi[m].clone();
            for p in 0..m {
                for q in 0..m {
                    if w[(p, q)] != T::zero() {
                        a0 += &(&phi[p] * &xphi[q]).scale(w[(p, q)]);
                    }
                }
            }
            row.push(a0.scale(half));
            a.push(row);
        }
        let c = conformal_factor_jet(&form, &phi);
        if !(c.value().as_f64().abs() > DEGENERATE_EPSILON) {
            return Err(Error::DegenerateMap(format!("conformal factor {:e}", c.value().as_f64())));
        }
        let b = jet_matrix_inverse(&a)?;
        Ok(FrameJets { frame, phi, a, b, c })
    }

    pub fn form(&self) -> &SymplecticForm<T> {
        self.frame.form()
    }

    pub fn frame(&self) -> &FlatFrame<T> {
        &self.frame
    }

    pub fn phi(&self) -> &[Jet<T>] {
        &self.phi
    }

    pub fn a(&self) -> &JetMatrix<T> {
        &self.a
    }

    pub fn b(&self) -> &JetMatrix<T> {
        &self.b
    }

    pub fn c(&self) -> &Jet<T> {
        &self.c
    }

    pub fn order(&self) -> usize {
        self.phi[0].order()
    }

    pub fn frame_matrix(&self) -> FrameMatrix<T> {
        let d = self.a.len();
        FrameMatrix {
            a: Matrix::from_fn(d, d, |i, j| self.a[i][j].value()),
            b: Matrix::from_fn(d, d, |i, j| self.b[i][j].value()),
            c: self.c.value(),
        }
    }

    fn require(&self, needed: usize) -> Result<()> {
        if self.order() < needed {
            return Err(Error::OrderBudget { needed, max: self.order() });
        }
        Ok(())
    }

    /// `λ_αβ^γ = X_α(A_β^ρ) B_ρ^γ`.
    pub fn lambda(&self) -> Result<Tensor<Jet<T>>> {
        self.require(2)?;
        let d = self.a.len();
        let mut xa = Vec::with_capacity(d);
        for alpha in 0..d {
            let rows: Vec<Vec<Jet<T>>> =
                (0..d).map(|beta| self.frame.apply_all(alpha, &self.a[beta])).collect::<Result<_>>()?;
            xa.push(rows);
        }
        let order = self.order() - 2;
        let b: Vec<Vec<Jet<T>>> =
            self.b.iter().map(|r| r.iter().map(|j| j.truncate(order)).collect()).collect();
        Ok(Tensor::from_fn(d, 3, |idx| {
            let (al, be, ga) = (idx[0], idx[1], idx[2]);
            let mut acc = &xa[al][be][0] * &b[0][ga];
            for rho in 1..d {
                acc += &(&xa[al][be][rho] * &b[rho][ga]);
            }
            acc
        }))
    }

    /// `γ_α = X_α(c) / 2c`.
    pub fn gamma(&self) -> Result<Vec<Jet<T>>> {
        self.require(2)?;
        let d = self.a.len();
        let inv = self.c.truncate(self.order() - 2).checked_recip().expect("c checked nonzero");
        let half = T::from_f64(0.5);
        (0..d)
            .map(|alpha| Ok((&self.frame.apply(alpha, &self.c)? * &inv).scale(half)))
            .collect()
    }
}

/// Symmetrised hyperplane block `λ_(ij)^k`.
fn sym_block<T: Real>(lambda: &Tensor<Jet<T>>, m: usize) -> Tensor<Jet<T>> {
    let half = T::from_f64(0.5);
    Tensor::from_fn(m, 3, |idx| {
        (lambda.get(&[idx[0], idx[1], idx[2]]) + lambda.get(&[idx[1], idx[0], idx[2]])).scale(half)
    })
}

/// Both closed forms of `S_ij^k` from `λ` (as jets).
pub fn schwarzian_forms<T: Real>(
    lambda: &Tensor<Jet<T>>,
    form: &SymplecticForm<T>,
) -> (Tensor<Jet<T>>, Tensor<Jet<T>>) {
    let m = form.hyperplane_dim();
    let d = m + 1;
    let n2 = T::from_i64(d as i64 + 1); // 2n
    let sym = sym_block(lambda, m);
    let proto = lambda.get(&[0, 0, 0]).zero_like();
    // λ_(ip)^p
    let tr_sym: Vec<Jet<T>> = (0..m)
        .map(|i| (0..m).fold(proto.clone(), |acc, p| acc + sym.get(&[i, p, p])))
        .collect();
    let inv_2n1 = T::one() / T::from_i64(d as i64);
    let first = Tensor::from_fn(m, 3, |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let mut s = sym.get(idx).clone();
        if i == k {
            s -= &tr_sym[j].scale(inv_2n1);
        }
        if j == k {
            s -= &tr_sym[i].scale(inv_2n1);
        }
        s
    });
    // λ_iα^α over all frame indices, then raised
    let tr_full: Vec<Jet<T>> = (0..m)
        .map(|i| (0..d).fold(proto.clone(), |acc, a| acc + lambda.get(&[i, a, a])))
        .collect();
    let wu = form.omega_upper();
    let w = form.omega();
    let tr_up: Vec<Jet<T>> = (0..m)
        .map(|k| {
            (0..m).fold(proto.clone(), |acc, q| {
                if wu[(k, q)] == T::zero() {
                    acc
                } else {
                    acc + tr_full[q].scale(wu[(k, q)])
                }
            })
        })
        .collect();
    let inv_2n = T::one() / n2;
    let second = Tensor::from_fn(m, 3, |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let mut s = lambda.get(idx).clone();
        // 2δ_(i^k λ_j)α^α = δ_i^k λ_jα^α + δ_j^k λ_iα^α
        if i == k {
            s -= &tr_full[j].scale(inv_2n);
        }
        if j == k {
            s -= &tr_full[i].scale(inv_2n);
        }
        if w[(i, j)] != T::zero() {
            s -= &tr_up[k].scale(w[(i, j)] * inv_2n);
        }
        s
    });
    (first, second)
}

/// `T_ijk = T_ij^l ω_lk` on the last slot of a rank-3 hyperplane tensor.
pub fn lower_last<T: Real>(t: &Tensor<Jet<T>>, form: &SymplecticForm<T>) -> Tensor<Jet<T>> {
    let m = form.hyperplane_dim();
    let w = form.omega();
    Tensor::from_fn(m, 3, |idx| {
        let mut acc = t.get(&[idx[0], idx[1], 0]).zero_like();
        for l in 0..m {
            if w[(l, idx[2])] != T::zero() {
                acc += &t.get(&[idx[0], idx[1], l]).scale(w[(l, idx[2])]);
            }
        }
        acc
    })
}

/// `S_ij^k(φ)` and its lowered form at a point.
#[derive(Clone, Debug)]
pub struct SchwarzianTensor<T> {
    pub upper: Tensor<T>,
    pub lowered: Tensor<T>,
    /// Largest difference between the two closed forms.
    pub form_difference: f64,
}

impl<T: Real> SchwarzianTensor<T> {
    pub fn from_upper(upper: Tensor<T>, form: &SymplecticForm<T>) -> Self {
        let lowered = lower_last(&upper.map(|&v| Jet::constant(1, 0, v)), form).values();
        SchwarzianTensor { upper, lowered, form_difference: 0.0 }
    }

    pub fn max_abs(&self) -> f64 {
        self.upper.max_abs()
    }

    /// Largest deviation of `S_ijk` from total symmetry.
    pub fn symmetry_residual(&self) -> f64 {
        self.lowered.asymmetry(0, 1).max(self.lowered.asymmetry(1, 2)).max(self.lowered.asymmetry(0, 2))
    }

    /// Largest single contraction of `S_ij^k` with `δ` or `ω`.
    pub fn trace_residual(&self, form: &SymplecticForm<T>) -> f64 {
        trace_residual_rank3(&self.upper, &self.lowered, form)
    }
}

/// All single traces of a rank-3 hyperplane tensor: `δ`-traces of the upper
/// form and `ω`-traces of the lowered form over every slot pair.
pub fn trace_residual_rank3<T: Real>(upper: &Tensor<T>, lowered: &Tensor<T>, form: &SymplecticForm<T>) -> f64 {
    let m = form.hyperplane_dim();
    let wu = form.omega_upper();
    let mut worst = 0.0f64;
    for a in 0..m {
        let mut t1 = T::zero();
        let mut t2 = T::zero();
        let mut w01 = T::zero();
        let mut w02 = T::zero();
        let mut w12 = T::zero();
        for p in 0..m {
            t1 += *upper.get(&[p, a, p]);
            t2 += *upper.get(&[a, p, p]);
            for q in 0..m {
                let wpq = wu[(p, q)];
                if wpq != T::zero() {
                    w01 += wpq * *lowered.get(&[p, q, a]);
                    w02 += wpq * *lowered.get(&[p, a, q]);
                    w12 += wpq * *lowered.get(&[a, p, q]);
                }
            }
        }
        for v in [t1, t2, w01, w02, w12] {
            worst = worst.max(v.as_f64().abs());
        }
    }
    worst
}

fn schwarzian_from_jets<T: Real>(fj: &FrameJets<T>) -> Result<(Tensor<Jet<T>>, f64)> {
    let lambda = fj.lambda()?;
    let (first, second) = schwarzian_forms(&lambda, fj.form());
    let diff = first.values().sub(&second.values()).max_abs();
    Ok((first, diff))
}

/// `S(φ)` at `x`.
pub fn schwarzian<T: Real>(map: &ContactMap<T>, x: &[T]) -> Result<SchwarzianTensor<T>> {
    let fj = FrameJets::new(map, x, 2)?;
    let (s, diff) = schwarzian_from_jets(&fj)?;
    let lowered = lower_last(&s, fj.form()).values();
    Ok(SchwarzianTensor { upper: s.values(), lowered, form_difference: diff })
}

/// Jets of `S_ij^k(φ)` of the given order at `x` (needs `φ` to `order + 2`).
pub fn schwarzian_jets<T: Real>(map: &ContactMap<T>, x: &[T], order: usize) -> Result<Tensor<Jet<T>>> {
    let fj = FrameJets::new(map, x, order + 2)?;
    Ok(schwarzian_from_jets(&fj)?.0)
}

pub fn lambda_tensor<T: Real>(map: &ContactMap<T>, x: &[T]) -> Result<Tensor<T>> {
    Ok(FrameJets::new(map, x, 2)?.lambda()?.values())
}

pub fn frame_matrix<T: Real>(map: &ContactMap<T>, x: &[T]) -> Result<FrameMatrix<T>> {
    Ok(FrameJets::new(map, x, 1)?.frame_matrix())
}

/// `γ_α` and the frame derivatives `X_β(γ_α)` (entry `(β, α)`).
#[derive(Clone, Debug)]
pub struct GammaForm<T> {
    pub gamma: Vec<T>,
    pub derivatives: Matrix<T>,
}

pub fn gamma_form<T: Real>(map: &ContactMap<T>, x: &[T]) -> Result<GammaForm<T>> {
    let fj = FrameJets::new(map, x, 3)?;
    let g = fj.gamma()?;
    let d = g.len();
    let xg: Vec<Vec<Jet<T>>> =
        (0..d).map(|b| fj.frame().apply_all(b, &g)).collect::<Result<_>>()?;
    Ok(GammaForm {
        gamma: g.iter().map(Jet::value).collect(),
        derivatives: Matrix::from_fn(d, d, |b, a| xg[b][a].value()),
    })
}

/// Residuals of the identities satisfied by `λ` at a point.
#[derive(Clone, Debug, Default)]
pub struct LambdaIdentities {
    /// `λ_[ij]^k = ω_ij γ^k`
    pub skew: f64,
    /// `λ_(ip)^p = (2n − 1) γ_i`
    pub sym_trace: f64,
    /// `λ_i[jk] = γ_i ω_jk`
    pub lowered_skew: f64,
    /// `λ_iα^α = λ_αi^α = 2n γ_i`
    pub full_traces: f64,
    /// `λ_i0^0 = 2γ_i`, `λ_0i^0 = 0`
    pub reeb: f64,
    /// `λ_αj^0 = 0`
    pub reeb_row: f64,
}

impl LambdaIdentities {
    pub fn max(&self) -> f64 {
        [self.skew, self.sym_trace, self.lowered_skew, self.full_traces, self.reeb, self.reeb_row]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

pub fn lambda_identities<T: Real>(map: &ContactMap<T>, x: &[T]) -> Result<LambdaIdentities> {
    let fj = FrameJets::new(map, x, 2)?;
    let lam = fj.lambda()?.values();
    let gamma: Vec<T> = fj.gamma()?.iter().map(Jet::value).collect();
    let form = fj.form();
    let m = form.hyperplane_dim();
    let d = m + 1;
    let w = form.omega();
    let gup = form.raise(&gamma[..m]);
    let half = T::from_f64(0.5);
    let f = |v: T| v.as_f64().abs();
    let mut out = LambdaIdentities::default();
    for i in 0..m {
        let mut st = T::zero();
        let mut t1 = T::zero();
        let mut t2 = T::zero();
        for p in 0..m {
            st += (*lam.get(&[i, p, p]) + *lam.get(&[p, i, p])) * half;
        }
        for a in 0..d {
            t1 += *lam.get(&[i, a, a]);
            t2 += *lam.get(&[a, i, a]);
        }
        let g = gamma[i];
        out.sym_trace = out.sym_trace.max(f(st - T::from_i64(d as i64) * g));
        let two_n = T::from_i64(d as i64 + 1);
        out.full_traces = out.full_traces.max(f(t1 - two_n * g)).max(f(t2 - two_n * g));
        out.reeb = out.reeb.max(f(*lam.get(&[i, m, m]) - T::from_i64(2) * g)).max(f(*lam.get(&[m, i, m])));
        for j in 0..m {
            for k in 0..m {
                let skew = (*lam.get(&[i, j, k]) - *lam.get(&[j, i, k])) * half;
                out.skew = out.skew.max(f(skew - w[(i, j)] * gup[k]));
                // λ_ijk = λ_ij^l ω_lk
                let low = |a: usize, b: usize| (0..m).fold(T::zero(), |acc, l| acc + *lam.get(&[i, a, l]) * w[(l, b)]);
                let ls = (low(j, k) - low(k, j)) * half;
                out.lowered_skew = out.lowered_skew.max(f(ls - g * w[(j, k)]));
            }
        }
    }
    for a in 0..d {
        for j in 0..m {
            out.reeb_row = out.reeb_row.max(f(*lam.get(&[a, j, m])));
        }
    }
    Ok(out)
}

/// `(ψ*S)_ij^k(x) = A(ψ)_i^p A(ψ)_j^q S_pq^r(ψ(x)) B(ψ)_r^k(x)`.
pub fn pullback_tensor<T: Real>(psi: &ContactMap<T>, s_at_image: &Tensor<T>, x: &[T]) -> Result<Tensor<T>> {
    let fm = frame_matrix(psi, x)?;
    let m = psi.form().hyperplane_dim();
    Ok(Tensor::from_fn(m, 3, |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let mut acc = T::zero();
        for p in 0..m {
            for q in 0..m {
                let apq = fm.a[(i, p)] * fm.a[(j, q)];
                if apq == T::zero() {
                    continue;
                }
                for r in 0..m {
                    acc += apq * *s_at_image.get(&[p, q, r]) * fm.b[(r, k)];
                }
            }
        }
        acc
    }))
}

/// `ψ*(S(φ))` at `x`.
pub fn pullback_schwarzian<T: Real>(phi: &ContactMap<T>, psi: &ContactMap<T>, x: &[T]) -> Result<Tensor<T>> {
    let y = psi.apply(x)?;
    pullback_tensor(psi, &schwarzian(phi, &y)?.upper, x)
}

/// `S(φ∘ψ)(x) − ψ*(S(φ))(x) − S(ψ)(x)`.
pub fn cocycle_defect<T: Real>(phi: &ContactMap<T>, psi: &ContactMap<T>, x: &[T]) -> Result<Tensor<T>> {
    let comp = ContactMap::compose(&[phi.clone(), psi.clone()])?;
    let lhs = schwarzian(&comp, x)?.upper;
    let pb = pullback_schwarzian(phi, psi, x)?;
    let s_psi = schwarzian(psi, x)?.upper;
    Ok(lhs.sub(&pb).sub(&s_psi))
}

/// How `∇γ` is read in the scale-change formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CovariantReading {
    /// Covariant derivative of the θ-representative being reconstructed.
    Representative,
    /// Bare frame derivative `X_α(γ^j)`.
    FrameDerivative,
}

/// Residuals of the normalization conditions of a representative connection.
#[derive(Clone, Debug, Default)]
pub struct NormalizationResiduals {
    /// `Γ̄_αβ^0` (θ parallel)
    pub theta_parallel: f64,
    /// `Γ̄_α0^γ` and `τ_0α^γ` (Reeb field parallel, `i(T)τ = 0`)
    pub reeb: f64,
    /// `Γ̄_αj^p ω_pk + Γ̄_αk^p ω_jp` (dθ parallel)
    pub omega_compatible: f64,
    /// `2Γ̄_[ip]^p` (trace-free torsion)
    pub torsion_trace: f64,
    /// Largest `Γ̄` entry in the `α = 0` derivative slot alone.
    pub reeb_derivative_slot: f64,
}

impl NormalizationResiduals {
    pub fn max(&self) -> f64 {
        [self.theta_parallel, self.reeb, self.omega_compatible, self.torsion_trace]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// `Γ̄ = λ − Λ(γ)` and its normalization residuals.
#[derive(Clone, Debug)]
pub struct NormalizedRepresentative<T> {
    pub gamma_bar: Tensor<T>,
    pub residuals: NormalizationResiduals,
}

pub fn normalized_representative<T: Real>(
    map: &ContactMap<T>,
    x: &[T],
    reading: CovariantReading,
) -> Result<NormalizedRepresentative<T>> {
    let fj = FrameJets::new(map, x, 3)?;
    let lam = fj.lambda()?.values();
    let gj = fj.gamma()?;
    let form = fj.form().clone();
    let m = form.hyperplane_dim();
    let d = m + 1;
    let r = m;
    let w = form.omega();
    let wu = form.omega_upper();
    let g: Vec<T> = gj.iter().map(Jet::value).collect();
    let xg: Vec<Vec<T>> = (0..d)
        .map(|b| Ok(fj.frame().apply_all(b, &gj)?.iter().map(Jet::value).collect()))
        .collect::<Result<_>>()?;
    let gup = form.raise(&g[..m]);
    let delta = |a: usize, b: usize| if a == b { T::one() } else { T::zero() };
    let two = T::from_i64(2);
    let four = T::from_i64(4);

    let mut gb = Tensor::<T>::zeros(d, 3);
    // Λ_ij^k and Λ_αβ^0
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let big = g[i] * delta(j, k) + g[j] * delta(i, k) + w[(i, j)] * gup[k];
                gb.set(&[i, j, k], *lam.get(&[i, j, k]) - big);
            }
        }
    }
    for a in 0..d {
        for b in 0..d {
            gb.set(&[a, b, r], *lam.get(&[a, b, r]) - two * g[a] * delta(b, r));
        }
    }
    // ∇_α γ^j from the lowered components: ω^{jk}(X_α γ_k − Γ̄_αk^σ γ_σ)
    let nabla_gamma = |gb: &Tensor<T>, a: usize| -> Vec<T> {
        let low: Vec<T> = (0..m)
            .map(|k| {
                let mut v = xg[a][k];
                if reading == CovariantReading::Representative {
                    for s in 0..d {
                        v -= *gb.get(&[a, k, s]) * g[s];
                    }
                }
                v
            })
            .collect();
        (0..m).map(|j| (0..m).fold(T::zero(), |acc, k| acc + wu[(j, k)] * low[k])).collect()
    };
    let ng: Vec<Vec<T>> = (0..m).map(|i| nabla_gamma(&gb, i)).collect();
    // Λ_0i^j = −2∇_i γ^j (vanishing contact torsion)
    for i in 0..m {
        for j in 0..m {
            gb.set(&[r, i, j], *lam.get(&[r, i, j]) + two * ng[i][j]);
        }
    }
    let ng0 = nabla_gamma(&gb, r);
    // Λ_α0^j = 4γ_αγ^j − 2∇_αγ^j + 4δ_α^0 γ^q ∇_q γ^j
    for a in 0..d {
        let na = if a == r { &ng0 } else { &ng[a] };
        for j in 0..m {
            let mut big = four * g[a] * gup[j] - two * na[j];
            if a == r {
                for q in 0..m {
                    big += four * gup[q] * ng[q][j];
                }
            }
            gb.set(&[a, r, j], *lam.get(&[a, r, j]) - big);
        }
    }

    let res = normalization_residuals(&gb, &form);
    Ok(NormalizedRepresentative { gamma_bar: gb, residuals: res })
}

/// Normalization residuals of a full set of frame coefficients `Γ_αβ^γ`.
pub fn normalization_residuals<T: Real>(gb: &Tensor<T>, form: &SymplecticForm<T>) -> NormalizationResiduals {
    let m = form.hyperplane_dim();
    let d = m + 1;
    let r = m;
    let w = form.omega();
    let f = |v: T| v.as_f64().abs();
    let mut res = NormalizationResiduals::default();
    for a in 0..d {
        for b in 0..d {
            res.theta_parallel = res.theta_parallel.max(f(*gb.get(&[a, b, r])));
            // Γ̄_α0^γ, and τ_0α^γ = Γ̄_0α^γ − Γ̄_α0^γ + ω_0α δ^γ_0
            res.reeb = res.reeb.max(f(*gb.get(&[a, r, b])));
            res.reeb = res.reeb.max(f(*gb.get(&[r, a, b]) - *gb.get(&[a, r, b])));
            if a == r {
                res.reeb_derivative_slot = res.reeb_derivative_slot.max(f(*gb.get(&[r, r, b])));
            }
        }
        for j in 0..m {
            for k in 0..m {
                let mut v = T::zero();
                for p in 0..m {
                    v += *gb.get(&[a, j, p]) * w[(p, k)] + *gb.get(&[a, k, p]) * w[(j, p)];
                }
                res.omega_compatible = res.omega_compatible.max(f(v));
            }
        }
    }
    for i in 0..m {
        let t = (0..m).fold(T::zero(), |acc, p| acc + *gb.get(&[i, p, p]) - *gb.get(&[p, i, p]));
        res.torsion_trace = res.torsion_trace.max(f(t));
    }
    res
}
