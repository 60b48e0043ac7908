//! Curvature of connections written in the flat frame `X_α`: the curvature
//! tensor, its traces, `P`, `Q`, the Weyl tensor `W`, the Cotton-type tensor
//! `C`, the identity suite and the integrability condition for a candidate
//! Schwarzian.

use nalgebra::DMatrix;
use serde_json::{json, Value};

use crate::algebra::SymplecticForm;
use crate::error::{Error, Result};
use crate::flat_model::ContactMap;
use crate::jets::{FlatFrame, Jet, Polynomial, ScalarField};
use crate::matrix::Matrix;
use crate::scalar::Real;
use crate::schwarzian::{lower_last, normalization_residuals, schwarzian_jets, FrameJets, NormalizationResiduals};
use crate::tensor::Tensor;

/// Frame coefficients `Γ_αβ^γ` (`∇_{X_α} X_β = Γ_αβ^γ X_γ`) as a field.
pub trait ConnectionField<T: Real>: Send + Sync {
    fn form(&self) -> &SymplecticForm<T>;

    /// Jets of every `Γ_αβ^γ` at `x`.
    fn gamma_jets(&self, x: &[T], order: usize) -> Result<Tensor<Jet<T>>>;

    fn gamma_at(&self, x: &[T]) -> Result<Tensor<T>> {
        Ok(self.gamma_jets(x, 0)?.values())
    }
}

/// The flat connection, for which the frame is parallel.
pub struct FlatConnection<T> {
    form: SymplecticForm<T>,
}

impl<T: Real> FlatConnection<T> {
    pub fn new(form: SymplecticForm<T>) -> Self {
        FlatConnection { form }
    }
}

impl<T: Real> ConnectionField<T> for FlatConnection<T> {
    fn form(&self) -> &SymplecticForm<T> {
        &self.form
    }

    fn gamma_jets(&self, _x: &[T], order: usize) -> Result<Tensor<Jet<T>>> {
        let d = self.form.manifold_dim();
        Ok(Tensor::filled(d, 3, Jet::constant(d, order, T::zero())))
    }
}

/// The pullback `^φ∇` of the flat connection, whose frame coefficients are `λ`.
pub struct MapConnection<T> {
    map: ContactMap<T>,
}

impl<T: Real> MapConnection<T> {
    pub fn new(map: ContactMap<T>) -> Self {
        MapConnection { map }
    }
}

impl<T: Real> ConnectionField<T> for MapConnection<T> {
    fn form(&self) -> &SymplecticForm<T> {
        self.map.form()
    }

    fn gamma_jets(&self, x: &[T], order: usize) -> Result<Tensor<Jet<T>>> {
        FrameJets::new(&self.map, x, order + 2)?.lambda()
    }
}

pub fn connection_from_map<T: Real>(map: &ContactMap<T>) -> MapConnection<T> {
    MapConnection::new(map.clone())
}

/// A difference tensor `Π_ijk = Π_ij^l ω_lk` on hyperplane indices.
#[derive(Clone, Debug)]
pub enum DifferenceTensor<T: Real> {
    /// Polynomial components, already projected to the admissible subspace.
    Polynomial { form: SymplecticForm<T>, components: Tensor<Polynomial<T>> },
    /// The Schwarzian of a map.
    Schwarzian(ContactMap<T>),
}

impl<T: Real> DifferenceTensor<T> {
    pub fn zero(form: SymplecticForm<T>) -> Self {
        let m = form.hyperplane_dim();
        let d = form.manifold_dim();
        DifferenceTensor::Polynomial { form, components: Tensor::filled(m, 3, Polynomial::zero(d)) }
    }

    /// Projects arbitrary lowered components to `Π_i(jk) = Π_ijk`,
    /// `Π_[ijk] = 0`, completely trace-free.
    pub fn from_raw(form: SymplecticForm<T>, raw: &Tensor<Polynomial<T>>) -> Result<Self> {
        if raw.dim() != form.hyperplane_dim() || raw.rank() != 3 {
            return Err(Error::Shape("difference tensor needs three hyperplane indices".into()));
        }
        let components = project_to_admissible(&form, raw);
        Ok(DifferenceTensor::Polynomial { form, components })
    }

    /// Totally symmetrises the raw components; the result is automatically
    /// trace-free.
    pub fn symmetric_from_raw(form: SymplecticForm<T>, raw: &Tensor<Polynomial<T>>) -> Result<Self> {
        if raw.dim() != form.hyperplane_dim() || raw.rank() != 3 {
            return Err(Error::Shape("difference tensor needs three hyperplane indices".into()));
        }
        let sixth = T::one() / T::from_i64(6);
        let m = form.hyperplane_dim();
        let components = Tensor::from_fn(m, 3, |idx| {
            let (i, j, k) = (idx[0], idx[1], idx[2]);
            [[i, j, k], [i, k, j], [j, i, k], [j, k, i], [k, i, j], [k, j, i]]
                .iter()
                .fold(Polynomial::zero(form.manifold_dim()), |acc, p| acc.add(raw.get(p)))
                .scale(sixth)
        });
        Ok(DifferenceTensor::Polynomial { form, components })
    }

    pub fn schwarzian(map: ContactMap<T>) -> Self {
        DifferenceTensor::Schwarzian(map)
    }

    pub fn form(&self) -> &SymplecticForm<T> {
        match self {
            DifferenceTensor::Polynomial { form, .. } => form,
            DifferenceTensor::Schwarzian(map) => map.form(),
        }
    }

    pub fn lowered_jets(&self, x: &[T], order: usize) -> Result<Tensor<Jet<T>>> {
        match self {
            DifferenceTensor::Polynomial { components, .. } => {
                Tensor::try_from_fn(components.dim(), 3, |idx| components.get(idx).jet_at(x, order))
            }
            DifferenceTensor::Schwarzian(map) => Ok(lower_last(&schwarzian_jets(map, x, order)?, map.form())),
        }
    }

    /// `Π_ij^k = ω^{kq} Π_ijq`.
    pub fn upper_jets(&self, x: &[T], order: usize) -> Result<Tensor<Jet<T>>> {
        let low = self.lowered_jets(x, order)?;
        Ok(raise_last(&low, self.form()))
    }

    /// Largest violation at `x` of `Π_i(jk) = Π_ijk` and of the trace
    /// conditions, as `(symmetry, trace)`.
    pub fn residuals_at(&self, x: &[T]) -> Result<(f64, f64)> {
        let low = self.lowered_jets(x, 0)?.values();
        let form = self.form();
        let up = raise_last(&low.map(|&v| Jet::constant(1, 0, v)), form).values();
        Ok((low.asymmetry(1, 2), crate::schwarzian::trace_residual_rank3(&up, &low, form)))
    }

    /// Checks the admissibility conditions at the given points.
    pub fn validate(&self, points: &[Vec<T>], tol: f64) -> Result<()> {
        for x in points {
            let (sym, tr) = self.residuals_at(x)?;
            if sym > tol || tr > tol {
                return Err(Error::InvalidDifferenceTensor(format!(
                    "symmetry residual {sym:e}, trace residual {tr:e} at {x:?}"
                )));
            }
        }
        Ok(())
    }

    /// Whether `Π_ijk` is totally symmetric at `x`, within `tol`.
    pub fn is_totally_symmetric_at(&self, x: &[T], tol: f64) -> Result<bool> {
        let low = self.lowered_jets(x, 0)?.values();
        Ok(low.asymmetry(0, 1).max(low.asymmetry(1, 2)) <= tol)
    }
}

/// `T_ij^k = ω^{kq} T_ijq`.
pub fn raise_last<T: Real>(t: &Tensor<Jet<T>>, form: &SymplecticForm<T>) -> Tensor<Jet<T>> {
    let m = form.hyperplane_dim();
    let wu = form.omega_upper();
    Tensor::from_fn(m, 3, |idx| {
        let mut acc = t.get(&[idx[0], idx[1], 0]).zero_like();
        for q in 0..m {
            if wu[(idx[2], q)] != T::zero() {
                acc += &t.get(&[idx[0], idx[1], q]).scale(wu[(idx[2], q)]);
            }
        }
        acc
    })
}

/// Symmetrises the last two slots, then removes the `ω`-trace through
/// `Z(a)_ijk = ω_ij a_k + ω_ik a_j` with `a_k = ω^{ij}Π_ijk / (2n − 1)`.
pub fn project_to_admissible<T: Real>(form: &SymplecticForm<T>, raw: &Tensor<Polynomial<T>>) -> Tensor<Polynomial<T>> {
    let m = form.hyperplane_dim();
    let d = form.manifold_dim();
    let w = form.omega();
    let wu = form.omega_upper();
    let half = T::from_f64(0.5);
    let sym = Tensor::from_fn(m, 3, |idx| raw.get(idx).add(raw.get(&[idx[0], idx[2], idx[1]])).scale(half));
    let inv = T::one() / T::from_i64(d as i64);
    let a: Vec<Polynomial<T>> = (0..m)
        .map(|k| {
            let mut acc = Polynomial::zero(d);
            for i in 0..m {
                for j in 0..m {
                    if wu[(i, j)] != T::zero() {
                        acc = acc.add(&sym.get(&[i, j, k]).scale(wu[(i, j)]));
                    }
                }
            }
            acc.scale(inv)
        })
        .collect();
    Tensor::from_fn(m, 3, |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        sym.get(idx).sub(&a[k].scale(w[(i, j)])).sub(&a[j].scale(w[(i, k)]))
    })
}

/// `flat + Π`: `Γ_ij^k = Π_ij^k`, every other block zero.
pub struct PiConnection<T: Real> {
    pi: DifferenceTensor<T>,
}

impl<T: Real> PiConnection<T> {
    pub fn new(pi: DifferenceTensor<T>) -> Self {
        PiConnection { pi }
    }

    pub fn pi(&self) -> &DifferenceTensor<T> {
        &self.pi
    }
}

impl<T: Real> ConnectionField<T> for PiConnection<T> {
    fn form(&self) -> &SymplecticForm<T> {
        self.pi.form()
    }

    fn gamma_jets(&self, x: &[T], order: usize) -> Result<Tensor<Jet<T>>> {
        let up = self.pi.upper_jets(x, order)?;
        let m = up.dim();
        let d = m + 1;
        let zero = Jet::constant(d, order, T::zero());
        Ok(Tensor::from_fn(d, 3, |idx| {
            if idx.iter().all(|&v| v < m) {
                up.get(idx).clone()
            } else {
                zero.clone()
            }
        }))
    }
}

/// `flat + Π` after validating `Π` at the given points.
pub fn connection_from_pi<T: Real>(pi: DifferenceTensor<T>, points: &[Vec<T>], tol: f64) -> Result<PiConnection<T>> {
    pi.validate(points, tol)?;
    Ok(PiConnection::new(pi))
}

/// Normalization residuals of a connection at `x`.
pub fn connection_normalization<T: Real>(conn: &dyn ConnectionField<T>, x: &[T]) -> Result<NormalizationResiduals> {
    Ok(normalization_residuals(&conn.gamma_at(x)?, conn.form()))
}

fn frame_derivatives<T: Real>(frame: &FlatFrame<T>, t: &Tensor<Jet<T>>) -> Result<Vec<Tensor<Jet<T>>>> {
    (0..frame.form().manifold_dim())
        .map(|a| Tensor::try_from_fn(t.dim(), t.rank(), |idx| frame.apply(a, t.get(idx))))
        .collect()
}

/// `R_αβγ^σ = X_α Γ_βγ^σ − X_β Γ_αγ^σ + Γ_βγ^ρ Γ_αρ^σ − Γ_αγ^ρ Γ_βρ^σ + ω_αβ Γ_0γ^σ`.
fn curvature_from_gamma<T: Real>(frame: &FlatFrame<T>, gamma: &Tensor<Jet<T>>) -> Result<Tensor<Jet<T>>> {
    let form = frame.form();
    let d = gamma.dim();
    let r = d - 1;
    let xg = frame_derivatives(frame, gamma)?;
    let order = gamma.get(&[0, 0, 0]).order() - 1;
    let g = gamma.truncate(order);
    Ok(Tensor::from_fn(d, 4, |idx| {
        let (a, b, c, s) = (idx[0], idx[1], idx[2], idx[3]);
        let mut v = xg[a].get(&[b, c, s]) - xg[b].get(&[a, c, s]);
        for rho in 0..d {
            v += &(g.get(&[b, c, rho]) * g.get(&[a, rho, s]));
            v -= &(g.get(&[a, c, rho]) * g.get(&[b, rho, s]));
        }
        let w = form.omega_frame(a, b);
        if w != T::zero() {
            v += &g.get(&[r, c, s]).scale(w);
        }
        v
    }))
}

/// `R_αβγ^σ` at `x`.
pub fn curvature_tensor<T: Real>(conn: &dyn ConnectionField<T>, x: &[T]) -> Result<Tensor<T>> {
    let frame = FlatFrame::new(conn.form().clone(), x, 1)?;
    Ok(curvature_from_gamma(&frame, &conn.gamma_jets(x, 1)?)?.values())
}

type JetMatrix2<T> = Vec<Vec<Jet<T>>>;

/// Jets of the curvature and everything built from it.
struct Analysis<T: Real> {
    form: SymplecticForm<T>,
    frame: FlatFrame<T>,
    gamma: Tensor<Jet<T>>,
    r: Tensor<Jet<T>>,
    ricci: JetMatrix2<T>,
    s: JetMatrix2<T>,
    p: JetMatrix2<T>,
    q: JetMatrix2<T>,
    /// `τ_ij^k = 2Γ_[ij]^k`
    tau: Tensor<Jet<T>>,
}

fn analyse<T: Real>(conn: &dyn ConnectionField<T>, x: &[T], order: usize) -> Result<Analysis<T>> {
    let form = conn.form().clone();
    let m = form.hyperplane_dim();
    let n = form.dims().n() as i64;
    let frame = FlatFrame::new(form.clone(), x, order)?;
    let gamma = conn.gamma_jets(x, order)?;
    let r = curvature_from_gamma(&frame, &gamma)?;
    let w = form.omega();
    let wu = form.omega_upper();
    let zero = r.get(&[0, 0, 0, 0]).zero_like();
    let mat = |f: &dyn Fn(usize, usize) -> Jet<T>| -> JetMatrix2<T> {
        (0..m).map(|i| (0..m).map(|j| f(i, j)).collect()).collect()
    };
    // R_ij = R_ipj^p
    let ricci = mat(&|i, j| (0..m).fold(zero.clone(), |acc, p| acc + r.get(&[i, p, j, p])));
    // S_ij = ω^{pq} R_pqi^l ω_lj
    let s = mat(&|i, j| {
        let mut acc = zero.clone();
        for p in 0..m {
            for q in 0..m {
                if wu[(p, q)] == T::zero() {
                    continue;
                }
                for l in 0..m {
                    if w[(l, j)] != T::zero() {
                        acc += &r.get(&[p, q, i, l]).scale(wu[(p, q)] * w[(l, j)]);
                    }
                }
            }
        }
        acc
    });
    let nt = T::from_i64(n);
    let two_n1 = T::from_i64(2 * n - 1);
    let half = T::from_f64(0.5);
    let quarter = T::from_f64(0.25);
    let skew = |i: usize, j: usize| (&ricci[i][j] - &ricci[j][i]).scale(half);
    let cp = T::one() / T::from_i64(n * (2 * n - 3));
    let p = mat(&|i, j| {
        (ricci[i][j].scale(nt - T::one()) - skew(i, j).scale(T::one() / two_n1) + s[i][j].scale(quarter)).scale(cp)
    });
    let cq = T::one() / T::from_i64(3 - 2 * n);
    let q = mat(&|i, j| {
        (ricci[i][j].scale(T::from_i64(2)) + &s[i][j] - skew(i, j).scale(T::from_i64(4) / two_n1)).scale(cq)
    });
    let tau = Tensor::from_fn(m, 3, |idx| gamma.get(idx) - gamma.get(&[idx[1], idx[0], idx[2]]));
    Ok(Analysis { form, frame, gamma, r, ricci, s, p, q, tau })
}

/// Curvature quantities of a connection at a point.
#[derive(Clone, Debug)]
pub struct CurvatureData<T> {
    /// `R_αβγ^σ` over all frame indices.
    pub r: Tensor<T>,
    /// `τ_ij^k`
    pub torsion: Tensor<T>,
    /// `R_ij = R_ipj^p`
    pub ricci: Matrix<T>,
    /// `S_ij = R_p^p_ij`
    pub s: Matrix<T>,
    pub p: Matrix<T>,
    pub q: Matrix<T>,
    /// `W_ijk^l`
    pub weyl: Tensor<T>,
    /// `C_ijk`, present when second derivatives of `Γ` were available.
    pub cotton: Option<Tensor<T>>,
}

fn mat_values<T: Real>(m: &JetMatrix2<T>) -> Matrix<T> {
    Matrix::from_fn(m.len(), m.len(), |i, j| m[i][j].value())
}

/// `W_ijk^l = R_ijk^l + 2δ_[i^l P_j]k + 2ω_k[j P_i]^l + 2ω_ij P_k^l + ω_ij Q_k^l`.
fn weyl_from<T: Real>(an: &Analysis<T>) -> Tensor<T> {
    let m = an.form.hyperplane_dim();
    let w = an.form.omega();
    let wu = an.form.omega_upper();
    let p = mat_values(&an.p);
    let q = mat_values(&an.q);
    // P_i^l = ω^{lq} P_iq
    let raise = |a: &Matrix<T>| Matrix::from_fn(m, m, |i, l| (0..m).fold(T::zero(), |acc, k| acc + wu[(l, k)] * a[(i, k)]));
    let pu = raise(&p);
    let qu = raise(&q);
    let delta = |a: usize, b: usize| if a == b { T::one() } else { T::zero() };
    let two = T::from_i64(2);
    Tensor::from_fn(m, 4, |idx| {
        let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
        an.r.get(idx).value() + delta(i, l) * p[(j, k)] - delta(j, l) * p[(i, k)] + w[(k, j)] * pu[(i, l)]
            - w[(k, i)] * pu[(j, l)]
            + two * w[(i, j)] * pu[(k, l)]
            + w[(i, j)] * qu[(k, l)]
    })
}

/// `∇_i T_jk` for a hyperplane two-tensor with the connection's own
/// coefficients (entry `[i][j][k]`).
fn covariant_derivative_2<T: Real>(an: &Analysis<T>, t: &JetMatrix2<T>) -> Result<Vec<Vec<Vec<T>>>> {
    let m = an.form.hyperplane_dim();
    let mut out = vec![vec![vec![T::zero(); m]; m]; m];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let mut v = an.frame.apply(i, &t[j][k])?.value();
                for s in 0..m {
                    v -= an.gamma.get(&[i, j, s]).value() * t[s][k].value();
                    v -= an.gamma.get(&[i, k, s]).value() * t[j][s].value();
                }
                out[i][j][k] = v;
            }
        }
    }
    Ok(out)
}

/// `C_ijk = R_0ijk − (2∇_iP_jk + ∇_iQ_jk) − (2/(2n−1))(2ω_i(k ∇^pP_j)p + ω_i(k ∇^pQ_j)p)`.
fn cotton_from<T: Real>(an: &Analysis<T>) -> Result<Tensor<T>> {
    let m = an.form.hyperplane_dim();
    let r0 = m;
    let w = an.form.omega();
    let wu = an.form.omega_upper();
    let dp = covariant_derivative_2(an, &an.p)?;
    let dq = covariant_derivative_2(an, &an.q)?;
    // ∇^p T_jp = ω^{pq} ∇_q T_jp
    let div = |dt: &Vec<Vec<Vec<T>>>| -> Vec<T> {
        (0..m)
            .map(|j| {
                let mut acc = T::zero();
                for p in 0..m {
                    for q in 0..m {
                        acc += wu[(p, q)] * dt[q][j][p];
                    }
                }
                acc
            })
            .collect()
    };
    let divp = div(&dp);
    let divq = div(&dq);
    let half = T::from_f64(0.5);
    let two = T::from_i64(2);
    let c2 = two / T::from_i64(m as i64 + 1);
    Ok(Tensor::from_fn(m, 3, |idx| {
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        // R_0ijk = R_0ij^l ω_lk
        let r0ijk = (0..m).fold(T::zero(), |acc, l| acc + an.r.get(&[r0, i, j, l]).value() * w[(l, k)]);
        let sym = |v: &Vec<T>| (w[(i, k)] * v[j] + w[(i, j)] * v[k]) * half;
        r0ijk - (two * dp[i][j][k] + dq[i][j][k]) - c2 * (two * sym(&divp) + sym(&divq))
    }))
}

/// `W_ijk^l` at `x`, from first derivatives of `Γ`.
pub fn weyl_tensor<T: Real>(conn: &dyn ConnectionField<T>, x: &[T]) -> Result<Tensor<T>> {
    Ok(weyl_from(&analyse(conn, x, 1)?))
}

/// `W_ijk^l` and `C_ijk` at `x`.
pub fn weyl_cotton<T: Real>(conn: &dyn ConnectionField<T>, x: &[T]) -> Result<(Tensor<T>, Tensor<T>)> {
    let an = analyse(conn, x, 2)?;
    Ok((weyl_from(&an), cotton_from(&an)?))
}

/// Every curvature quantity at `x`; `C` needs second derivatives of `Γ`.
pub fn curvature_data<T: Real>(conn: &dyn ConnectionField<T>, x: &[T], with_cotton: bool) -> Result<CurvatureData<T>> {
    let an = analyse(conn, x, if with_cotton { 2 } else { 1 })?;
    let cotton = if with_cotton { Some(cotton_from(&an)?) } else { None };
    Ok(CurvatureData {
        r: an.r.values(),
        torsion: an.tau.values(),
        ricci: mat_values(&an.ricci),
        s: mat_values(&an.s),
        p: mat_values(&an.p),
        q: mat_values(&an.q),
        weyl: weyl_from(&an),
        cotton,
    })
}

/// `(R_ij, S_ij, P_ij, Q_ij)` at `x`.
pub fn pq_traces<T: Real>(conn: &dyn ConnectionField<T>, x: &[T]) -> Result<(Matrix<T>, Matrix<T>, Matrix<T>, Matrix<T>)> {
    let an = analyse(conn, x, 1)?;
    Ok((mat_values(&an.ricci), mat_values(&an.s), mat_values(&an.p), mat_values(&an.q)))
}

/// One residual per identity, in a fixed order.
#[derive(Clone, Debug, Default)]
pub struct IdentityReport {
    pub entries: Vec<(&'static str, f64)>,
    /// Whether the torsion vanished at the point, enabling the torsion-free
    /// identities.
    pub torsion_free: bool,
}

impl IdentityReport {
    pub fn max(&self) -> f64 {
        self.entries.iter().map(|e| e.1).fold(0.0, f64::max)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.0 == name).map(|e| e.1)
    }

    fn push(&mut self, name: &'static str, v: f64) {
        match self.entries.iter_mut().find(|e| e.0 == name) {
            Some(e) => e.1 = e.1.max(v),
            None => self.entries.push((name, v)),
        }
    }

    /// Entry-wise maximum with another report.
    pub fn merge(&mut self, other: &IdentityReport) {
        for &(name, v) in &other.entries {
            self.push(name, v);
        }
        self.torsion_free &= other.torsion_free;
    }
}

/// Torsion below this counts as zero when selecting the torsion-free identities.
pub const TORSION_FREE_EPSILON: f64 = 1e-12;

/// Residuals of the curvature identity suite at `x`.
pub fn identity_report<T: Real>(conn: &dyn ConnectionField<T>, x: &[T]) -> Result<IdentityReport> {
    let an = analyse(conn, x, 2)?;
    let form = &an.form;
    let m = form.hyperplane_dim();
    let d = m + 1;
    let n = form.dims().n() as i64;
    let w = form.omega();
    let wu = form.omega_upper();
    let f = |v: T| v.as_f64().abs();
    let ric = mat_values(&an.ricci);
    let s = mat_values(&an.s);
    let p = mat_values(&an.p);
    let q = mat_values(&an.q);
    let weyl = weyl_from(&an);
    let cotton = cotton_from(&an)?;
    let tau = an.tau.values();
    let mut rep = IdentityReport { entries: Vec::new(), torsion_free: tau.max_abs() <= TORSION_FREE_EPSILON };

    let mut anti = 0.0f64;
    let mut reeb = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for s_ in 0..d {
                    anti = anti.max(f(an.r.get(&[a, b, c, s_]).value() + an.r.get(&[b, a, c, s_]).value()));
                }
                reeb = reeb.max(f(an.r.get(&[a, b, c, m]).value()));
            }
        }
    }
    rep.push("R_αβγ^σ = −R_βαγ^σ", anti);
    rep.push("R_αβγ^0 = 0", reeb);

    let two = T::from_i64(2);
    let half = T::from_f64(0.5);
    let nn = T::from_i64(n);
    let c21 = two / T::from_i64(2 * n - 1);
    let (mut e1, mut e2, mut e3, mut e4) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..m {
        for j in 0..m {
            e1 = e1.max(f(two * (T::one() - nn) * q[(i, j)] + q[(j, i)] - two * ric[(i, j)] - s[(i, j)]));
            e2 = e2.max(f(q[(i, j)] - two * ric[(i, j)] + T::from_i64(4 * n) * p[(i, j)]));
            let qs = (q[(i, j)] - q[(j, i)]) * half;
            let ps = (p[(i, j)] - p[(j, i)]) * half;
            let rs = (ric[(i, j)] - ric[(j, i)]) * half;
            e3 = e3.max(f(qs + two * ps));
            e4 = e4.max(f(qs + c21 * rs));
        }
    }
    rep.push("2(1−n)Q_ij + Q_ji = 2R_ij + S_ij", e1);
    rep.push("Q_ij = 2R_ij − 4nP_ij", e2);
    rep.push("Q_[ij] = −2P_[ij]", e3);
    rep.push("Q_[ij] = −(2/(2n−1))R_[ij]", e4);

    let trace = |a: &Matrix<T>| {
        let mut acc = T::zero();
        for i in 0..m {
            for j in 0..m {
                acc += wu[(i, j)] * a[(i, j)];
            }
        }
        f(acc)
    };
    rep.push("R_p^p = 0", trace(&ric));
    rep.push("P_p^p = 0", trace(&p));
    rep.push("Q_p^p = 0", trace(&q));

    let (mut w1, mut w2, mut w3) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..m {
        for j in 0..m {
            let mut a = T::zero();
            let mut b = T::zero();
            let mut c = T::zero();
            for pp in 0..m {
                b += *weyl.get(&[i, j, pp, pp]);
                c += *weyl.get(&[i, pp, j, pp]);
                for qq in 0..m {
                    if wu[(pp, qq)] == T::zero() {
                        continue;
                    }
                    for l in 0..m {
                        a += wu[(pp, qq)] * *weyl.get(&[pp, qq, i, l]) * w[(l, j)];
                    }
                }
            }
            w1 = w1.max(f(a));
            w2 = w2.max(f(b));
            w3 = w3.max(f(c + half * q[(i, j)]));
        }
    }
    rep.push("W_p^p_ij = 0", w1);
    rep.push("W_ijp^p = 0", w2);
    rep.push("W_ipj^p = −½Q_ij", w3);

    let (mut c1, mut c2, mut c3) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..m {
        let mut a = T::zero();
        let mut b = T::zero();
        for pp in 0..m {
            for qq in 0..m {
                a += wu[(pp, qq)] * *cotton.get(&[i, pp, qq]);
                b += wu[(pp, qq)] * *cotton.get(&[pp, qq, i]);
            }
        }
        c1 = c1.max(f(a));
        c2 = c2.max(f(b));
    }
    c3 = c3.max(cotton.asymmetry(1, 2));
    rep.push("C_ip^p = 0", c1);
    rep.push("C_p^p_k = 0", c2);
    rep.push("C_i[jk] = 0", c3);

    rep.push("S_ij + 2R_ij = 2∇_pτ^p_ij − τ^pq_j τ_pqi", bianchi_residual(&an, &ric, &s)?);

    if rep.torsion_free {
        let mut z = 0.0f64;
        let mut pr = 0.0f64;
        let inv = T::one() / T::from_i64(2 * n);
        for i in 0..m {
            for j in 0..m {
                z = z.max(f(q[(i, j)]));
                pr = pr.max(f(p[(i, j)] - inv * ric[(i, j)])).max(f(p[(i, j)] - p[(j, i)]));
            }
        }
        rep.push("Q_ij = 0 (torsion-free)", z);
        rep.push("P_ij = P_(ij) = R_ij/2n (torsion-free)", pr);
    }
    if n == 2 {
        rep.push("W_ijk^l = 0 (dimension three)", weyl.max_abs());
        rep.push("τ_ij^k = 0 (dimension three)", tau.max_abs());
        rep.push(
            "C_ijk totally symmetric (dimension three)",
            cotton.asymmetry(0, 1).max(cotton.asymmetry(1, 2)),
        );
    }
    Ok(rep)
}

/// Residual of `S_ij + 2R_ij = 2∇_pτ^p_ij − τ^pq_j τ_pqi`, with
/// `τ_kij = τ_ki^l ω_lj`, `τ^p_ij = ω^{pk} τ_kij`, `τ^pq_j = ω^{pa}ω^{qb}τ_abj`.
fn bianchi_residual<T: Real>(an: &Analysis<T>, ric: &Matrix<T>, s: &Matrix<T>) -> Result<f64> {
    let m = an.form.hyperplane_dim();
    let wu = an.form.omega_upper();
    let low = lower_last(&an.tau, &an.form);
    let lv = low.values();
    // ∇_a τ_bcd with the connection's coefficients
    let nabla = |a: usize, b: usize, c: usize, dd: usize| -> Result<T> {
        let mut v = an.frame.apply(a, low.get(&[b, c, dd]))?.value();
        for s_ in 0..m {
            v -= an.gamma.get(&[a, b, s_]).value() * *lv.get(&[s_, c, dd]);
            v -= an.gamma.get(&[a, c, s_]).value() * *lv.get(&[b, s_, dd]);
            v -= an.gamma.get(&[a, dd, s_]).value() * *lv.get(&[b, c, s_]);
        }
        Ok(v)
    };
    let two = T::from_i64(2);
    let mut worst = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            let mut div = T::zero();
            let mut quad = T::zero();
            for p in 0..m {
                for k in 0..m {
                    if wu[(p, k)] != T::zero() {
                        div += wu[(p, k)] * nabla(p, k, i, j)?;
                    }
                }
                for q in 0..m {
                    for a in 0..m {
                        for b in 0..m {
                            let c = wu[(p, a)] * wu[(q, b)];
                            if c != T::zero() {
                                quad += c * *lv.get(&[a, b, j]) * *lv.get(&[p, q, i]);
                            }
                        }
                    }
                }
            }
            let v = s[(i, j)] + two * ric[(i, j)] - two * div + quad;
            worst = worst.max(v.as_f64().abs());
        }
    }
    Ok(worst)
}

/// Both forms of the integrability defect of a candidate Schwarzian `A`.
#[derive(Clone, Debug)]
pub struct IntegrabilityReport {
    /// Largest entry of the displayed four-index expression.
    pub displayed: f64,
    /// Largest entry of the trace-free part of
    /// `∇_[i A_j]kl − A_k[i^p A_j]lp`.
    pub trace_free: f64,
    /// Largest entry of `W(flat + A)`.
    pub weyl: f64,
}

impl IntegrabilityReport {
    /// `displayed / trace_free`, when the latter is nonzero.
    pub fn ratio(&self) -> Option<f64> {
        (self.trace_free > 0.0).then(|| self.displayed / self.trace_free)
    }

    /// Whether the two defects and the Weyl oracle agree on vanishing.
    pub fn zero_sets_agree(&self, tol: f64) -> bool {
        let z = [self.displayed <= tol, self.trace_free <= tol, self.weyl <= tol];
        z.iter().all(|&b| b == z[0])
    }
}

/// Integrability defects at `x` (dimension at least five).
pub fn integrability_defect<T: Real>(a: &DifferenceTensor<T>, x: &[T]) -> Result<IntegrabilityReport> {
    let form = a.form();
    form.dims().require_at_least_five_dimensional()?;
    let m = form.hyperplane_dim();
    let n = form.dims().n() as f64;
    let w: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| form.omega()[(i, j)].as_f64()).collect()).collect();
    let low_j = a.lowered_jets(x, 1)?;
    let up_j = raise_last(&low_j, form);
    let frame = FlatFrame::new(form.clone(), x, 1)?;
    let xa = frame_derivatives(&frame, &low_j)?;
    let xau = frame_derivatives(&frame, &up_j)?;
    let lo = |i: usize, j: usize, k: usize| low_j.get(&[i, j, k]).value().as_f64();
    let up = |i: usize, j: usize, k: usize| up_j.get(&[i, j, k]).value().as_f64();
    let nab = |p: usize, i: usize, j: usize, k: usize| xa[p].get(&[i, j, k]).value().as_f64();
    // ∇_p A_kl^p and A_kq^p A_pl^q
    let mut div = vec![vec![0.0; m]; m];
    let mut aa = vec![vec![0.0; m]; m];
    for k in 0..m {
        for l in 0..m {
            for p in 0..m {
                div[k][l] += xau[p].get(&[k, l, p]).value().as_f64();
                for q in 0..m {
                    aa[k][l] += up(k, q, p) * up(p, l, q);
                }
            }
        }
    }
    let idx = |i: usize, j: usize, k: usize, l: usize| ((i * m + j) * m + k) * m + l;
    let mut xt = vec![0.0; m * m * m * m];
    let mut disp = vec![0.0; m * m * m * m];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let mut quad = 0.0;
                    for p in 0..m {
                        quad += up(k, i, p) * lo(j, l, p) - up(k, j, p) * lo(i, l, p);
                    }
                    let x_ijkl = 0.5 * (nab(i, j, k, l) - nab(j, i, k, l)) - 0.5 * quad;
                    xt[idx(i, j, k, l)] = x_ijkl;
                    disp[idx(i, j, k, l)] = 2.0 * n * x_ijkl - w[i][j] * (div[k][l] - aa[k][l])
                        + 0.5 * (div[k][i] * w[j][l] - div[k][j] * w[i][l])
                        - 0.5 * (aa[k][i] * w[j][l] - aa[k][j] * w[i][l])
                        + 0.5 * (div[l][i] * w[j][k] - div[l][j] * w[i][k])
                        - 0.5 * (aa[l][i] * w[j][k] - aa[l][j] * w[i][k]);
                }
            }
        }
    }
    let tf = trace_free_part(&xt, &form.omega_upper().to_rows().iter().map(|r| r.iter().map(|v| v.as_f64()).collect()).collect::<Vec<Vec<f64>>>());
    let weyl = weyl_tensor(&PiConnection::new(a.clone()), x)?.max_abs();
    Ok(IntegrabilityReport {
        displayed: disp.iter().fold(0.0f64, |acc, v| acc.max(v.abs())),
        trace_free: tf.iter().fold(0.0f64, |acc, v| acc.max(v.abs())),
        weyl,
    })
}

/// Orthogonal projection of a four-index tensor onto the common kernel of
/// its six `ω`-contractions.
pub fn trace_free_part(t: &[f64], omega_upper: &[Vec<f64>]) -> Vec<f64> {
    let m = omega_upper.len();
    let len = m * m * m * m;
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let rows = pairs.len() * m * m;
    let mut tr = DMatrix::<f64>::zeros(rows, len);
    for (pi, &(s1, s2)) in pairs.iter().enumerate() {
        let free: Vec<usize> = (0..4).filter(|&s| s != s1 && s != s2).collect();
        for u in 0..m {
            for v in 0..m {
                let row = (pi * m + u) * m + v;
                for a in 0..m {
                    for b in 0..m {
                        let c = omega_upper[a][b];
                        if c == 0.0 {
                            continue;
                        }
                        let mut id = [0usize; 4];
                        id[s1] = a;
                        id[s2] = b;
                        id[free[0]] = u;
                        id[free[1]] = v;
                        tr[(row, ((id[0] * m + id[1]) * m + id[2]) * m + id[3])] += c;
                    }
                }
            }
        }
    }
    let tv = nalgebra::DVector::from_column_slice(t);
    let gram = &tr * tr.transpose();
    let pinv = gram.pseudo_inverse(1e-10).expect("pseudo-inverse of a Gram matrix");
    let correction = tr.transpose() * (pinv * (&tr * &tv));
    (tv - correction).iter().copied().collect()
}

/// Reads lowered components from a JSON list of
/// `{"indices": [i, j, k], "coeffs": [{"coeff": c, "powers": [..]}, ..]}`
/// (indices 1-based) and projects them to the admissible subspace.
pub fn pi_from_json<T: Real>(form: SymplecticForm<T>, v: &Value) -> Result<DifferenceTensor<T>> {
    let raw = raw_from_json(&form, v)?;
    DifferenceTensor::from_raw(form, &raw)
}

fn raw_from_json<T: Real>(form: &SymplecticForm<T>, v: &Value) -> Result<Tensor<Polynomial<T>>> {
    let m = form.hyperplane_dim();
    let d = form.manifold_dim();
    let mut raw = Tensor::filled(m, 3, Polynomial::zero(d));
    let list = v.as_array().ok_or_else(|| Error::Malformed("difference tensor must be a JSON list".into()))?;
    for entry in list {
        let idx: Vec<usize> = entry
            .get("indices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Malformed("entry without \"indices\"".into()))?
            .iter()
            .map(|i| i.as_u64().map(|v| v as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Malformed("indices must be positive integers".into()))?;
        if idx.len() != 3 || idx.iter().any(|&i| i == 0 || i > m) {
            return Err(Error::Malformed(format!("indices {idx:?} out of range 1..={m}")));
        }
        let idx: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        let coeffs = entry
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Malformed("entry without \"coeffs\"".into()))?;
        let mut p = raw.get(&idx).clone();
        for term in coeffs {
            let c = term
                .get("coeff")
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::Malformed("term without numeric \"coeff\"".into()))?;
            let powers: Vec<u8> = term
                .get("powers")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Malformed("term without \"powers\"".into()))?
                .iter()
                .map(|e| e.as_u64().filter(|&e| e < 256).map(|e| e as u8))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Malformed("powers must be small nonnegative integers".into()))?;
            if powers.len() != d {
                return Err(Error::Malformed(format!("powers must have {d} entries")));
            }
            p = p.add(&Polynomial::monomial(d, T::from_f64(c), &powers));
        }
        raw.set(&idx, p);
    }
    Ok(raw)
}

pub fn pi_from_json_str<T: Real>(form: SymplecticForm<T>, s: &str) -> Result<DifferenceTensor<T>> {
    pi_from_json(form, &serde_json::from_str(s)?)
}

/// JSON form of polynomial components (1-based indices), readable by
/// [`pi_from_json`].
pub fn pi_to_json<T: Real>(pi: &DifferenceTensor<T>) -> Result<Value> {
    let DifferenceTensor::Polynomial { components, .. } = pi else {
        return Err(Error::Malformed("only polynomial difference tensors serialize".into()));
    };
    let mut out = Vec::new();
    for idx in components.indices() {
        let p = components.get(&idx);
        if p.is_zero() {
            continue;
        }
        let coeffs: Vec<Value> =
            p.terms().map(|(k, c)| json!({"coeff": c.as_f64(), "powers": k})).collect();
        out.push(json!({"indices": idx.iter().map(|i| i + 1).collect::<Vec<_>>(), "coeffs": coeffs}));
    }
    Ok(Value::Array(out))
}
