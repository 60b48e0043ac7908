use std::fmt::Write as _;

use anyhow::{bail, ensure, Context, Result};
use contact_schwarzian::algebra::sp_basis;
use contact_schwarzian::corpus::{corpus, random_pi, random_point, random_shear, sample_points};
use contact_schwarzian::curvature::{
    connection_from_map, curvature_tensor, identity_report, integrability_defect, pi_from_json_str, weyl_cotton,
    weyl_tensor, DifferenceTensor, PiConnection,
};
use contact_schwarzian::hessian::{
    commutator_defect, contact_hessian, hessian_kernel_dimension, hessian_polynomials, infinitesimal_action,
    kernel_basis, reconstruct_ratio, DensityField, COMMUTATOR_SIGN,
};
use contact_schwarzian::pathgeom::{integrate_geodesic, line_fit_residual, CubicCoefficients, CubicSlopeOde, PathState};
use contact_schwarzian::schwarzian::{
    cocycle_defect, lambda_identities, normalized_representative, pullback_tensor, schwarzian as schwarzian_of, CovariantReading,
};
use contact_schwarzian::{ContactMap64, Dimensions, Field, Form64, Polynomial, SymplecticForm};
use num_rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::report::{number, Report};
use crate::{Common, OdeArgs};

/// Threshold separating "clearly nonzero" integrability defects.
const NONZERO_DEFECT: f64 = 1e-3;
/// Accepted deviation of the RK4 step-halving error ratio from 16.
const ORDER_FACTOR_TOLERANCE: f64 = 3.0;

struct Setup {
    form: Form64,
    n: usize,
    rng: ChaCha8Rng,
    maps: Vec<(String, ContactMap64)>,
}

fn load_maps(c: &Common) -> Result<Vec<(String, ContactMap64)>> {
    c.maps
        .iter()
        .map(|path| {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let map = ContactMap64::from_json_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            Ok((path.display().to_string(), map))
        })
        .collect()
}

fn setup(c: &Common) -> Result<Setup> {
    let loaded = load_maps(c)?;
    let n = match (c.n, loaded.first()) {
        (Some(n), _) => n,
        (None, Some((_, m))) => m.dims().n(),
        (None, None) => 2,
    };
    let form = Form64::standard(Dimensions::new(n)?);
    for (name, m) in &loaded {
        ensure!(m.dims().n() == n, "{name} has n = {}, expected {n}", m.dims().n());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let maps = if loaded.is_empty() {
        corpus(&form, &mut rng, c.count)
            .into_iter()
            .enumerate()
            .map(|(k, (kind, m))| (format!("{}#{k}", kind.name()), m))
            .collect()
    } else {
        loaded
    };
    Ok(Setup { form, n, rng, maps })
}

impl Setup {
    fn points(&mut self, maps: &[&ContactMap64], count: usize) -> Result<Vec<Vec<f64>>> {
        Ok(sample_points(&self.form, &mut self.rng, maps, count)?)
    }

    /// `(map index, point)` jobs with `count` admissible points per map.
    fn jobs(&mut self, count: usize) -> Result<Vec<(usize, Vec<f64>)>> {
        let maps = self.maps.clone();
        let mut jobs = Vec::new();
        for (k, (name, m)) in maps.iter().enumerate() {
            let pts = self.points(&[m], count).with_context(|| format!("sampling points for {name}"))?;
            jobs.extend(pts.into_iter().map(|x| (k, x)));
        }
        Ok(jobs)
    }
}

/// Largest value; any error or non-finite value makes the result NaN.
fn worst<E>(values: impl IntoIterator<Item = std::result::Result<f64, E>>) -> f64 {
    let mut acc = 0.0f64;
    for v in values {
        match v {
            Ok(v) if v.is_finite() => acc = acc.max(v),
            _ => return f64::NAN,
        }
    }
    acc
}

fn coefficient_magnitude<T: Field>(p: &Polynomial<T>) -> f64 {
    p.terms().map(|(_, c)| c.magnitude()).fold(0.0, f64::max)
}

pub fn schwarzian(c: &Common) -> Result<Report> {
    let mut s = setup(c)?;
    let jobs = s.jobs(c.points)?;
    let form = s.form.clone();
    let maps = &s.maps;
    let results: Vec<_> = jobs.par_iter().map(|(k, x)| schwarzian_of(&maps[*k].1, x)).collect();
    let mut report = Report::new("schwarzian", c.seed, s.n);
    for (p, r) in results.iter().enumerate() {
        if let Ok(t) = r {
            for idx in t.upper.indices() {
                report.component("S", p, idx.iter().map(|i| i + 1).collect(), *t.upper.get(&idx));
            }
        }
    }
    report.check("schwarzian.symmetric", worst(results.iter().map(|r| r.as_ref().map(|t| t.symmetry_residual()))), c.tol_jet3);
    report.check(
        "schwarzian.trace_free",
        worst(results.iter().map(|r| r.as_ref().map(|t| t.trace_residual(&form)))),
        c.tol_jet3,
    );
    report.check("schwarzian.closed_forms_agree", worst(results.iter().map(|r| r.as_ref().map(|t| t.form_difference))), c.tol_alg);
    let linear: Vec<_> = jobs.iter().zip(&results).filter(|((k, _), _)| maps[*k].1.is_projective_linear()).collect();
    if !linear.is_empty() {
        report.check("schwarzian.vanishes_on_sp", worst(linear.iter().map(|(_, r)| r.as_ref().map(|t| t.max_abs()))), c.tol_jet3);
    }
    Ok(report)
}

pub fn check(c: &Common) -> Result<Report> {
    let mut s = setup(c)?;
    let jobs = s.jobs(c.points)?;
    let maps = &s.maps;
    let contact: Vec<f64> = jobs
        .par_iter()
        .map(|(k, x)| maps[*k].1.contact_residual(x).map(|(_, r)| r).unwrap_or(f64::NAN))
        .collect();
    let mut report = Report::new("check", c.seed, s.n);
    report.check("check.contactomorphism", worst(contact.iter().map(|&v| Ok::<_, ()>(v))), c.tol_alg);
    let contact_maps: Vec<usize> = (0..maps.len())
        .filter(|k| jobs.iter().zip(&contact).all(|((j, _), r)| j != k || *r <= c.tol_alg))
        .collect();
    let good: Vec<&(usize, Vec<f64>)> = jobs.iter().filter(|(k, _)| contact_maps.contains(k)).collect();
    if good.is_empty() {
        return Ok(report);
    }
    let lambda: Vec<_> = good.par_iter().map(|(k, x)| lambda_identities(&maps[*k].1, x).map(|l| l.max())).collect();
    report.check("check.lambda_identities", worst(lambda), c.tol_jet3);
    let normal: Vec<_> = good
        .par_iter()
        .map(|(k, x)| {
            normalized_representative(&maps[*k].1, x, CovariantReading::Representative)
                .map(|r| r.residuals.max().max(r.residuals.reeb_derivative_slot))
        })
        .collect();
    report.check("check.normalized_representative", worst(normal), c.tol_jet3);
    let linear: Vec<_> = good.iter().filter(|(k, _)| maps[*k].1.is_projective_linear()).collect();
    if !linear.is_empty() {
        let vals: Vec<_> = linear.par_iter().map(|(k, x)| schwarzian_of(&maps[*k].1, x).map(|t| t.max_abs())).collect();
        report.check("check.schwarzian_vanishes_on_sp", worst(vals), c.tol_jet3);
    }
    Ok(report)
}

pub fn cocycle(c: &Common) -> Result<Report> {
    let mut s = setup(c)?;
    let maps = s.maps.clone();
    let pairs: Vec<(usize, usize)> =
        if maps.len() == 1 { vec![(0, 0)] } else { (0..maps.len() - 1).map(|k| (k, k + 1)).collect() };
    let mut triples = Vec::new();
    for &(a, b) in &pairs {
        let comp = ContactMap64::compose(&[maps[a].1.clone(), maps[b].1.clone()])?;
        for x in s.points(&[&maps[b].1, &comp], c.points).context("sampling cocycle points")? {
            triples.push((a, b, x));
        }
    }
    let defects: Vec<_> = triples
        .par_iter()
        .map(|(a, b, x)| cocycle_defect(&maps[*a].1, &maps[*b].1, x).map(|t| t.max_abs()))
        .collect();
    let mut inverse_jobs = Vec::new();
    for (k, (_, m)) in maps.iter().enumerate() {
        for y in s.points(&[m], c.points).context("sampling inverse points")? {
            inverse_jobs.push((k, y));
        }
    }
    let inverse: Vec<_> = inverse_jobs.par_iter().map(|(k, y)| inverse_identity(&maps[*k].1, y)).collect();
    let mut report = Report::new("cocycle", c.seed, s.n);
    report.check("cocycle.defect", worst(defects), c.tol_jet3);
    report.check("cocycle.inverse_identity", worst(inverse), c.tol_jet3);
    Ok(report)
}

fn inverse_identity(phi: &ContactMap64, y: &[f64]) -> contact_schwarzian::Result<f64> {
    let x = phi.apply(y)?;
    let inv = phi.invert(y)?;
    let pulled = pullback_tensor(&inv, &schwarzian_of(phi, y)?.upper, &x)?;
    Ok(schwarzian_of(&inv, &x)?.upper.add(&pulled).max_abs())
}

pub fn hessian(c: &Common) -> Result<Report> {
    let mut s = setup(c)?;
    let form = s.form.clone();
    let mut report = Report::new("hessian", c.seed, s.n);
    let samples: Vec<Vec<f64>> = (0..c.points).map(|_| random_point(&form, &mut s.rng)).collect();
    let basis = kernel_basis(&form);
    let kernel: Vec<_> = samples
        .par_iter()
        .map(|x| {
            worst(basis.iter().map(|p| {
                contact_hessian(&DensityField::from_polynomial(1.0, p.clone()), x, &form).map(|h| h.max_abs())
            }))
        })
        .map(Ok::<_, ()>)
        .collect();
    report.check("hessian.kernel_basis", worst(kernel), c.tol_alg);

    let exact = SymplecticForm::<Rational64>::standard(form.dims());
    let dim = hessian_kernel_dimension(&exact, 3, 0.0);
    report.check("hessian.kernel_dimension", (dim as f64 - (2 * s.n) as f64).abs(), 0.0);

    let jobs = s.jobs(c.points)?;
    let maps = &s.maps;
    let rec: Vec<_> = jobs.par_iter().map(|(k, x)| reconstruct_ratio(&maps[*k].1, x)).collect();
    report.check("hessian.transformed_kernel", worst(rec.iter().map(|r| r.as_ref().map(|r| r.kernel_residual))), c.tol_jet4);
    report.check(
        "hessian.reconstruction_ratio",
        worst(rec.iter().map(|r| r.as_ref().map(|r| r.ratio_residual))),
        c.tol_alg,
    );
    report.check("hessian.schwarzian_pde", worst(rec.iter().map(|r| r.as_ref().map(|r| r.pde_residual))), c.tol_jet4);

    let gens = sp_basis(&exact).generators;
    let exact_basis = kernel_basis(&exact);
    let one = Rational64::from_integer(1);
    let preserve = gens
        .iter()
        .flat_map(|h| exact_basis.iter().map(move |p| (h, p)))
        .map(|(h, p)| {
            let image = infinitesimal_action(h, one, p, &exact);
            hessian_polynomials(&image, &exact).iter().map(coefficient_magnitude).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    report.check("hessian.action_preserves_kernel", preserve, c.tol_alg);
    let probe = exact_basis
        .iter()
        .fold(Polynomial::zero(exact.manifold_dim()), |acc, p| acc.add(&p.mul(p)));
    let sign = Rational64::from_integer(COMMUTATOR_SIGN);
    let commutator = gens
        .iter()
        .enumerate()
        .flat_map(|(i, h1)| gens.iter().skip(i + 1).map(move |h2| (h1, h2)))
        .map(|(h1, h2)| coefficient_magnitude(&commutator_defect(h1, h2, one, &probe, &exact, sign)))
        .fold(0.0, f64::max);
    report.check("hessian.commutator", commutator, c.tol_jet3);
    Ok(report)
}

pub fn curvature(c: &Common) -> Result<Report> {
    let mut s = setup(c)?;
    let form = s.form.clone();
    let pis: Vec<DifferenceTensor<f64>> = match &c.pi {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            vec![pi_from_json_str(form.clone(), &text).with_context(|| format!("parsing {}", path.display()))?]
        }
        None => (0..c.count).map(|k| random_pi(&form, &mut s.rng, k % 3, k % 2 == 1)).collect(),
    };
    let mut jobs = Vec::new();
    for k in 0..pis.len() {
        for _ in 0..c.points {
            jobs.push((k, random_point(&form, &mut s.rng)));
        }
    }
    let reports: Vec<_> =
        jobs.par_iter().map(|(k, x)| identity_report(&PiConnection::new(pis[*k].clone()), x)).collect();
    let mut report = Report::new("curvature", c.seed, s.n);
    let mut names: Vec<&'static str> = Vec::new();
    for r in reports.iter().flatten() {
        for (name, _) in &r.entries {
            if !names.contains(name) {
                names.push(name);
            }
        }
    }
    if reports.iter().any(|r| r.is_err()) {
        report.check("curvature.identity_report", f64::NAN, c.tol_jet3);
    }
    for name in names {
        let v = worst(reports.iter().flatten().map(|r| Ok::<_, ()>(r.get(name).unwrap_or(0.0))));
        report.check(format!("curvature.{name}"), v, c.tol_jet3);
    }

    let map_jobs = s.jobs(c.points.min(3))?;
    let maps = &s.maps;
    let flat: Vec<_> = map_jobs
        .par_iter()
        .map(|(k, x)| curvature_tensor(&connection_from_map(&maps[*k].1), x).map(|t| t.max_abs()))
        .collect();
    report.check("curvature.map_connection_flat", worst(flat), c.tol_jet4);
    let schwarzian_conn = |k: usize| PiConnection::new(DifferenceTensor::schwarzian(maps[k].1.clone()));
    if s.n >= 3 {
        let w: Vec<_> =
            map_jobs.par_iter().map(|(k, x)| weyl_tensor(&schwarzian_conn(*k), x).map(|t| t.max_abs())).collect();
        report.check("curvature.weyl_of_schwarzian", worst(w), c.tol_jet4);
    } else {
        let wc: Vec<_> = map_jobs.par_iter().map(|(k, x)| weyl_cotton(&schwarzian_conn(*k), x)).collect();
        report.check("curvature.cotton_of_schwarzian", worst(wc.iter().map(|r| r.as_ref().map(|(_, c)| c.max_abs()))), c.tol_jet4);
        report.check(
            "curvature.cotton_symmetric",
            worst(wc.iter().map(|r| r.as_ref().map(|(_, c)| c.asymmetry(0, 1).max(c.asymmetry(1, 2))))),
            c.tol_jet4,
        );
    }
    Ok(report)
}

pub fn integrability(c: &Common) -> Result<Report> {
    let mut s = setup(c)?;
    if s.n < 3 {
        bail!("integrability needs n ≥ 3, got n = {}", s.n);
    }
    let form = s.form.clone();
    let jobs = s.jobs(1)?;
    let maps = &s.maps;
    let sfields: Vec<_> = jobs
        .par_iter()
        .map(|(k, x)| integrability_defect(&DifferenceTensor::schwarzian(maps[*k].1.clone()), x))
        .collect();
    let generated = c.pi.is_none();
    let fields: Vec<DifferenceTensor<f64>> = match &c.pi {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            vec![pi_from_json_str(form.clone(), &text).with_context(|| format!("parsing {}", path.display()))?]
        }
        None => (0..c.count).map(|k| random_pi(&form, &mut s.rng, k % 3, false)).collect(),
    };
    let points: Vec<Vec<f64>> = fields.iter().map(|_| random_point(&form, &mut s.rng)).collect();
    let others: Vec<_> = fields.par_iter().zip(&points).map(|(a, x)| integrability_defect(a, x)).collect();
    let mut report = Report::new("integrability", c.seed, s.n);
    report.check(
        "integrability.schwarzian_defect",
        worst(sfields.iter().map(|r| r.as_ref().map(|r| r.displayed.max(r.trace_free).max(r.weyl)))),
        c.tol_jet3,
    );
    let disagreements = sfields
        .iter()
        .chain(&others)
        .map(|r| match r {
            Ok(r) if r.zero_sets_agree(c.tol_jet3) => 0.0,
            Ok(_) => 1.0,
            Err(_) => f64::NAN,
        })
        .sum::<f64>();
    report.check("integrability.zero_set_disagreements", disagreements, 0.0);
    if generated {
        let vanishing = others
            .iter()
            .map(|r| match r {
                Ok(r) if r.displayed.min(r.trace_free).min(r.weyl) > NONZERO_DEFECT => 0.0,
                Ok(_) => 1.0,
                Err(_) => f64::NAN,
            })
            .sum::<f64>();
        report.check("integrability.generic_vanishing_count", vanishing, 0.0);
    }
    Ok(report)
}

pub fn ode(o: &OdeArgs) -> Result<Report> {
    let c = &o.common;
    ensure!(o.step > 0.0 && o.step.is_finite(), "--step must be positive");
    ensure!(o.span > 0.0 && o.span.is_finite(), "--span must be positive");
    if let Some(n) = c.n {
        ensure!(n == 2, "the geodesic ODE is three-dimensional (n = 2), got n = {n}");
    }
    let loaded = load_maps(c)?;
    ensure!(loaded.len() <= 1, "ode takes at most one --map");
    let form = Form64::standard(Dimensions::new(2)?);
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let map = match loaded.into_iter().next() {
        Some((name, m)) => {
            ensure!(m.dims().n() == 2, "{name} is not three-dimensional");
            m
        }
        None => random_shear(&form, &mut rng, 3),
    };
    let starts = sample_points(&form, &mut rng, &[&map], c.points).context("sampling starting points")?;
    let ode = CubicSlopeOde::from_map(map.clone())?;
    let runs: Vec<_> = starts
        .par_iter()
        .map(|x| integrate_geodesic(&ode, PathState::new(x[0], x[1], x[2], o.slope), x[0] + o.span, o.step, c.tol_jet3 * o.span))
        .collect();
    let flattening: Vec<_> = runs
        .par_iter()
        .map(|r| -> anyhow::Result<f64> {
            let tr = r.as_ref().map_err(|e| anyhow::anyhow!("{e}"))?;
            let pts = tr
                .states
                .iter()
                .map(|s| map.apply(&[s.t, s.x0, s.z]).map(|y| [y[0], y[1], y[2]]))
                .collect::<contact_schwarzian::Result<Vec<_>>>()?;
            Ok(line_fit_residual(&pts))
        })
        .collect();
    let mut report = Report::new("ode", c.seed, 2);
    report.check("ode.line_flattening", worst(flattening), c.tol_jet4);
    report.check(
        "ode.constraint_drift",
        worst(runs.iter().map(|r| r.as_ref().map(|t| t.max_drift / o.span))),
        c.tol_jet3,
    );

    let flat = CubicSlopeOde::<f64>::flat();
    let lines: Vec<_> = starts
        .par_iter()
        .map(|x| {
            let (t0, b, cz, a) = (x[0], x[1] - o.slope * x[0], x[2] - (x[1] - o.slope * x[0]) * x[0], o.slope);
            integrate_geodesic(&flat, PathState::new(t0, x[1], x[2], a), t0 + o.span, o.step, c.tol_jet3).map(|tr| {
                tr.states
                    .iter()
                    .map(|s| (s.x0 - (a * s.t + b)).abs().max((s.z - (b * s.t + cz)).abs()))
                    .fold(0.0, f64::max)
            })
        })
        .collect();
    report.check("ode.flat_lines", worst(lines), c.tol_alg);
    report.check("ode.rk4_order", (rk4_order_factor()? - 16.0).abs(), ORDER_FACTOR_TOLERANCE);

    if let Some(path) = &o.trajectory {
        match runs.first() {
            Some(Ok(tr)) => {
                let mut csv = String::from("t,x_inf,x0,z,slope,constraint_drift\n");
                for s in &tr.states {
                    writeln!(
                        csv,
                        "{},{},{},{},{},{}",
                        number(s.t),
                        number(s.t),
                        number(s.x0),
                        number(s.z),
                        number(s.slope),
                        number(s.constraint_drift())
                    )?;
                }
                std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
            }
            _ => bail!("no trajectory to write"),
        }
    }
    Ok(report)
}

/// Error ratio between steps 0.05 and 0.025 on `s′ = s³`, whose solution
/// through slope `s0` at `t = 0` is `x^0 = b + (1 − √(1 − 2s0²t))/s0`.
fn rk4_order_factor() -> Result<f64> {
    let ode = CubicSlopeOde::constant(CubicCoefficients { g000: 1.0, ..CubicCoefficients::zero() });
    let (s0, b) = (0.5f64, 0.1f64);
    let err = |h: f64| -> Result<f64> {
        let tr = integrate_geodesic(&ode, PathState::new(0.0, b, 0.0, s0), 1.0, h, 1e-6)?;
        Ok(tr
            .states
            .iter()
            .map(|s| (s.x0 - (b + (1.0 - (1.0 - 2.0 * s0 * s0 * s.t).sqrt()) / s0)).abs())
            .fold(0.0, f64::max))
    };
    Ok(err(0.05)? / err(0.025)?)
}
