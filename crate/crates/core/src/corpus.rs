//! Seeded generators of symplectic matrices, contactomorphisms and sample
//! points shared by the tests and the command-line tool.

use rand::Rng;

use crate::algebra::{SpBlock, SpElement, SymplecticForm};
use crate::curvature::DifferenceTensor;
use crate::error::{Error, Result};
use crate::flat_model::ContactMap;
use crate::hessian::monomials;
use crate::jets::{Poly1, Polynomial};
use crate::matrix::Matrix;
use crate::tensor::Tensor;

/// Points closer than this to a pole of some linear fractional node are
/// rejected.
pub const POLE_MARGIN: f64 = 0.05;
/// Scale of the random `𝔰𝔭` entries fed to the exponential.
pub const SP_SCALE: f64 = 0.3;
const MAX_ATTEMPTS: usize = 10_000;

/// A random `𝔰𝔭(n, ℝ)` element with block entries uniform in `[−scale, scale]`.
pub fn random_sp_block<R: Rng + ?Sized>(form: &SymplecticForm<f64>, rng: &mut R, scale: f64) -> SpBlock<f64> {
    let dims = form.dims();
    let params: Vec<f64> =
        (0..SpBlock::<f64>::parameter_count(dims)).map(|_| rng.random_range(-scale..=scale)).collect();
    SpBlock::from_parameters(dims, &params).expect("parameter count matches")
}

/// `exp` of a random small `𝔰𝔭` element.
pub fn random_sp_element<R: Rng + ?Sized>(form: &SymplecticForm<f64>, rng: &mut R) -> SpElement<f64> {
    let g = random_sp_block(form, rng, SP_SCALE).to_matrix(form);
    SpElement::exp(&g, form, 1e-9).expect("exponential of an sp element is symplectic")
}

pub fn random_lft<R: Rng + ?Sized>(form: &SymplecticForm<f64>, rng: &mut R) -> ContactMap<f64> {
    ContactMap::linear_fractional(form.clone(), &random_sp_element(form, rng)).expect("valid lft")
}

/// A shear whose profiles have degree `degree ≥ 2` and a quadratic
/// coefficient of size at least `0.25`.
pub fn random_shear<R: Rng + ?Sized>(form: &SymplecticForm<f64>, rng: &mut R, degree: usize) -> ContactMap<f64> {
    let degree = degree.max(2);
    let h = (0..form.dims().n() - 1)
        .map(|_| {
            let mut c: Vec<f64> = (0..=degree).map(|_| rng.random_range(-0.5..=0.5)).collect();
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            c[2] = sign * rng.random_range(0.25..=0.75);
            Poly1::new(c)
        })
        .collect();
    ContactMap::shear(form.clone(), h).expect("valid shear")
}

/// Families in the generator corpus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    Lft,
    Shear,
    ShearAfterLft,
    LftAfterShear,
    InverseOfComposite,
}

impl MapKind {
    pub const ALL: [MapKind; 5] =
        [MapKind::Lft, MapKind::Shear, MapKind::ShearAfterLft, MapKind::LftAfterShear, MapKind::InverseOfComposite];

    pub fn name(self) -> &'static str {
        match self {
            MapKind::Lft => "lft",
            MapKind::Shear => "shear",
            MapKind::ShearAfterLft => "shear∘lft",
            MapKind::LftAfterShear => "lft∘shear",
            MapKind::InverseOfComposite => "inverse(shear∘lft)",
        }
    }
}

pub fn random_map<R: Rng + ?Sized>(form: &SymplecticForm<f64>, rng: &mut R, kind: MapKind) -> ContactMap<f64> {
    match kind {
        MapKind::Lft => random_lft(form, rng),
        MapKind::Shear => random_shear(form, rng, 3),
        MapKind::ShearAfterLft => {
            ContactMap::compose(&[random_shear(form, rng, 3), random_lft(form, rng)]).expect("same form")
        }
        MapKind::LftAfterShear => {
            ContactMap::compose(&[random_lft(form, rng), random_shear(form, rng, 3)]).expect("same form")
        }
        MapKind::InverseOfComposite => {
            let inner = ContactMap::compose(&[random_shear(form, rng, 2), random_lft(form, rng)]).expect("same form");
            inner.invert(&vec![0.0; form.manifold_dim()]).expect("seed length matches")
        }
    }
}

/// `count` maps cycling through every family.
pub fn corpus<R: Rng + ?Sized>(form: &SymplecticForm<f64>, rng: &mut R, count: usize) -> Vec<(MapKind, ContactMap<f64>)> {
    (0..count)
        .map(|i| {
            let kind = MapKind::ALL[i % MapKind::ALL.len()];
            (kind, random_map(form, rng, kind))
        })
        .collect()
}

/// A uniform point of `[−1, 1]^{2n−1}`.
pub fn random_point<R: Rng + ?Sized>(form: &SymplecticForm<f64>, rng: &mut R) -> Vec<f64> {
    (0..form.manifold_dim()).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

/// Whether `x` is a usable sample for every map: evaluation succeeds, no pole
/// is within [`POLE_MARGIN`] and the conformal factor is nondegenerate.
pub fn admissible(maps: &[&ContactMap<f64>], x: &[f64]) -> bool {
    maps.iter().all(|m| {
        matches!(m.singularity_margin(x), Ok(margin) if margin >= POLE_MARGIN)
            && m.conformal_factor(x).is_ok()
            && m.jets_at(x, 1).is_ok()
    })
}

/// `count` uniform points admissible for all `maps`, by rejection.
pub fn sample_points<R: Rng + ?Sized>(
    form: &SymplecticForm<f64>,
    rng: &mut R,
    maps: &[&ContactMap<f64>],
    count: usize,
) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(Error::SingularPoint(format!(
                "only {} of {count} admissible points after {MAX_ATTEMPTS} draws",
                out.len()
            )));
        }
        let x = random_point(form, rng);
        if admissible(maps, &x) {
            out.push(x);
        }
    }
    Ok(out)
}

/// A random matrix with entries uniform in `[−scale, scale]`.
pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R, scale: f64) -> Matrix<f64> {
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-scale..=scale))
}

/// A random polynomial of degree `≤ degree` with coefficients in `[−scale, scale]`.
pub fn random_polynomial<R: Rng + ?Sized>(dim: usize, degree: usize, rng: &mut R, scale: f64) -> Polynomial<f64> {
    monomials::<f64>(dim, degree)
        .into_iter()
        .fold(Polynomial::zero(dim), |acc, mono| acc.add(&mono.scale(rng.random_range(-scale..=scale))))
}

/// A random admissible polynomial difference tensor of degree `≤ degree`;
/// totally symmetric unless `with_torsion`.
pub fn random_pi<R: Rng + ?Sized>(
    form: &SymplecticForm<f64>,
    rng: &mut R,
    degree: usize,
    with_torsion: bool,
) -> DifferenceTensor<f64> {
    let m = form.hyperplane_dim();
    let d = form.manifold_dim();
    let raw = Tensor::from_fn(m, 3, |_| random_polynomial(d, degree, rng, 0.5));
    if with_torsion {
        DifferenceTensor::from_raw(form.clone(), &raw).expect("shape matches")
    } else {
        DifferenceTensor::symmetric_from_raw(form.clone(), &raw).expect("shape matches")
    }
}
