//! The flat contact manifold `ℝ^{2n−1}`: contact form, contactomorphism
//! generators and the contact condition.

use serde_json::{json, Value};

use crate::algebra::{Dimensions, SpElement, SymplecticForm};
use crate::error::{Error, Result};
use crate::jets::{Jet, Poly1, MAX_ORDER};
use crate::matrix::Matrix;
use crate::scalar::Real;

/// Smallest `|denominator|` accepted when evaluating a linear fractional map.
pub const POLE_EPSILON: f64 = 1e-12;
/// Smallest `|c|` accepted as a conformal factor.
pub const DEGENERATE_EPSILON: f64 = 1e-12;

const NEWTON_MAX_ITERATIONS: usize = 100;

/// Coordinate components of `θ = ½(dx^0 + ω_pq x^p dx^q)`.
pub fn theta_at<T: Real>(form: &SymplecticForm<T>, x: &[T]) -> Vec<T> {
    let m = form.hyperplane_dim();
    let half = T::from_f64(0.5);
    let mut out: Vec<T> = (0..m)
        .map(|q| (0..m).fold(T::zero(), |acc, p| acc + form.omega()[(p, q)] * x[p]) * half)
        .collect();
    out.push(half);
    out
}

/// Generator tree of a contact map.
#[derive(Clone, Debug, PartialEq)]
pub enum MapExpr<T> {
    /// Linear fractional action of a `2n×2n` matrix on `(1, x)`.
    Lft(Matrix<T>),
    /// One univariate polynomial `h_a` per Lagrangian pair.
    Shear(Vec<Poly1<T>>),
    /// `[f, g, h]` is `f ∘ g ∘ h`.
    Compose(Vec<MapExpr<T>>),
    Inverse { of: Box<MapExpr<T>>, seed: Vec<T> },
}

impl<T: Real> MapExpr<T> {
    /// True when every leaf is a linear fractional node.
    pub fn is_projective_linear(&self) -> bool {
        match self {
            MapExpr::Lft(_) => true,
            MapExpr::Shear(hs) => hs.iter().all(Poly1::is_zero),
            MapExpr::Compose(children) => children.iter().all(MapExpr::is_projective_linear),
            MapExpr::Inverse { of, .. } => of.is_projective_linear(),
        }
    }

    fn eval(&self, form: &SymplecticForm<T>, inputs: &[Jet<T>], margin: &mut f64) -> Result<Vec<Jet<T>>> {
        match self {
            MapExpr::Lft(a) => eval_lft(a, inputs, margin),
            MapExpr::Shear(hs) => Ok(eval_shear(hs, inputs)),
            MapExpr::Compose(children) => {
                let mut cur = inputs.to_vec();
                for child in children.iter().rev() {
                    cur = child.eval(form, &cur, margin)?;
                }
                Ok(cur)
            }
            MapExpr::Inverse { of, seed } => eval_inverse(of, seed, form, inputs, margin),
        }
    }
}

fn eval_lft<T: Real>(a: &Matrix<T>, inputs: &[Jet<T>], margin: &mut f64) -> Result<Vec<Jet<T>>> {
    let d = inputs.len();
    if a.rows() != d + 1 || a.cols() != d + 1 {
        return Err(Error::Shape(format!(
            "linear fractional matrix is {}x{}, expected {}x{}",
            a.rows(),
            a.cols(),
            d + 1,
            d + 1
        )));
    }
    // homogeneous coordinates in ambient order (∞, 1, …, 2n−2, 0)
    let proto = &inputs[0];
    let row = |r: usize| {
        let mut acc = proto.constant_like(a[(r, 0)]);
        for (k, x) in inputs.iter().enumerate() {
            let w = a[(r, 1 + k)];
            if w != T::zero() {
                acc += &x.scale(w);
            }
        }
        acc
    };
    let den = row(0);
    let dv = den.value().as_f64().abs();
    *margin = margin.min(dv);
    if !(dv > POLE_EPSILON) {
        return Err(Error::SingularPoint(format!("linear fractional denominator is {dv:e}")));
    }
    let inv = den.checked_recip().expect("nonzero denominator");
    Ok((0..d).map(|k| &row(1 + k) * &inv).collect())
}

fn eval_shear<T: Real>(hs: &[Poly1<T>], inputs: &[Jet<T>]) -> Vec<Jet<T>> {
    let half = hs.len();
    let reeb = inputs.len() - 1;
    let mut out = inputs.to_vec();
    for (a, h) in hs.iter().enumerate() {
        let y = &inputs[a + half];
        out[a] += &h.eval_jet(y);
        out[reeb] += &h.shear_primitive().eval_jet(y);
    }
    out
}

fn eval_inverse<T: Real>(
    of: &MapExpr<T>,
    seed: &[T],
    form: &SymplecticForm<T>,
    inputs: &[Jet<T>],
    margin: &mut f64,
) -> Result<Vec<Jet<T>>> {
    let target: Vec<T> = inputs.iter().map(Jet::value).collect();
    let order = inputs.iter().map(Jet::order).min().unwrap_or(0);
    let y = newton_solve(of, form, &target, seed)?;
    let jac = jacobian(of, form, &y)?;
    let jinv = jac
        .inverse()
        .map_err(|_| Error::NoLocalInverse("singular Jacobian at the preimage".into()))?;
    let d = target.len();
    // chord iteration Y ← Y − J⁻¹(φ(Y) − X) gains one jet order per step
    let xs = Jet::coordinates(&target, order);
    let mut ys: Vec<Jet<T>> = y.iter().map(|&v| xs[0].constant_like(v)).collect();
    for _ in 0..=order {
        let mut scratch = f64::INFINITY;
        let fy = of.eval(form, &ys, &mut scratch)?;
        let r: Vec<Jet<T>> = fy.iter().zip(&xs).map(|(f, x)| f - x).collect();
        for i in 0..d {
            for k in 0..d {
                let w = jinv[(i, k)];
                if w != T::zero() {
                    ys[i] -= &r[k].scale(w);
                }
            }
        }
    }
    let mut scratch = f64::INFINITY;
    of.eval(form, &ys, &mut scratch)?;
    *margin = margin.min(scratch);
    Ok(ys.iter().map(|yj| yj.compose(inputs)).collect())
}

fn map_values<T: Real>(expr: &MapExpr<T>, form: &SymplecticForm<T>, x: &[T]) -> Result<Vec<T>> {
    let mut margin = f64::INFINITY;
    let inputs: Vec<Jet<T>> = x.iter().map(|&v| Jet::constant(x.len(), 0, v)).collect();
    Ok(expr.eval(form, &inputs, &mut margin)?.iter().map(Jet::value).collect())
}

fn jacobian<T: Real>(expr: &MapExpr<T>, form: &SymplecticForm<T>, x: &[T]) -> Result<Matrix<T>> {
    let mut margin = f64::INFINITY;
    let jets = expr.eval(form, &Jet::coordinates(x, 1), &mut margin)?;
    Ok(Matrix::from_fn(x.len(), x.len(), |i, j| jets[i].partial(&[j])))
}

fn norm<T: Real>(v: &[T]) -> f64 {
    v.iter().map(|c| c.as_f64().powi(2)).sum::<f64>().sqrt()
}

/// Damped Newton iteration for `expr(y) = target` starting from `seed`.
fn newton_solve<T: Real>(
    expr: &MapExpr<T>,
    form: &SymplecticForm<T>,
    target: &[T],
    seed: &[T],
) -> Result<Vec<T>> {
    if seed.len() != target.len() {
        return Err(Error::Dimension(format!(
            "inverse seed has {} coordinates, expected {}",
            seed.len(),
            target.len()
        )));
    }
    let residual = |y: &[T]| -> Result<Vec<T>> {
        Ok(map_values(expr, form, y)?.iter().zip(target).map(|(a, &b)| *a - b).collect())
    };
    let tol = 1e-14 * (1.0 + norm(target));
    let mut y = seed.to_vec();
    let mut r = residual(&y)?;
    for _ in 0..NEWTON_MAX_ITERATIONS {
        let rn = norm(&r);
        if rn <= tol {
            return Ok(y);
        }
        let step = jacobian(expr, form, &y)?
            .inverse()
            .map_err(|_| Error::NoLocalInverse("singular Jacobian during Newton iteration".into()))?
            .mat_vec(&r);
        let mut t = T::one();
        let mut accepted = false;
        for _ in 0..40 {
            let cand: Vec<T> = y.iter().zip(&step).map(|(&a, &s)| a - t * s).collect();
            if let Ok(rc) = residual(&cand) {
                if norm(&rc) < rn {
                    y = cand;
                    r = rc;
                    accepted = true;
                    break;
                }
            }
            t = t * T::from_f64(0.5);
        }
        if !accepted {
            // no decrease possible: accept if already at rounding level
            if rn <= 1e3 * tol {
                return Ok(y);
            }
            return Err(Error::NoLocalInverse(format!("Newton stalled at residual {rn:e}")));
        }
    }
    if norm(&r) <= 1e3 * tol {
        return Ok(y);
    }
    Err(Error::NoLocalInverse(format!(
        "Newton did not converge in {NEWTON_MAX_ITERATIONS} iterations (residual {:e})",
        norm(&r)
    )))
}

/// A contactomorphism candidate of the flat model.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactMap<T> {
    form: SymplecticForm<T>,
    expr: MapExpr<T>,
}

impl<T: Real> ContactMap<T> {
    pub fn new(form: SymplecticForm<T>, expr: MapExpr<T>) -> Result<Self> {
        validate(&expr, form.dims())?;
        Ok(ContactMap { form, expr })
    }

    pub fn identity(form: SymplecticForm<T>) -> Self {
        ContactMap { form, expr: MapExpr::Compose(Vec::new()) }
    }

    pub fn linear_fractional(form: SymplecticForm<T>, a: &SpElement<T>) -> Result<Self> {
        Self::new(form, MapExpr::Lft(a.matrix().clone()))
    }

    /// The projective action of an arbitrary invertible matrix; contact only
    /// when the matrix is conformally symplectic.
    pub fn projective(form: SymplecticForm<T>, a: Matrix<T>) -> Result<Self> {
        Self::new(form, MapExpr::Lft(a))
    }

    /// `x^a ↦ x^a + h_a(y^a)`, `y` fixed, `x^0 ↦ x^0 + Σ k_a(y^a)` with
    /// `k_a′(s) = s h_a′(s) − h_a(s)`, `k_a(0) = 0`; here `(x^a, y^a)` are
    /// the Lagrangian pairs `(x^a, x^{a+n−1})`.
    pub fn shear(form: SymplecticForm<T>, h: Vec<Poly1<T>>) -> Result<Self> {
        Self::new(form, MapExpr::Shear(h))
    }

    /// `maps[0] ∘ maps[1] ∘ …`.
    pub fn compose(maps: &[ContactMap<T>]) -> Result<Self> {
        let form = maps
            .first()
            .map(|m| m.form.clone())
            .ok_or_else(|| Error::Malformed("empty composition".into()))?;
        if maps.iter().any(|m| m.form.dims() != form.dims()) {
            return Err(Error::Dimension("composed maps have different dimensions".into()));
        }
        Ok(ContactMap { form, expr: MapExpr::Compose(maps.iter().map(|m| m.expr.clone()).collect()) })
    }

    /// Local inverse near `seed`, which is the starting guess of every
    /// Newton solve.
    pub fn invert(&self, seed: &[T]) -> Result<Self> {
        if seed.len() != self.form.manifold_dim() {
            return Err(Error::Dimension("inverse seed has the wrong length".into()));
        }
        Ok(ContactMap {
            form: self.form.clone(),
            expr: MapExpr::Inverse { of: Box::new(self.expr.clone()), seed: seed.to_vec() },
        })
    }

    pub fn form(&self) -> &SymplecticForm<T> {
        &self.form
    }

    pub fn dims(&self) -> Dimensions {
        self.form.dims()
    }

    pub fn expr(&self) -> &MapExpr<T> {
        &self.expr
    }

    pub fn is_projective_linear(&self) -> bool {
        self.expr.is_projective_linear()
    }

    /// Evaluates the map on jets of any variables.
    pub fn eval(&self, inputs: &[Jet<T>]) -> Result<Vec<Jet<T>>> {
        if inputs.len() != self.form.manifold_dim() {
            return Err(Error::Dimension(format!(
                "map takes {} inputs, got {}",
                self.form.manifold_dim(),
                inputs.len()
            )));
        }
        let mut margin = f64::INFINITY;
        self.expr.eval(&self.form, inputs, &mut margin)
    }

    pub fn jets_at(&self, x: &[T], order: usize) -> Result<Vec<Jet<T>>> {
        if order > MAX_ORDER {
            return Err(Error::OrderBudget { needed: order, max: MAX_ORDER });
        }
        self.eval(&Jet::coordinates(x, order))
    }

    pub fn apply(&self, x: &[T]) -> Result<Vec<T>> {
        Ok(self.jets_at(x, 0)?.iter().map(Jet::value).collect())
    }

    /// Smallest `|denominator|` met by any linear fractional node while
    /// evaluating at `x`; infinite when there is none.
    pub fn singularity_margin(&self, x: &[T]) -> Result<f64> {
        let mut margin = f64::INFINITY;
        let inputs: Vec<Jet<T>> = x.iter().map(|&v| Jet::constant(x.len(), 0, v)).collect();
        self.expr.eval(&self.form, &inputs, &mut margin)?;
        Ok(margin)
    }

    pub fn conformal_factor(&self, x: &[T]) -> Result<T> {
        let jets = self.jets_at(x, 1)?;
        let c = conformal_factor_jet(&self.form, &jets).value();
        if !(c.as_f64().abs() > DEGENERATE_EPSILON) {
            return Err(Error::DegenerateMap(format!("conformal factor {:e}", c.as_f64())));
        }
        Ok(c)
    }

    /// Largest violation of the two contact equations at `x`, together with
    /// the conformal factor.
    pub fn contact_residual(&self, x: &[T]) -> Result<(T, f64)> {
        let jets = self.jets_at(x, 1)?;
        let c = conformal_factor_jet(&self.form, &jets).value();
        let m = self.form.hyperplane_dim();
        let w = self.form.omega();
        let mut worst = 0.0f64;
        for i in 0..m {
            let mut lhs = jets[m].partial(&[i]);
            for p in 0..m {
                for q in 0..m {
                    if w[(p, q)] != T::zero() {
                        lhs += w[(p, q)] * jets[p].value() * jets[q].partial(&[i]);
                    }
                }
            }
            let rhs = (0..m).fold(T::zero(), |acc, p| acc + c * w[(p, i)] * x[p]);
            worst = worst.max((lhs - rhs).as_f64().abs());
        }
        Ok((c, worst))
    }

    pub fn is_contactomorphism(&self, x: &[T], tol: f64) -> Result<bool> {
        let (c, r) = self.contact_residual(x)?;
        Ok(r <= tol && c.as_f64().abs() > DEGENERATE_EPSILON)
    }
}

/// `c = ∂φ^0/∂x^0 + ω_pq φ^p ∂φ^q/∂x^0` as a jet one order below `phi`.
pub fn conformal_factor_jet<T: Real>(form: &SymplecticForm<T>, phi: &[Jet<T>]) -> Jet<T> {
    let m = form.hyperplane_dim();
    let w = form.omega();
    let mut c = phi[m].derivative(m);
    for p in 0..m {
        for q in 0..m {
            if w[(p, q)] != T::zero() {
                c += &(&phi[p] * &phi[q].derivative(m)).scale(w[(p, q)]);
            }
        }
    }
    c
}

fn validate<T: Real>(expr: &MapExpr<T>, dims: Dimensions) -> Result<()> {
    match expr {
        MapExpr::Lft(a) => {
            let k = dims.ambient();
            if a.rows() != k || a.cols() != k {
                return Err(Error::Shape(format!(
                    "linear fractional matrix must be {k}x{k}, got {}x{}",
                    a.rows(),
                    a.cols()
                )));
            }
        }
        MapExpr::Shear(hs) => {
            if hs.len() != dims.n() - 1 {
                return Err(Error::Shape(format!(
                    "shear needs {} polynomials, got {}",
                    dims.n() - 1,
                    hs.len()
                )));
            }
        }
        MapExpr::Compose(children) => {
            for c in children {
                validate(c, dims)?;
            }
        }
        MapExpr::Inverse { of, seed } => {
            if seed.len() != dims.manifold() {
                return Err(Error::Shape(format!(
                    "inverse seed needs {} coordinates, got {}",
                    dims.manifold(),
                    seed.len()
                )));
            }
            validate(of, dims)?;
        }
    }
    Ok(())
}

fn as_f64_list(v: &Value, what: &str) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| Error::Malformed(format!("{what} must be an array")))?
        .iter()
        .map(|x| x.as_f64().ok_or_else(|| Error::Malformed(format!("{what} entries must be numbers"))))
        .collect()
}

fn node_from_json<T: Real>(v: &Value) -> Result<MapExpr<T>> {
    let obj = v.as_object().ok_or_else(|| Error::Malformed("map node must be an object".into()))?;
    if obj.len() != 1 {
        return Err(Error::Malformed("map node must have exactly one key".into()));
    }
    let (key, body) = obj.iter().next().expect("one entry");
    let conv = |xs: Vec<f64>| xs.into_iter().map(T::from_f64).collect::<Vec<T>>();
    match key.as_str() {
        "lft" => {
            let rows = body
                .get("matrix")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Malformed("lft node needs a \"matrix\" array".into()))?;
            let rows: Vec<Vec<T>> = rows
                .iter()
                .map(|r| as_f64_list(r, "matrix row").map(conv))
                .collect::<Result<_>>()?;
            Ok(MapExpr::Lft(Matrix::from_rows(&rows)?))
        }
        "shear" => {
            let lists = body
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Malformed("shear node needs a \"coeffs\" array".into()))?;
            let hs = lists
                .iter()
                .map(|l| as_f64_list(l, "shear coefficients").map(|c| Poly1::new(conv(c))))
                .collect::<Result<_>>()?;
            Ok(MapExpr::Shear(hs))
        }
        "compose" => {
            let children = body
                .as_array()
                .ok_or_else(|| Error::Malformed("compose node must hold an array".into()))?;
            Ok(MapExpr::Compose(children.iter().map(node_from_json).collect::<Result<_>>()?))
        }
        "inverse" => {
            let of = body
                .get("of")
                .ok_or_else(|| Error::Malformed("inverse node needs \"of\"".into()))?;
            let seed = body
                .get("seed")
                .ok_or_else(|| Error::Malformed("inverse node needs \"seed\"".into()))?;
            Ok(MapExpr::Inverse {
                of: Box::new(node_from_json(of)?),
                seed: conv(as_f64_list(seed, "seed")?),
            })
        }
        other => Err(Error::Malformed(format!("unknown map node \"{other}\""))),
    }
}

fn node_to_json<T: Real>(expr: &MapExpr<T>) -> Value {
    let f = |xs: &[T]| xs.iter().map(|v| v.as_f64()).collect::<Vec<f64>>();
    match expr {
        MapExpr::Lft(a) => json!({"lft": {"matrix": a.to_rows().iter().map(|r| f(r)).collect::<Vec<_>>()}}),
        MapExpr::Shear(hs) => json!({"shear": {"coeffs": hs.iter().map(|h| f(h.coeffs())).collect::<Vec<_>>()}}),
        MapExpr::Compose(children) => json!({"compose": children.iter().map(node_to_json).collect::<Vec<_>>()}),
        MapExpr::Inverse { of, seed } => json!({"inverse": {"of": node_to_json(of), "seed": f(seed)}}),
    }
}

impl<T: Real> ContactMap<T> {
    /// Parses `{"n": int, "map": node}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Malformed("map document needs an integer \"n\"".into()))?;
        let dims = Dimensions::new(n as usize)?;
        let node = v.get("map").ok_or_else(|| Error::Malformed("map document needs \"map\"".into()))?;
        Self::new(SymplecticForm::standard(dims), node_from_json(node)?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Value {
        json!({"n": self.dims().n(), "map": node_to_json(&self.expr)})
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form2() -> SymplecticForm<f64> {
        SymplecticForm::standard(Dimensions::new(2).unwrap())
    }

    #[test]
    fn theta_example() {
        assert_eq!(theta_at(&form2(), &[1.0, 2.0, 0.0]), vec![-1.0, 0.5, 0.5]);
    }

    #[test]
    fn square_shear_formula() {
        let phi = ContactMap::shear(form2(), vec![Poly1::new(vec![0.0, 0.0, 1.0])]).unwrap();
        let y = phi.apply(&[0.5, 2.0, 1.0]).unwrap();
        assert!((y[0] - 4.5).abs() < 1e-15);
        assert_eq!(y[1], 2.0);
        assert!((y[2] - (1.0 + 8.0 / 3.0)).abs() < 1e-14);
        assert!(phi.is_contactomorphism(&[0.5, 2.0, 1.0], 1e-12).unwrap());
        assert!((phi.conformal_factor(&[0.5, 2.0, 1.0]).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn json_roundtrip() {
        let f = form2();
        let shear = ContactMap::shear(f.clone(), vec![Poly1::new(vec![0.0, 0.1, 0.3])]).unwrap();
        let inv = shear.invert(&[0.0, 0.0, 0.0]).unwrap();
        let map = ContactMap::compose(&[shear, inv]).unwrap();
        let back = ContactMap::<f64>::from_json(&map.to_json()).unwrap();
        assert_eq!(back, map);
    }

    #[test]
    fn malformed_json() {
        assert!(ContactMap::<f64>::from_json_str(r#"{"n": 2, "map": {"spin": {}}}"#).is_err());
        assert!(ContactMap::<f64>::from_json_str(r#"{"n": 2, "map": {"shear": {"coeffs": []}}}"#).is_err());
    }
}
