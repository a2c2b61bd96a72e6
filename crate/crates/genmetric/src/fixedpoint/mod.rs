//! Orbits, contraction conditions and fixed, common fixed and coincidence
//! point certificates.
//!
//! Every check here looks at a finite prefix. A passing check is numerical
//! evidence within the tolerance, and the solver certificates say which
//! hypotheses were checked and which were assumed.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequences::{classify_cauchy, CauchyVerdict, DistanceEvaluator};
use crate::space::Tolerance;

pub mod maps;
mod solve;

pub use solve::{
    find_coincidence_point, find_common_fixed_point, find_fixed_point, Check, Parameter, Route,
    SolveOptions, SolveResult, SolveStatus,
};

type MapFn<P, Q> = dyn Fn(&P) -> std::result::Result<Q, String> + Send + Sync;

/// A named map from points of one universe to points of another.
pub struct Map<P, Q = P> {
    name: String,
    f: Arc<MapFn<P, Q>>,
}

impl<P, Q> Clone for Map<P, Q> {
    fn clone(&self) -> Self {
        Map {
            name: self.name.clone(),
            f: Arc::clone(&self.f),
        }
    }
}

impl<P, Q> fmt::Debug for Map<P, Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Map").field("name", &self.name).finish()
    }
}

impl<P, Q> Map<P, Q> {
    /// A map that may be undefined at some points.
    pub fn new<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&P) -> std::result::Result<Q, String> + Send + Sync + 'static,
    {
        Map {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn total<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&P) -> Q + Send + Sync + 'static,
    {
        Self::new(name, move |p| Ok(f(p)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, p: &P) -> std::result::Result<Q, String> {
        (self.f)(p)
    }

    pub(crate) fn at(&self, p: &P, index: usize) -> Result<Q> {
        self.apply(p).map_err(|reason| Error::MapFailed {
            map: self.name.clone(),
            index,
            reason,
        })
    }
}

/// Applies `f` and checks that the image lies in the carrier of `eval`.
pub(crate) fn image<P, Q, E>(f: &Map<P, Q>, p: &P, index: usize, eval: &E) -> Result<Q>
where
    E: DistanceEvaluator<Point = Q>,
{
    let q = f.at(p, index)?;
    if !eval.contains(&q) {
        return Err(Error::MapFailed {
            map: f.name.clone(),
            index,
            reason: format!("image {} is outside the space", eval.label(&q)),
        });
    }
    Ok(q)
}

/// The orbit `x_0, f(x_0), f^2(x_0), ...` with its Cauchy verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitTrace<P> {
    #[serde(skip)]
    pub points: Vec<P>,
    pub labels: Vec<String>,
    /// `P(<x_i>^{n-1}, x_{i+1})`.
    pub step_values: Vec<f64>,
    /// `P(<x_i>^n)`.
    pub self_values: Vec<f64>,
    pub verdict: CauchyVerdict,
}

/// Iterates `f` `max_iter` times from `x0`.
///
/// ```
/// use genmetric::fixedpoint::{iterate_orbit, maps};
/// use genmetric::space::Tolerance;
/// use genmetric::spaces::{RealFamily, RealPoint, RealSpace};
///
/// let line = RealSpace::new(RealFamily::MaxPartial, 2).unwrap().with_bounds(0.0, 1.0).unwrap();
/// let trace = iterate_orbit(&maps::linear(0.5), RealPoint::Real(1.0), 60, &line, Tolerance::default(), None).unwrap();
/// assert!(trace.verdict.is_cauchy);
/// assert!(trace.verdict.central_distance.abs() < 1e-9);
/// ```
pub fn iterate_orbit<E: DistanceEvaluator>(
    f: &Map<E::Point>,
    x0: E::Point,
    max_iter: usize,
    eval: &E,
    tol: Tolerance,
    window: Option<usize>,
) -> Result<OrbitTrace<E::Point>> {
    if max_iter < 2 {
        return Err(Error::InvalidParameter(format!(
            "max_iter must be at least 2, got {max_iter}"
        )));
    }
    if !eval.contains(&x0) {
        return Err(Error::InvalidParameter(format!(
            "starting point {} is outside the space",
            eval.label(&x0)
        )));
    }
    let mut points = Vec::with_capacity(max_iter + 1);
    points.push(x0);
    for i in 0..max_iter {
        let next = image(f, &points[i], i, eval)?;
        points.push(next);
    }
    let verdict = classify_cauchy(eval, &points, tol, window)?;
    Ok(OrbitTrace {
        labels: points.iter().map(|p| eval.label(p)).collect(),
        step_values: points
            .windows(2)
            .map(|w| eval.centered(&w[0], &w[1]))
            .collect(),
        self_values: points.iter().map(|p| eval.self_value(p)).collect(),
        points,
        verdict,
    })
}

/// A control function for orbital `φ` contractions.
#[derive(Clone)]
pub struct Phi {
    name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl Phi {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Phi {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    /// `φ(t) = k (t - r)`.
    pub fn linear(k: f64, r: f64) -> Self {
        Phi::new(format!("{k}(t - {r})"), move |t| k * (t - r))
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }
}

impl fmt::Debug for Phi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phi({})", self.name)
    }
}

/// Parameters of one contraction family.
#[derive(Debug, Clone)]
pub enum ContractionSpec {
    OrbitalC { c: f64, r: f64 },
    OrbitalPhi { r: f64, phi: Phi },
    PairwiseC { c: f64, r: f64 },
    MutualC { c: f64, r: f64, a: f64 },
}

impl ContractionSpec {
    pub fn mode(&self) -> &'static str {
        match self {
            ContractionSpec::OrbitalC { .. } => "orbital_c",
            ContractionSpec::OrbitalPhi { .. } => "orbital_phi",
            ContractionSpec::PairwiseC { .. } => "pairwise_c",
            ContractionSpec::MutualC { .. } => "mutual_c",
        }
    }

    fn validate(&self) -> Result<()> {
        let (c, r, a) = match self {
            ContractionSpec::OrbitalC { c, r } | ContractionSpec::PairwiseC { c, r } => {
                (Some(*c), *r, None)
            }
            ContractionSpec::OrbitalPhi { r, .. } => (None, *r, None),
            ContractionSpec::MutualC { c, r, a } => (Some(*c), *r, Some(*a)),
        };
        if let Some(c) = c {
            if !(c > 0.0 && c < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "c must lie in (0, 1), got {c}"
                )));
            }
        }
        if !r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "r must be finite, got {r}"
            )));
        }
        if let Some(a) = a {
            if !(a >= 0.0) || !a.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "A must be non-negative, got {a}"
                )));
            }
        }
        Ok(())
    }
}

/// One inequality family checked along a prefix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub name: String,
    pub holds: bool,
    pub instances: usize,
    /// Index (or index pair) of the first violated instance.
    pub first_violation: Option<Vec<usize>>,
    /// Smallest right side minus left side.
    pub worst_margin: f64,
}

impl InequalityCheck {
    fn new(name: impl Into<String>) -> Self {
        InequalityCheck {
            name: name.into(),
            holds: true,
            instances: 0,
            first_violation: None,
            worst_margin: f64::INFINITY,
        }
    }

    /// Records `lhs <= rhs` up to `tol`.
    fn le(&mut self, lhs: f64, rhs: f64, tol: Tolerance, index: &[usize]) {
        self.instances += 1;
        let margin = rhs - lhs;
        if margin.is_nan() || margin < self.worst_margin {
            self.worst_margin = if margin.is_nan() {
                f64::NEG_INFINITY
            } else {
                margin
            };
        }
        if !tol.le(lhs, rhs) && self.first_violation.is_none() {
            self.holds = false;
            self.first_violation = Some(index.to_vec());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionVerdict {
    pub mode: String,
    pub holds: bool,
    pub checks: Vec<InequalityCheck>,
}

impl ContractionVerdict {
    fn from_checks(mode: &str, checks: Vec<InequalityCheck>) -> Self {
        ContractionVerdict {
            mode: mode.to_string(),
            holds: checks.iter().all(|c| c.holds),
            checks,
        }
    }

    /// `name: first violation` for the first failing family.
    pub fn first_failure(&self) -> Option<String> {
        self.checks.iter().find(|c| !c.holds).map(|c| {
            let at = c
                .first_violation
                .as_ref()
                .map(|v| {
                    v.iter()
                        .map(|i| i.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                })
                .unwrap_or_default();
            format!("{} fails at i = {at}", c.name)
        })
    }
}

fn mode_mismatch(spec: &ContractionSpec, expected: &str) -> Error {
    Error::InvalidParameter(format!(
        "contraction mode {} where {expected} is required",
        spec.mode()
    ))
}

/// Checks an orbital `c_r` or `φ_r` contraction along an orbit prefix.
///
/// For pairwise kinds the `c` mode checks `r <= p(x_i, x_i)` and
/// `p(x_{i+2}, x_{i+1}) <= r + c^{i+1} |p(x_1, x_0)|`; at higher arity it checks
/// `r <= P(<x_{i+1}>^n)` and `P(<x_i>^{n-1}, x_{i+1}) <= r + c^i |P(<x_0>^{n-1}, x_1)|`.
/// The `φ` mode checks `r <= P(<x_i>^n)` and
/// `P(<x_{i+1}>^{n-1}, x_{j+1}) <= P(<x_i>^{n-1}, x_j) - φ(P(<x_i>^{n-1}, x_j))` for
/// all `i, j`, after sampling `φ` for monotonicity and `φ(r) = 0`.
pub fn check_orbital_contraction<E: DistanceEvaluator>(
    eval: &E,
    orbit: &[E::Point],
    spec: &ContractionSpec,
    tol: Tolerance,
) -> Result<ContractionVerdict> {
    spec.validate()?;
    let len = orbit.len();
    if len < 3 {
        return Err(Error::InvalidParameter(format!(
            "orbit prefix needs at least 3 points, got {len}"
        )));
    }
    let x = orbit;
    match spec {
        ContractionSpec::OrbitalC { c, r } => {
            let (c, r) = (*c, *r);
            if eval.kind().family().is_pairwise() {
                let m = eval.centered(&x[1], &x[0]).abs();
                let mut lbnd = InequalityCheck::new("r <= p(x_i, x_i)");
                for i in 0..len {
                    lbnd.le(r, eval.self_value(&x[i]), tol, &[i]);
                }
                let mut step = InequalityCheck::new("p(x_{i+2}, x_{i+1}) <= r + c^{i+1} M");
                for i in 0..len - 2 {
                    let bound = r + c.powi(i as i32 + 1) * m;
                    step.le(eval.centered(&x[i + 2], &x[i + 1]), bound, tol, &[i]);
                }
                Ok(ContractionVerdict::from_checks(
                    spec.mode(),
                    vec![lbnd, step],
                ))
            } else {
                let m = eval.centered(&x[0], &x[1]).abs();
                let mut lbnd = InequalityCheck::new("r <= P(<x_{i+1}>^n)");
                for i in 0..len - 1 {
                    lbnd.le(r, eval.self_value(&x[i + 1]), tol, &[i]);
                }
                let mut step = InequalityCheck::new("P(<x_i>^{n-1}, x_{i+1}) <= r + c^i M");
                for i in 0..len - 1 {
                    let bound = r + c.powi(i as i32) * m;
                    step.le(eval.centered(&x[i], &x[i + 1]), bound, tol, &[i]);
                }
                Ok(ContractionVerdict::from_checks(
                    spec.mode(),
                    vec![lbnd, step],
                ))
            }
        }
        ContractionSpec::OrbitalPhi { r, phi } => {
            let r = *r;
            let mut top = r + 1.0;
            for i in 0..len {
                for j in 0..len {
                    let v = eval.centered(&x[i], &x[j]);
                    if v.is_finite() {
                        top = top.max(v);
                    }
                }
            }
            validate_phi(phi, r, top, tol)?;
            let mut lbnd = InequalityCheck::new("r <= P(<x_i>^n)");
            for i in 0..len {
                lbnd.le(r, eval.self_value(&x[i]), tol, &[i]);
            }
            let mut step = InequalityCheck::new(
                "P(<x_{i+1}>^{n-1}, x_{j+1}) <= P(<x_i>^{n-1}, x_j) - phi(P(<x_i>^{n-1}, x_j))",
            );
            for i in 0..len - 1 {
                for j in 0..len - 1 {
                    let before = eval.centered(&x[i], &x[j]);
                    let after = eval.centered(&x[i + 1], &x[j + 1]);
                    step.le(after, before - phi.eval(before), tol, &[i, j]);
                }
            }
            Ok(ContractionVerdict::from_checks(
                spec.mode(),
                vec![lbnd, step],
            ))
        }
        _ => Err(mode_mismatch(spec, "orbital_c or orbital_phi")),
    }
}

/// Samples `φ` on 100 points of `[r, top]`: it must be finite, vanish at `r`,
/// be positive after `r` and never decrease.
fn validate_phi(phi: &Phi, r: f64, top: f64, tol: Tolerance) -> Result<()> {
    let bad = |what: String| Err(Error::InvalidParameter(format!("phi {what}")));
    let at_r = phi.eval(r);
    if !(at_r.abs() <= tol.abs()) {
        return bad(format!("must vanish at r = {r}, got {at_r}"));
    }
    let mut prev = at_r;
    for k in 1..100 {
        let t = r + (top - r) * k as f64 / 99.0;
        let v = phi.eval(t);
        if !v.is_finite() || v <= 0.0 {
            return bad(format!("must be positive after r, got phi({t}) = {v}"));
        }
        if v < prev - tol.abs() {
            return bad(format!("must be non-decreasing, drops to {v} at {t}"));
        }
        prev = v;
    }
    Ok(())
}

/// Checks that `f` and `g` are `f`-pairwise `c_r`-contractive over the two
/// orbit prefixes `x_i = f^i(x_0)` and `y_i = g^i(y_0)`:
/// `r <= min{P(<x_i>^n), P(<y_i>^n)}`, `P(<x_{i+1}>^{n-1}, y_i) <= r + c^i M` and
/// `P(<x_i>^{n-1}, y_i) <= r + c^i M` with
/// `M = max{|P(<x_1>^{n-1}, y_0)|, |P(<x_0>^{n-1}, y_0)|}`.
pub fn check_pairwise_contraction<E: DistanceEvaluator>(
    eval: &E,
    xs: &[E::Point],
    ys: &[E::Point],
    spec: &ContractionSpec,
    tol: Tolerance,
) -> Result<ContractionVerdict> {
    let ContractionSpec::PairwiseC { c, r } = *spec else {
        return Err(mode_mismatch(spec, "pairwise_c"));
    };
    spec.validate()?;
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch(xs.len(), ys.len()));
    }
    let len = xs.len();
    if len < 2 {
        return Err(Error::InvalidParameter(format!(
            "orbit prefixes need at least 2 points, got {len}"
        )));
    }
    let m = eval
        .centered(&xs[1], &ys[0])
        .abs()
        .max(eval.centered(&xs[0], &ys[0]).abs());
    let mut lbnd = InequalityCheck::new("r <= min{P(<x_i>^n), P(<y_i>^n)}");
    let mut shifted = InequalityCheck::new("P(<x_{i+1}>^{n-1}, y_i) <= r + c^i M");
    let mut aligned = InequalityCheck::new("P(<x_i>^{n-1}, y_i) <= r + c^i M");
    for i in 0..len {
        let bound = r + c.powi(i as i32) * m;
        lbnd.le(
            r,
            eval.self_value(&xs[i]).min(eval.self_value(&ys[i])),
            tol,
            &[i],
        );
        if i + 1 < len {
            shifted.le(eval.centered(&xs[i + 1], &ys[i]), bound, tol, &[i]);
        }
        aligned.le(eval.centered(&xs[i], &ys[i]), bound, tol, &[i]);
    }
    Ok(ContractionVerdict::from_checks(
        spec.mode(),
        vec![lbnd, shifted, aligned],
    ))
}

/// A sequence `x_1, x_2, ...` in the domain of two maps, with the images.
#[derive(Debug, Clone, PartialEq)]
pub struct CoincidenceTrace<P, Q> {
    pub points: Vec<P>,
    pub f_values: Vec<Q>,
    pub g_values: Vec<Q>,
}

/// `H(<f x>^{n-1}, g x) - H(<f x>^n)`.
pub fn gap_f<H: DistanceEvaluator>(cod: &H, fx: &H::Point, gx: &H::Point) -> f64 {
    cod.centered(fx, gx) - cod.self_value(fx)
}

/// `H(<f x>^{n-1}, g x) - H(<g x>^n)`.
pub fn gap_g<H: DistanceEvaluator>(cod: &H, fx: &H::Point, gx: &H::Point) -> f64 {
    cod.centered(fx, gx) - cod.self_value(gx)
}

/// Checks the mutual `c_r` contraction along consecutive pairs
/// `(x, z) = (x_i, x_{i+1})` of a trace, with 1-based indices.
///
/// The `f` rows are `gap_f(z) <= c gap_f(x)`, `r <= P(<z>^n) <= P(<z>^{n-1}, x)`
/// and `P(<z>^{n-1}, x) <= r + A gap_f(x)`. With `both` the same rows are also
/// checked for `gap_g`.
pub fn check_mutual_contraction<E, H>(
    dom: &E,
    cod: &H,
    trace: &CoincidenceTrace<E::Point, H::Point>,
    spec: &ContractionSpec,
    both: bool,
    tol: Tolerance,
) -> Result<ContractionVerdict>
where
    E: DistanceEvaluator,
    H: DistanceEvaluator,
{
    let ContractionSpec::MutualC { c, r, a } = *spec else {
        return Err(mode_mismatch(spec, "mutual_c"));
    };
    spec.validate()?;
    let len = trace.points.len();
    if len < 2 || trace.f_values.len() != len || trace.g_values.len() != len {
        return Err(Error::InvalidParameter(
            "mutual contraction needs at least 2 points with both images".into(),
        ));
    }
    let mut shrink_f = InequalityCheck::new("gap_f(z) <= c gap_f(x)");
    let mut shrink_g = InequalityCheck::new("gap_g(z) <= c gap_g(x)");
    let mut lower = InequalityCheck::new("r <= P(<z>^n)");
    let mut middle = InequalityCheck::new("P(<z>^n) <= P(<z>^{n-1}, x)");
    let mut upper_f = InequalityCheck::new("P(<z>^{n-1}, x) <= r + A gap_f(x)");
    let mut upper_g = InequalityCheck::new("P(<z>^{n-1}, x) <= r + A gap_g(x)");
    for k in 0..len - 1 {
        let idx = [k + 1];
        let (x, z) = (&trace.points[k], &trace.points[k + 1]);
        let (fx, gx) = (&trace.f_values[k], &trace.g_values[k]);
        let (fz, gz) = (&trace.f_values[k + 1], &trace.g_values[k + 1]);
        let zx = dom.centered(z, x);
        let sz = dom.self_value(z);
        shrink_f.le(gap_f(cod, fz, gz), c * gap_f(cod, fx, gx), tol, &idx);
        lower.le(r, sz, tol, &idx);
        middle.le(sz, zx, tol, &idx);
        upper_f.le(zx, r + a * gap_f(cod, fx, gx), tol, &idx);
        if both {
            shrink_g.le(gap_g(cod, fz, gz), c * gap_g(cod, fx, gx), tol, &idx);
            upper_g.le(zx, r + a * gap_g(cod, fx, gx), tol, &idx);
        }
    }
    let checks = if both {
        vec![shrink_f, shrink_g, lower, middle, upper_f, upper_g]
    } else {
        vec![shrink_f, lower, middle, upper_f]
    };
    Ok(ContractionVerdict::from_checks(spec.mode(), checks))
}

/// Outcome of a sampled function property.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleVerdict {
    pub holds: bool,
    pub checked: usize,
    /// Labels of the first failing sample.
    pub witness: Option<Vec<String>>,
    /// Smallest slack over the samples.
    pub margin: f64,
}

impl SampleVerdict {
    fn new() -> Self {
        SampleVerdict {
            holds: true,
            checked: 0,
            witness: None,
            margin: f64::INFINITY,
        }
    }

    fn record(&mut self, ok: bool, margin: f64, witness: impl FnOnce() -> Vec<String>) {
        self.checked += 1;
        self.margin = if margin.is_nan() {
            f64::NEG_INFINITY
        } else {
            self.margin.min(margin)
        };
        if !ok && self.holds {
            self.holds = false;
            self.witness = Some(witness());
        }
    }
}

/// Checks `P(<f x>^{n-1}, f y) <= P(<x>^{n-1}, y)` on the sampled pairs.
pub fn check_nonexpansive<E: DistanceEvaluator>(
    f: &Map<E::Point>,
    eval: &E,
    pairs: &[(E::Point, E::Point)],
    tol: Tolerance,
) -> Result<SampleVerdict> {
    if pairs.is_empty() {
        return Err(Error::InvalidParameter("no sample pairs".into()));
    }
    let mut v = SampleVerdict::new();
    for (k, (x, y)) in pairs.iter().enumerate() {
        let fx = f.at(x, k)?;
        let fy = f.at(y, k)?;
        let lhs = eval.centered(&fx, &fy);
        let rhs = eval.centered(x, y);
        v.record(tol.le(lhs, rhs), rhs - lhs, || {
            vec![eval.label(x), eval.label(y)]
        });
    }
    Ok(v)
}

/// Checks that `P(<x>^n) <= P(<z>^n)` implies `H(<f x>^n) <= H(<f z>^n)` on the
/// sampled pairs, in both orders. The premise is exact and the conclusion is
/// allowed `tol`.
pub fn check_consistent<E, H>(
    f: &Map<E::Point, H::Point>,
    dom: &E,
    cod: &H,
    pairs: &[(E::Point, E::Point)],
    tol: Tolerance,
) -> Result<SampleVerdict>
where
    E: DistanceEvaluator,
    H: DistanceEvaluator,
{
    if pairs.is_empty() {
        return Err(Error::InvalidParameter("no sample pairs".into()));
    }
    let mut v = SampleVerdict::new();
    for (k, (x, z)) in pairs.iter().enumerate() {
        let (fx, fz) = (f.at(x, k)?, f.at(z, k)?);
        let (sx, sz) = (dom.self_value(x), dom.self_value(z));
        let (hx, hz) = (cod.self_value(&fx), cod.self_value(&fz));
        for (a, b, sa, sb, ha, hb) in [(x, z, sx, sz, hx, hz), (z, x, sz, sx, hz, hx)] {
            if sa <= sb {
                v.record(tol.le(ha, hb), hb - ha, || vec![dom.label(a), dom.label(b)]);
            }
        }
    }
    Ok(v)
}
