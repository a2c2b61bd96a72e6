//! Fixed, common fixed and coincidence point procedures.
//!
//! Each solver iterates until the produced sequence settles (or `max_iter`
//! runs out), picks a limit candidate from the tail and then checks the
//! conclusions the existence theorems rely on. The candidate is the last
//! iterate rounded to the point-identity grid when that rounded point is a
//! special limit of the prefix, and the raw last iterate otherwise.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    check_consistent, check_mutual_contraction, check_nonexpansive, check_orbital_contraction,
    check_pairwise_contraction, gap_f, gap_g, image, CoincidenceTrace, ContractionSpec, Map,
    SampleVerdict,
};
use crate::error::{Error, Result};
use crate::sequences::{
    check_cauchy_pair, check_limit, check_special_limit, classify_cauchy, default_window,
    DistanceEvaluator,
};
use crate::space::{Base, MetricKind, Tolerance};

/// Which separation argument turns the checked equalities into `f(a) = a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Partial (n-)metrics: both the non-expansive and the weak orbital
    /// continuity conclusions are needed.
    Partial,
    /// Metrics and strong partial (n-)metrics: either conclusion suffices.
    Strong,
}

impl Route {
    pub fn for_kind(kind: MetricKind) -> Route {
        if kind.base() == Base::Partial {
            Route::Partial
        } else {
            Route::Strong
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub max_iter: usize,
    pub tol: Tolerance,
    pub window: Option<usize>,
    /// Defaults to the route of the (co)domain kind.
    pub route: Option<Route>,
    /// Central distance; estimated from the tail when absent.
    pub r: Option<f64>,
    /// Contraction constant. When given, the matching contraction family is
    /// checked; the coincidence solver estimates it otherwise.
    pub c: Option<f64>,
    /// Mutual contraction constant `A`, estimated when absent.
    pub a: Option<f64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_iter: 100,
            tol: Tolerance::default(),
            window: None,
            route: None,
            r: None,
            c: None,
            a: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    FixedPoint,
    CommonFixedPoint,
    CoincidencePoint,
    NoCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: Option<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Parameter {
    pub value: f64,
    /// `supplied`, `estimated` or `default`.
    pub source: String,
}

/// A solver certificate. A success status means every entry of `checks`
/// passed; `assumed` lists the hypotheses that were not checked.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult<P> {
    pub status: SolveStatus,
    pub route: Route,
    /// Labels of the candidate and its images.
    pub points: BTreeMap<String, String>,
    pub residuals: BTreeMap<String, f64>,
    pub iterations: usize,
    pub checks: Vec<Check>,
    pub assumed: Vec<String>,
    pub parameters: BTreeMap<String, Parameter>,
    pub candidate_source: Option<String>,
    pub reason: Option<String>,
    #[serde(skip)]
    pub candidate: Option<P>,
}

impl<P> SolveResult<P> {
    fn new(route: Route, iterations: usize) -> Self {
        SolveResult {
            status: SolveStatus::NoCertificate,
            route,
            points: BTreeMap::new(),
            residuals: BTreeMap::new(),
            iterations,
            checks: Vec::new(),
            assumed: Vec::new(),
            parameters: BTreeMap::new(),
            candidate_source: None,
            reason: None,
            candidate: None,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn is_certified(&self) -> bool {
        self.status != SolveStatus::NoCertificate
    }

    fn param(&mut self, name: &str, value: f64, source: &str) {
        self.parameters.insert(
            name.to_string(),
            Parameter {
                value,
                source: source.to_string(),
            },
        );
    }

    fn assume(&mut self, what: &str) {
        self.assumed.push(what.to_string());
    }

    /// Sets the status when every check passed, or records the first failure.
    fn conclude(mut self, success: SolveStatus) -> Self {
        match self.checks.iter().find(|c| !c.passed) {
            None => self.status = success,
            Some(c) => {
                self.status = SolveStatus::NoCertificate;
                self.reason = Some(match &c.detail {
                    Some(d) => format!("{} failed: {d}", c.name),
                    None => format!("{} failed", c.name),
                });
            }
        }
        self
    }
}

const COMPLETE: &str = "completeness: the tail of the sequence stands in for its limit";

fn quarter(tol: Tolerance) -> Result<Tolerance> {
    Tolerance::new(tol.abs() / 4.0)
}

/// Whether the prefix is settled: Cauchy within a quarter of the tolerance
/// (leaving slack for the limit checks) and either five terms long or stalled.
fn settled<E: DistanceEvaluator>(
    eval: &E,
    prefix: &[E::Point],
    opts: &SolveOptions,
) -> Result<bool> {
    let len = prefix.len();
    if len < 2 || opts.window.is_some_and(|w| w > len) {
        return Ok(false);
    }
    let stalled = eval.same_point(&prefix[len - 2], &prefix[len - 1]);
    if len < 5 && !stalled {
        return Ok(false);
    }
    Ok(classify_cauchy(eval, prefix, quarter(opts.tol)?, opts.window)?.is_cauchy)
}

fn check_start<E: DistanceEvaluator>(eval: &E, p: &E::Point) -> Result<()> {
    if eval.contains(p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "starting point {} is outside the space",
            eval.label(p)
        )))
    }
}

fn check_budget(opts: &SolveOptions) -> Result<()> {
    if opts.max_iter < 1 {
        return Err(Error::InvalidParameter(
            "max_iter must be at least 1".into(),
        ));
    }
    Ok(())
}

fn run_orbit<E: DistanceEvaluator>(
    f: &Map<E::Point>,
    x0: E::Point,
    eval: &E,
    opts: &SolveOptions,
) -> Result<Vec<E::Point>> {
    check_budget(opts)?;
    check_start(eval, &x0)?;
    let mut xs = vec![x0];
    while xs.len() <= opts.max_iter && !settled(eval, &xs, opts)? {
        let next = image(f, xs.last().expect("nonempty"), xs.len() - 1, eval)?;
        xs.push(next);
    }
    Ok(xs)
}

/// The limit candidate, where it came from and whether it is a special limit.
fn candidate<E: DistanceEvaluator>(
    eval: &E,
    prefix: &[E::Point],
    opts: &SolveOptions,
) -> Result<(E::Point, &'static str, bool)> {
    let last = prefix.last().expect("nonempty prefix");
    let snapped = eval.snap(last);
    if eval.contains(&snapped)
        && check_special_limit(eval, prefix, &snapped, opts.tol, opts.window)?
    {
        return Ok((snapped, "snapped_last_iterate", true));
    }
    let special = check_special_limit(eval, prefix, last, opts.tol, opts.window)?;
    Ok((last.clone(), "last_iterate", special))
}

fn tail<'a, P>(prefix: &'a [P], opts: &SolveOptions) -> &'a [P] {
    let w = opts
        .window
        .unwrap_or_else(|| default_window(prefix.len()))
        .min(prefix.len());
    &prefix[prefix.len() - w..]
}

/// Every ordered pair drawn from the tail and the candidate.
fn sample_pairs<P: Clone>(tail: &[P], a: &P) -> Vec<(P, P)> {
    let mut pts = tail.to_vec();
    pts.push(a.clone());
    pts.iter()
        .flat_map(|x| pts.iter().map(move |y| (x.clone(), y.clone())))
        .collect()
}

fn sample_detail(v: &SampleVerdict) -> Option<String> {
    Some(match &v.witness {
        Some(w) => format!("{} samples, first failure at ({})", v.checked, w.join(", ")),
        None => format!("{} samples, smallest slack {}", v.checked, v.margin),
    })
}

/// Checks gathered at a candidate for one map.
struct MapEvidence {
    nonexpansive: [Check; 2],
    continuity: [Check; 2],
    equality: Check,
}

#[allow(clippy::too_many_arguments)]
fn evidence<E: DistanceEvaluator>(
    f: &Map<E::Point>,
    eval: &E,
    orbit: &[E::Point],
    a: &E::Point,
    fa: &E::Point,
    opts: &SolveOptions,
    prefix: &str,
    residuals: &mut BTreeMap<String, f64>,
) -> Result<MapEvidence> {
    let tol = opts.tol;
    let name = |s: &str| format!("{prefix}{s}");
    let ne = check_nonexpansive(f, eval, &sample_pairs(tail(orbit, opts), a), tol)?;
    let ne_res = eval.centered(a, fa) - eval.self_value(a);
    let woc_res = eval.centered(fa, a) - eval.self_value(fa);
    residuals.insert(name("nonexpansive_residual"), ne_res);
    residuals.insert(name("woc_residual"), woc_res);
    let woc = check_limit(eval, orbit, fa, tol, opts.window)?;
    Ok(MapEvidence {
        nonexpansive: [
            Check::new(name("non_expansive"), ne.holds, sample_detail(&ne)),
            Check::new(
                name("nonexpansive_conclusion"),
                ne_res.abs() <= tol.abs(),
                Some(format!("P(<a>^(n-1), f(a)) - P(<a>^n) = {ne_res}")),
            ),
        ],
        continuity: [
            Check::new(
                name("weak_orbital_continuity_evidence"),
                woc,
                Some(format!(
                    "f(a) = {} tested as a limit of the orbit",
                    eval.label(fa)
                )),
            ),
            Check::new(
                name("woc_conclusion"),
                woc_res.abs() <= tol.abs(),
                Some(format!("P(<f(a)>^(n-1), a) - P(<f(a)>^n) = {woc_res}")),
            ),
        ],
        equality: Check::new(
            name("fixed_point_equality"),
            eval.same_point(a, fa),
            Some(format!("a = {}, f(a) = {}", eval.label(a), eval.label(fa))),
        ),
    })
}

/// Adds the checks a route needs for one map. On the strong route the
/// non-expansive alternative is preferred when it passes.
fn apply_route<P>(res: &mut SolveResult<P>, route: Route, ev: MapEvidence) {
    let all = |cs: &[Check; 2]| cs.iter().all(|c| c.passed);
    let ne_ok = all(&ev.nonexpansive);
    let woc_ok = all(&ev.continuity);
    match route {
        Route::Partial => {
            res.checks.extend(ev.nonexpansive);
            res.checks.extend(ev.continuity);
            res.assume("non-expansiveness beyond the sampled pairs");
            res.assume("weak orbital continuity beyond the candidate");
        }
        Route::Strong if ne_ok => {
            res.checks.extend(ev.nonexpansive);
            res.assume("non-expansiveness beyond the sampled pairs");
        }
        Route::Strong if woc_ok => {
            res.checks.extend(ev.continuity);
            res.assume("weak orbital continuity beyond the candidate");
        }
        Route::Strong => {
            res.checks.extend(ev.nonexpansive);
            res.checks.extend(ev.continuity);
        }
    }
    res.checks.push(ev.equality);
    res.assumed.dedup();
}

fn record_r<P>(res: &mut SolveResult<P>, supplied: Option<f64>, estimate: f64) -> f64 {
    match supplied {
        Some(r) => {
            res.param("r", r, "supplied");
            r
        }
        None => {
            res.param("r", estimate, "estimated");
            estimate
        }
    }
}

/// Looks for a fixed point of `f` by iterating from `x0`.
///
/// ```
/// use genmetric::fixedpoint::{find_fixed_point, maps, SolveOptions, SolveStatus};
/// use genmetric::spaces::{RealFamily, RealPoint, RealSpace};
///
/// let line = RealSpace::new(RealFamily::MaxPartial, 2).unwrap().with_bounds(0.0, 1.0).unwrap();
/// let res = find_fixed_point(&maps::linear(0.5), RealPoint::Real(1.0), &line, &SolveOptions::default()).unwrap();
/// assert_eq!(res.status, SolveStatus::FixedPoint);
/// assert_eq!(res.candidate, Some(RealPoint::Real(0.0)));
/// ```
pub fn find_fixed_point<E: DistanceEvaluator>(
    f: &Map<E::Point>,
    x0: E::Point,
    eval: &E,
    opts: &SolveOptions,
) -> Result<SolveResult<E::Point>> {
    let tol = opts.tol;
    let route = opts.route.unwrap_or_else(|| Route::for_kind(eval.kind()));
    let xs = run_orbit(f, x0, eval, opts)?;
    let mut res = SolveResult::new(route, xs.len() - 1);
    res.assume(COMPLETE);

    let verdict = classify_cauchy(eval, &xs, tol, opts.window)?;
    let r = record_r(&mut res, opts.r, verdict.central_distance);
    res.checks.push(Check::new(
        "cauchy_orbit",
        verdict.is_cauchy,
        Some(format!(
            "central distance {}, tail deviation {}",
            verdict.central_distance, verdict.max_tail_deviation
        )),
    ));
    if !verdict.is_cauchy {
        return Ok(res.conclude(SolveStatus::FixedPoint));
    }
    if let Some(supplied) = opts.r {
        res.checks.push(Check::new(
            "central_distance",
            tol.eq(supplied, verdict.central_distance),
            Some(format!("estimated {}", verdict.central_distance)),
        ));
    }
    if let Some(c) = opts.c {
        res.param("c", c, "supplied");
        if xs.len() >= 3 {
            let v = check_orbital_contraction(eval, &xs, &ContractionSpec::OrbitalC { c, r }, tol)?;
            res.checks.push(Check::new(
                "orbital_contraction",
                v.holds,
                v.first_failure(),
            ));
        }
    }

    let (a, source, special) = candidate(eval, &xs, opts)?;
    res.candidate_source = Some(source.to_string());
    res.checks.push(Check::new(
        "special_limit_candidate",
        special,
        Some(format!("a = {}", eval.label(&a))),
    ));
    let fa = image(f, &a, xs.len(), eval)?;
    res.points.insert("a".into(), eval.label(&a));
    res.points.insert("f(a)".into(), eval.label(&fa));
    let ev = evidence(f, eval, &xs, &a, &fa, opts, "", &mut res.residuals)?;
    apply_route(&mut res, route, ev);
    res.candidate = Some(a);
    Ok(res.conclude(SolveStatus::FixedPoint))
}

/// Looks for a common fixed point of `f` and `g` from the orbits of `x0`
/// under `f` and `y0` under `g`.
pub fn find_common_fixed_point<E: DistanceEvaluator>(
    f: &Map<E::Point>,
    g: &Map<E::Point>,
    x0: E::Point,
    y0: E::Point,
    eval: &E,
    opts: &SolveOptions,
) -> Result<SolveResult<E::Point>> {
    let tol = opts.tol;
    let route = opts.route.unwrap_or_else(|| Route::for_kind(eval.kind()));
    check_budget(opts)?;
    check_start(eval, &x0)?;
    check_start(eval, &y0)?;
    let strict = quarter(tol)?;
    let mut xs = vec![x0];
    let mut ys = vec![y0];
    loop {
        let len = xs.len();
        let stalled = len >= 2
            && eval.same_point(&xs[len - 2], &xs[len - 1])
            && eval.same_point(&ys[len - 2], &ys[len - 1]);
        let ready = len >= 2 && (len >= 5 || stalled) && !opts.window.is_some_and(|w| w > len);
        if ready && check_cauchy_pair(eval, &xs, &ys, strict, opts.window)?.is_cauchy {
            break;
        }
        if len > opts.max_iter {
            break;
        }
        let nx = image(f, &xs[len - 1], len - 1, eval)?;
        let ny = image(g, &ys[len - 1], len - 1, eval)?;
        xs.push(nx);
        ys.push(ny);
    }
    let mut res = SolveResult::new(route, xs.len() - 1);
    res.assume(COMPLETE);

    let verdict = check_cauchy_pair(eval, &xs, &ys, tol, opts.window)?;
    let r = record_r(&mut res, opts.r, verdict.central_distance);
    res.checks.push(Check::new(
        "cauchy_pair",
        verdict.is_cauchy,
        Some(format!(
            "central distance {}, tail deviation {}",
            verdict.central_distance, verdict.max_tail_deviation
        )),
    ));
    if !verdict.is_cauchy {
        return Ok(res.conclude(SolveStatus::CommonFixedPoint));
    }
    if let Some(supplied) = opts.r {
        res.checks.push(Check::new(
            "central_distance",
            tol.eq(supplied, verdict.central_distance),
            Some(format!("estimated {}", verdict.central_distance)),
        ));
    }
    if let Some(c) = opts.c {
        res.param("c", c, "supplied");
        let v =
            check_pairwise_contraction(eval, &xs, &ys, &ContractionSpec::PairwiseC { c, r }, tol)?;
        res.checks.push(Check::new(
            "pairwise_contraction",
            v.holds,
            v.first_failure(),
        ));
    }

    let (a, source, special) = candidate(eval, &xs, opts)?;
    res.candidate_source = Some(source.to_string());
    let special_g = match check_special_limit(eval, &ys, &a, tol, opts.window) {
        Ok(b) => b,
        Err(Error::NotCauchy) => false,
        Err(e) => return Err(e),
    };
    res.checks.push(Check::new(
        "special_limit_candidate",
        special && special_g,
        Some(format!("a = {} for both orbits", eval.label(&a))),
    ));
    let fa = image(f, &a, xs.len(), eval)?;
    let ga = image(g, &a, ys.len(), eval)?;
    res.points.insert("a".into(), eval.label(&a));
    res.points.insert("f(a)".into(), eval.label(&fa));
    res.points.insert("g(a)".into(), eval.label(&ga));
    let ev_f = evidence(f, eval, &xs, &a, &fa, opts, "f:", &mut res.residuals)?;
    let ev_g = evidence(g, eval, &ys, &a, &ga, opts, "g:", &mut res.residuals)?;
    apply_route(&mut res, route, ev_f);
    apply_route(&mut res, route, ev_g);
    res.assumed.dedup();
    res.candidate = Some(a);
    Ok(res.conclude(SolveStatus::CommonFixedPoint))
}

/// Looks for a coincidence point of `f, g: X -> Y`, producing the sequence
/// `x_{i+1} = selector(x_i)` from `x1`.
///
/// With a partial codomain both gap families are checked; with a metric or
/// strong partial codomain only the `f` family is. `c`, `A` and `r` are
/// estimated from the run unless supplied; ratios are only taken over steps
/// whose gap exceeds the square root of the tolerance.
///
/// ```
/// use genmetric::fixedpoint::{find_coincidence_point, maps, SolveOptions, SolveStatus};
/// use genmetric::spaces::{RealFamily, RealPoint, RealSpace};
///
/// let dom = RealSpace::new(RealFamily::AbsMetric, 2).unwrap().with_bounds(0.0, 1.0).unwrap();
/// let cod = RealSpace::new(RealFamily::AbsMetric, 2).unwrap();
/// let third = maps::affine(1.0 / 3.0, 1.0 / 3.0);
/// let res = find_coincidence_point(&maps::identity(), &third, &third, &dom, &cod,
///     RealPoint::Real(0.0), &SolveOptions::default()).unwrap();
/// assert_eq!(res.status, SolveStatus::CoincidencePoint);
/// assert_eq!(res.candidate, Some(RealPoint::Real(0.5)));
/// ```
pub fn find_coincidence_point<E, H>(
    f: &Map<E::Point, H::Point>,
    g: &Map<E::Point, H::Point>,
    selector: &Map<E::Point>,
    dom: &E,
    cod: &H,
    x1: E::Point,
    opts: &SolveOptions,
) -> Result<SolveResult<E::Point>>
where
    E: DistanceEvaluator,
    H: DistanceEvaluator,
{
    let tol = opts.tol;
    let route = opts.route.unwrap_or_else(|| Route::for_kind(cod.kind()));
    let both = route == Route::Partial;
    check_budget(opts)?;
    check_start(dom, &x1)?;

    let mut trace = CoincidenceTrace {
        f_values: vec![image(f, &x1, 0, cod)?],
        g_values: vec![image(g, &x1, 0, cod)?],
        points: vec![x1],
    };
    while trace.points.len() <= opts.max_iter && !settled(dom, &trace.points, opts)? {
        let k = trace.points.len() - 1;
        let z = image(selector, &trace.points[k], k, dom)?;
        trace.f_values.push(image(f, &z, k + 1, cod)?);
        trace.g_values.push(image(g, &z, k + 1, cod)?);
        trace.points.push(z);
    }
    let len = trace.points.len();
    let mut res = SolveResult::new(route, len - 1);
    res.assume(COMPLETE);
    res.assume("sequential continuity of f and g beyond the produced sequence");

    let verdict = classify_cauchy(dom, &trace.points, tol, opts.window)?;
    let r = record_r(&mut res, opts.r, verdict.central_distance);
    res.checks.push(Check::new(
        "cauchy_sequence",
        verdict.is_cauchy,
        Some(format!(
            "central distance {}, tail deviation {}",
            verdict.central_distance, verdict.max_tail_deviation
        )),
    ));
    if !verdict.is_cauchy {
        return Ok(res.conclude(SolveStatus::CoincidencePoint));
    }

    // largest observed ratios, over steps with a measurable gap
    let floor = tol.abs().sqrt();
    let mut c_est: Option<(f64, usize)> = None;
    let mut a_est: Option<f64> = None;
    for k in 0..len - 1 {
        let (fx, gx) = (&trace.f_values[k], &trace.g_values[k]);
        let (fz, gz) = (&trace.f_values[k + 1], &trace.g_values[k + 1]);
        let zx = dom.centered(&trace.points[k + 1], &trace.points[k]);
        let mut gaps = vec![(gap_f(cod, fx, gx), gap_f(cod, fz, gz))];
        if both {
            gaps.push((gap_g(cod, fx, gx), gap_g(cod, fz, gz)));
        }
        for (before, after) in gaps {
            if before > floor {
                let ratio = after / before;
                if c_est.is_none_or(|(c, _)| ratio > c) {
                    c_est = Some((ratio, k + 1));
                }
                let slope = ((zx - r) / before).max(0.0);
                a_est = Some(a_est.map_or(slope, |a: f64| a.max(slope)));
            }
        }
    }
    let (c, c_at) = match (opts.c, c_est) {
        (Some(c), _) => {
            res.param("c", c, "supplied");
            (c, None)
        }
        (None, Some((c, at))) => {
            res.param("c", c, "estimated");
            (c, Some(at))
        }
        (None, None) => {
            res.param("c", 0.5, "default");
            (0.5, None)
        }
    };
    let a = match (opts.a, a_est) {
        (Some(a), _) => {
            res.param("A", a, "supplied");
            a
        }
        (None, Some(a)) => {
            res.param("A", a, "estimated");
            a
        }
        (None, None) => {
            res.param("A", 0.0, "default");
            0.0
        }
    };
    match c_at {
        Some(at) if c >= 1.0 => res.checks.push(Check::new(
            "mutual_contraction",
            false,
            Some(format!("gap ratio {c} at i = {at} leaves no c < 1")),
        )),
        _ => {
            let spec = ContractionSpec::MutualC { c, r, a };
            let v = check_mutual_contraction(dom, cod, &trace, &spec, both, tol)?;
            res.checks
                .push(Check::new("mutual_contraction", v.holds, v.first_failure()));
        }
    }

    let (x, source, special) = candidate(dom, &trace.points, opts)?;
    res.candidate_source = Some(source.to_string());
    res.checks.push(Check::new(
        "special_limit_candidate",
        special,
        Some(format!("a = {}", dom.label(&x))),
    ));
    let fa = image(f, &x, len, cod)?;
    let ga = image(g, &x, len, cod)?;
    res.points.insert("a".into(), dom.label(&x));
    res.points.insert("f(a)".into(), cod.label(&fa));
    res.points.insert("g(a)".into(), cod.label(&ga));

    for (name, map, values, image_at_a) in [
        ("f", f, &trace.f_values, &fa),
        ("g", g, &trace.g_values, &ga),
    ] {
        let limit = check_limit(cod, values, image_at_a, tol, opts.window)?;
        res.checks.push(Check::new(
            format!("{name}:sequential_continuity_evidence"),
            limit,
            Some(format!(
                "{name}(a) = {} tested as a limit of the images",
                cod.label(image_at_a)
            )),
        ));
        let pairs = sample_pairs(tail(&trace.points, opts), &x);
        let v = check_consistent(map, dom, cod, &pairs, tol)?;
        res.checks.push(Check::new(
            format!("{name}:consistent"),
            v.holds,
            sample_detail(&v),
        ));
    }

    let gf = gap_f(cod, &fa, &ga);
    let gg = gap_g(cod, &fa, &ga);
    res.residuals.insert("gap_f".into(), gf);
    res.residuals.insert("gap_g".into(), gg);
    let gap = if both { gf.max(gg) } else { gf };
    res.checks.push(Check::new(
        "coincidence_gap",
        gap <= tol.abs(),
        Some(format!("gap {gap}")),
    ));
    res.checks.push(Check::new(
        "coincidence_equality",
        cod.same_point(&fa, &ga),
        Some(format!(
            "f(a) = {}, g(a) = {}",
            cod.label(&fa),
            cod.label(&ga)
        )),
    ));
    res.candidate = Some(x);
    Ok(res.conclude(SolveStatus::CoincidencePoint))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixedpoint::maps;
    use crate::spaces::{RealFamily, RealPoint, RealSpace};

    fn max_partial(lo: f64, hi: f64) -> RealSpace {
        RealSpace::new(RealFamily::MaxPartial, 2)
            .unwrap()
            .with_bounds(lo, hi)
            .unwrap()
    }

    fn abs_metric() -> RealSpace {
        RealSpace::new(RealFamily::AbsMetric, 2).unwrap()
    }

    fn x(p: &Option<RealPoint>) -> f64 {
        p.unwrap().as_real().unwrap()
    }

    #[test]
    fn halving_reaches_zero() {
        let line = max_partial(0.0, 1.0);
        let res = find_fixed_point(
            &maps::linear(0.5),
            RealPoint::Real(1.0),
            &line,
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(res.status, SolveStatus::FixedPoint, "{res:?}");
        assert!(x(&res.candidate).abs() <= 1e-9);
        assert!(res.iterations <= 60, "{}", res.iterations);
        assert!(res.checks.iter().all(|c| c.passed));
        assert!(res.residuals.values().all(|r| r.abs() <= 1e-9));
    }

    #[test]
    fn identity_is_fixed_immediately() {
        let line = max_partial(0.0, 1.0);
        let res = find_fixed_point(
            &maps::identity(),
            RealPoint::Real(0.3),
            &line,
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(res.status, SolveStatus::FixedPoint);
        assert_eq!(res.iterations, 1);
        assert_eq!(res.candidate, Some(RealPoint::Real(0.3)));
    }

    #[test]
    fn discontinuous_halving_has_no_certificate() {
        let line = max_partial(-1.0, 1.0);
        let res = find_fixed_point(
            &maps::halve_zero_to_minus_one(),
            RealPoint::Real(1.0),
            &line,
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(res.status, SolveStatus::NoCertificate);
        assert!(res.check("non_expansive").unwrap().passed);
        assert!(res.check("nonexpansive_conclusion").unwrap().passed);
        assert!(
            !res.check("weak_orbital_continuity_evidence")
                .unwrap()
                .passed
        );
        assert_eq!(res.points["f(a)"], "-1");
    }

    #[test]
    fn non_cauchy_orbit() {
        let res = find_fixed_point(
            &maps::affine(-1.0, 1.0),
            RealPoint::Real(0.0),
            &abs_metric(),
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(res.status, SolveStatus::NoCertificate);
        assert!(!res.check("cauchy_orbit").unwrap().passed);
        assert_eq!(res.iterations, 100);
    }

    #[test]
    fn supplied_contraction_constants() {
        let line = max_partial(0.0, 1.0);
        let opts = SolveOptions {
            c: Some(0.5),
            r: Some(0.0),
            ..SolveOptions::default()
        };
        let res = find_fixed_point(&maps::linear(0.5), RealPoint::Real(1.0), &line, &opts).unwrap();
        assert!(res.check("orbital_contraction").unwrap().passed);
        assert_eq!(res.status, SolveStatus::FixedPoint);
        let opts = SolveOptions {
            c: Some(0.25),
            ..SolveOptions::default()
        };
        let res = find_fixed_point(&maps::linear(0.5), RealPoint::Real(1.0), &line, &opts).unwrap();
        assert_eq!(res.status, SolveStatus::NoCertificate);
        assert!(res.reason.unwrap().starts_with("orbital_contraction"));
    }

    #[test]
    fn common_fixed_points() {
        let line = max_partial(0.0, 1.0);
        let res = find_common_fixed_point(
            &maps::linear(0.5),
            &maps::linear(1.0 / 3.0),
            RealPoint::Real(1.0),
            RealPoint::Real(1.0),
            &line,
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(res.status, SolveStatus::CommonFixedPoint, "{res:?}");
        assert!(x(&res.candidate).abs() <= 1e-9);

        let res = find_common_fixed_point(
            &maps::identity(),
            &maps::identity(),
            RealPoint::Real(0.4),
            RealPoint::Real(0.4),
            &line,
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(res.status, SolveStatus::CommonFixedPoint);
        assert_eq!(res.candidate, Some(RealPoint::Real(0.4)));

        let unit = abs_metric().with_bounds(0.0, 1.0).unwrap();
        let res = find_common_fixed_point(
            &maps::linear(0.5),
            &maps::affine(0.5, 0.5),
            RealPoint::Real(0.0),
            RealPoint::Real(0.0),
            &unit,
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(res.status, SolveStatus::NoCertificate);
        assert!(!res.check("cauchy_pair").unwrap().passed);
    }

    #[test]
    fn coincidence() {
        let dom = abs_metric().with_bounds(0.0, 1.0).unwrap();
        let cod = abs_metric();
        let third = maps::affine(1.0 / 3.0, 1.0 / 3.0);
        let res = find_coincidence_point(
            &maps::identity(),
            &third,
            &third,
            &dom,
            &cod,
            RealPoint::Real(0.0),
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(res.status, SolveStatus::CoincidencePoint, "{res:?}");
        assert!((x(&res.candidate) - 0.5).abs() <= 1e-9);
        assert!((res.parameters["c"].value - 1.0 / 3.0).abs() <= 1e-6);
        assert!((res.parameters["A"].value - 1.0).abs() <= 1e-6);
        assert!(res
            .assumed
            .iter()
            .any(|a| a.starts_with("sequential continuity")));

        let stall = find_coincidence_point(
            &maps::identity(),
            &third,
            &maps::identity(),
            &dom,
            &cod,
            RealPoint::Real(0.0),
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(stall.status, SolveStatus::NoCertificate);
        let check = stall.check("mutual_contraction").unwrap();
        assert!(!check.passed);
        assert!(check.detail.as_ref().unwrap().contains("i = 1"));

        let same = find_coincidence_point(
            &third,
            &third,
            &maps::identity(),
            &dom,
            &cod,
            RealPoint::Real(0.2),
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(same.status, SolveStatus::CoincidencePoint, "{same:?}");
        assert_eq!(same.candidate, Some(RealPoint::Real(0.2)));
    }

    #[test]
    fn map_failures_surface() {
        let line = max_partial(0.0, 1.0);
        let err = find_fixed_point(
            &maps::linear(3.0),
            RealPoint::Real(0.5),
            &line,
            &SolveOptions::default(),
        );
        assert!(matches!(err, Err(Error::MapFailed { index: 0, .. })));
    }
}
