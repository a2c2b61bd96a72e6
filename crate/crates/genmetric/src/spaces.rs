//! Catalog of concrete example spaces.
//!
//! Every catalog space is available as a finite table via [`build_space`].
//! The real-line families are also available as closed-form evaluators
//! ([`RealSpace`]) for sequences and solvers that leave any finite sample.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequences::DistanceEvaluator;
use crate::space::{Base, FiniteSpace, MetricKind};

/// Label of the extra point of the augmented real line.
pub const SENTINEL: &str = "@a";

/// Grid used to decide point identity and to snap limit candidates.
pub const POINT_TOLERANCE: f64 = 1e-9;

/// Decimal label of a real sample point. Negative zero prints as `0`.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

/// A point of the real line, possibly extended by the sentinel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RealPoint {
    Real(f64),
    Sentinel,
}

impl RealPoint {
    pub fn as_real(&self) -> Option<f64> {
        match self {
            RealPoint::Real(x) => Some(*x),
            RealPoint::Sentinel => None,
        }
    }
}

impl fmt::Display for RealPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealPoint::Real(x) => f.write_str(&format_real(*x)),
            RealPoint::Sentinel => f.write_str(SENTINEL),
        }
    }
}

impl FromStr for RealPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == SENTINEL {
            return Ok(RealPoint::Sentinel);
        }
        match s.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(RealPoint::Real(x)),
            _ => Err(Error::InvalidParameter(format!(
                "`{s}` is not a real point"
            ))),
        }
    }
}

/// Closed-form families over (subsets of) the real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RealFamily {
    /// `|x - y|`.
    AbsMetric,
    /// `max{x, y}`; at higher arity the pairwise values are summed.
    MaxPartial,
    /// `max{x_1, ..., x_n}`.
    MaxPartialN,
    /// `p(a,a) = 0`, `p(a,x) = |x|`, `p(x,y) = |x - y| - 1` on the reals plus
    /// a sentinel `a`.
    AugmentedRealLine,
    /// `s(x,x) = x`, `s(x,y) = x + y` for `x != y`, on the positive reals.
    PositiveRealStrong,
}

impl RealFamily {
    pub fn base(self) -> Base {
        match self {
            RealFamily::AbsMetric => Base::Metric,
            RealFamily::MaxPartial | RealFamily::MaxPartialN | RealFamily::AugmentedRealLine => {
                Base::Partial
            }
            RealFamily::PositiveRealStrong => Base::StrongPartial,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RealFamily::AbsMetric => "abs_metric",
            RealFamily::MaxPartial => "max_partial",
            RealFamily::MaxPartialN => "max_partial_n",
            RealFamily::AugmentedRealLine => "augmented_real_line",
            RealFamily::PositiveRealStrong => "positive_real_strong",
        }
    }

    pub fn parse(s: &str) -> Option<RealFamily> {
        [
            RealFamily::AbsMetric,
            RealFamily::MaxPartial,
            RealFamily::MaxPartialN,
            RealFamily::AugmentedRealLine,
            RealFamily::PositiveRealStrong,
        ]
        .into_iter()
        .find(|f| f.name() == s)
    }

    fn pair(self, a: RealPoint, b: RealPoint) -> f64 {
        use RealPoint::{Real, Sentinel};
        match (self, a, b) {
            (RealFamily::AbsMetric, Real(x), Real(y)) => (x - y).abs(),
            (RealFamily::MaxPartial | RealFamily::MaxPartialN, Real(x), Real(y)) => x.max(y),
            (RealFamily::AugmentedRealLine, Sentinel, Sentinel) => 0.0,
            (RealFamily::AugmentedRealLine, Sentinel, Real(x))
            | (RealFamily::AugmentedRealLine, Real(x), Sentinel) => x.abs(),
            (RealFamily::AugmentedRealLine, Real(x), Real(y)) => (x - y).abs() - 1.0,
            (RealFamily::PositiveRealStrong, Real(x), Real(y)) => {
                if x == y {
                    x
                } else {
                    x + y
                }
            }
            _ => f64::NAN,
        }
    }
}

/// A closed-form real family at a given arity, optionally restricted to an
/// interval.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSpace {
    family: RealFamily,
    kind: MetricKind,
    bounds: Option<(f64, f64)>,
}

impl RealSpace {
    pub fn new(family: RealFamily, arity: usize) -> Result<Self> {
        let kind = MetricKind::of(family.base(), arity)?;
        Ok(RealSpace {
            family,
            kind,
            bounds: None,
        })
    }

    /// Restricts the real points of the carrier to `[lo, hi]`.
    pub fn with_bounds(mut self, lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) {
            return Err(Error::InvalidParameter(format!(
                "empty interval [{lo}, {hi}]"
            )));
        }
        self.bounds = Some((lo, hi));
        Ok(self)
    }

    pub fn family(&self) -> RealFamily {
        self.family
    }

    /// The finite restriction to the given points, in the given order.
    pub fn restrict(&self, points: &[RealPoint]) -> Result<FiniteSpace> {
        if let Some(p) = points.iter().find(|p| !self.contains(p)) {
            return Err(Error::InvalidParameter(format!(
                "{p} is not a point of {}",
                self.family.name()
            )));
        }
        let labels = points.iter().map(|p| p.to_string()).collect();
        let mut buf = Vec::with_capacity(self.kind.arity());
        FiniteSpace::from_fn(labels, self.kind, |t| {
            buf.clear();
            buf.extend(t.iter().map(|&i| points[i]));
            self.eval(&buf)
        })
    }

    /// The restriction to `count` equally spaced points of `[lo, hi]`, with
    /// the sentinel first for the augmented real line.
    pub fn sample(&self, lo: f64, hi: f64, count: usize) -> Result<FiniteSpace> {
        let mut points = Vec::with_capacity(count + 1);
        if self.family == RealFamily::AugmentedRealLine {
            points.push(RealPoint::Sentinel);
        }
        points.extend(grid(lo, hi, count)?.into_iter().map(RealPoint::Real));
        self.restrict(&points)
    }
}

impl DistanceEvaluator for RealSpace {
    type Point = RealPoint;

    fn kind(&self) -> MetricKind {
        self.kind
    }

    fn eval(&self, points: &[RealPoint]) -> f64 {
        if points.len() != self.kind.arity() || !points.iter().all(|p| self.contains(p)) {
            return f64::NAN;
        }
        if self.family == RealFamily::MaxPartialN {
            return points
                .iter()
                .map(|p| p.as_real().unwrap_or(f64::NAN))
                .fold(f64::NEG_INFINITY, f64::max);
        }
        let mut sum = 0.0;
        for j in 1..points.len() {
            for i in 0..j {
                sum += self.family.pair(points[i], points[j]);
            }
        }
        sum
    }

    fn label(&self, p: &RealPoint) -> String {
        p.to_string()
    }

    fn same_point(&self, a: &RealPoint, b: &RealPoint) -> bool {
        match (a, b) {
            (RealPoint::Sentinel, RealPoint::Sentinel) => true,
            (RealPoint::Real(x), RealPoint::Real(y)) => (x - y).abs() <= POINT_TOLERANCE,
            _ => false,
        }
    }

    fn contains(&self, p: &RealPoint) -> bool {
        match p {
            RealPoint::Sentinel => self.family == RealFamily::AugmentedRealLine,
            RealPoint::Real(x) => {
                x.is_finite()
                    && (self.family != RealFamily::PositiveRealStrong || *x > 0.0)
                    && self.bounds.is_none_or(|(lo, hi)| lo <= *x && *x <= hi)
            }
        }
    }

    fn snap(&self, p: &RealPoint) -> RealPoint {
        match p {
            RealPoint::Real(x) => {
                let s = (x * 1e9).round() / 1e9;
                let s = if s == 0.0 { 0.0 } else { s };
                RealPoint::Real(s)
            }
            RealPoint::Sentinel => RealPoint::Sentinel,
        }
    }
}

fn grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "sample interval needs lo < hi, got [{lo}, {hi}]"
        )));
    }
    if count < 2 {
        return Err(Error::InvalidParameter(format!(
            "sample count must be at least 2, got {count}"
        )));
    }
    let step = (hi - lo) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect())
}

/// Equally spaced sample of one of the real-line families, at arity 2.
pub fn sample_real_space(
    family: RealFamily,
    lo: f64,
    hi: f64,
    count: usize,
) -> Result<FiniteSpace> {
    RealSpace::new(family, 2)?.sample(lo, hi, count)
}

/// Names of the catalog spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CatalogName {
    AbsMetric,
    AugmentedRealLine,
    BasicPartial,
    DiscretePm11,
    FiveMetricNegative,
    MaxPartial,
    MaxPartialN,
    PositiveRealStrong,
    UnitN,
}

impl CatalogName {
    /// All names, sorted alphabetically.
    pub const ALL: [CatalogName; 9] = [
        CatalogName::AbsMetric,
        CatalogName::AugmentedRealLine,
        CatalogName::BasicPartial,
        CatalogName::DiscretePm11,
        CatalogName::FiveMetricNegative,
        CatalogName::MaxPartial,
        CatalogName::MaxPartialN,
        CatalogName::PositiveRealStrong,
        CatalogName::UnitN,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CatalogName::AbsMetric => "abs_metric",
            CatalogName::AugmentedRealLine => "augmented_real_line",
            CatalogName::BasicPartial => "basic_partial",
            CatalogName::DiscretePm11 => "discrete_pm11",
            CatalogName::FiveMetricNegative => "five_metric_negative",
            CatalogName::MaxPartial => "max_partial",
            CatalogName::MaxPartialN => "max_partial_n",
            CatalogName::PositiveRealStrong => "positive_real_strong",
            CatalogName::UnitN => "unit_n",
        }
    }

    pub fn parse(s: &str) -> Option<CatalogName> {
        CatalogName::ALL.into_iter().find(|c| c.as_str() == s)
    }

    /// Description of the parameter list.
    pub fn params(self) -> &'static str {
        match self {
            CatalogName::AbsMetric | CatalogName::AugmentedRealLine | CatalogName::MaxPartial => {
                "points..."
            }
            CatalogName::PositiveRealStrong => "points... (all > 0)",
            CatalogName::BasicPartial | CatalogName::FiveMetricNegative => "",
            CatalogName::DiscretePm11 | CatalogName::UnitN => "n m",
            CatalogName::MaxPartialN => "n points...",
        }
    }

    /// Kind of the built space; `n` stands for the arity parameter.
    pub fn kind_name(self) -> &'static str {
        match self {
            CatalogName::AbsMetric => "Metric",
            CatalogName::AugmentedRealLine
            | CatalogName::BasicPartial
            | CatalogName::MaxPartial => "PartialMetric",
            CatalogName::PositiveRealStrong => "StrongPartialMetric",
            CatalogName::FiveMetricNegative => "NMetric",
            CatalogName::UnitN => "NMetric",
            CatalogName::DiscretePm11 | CatalogName::MaxPartialN => "PartialNMetric",
        }
    }
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A catalog name with its numeric parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogSpec {
    pub name: CatalogName,
    pub params: Vec<f64>,
}

impl CatalogSpec {
    pub fn new(name: CatalogName, params: Vec<f64>) -> Self {
        CatalogSpec { name, params }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub params: &'static str,
    pub kind: &'static str,
}

/// Sorted listing of the catalog.
pub fn catalog_entries() -> Vec<CatalogEntry> {
    CatalogName::ALL
        .into_iter()
        .map(|c| CatalogEntry {
            name: c.as_str(),
            params: c.params(),
            kind: c.kind_name(),
        })
        .collect()
}

fn whole(x: f64, what: &str, min: usize) -> Result<usize> {
    if x.fract() != 0.0 || x < min as f64 || x > 1e6 {
        return Err(Error::InvalidParameter(format!(
            "{what} must be an integer of at least {min}, got {x}"
        )));
    }
    Ok(x as usize)
}

fn points(params: &[f64]) -> Result<Vec<RealPoint>> {
    if params.is_empty() {
        return Err(Error::InvalidParameter("sample point list is empty".into()));
    }
    if let Some(x) = params.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "sample point {x} is not finite"
        )));
    }
    Ok(params.iter().map(|&x| RealPoint::Real(x)).collect())
}

fn no_params(spec: &CatalogSpec) -> Result<()> {
    if spec.params.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{} takes no parameters",
            spec.name
        )))
    }
}

fn arity_and_count(spec: &CatalogSpec) -> Result<(usize, usize)> {
    match spec.params.as_slice() {
        [n, m] => Ok((whole(*n, "arity", 2)?, whole(*m, "element count", 1)?)),
        _ => Err(Error::InvalidParameter(format!(
            "{} takes parameters `n m`",
            spec.name
        ))),
    }
}

fn numbered(m: usize) -> Vec<String> {
    (1..=m).map(|i| i.to_string()).collect()
}

/// Materializes a catalog space.
///
/// ```
/// use genmetric::spaces::{build_space, CatalogName, CatalogSpec};
///
/// let s = build_space(&CatalogSpec::new(CatalogName::AugmentedRealLine, vec![0.0])).unwrap();
/// assert_eq!(s.elements(), ["@a", "0"]);
/// assert_eq!(s.value_of(&["0", "0"]).unwrap(), -1.0);
/// ```
pub fn build_space(spec: &CatalogSpec) -> Result<FiniteSpace> {
    match spec.name {
        CatalogName::BasicPartial => {
            no_params(spec)?;
            let kind = MetricKind::of(Base::Partial, 2)?;
            FiniteSpace::from_fn(vec!["x".into(), "y".into()], kind, |t| match (t[0], t[1]) {
                (0, 0) => 0.0,
                _ => 1.0,
            })
        }
        CatalogName::FiveMetricNegative => {
            no_params(spec)?;
            let kind = MetricKind::of(Base::Metric, 5)?;
            // indexed by how many entries are b
            const TABLE: [f64; 6] = [0.0, 3.0, -1.0, 2.0, 4.0, 0.0];
            FiniteSpace::from_fn(vec!["a".into(), "b".into()], kind, |t| {
                TABLE[t.iter().filter(|&&i| i == 1).count()]
            })
        }
        CatalogName::UnitN => {
            let (n, m) = arity_and_count(spec)?;
            let kind = MetricKind::of(Base::Metric, n)?;
            FiniteSpace::from_fn(numbered(m), kind, |t| {
                if t.iter().all(|&i| i == t[0]) {
                    0.0
                } else {
                    1.0
                }
            })
        }
        CatalogName::DiscretePm11 => {
            let (n, m) = arity_and_count(spec)?;
            let kind = MetricKind::of(Base::Partial, n)?;
            FiniteSpace::from_fn(numbered(m), kind, |t| {
                if t.iter().all(|&i| i == t[0]) {
                    -1.0
                } else {
                    1.0
                }
            })
        }
        CatalogName::AbsMetric => {
            RealSpace::new(RealFamily::AbsMetric, 2)?.restrict(&points(&spec.params)?)
        }
        CatalogName::MaxPartial => {
            RealSpace::new(RealFamily::MaxPartial, 2)?.restrict(&points(&spec.params)?)
        }
        CatalogName::PositiveRealStrong => {
            if let Some(x) = spec.params.iter().find(|&&x| !(x > 0.0)) {
                return Err(Error::InvalidParameter(format!(
                    "positive_real_strong needs positive points, got {x}"
                )));
            }
            RealSpace::new(RealFamily::PositiveRealStrong, 2)?.restrict(&points(&spec.params)?)
        }
        CatalogName::AugmentedRealLine => {
            let mut pts = vec![RealPoint::Sentinel];
            pts.extend(points(&spec.params)?);
            RealSpace::new(RealFamily::AugmentedRealLine, 2)?.restrict(&pts)
        }
        CatalogName::MaxPartialN => {
            let (n, rest) = spec.params.split_first().ok_or_else(|| {
                Error::InvalidParameter("max_partial_n takes parameters `n points...`".into())
            })?;
            let n = whole(*n, "arity", 2)?;
            RealSpace::new(RealFamily::MaxPartialN, n)?.restrict(&points(rest)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{check_axioms, Family, Tolerance};

    #[test]
    fn max_partial_values() {
        let s = build_space(&CatalogSpec::new(
            CatalogName::MaxPartial,
            vec![1.0, 2.0, 3.0],
        ))
        .unwrap();
        assert_eq!(s.value_of(&["1", "2"]).unwrap(), 2.0);
        assert_eq!(s.value_of(&["2", "2"]).unwrap(), 2.0);
        assert_eq!(s.value_of(&["1", "3"]).unwrap(), 3.0);
        assert!(check_axioms(&s, Tolerance::default()).overall);
    }

    #[test]
    fn five_metric_table() {
        let s = build_space(&CatalogSpec::new(CatalogName::FiveMetricNegative, vec![])).unwrap();
        let v = |t: &str| {
            let labels: Vec<String> = t.chars().map(|c| c.to_string()).collect();
            s.value_of(&labels).unwrap()
        };
        assert_eq!(v("aaaab"), 3.0);
        assert_eq!(v("abbbb"), 4.0);
        assert_eq!(v("aaabb"), -1.0);
        assert_eq!(v("aabbb"), 2.0);
        assert_eq!(v("aaaaa"), 0.0);
        assert_eq!(v("bbbbb"), 0.0);
        assert_eq!(v("babaa"), -1.0);
    }

    #[test]
    fn augmented_line_single_point() {
        let s = build_space(&CatalogSpec::new(CatalogName::AugmentedRealLine, vec![0.0])).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.value_of(&["@a", "@a"]).unwrap(), 0.0);
        assert_eq!(s.value_of(&["@a", "0"]).unwrap(), 0.0);
        assert_eq!(s.value_of(&["0", "0"]).unwrap(), -1.0);
    }

    #[test]
    fn sampling() {
        let s = sample_real_space(RealFamily::MaxPartial, 0.0, 1.0, 3).unwrap();
        assert_eq!(s.elements(), ["0", "0.5", "1"]);
        let s = sample_real_space(RealFamily::PositiveRealStrong, 1.0, 2.0, 2).unwrap();
        assert_eq!(s.value_of(&["1", "1"]).unwrap(), 1.0);
        assert_eq!(s.value_of(&["1", "2"]).unwrap(), 3.0);
        assert_eq!(s.value_of(&["2", "2"]).unwrap(), 2.0);
        let s = sample_real_space(RealFamily::AugmentedRealLine, -1.0, 1.0, 3).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.label(0), SENTINEL);
        assert!(sample_real_space(RealFamily::PositiveRealStrong, 0.0, 1.0, 3).is_err());
        assert!(sample_real_space(RealFamily::MaxPartial, 1.0, 1.0, 3).is_err());
        assert!(sample_real_space(RealFamily::MaxPartial, 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn parameter_validation() {
        let bad = |name, params: Vec<f64>| build_space(&CatalogSpec::new(name, params)).is_err();
        assert!(bad(CatalogName::PositiveRealStrong, vec![1.0, 0.0]));
        assert!(bad(CatalogName::MaxPartial, vec![]));
        assert!(bad(CatalogName::MaxPartial, vec![1.0, 1.0]));
        assert!(bad(CatalogName::UnitN, vec![1.0, 3.0]));
        assert!(bad(CatalogName::UnitN, vec![2.5, 3.0]));
        assert!(bad(CatalogName::BasicPartial, vec![1.0]));
    }

    #[test]
    fn arity_two_families_are_pairwise() {
        let s = build_space(&CatalogSpec::new(CatalogName::DiscretePm11, vec![2.0, 3.0])).unwrap();
        assert_eq!(s.kind().family(), Family::PartialMetric);
        let s = build_space(&CatalogSpec::new(CatalogName::UnitN, vec![3.0, 3.0])).unwrap();
        assert_eq!(s.kind().family(), Family::NMetric);
    }

    #[test]
    fn real_point_labels_round_trip() {
        for p in [
            RealPoint::Real(0.5),
            RealPoint::Real(-3.0),
            RealPoint::Sentinel,
        ] {
            assert_eq!(p.to_string().parse::<RealPoint>().unwrap(), p);
        }
        assert_eq!(RealPoint::Real(-0.0).to_string(), "0");
        assert!("abc".parse::<RealPoint>().is_err());
    }

    #[test]
    fn snapping_rounds_to_the_identity_grid() {
        let line = RealSpace::new(RealFamily::MaxPartial, 2).unwrap();
        assert_eq!(
            line.snap(&RealPoint::Real(2f64.powi(-40))),
            RealPoint::Real(0.0)
        );
        let RealPoint::Real(x) = line.snap(&RealPoint::Real(0.5 - 1e-12)) else {
            unreachable!()
        };
        assert!((x - 0.5).abs() < 1e-15);
    }

    #[test]
    fn evaluator_rejects_foreign_points() {
        let line = RealSpace::new(RealFamily::MaxPartial, 2).unwrap();
        assert!(line
            .eval(&[RealPoint::Sentinel, RealPoint::Real(1.0)])
            .is_nan());
        let pos = RealSpace::new(RealFamily::PositiveRealStrong, 2).unwrap();
        assert!(!pos.contains(&RealPoint::Real(0.0)));
        let bounded = line.with_bounds(0.0, 1.0).unwrap();
        assert!(!bounded.contains(&RealPoint::Real(1.5)));
    }
}
