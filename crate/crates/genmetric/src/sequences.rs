//! Finite-prefix verdicts for Cauchy sequences, limits, special limits and
//! Cauchy pairs.
//!
//! A prefix can only give numerical evidence: every verdict means "within the
//! tolerance over the tail window", never a proof about the whole sequence.
//! The window is the last `window` terms of the prefix; by default the last
//! third, at least five terms.

use std::fmt::Debug;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{FiniteSpace, MetricKind, Tolerance};

/// A symmetric arity-`n` function on points of some universe.
///
/// Finite spaces implement it with element indices as points; the
/// closed-form real spaces in [`crate::spaces`] implement it over the reals.
pub trait DistanceEvaluator {
    type Point: Clone + Debug;

    fn kind(&self) -> MetricKind;

    /// Value of a tuple of exactly `arity` points.
    fn eval(&self, points: &[Self::Point]) -> f64;

    fn label(&self, p: &Self::Point) -> String;

    /// Point identity used when a solver asserts `f(a) = a`.
    fn same_point(&self, a: &Self::Point, b: &Self::Point) -> bool;

    /// Whether `p` belongs to the carrier.
    fn contains(&self, _p: &Self::Point) -> bool {
        true
    }

    /// A nearby representative for a limit candidate. Numeric carriers round
    /// to the point-identity grid; discrete carriers return the point.
    fn snap(&self, p: &Self::Point) -> Self::Point {
        p.clone()
    }

    fn arity(&self) -> usize {
        self.kind().arity()
    }

    /// `P(<x>^{n-1}, y)`.
    fn centered(&self, x: &Self::Point, y: &Self::Point) -> f64 {
        let n = self.arity();
        let mut t = vec![x.clone(); n];
        t[n - 1] = y.clone();
        self.eval(&t)
    }

    /// `P(<x>^n)`.
    fn self_value(&self, x: &Self::Point) -> f64 {
        self.eval(&vec![x.clone(); self.arity()])
    }
}

impl DistanceEvaluator for FiniteSpace {
    type Point = usize;

    fn kind(&self) -> MetricKind {
        FiniteSpace::kind(self)
    }

    fn eval(&self, points: &[usize]) -> f64 {
        self.value(points)
    }

    fn label(&self, p: &usize) -> String {
        FiniteSpace::label(self, *p).to_string()
    }

    fn same_point(&self, a: &usize, b: &usize) -> bool {
        a == b
    }

    fn contains(&self, p: &usize) -> bool {
        *p < self.len()
    }

    fn centered(&self, x: &usize, y: &usize) -> f64 {
        FiniteSpace::centered(self, *x, *y)
    }

    fn self_value(&self, x: &usize) -> f64 {
        FiniteSpace::self_value(self, *x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyVerdict {
    pub is_cauchy: bool,
    /// Median of the tail samples.
    pub central_distance: f64,
    /// Largest distance of a tail sample from the central distance.
    pub max_tail_deviation: f64,
    pub window: usize,
    pub samples: usize,
}

/// Which of the two equivalent sample families a Cauchy verdict uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `P(<x_i>^{n-1}, x_j)` for `i >= j`.
    Forward,
    /// `P(<x_j>^{n-1}, x_i)` for `i >= j`.
    Mirrored,
}

/// The default tail length: a third of the prefix, at least five terms.
pub fn default_window(len: usize) -> usize {
    len.div_ceil(3).max(5)
}

fn resolve_window(len: usize, window: Option<usize>) -> Result<usize> {
    let w = match window {
        Some(w) => w,
        None => default_window(len).min(len),
    };
    if w < 2 || w > len {
        return Err(Error::Window { window: w, len });
    }
    Ok(w)
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(|a, b| a.total_cmp(b));
    let k = samples.len();
    if k % 2 == 1 {
        samples[k / 2]
    } else {
        0.5 * (samples[k / 2 - 1] + samples[k / 2])
    }
}

fn verdict(mut samples: Vec<f64>, tol: Tolerance, window: usize) -> CauchyVerdict {
    let count = samples.len();
    let r = median(&mut samples);
    let dev = samples
        .iter()
        .map(|v| (v - r).abs())
        .fold(0.0_f64, |acc, d| {
            if d.is_nan() {
                f64::INFINITY
            } else {
                acc.max(d)
            }
        });
    CauchyVerdict {
        is_cauchy: dev <= tol.abs(),
        central_distance: r,
        max_tail_deviation: dev,
        window,
        samples: count,
    }
}

/// Classifies a prefix using `P(<x_i>^{n-1}, x_j)` for `i >= j` in the tail.
///
/// ```
/// use genmetric::sequences::classify_cauchy;
/// use genmetric::space::Tolerance;
/// use genmetric::spaces::{RealFamily, RealPoint, RealSpace};
///
/// let line = RealSpace::new(RealFamily::AugmentedRealLine, 2).unwrap();
/// let prefix: Vec<RealPoint> = (1..=30).map(|i| RealPoint::Real(0.5f64.powi(i))).collect();
/// let v = classify_cauchy(&line, &prefix, Tolerance::new(1e-6).unwrap(), Some(10)).unwrap();
/// assert!(v.is_cauchy);
/// assert!((v.central_distance + 1.0).abs() <= 1e-6);
/// ```
pub fn classify_cauchy<E: DistanceEvaluator>(
    eval: &E,
    prefix: &[E::Point],
    tol: Tolerance,
    window: Option<usize>,
) -> Result<CauchyVerdict> {
    classify_cauchy_oriented(eval, prefix, tol, window, Orientation::Forward)
}

pub fn classify_cauchy_oriented<E: DistanceEvaluator>(
    eval: &E,
    prefix: &[E::Point],
    tol: Tolerance,
    window: Option<usize>,
    orientation: Orientation,
) -> Result<CauchyVerdict> {
    let w = resolve_window(prefix.len(), window)?;
    let tail = &prefix[prefix.len() - w..];
    let mut samples = Vec::with_capacity(w * (w + 1) / 2);
    for i in 0..w {
        for j in 0..=i {
            samples.push(match orientation {
                Orientation::Forward => eval.centered(&tail[i], &tail[j]),
                Orientation::Mirrored => eval.centered(&tail[j], &tail[i]),
            });
        }
    }
    Ok(verdict(samples, tol, w))
}

/// Largest `P(<a>^{n-1}, x_i) - P(<a>^n)` over the tail.
pub fn limit_gap<E: DistanceEvaluator>(
    eval: &E,
    prefix: &[E::Point],
    candidate: &E::Point,
    window: Option<usize>,
) -> Result<f64> {
    let w = resolve_window(prefix.len(), window)?;
    let base = eval.self_value(candidate);
    Ok(prefix[prefix.len() - w..]
        .iter()
        .map(|x| eval.centered(candidate, x) - base)
        .fold(f64::NEG_INFINITY, |acc, g| {
            if g.is_nan() {
                f64::INFINITY
            } else {
                acc.max(g)
            }
        }))
}

/// Whether `candidate` is a limit of the prefix: the gap
/// `P(<a>^{n-1}, x_i) - P(<a>^n)` stays within `tol` over the tail.
pub fn check_limit<E: DistanceEvaluator>(
    eval: &E,
    prefix: &[E::Point],
    candidate: &E::Point,
    tol: Tolerance,
    window: Option<usize>,
) -> Result<bool> {
    Ok(limit_gap(eval, prefix, candidate, window)? <= tol.abs())
}

/// Whether `candidate` is a limit whose self-value matches the central
/// distance. Fails with [`Error::NotCauchy`] when the prefix is not Cauchy.
pub fn check_special_limit<E: DistanceEvaluator>(
    eval: &E,
    prefix: &[E::Point],
    candidate: &E::Point,
    tol: Tolerance,
    window: Option<usize>,
) -> Result<bool> {
    let v = classify_cauchy(eval, prefix, tol, window)?;
    if !v.is_cauchy {
        return Err(Error::NotCauchy);
    }
    Ok(check_limit(eval, prefix, candidate, tol, window)?
        && (v.central_distance - eval.self_value(candidate)).abs() <= tol.abs())
}

/// Classifies two prefixes as a Cauchy pair.
///
/// The shared central distance is the median of `P(<x_i>^{n-1}, y_j)` over
/// all tail indices `i, j`. The pair passes when every
/// cross sample is within `tol` of it and, at each tail index `i`,
/// `min{P(<x_i>^n), P(<y_i>^n)}` lies above `r - tol` and below every cross
/// sample `P(<x_i>^{n-1}, y_j)` up to `tol`.
pub fn check_cauchy_pair<E: DistanceEvaluator>(
    eval: &E,
    prefix_x: &[E::Point],
    prefix_y: &[E::Point],
    tol: Tolerance,
    window: Option<usize>,
) -> Result<CauchyVerdict> {
    if prefix_x.len() != prefix_y.len() {
        return Err(Error::LengthMismatch(prefix_x.len(), prefix_y.len()));
    }
    let len = prefix_x.len();
    let w = resolve_window(len, window)?;
    let xs = &prefix_x[len - w..];
    let ys = &prefix_y[len - w..];
    let mut cross = vec![0.0; w * w];
    for i in 0..w {
        for j in 0..w {
            cross[i * w + j] = eval.centered(&xs[i], &ys[j]);
        }
    }
    let mut v = verdict(cross.clone(), tol, w);
    let r = v.central_distance;
    let mut bounds_ok = true;
    for i in 0..w {
        let low = eval.self_value(&xs[i]).min(eval.self_value(&ys[i]));
        if !(low > r - tol.abs()) {
            bounds_ok = false;
            v.max_tail_deviation = v.max_tail_deviation.max(r - low);
        }
        for j in 0..w {
            if !tol.le(low, cross[i * w + j]) {
                bounds_ok = false;
                v.max_tail_deviation = v.max_tail_deviation.max(low - cross[i * w + j]);
            }
        }
    }
    v.is_cauchy = v.is_cauchy && bounds_ok;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Family;

    fn basic_partial() -> FiniteSpace {
        let kind = MetricKind::new(Family::PartialMetric, 2).unwrap();
        FiniteSpace::from_fn(vec!["x".into(), "y".into()], kind, |t| match (t[0], t[1]) {
            (0, 0) => 0.0,
            _ => 1.0,
        })
        .unwrap()
    }

    #[test]
    fn constant_prefix_is_cauchy_at_self_value() {
        let s = basic_partial();
        let prefix = vec![1usize; 8];
        let v = classify_cauchy(&s, &prefix, Tolerance::default(), None).unwrap();
        assert!(v.is_cauchy);
        assert_eq!(v.central_distance, 1.0);
        assert!(check_special_limit(&s, &prefix, &1, Tolerance::default(), None).unwrap());
    }

    #[test]
    fn alternating_prefix_is_not_cauchy() {
        let s = basic_partial();
        let prefix: Vec<usize> = (0..12).map(|i| i % 2).collect();
        let v = classify_cauchy(&s, &prefix, Tolerance::default(), None).unwrap();
        assert!(!v.is_cauchy);
        assert!(matches!(
            check_special_limit(&s, &prefix, &0, Tolerance::default(), None),
            Err(Error::NotCauchy)
        ));
    }

    #[test]
    fn window_rules() {
        assert_eq!(default_window(30), 10);
        assert_eq!(default_window(6), 5);
        let s = basic_partial();
        let prefix = vec![0usize; 3];
        assert!(classify_cauchy(&s, &prefix, Tolerance::default(), None).is_ok());
        assert!(matches!(
            classify_cauchy(&s, &prefix, Tolerance::default(), Some(4)),
            Err(Error::Window { .. })
        ));
        assert!(classify_cauchy(&s, &prefix, Tolerance::default(), Some(1)).is_err());
    }

    #[test]
    fn pair_requires_equal_lengths() {
        let s = basic_partial();
        assert!(matches!(
            check_cauchy_pair(&s, &[0, 0, 0], &[0, 0], Tolerance::default(), None),
            Err(Error::LengthMismatch(3, 2))
        ));
    }
}
