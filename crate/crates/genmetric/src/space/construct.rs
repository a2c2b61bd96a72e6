//! Constructions between kinds.

use super::{Base, FiniteSpace, MetricKind};
use crate::error::{Error, Result};

/// The metric induced by a partial (n-)metric:
/// `d(x,y) = P(<x>^{n-1},y) - P(<x>^n) + P(<y>^{n-1},x) - P(<y>^n)`.
///
/// For `n = 2` this is `2p(x,y) - p(x,x) - p(y,y)`. A metric input comes back
/// doubled since its self-values vanish.
pub fn induce_metric(space: &FiniteSpace) -> Result<FiniteSpace> {
    FiniteSpace::from_fn(space.elements().to_vec(), MetricKind::metric(), |t| {
        let (x, y) = (t[0], t[1]);
        space.centered(x, y) - space.self_value(x) + space.centered(y, x) - space.self_value(y)
    })
}

/// Lifts a pairwise space to arity `n` by summing the pairwise values over
/// all pairs drawn from the tuple, with multiplicity.
///
/// Metrics become n-Metrics, partial metrics partial n-Metrics and strong
/// partial metrics strong partial n-Metrics. `n = 2` returns the input.
pub fn lift_to_n(space: &FiniteSpace, n: usize) -> Result<FiniteSpace> {
    if !space.kind().family().is_pairwise() {
        return Err(Error::UnsupportedKind {
            op: "lift_to_n",
            kind: space.kind().to_string(),
        });
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "lift arity must be at least 2, got {n}"
        )));
    }
    if n == 2 {
        return Ok(space.clone());
    }
    let kind = MetricKind::of(space.kind().base(), n)?;
    FiniteSpace::from_fn(space.elements().to_vec(), kind, |t| {
        let mut sum = 0.0;
        for j in 1..t.len() {
            for i in 0..j {
                sum += space.value(&[t[i], t[j]]);
            }
        }
        sum
    })
}

/// Adds `r` to every entry of a metric or n-Metric, producing a strong
/// partial (n-)metric.
pub fn shift_by_constant(space: &FiniteSpace, r: f64) -> Result<FiniteSpace> {
    if space.kind().base() != Base::Metric {
        return Err(Error::UnsupportedKind {
            op: "shift_by_constant",
            kind: space.kind().to_string(),
        });
    }
    if !r.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "shift must be finite, got {r}"
        )));
    }
    let kind = space.kind().with_base(Base::StrongPartial);
    space.map_values(kind, |v| v + r)
}

/// Slack of the term replacement inequality
///
/// `P(x_1..x_n) <= P(y_1..y_t, x_{t+1}..x_n) + sum_{j<=t} [P(<y_j>^{n-1}, x_j) - P(<y_j>^n)]`
///
/// returned as right side minus left side. Self-terms are taken as zero for
/// metric kinds.
pub fn term_replacement_margin(
    space: &FiniteSpace,
    xs: &[usize],
    ys: &[usize],
    t: usize,
) -> Result<f64> {
    let n = space.arity();
    if xs.len() != n || ys.len() != n {
        return Err(Error::InvalidParameter(format!(
            "term replacement needs two {n}-tuples"
        )));
    }
    if t < 1 || t > n {
        return Err(Error::InvalidParameter(format!(
            "replacement count {t} is outside 1..={n}"
        )));
    }
    if let Some(&bad) = xs.iter().chain(ys).find(|&&i| i >= space.len()) {
        return Err(Error::InvalidParameter(format!(
            "element index {bad} out of range"
        )));
    }
    let with_self = space.kind().base() != Base::Metric;
    let lhs = space.value(xs);
    let mut mixed: Vec<usize> = ys[..t].to_vec();
    mixed.extend_from_slice(&xs[t..]);
    let mut rhs = space.value(&mixed);
    for j in 0..t {
        rhs += space.centered(ys[j], xs[j]);
        if with_self {
            rhs -= space.self_value(ys[j]);
        }
    }
    Ok(rhs - lhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{check_axioms, Family, Tolerance};

    fn reals(points: &[f64], kind: MetricKind, f: impl Fn(f64, f64) -> f64) -> FiniteSpace {
        let labels = points.iter().map(|p| p.to_string()).collect();
        FiniteSpace::from_fn(labels, kind, |t| f(points[t[0]], points[t[1]])).unwrap()
    }

    fn partial() -> MetricKind {
        MetricKind::new(Family::PartialMetric, 2).unwrap()
    }

    #[test]
    fn induced_metric_of_max_is_absolute_difference() {
        let s = reals(&[1.0, 2.0, 3.0], partial(), f64::max);
        let d = induce_metric(&s).unwrap();
        assert_eq!(d.kind(), MetricKind::metric());
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(d.value(&[x, y]), (x as f64 - y as f64).abs());
            }
        }
    }

    #[test]
    fn induced_metric_doubles_a_metric() {
        let s = reals(&[0.0, 1.5, 4.0], MetricKind::metric(), |a, b| (a - b).abs());
        let d = induce_metric(&s).unwrap();
        assert_eq!(d.value(&[0, 2]), 8.0);
    }

    #[test]
    fn basic_partial_induces_unit_distance() {
        let s = FiniteSpace::from_entries(
            vec!["x".into(), "y".into()],
            partial(),
            vec![
                (vec!["x".into(), "x".into()], 0.0),
                (vec!["x".into(), "y".into()], 1.0),
                (vec!["y".into(), "y".into()], 1.0),
            ],
        )
        .unwrap();
        assert_eq!(induce_metric(&s).unwrap().value(&[0, 1]), 1.0);
    }

    #[test]
    fn lift_sums_pairs() {
        let d = reals(&[0.0, 1.0, 2.0], MetricKind::metric(), |a, b| (a - b).abs());
        let m = lift_to_n(&d, 3).unwrap();
        assert_eq!(m.kind().family(), Family::NMetric);
        assert_eq!(m.value(&[0, 1, 2]), 4.0);
        assert_eq!(m.value(&[1, 1, 1]), 0.0);
        let p = reals(&[1.0, 2.0, 3.0], partial(), f64::max);
        let lifted = lift_to_n(&p, 3).unwrap();
        assert_eq!(lifted.value(&[0, 1, 2]), 8.0);
        assert_eq!(lift_to_n(&p, 2).unwrap(), p);
        assert!(lift_to_n(&p, 1).is_err());
        assert!(lift_to_n(&lifted, 4).is_err());
    }

    #[test]
    fn shift_makes_strong_partial() {
        let d = reals(&[0.0, 1.0], MetricKind::metric(), |a, b| (a - b).abs());
        let s = shift_by_constant(&d, -3.0).unwrap();
        assert_eq!(s.kind().family(), Family::StrongPartialMetric);
        assert_eq!(s.value(&[0, 0]), -3.0);
        assert_eq!(s.value(&[0, 1]), -2.0);
        assert!(check_axioms(&s, Tolerance::default()).overall);
        let p = reals(&[1.0, 2.0], partial(), f64::max);
        assert!(matches!(
            shift_by_constant(&p, 1.0),
            Err(Error::UnsupportedKind { .. })
        ));
    }

    #[test]
    fn replacement_of_identical_tuples_is_tight() {
        let p = reals(&[1.0, 2.0, 3.0], partial(), f64::max);
        let p3 = lift_to_n(&p, 3).unwrap();
        let xs = [0, 2, 1];
        assert_eq!(term_replacement_margin(&p3, &xs, &xs, 3).unwrap(), 0.0);
        assert!(term_replacement_margin(&p3, &xs, &xs, 0).is_err());
        assert!(term_replacement_margin(&p3, &xs, &xs, 4).is_err());
    }
}
