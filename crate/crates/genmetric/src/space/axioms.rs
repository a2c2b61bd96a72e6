//! Exhaustive axiom verification.

use std::fmt;

use serde::Serialize;

use super::{Base, FiniteSpace, MetricKind, MultisetIter, Tolerance};

/// A failing instance of an axiom.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    /// The tuple the axiom was evaluated on. For the triangle inequalities the
    /// last entry is the distinguished element that gets replaced.
    pub tuple: Vec<String>,
    /// The pivot element of a triangle inequality.
    pub pivot: Option<String>,
    /// Measured slack: right side minus left side for inequalities, the
    /// largest equality gap for separation.
    pub margin: f64,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.tuple.join(", "))?;
        if let Some(p) = &self.pivot {
            write!(f, " | {p}")?;
        }
        write!(f, ") margin {}", self.margin)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomEntry {
    pub axiom: String,
    pub holds: bool,
    /// Rows that follow from the other axioms of the kind rather than being
    /// part of its definition.
    pub derived: bool,
    pub instances: usize,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub kind: MetricKind,
    pub kind_name: String,
    pub tolerance: f64,
    pub entries: Vec<AxiomEntry>,
    pub overall: bool,
}

impl AxiomReport {
    pub fn entry(&self, axiom: &str) -> Option<&AxiomEntry> {
        self.entries.iter().find(|e| e.axiom == axiom)
    }

    pub fn failed(&self) -> impl Iterator<Item = &AxiomEntry> {
        self.entries.iter().filter(|e| !e.holds)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.overall {
            writeln!(f, "all axioms pass ({})", self.kind_name)?;
        } else {
            writeln!(f, "axiom check failed ({})", self.kind_name)?;
        }
        for e in &self.entries {
            let verdict = if e.holds { "pass" } else { "FAIL" };
            let derived = if e.derived { " (derived)" } else { "" };
            write!(
                f,
                "  {:<11} {verdict}  {} instances{derived}",
                e.axiom, e.instances
            )?;
            if let Some(w) = &e.witness {
                write!(f, "  witness {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

struct Ids {
    lbnd: &'static str,
    sep: &'static str,
    inq: &'static str,
}

fn ids(kind: MetricKind) -> Ids {
    let pairwise = kind.family().is_pairwise();
    match (kind.base(), pairwise) {
        (Base::Metric, true) => Ids {
            lbnd: "(m-lbnd)",
            sep: "(m-sep)",
            inq: "(m-inq)",
        },
        (Base::Partial, true) => Ids {
            lbnd: "(p-lbnd)",
            sep: "(p-sep)",
            inq: "(p-inq)",
        },
        (Base::StrongPartial, true) => Ids {
            lbnd: "(s-lbnd)",
            sep: "(s-sep)",
            inq: "(s-inq)",
        },
        (Base::Metric, false) => Ids {
            lbnd: "(n-lbnd)",
            sep: "(n-sep)",
            inq: "(n-inq)",
        },
        (Base::Partial, false) => Ids {
            lbnd: "(P_n-lbnd)",
            sep: "(P_n-sep)",
            inq: "(P_n-inq)",
        },
        (Base::StrongPartial, false) => Ids {
            lbnd: "(S_n-lbnd)",
            sep: "(S_n-sep)",
            inq: "(S_n-inq)",
        },
    }
}

/// Accumulates instances of one axiom, remembering the first failure.
struct Tally {
    axiom: &'static str,
    derived: bool,
    instances: usize,
    witness: Option<Witness>,
}

impl Tally {
    fn new(axiom: &'static str, derived: bool) -> Self {
        Tally {
            axiom,
            derived,
            instances: 0,
            witness: None,
        }
    }

    fn record<F: FnOnce() -> Witness>(&mut self, ok: bool, witness: F) {
        self.instances += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn finish(self) -> AxiomEntry {
        AxiomEntry {
            axiom: self.axiom.to_string(),
            holds: self.witness.is_none(),
            derived: self.derived,
            instances: self.instances,
            witness: self.witness,
        }
    }
}

/// Checks every axiom of the space's declared kind over all tuples.
///
/// Symmetry holds by construction and is not reported. Non-strict
/// inequalities pass when violated by at most `tol`; the strict lower bound
/// of the strong kinds needs a margin above `tol`. Separation is checked as
/// a biconditional. Each failing axiom carries the first failing instance in
/// lexicographic order.
pub fn check_axioms(space: &FiniteSpace, tol: Tolerance) -> AxiomReport {
    let kind = space.kind();
    let ids = ids(kind);
    let m = space.len();
    let n = kind.arity();
    let label = |i: usize| space.label(i).to_string();
    let centered_tuple = |x: usize, y: usize| {
        let mut t = vec![label(x); n - 1];
        t.push(label(y));
        t
    };

    let mut entries = Vec::with_capacity(4);
    match kind.base() {
        Base::Metric => {
            let mut lbnd = Tally::new(ids.lbnd, false);
            let mut sep = Tally::new(ids.sep, false);
            for x in 0..m {
                for y in 0..m {
                    let v = space.centered(x, y);
                    lbnd.record(tol.le(0.0, v), || Witness {
                        tuple: centered_tuple(x, y),
                        pivot: None,
                        margin: v,
                    });
                    if x == y {
                        sep.record(v.abs() <= tol.abs(), || Witness {
                            tuple: centered_tuple(x, y),
                            pivot: None,
                            margin: v.abs(),
                        });
                    } else {
                        sep.record(v.abs() > tol.abs(), || Witness {
                            tuple: centered_tuple(x, y),
                            pivot: None,
                            margin: v.abs(),
                        });
                    }
                }
            }
            entries.push(lbnd.finish());
            entries.push(sep.finish());
        }
        Base::Partial | Base::StrongPartial => {
            let strong = kind.base() == Base::StrongPartial;
            let mut lbnd = Tally::new(ids.lbnd, false);
            for x in 0..m {
                for y in 0..m {
                    if x == y {
                        continue;
                    }
                    let lhs = space.self_value(x);
                    let rhs = space.centered(x, y);
                    let ok = if strong {
                        tol.lt_strict(lhs, rhs)
                    } else {
                        tol.le(lhs, rhs)
                    };
                    lbnd.record(ok, || Witness {
                        tuple: centered_tuple(x, y),
                        pivot: None,
                        margin: rhs - lhs,
                    });
                }
            }
            let mut sep = Tally::new(ids.sep, strong);
            for x in 0..m {
                for y in (x + 1)..m {
                    let gx = (space.centered(x, y) - space.self_value(x)).abs();
                    let gy = (space.centered(y, x) - space.self_value(y)).abs();
                    let both_equal = gx <= tol.abs() && gy <= tol.abs();
                    sep.record(!both_equal, || Witness {
                        tuple: vec![label(x), label(y)],
                        pivot: None,
                        margin: gx.max(gy),
                    });
                }
            }
            entries.push(lbnd.finish());
            if strong {
                // separation is implied by the strict bound, so it is listed last
                entries.push(triangle(space, tol, ids.inq, true));
                entries.push(sep.finish());
            } else {
                entries.push(sep.finish());
                entries.push(triangle(space, tol, ids.inq, true));
            }
        }
    }
    if kind.base() == Base::Metric {
        entries.push(triangle(space, tol, ids.inq, false));
    }
    let overall = entries.iter().all(|e| e.holds);
    AxiomReport {
        kind: space.kind(),
        kind_name: space.kind().to_string(),
        tolerance: tol.abs(),
        entries,
        overall,
    }
}

/// `P(x_1..x_n) <= P(x_1..x_{n-1}, a) + P(<a>^{n-1}, x_n) [- P(<a>^n)]` for every
/// multiset `x_1..x_{n-1}`, every distinguished `x_n` and every pivot `a`.
fn triangle(space: &FiniteSpace, tol: Tolerance, id: &'static str, subtract: bool) -> AxiomEntry {
    let m = space.len();
    let n = space.arity();
    let mut tally = Tally::new(id, false);
    let mut buf = vec![0usize; n];
    for head in MultisetIter::new(m, n - 1) {
        buf[..n - 1].copy_from_slice(&head);
        for xn in 0..m {
            buf[n - 1] = xn;
            let lhs = space.value(&buf);
            for a in 0..m {
                buf[n - 1] = a;
                let via = space.value(&buf);
                buf[n - 1] = xn;
                let mut rhs = via + space.centered(a, xn);
                if subtract {
                    rhs -= space.self_value(a);
                }
                tally.record(tol.le(lhs, rhs), || Witness {
                    tuple: space.labels_of(&buf),
                    pivot: Some(space.label(a).to_string()),
                    margin: rhs - lhs,
                });
            }
        }
    }
    tally.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Family;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn single_point_spaces_pass_every_kind() {
        for family in Family::ALL {
            let arity = if family.is_pairwise() { 2 } else { 4 };
            let kind = MetricKind::new(family, arity).unwrap();
            let s = FiniteSpace::from_fn(labels(&["x"]), kind, |_| 0.0).unwrap();
            let r = check_axioms(&s, Tolerance::default());
            assert!(r.overall, "{family:?}: {r}");
        }
    }

    #[test]
    fn metric_with_zero_distance_fails_separation() {
        let s = FiniteSpace::from_fn(labels(&["x", "y"]), MetricKind::metric(), |_| 0.0).unwrap();
        let r = check_axioms(&s, Tolerance::default());
        assert!(!r.overall);
        let sep = r.entry("(m-sep)").unwrap();
        assert!(!sep.holds);
        assert_eq!(sep.witness.as_ref().unwrap().tuple, labels(&["x", "y"]));
        assert!(r.entry("(m-inq)").unwrap().holds);
    }

    #[test]
    fn strong_kind_reports_derived_separation_row() {
        let kind = MetricKind::new(Family::StrongPartialMetric, 2).unwrap();
        let s = FiniteSpace::from_fn(labels(&["x", "y"]), kind, |t| {
            if t[0] == t[1] {
                0.0
            } else {
                1.0
            }
        })
        .unwrap();
        let r = check_axioms(&s, Tolerance::default());
        let names: Vec<&str> = r.entries.iter().map(|e| e.axiom.as_str()).collect();
        assert_eq!(names, ["(s-lbnd)", "(s-inq)", "(s-sep)"]);
        assert!(r.entry("(s-sep)").unwrap().derived);
        assert!(r.overall);
    }

    #[test]
    fn strict_bound_needs_margin_above_tolerance() {
        let kind = MetricKind::new(Family::StrongPartialMetric, 2).unwrap();
        let s = FiniteSpace::from_fn(labels(&["x", "y"]), kind, |t| {
            if t[0] == t[1] {
                0.0
            } else {
                5e-10
            }
        })
        .unwrap();
        let r = check_axioms(&s, Tolerance::default());
        assert!(!r.entry("(s-lbnd)").unwrap().holds);
        // the same table is an acceptable plain partial metric up to tolerance,
        // apart from separation which sees both equalities hold
        let p = s
            .with_kind(MetricKind::new(Family::PartialMetric, 2).unwrap())
            .unwrap();
        let r = check_axioms(&p, Tolerance::default());
        assert!(r.entry("(p-lbnd)").unwrap().holds);
        assert!(!r.entry("(p-sep)").unwrap().holds);
    }
}
