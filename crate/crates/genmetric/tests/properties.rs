//! Invariants over randomly generated valid spaces, orbits and word sets.

mod common;

use common::*;
use genmetric::alignment::{score_pair, space_from_words};
use genmetric::fixedpoint::{
    check_orbital_contraction, check_pairwise_contraction, maps, ContractionSpec,
};
use genmetric::sequences::{check_cauchy_pair, classify_cauchy};
use genmetric::space::{
    check_axioms, induce_metric, lift_to_n, term_replacement_margin, Base, FiniteSpace, Tolerance,
};
use genmetric::spaces::{RealFamily, RealPoint, RealSpace};
use genmetric::topology::{generate_topology, topologies_coincide};
use proptest::prelude::*;
use rand::Rng;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn passes(space: &FiniteSpace) -> bool {
    check_axioms(space, tol()).overall
}

fn corollary_holds(space: &FiniteSpace) -> bool {
    let n = space.arity() as f64;
    (0..space.len()).all(|a| {
        (0..space.len()).all(|b| {
            space.centered(a, b)
                <= (n - 1.0) * space.centered(b, a) - (n - 2.0) * space.self_value(b) + tol().abs()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generators_produce_valid_spaces(seed in any::<u64>(), m in 2usize..6) {
        let mut r = rng(seed);
        prop_assert!(passes(&random_metric(&mut r, m)));
        prop_assert!(passes(&random_partial(&mut r, m)));
        prop_assert!(passes(&random_strong_partial(&mut r, m)));
        prop_assert!(passes(&random_three_metric(&mut r, m)));
    }

    #[test]
    fn constructions_preserve_validity(seed in any::<u64>(), m in 2usize..6) {
        let mut r = rng(seed);
        let p = random_partial(&mut r, m);
        prop_assert!(passes(&induce_metric(&p).unwrap()));
        prop_assert_eq!(lift_to_n(&p, 2).unwrap(), p.clone());
        let lifted = lift_to_n(&p, 3).unwrap();
        prop_assert!(passes(&lifted));
        prop_assert!(passes(&induce_metric(&lifted).unwrap()));
        let s = random_strong_partial(&mut r, m);
        prop_assert!(passes(&lift_to_n(&s, 3).unwrap()));
        prop_assert!(passes(&lift_to_n(&random_metric(&mut r, m), 4).unwrap()));
    }

    #[test]
    fn strong_spaces_pass_the_plain_checker(seed in any::<u64>(), m in 2usize..6) {
        let mut r = rng(seed);
        let s = random_strong_partial(&mut r, m);
        let relaxed = s.with_kind(s.kind().with_base(Base::Partial)).unwrap();
        prop_assert!(passes(&relaxed));
        let s3 = lift_to_n(&s, 3).unwrap();
        prop_assert!(passes(&s3.with_kind(s3.kind().with_base(Base::Partial)).unwrap()));
    }

    #[test]
    fn separation_follows_the_kind(seed in any::<u64>(), m in 2usize..6) {
        let mut r = rng(seed);
        prop_assert!(generate_topology(&random_partial(&mut r, m)).unwrap().t0);
        prop_assert!(generate_topology(&random_strong_partial(&mut r, m)).unwrap().t1);
        prop_assert!(generate_topology(&random_metric(&mut r, m)).unwrap().t2);
        let three = random_three_metric(&mut r, m);
        prop_assert!(generate_topology(&three).unwrap().t2);
        prop_assert!(topologies_coincide(&three, &induce_metric(&three).unwrap()).unwrap());
    }

    #[test]
    fn term_replacement_and_corollary(seed in any::<u64>(), m in 2usize..5) {
        let mut r = rng(seed);
        for space in [lift_to_n(&random_partial(&mut r, m), 3).unwrap(), random_three_metric(&mut r, m)] {
            let n = space.arity();
            let tuples = all_tuples(m, n);
            for xs in &tuples {
                for ys in &tuples {
                    for t in 1..=n {
                        let margin = term_replacement_margin(&space, xs, ys, t).unwrap();
                        prop_assert!(margin >= -1e-9, "{:?} {:?} {} -> {}", xs, ys, t, margin);
                    }
                }
            }
            prop_assert!(corollary_holds(&space));
        }
    }

    #[test]
    fn alignment_spaces(seed in any::<u64>()) {
        let mut r = rng(seed);
        let words = random_words(&mut r, 4, 5);
        let s = dna();
        prop_assert!(passes(&space_from_words(&words, &s, 2).unwrap()));
        prop_assert!(passes(&space_from_words(&words, &s, 3).unwrap()));
        for x in &words {
            for y in &words {
                prop_assert_eq!(score_pair(x, y, &s).unwrap(), brute_force_score(x, y, &s));
            }
        }
    }
}

#[test]
fn dp_matches_enumeration_exhaustively() {
    let s = dna();
    let words = all_words(&['A', 'C', 'G', 'T'], 3);
    for x in &words {
        for y in &words {
            assert_eq!(
                score_pair(x, y, &s).unwrap(),
                brute_force_score(x, y, &s),
                "{x} {y}"
            );
        }
    }
}

/// Long enough for `c^k M` to drop below the tolerance over the default
/// tail window when `c < 0.3`.
const ORBIT_LEN: usize = 40;

/// Orbit of `f` from `x0` with `len` points.
fn orbit(f: &genmetric::fixedpoint::Map<RealPoint>, x0: f64, len: usize) -> Vec<RealPoint> {
    let mut xs = vec![RealPoint::Real(x0)];
    while xs.len() < len {
        let next = f.apply(xs.last().unwrap()).unwrap();
        xs.push(next);
    }
    xs
}

#[test]
fn orbital_contraction_implies_cauchy() {
    let mut r = rng(7);
    let mut passed = 0;
    for _ in 0..100 {
        let n = r.gen_range(2..=3);
        let family = if n == 2 {
            RealFamily::MaxPartial
        } else {
            RealFamily::MaxPartialN
        };
        let line = RealSpace::new(family, n).unwrap();
        let a = r.gen_range(0.0..0.35);
        let b = r.gen_range(-1.0..1.0);
        let fixed = b / (1.0 - a);
        let xs = orbit(
            &maps::affine(a, b),
            fixed + r.gen_range(0.0..5.0),
            ORBIT_LEN,
        );
        let c = r.gen_range(0.05..0.3);
        let rr = fixed
            + if r.gen_bool(0.3) {
                r.gen_range(-0.1..0.1)
            } else {
                0.0
            };
        let v =
            check_orbital_contraction(&line, &xs, &ContractionSpec::OrbitalC { c, r: rr }, tol())
                .unwrap();
        if v.holds {
            passed += 1;
            let verdict = classify_cauchy(&line, &xs, tol(), None).unwrap();
            assert!(verdict.is_cauchy, "a={a} b={b} c={c}");
            assert!((verdict.central_distance - rr).abs() <= 1e-6);
        }
    }
    assert!(passed >= 20, "only {passed} contracting orbits");
}

#[test]
fn pairwise_contraction_implies_cauchy_pair() {
    let mut r = rng(11);
    let line = RealSpace::new(RealFamily::MaxPartial, 2).unwrap();
    let mut passed = 0;
    for _ in 0..100 {
        let xs = orbit(
            &maps::linear(r.gen_range(0.0..0.25)),
            r.gen_range(0.0..5.0),
            ORBIT_LEN,
        );
        let ys = orbit(
            &maps::linear(r.gen_range(0.0..0.25)),
            r.gen_range(0.0..5.0),
            ORBIT_LEN,
        );
        let c = r.gen_range(0.05..0.3);
        let spec = ContractionSpec::PairwiseC { c, r: 0.0 };
        if check_pairwise_contraction(&line, &xs, &ys, &spec, tol())
            .unwrap()
            .holds
        {
            passed += 1;
            assert!(
                check_cauchy_pair(&line, &xs, &ys, tol(), None)
                    .unwrap()
                    .is_cauchy
            );
        }
    }
    assert!(passed >= 20, "only {passed} contracting pairs");
}
