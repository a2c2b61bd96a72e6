//! Random valid spaces and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use genmetric::alignment::{score_alignment, ScoringScheme, GAP};
use genmetric::space::{
    check_axioms, lift_to_n, shift_by_constant, Base, FiniteSpace, MetricKind, Tolerance,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn labels(m: usize) -> Vec<String> {
    (0..m).map(|i| format!("p{i}")).collect()
}

/// Distinct integer points in the plane.
fn grid_points(rng: &mut TestRng, m: usize) -> Vec<(i32, i32)> {
    let mut all: Vec<(i32, i32)> = (0..6).flat_map(|x| (0..6).map(move |y| (x, y))).collect();
    all.shuffle(rng);
    all.truncate(m);
    all
}

/// A metric on `m` points: the L1 or L-infinity distance between distinct
/// integer points in the plane.
pub fn random_metric(rng: &mut TestRng, m: usize) -> FiniteSpace {
    let pts = grid_points(rng, m);
    let l1 = rng.gen_bool(0.5);
    FiniteSpace::from_fn(labels(m), MetricKind::metric(), |t| {
        let (a, b) = (pts[t[0]], pts[t[1]]);
        let (dx, dy) = ((a.0 - b.0).abs(), (a.1 - b.1).abs());
        (if l1 { dx + dy } else { dx.max(dy) }) as f64
    })
    .unwrap()
}

/// A partial metric `p(x,y) = (d(x,y) + w(x) + w(y)) / 2 - c` with `w` a
/// scaled distance to an anchor, so that `|w(x) - w(y)| <= d(x,y)`.
pub fn random_partial(rng: &mut TestRng, m: usize) -> FiniteSpace {
    let d = random_metric(rng, m);
    let anchor = rng.gen_range(0..m);
    let scale = [0.0, 0.5, 1.0][rng.gen_range(0..3)];
    let shift = rng.gen_range(0..4) as f64;
    let w: Vec<f64> = (0..m).map(|x| scale * d.value(&[x, anchor])).collect();
    let kind = MetricKind::of(Base::Partial, 2).unwrap();
    FiniteSpace::from_fn(d.elements().to_vec(), kind, |t| {
        (d.value(t) + w[t[0]] + w[t[1]]) / 2.0 - shift
    })
    .unwrap()
}

/// A metric shifted by a random constant.
pub fn random_strong_partial(rng: &mut TestRng, m: usize) -> FiniteSpace {
    let d = random_metric(rng, m);
    shift_by_constant(&d, rng.gen_range(-3..4) as f64).unwrap()
}

/// A 3-Metric: a lifted metric whose off-diagonal entries are then raised at
/// random, keeping the perturbation only when every axiom still holds.
pub fn random_three_metric(rng: &mut TestRng, m: usize) -> FiniteSpace {
    let base = lift_to_n(&random_metric(rng, m), 3).unwrap();
    let bumps: Vec<f64> = (0..base.entries().count())
        .map(|_| rng.gen_range(0..3) as f64)
        .collect();
    let bumped = FiniteSpace::from_entries(
        base.elements().to_vec(),
        base.kind(),
        base.entries().zip(&bumps).map(|((t, v), b)| {
            let constant = t.iter().all(|&i| i == t[0]);
            (base.labels_of(&t), if constant { v } else { v + b })
        }),
    )
    .unwrap();
    if check_axioms(&bumped, Tolerance::default()).overall {
        bumped
    } else {
        base
    }
}

/// Every tuple of length `n` over `0..m`.
pub fn all_tuples(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..m).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Every alignment of `x` and `y` without gap-gap columns.
pub fn all_alignments(x: &[char], y: &[char]) -> Vec<(String, String)> {
    match (x.split_first(), y.split_first()) {
        (None, None) => vec![(String::new(), String::new())],
        _ => {
            let mut out = Vec::new();
            let mut extend = |a: char, b: char, rest: Vec<(String, String)>| {
                for (rx, ry) in rest {
                    out.push((format!("{a}{rx}"), format!("{b}{ry}")));
                }
            };
            if let (Some((&a, xr)), Some((&b, yr))) = (x.split_first(), y.split_first()) {
                extend(a, b, all_alignments(xr, yr));
            }
            if let Some((&a, xr)) = x.split_first() {
                extend(a, GAP, all_alignments(xr, y));
            }
            if let Some((&b, yr)) = y.split_first() {
                extend(GAP, b, all_alignments(x, yr));
            }
            out
        }
    }
}

/// The best (smallest) score over explicitly enumerated alignments.
pub fn brute_force_score(x: &str, y: &str, scheme: &ScoringScheme) -> f64 {
    let xs: Vec<char> = x.chars().collect();
    let ys: Vec<char> = y.chars().collect();
    all_alignments(&xs, &ys)
        .iter()
        .map(|(ax, ay)| score_alignment(ax, ay, scheme).unwrap())
        .fold(f64::INFINITY, f64::min)
}

pub fn dna() -> ScoringScheme {
    ScoringScheme::new("ACGT", -1.0, 1.0, 2.0).unwrap()
}

pub fn random_word(rng: &mut TestRng, max_len: usize) -> String {
    let len = rng.gen_range(1..=max_len);
    (0..len)
        .map(|_| ['A', 'C', 'G', 'T'][rng.gen_range(0..4)])
        .collect()
}

/// Up to `max_words` distinct random words.
pub fn random_words(rng: &mut TestRng, max_words: usize, max_len: usize) -> Vec<String> {
    let target = rng.gen_range(1..=max_words);
    let mut words: Vec<String> = Vec::new();
    for _ in 0..50 {
        if words.len() == target {
            break;
        }
        let w = random_word(rng, max_len);
        if !words.contains(&w) {
            words.push(w);
        }
    }
    words
}

/// Every word over `alphabet` of length at most `max_len`.
pub fn all_words(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| alphabet.iter().map(move |c| format!("{w}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}
