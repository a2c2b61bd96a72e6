//! Gap alignment scores.
//!
//! Two words over an alphabet are aligned by inserting gaps (`-`) until they
//! have the same length. Each column is scored as a Match (`α`), a Mismatch
//! (`β`), an InDel (`γ`) or a Relay (gap against gap, `0`), and the score of a
//! pair is the smallest total over all alignments. Smaller means closer.
//!
//! ```
//! use genmetric::alignment::{score_pair, ScoringScheme};
//!
//! let scheme = ScoringScheme::new("ACGT", -1.0, 1.0, 2.0).unwrap();
//! assert_eq!(score_pair("CGATC", "CAGA", &scheme).unwrap(), 2.0);
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{lift_to_n, Base, FiniteSpace, MetricKind};

pub const GAP: char = '-';

/// Column costs. `α` and `β` may vary per letter and per letter pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoringScheme {
    alphabet: Vec<char>,
    alpha: Option<f64>,
    beta: Option<f64>,
    gamma: f64,
    alpha_table: BTreeMap<char, f64>,
    beta_table: BTreeMap<(char, char), f64>,
}

/// JSON form of a scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeFile {
    pub alphabet: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub alpha_table: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub beta_table: BTreeMap<String, f64>,
}

fn ordered(a: char, b: char) -> (char, char) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn finite(what: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidScheme(format!("{what} is not finite")))
    }
}

fn parse_alphabet(alphabet: &str) -> Result<Vec<char>> {
    let mut letters: Vec<char> = alphabet.chars().collect();
    letters.sort_unstable();
    let len = letters.len();
    letters.dedup();
    if letters.len() != len {
        return Err(Error::InvalidScheme(format!(
            "alphabet `{alphabet}` repeats a letter"
        )));
    }
    if letters.is_empty() {
        return Err(Error::InvalidScheme("alphabet is empty".into()));
    }
    if letters.contains(&GAP) {
        return Err(Error::InvalidScheme(format!(
            "the gap symbol `{GAP}` cannot be a letter"
        )));
    }
    Ok(letters)
}

impl ScoringScheme {
    /// A scheme with constant `α`, `β` and `γ`.
    pub fn new(alphabet: &str, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Ok(ScoringScheme {
            alphabet: parse_alphabet(alphabet)?,
            alpha: Some(finite("alpha", alpha)?),
            beta: Some(finite("beta", beta)?),
            gamma: finite("gamma", gamma)?,
            alpha_table: BTreeMap::new(),
            beta_table: BTreeMap::new(),
        })
    }

    fn letter(&self, c: char) -> Result<char> {
        if self.alphabet.binary_search(&c).is_ok() {
            Ok(c)
        } else {
            Err(Error::UnknownLetter(c))
        }
    }

    /// Overrides the Match score of one letter.
    pub fn with_alpha(mut self, letter: char, value: f64) -> Result<Self> {
        let letter = self.letter(letter)?;
        self.alpha_table.insert(letter, finite("alpha", value)?);
        Ok(self)
    }

    /// Overrides the Mismatch score of one unordered letter pair.
    pub fn with_beta(mut self, a: char, b: char, value: f64) -> Result<Self> {
        let (a, b) = (self.letter(a)?, self.letter(b)?);
        if a == b {
            return Err(Error::InvalidScheme(format!(
                "mismatch entry `{a}{b}` pairs a letter with itself"
            )));
        }
        self.beta_table
            .insert(ordered(a, b), finite("beta", value)?);
        Ok(self)
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alpha(&self, letter: char) -> f64 {
        self.alpha_table
            .get(&letter)
            .copied()
            .or(self.alpha)
            .expect("schemes are total")
    }

    pub fn beta(&self, a: char, b: char) -> f64 {
        self.beta_table
            .get(&ordered(a, b))
            .copied()
            .or(self.beta)
            .expect("schemes are total")
    }

    /// Score of one column; either side may be the gap symbol.
    pub fn column(&self, a: char, b: char) -> f64 {
        match (a == GAP, b == GAP) {
            (true, true) => 0.0,
            (true, false) | (false, true) => self.gamma,
            (false, false) if a == b => self.alpha(a),
            (false, false) => self.beta(a, b),
        }
    }

    fn check_word(&self, word: &str) -> Result<Vec<char>> {
        word.chars().map(|c| self.letter(c)).collect()
    }

    pub fn from_file(file: SchemeFile) -> Result<Self> {
        let mut scheme = ScoringScheme {
            alphabet: parse_alphabet(&file.alphabet)?,
            alpha: file.alpha.map(|a| finite("alpha", a)).transpose()?,
            beta: file.beta.map(|b| finite("beta", b)).transpose()?,
            gamma: finite("gamma", file.gamma)?,
            alpha_table: BTreeMap::new(),
            beta_table: BTreeMap::new(),
        };
        for (key, v) in file.alpha_table {
            let chars: Vec<char> = key.chars().collect();
            let letter = match chars.as_slice() {
                [a] => *a,
                [a, b] if a == b => *a,
                _ => {
                    return Err(Error::InvalidScheme(format!(
                        "alpha_table key `{key}` is not a doubled letter"
                    )))
                }
            };
            scheme = scheme.with_alpha(letter, v)?;
        }
        for (key, v) in file.beta_table {
            let chars: Vec<char> = key.chars().collect();
            let [a, b] = chars.as_slice() else {
                return Err(Error::InvalidScheme(format!(
                    "beta_table key `{key}` is not a letter pair"
                )));
            };
            let pair = ordered(*a, *b);
            if let Some(prev) = scheme.beta_table.get(&pair) {
                if *prev != v {
                    return Err(Error::InvalidScheme(format!(
                        "beta_table gives `{key}` two different values"
                    )));
                }
            }
            scheme = scheme.with_beta(*a, *b, v)?;
        }
        if scheme.alpha.is_none() {
            if let Some(c) = scheme
                .alphabet
                .iter()
                .find(|c| !scheme.alpha_table.contains_key(c))
            {
                return Err(Error::InvalidScheme(format!(
                    "no alpha and no alpha_table entry for `{c}`"
                )));
            }
        }
        if scheme.beta.is_none() {
            for (i, &a) in scheme.alphabet.iter().enumerate() {
                for &b in &scheme.alphabet[i + 1..] {
                    if !scheme.beta_table.contains_key(&(a, b)) {
                        return Err(Error::InvalidScheme(format!(
                            "no beta and no beta_table entry for `{a}{b}`"
                        )));
                    }
                }
            }
        }
        Ok(scheme)
    }

    pub fn to_file(&self) -> SchemeFile {
        SchemeFile {
            alphabet: self.alphabet.iter().collect(),
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            alpha_table: self
                .alpha_table
                .iter()
                .map(|(c, v)| (format!("{c}{c}"), *v))
                .collect(),
            beta_table: self
                .beta_table
                .iter()
                .map(|((a, b), v)| (format!("{a}{b}"), *v))
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }

    fn mismatch_pairs(&self) -> impl Iterator<Item = (char, char)> + '_ {
        self.alphabet
            .iter()
            .enumerate()
            .flat_map(move |(i, &a)| self.alphabet[i + 1..].iter().map(move |&b| (a, b)))
    }
}

/// Outcome of [`validate_scheme`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeVerdict {
    pub valid: bool,
    /// One line per violated condition.
    pub violations: Vec<String>,
}

/// Checks the conditions under which the alignment score is a strong partial
/// metric: `max α < min{β, γ, 0}`, `max β <= 2γ` and `γ > 0`. When letters
/// score differently the mismatch triangle `β(x,y) <= β(x,z) + β(y,z) - α(z)`
/// is also checked for every triple of distinct letters.
pub fn validate_scheme(scheme: &ScoringScheme) -> SchemeVerdict {
    let alphas: Vec<f64> = scheme.alphabet.iter().map(|&c| scheme.alpha(c)).collect();
    let betas: Vec<f64> = scheme
        .mismatch_pairs()
        .map(|(a, b)| scheme.beta(a, b))
        .collect();
    let max_alpha = alphas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_beta = betas.iter().copied().fold(f64::INFINITY, f64::min);
    let max_beta = betas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let g = scheme.gamma;

    let mut violations = Vec::new();
    let bound = min_beta.min(g).min(0.0);
    if !(max_alpha < bound) {
        violations.push(format!(
            "alpha < min(beta, gamma, 0) fails: max alpha {max_alpha} >= {bound}"
        ));
    }
    if max_beta > 2.0 * g {
        violations.push(format!(
            "beta <= 2 gamma fails: max beta {max_beta} > {}",
            2.0 * g
        ));
    }
    if !(g > 0.0) {
        violations.push(format!("gamma > 0 fails: gamma = {g}"));
    }
    let letters = &scheme.alphabet;
    'triples: for &x in letters {
        for &y in letters {
            for &z in letters {
                if x == y || y == z || x == z {
                    continue;
                }
                let rhs = scheme.beta(x, z) + scheme.beta(y, z) - scheme.alpha(z);
                if scheme.beta(x, y) > rhs {
                    violations.push(format!(
                        "mismatch triangle fails for ({x}, {y}) through {z}: {} > {rhs}",
                        scheme.beta(x, y)
                    ));
                    break 'triples;
                }
            }
        }
    }
    SchemeVerdict {
        valid: violations.is_empty(),
        violations,
    }
}

/// One optimal alignment of two words.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlignmentResult {
    pub score: f64,
    pub aligned_x: String,
    pub aligned_y: String,
    pub column_scores: Vec<f64>,
}

/// Total score of a given alignment. Both rows must have the same length and
/// strip to words over the alphabet; gap-gap columns are allowed.
pub fn score_alignment(aligned_x: &str, aligned_y: &str, scheme: &ScoringScheme) -> Result<f64> {
    let xs: Vec<char> = aligned_x.chars().collect();
    let ys: Vec<char> = aligned_y.chars().collect();
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch(xs.len(), ys.len()));
    }
    for &c in xs.iter().chain(&ys) {
        if c != GAP {
            scheme.letter(c)?;
        }
    }
    Ok(xs.iter().zip(&ys).map(|(&a, &b)| scheme.column(a, b)).sum())
}

/// The minimum total column score over all alignments of `x` and `y`.
pub fn score_pair(x: &str, y: &str, scheme: &ScoringScheme) -> Result<f64> {
    let xs = scheme.check_word(x)?;
    let ys = scheme.check_word(y)?;
    let g = scheme.gamma;
    let mut prev: Vec<f64> = (0..=ys.len()).map(|j| j as f64 * g).collect();
    let mut cur = vec![0.0; ys.len() + 1];
    for (i, &a) in xs.iter().enumerate() {
        cur[0] = (i + 1) as f64 * g;
        for (j, &b) in ys.iter().enumerate() {
            let diag = prev[j] + scheme.column(a, b);
            cur[j + 1] = diag.min(prev[j + 1] + g).min(cur[j] + g);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[ys.len()])
}

/// An optimal alignment. Ties prefer a Match/Mismatch column, then a
/// deletion (gap in `y`), then an insertion, reading from the end.
pub fn best_alignment(x: &str, y: &str, scheme: &ScoringScheme) -> Result<AlignmentResult> {
    let xs = scheme.check_word(x)?;
    let ys = scheme.check_word(y)?;
    let (n, m) = (xs.len(), ys.len());
    let g = scheme.gamma;
    let w = m + 1;
    let mut cell = vec![0.0; (n + 1) * w];
    for j in 0..=m {
        cell[j] = j as f64 * g;
    }
    for i in 1..=n {
        cell[i * w] = i as f64 * g;
        for j in 1..=m {
            let diag = cell[(i - 1) * w + j - 1] + scheme.column(xs[i - 1], ys[j - 1]);
            let up = cell[(i - 1) * w + j] + g;
            let left = cell[i * w + j - 1] + g;
            cell[i * w + j] = diag.min(up).min(left);
        }
    }

    let (mut i, mut j) = (n, m);
    let mut cols: Vec<(char, char, f64)> = Vec::with_capacity(n + m);
    while i > 0 || j > 0 {
        let here = cell[i * w + j];
        if i > 0 && j > 0 {
            let s = scheme.column(xs[i - 1], ys[j - 1]);
            if cell[(i - 1) * w + j - 1] + s == here {
                cols.push((xs[i - 1], ys[j - 1], s));
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && (j == 0 || cell[(i - 1) * w + j] + g == here) {
            cols.push((xs[i - 1], GAP, g));
            i -= 1;
        } else {
            cols.push((GAP, ys[j - 1], g));
            j -= 1;
        }
    }
    cols.reverse();
    Ok(AlignmentResult {
        score: cell[n * w + m],
        aligned_x: cols.iter().map(|c| c.0).collect(),
        aligned_y: cols.iter().map(|c| c.1).collect(),
        column_scores: cols.iter().map(|c| c.2).collect(),
    })
}

/// Sum of [`score_pair`] over all unordered index pairs of the list.
pub fn multi_score<S: AsRef<str>>(words: &[S], scheme: &ScoringScheme) -> Result<f64> {
    if words.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "multi_score needs at least two words, got {}",
            words.len()
        )));
    }
    let mut total = 0.0;
    for j in 1..words.len() {
        for i in 0..j {
            total += score_pair(words[i].as_ref(), words[j].as_ref(), scheme)?;
        }
    }
    Ok(total)
}

/// The strong partial (n-)metric space of alignment scores on distinct words.
pub fn space_from_words<S: AsRef<str>>(
    words: &[S],
    scheme: &ScoringScheme,
    n: usize,
) -> Result<FiniteSpace> {
    let verdict = validate_scheme(scheme);
    if !verdict.valid {
        return Err(Error::InvalidScheme(verdict.violations.join("; ")));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "arity must be at least 2, got {n}"
        )));
    }
    let labels: Vec<String> = words.iter().map(|w| w.as_ref().to_string()).collect();
    let k = labels.len();
    let mut scores = vec![0.0; k * k];
    for i in 0..k {
        for j in i..k {
            let s = score_pair(&labels[i], &labels[j], scheme)?;
            scores[i * k + j] = s;
            scores[j * k + i] = s;
        }
    }
    let pairwise = FiniteSpace::from_fn(labels, MetricKind::of(Base::StrongPartial, 2)?, |t| {
        scores[t[0] * k + t[1]]
    })?;
    lift_to_n(&pairwise, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{check_axioms, Family, Tolerance};

    fn dna() -> ScoringScheme {
        ScoringScheme::new("ACGT", -1.0, 1.0, 2.0).unwrap()
    }

    /// Minimum over every alignment path, enumerated recursively.
    fn brute_force(x: &[char], y: &[char], s: &ScoringScheme) -> f64 {
        match (x.split_first(), y.split_first()) {
            (None, None) => 0.0,
            (Some((_, xr)), None) => s.gamma() + brute_force(xr, y, s),
            (None, Some((_, yr))) => s.gamma() + brute_force(x, yr, s),
            (Some((&a, xr)), Some((&b, yr))) => (s.column(a, b) + brute_force(xr, yr, s))
                .min(s.gamma() + brute_force(xr, y, s))
                .min(s.gamma() + brute_force(x, yr, s)),
        }
    }

    fn words(alphabet: &[char], max_len: usize) -> Vec<String> {
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

    #[test]
    fn worked_example() {
        let s = dna();
        assert_eq!(score_pair("CGATC", "CAGA", &s).unwrap(), 2.0);
        let best = best_alignment("CGATC", "CAGA", &s).unwrap();
        assert_eq!(best.score, 2.0);
        assert_eq!(best.column_scores.iter().sum::<f64>(), 2.0);
        assert_eq!(best.aligned_x.replace(GAP, ""), "CGATC");
        assert_eq!(best.aligned_y.replace(GAP, ""), "CAGA");
        assert_eq!(score_alignment("CGATC", "C-AGA", &s).unwrap(), 2.0);
        assert_eq!(score_alignment("-CGA-TC", "-C-AGA-", &s).unwrap(), 5.0);
    }

    #[test]
    fn simple_values() {
        let s = dna();
        assert_eq!(score_pair("CGATC", "CGATC", &s).unwrap(), -5.0);
        assert_eq!(score_pair("", "CGATC", &s).unwrap(), 10.0);
        let del = best_alignment("A", "", &s).unwrap();
        assert_eq!((del.aligned_x.as_str(), del.aligned_y.as_str()), ("A", "-"));
        assert_eq!(del.score, 2.0);
        let same = best_alignment("GATTACA", "GATTACA", &s).unwrap();
        assert_eq!(same.aligned_x, "GATTACA");
        assert!(same.column_scores.iter().all(|&c| c == -1.0));
        assert!(matches!(
            score_pair("AXA", "A", &s),
            Err(Error::UnknownLetter('X'))
        ));
    }

    #[test]
    fn dp_matches_enumeration_on_binary_words() {
        let s = ScoringScheme::new("AB", -1.0, 1.5, 1.0).unwrap();
        let ws = words(&['A', 'B'], 5);
        for x in &ws {
            for y in &ws {
                let xs: Vec<char> = x.chars().collect();
                let ys: Vec<char> = y.chars().collect();
                let dp = score_pair(x, y, &s).unwrap();
                assert_eq!(dp, brute_force(&xs, &ys, &s), "{x} vs {y}");
                assert_eq!(best_alignment(x, y, &s).unwrap().score, dp);
            }
        }
    }

    #[test]
    fn validation() {
        assert!(validate_scheme(&dna()).valid);
        let v = validate_scheme(&ScoringScheme::new("ACGT", 1.0, -1.0, -2.0).unwrap());
        assert!(!v.valid);
        assert!(v.violations[0].starts_with("alpha < min"));
        let v = validate_scheme(&ScoringScheme::new("ACGT", -1.0, 5.0, 2.0).unwrap());
        assert_eq!(v.violations.len(), 1);
        assert!(v.violations[0].starts_with("beta <= 2 gamma"));
        let skewed = dna().with_beta('A', 'C', 4.0).unwrap();
        let v = validate_scheme(&skewed);
        assert!(!v.valid);
        assert!(v.violations[0].starts_with("mismatch triangle"));
    }

    #[test]
    fn scheme_json() {
        let s = ScoringScheme::from_json(
            r#"{"alphabet": "ACGT", "alpha": -1, "beta": 1, "gamma": 2,
                "beta_table": {"CA": 0.5}, "alpha_table": {"GG": -2}}"#,
        )
        .unwrap();
        assert_eq!(s.beta('A', 'C'), 0.5);
        assert_eq!(s.beta('G', 'T'), 1.0);
        assert_eq!(s.alpha('G'), -2.0);
        assert_eq!(ScoringScheme::from_file(s.to_file()).unwrap(), s);
        assert!(ScoringScheme::from_json(
            r#"{"alphabet": "A-", "alpha": -1, "beta": 1, "gamma": 2}"#
        )
        .is_err());
        assert!(
            ScoringScheme::from_json(r#"{"alphabet": "AC", "alpha": -1, "gamma": 2}"#).is_err()
        );
        assert!(ScoringScheme::from_json(
            r#"{"alphabet": "AC", "alpha": -1, "gamma": 2, "beta_table": {"AC": 1}}"#
        )
        .is_ok());
    }

    #[test]
    fn multi_scores() {
        let s = dna();
        assert_eq!(multi_score(&["CGATC", "CAGA"], &s).unwrap(), 2.0);
        assert_eq!(multi_score(&["ACG"; 3], &s).unwrap(), -9.0);
        assert_eq!(multi_score(&["CGATC", "CAGA", "CAGA"], &s).unwrap(), 0.0);
        assert!(multi_score(&["A"], &s).is_err());
    }

    #[test]
    fn word_spaces() {
        let s = dna();
        let sp = space_from_words(&["CGATC", "CAGA"], &s, 2).unwrap();
        assert_eq!(sp.kind().family(), Family::StrongPartialMetric);
        assert_eq!(sp.value(&[0, 0]), -5.0);
        assert_eq!(sp.value(&[1, 1]), -4.0);
        assert_eq!(sp.value(&[0, 1]), 2.0);
        assert!(check_axioms(&sp, Tolerance::default()).overall);

        let ac = space_from_words(&["A", "C"], &s, 2).unwrap();
        assert_eq!(ac.value(&[0, 1]), 1.0);
        let ac3 = space_from_words(&["A", "C"], &s, 3).unwrap();
        assert_eq!(ac3.value_of(&["A", "A", "C"]).unwrap(), 1.0);
        assert!(check_axioms(&ac3, Tolerance::default()).overall);

        assert!(matches!(
            space_from_words(&["A", "A"], &s, 2),
            Err(Error::DuplicateElement(_))
        ));
        let bad = ScoringScheme::new("ACGT", 1.0, 1.0, 2.0).unwrap();
        assert!(matches!(
            space_from_words(&["A", "C"], &bad, 2),
            Err(Error::InvalidScheme(_))
        ));
    }
}
