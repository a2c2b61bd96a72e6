//! Finite generalized metric spaces.
//!
//! A [`FiniteSpace`] holds an ordered list of element labels, a declared
//! [`MetricKind`] and one value per multiset of `n` elements. Lookups with an
//! unsorted tuple go through the sorted form, so the symmetry axioms hold by
//! construction and are never checked.

mod axioms;
mod construct;
mod file;
mod multiset;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use axioms::{check_axioms, AxiomEntry, AxiomReport, Witness};
pub use construct::{induce_metric, lift_to_n, shift_by_constant, term_replacement_margin};
pub use file::{SpaceFile, TupleValue};
pub use multiset::{multiset_count, MultisetIter};

/// The six axiom systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Metric,
    PartialMetric,
    StrongPartialMetric,
    NMetric,
    PartialNMetric,
    StrongPartialNMetric,
}

/// Families grouped by their lower-bound axiom, ignoring arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Base {
    Metric,
    Partial,
    StrongPartial,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Metric,
        Family::PartialMetric,
        Family::StrongPartialMetric,
        Family::NMetric,
        Family::PartialNMetric,
        Family::StrongPartialNMetric,
    ];

    pub fn is_pairwise(self) -> bool {
        matches!(
            self,
            Family::Metric | Family::PartialMetric | Family::StrongPartialMetric
        )
    }

    pub fn base(self) -> Base {
        match self {
            Family::Metric | Family::NMetric => Base::Metric,
            Family::PartialMetric | Family::PartialNMetric => Base::Partial,
            Family::StrongPartialMetric | Family::StrongPartialNMetric => Base::StrongPartial,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Metric => "Metric",
            Family::PartialMetric => "PartialMetric",
            Family::StrongPartialMetric => "StrongPartialMetric",
            Family::NMetric => "NMetric",
            Family::PartialNMetric => "PartialNMetric",
            Family::StrongPartialNMetric => "StrongPartialNMetric",
        }
    }

    /// Accepts the names used in space files, case-insensitively and with or
    /// without underscores.
    pub fn parse(s: &str) -> Option<Family> {
        let key: String = s
            .chars()
            .filter(|c| *c != '_' && *c != '-' && *c != ' ')
            .collect::<String>()
            .to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.name().to_ascii_lowercase() == key)
    }
}

impl Base {
    fn family(self, pairwise: bool) -> Family {
        match (self, pairwise) {
            (Base::Metric, true) => Family::Metric,
            (Base::Partial, true) => Family::PartialMetric,
            (Base::StrongPartial, true) => Family::StrongPartialMetric,
            (Base::Metric, false) => Family::NMetric,
            (Base::Partial, false) => Family::PartialNMetric,
            (Base::StrongPartial, false) => Family::StrongPartialNMetric,
        }
    }
}

/// A family together with its arity. Pairwise families have arity 2 and the
/// n-families arity at least 3; [`MetricKind::of`] picks the right family for
/// an arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MetricKind {
    family: Family,
    arity: usize,
}

impl MetricKind {
    pub fn new(family: Family, arity: usize) -> Result<Self> {
        if family.is_pairwise() != (arity == 2) || arity < 2 {
            return Err(Error::InvalidKind(format!(
                "{} cannot have arity {arity}",
                family.name()
            )));
        }
        Ok(MetricKind { family, arity })
    }

    /// The kind of the given base at arity `n`; `n = 2` yields the pairwise
    /// family.
    pub fn of(base: Base, arity: usize) -> Result<Self> {
        if arity < 2 {
            return Err(Error::InvalidKind(format!("arity {arity} is below 2")));
        }
        Ok(MetricKind {
            family: base.family(arity == 2),
            arity,
        })
    }

    pub fn metric() -> Self {
        MetricKind {
            family: Family::Metric,
            arity: 2,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn base(&self) -> Base {
        self.family.base()
    }

    pub fn is_strong(&self) -> bool {
        self.base() == Base::StrongPartial
    }

    /// The same arity with a different base, e.g. the plain partial kind a
    /// strong space also belongs to.
    pub fn with_base(&self, base: Base) -> Self {
        MetricKind {
            family: base.family(self.arity == 2),
            arity: self.arity,
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.arity;
        match self.family {
            Family::Metric => write!(f, "metric"),
            Family::PartialMetric => write!(f, "partial metric"),
            Family::StrongPartialMetric => write!(f, "strong partial metric"),
            Family::NMetric => write!(f, "{n}-Metric"),
            Family::PartialNMetric => write!(f, "partial {n}-Metric"),
            Family::StrongPartialNMetric => write!(f, "strong partial {n}-Metric"),
        }
    }
}

/// Absolute slack used by every numerical comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    abs: f64,
}

impl Tolerance {
    pub const DEFAULT_ABS: f64 = 1e-9;

    pub fn new(abs: f64) -> Result<Self> {
        if !(abs >= 0.0) || !abs.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be a finite non-negative number, got {abs}"
            )));
        }
        Ok(Tolerance { abs })
    }

    pub fn abs(&self) -> f64 {
        self.abs
    }

    /// `lhs <= rhs` up to the tolerance. NaN never passes.
    pub fn le(&self, lhs: f64, rhs: f64) -> bool {
        lhs <= rhs + self.abs
    }

    /// `lhs < rhs` with a margin larger than the tolerance.
    pub fn lt_strict(&self, lhs: f64, rhs: f64) -> bool {
        rhs - lhs > self.abs
    }

    pub fn eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.abs
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: Self::DEFAULT_ABS,
        }
    }
}

/// Largest table this library will allocate.
const MAX_ENTRIES: u128 = 1 << 26;

/// A finite set with a symmetric arity-`n` value table.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSpace {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    kind: MetricKind,
    values: Vec<f64>,
    binom: multiset::Binomials,
}

impl FiniteSpace {
    /// Builds a space by evaluating `f` on every sorted index tuple.
    pub fn from_fn<F>(elements: Vec<String>, kind: MetricKind, mut f: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> f64,
    {
        let index = Self::index_labels(&elements)?;
        let m = elements.len();
        let n = kind.arity();
        let count = multiset_count(m, n);
        if count > MAX_ENTRIES {
            return Err(Error::TooLarge(count));
        }
        let binom = multiset::Binomials::new(m, n);
        let mut values = vec![f64::NAN; count as usize];
        for tuple in MultisetIter::new(m, n) {
            let v = f(&tuple);
            if !v.is_finite() {
                return Err(Error::NonFinite(join_labels(&elements, &tuple)));
            }
            values[binom.rank(&tuple)] = v;
        }
        Ok(FiniteSpace {
            elements,
            index,
            kind,
            values,
            binom,
        })
    }

    /// Builds a space from labelled entries given in any tuple order.
    /// Repeated tuples must agree exactly; every multiset must be present.
    pub fn from_entries<I>(elements: Vec<String>, kind: MetricKind, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<String>, f64)>,
    {
        let index = Self::index_labels(&elements)?;
        let m = elements.len();
        let n = kind.arity();
        let count = multiset_count(m, n);
        if count > MAX_ENTRIES {
            return Err(Error::TooLarge(count));
        }
        let binom = multiset::Binomials::new(m, n);
        let mut values: Vec<Option<f64>> = vec![None; count as usize];
        for (labels, value) in entries {
            if labels.len() != n {
                return Err(Error::ArityMismatch {
                    tuple: labels.join(", "),
                    got: labels.len(),
                    expected: n,
                });
            }
            let mut tuple = labels
                .iter()
                .map(|l| {
                    index
                        .get(l)
                        .copied()
                        .ok_or_else(|| Error::UnknownElement(l.clone()))
                })
                .collect::<Result<Vec<_>>>()?;
            tuple.sort_unstable();
            if !value.is_finite() {
                return Err(Error::NonFinite(join_labels(&elements, &tuple)));
            }
            let slot = &mut values[binom.rank(&tuple)];
            match *slot {
                Some(prev) if prev != value => {
                    return Err(Error::Conflict {
                        tuple: join_labels(&elements, &tuple),
                        first: prev,
                        second: value,
                    })
                }
                _ => *slot = Some(value),
            }
        }
        let mut table = Vec::with_capacity(values.len());
        for tuple in MultisetIter::new(m, n) {
            match values[binom.rank(&tuple)] {
                Some(v) => table.push((binom.rank(&tuple), v)),
                None => return Err(Error::Incomplete(join_labels(&elements, &tuple))),
            }
        }
        let mut dense = vec![0.0; values.len()];
        for (r, v) in table {
            dense[r] = v;
        }
        Ok(FiniteSpace {
            elements,
            index,
            kind,
            values: dense,
            binom,
        })
    }

    fn index_labels(elements: &[String]) -> Result<HashMap<String, usize>> {
        if elements.is_empty() {
            return Err(Error::Empty);
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::DuplicateElement(e.clone()));
            }
        }
        Ok(index)
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn arity(&self) -> usize {
        self.kind.arity()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Resolves a list of labels to indices.
    pub fn indices_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        labels
            .iter()
            .map(|l| {
                self.index_of(l.as_ref())
                    .ok_or_else(|| Error::UnknownElement(l.as_ref().to_string()))
            })
            .collect()
    }

    /// Value of an index tuple given in any order.
    ///
    /// # Panics
    ///
    /// Panics if the tuple length differs from the arity or an index is out
    /// of range.
    pub fn value(&self, tuple: &[usize]) -> f64 {
        let n = self.arity();
        assert_eq!(tuple.len(), n, "tuple length must equal the arity");
        assert!(
            tuple.iter().all(|&i| i < self.len()),
            "element index out of range"
        );
        if n <= 16 {
            let mut buf = [0usize; 16];
            buf[..n].copy_from_slice(tuple);
            buf[..n].sort_unstable();
            self.values[self.binom.rank(&buf[..n])]
        } else {
            let mut buf = tuple.to_vec();
            buf.sort_unstable();
            self.values[self.binom.rank(&buf)]
        }
    }

    /// Value of a labelled tuple given in any order.
    pub fn value_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<f64> {
        if labels.len() != self.arity() {
            return Err(Error::ArityMismatch {
                tuple: labels
                    .iter()
                    .map(|l| l.as_ref())
                    .collect::<Vec<_>>()
                    .join(", "),
                got: labels.len(),
                expected: self.arity(),
            });
        }
        let idx = self.indices_of(labels)?;
        Ok(self.value(&idx))
    }

    /// `P(<x>^{n-1}, y)`.
    pub fn centered(&self, x: usize, y: usize) -> f64 {
        let n = self.arity();
        if n <= 16 {
            let mut buf = [x; 16];
            buf[n - 1] = y;
            self.value(&buf[..n])
        } else {
            let mut buf = vec![x; n];
            buf[n - 1] = y;
            self.value(&buf)
        }
    }

    /// `P(<x>^n)`.
    pub fn self_value(&self, x: usize) -> f64 {
        self.centered(x, x)
    }

    /// All sorted tuples with their values, in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        MultisetIter::new(self.len(), self.arity()).map(move |t| {
            let v = self.values[self.binom.rank(&t)];
            (t, v)
        })
    }

    /// The same table declared as a different kind of the same arity.
    pub fn with_kind(&self, kind: MetricKind) -> Result<Self> {
        if kind.arity() != self.arity() {
            return Err(Error::InvalidKind(format!(
                "cannot relabel an arity-{} table as {kind}",
                self.arity()
            )));
        }
        let mut out = self.clone();
        out.kind = kind;
        Ok(out)
    }

    /// Applies `f` to every entry.
    pub fn map_values<F: Fn(f64) -> f64>(&self, kind: MetricKind, f: F) -> Result<Self> {
        FiniteSpace::from_fn(self.elements.clone(), kind, |t| f(self.value(t)))
    }

    /// Renders a tuple of indices as labels.
    pub fn labels_of(&self, tuple: &[usize]) -> Vec<String> {
        tuple.iter().map(|&i| self.elements[i].clone()).collect()
    }
}

fn join_labels(elements: &[String], tuple: &[usize]) -> String {
    tuple
        .iter()
        .map(|&i| elements[i].as_str())
        .collect::<Vec<_>>()
        .join(", ")
}
