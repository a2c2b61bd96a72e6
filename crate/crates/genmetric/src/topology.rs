//! Finite topologies generated by open balls.
//!
//! The ball of radius `ε` around `x` is `{y | P(<x>^{n-1}, y) - P(<x>^n) < ε}`
//! (`<= ε` for the gilded ball). On a finite space only finitely many balls
//! exist, so the topology they generate is computed exactly. Every point has
//! a smallest open neighborhood `U_x`, the intersection of all balls
//! containing it, and a set is open exactly when it contains `U_x` for each
//! of its points.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::FiniteSpace;

/// Largest space [`generate_topology`] accepts.
pub const MAX_ELEMENTS: usize = 20;

fn gap(space: &FiniteSpace, x: usize, y: usize) -> f64 {
    space.centered(x, y) - space.self_value(x)
}

/// Indices of the open (or gilded) ball of radius `eps` around `center`.
pub fn ball(space: &FiniteSpace, center: usize, eps: f64, gilded: bool) -> Result<Vec<usize>> {
    if center >= space.len() {
        return Err(Error::UnknownElement(format!("#{center}")));
    }
    if !(eps > 0.0) || eps.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "ball radius must be positive, got {eps}"
        )));
    }
    Ok((0..space.len())
        .filter(|&y| {
            let d = gap(space, center, y);
            if gilded {
                d <= eps
            } else {
                d < eps
            }
        })
        .collect())
}

/// Radii that realize every distinct open ball around `center`.
fn radii(space: &FiniteSpace, center: usize) -> Vec<f64> {
    let mut positive: Vec<f64> = (0..space.len())
        .map(|y| gap(space, center, y))
        .filter(|&d| d > 0.0)
        .collect();
    positive.sort_by(f64::total_cmp);
    positive.dedup();
    let mut out = Vec::with_capacity(positive.len() + 1);
    if let Some(&first) = positive.first() {
        out.push(first / 2.0);
    }
    out.extend(positive.windows(2).map(|w| (w[0] + w[1]) / 2.0));
    out.push(positive.last().copied().unwrap_or(0.0) + 1.0);
    out
}

fn mask_of(members: &[usize]) -> u32 {
    members.iter().fold(0, |m, &i| m | (1 << i))
}

fn indices(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

/// Lexicographic order on sorted index lists, shorter sets first.
fn set_order(a: &u32, b: &u32) -> Ordering {
    a.count_ones()
        .cmp(&b.count_ones())
        .then_with(|| indices(*a).cmp(indices(*b)))
}

/// The topology of a finite space, kept as bitmasks over element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    elements: Vec<String>,
    neighborhoods: Vec<u32>,
}

impl Topology {
    pub fn of(space: &FiniteSpace) -> Result<Self> {
        let m = space.len();
        if m > MAX_ELEMENTS {
            return Err(Error::TooManyElements(m, MAX_ELEMENTS));
        }
        let full = (1u32 << m) - 1;
        let mut neighborhoods = vec![full; m];
        for center in 0..m {
            for eps in radii(space, center) {
                let b = mask_of(&ball(space, center, eps, false)?);
                for x in indices(b) {
                    neighborhoods[x] &= b;
                }
            }
        }
        Ok(Topology {
            elements: space.elements().to_vec(),
            neighborhoods,
        })
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    /// Smallest open set containing element `x`.
    pub fn neighborhood(&self, x: usize) -> u32 {
        self.neighborhoods[x]
    }

    pub fn is_open(&self, set: u32) -> bool {
        indices(set).all(|x| self.neighborhoods[x] & !set == 0)
    }

    /// Every open set, ordered by size and then lexicographically.
    pub fn open_sets(&self) -> Vec<u32> {
        let m = self.elements.len() as u32;
        let mut sets: Vec<u32> = (0..(1u64 << m))
            .map(|s| s as u32)
            .filter(|&s| self.is_open(s))
            .collect();
        sets.sort_by(set_order);
        sets
    }

    pub fn closure(&self, set: u32) -> u32 {
        (0..self.elements.len())
            .filter(|&x| self.neighborhoods[x] & set != 0)
            .fold(0, |m, x| m | (1 << x))
    }

    /// Whether every open set of `self` is open in `other`.
    pub fn is_coarser_than(&self, other: &Topology) -> bool {
        self.elements.len() == other.elements.len()
            && self
                .neighborhoods
                .iter()
                .zip(&other.neighborhoods)
                .all(|(mine, theirs)| theirs & !mine == 0)
    }

    pub fn labels(&self, set: u32) -> Vec<String> {
        indices(set).map(|i| self.elements[i].clone()).collect()
    }

    fn in_neighborhood(&self, x: usize, y: usize) -> bool {
        self.neighborhoods[x] & (1 << y) != 0
    }

    fn pair(&self, x: usize, y: usize) -> [String; 2] {
        [self.elements[x].clone(), self.elements[y].clone()]
    }

    /// First pair that no open set tells apart in either direction.
    pub fn t0_witness(&self) -> Option<[String; 2]> {
        let m = self.elements.len();
        (0..m)
            .flat_map(|x| ((x + 1)..m).map(move |y| (x, y)))
            .find(|&(x, y)| self.in_neighborhood(x, y) && self.in_neighborhood(y, x))
            .map(|(x, y)| self.pair(x, y))
    }

    /// First ordered pair `(x, y)` such that every open set containing `x`
    /// also contains `y`.
    pub fn t1_witness(&self) -> Option<[String; 2]> {
        let m = self.elements.len();
        (0..m)
            .flat_map(|x| (0..m).map(move |y| (x, y)))
            .find(|&(x, y)| x != y && self.in_neighborhood(x, y))
            .map(|(x, y)| self.pair(x, y))
    }

    /// First pair without disjoint neighborhoods.
    pub fn t2_witness(&self) -> Option<[String; 2]> {
        let m = self.elements.len();
        (0..m)
            .flat_map(|x| ((x + 1)..m).map(move |y| (x, y)))
            .find(|&(x, y)| self.neighborhoods[x] & self.neighborhoods[y] != 0)
            .map(|(x, y)| self.pair(x, y))
    }

    pub fn report(&self) -> TopologyReport {
        let t0_witness = self.t0_witness();
        let t1_witness = self.t1_witness();
        let t2_witness = self.t2_witness();
        TopologyReport {
            elements: self.elements.clone(),
            open_sets: self
                .open_sets()
                .into_iter()
                .map(|s| self.labels(s))
                .collect(),
            t0: t0_witness.is_none(),
            t1: t1_witness.is_none(),
            t2: t2_witness.is_none(),
            t0_witness,
            t1_witness,
            t2_witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopologyReport {
    pub elements: Vec<String>,
    pub open_sets: Vec<Vec<String>>,
    pub t0: bool,
    pub t1: bool,
    pub t2: bool,
    pub t0_witness: Option<[String; 2]>,
    pub t1_witness: Option<[String; 2]>,
    pub t2_witness: Option<[String; 2]>,
}

/// Open sets and separation verdicts of the ball topology.
///
/// ```
/// use genmetric::spaces::{build_space, CatalogName, CatalogSpec};
/// use genmetric::topology::generate_topology;
///
/// let s = build_space(&CatalogSpec::new(CatalogName::AugmentedRealLine, vec![0.0])).unwrap();
/// let report = generate_topology(&s).unwrap();
/// assert_eq!(report.open_sets.len(), 3);
/// assert!(report.t0 && !report.t1);
/// assert_eq!(report.t1_witness, Some(["@a".to_string(), "0".to_string()]));
/// ```
pub fn generate_topology(space: &FiniteSpace) -> Result<TopologyReport> {
    Ok(Topology::of(space)?.report())
}

/// Labels of the closure of `subset`, in element order.
pub fn closure_of<S: AsRef<str>>(space: &FiniteSpace, subset: &[S]) -> Result<Vec<String>> {
    let topology = Topology::of(space)?;
    let set = mask_of(&space.indices_of(subset)?);
    Ok(topology.labels(topology.closure(set)))
}

/// Whether two spaces on the same elements generate the same topology. The
/// element lists may be ordered differently.
pub fn topologies_coincide(a: &FiniteSpace, b: &FiniteSpace) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::InvalidParameter(format!(
            "spaces have {} and {} elements",
            a.len(),
            b.len()
        )));
    }
    // position in b of each element of a
    let perm = b.indices_of(a.elements())?;
    let ta = Topology::of(a)?;
    let tb = Topology::of(b)?;
    Ok((0..a.len()).all(|x| {
        let mapped = indices(ta.neighborhood(x)).fold(0u32, |m, i| m | (1 << perm[i]));
        mapped == tb.neighborhood(perm[x])
    }))
}
