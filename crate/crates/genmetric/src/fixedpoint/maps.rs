//! Built-in closed-form maps on the (augmented) real line, and table maps on
//! finite spaces.

use std::collections::HashMap;

use serde::Serialize;

use super::Map;
use crate::error::{Error, Result};
use crate::space::FiniteSpace;
use crate::spaces::{format_real, RealPoint, SENTINEL};

fn real(p: &RealPoint) -> std::result::Result<f64, String> {
    p.as_real()
        .ok_or_else(|| format!("not defined at {SENTINEL}"))
}

pub fn identity<P: Clone + 'static>() -> Map<P> {
    Map::total("identity", |p: &P| p.clone())
}

/// `x ↦ a x`.
pub fn linear(a: f64) -> Map<RealPoint> {
    Map::new(format!("linear({})", format_real(a)), move |p| {
        Ok(RealPoint::Real(a * real(p)?))
    })
}

/// `x ↦ a x + b`.
pub fn affine(a: f64, b: f64) -> Map<RealPoint> {
    Map::new(
        format!("affine({}, {})", format_real(a), format_real(b)),
        move |p| Ok(RealPoint::Real(a * real(p)? + b)),
    )
}

/// `x ↦ x / 2` for `x != 0` and `0 ↦ -1`: non-expansive for the max partial
/// metric but not weakly orbitally continuous at 1.
pub fn halve_zero_to_minus_one() -> Map<RealPoint> {
    Map::new("halve_zero_to_minus_one", |p| {
        let x = real(p)?;
        Ok(RealPoint::Real(if x == 0.0 { -1.0 } else { x / 2.0 }))
    })
}

/// The identity on the reals with `@a ↦ 1`: non-expansive on the augmented
/// real line without being continuous.
pub fn identity_sentinel_to_one() -> Map<RealPoint> {
    Map::total("identity_sentinel_to_one", |p: &RealPoint| match p {
        RealPoint::Real(x) => RealPoint::Real(*x),
        RealPoint::Sentinel => RealPoint::Real(1.0),
    })
}

/// `x ↦ x / 2` for real `x != 0`, `0 ↦ @a` and `@a ↦ 5`: weakly orbitally
/// continuous at 1 but not orbitally continuous.
pub fn halve_zero_to_sentinel() -> Map<RealPoint> {
    Map::total("halve_zero_to_sentinel", |p: &RealPoint| match p {
        RealPoint::Real(x) if *x == 0.0 => RealPoint::Sentinel,
        RealPoint::Real(x) => RealPoint::Real(x / 2.0),
        RealPoint::Sentinel => RealPoint::Real(5.0),
    })
}

/// A map on a finite space given by `(x, f(x))` label pairs. Elements
/// without an entry have no image.
pub fn table<S: AsRef<str>>(
    name: &str,
    space: &FiniteSpace,
    pairs: &[(S, S)],
) -> Result<Map<usize>> {
    table_between(name, space, space, pairs)
}

/// Like [`table`], with images taken in a second space.
pub fn table_between<S: AsRef<str>>(
    name: &str,
    domain: &FiniteSpace,
    codomain: &FiniteSpace,
    pairs: &[(S, S)],
) -> Result<Map<usize>> {
    let mut images = HashMap::with_capacity(pairs.len());
    for (x, y) in pairs {
        let xi = domain
            .index_of(x.as_ref())
            .ok_or_else(|| Error::UnknownElement(x.as_ref().to_string()))?;
        let yi = codomain
            .index_of(y.as_ref())
            .ok_or_else(|| Error::UnknownElement(y.as_ref().to_string()))?;
        if images.insert(xi, yi).is_some_and(|prev| prev != yi) {
            return Err(Error::InvalidParameter(format!(
                "map `{name}` gives `{}` two images",
                x.as_ref()
            )));
        }
    }
    let labels = domain.elements().to_vec();
    Ok(Map::new(name, move |x: &usize| {
        images
            .get(x)
            .copied()
            .ok_or_else(|| format!("no image for `{}`", labels[*x]))
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapEntry {
    pub name: &'static str,
    pub params: &'static str,
    pub description: &'static str,
}

const ENTRIES: [MapEntry; 6] = [
    MapEntry {
        name: "affine",
        params: "a b",
        description: "x -> a x + b",
    },
    MapEntry {
        name: "halve_zero_to_minus_one",
        params: "",
        description: "x -> x/2, 0 -> -1",
    },
    MapEntry {
        name: "halve_zero_to_sentinel",
        params: "",
        description: "x -> x/2, 0 -> @a, @a -> 5",
    },
    MapEntry {
        name: "identity",
        params: "",
        description: "x -> x",
    },
    MapEntry {
        name: "identity_sentinel_to_one",
        params: "",
        description: "x -> x, @a -> 1",
    },
    MapEntry {
        name: "linear",
        params: "a",
        description: "x -> a x",
    },
];

/// Sorted listing of the built-in real maps.
pub fn map_entries() -> Vec<MapEntry> {
    ENTRIES.to_vec()
}

/// A built-in real map by name.
pub fn by_name(name: &str, params: &[f64]) -> Result<Map<RealPoint>> {
    let arity_error = |want: usize| {
        Err(Error::InvalidParameter(format!(
            "map `{name}` takes {want} parameter(s), got {}",
            params.len()
        )))
    };
    match (name, params) {
        ("identity", []) => Ok(identity()),
        ("linear", [a]) => Ok(linear(*a)),
        ("affine", [a, b]) => Ok(affine(*a, *b)),
        ("halve_zero_to_minus_one", []) => Ok(halve_zero_to_minus_one()),
        ("identity_sentinel_to_one", []) => Ok(identity_sentinel_to_one()),
        ("halve_zero_to_sentinel", []) => Ok(halve_zero_to_sentinel()),
        (
            "identity"
            | "halve_zero_to_minus_one"
            | "identity_sentinel_to_one"
            | "halve_zero_to_sentinel",
            _,
        ) => arity_error(0),
        ("linear", _) => arity_error(1),
        ("affine", _) => arity_error(2),
        _ => Err(Error::InvalidParameter(format!("unknown map `{name}`"))),
    }
}
