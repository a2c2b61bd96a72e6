//! The JSON space file format.
//!
//! ```json
//! {"kind": "PartialMetric", "arity": 2, "elements": ["x", "y"],
//!  "values": [{"tuple": ["x", "x"], "value": 0}, ...]}
//! ```

use serde::{Deserialize, Serialize};

use super::{Family, FiniteSpace, MetricKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub kind: String,
    pub arity: usize,
    pub elements: Vec<String>,
    pub values: Vec<TupleValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleValue {
    pub tuple: Vec<String>,
    pub value: f64,
}

impl SpaceFile {
    pub fn into_space(self) -> Result<FiniteSpace> {
        let family = Family::parse(&self.kind)
            .ok_or_else(|| Error::InvalidKind(format!("unknown kind `{}`", self.kind)))?;
        let kind = MetricKind::new(family, self.arity)?;
        FiniteSpace::from_entries(
            self.elements,
            kind,
            self.values.into_iter().map(|tv| (tv.tuple, tv.value)),
        )
    }
}

impl FiniteSpace {
    pub fn to_file(&self) -> SpaceFile {
        SpaceFile {
            kind: self.kind().family().name().to_string(),
            arity: self.arity(),
            elements: self.elements().to_vec(),
            values: self
                .entries()
                .map(|(t, value)| TupleValue {
                    tuple: self.labels_of(&t),
                    value,
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpaceFile = serde_json::from_str(text)?;
        file.into_space()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("space files always serialize")
    }
}
