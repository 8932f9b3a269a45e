//! JSON graph files.
//!
//! ```json
//! {
//!   "vertices": ["a", "b", "c"],
//!   "edges": [
//!     {"from": "a", "to": "b", "length": 0.4},
//!     {"from": "b", "to": "c", "length": "random"}
//!   ],
//!   "lengths": {"mode": "random_uniform", "seed": 7, "min": 0.0, "max": 1.0}
//! }
//! ```
//!
//! `length` is a positive number or the string `"random"`; an omitted length
//! counts as `"random"`. `lengths.mode` is `"explicit"` (the default when the
//! block is absent) or `"random_uniform"`, which requires `seed`, `min` and
//! `max`. Unknown fields are rejected at every level.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{build_graph, EdgeLength, EdgeSpec, GraphSpec, LengthMode, MetricGraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lengths: Option<LengthsEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<LengthValue>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LengthValue {
    Number(f64),
    Keyword(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LengthsEntry {
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_spec(&self) -> Result<GraphSpec> {
        let length_mode = match &self.lengths {
            None => LengthMode::Explicit,
            Some(entry) => match entry.mode.as_str() {
                "explicit" => LengthMode::Explicit,
                "random_uniform" => match (entry.seed, entry.min, entry.max) {
                    (Some(seed), Some(min), Some(max)) => LengthMode::RandomUniform { seed, min, max },
                    _ => {
                        return Err(Error::LengthMode(
                            "random_uniform requires seed, min and max".into(),
                        ))
                    }
                },
                other => return Err(Error::LengthMode(format!("unknown mode {other:?}"))),
            },
        };
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let length = match &e.length {
                    None => EdgeLength::Random,
                    Some(LengthValue::Number(l)) => EdgeLength::Explicit(*l),
                    Some(LengthValue::Keyword(k)) if k == "random" => EdgeLength::Random,
                    Some(LengthValue::Keyword(k)) => {
                        return Err(Error::LengthMode(format!("unknown length keyword {k:?}")))
                    }
                };
                Ok(EdgeSpec {
                    from: e.from.clone(),
                    to: e.to.clone(),
                    length,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GraphSpec {
            vertex_labels: self.vertices.clone(),
            edges,
            length_mode,
        })
    }

    /// Explicit-length file describing `g`.
    pub fn from_graph(g: &MetricGraph) -> Self {
        let spec = g.to_spec();
        Self {
            vertices: spec.vertex_labels,
            edges: spec
                .edges
                .into_iter()
                .map(|e| EdgeEntry {
                    from: e.from,
                    to: e.to,
                    length: match e.length {
                        EdgeLength::Explicit(l) => Some(LengthValue::Number(l)),
                        EdgeLength::Random => None,
                    },
                })
                .collect(),
            lengths: None,
        }
    }
}

pub fn parse_graph(text: &str) -> Result<MetricGraph> {
    build_graph(&GraphFile::parse(text)?.to_spec()?)
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<MetricGraph> {
    parse_graph(&std::fs::read_to_string(path)?)
}
