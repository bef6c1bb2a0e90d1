//! Instance files: JSON objects `{n, kind, generators, label?}`.
//!
//! Generator entries are integers or strings; strings may be `"p/q"`
//! rationals only for `kind = "weight"`. A file holds either one instance
//! object or an array of them.

use std::path::Path;

use lct_core::{parse_rational, ExponentVector, Kind, Rational, SingularityInput};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed instance file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("instance {label:?}: {message}")]
    Invalid { label: String, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub kind: String,
    pub generators: Vec<Vec<Coord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(InstanceFile),
    Many(Vec<InstanceFile>),
}

/// A parsed instance with a resolved label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub label: String,
    pub input: SingularityInput,
}

impl InstanceFile {
    pub fn to_input(&self) -> Result<SingularityInput, String> {
        let kind: Kind = self.kind.parse().map_err(|e| format!("{e}"))?;
        let mut gens = Vec::with_capacity(self.generators.len());
        for row in &self.generators {
            let coords = row
                .iter()
                .map(|c| match c {
                    Coord::Int(v) => Ok(Rational::from_integer((*v).into())),
                    Coord::Text(s) => {
                        if kind == Kind::Ideal && s.contains('/') {
                            return Err(format!("rational entry {s:?} in an ideal"));
                        }
                        parse_rational(s).map_err(|e| e.to_string())
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            gens.push(ExponentVector::new(coords));
        }
        SingularityInput::new(self.n, gens, kind).map_err(|e| e.to_string())
    }

    /// Canonical file form of an input: integers where possible, `"p/q"`
    /// strings otherwise.
    pub fn from_input(input: &SingularityInput, label: Option<String>) -> Self {
        let generators = input
            .generators()
            .iter()
            .map(|g| {
                g.coords()
                    .iter()
                    .map(|c| match (c.is_integer(), num_traits::ToPrimitive::to_i64(&c.to_integer())) {
                        (true, Some(v)) => Coord::Int(v),
                        _ => Coord::Text(c.to_string()),
                    })
                    .collect()
            })
            .collect();
        InstanceFile {
            n: input.n(),
            kind: input.kind().as_str().to_string(),
            generators,
            label,
        }
    }
}

/// Parses file contents; unlabeled instances get `default_label`, suffixed
/// with their position when the file holds several.
pub fn parse_instances(text: &str, default_label: &str) -> Result<Vec<Instance>, ParseError> {
    let files = match serde_json::from_str::<OneOrMany>(text)? {
        OneOrMany::One(f) => vec![f],
        OneOrMany::Many(v) => v,
    };
    let many = files.len() > 1;
    files
        .into_iter()
        .enumerate()
        .map(|(i, f)| {
            let label = f.label.clone().unwrap_or_else(|| {
                if many {
                    format!("{default_label}#{i}")
                } else {
                    default_label.to_string()
                }
            });
            let input = f.to_input().map_err(|message| ParseError::Invalid {
                label: label.clone(),
                message,
            })?;
            Ok(Instance { label, input })
        })
        .collect()
}

pub fn load(path: &Path) -> Result<Vec<Instance>, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".to_string());
    parse_instances(&text, &stem)
}
