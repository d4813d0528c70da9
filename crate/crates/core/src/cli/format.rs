//! On-disk formats.
//!
//! Matrix file (UTF-8 JSON):
//!
//! ```text
//! {"field":"Q"|{"GF":p},"rows":[ids],"cols":[ids],"entries":[[row,col,value],...]}
//! ```
//!
//! Values are strings in canonical field syntax (`-3/4`, `5`); bare JSON
//! integers are also accepted on input. Zero values and repeated
//! `(row, col)` keys are rejected. The canonical rendering is compact JSON
//! with entries in row-major declared order, followed by a newline.
//!
//! Matroid file: `{"kind":"vector","matrix":<matrix>}` (columns are the
//! elements), `{"kind":"uniform","rank":r,"ground":[ids]}` or
//! `{"kind":"family","ground":[ids],"independent":[[ids],...]}`.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::field::{FieldSpec, FieldValue};
use crate::linalg::SparseMatrix;
use crate::matroid::Matroid;

/// A parse or validation failure, with enough location to find it in the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn json_error(e: serde_json::Error) -> InputError {
    let (line, column) = (e.line(), e.column());
    let full = e.to_string();
    let message = full
        .strip_suffix(&format!(" at line {line} column {column}"))
        .unwrap_or(&full);
    InputError(format!("line {line} column {column}: {message}"))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum FieldJson {
    Name(String),
    Prime {
        #[serde(rename = "GF")]
        gf: u64,
    },
}

impl FieldJson {
    fn resolve(&self) -> Result<FieldSpec, InputError> {
        match self {
            FieldJson::Name(name) if name == "Q" => Ok(FieldSpec::Rationals),
            FieldJson::Name(name) => Err(InputError(format!("field: unknown field {name:?}"))),
            FieldJson::Prime { gf } => {
                FieldSpec::prime(*gf).map_err(|e| InputError(format!("field: {e}")))
            }
        }
    }

    fn from_spec(spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::Rationals => FieldJson::Name("Q".into()),
            FieldSpec::Prime(p) => FieldJson::Prime { gf: p.get().into() },
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ValueJson {
    Text(String),
    Int(i64),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    field: FieldJson,
    rows: Vec<String>,
    cols: Vec<String>,
    entries: Vec<(String, String, ValueJson)>,
}

impl MatrixJson {
    fn into_matrix(self, field_override: Option<FieldSpec>) -> Result<SparseMatrix, InputError> {
        let declared = self.field.resolve()?;
        let field = field_override.unwrap_or(declared);
        let mut entries = Vec::with_capacity(self.entries.len());
        for (k, (row, col, value)) in self.entries.into_iter().enumerate() {
            let v = match value {
                ValueJson::Text(text) => FieldValue::parse(field, &text),
                ValueJson::Int(n) => match field {
                    FieldSpec::Prime(p) if n < 0 || n >= i64::from(p.get()) => {
                        FieldValue::parse(field, &n.to_string())
                    }
                    _ => Ok(FieldValue::from_int(field, n)),
                },
            }
            .map_err(|e| InputError(format!("entries[{k}]: {e}")))?;
            entries.push((row, col, v));
        }
        // Validate entry-by-entry so the failing index can be named.
        let mut seen = std::collections::HashSet::with_capacity(entries.len());
        for (k, (row, col, v)) in entries.iter().enumerate() {
            if v.is_zero() {
                return Err(InputError(format!(
                    "entries[{k}]: explicit zero at ({row:?}, {col:?})"
                )));
            }
            if !seen.insert((row.as_str(), col.as_str())) {
                return Err(InputError(format!(
                    "entries[{k}]: duplicate entry ({row:?}, {col:?})"
                )));
            }
        }
        SparseMatrix::new(field, self.rows, self.cols, entries)
            .map_err(|e| InputError(e.to_string()))
    }

    fn from_matrix(m: &SparseMatrix) -> Self {
        MatrixJson {
            field: FieldJson::from_spec(m.field()),
            rows: m.row_ids().to_vec(),
            cols: m.col_ids().to_vec(),
            entries: m
                .entries()
                .map(|(r, c, v)| (r.to_string(), c.to_string(), ValueJson::Text(v.to_string())))
                .collect(),
        }
    }
}

pub fn parse_matrix(
    text: &str,
    field_override: Option<FieldSpec>,
) -> Result<SparseMatrix, InputError> {
    let raw: MatrixJson = serde_json::from_str(text).map_err(json_error)?;
    raw.into_matrix(field_override)
}

pub fn render_matrix(m: &SparseMatrix) -> String {
    let mut out = serde_json::to_string(&MatrixJson::from_matrix(m)).expect("plain data");
    out.push('\n');
    out
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum MatroidJson {
    Vector {
        matrix: MatrixJson,
    },
    Uniform {
        rank: usize,
        ground: Vec<String>,
    },
    Family {
        ground: Vec<String>,
        independent: Vec<Vec<String>>,
    },
}

/// A validated matroid description, kept so it can be rendered back.
#[derive(Debug, Clone)]
pub enum MatroidSpec {
    Vector(SparseMatrix),
    Uniform {
        rank: usize,
        ground: Vec<String>,
    },
    Family {
        ground: Vec<String>,
        independent: Vec<Vec<String>>,
    },
}

impl MatroidSpec {
    pub fn to_matroid(&self) -> Result<Matroid, InputError> {
        let built = match self {
            MatroidSpec::Vector(m) => Ok(Matroid::from_matrix(m.clone())),
            MatroidSpec::Uniform { rank, ground } => Matroid::uniform(*rank, ground.clone()),
            MatroidSpec::Family {
                ground,
                independent,
            } => Matroid::from_family(ground.clone(), independent),
        };
        built.map_err(|e| InputError(e.to_string()))
    }
}

pub fn parse_matroid(
    text: &str,
    field_override: Option<FieldSpec>,
) -> Result<MatroidSpec, InputError> {
    let raw: MatroidJson = serde_json::from_str(text).map_err(json_error)?;
    let spec = match raw {
        MatroidJson::Vector { matrix } => MatroidSpec::Vector(matrix.into_matrix(field_override)?),
        MatroidJson::Uniform { rank, ground } => MatroidSpec::Uniform { rank, ground },
        MatroidJson::Family {
            ground,
            independent,
        } => MatroidSpec::Family {
            ground,
            independent,
        },
    };
    spec.to_matroid()?;
    Ok(spec)
}

pub fn render_matroid(spec: &MatroidSpec) -> String {
    let raw = match spec {
        MatroidSpec::Vector(m) => MatroidJson::Vector {
            matrix: MatrixJson::from_matrix(m),
        },
        MatroidSpec::Uniform { rank, ground } => MatroidJson::Uniform {
            rank: *rank,
            ground: ground.clone(),
        },
        MatroidSpec::Family {
            ground,
            independent,
        } => MatroidJson::Family {
            ground: ground.clone(),
            independent: independent.clone(),
        },
    };
    let mut out = serde_json::to_string(&raw).expect("plain data");
    out.push('\n');
    out
}

/// A JSON array of element ids, as passed to `--b0`/`--b1`.
pub fn parse_id_list(text: &str) -> Result<Vec<String>, InputError> {
    serde_json::from_str(text).map_err(json_error)
}

/// An injection file: either a bare `{"source":"target",...}` object or a
/// `solve` result carrying one under `"map"`.
pub fn parse_injection(text: &str) -> Result<IndexMap<String, String>, InputError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum InjectionJson {
        Wrapped { map: IndexMap<String, String> },
        Bare(IndexMap<String, String>),
    }
    let raw: InjectionJson = serde_json::from_str(text).map_err(json_error)?;
    Ok(match raw {
        InjectionJson::Wrapped { map } => map,
        InjectionJson::Bare(map) => map,
    })
}
