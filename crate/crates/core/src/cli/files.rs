//! JSON file formats and deterministic serialization.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;
use serde_json::Value;
use thiserror::Error;

use crate::exact::{format_rational, parse_rational, ParseRationalError, Rational};
use crate::penner::{DecoratedSurface, PennerError};
use crate::surface::CombinatorialSurface;

pub const SCHEMA: &str = "hypfan/1";

#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field `{field}`: {msg}")]
    Field { field: String, msg: String },
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error(transparent)]
    Penner(#[from] PennerError),
}

/// Surface file: triangle count, glued half-edge pairs (edge `k` is the
/// `k`-th pair) and a λ-length per edge id as `"p/q"` strings.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SurfaceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub triangles: usize,
    pub pairing: Vec<[usize; 2]>,
    pub lambda: BTreeMap<String, String>,
}

impl SurfaceFile {
    pub fn parse(text: &str) -> Result<Self, FileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, FileError> {
        let p = path.as_ref();
        let text = std::fs::read_to_string(p).map_err(|source| FileError::Io { path: p.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn lambdas(&self) -> Result<Vec<Rational>, FileError> {
        let e = self.pairing.len();
        let mut out = vec![None; e];
        for (k, v) in &self.lambda {
            let idx: usize = k.parse().map_err(|_| FileError::Field {
                field: format!("lambda.{k}"),
                msg: "edge id is not an integer".into(),
            })?;
            if idx >= e {
                return Err(FileError::Field { field: format!("lambda.{k}"), msg: format!("edge id out of range 0..{e}") });
            }
            out[idx] = Some(parse_rational(v).map_err(|_| FileError::Field {
                field: format!("lambda.{k}"),
                msg: format!("cannot parse rational {v:?}"),
            })?);
        }
        out.into_iter()
            .enumerate()
            .map(|(i, x)| x.ok_or_else(|| FileError::Field { field: format!("lambda.{i}"), msg: "missing".into() }))
            .collect()
    }

    pub fn to_surface(&self) -> Result<DecoratedSurface, FileError> {
        let pairs: Vec<(usize, usize)> = self.pairing.iter().map(|p| (p[0], p[1])).collect();
        let s = CombinatorialSurface::new(self.triangles, &pairs).map_err(PennerError::from)?;
        Ok(DecoratedSurface::new(s, self.lambdas()?)?)
    }

    pub fn from_surface(d: &DecoratedSurface, name: Option<String>) -> Self {
        let s = d.surface();
        Self {
            name,
            triangles: s.num_triangles(),
            pairing: s.pairing().into_iter().map(|(a, b)| [a, b]).collect(),
            lambda: d.lambdas().iter().enumerate().map(|(i, l)| (i.to_string(), format_rational(l))).collect(),
        }
    }
}

pub fn load_surface(path: impl AsRef<Path>) -> Result<DecoratedSurface, FileError> {
    SurfaceFile::read(path)?.to_surface()
}

/// Writes floats with 17 significant digits.
struct FixedFloats;

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }
}

/// Deterministic JSON text: sorted keys, fixed float format, trailing newline.
pub fn to_json_string(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats);
    v.serialize(&mut ser).expect("in-memory serialization");
    let mut s = String::from_utf8(buf).expect("utf-8");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_have_seventeen_digits() {
        let s = to_json_string(&json!({"b": 0.1, "a": 1}));
        assert_eq!(s, "{\"a\":1,\"b\":1.0000000000000001e-1}\n");
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["b"].as_f64(), Some(0.1));
    }

    #[test]
    fn missing_lambda_names_field() {
        let f = SurfaceFile::parse(r#"{"triangles":2,"pairing":[[0,3],[1,4],[2,5]],"lambda":{"0":"1","1":"1"}}"#).unwrap();
        let err = f.to_surface().unwrap_err().to_string();
        assert!(err.contains("lambda.2"), "{err}");
    }
}
