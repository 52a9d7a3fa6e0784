use std::fs;
use std::io::{self, Read};
use std::path::Path;

use equidissect::{AffineMap, Rational};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Exit status and JSON body of a failed command.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub body: Value,
}

impl Failure {
    pub fn new(code: u8, kind: &str, message: impl Into<String>, details: Value) -> Self {
        Failure {
            code,
            body: json!({
                "error": kind,
                "message": message.into(),
                "details": details,
                "traceRefs": [],
            }),
        }
    }

    /// Malformed input: exit status 2.
    pub fn malformed(message: impl Into<String>) -> Self {
        Failure::new(2, "ParseError", message, Value::Null)
    }

    /// A library precondition failed: exit status 1.
    pub fn precondition(err: &equidissect::Error) -> Self {
        use equidissect::Error::*;
        let (kind, details) = match err {
            Parse(_) => return Failure::malformed(err.to_string()),
            NotLattice { index } => ("NotLattice", json!({ "index": index })),
            NotACycle => ("NotACycle", Value::Null),
            NotInSubgroup(class) => ("NotInSubgroup", json!({ "class": class })),
            NotParallelogram => ("NotParallelogram", Value::Null),
            ZeroCoordinate => ("ZeroCoordinate", Value::Null),
            InvalidPolygon(_) => ("InvalidPolygon", Value::Null),
            InvalidMap(_) => ("InvalidMap", Value::Null),
            InvalidPermutation(_) => ("InvalidPermutation", Value::Null),
            IndexOutOfRange { index, len } => {
                ("IndexOutOfRange", json!({ "index": index, "len": len }))
            }
            ZeroProjectivePoint => ("ZeroProjectivePoint", Value::Null),
            InvalidSearch(_) => ("InvalidSearch", Value::Null),
        };
        Failure::new(1, kind, err.to_string(), details)
    }
}

pub type CliResult<T> = Result<T, Failure>;

/// Reads a file, or standard input for `-` or no path.
pub fn read_input(path: Option<&Path>) -> CliResult<String> {
    match path {
        Some(p) if p != Path::new("-") => fs::read_to_string(p)
            .map_err(|e| Failure::malformed(format!("cannot read {}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::malformed(format!("cannot read standard input: {e}")))?;
            Ok(s)
        }
    }
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| Failure::malformed(e.to_string()))
}

pub fn read_json<T: DeserializeOwned>(path: Option<&Path>) -> CliResult<T> {
    parse_json(&read_input(path)?)
}

/// `E`, `U`, `V`, or an inline JSON map `{"matrix": ..., "translation": ...}`.
pub fn parse_map(spec: &str) -> CliResult<AffineMap> {
    if let Some(map) = AffineMap::by_name(spec) {
        return Ok(map);
    }
    let raw: RawMap = parse_json(spec)?;
    AffineMap::new(raw.matrix, raw.translation).map_err(|e| Failure::precondition(&e))
}

/// An inline map before its determinant is checked.
#[derive(Deserialize)]
struct RawMap {
    matrix: [[Rational; 2]; 2],
    translation: [Rational; 2],
}

/// Adds `traceRefs` to a JSON object.
pub fn with_refs<T: Serialize>(value: &T, refs: &[&str]) -> Value {
    let mut v = serde_json::to_value(value).expect("library types serialize");
    if let Value::Object(map) = &mut v {
        map.entry("traceRefs")
            .or_insert_with(|| json!(refs));
    }
    v
}

pub fn line(value: &Value) -> String {
    serde_json::to_string(value).expect("json values serialize")
}
