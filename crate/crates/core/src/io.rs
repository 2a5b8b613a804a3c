//! JSON input and export.
//!
//! Group: `{"name": str, "order": n, "table": [[int]]}` or
//! `{"name": str, "degree": k, "generators": [[int]]}` with permutations as
//! image arrays. Extension: `{"G": g, "H": h, "Q": q, "iota": [int],
//! "pi": [int]}` where each group is inline or a path relative to the file.
//! Samples: `[[r, "p/q"], ...]`.
//!
//! Errors name the offending location as a JSON path such as `$.H.table[3]`.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::group::{
    build_extension, group_from_permutations, validate_group, Extension, FiniteGroup, GroupError,
    DEFAULT_ORDER_BOUND,
};
use crate::rcoeff::{RcoeffError, SampleSet};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{file}: {source}")]
    Json {
        file: String,
        source: serde_json::Error,
    },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: {source}")]
    Group { path: String, source: GroupError },
    #[error("{path}: {source}")]
    Samples { path: String, source: RcoeffError },
}

fn schema(path: &str, message: impl Into<String>) -> InputError {
    InputError::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

fn read_json(file: &Path) -> Result<Value, InputError> {
    let text = fs::read_to_string(file).map_err(|source| InputError::Io {
        path: file.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| InputError::Json {
        file: file.display().to_string(),
        source,
    })
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, InputError> {
    v.as_object()
        .ok_or_else(|| schema(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, InputError> {
    obj.get(key)
        .ok_or_else(|| schema(path, format!("missing field \"{key}\"")))
}

fn uint(v: &Value, path: &str) -> Result<usize, InputError> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn uint_array(v: &Value, path: &str) -> Result<Vec<usize>, InputError> {
    let items = v
        .as_array()
        .ok_or_else(|| schema(path, "expected an array"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| uint(x, &format!("{path}[{i}]")))
        .collect()
}

fn uint_matrix(v: &Value, path: &str) -> Result<Vec<Vec<usize>>, InputError> {
    let rows = v
        .as_array()
        .ok_or_else(|| schema(path, "expected an array of arrays"))?;
    rows.iter()
        .enumerate()
        .map(|(i, row)| uint_array(row, &format!("{path}[{i}]")))
        .collect()
}

/// Parses a group object; `path` is its location in the document.
pub fn parse_group(v: &Value, path: &str) -> Result<FiniteGroup, InputError> {
    let obj = object(v, path)?;
    let name = field(obj, "name", path)?
        .as_str()
        .ok_or_else(|| schema(&format!("{path}.name"), "expected a string"))?;
    let group_err = |source| InputError::Group {
        path: path.to_string(),
        source,
    };
    match (obj.get("table"), obj.get("generators")) {
        (Some(table), None) => {
            let order = uint(field(obj, "order", path)?, &format!("{path}.order"))?;
            let table = uint_matrix(table, &format!("{path}.table"))?;
            validate_group(name, order, &table).map_err(|e| match e {
                GroupError::EntryOutOfRange { row, col, .. } => InputError::Group {
                    path: format!("{path}.table[{row}][{col}]"),
                    source: e,
                },
                e => group_err(e),
            })
        }
        (None, Some(gens)) => {
            let degree = uint(field(obj, "degree", path)?, &format!("{path}.degree"))?;
            let gens = uint_matrix(gens, &format!("{path}.generators"))?;
            group_from_permutations(name, degree, &gens, DEFAULT_ORDER_BOUND).map_err(|e| match e {
                GroupError::InvalidPermutation { index, .. } => InputError::Group {
                    path: format!("{path}.generators[{index}]"),
                    source: e,
                },
                e => group_err(e),
            })
        }
        (Some(_), Some(_)) => Err(schema(
            path,
            "give either \"table\" or \"generators\", not both",
        )),
        (None, None) => Err(schema(path, "missing field \"table\" or \"generators\"")),
    }
}

fn group_or_path(v: &Value, path: &str, base: &Path) -> Result<FiniteGroup, InputError> {
    match v.as_str() {
        Some(rel) => load_group(&base.join(rel)),
        None => parse_group(v, path),
    }
}

/// Parses an extension object; relative group paths resolve against `base`.
pub fn parse_extension(v: &Value, base: &Path) -> Result<Extension, InputError> {
    let obj = object(v, "$")?;
    let g = group_or_path(field(obj, "G", "$")?, "$.G", base)?;
    let h = group_or_path(field(obj, "H", "$")?, "$.H", base)?;
    let q = group_or_path(field(obj, "Q", "$")?, "$.Q", base)?;
    let iota = uint_array(field(obj, "iota", "$")?, "$.iota")?;
    let pi = uint_array(field(obj, "pi", "$")?, "$.pi")?;
    build_extension(g, h, q, iota, pi).map_err(|source| {
        let path = match &source {
            GroupError::MapLength { name, .. } | GroupError::MapOutOfRange { name, .. } => {
                format!("$.{name}")
            }
            _ => "$".to_string(),
        };
        InputError::Group { path, source }
    })
}

fn parse_rational(v: &Value, path: &str) -> Result<BigRational, InputError> {
    if let Some(n) = v.as_i64() {
        return Ok(BigRational::from_integer(BigInt::from(n)));
    }
    let s = v
        .as_str()
        .ok_or_else(|| schema(path, "expected an integer or a \"p/q\" string"))?;
    s.trim()
        .parse::<BigRational>()
        .map_err(|_| schema(path, format!("cannot parse \"{s}\" as a rational")))
}

pub fn parse_samples(v: &Value) -> Result<SampleSet, InputError> {
    let items = v
        .as_array()
        .ok_or_else(|| schema("$", "expected an array of [r, value] pairs"))?;
    let mut samples = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let path = format!("$[{i}]");
        let pair = item
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| schema(&path, "expected [r, value]"))?;
        let r = pair[0]
            .as_u64()
            .filter(|&r| r > 0)
            .ok_or_else(|| schema(&format!("{path}[0]"), "expected a positive integer"))?;
        samples.push((r, parse_rational(&pair[1], &format!("{path}[1]"))?));
    }
    SampleSet::new(samples).map_err(|source| InputError::Samples {
        path: "$".into(),
        source,
    })
}

pub fn load_group(file: &Path) -> Result<FiniteGroup, InputError> {
    parse_group(&read_json(file)?, "$")
}

pub fn load_extension(file: &Path) -> Result<Extension, InputError> {
    let base = file.parent().map_or_else(PathBuf::new, Path::to_path_buf);
    parse_extension(&read_json(file)?, &base)
}

pub fn load_samples(file: &Path) -> Result<SampleSet, InputError> {
    parse_samples(&read_json(file)?)
}

pub fn group_to_json(g: &FiniteGroup) -> Value {
    json!({ "name": g.name(), "order": g.order(), "table": g.rows() })
}

pub fn extension_to_json(ext: &Extension) -> Value {
    json!({
        "G": group_to_json(ext.g()),
        "H": group_to_json(ext.h()),
        "Q": group_to_json(ext.q()),
        "iota": ext.iota().map(),
        "pi": ext.pi().map(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::bundled_library;

    #[test]
    fn extensions_round_trip() {
        for entry in bundled_library() {
            let v = extension_to_json(&entry.extension);
            let back = parse_extension(&v, Path::new(".")).unwrap();
            assert_eq!(back.h().rows(), entry.extension.h().rows());
            assert_eq!(back.pi().map(), entry.extension.pi().map());
        }
    }

    #[test]
    fn generators_build_s3() {
        let v = json!({"name": "S3", "degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]});
        assert_eq!(parse_group(&v, "$").unwrap().order(), 6);
    }

    #[test]
    fn errors_carry_json_paths() {
        let v = json!({"name": "bad", "order": 2, "table": [[0, 1], [1, 5]]});
        assert_eq!(
            parse_group(&v, "$.H")
                .unwrap_err()
                .to_string()
                .split(':')
                .next(),
            Some("$.H.table[1][1]")
        );

        let v = json!({"name": "bad", "order": 2, "table": [[0, 1], [1, "x"]]});
        assert!(parse_group(&v, "$")
            .unwrap_err()
            .to_string()
            .starts_with("$.table[1][1]"));

        let v = json!({"name": "bad", "order": 2, "table": [[0, 1], [1, 1]]});
        let e = parse_group(&v, "$").unwrap_err();
        assert!(matches!(
            e,
            InputError::Group {
                source: GroupError::NotLatinSquare { .. },
                ..
            }
        ));

        let v = json!({"order": 1, "table": [[0]]});
        assert!(parse_group(&v, "$.G")
            .unwrap_err()
            .to_string()
            .contains("missing field \"name\""));

        let v = json!({"name": "bad", "degree": 3, "generators": [[0, 0, 1]]});
        assert!(parse_group(&v, "$")
            .unwrap_err()
            .to_string()
            .starts_with("$.generators[0]"));
    }

    #[test]
    fn sample_parsing() {
        let s = parse_samples(&json!([[1, "1/2"], [2, 3], [3, "-7/4"]])).unwrap();
        assert_eq!(s.samples()[0].1, BigRational::new(1.into(), 2.into()));
        assert!(parse_samples(&json!([[0, "1"]]))
            .unwrap_err()
            .to_string()
            .starts_with("$[0][0]"));
        assert!(parse_samples(&json!([[1, "a/b"]]))
            .unwrap_err()
            .to_string()
            .starts_with("$[0][1]"));
        assert!(matches!(
            parse_samples(&json!([[1, 1], [1, 2]])),
            Err(InputError::Samples {
                source: RcoeffError::DuplicateR(1),
                ..
            })
        ));
    }
}
