//! On-disk JSON formats for channels and queries. Loading validates
//! eagerly and reports the offending field as a JSON pointer; saving
//! emits canonical form (sorted keys, 17-significant-digit floats), so
//! saving a loaded canonical file reproduces it byte for byte.

use std::fs;
use std::path::Path;

use privchan_core::{
    validate_channel, ChannelMatrix, DistortionTable, QueryTable, RecordUniverse,
    StochasticMatrix,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::json::canonical_json;

/// Channel file: `matrix[y][x]` is p(y | x) with `x` the joint dataset
/// index over `universes` (coordinate 0 fastest). `name` and `unit` are
/// free-form metadata and survive a load/save round trip.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub matrix: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub output_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub universes: Vec<usize>,
}

/// Query file: `table[x]` is the exact answer for joint dataset `x`;
/// `distortion` (output-by-output costs) feeds the exponential mechanism
/// and `values` (one real per joint dataset) feeds the Gaussian one.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distortion: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub output_size: usize,
    pub table: Vec<usize>,
    pub universes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

/// A query file after validation: the table as a domain value plus the
/// optional mechanism inputs it carried and the raw file for re-saving.
#[derive(Debug)]
pub struct LoadedQuery {
    pub query: QueryTable,
    pub distortion: Option<DistortionTable>,
    pub values: Option<Vec<f64>>,
    pub file: QueryFile,
}

fn invalid(path: &Path, pointer: &str, message: impl AsRef<str>) -> CliError {
    CliError::Validation(format!(
        "{}: {pointer}: {}",
        path.display(),
        message.as_ref()
    ))
}

fn read_and_decode<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let mut de = serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(&mut de)
        .map_err(|e| invalid(path, &json_pointer(e.path()), e.inner().to_string()))
}

/// RFC 6901-style pointer for the field a decode error stopped at.
fn json_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for segment in path.iter() {
        match segment {
            Segment::Seq { index } => {
                out.push('/');
                out.push_str(&index.to_string());
            }
            Segment::Map { key } => {
                out.push('/');
                out.push_str(key);
            }
            Segment::Enum { variant } => {
                out.push('/');
                out.push_str(variant);
            }
            Segment::Unknown => out.push_str("/?"),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

/// Shared checks for the `universes` array; returns the joint total.
fn checked_universe(path: &Path, universes: &[usize]) -> Result<usize> {
    if universes.is_empty() {
        return Err(invalid(
            path,
            "/universes",
            "at least one individual is required",
        ));
    }
    let mut total: usize = 1;
    for (i, &size) in universes.iter().enumerate() {
        if size == 0 {
            return Err(invalid(
                path,
                &format!("/universes/{i}"),
                "universe size must be at least 1",
            ));
        }
        total = total.checked_mul(size).ok_or_else(|| {
            invalid(path, "/universes", "joint universe overflows the machine word")
        })?;
    }
    Ok(total)
}

pub fn load_channel(path: &Path) -> Result<(ChannelMatrix, ChannelFile)> {
    let file: ChannelFile = read_and_decode(path)?;
    let total = checked_universe(path, &file.universes)?;
    if file.output_size == 0 {
        return Err(invalid(path, "/output_size", "at least one output is required"));
    }
    if file.matrix.len() != file.output_size {
        return Err(invalid(
            path,
            "/matrix",
            format!(
                "{} rows for output_size {}",
                file.matrix.len(),
                file.output_size
            ),
        ));
    }
    for (y, row) in file.matrix.iter().enumerate() {
        if row.len() != total {
            return Err(invalid(
                path,
                &format!("/matrix/{y}"),
                format!("row has {} entries, expected {total} joint datasets", row.len()),
            ));
        }
        for (x, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(invalid(
                    path,
                    &format!("/matrix/{y}/{x}"),
                    format!("entry {v} is not finite"),
                ));
            }
        }
    }
    let columns: Vec<Vec<f64>> = (0..total)
        .map(|x| file.matrix.iter().map(|row| row[x]).collect())
        .collect();
    let universe = RecordUniverse::new(file.universes.clone())
        .map_err(|e| invalid(path, "/universes", e.to_string()))?;
    let matrix = StochasticMatrix::from_columns(&columns)
        .map_err(|e| invalid(path, "/matrix", e.to_string()))?;
    let channel = ChannelMatrix::new(universe, matrix)
        .map_err(|e| invalid(path, "/matrix", e.to_string()))?;
    validate_channel(&channel).map_err(|e| invalid(path, "/matrix", e.to_string()))?;
    Ok((channel, file))
}

pub fn load_query(path: &Path) -> Result<LoadedQuery> {
    let file: QueryFile = read_and_decode(path)?;
    let total = checked_universe(path, &file.universes)?;
    if file.output_size == 0 {
        return Err(invalid(path, "/output_size", "at least one output is required"));
    }
    if file.table.len() != total {
        return Err(invalid(
            path,
            "/table",
            format!(
                "table has {} entries, expected {total} joint datasets",
                file.table.len()
            ),
        ));
    }
    for (x, &y) in file.table.iter().enumerate() {
        if y >= file.output_size {
            return Err(invalid(
                path,
                &format!("/table/{x}"),
                format!("output {y} out of range (output_size = {})", file.output_size),
            ));
        }
    }
    let distortion = match &file.distortion {
        None => None,
        Some(rows) => {
            let k = file.output_size;
            if rows.len() != k {
                return Err(invalid(
                    path,
                    "/distortion",
                    format!("{} rows for output_size {k}", rows.len()),
                ));
            }
            for (j, row) in rows.iter().enumerate() {
                if row.len() != k {
                    return Err(invalid(
                        path,
                        &format!("/distortion/{j}"),
                        format!("row has {} entries, expected {k}", row.len()),
                    ));
                }
            }
            Some(
                DistortionTable::new(rows.clone())
                    .map_err(|e| invalid(path, "/distortion", e.to_string()))?,
            )
        }
    };
    let values = match &file.values {
        None => None,
        Some(vals) => {
            if vals.len() != total {
                return Err(invalid(
                    path,
                    "/values",
                    format!("{} values, expected {total} joint datasets", vals.len()),
                ));
            }
            for (x, &v) in vals.iter().enumerate() {
                if !v.is_finite() {
                    return Err(invalid(
                        path,
                        &format!("/values/{x}"),
                        format!("value {v} is not finite"),
                    ));
                }
            }
            Some(vals.clone())
        }
    };
    let universe = RecordUniverse::new(file.universes.clone())
        .map_err(|e| invalid(path, "/universes", e.to_string()))?;
    let query = QueryTable::new(universe, file.output_size, file.table.clone())
        .map_err(|e| invalid(path, "/table", e.to_string()))?;
    Ok(LoadedQuery {
        query,
        distortion,
        values,
        file,
    })
}

/// Channel file for a constructed channel, matrix in row-major order.
pub fn channel_to_file(channel: &ChannelMatrix) -> ChannelFile {
    let matrix = (0..channel.output_size())
        .map(|y| (0..channel.input_size()).map(|x| channel.entry(y, x)).collect())
        .collect();
    ChannelFile {
        matrix,
        name: None,
        output_size: channel.output_size(),
        unit: None,
        universes: channel.universe().sizes().to_vec(),
    }
}

/// Canonical bytes of a serializable file value, trailing newline included.
pub fn canonical_bytes<T: Serialize>(file: &T) -> String {
    let value = serde_json::to_value(file).expect("file structs always convert");
    let mut text = canonical_json(&value);
    text.push('\n');
    text
}

pub fn save<T: Serialize>(path: &Path, file: &T) -> Result<()> {
    fs::write(path, canonical_bytes(file))
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}
