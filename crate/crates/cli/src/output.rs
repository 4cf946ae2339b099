//! Serialized results. Floats use the shortest round-trip decimal form, so
//! identical inputs give byte-identical files.

use std::fs;
use std::io::Write;
use std::path::Path;

use optiflow_core::Vec3;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::grid::GridDesc;
use crate::spec::FieldDto;
use crate::CliError;

pub const SINGULAR: &str = "singular";

/// One number, or the explicit marker for an undefined value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Value(f64),
    Singular,
}

impl Cell {
    pub fn from_result<E>(r: Result<f64, E>) -> Cell {
        r.map_or(Cell::Singular, Cell::Value)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            Cell::Value(v) if v.is_finite() => s.serialize_f64(v),
            _ => s.serialize_str(SINGULAR),
        }
    }
}

/// Vector cell written as `[x, y, z]` or as the singular marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VecCell(pub Option<Vec3>);

impl Serialize for VecCell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Some(v) if v.is_finite() => {
                let mut seq = s.serialize_seq(Some(3))?;
                for c in v.to_array() {
                    seq.serialize_element(&c)?;
                }
                seq.end()
            }
            _ => s.serialize_str(SINGULAR),
        }
    }
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum LayerValues {
    Scalar(Vec<Cell>),
    Vector(Vec<VecCell>),
    Label(Vec<&'static str>),
}

#[derive(Debug, Serialize)]
pub struct Layer {
    pub name: String,
    /// `scalar`, `vector` (cells are `[x, y, z]`) or `label`.
    pub kind: &'static str,
    pub values: LayerValues,
}

impl Layer {
    pub fn scalar(name: &str, values: Vec<Cell>) -> Self {
        Layer {
            name: name.into(),
            kind: "scalar",
            values: LayerValues::Scalar(values),
        }
    }

    pub fn vector(name: &str, values: Vec<VecCell>) -> Self {
        Layer {
            name: name.into(),
            kind: "vector",
            values: LayerValues::Vector(values),
        }
    }

    pub fn label(name: &str, values: Vec<&'static str>) -> Self {
        Layer {
            name: name.into(),
            kind: "label",
            values: LayerValues::Label(values),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command_line: Vec<String>,
    pub field: FieldDto,
}

impl Provenance {
    pub fn new(command_line: &[String], field: &FieldDto) -> Result<Self, CliError> {
        Ok(Provenance {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command_line: command_line.to_vec(),
            field: field.resolved()?,
        })
    }
}

/// Sampled layers on a plane grid.
#[derive(Debug, Serialize)]
pub struct GridResult<P: Serialize> {
    pub provenance: Provenance,
    pub grid: GridDesc,
    pub parameters: P,
    pub layers: Vec<Layer>,
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path.as_os_str() == "-" {
        let mut out = std::io::stdout().lock();
        return out.write_all(bytes).and_then(|()| out.flush()).map_err(io);
    }
    fs::write(path, bytes).map_err(io)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut bytes = serde_json::to_vec(value).map_err(|e| CliError::Runtime(format!("serializing output: {e}")))?;
    bytes.push(b'\n');
    write_bytes(path, &bytes)
}
