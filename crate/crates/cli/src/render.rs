//! `render`: one layer of a grid result as a binary 8-bit PGM (P5).
//!
//! Image rows follow the grid's first axis (row 0 at its low end) and
//! columns its second axis. Values are min–max normalized onto 1..=255;
//! singular cells are 0 and a constant layer is uniform 128.

use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde_json::Value;

use crate::output::{write_bytes, SINGULAR};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ComponentArg {
    X,
    Y,
    Z,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Grid-result JSON written by fieldmap, stokes or force.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long)]
    pub layer: String,
    /// Component of a vector layer.
    #[arg(long, value_enum)]
    pub component: Option<ComponentArg>,
    #[arg(long)]
    pub out: PathBuf,
}

/// Gray levels of the label layer.
fn label_level(name: &str) -> Option<u8> {
    match name {
        SINGULAR => Some(0),
        "backflow" => Some(85),
        "normal" => Some(170),
        "superluminal" => Some(255),
        _ => None,
    }
}

/// Min–max map of the finite values; `None` cells become 0.
pub fn normalize(values: &[Option<f64>]) -> Vec<u8> {
    let (lo, hi) = values
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    values
        .iter()
        .map(|v| match *v {
            None => 0,
            Some(_) if hi <= lo => 128,
            Some(v) => (1.0 + 254.0 * ((v - lo) / (hi - lo))).round() as u8,
        })
        .collect()
}

pub fn pgm(width: usize, height: usize, pixels: &[u8]) -> Vec<u8> {
    debug_assert_eq!(pixels.len(), width * height);
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(pixels);
    out
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn scalar(v: &Value) -> Result<Option<f64>, CliError> {
    match v {
        Value::Number(n) => Ok(n.as_f64()),
        Value::String(s) if s == SINGULAR => Ok(None),
        _ => Err(invalid(format!("unexpected cell {v}"))),
    }
}

fn pixels(layer: &Value, component: Option<ComponentArg>) -> Result<Vec<u8>, CliError> {
    let name = layer["name"].as_str().unwrap_or("?");
    let values = layer["values"]
        .as_array()
        .ok_or_else(|| invalid(format!("layer `{name}` has no values")))?;
    match layer["kind"].as_str() {
        Some("scalar") => Ok(normalize(&values.iter().map(scalar).collect::<Result<Vec<_>, _>>()?)),
        Some("vector") => {
            let c = component.ok_or_else(|| {
                invalid(format!("layer `{name}` is a vector; choose --component x, y or z"))
            })? as usize;
            let cells = values
                .iter()
                .map(|v| match v {
                    Value::Array(xyz) if xyz.len() == 3 => scalar(&xyz[c]),
                    other => scalar(other),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(normalize(&cells))
        }
        Some("label") => values
            .iter()
            .map(|v| v.as_str().and_then(label_level).ok_or_else(|| invalid(format!("unexpected label {v}"))))
            .collect(),
        _ => Err(invalid(format!("layer `{name}` has an unknown kind"))),
    }
}

pub fn run(args: &RenderArgs) -> Result<(), CliError> {
    let path = args.input.display().to_string();
    let text = fs::read_to_string(&args.input).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| invalid(format!("{path}: {e}")))?;
    let count = |axis: &str| {
        doc["grid"][axis]["count"]
            .as_u64()
            .map(|c| c as usize)
            .ok_or_else(|| invalid(format!("{path}: not a grid result")))
    };
    let (height, width) = (count("first")?, count("second")?);
    let layer = doc["layers"]
        .as_array()
        .and_then(|ls| ls.iter().find(|l| l["name"] == args.layer.as_str()))
        .ok_or_else(|| invalid(format!("{path}: no layer named `{}`", args.layer)))?;
    let px = pixels(layer, args.component)?;
    if px.len() != width * height {
        return Err(invalid(format!("layer `{}` does not match the grid size", args.layer)));
    }
    write_bytes(&args.out, &pgm(width, height, &px))
}
