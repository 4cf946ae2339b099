//! `anomaly`: vortex list, per-label cell counts and an optional label grid.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use optiflow_core::anomaly::{classify_anomalies, detect_vortices, BoundModel, BoundProfile, LabelCounts};
use optiflow_core::FieldSpec;
use serde::Serialize;

use crate::grid::{parse_grid, GridDesc};
use crate::output::{write_json, Provenance};
use crate::{CliError, FieldArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundKind {
    /// `k` everywhere.
    Free,
    /// `n k` in the glass (`x < 0`), `k` in air.
    Piecewise,
}

pub fn bound_model(field: &FieldSpec, kind: Option<BoundKind>, slack: f64) -> Result<BoundModel, CliError> {
    let index = field.interface_index();
    let model = match (kind, index) {
        (Some(BoundKind::Free), _) | (None, None) => BoundModel::free_space(),
        (Some(BoundKind::Piecewise) | None, Some(n)) => BoundModel::interface(n)?,
        (Some(BoundKind::Piecewise), None) => {
            return Err(CliError::Invalid(format!(
                "--bound piecewise needs an interface field, not `{}`",
                field.family()
            )))
        }
    };
    Ok(model.with_slack(slack)?)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundDesc {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<f64>,
    pub slack: f64,
}

impl BoundDesc {
    pub fn of(b: BoundModel) -> Self {
        let (kind, index) = match b.profile {
            BoundProfile::FreeSpace => ("free", None),
            BoundProfile::Interface { index } => ("piecewise", Some(index)),
        };
        BoundDesc {
            kind,
            index,
            slack: b.slack,
        }
    }
}

#[derive(Debug, Args)]
pub struct AnomalyArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Plane grid; spacing must be below λ/8 on both axes.
    #[arg(long)]
    pub grid: String,
    /// Spectral bound (default: piecewise for interface fields, free otherwise).
    #[arg(long, value_enum)]
    pub bound: Option<BoundKind>,
    /// Relative slack on the superluminal threshold.
    #[arg(long, default_value_t = 0.0)]
    pub slack: f64,
    /// Include the per-cell label grid.
    #[arg(long)]
    pub labels: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
struct VortexOut {
    x: f64,
    y: f64,
    z: f64,
    charge: i32,
}

#[derive(Debug, Serialize)]
struct Counts {
    normal: usize,
    backflow: usize,
    superluminal: usize,
    singular: usize,
    superoscillating: usize,
}

#[derive(Debug, Serialize)]
struct AnomalyResult {
    provenance: Provenance,
    grid: GridDesc,
    bound: BoundDesc,
    vortices: Vec<VortexOut>,
    counts: Counts,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<&'static str>>,
}

pub fn run(args: &AnomalyArgs, command_line: &[String]) -> Result<(), CliError> {
    let dto = args.field.load()?;
    let field = dto.build()?;
    let grid = parse_grid(&args.grid)?;
    let bound = bound_model(&field, args.bound, args.slack)?;
    let vortices = detect_vortices(&field, &grid)?;
    let map = classify_anomalies(&field, &grid, bound);
    let LabelCounts {
        normal,
        backflow,
        superluminal,
        singular,
    } = map.counts();
    let result = AnomalyResult {
        provenance: Provenance::new(command_line, &dto)?,
        grid: GridDesc::of(&grid),
        bound: BoundDesc::of(bound),
        vortices: vortices
            .iter()
            .map(|v| VortexOut {
                x: v.position.x,
                y: v.position.y,
                z: v.position.z,
                charge: v.charge,
            })
            .collect(),
        counts: Counts {
            normal,
            backflow,
            superluminal,
            singular,
            superoscillating: map.superoscillating.iter().filter(|&&s| s).count(),
        },
        labels: args.labels.then(|| map.labels.iter().map(|l| l.name()).collect()),
    };
    write_json(&args.out, &result)
}
