//! Grid-sampled layers: `fieldmap`, `stokes` and `force`.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use optiflow_core::anomaly::classify_anomalies;
use optiflow_core::forces::{force_from_sample, normalized_forces, Polarizability};
use optiflow_core::grid::PlaneGrid;
use optiflow_core::observables::{local_momentum, poynting_from_sample, AmplitudeFloor, ComplexMomentum};
use optiflow_core::weakmeasure::{apply_calcite, exact_stokes, momentum_from_stokes, CalciteSpec, StokesVector};
use optiflow_core::{Complex64, Field, FieldSample, FieldSpec, Vec3};
use rayon::prelude::*;
use serde::Serialize;

use crate::anomaly::{bound_model, BoundDesc, BoundKind};
use crate::grid::{parse_grid, GridDesc};
use crate::output::{write_json, Cell, GridResult, Layer, Provenance, VecCell};
use crate::spec::FieldDto;
use crate::{CliError, FieldArgs, Pol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LayerName {
    #[value(name = "amp")]
    Amp,
    #[value(name = "phase")]
    Phase,
    #[value(name = "re_px")]
    RePx,
    #[value(name = "re_pz")]
    RePz,
    #[value(name = "im_px")]
    ImPx,
    #[value(name = "im_pz")]
    ImPz,
    #[value(name = "S1")]
    S1,
    #[value(name = "S2")]
    S2,
    #[value(name = "S3")]
    S3,
    #[value(name = "W")]
    W,
    #[value(name = "P_O")]
    PO,
    #[value(name = "P_S")]
    PS,
    #[value(name = "label")]
    Label,
}

impl LayerName {
    fn name(self) -> &'static str {
        match self {
            LayerName::Amp => "amp",
            LayerName::Phase => "phase",
            LayerName::RePx => "re_px",
            LayerName::RePz => "re_pz",
            LayerName::ImPx => "im_px",
            LayerName::ImPz => "im_pz",
            LayerName::S1 => "S1",
            LayerName::S2 => "S2",
            LayerName::S3 => "S3",
            LayerName::W => "W",
            LayerName::PO => "P_O",
            LayerName::PS => "P_S",
            LayerName::Label => "label",
        }
    }
}

#[derive(Debug, Args)]
pub struct FieldmapArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Plane grid, e.g. x:-4:4:400,z:0:3000:600 (optionally ,y=<fixed>).
    #[arg(long)]
    pub grid: String,
    /// Comma-separated layer names.
    #[arg(long, value_delimiter = ',', default_value = "amp,phase")]
    pub layers: Vec<LayerName>,
    /// Input polarization for S1..S3, W, P_O and P_S.
    #[arg(long, value_enum, default_value = "diagonal")]
    pub pol: Pol,
    /// Calcite shift in mm for the S1..S3 layers.
    #[arg(long, default_value_t = 1e-4, allow_negative_numbers = true)]
    pub delta_x: f64,
    /// Spectral bound for the label layer (default: piecewise for interface fields).
    #[arg(long, value_enum)]
    pub bound: Option<BoundKind>,
    /// Relative slack on the superluminal threshold.
    #[arg(long, default_value_t = 0.0)]
    pub slack: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct StokesArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub grid: String,
    #[arg(long, value_enum, default_value = "diagonal")]
    pub pol: Pol,
    /// Calcite shift in mm; must be nonzero for the readout.
    #[arg(long, default_value_t = 1e-4, allow_negative_numbers = true)]
    pub delta_x: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ForceArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub grid: String,
    #[arg(long, value_enum, default_value = "diagonal")]
    pub pol: Pol,
    /// Complex polarizability as `re,im`.
    #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
    pub chi: String,
    #[arg(long)]
    pub out: PathBuf,
}

/// Field samples on every grid node plus the grid-relative singularity floor.
struct Sampled {
    field: FieldSpec,
    grid: PlaneGrid,
    points: Vec<Vec3>,
    samples: Vec<FieldSample>,
    floor: AmplitudeFloor,
}

impl Sampled {
    fn new(dto: &FieldDto, grid: &str) -> Result<Self, CliError> {
        let field = dto.build()?;
        let grid = parse_grid(grid)?;
        let points: Vec<Vec3> = grid.points().collect();
        let samples: Vec<FieldSample> = points.par_iter().map(|&p| field.sample(p)).collect();
        let a_max = samples.iter().map(|s| s.amplitude).fold(0.0_f64, f64::max);
        Ok(Sampled {
            field,
            grid,
            points,
            samples,
            floor: AmplitudeFloor::relative_to(a_max),
        })
    }

    fn momenta(&self) -> Vec<Option<ComplexMomentum>> {
        self.samples.iter().map(|s| local_momentum(s, self.floor).ok()).collect()
    }

    fn stokes(&self, cal: &CalciteSpec) -> Vec<Option<StokesVector>> {
        self.points
            .par_iter()
            .map(|&p| {
                let e = apply_calcite(&self.field, cal, p).ok()?;
                exact_stokes(e.ex, e.ey).ok()
            })
            .collect()
    }

    fn scalar(&self, name: &str, f: impl Fn(usize) -> Cell) -> Layer {
        Layer::scalar(name, (0..self.points.len()).map(f).collect())
    }
}

fn momentum_cell(m: &Option<ComplexMomentum>, pick: impl Fn(&ComplexMomentum) -> f64) -> Cell {
    m.as_ref().map_or(Cell::Singular, |m| Cell::Value(pick(m)))
}

fn stokes_cell(s: &Option<StokesVector>, pick: impl Fn(&StokesVector) -> f64) -> Cell {
    s.as_ref().map_or(Cell::Singular, |s| Cell::Value(pick(s)))
}

#[derive(Debug, Serialize)]
struct FieldmapParameters {
    polarization: &'static str,
    delta_x_mm: f64,
    bound: Option<BoundDesc>,
    amplitude_floor: f64,
}

pub fn fieldmap(args: &FieldmapArgs, command_line: &[String]) -> Result<(), CliError> {
    let dto = args.field.load()?;
    let s = Sampled::new(&dto, &args.grid)?;
    let pol = args.pol.state();
    let cal = CalciteSpec::with_polarization(args.delta_x, pol)?;
    let wants = |names: &[LayerName]| args.layers.iter().any(|l| names.contains(l));
    let momenta = if wants(&[LayerName::RePx, LayerName::RePz, LayerName::ImPx, LayerName::ImPz]) {
        s.momenta()
    } else {
        Vec::new()
    };
    let stokes = if wants(&[LayerName::S1, LayerName::S2, LayerName::S3]) {
        s.stokes(&cal)
    } else {
        Vec::new()
    };
    let bound = if wants(&[LayerName::Label]) {
        Some(bound_model(&s.field, args.bound, args.slack)?)
    } else {
        None
    };
    let wave = *s.field.wave();

    let mut layers = Vec::with_capacity(args.layers.len());
    for &name in &args.layers {
        let n = name.name();
        let layer = match name {
            LayerName::Amp => s.scalar(n, |i| Cell::Value(s.samples[i].amplitude)),
            LayerName::Phase => s.scalar(n, |i| {
                let sample = &s.samples[i];
                if s.floor.admits(sample.amplitude) {
                    Cell::Value(sample.phase)
                } else {
                    Cell::Singular
                }
            }),
            LayerName::RePx => s.scalar(n, |i| momentum_cell(&momenta[i], |m| m.re_p().x)),
            LayerName::RePz => s.scalar(n, |i| momentum_cell(&momenta[i], |m| m.re_p().z)),
            LayerName::ImPx => s.scalar(n, |i| momentum_cell(&momenta[i], |m| m.im_p().x)),
            LayerName::ImPz => s.scalar(n, |i| momentum_cell(&momenta[i], |m| m.im_p().z)),
            LayerName::S1 => s.scalar(n, |i| stokes_cell(&stokes[i], |v| v.s1)),
            LayerName::S2 => s.scalar(n, |i| stokes_cell(&stokes[i], |v| v.s2)),
            LayerName::S3 => s.scalar(n, |i| stokes_cell(&stokes[i], |v| v.s3)),
            LayerName::W => s.scalar(n, |i| Cell::Value(0.5 * s.samples[i].intensity() * pol.norm_sqr())),
            LayerName::PO | LayerName::PS => Layer::vector(
                n,
                s.samples
                    .iter()
                    .map(|sample| {
                        let d = poynting_from_sample(sample, &pol, &wave);
                        VecCell(Some(if name == LayerName::PO { d.orbital } else { d.spin }))
                    })
                    .collect(),
            ),
            LayerName::Label => {
                let map = classify_anomalies(&s.field, &s.grid, bound.expect("bound built for label layer"));
                Layer::label(n, map.labels.iter().map(|l| l.name()).collect())
            }
        };
        layers.push(layer);
    }

    let result = GridResult {
        provenance: Provenance::new(command_line, &dto)?,
        grid: GridDesc::of(&s.grid),
        parameters: FieldmapParameters {
            polarization: args.pol.name(),
            delta_x_mm: args.delta_x,
            bound: bound.map(BoundDesc::of),
            amplitude_floor: s.floor.value(),
        },
        layers,
    };
    write_json(&args.out, &result)
}

#[derive(Debug, Serialize)]
struct StokesParameters {
    polarization: &'static str,
    delta_x_mm: f64,
    /// The readout at a grid node refers to the midpoint `x - Δx/2` of the two displaced copies.
    readout_x_offset_mm: f64,
}

pub fn stokes(args: &StokesArgs, command_line: &[String]) -> Result<(), CliError> {
    let dto = args.field.load()?;
    let cal = CalciteSpec::with_polarization(args.delta_x, args.pol.state())?;
    // surface a zero shift before sampling anything
    momentum_from_stokes(&cal.input_stokes(), &cal)?;
    let s = Sampled::new(&dto, &args.grid)?;
    let stokes = s.stokes(&cal);
    let readout: Vec<Option<(f64, f64)>> = stokes
        .iter()
        .map(|v| v.as_ref().and_then(|v| momentum_from_stokes(v, &cal).ok()))
        .collect();
    let layers = vec![
        s.scalar("S1", |i| stokes_cell(&stokes[i], |v| v.s1)),
        s.scalar("S2", |i| stokes_cell(&stokes[i], |v| v.s2)),
        s.scalar("S3", |i| stokes_cell(&stokes[i], |v| v.s3)),
        s.scalar("readout_re_px", |i| readout[i].map_or(Cell::Singular, |r| Cell::Value(r.0))),
        s.scalar("readout_im_px", |i| readout[i].map_or(Cell::Singular, |r| Cell::Value(r.1))),
    ];
    let result = GridResult {
        provenance: Provenance::new(command_line, &dto)?,
        grid: GridDesc::of(&s.grid),
        parameters: StokesParameters {
            polarization: args.pol.name(),
            delta_x_mm: args.delta_x,
            readout_x_offset_mm: -0.5 * args.delta_x,
        },
        layers,
    };
    write_json(&args.out, &result)
}

fn parse_chi(text: &str) -> Result<Polarizability, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Invalid(format!("--chi `{text}` must look like re,im")))
    };
    let chi = match parts[..] {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(CliError::Invalid(format!("--chi `{text}` must look like re,im"))),
    };
    Ok(Polarizability::new(chi)?)
}

#[derive(Debug, Serialize)]
struct ForceParameters {
    polarization: &'static str,
    chi: [f64; 2],
    amplitude_floor: f64,
}

pub fn force(args: &ForceArgs, command_line: &[String]) -> Result<(), CliError> {
    let dto = args.field.load()?;
    let chi = parse_chi(&args.chi)?;
    let pol = args.pol.state();
    let s = Sampled::new(&dto, &args.grid)?;
    let forces: Vec<_> = s.samples.iter().map(|sample| force_from_sample(sample, &pol, &chi)).collect();
    let normalized: Vec<Option<(Vec3, Vec3)>> = forces
        .iter()
        .zip(&s.samples)
        .map(|(f, sample)| normalized_forces(f, 0.5 * sample.intensity() * pol.norm_sqr(), s.floor).ok())
        .collect();
    let layers = vec![
        Layer::vector("F_grad", forces.iter().map(|f| VecCell(Some(f.gradient))).collect()),
        Layer::vector("F_scat", forces.iter().map(|f| VecCell(Some(f.scattering))).collect()),
        Layer::vector("F_grad_over_W", normalized.iter().map(|n| VecCell(n.map(|n| n.0))).collect()),
        Layer::vector("F_scat_over_W", normalized.iter().map(|n| VecCell(n.map(|n| n.1))).collect()),
    ];
    let result = GridResult {
        provenance: Provenance::new(command_line, &dto)?,
        grid: GridDesc::of(&s.grid),
        parameters: ForceParameters {
            polarization: args.pol.name(),
            chi: [chi.chi.re, chi.chi.im],
            amplitude_floor: s.floor.value(),
        },
        layers,
    };
    write_json(&args.out, &result)
}
