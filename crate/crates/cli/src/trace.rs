//! `trace`: streamlines of `Re p` or `Im p` written as CSV, one row per
//! accepted step.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use optiflow_core::observables::{local_momentum, AmplitudeFloor};
use optiflow_core::tracing::{trace_from, Component, DomainBox, Parameterization, TraceConfig, Trajectory};
use optiflow_core::{Error, Field, FieldSpec, Vec3};
use rayon::prelude::*;

use crate::grid::parse_domain;
use crate::output::{write_bytes, SINGULAR};
use crate::{CliError, FieldArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Motion confined to the x–z plane.
    #[value(name = "2d")]
    Planar,
    #[value(name = "3d")]
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Param {
    /// Parameter z, dx/dz = p_x/p_z.
    Paraxial,
    /// Parameter arc length, dr/ds = p/|p|.
    Arc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Re,
    Im,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// CSV of seed points, one per line as `x,z` or `x,y,z` (a header line is allowed).
    /// Defaults to 41 seeds across both lobes for the Gaussian pair.
    #[arg(long)]
    pub seeds: Option<PathBuf>,
    /// Default: 2d for y-invariant fields, 3d otherwise.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Default: paraxial for forward beams, arc for evanescent and interface fields.
    #[arg(long, value_enum)]
    pub param: Option<Param>,
    #[arg(long, value_enum, default_value = "re")]
    pub which: Which,
    /// Base step in mm.
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    /// Bounding box x:lo:hi,y:lo:hi,z:lo:hi in mm.
    #[arg(long)]
    pub domain: Option<String>,
    /// Momentum cutoff in units of k that triggers step halving.
    #[arg(long)]
    pub vortex_guard: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

/// Per-family defaults: the paraxial box is padded by half a step in `z`
/// so the last full step stays inside.
struct Defaults {
    param: Parameterization,
    domain: DomainBox,
    step: f64,
    max_steps: usize,
}

const PARAXIAL_STEPS: usize = 1000;
const ARC_STEPS: usize = 100_000;

fn defaults(field: &FieldSpec) -> Result<Defaults, CliError> {
    let lambda = field.wave().lambda();
    let paraxial = |half_x: f64, half_y: f64, z_len: f64| -> Result<Defaults, CliError> {
        let step = z_len / PARAXIAL_STEPS as f64;
        Ok(Defaults {
            param: Parameterization::ParaxialZ,
            domain: DomainBox::new(Vec3::new(-half_x, -half_y, 0.0), Vec3::new(half_x, half_y, z_len + 0.5 * step))?,
            step,
            max_steps: PARAXIAL_STEPS,
        })
    };
    let arc = |min: Vec3, max: Vec3| -> Result<Defaults, CliError> {
        Ok(Defaults {
            param: Parameterization::ArcLength,
            domain: DomainBox::new(min, max)?,
            step: lambda / 50.0,
            max_steps: ARC_STEPS,
        })
    };
    match field {
        FieldSpec::PlaneWave(p) if p.direction().z > 0.0 => paraxial(10.0 * lambda, 10.0 * lambda, 100.0 * lambda),
        FieldSpec::PlaneWave(_) => arc(Vec3::new(-10.0, -10.0, -10.0) * lambda, Vec3::new(10.0, 10.0, 10.0) * lambda),
        FieldSpec::GaussianPair(g) => {
            let half = g.half_separation() + 8.0 * g.waist();
            paraxial(half, half, 2.5 * g.rayleigh_range())
        }
        FieldSpec::Bessel(b) => paraxial(20.0 / b.k_perp(), 20.0 / b.k_perp(), 100.0 * lambda),
        FieldSpec::Evanescent(e) => arc(
            Vec3::new(0.0, -10.0 * lambda, -50.0 * lambda),
            Vec3::new(5.0 / e.kappa(), 10.0 * lambda, 50.0 * lambda),
        ),
        FieldSpec::TirTwoWave(_) => arc(Vec3::new(-2.0, -1.0, 0.0) * lambda, Vec3::new(2.0, 1.0, 4.0) * lambda),
    }
}

fn default_seeds(field: &FieldSpec) -> Result<Vec<Vec3>, CliError> {
    match field {
        FieldSpec::GaussianPair(g) => {
            let half = g.half_separation() + g.waist();
            Ok((0..41).map(|i| Vec3::xz(-half + 2.0 * half * f64::from(i) / 40.0, 0.0)).collect())
        }
        other => Err(CliError::Invalid(format!(
            "--seeds is required for the `{}` family",
            other.family()
        ))),
    }
}

pub fn parse_seeds(text: &str) -> Result<Vec<Vec3>, CliError> {
    let mut seeds = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let values: Result<Vec<f64>, _> = line.split(',').map(|f| f.trim().parse::<f64>()).collect();
        let seed = match values {
            Ok(v) if v.len() == 2 => Vec3::xz(v[0], v[1]),
            Ok(v) if v.len() == 3 => Vec3::new(v[0], v[1], v[2]),
            // a non-numeric first line is a header
            Err(_) if seeds.is_empty() && n == 0 => continue,
            _ => return Err(CliError::Invalid(format!("seeds line {}: expected `x,z` or `x,y,z`", n + 1))),
        };
        if !seed.is_finite() {
            return Err(CliError::Invalid(format!("seeds line {}: non-finite coordinate", n + 1)));
        }
        seeds.push(seed);
    }
    if seeds.is_empty() {
        return Err(CliError::Invalid("the seed file holds no points".into()));
    }
    Ok(seeds)
}

fn read_seeds(path: &Path) -> Result<Vec<Vec3>, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_seeds(&text)
}

fn num(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite floats serialize")
    } else {
        SINGULAR.to_owned()
    }
}

fn write_csv(field: &FieldSpec, cfg: &TraceConfig, which: Component, trajs: &[Trajectory]) -> String {
    let floor = cfg.amplitude_floor.unwrap_or_else(|| AmplitudeFloor::for_field(field));
    let mut out = String::from("traj_id,s_or_z,x,y,z,p_x,p_y,p_z,termination\n");
    for (id, t) in trajs.iter().enumerate() {
        for (i, pt) in t.points.iter().enumerate() {
            let p = local_momentum(&field.sample(pt.position), floor).ok().map(|m| match which {
                Component::Real => m.re_p(),
                Component::Imaginary => m.im_p(),
            });
            let [px, py, pz] = p.map_or([f64::NAN; 3], |p| p.to_array());
            let q = pt.position;
            let end = if i + 1 == t.points.len() { t.termination.name() } else { "" };
            out.push_str(&format!(
                "{id},{},{},{},{},{},{},{},{end}\n",
                num(pt.param),
                num(q.x),
                num(q.y),
                num(q.z),
                num(px),
                num(py),
                num(pz)
            ));
        }
    }
    out
}

pub fn run(args: &TraceArgs, _command_line: &[String]) -> Result<(), CliError> {
    let field = args.field.load()?.build()?;
    let d = defaults(&field)?;
    let seeds = match &args.seeds {
        Some(path) => read_seeds(path)?,
        None => default_seeds(&field)?,
    };
    let param = match args.param {
        Some(Param::Paraxial) => Parameterization::ParaxialZ,
        Some(Param::Arc) => Parameterization::ArcLength,
        None => d.param,
    };
    let domain = match &args.domain {
        Some(text) => parse_domain(text)?,
        None => d.domain,
    };
    let mut cfg = TraceConfig::new(
        seeds,
        param,
        args.step.unwrap_or(d.step),
        args.max_steps.unwrap_or(d.max_steps),
        domain,
    )?;
    cfg.planar = match args.mode {
        Some(m) => m == Mode::Planar,
        None => field.is_planar(),
    };
    if let Some(g) = args.vortex_guard {
        cfg.vortex_guard = g;
        cfg.validate()?;
    }
    let which = match args.which {
        Which::Re => Component::Real,
        Which::Im => Component::Imaginary,
    };
    let trajs: Vec<Trajectory> = cfg
        .seeds
        .par_iter()
        .enumerate()
        .map(|(i, &seed)| {
            trace_from(&field, &cfg, which, seed).map_err(|e| match e {
                Error::SingularSeed => CliError::Invalid(format!("seed {i} at {seed:?} is singular")),
                Error::InvalidParameter { name: "seed", .. } => {
                    CliError::Invalid(format!("seed {i} at {seed:?} lies outside the domain"))
                }
                other => other.into(),
            })
        })
        .collect::<Result<_, _>>()?;
    write_bytes(&args.out, write_csv(&field, &cfg, which, &trajs).as_bytes())
}
