//! `optiflow`: field maps, weak-measurement Stokes readout, streamlines,
//! anomaly maps, optical forces and PGM rendering for analytic optical fields.
//!
//! Exit codes: 0 on success, 2 on usage or validation errors, 1 on runtime
//! (I/O) errors.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use optiflow_core::observables::PolarizationState;

pub mod anomaly;
pub mod grid;
pub mod maps;
pub mod output;
pub mod render;
pub mod spec;
pub mod trace;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] optiflow_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Core(_) => 2,
            CliError::Io { .. } | CliError::Runtime(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "optiflow", version, about = "Local momentum, trajectories and anomalies of analytic optical fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample named layers (amplitude, momentum, Stokes, Poynting, labels) on a plane grid.
    Fieldmap(maps::FieldmapArgs),
    /// Weak-measurement Stokes maps and the momentum read out from them.
    Stokes(maps::StokesArgs),
    /// Trace streamlines of Re p or Im p from seed points.
    Trace(trace::TraceArgs),
    /// Detect vortices and label backflow / superluminal cells.
    Anomaly(anomaly::AnomalyArgs),
    /// Gradient and scattering forces on a dipole particle.
    Force(maps::ForceArgs),
    /// Render one layer of a grid result as an 8-bit PGM.
    Render(render::RenderArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Field-spec JSON file.
    #[arg(long, value_name = "FILE")]
    pub field: Option<PathBuf>,
    /// Inline field-spec JSON object; its keys override those of --field.
    #[arg(long, value_name = "JSON")]
    pub field_json: Option<String>,
}

impl FieldArgs {
    pub fn load(&self) -> Result<spec::FieldDto, CliError> {
        spec::load(self.field.as_deref(), self.field_json.as_deref())
    }
}

/// Uniform input polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pol {
    X,
    Y,
    Diagonal,
    SigmaPlus,
    SigmaMinus,
}

impl Pol {
    pub fn state(self) -> PolarizationState {
        match self {
            Pol::X => PolarizationState::linear_x(),
            Pol::Y => PolarizationState::linear_y(),
            Pol::Diagonal => PolarizationState::diagonal(),
            Pol::SigmaPlus => PolarizationState::circular(1.0),
            Pol::SigmaMinus => PolarizationState::circular(-1.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Pol::X => "x",
            Pol::Y => "y",
            Pol::Diagonal => "diagonal",
            Pol::SigmaPlus => "sigma-plus",
            Pol::SigmaMinus => "sigma-minus",
        }
    }
}

fn dispatch(command: Command, command_line: &[String]) -> Result<(), CliError> {
    match command {
        Command::Fieldmap(a) => maps::fieldmap(&a, command_line),
        Command::Stokes(a) => maps::stokes(&a, command_line),
        Command::Trace(a) => trace::run(&a, command_line),
        Command::Anomaly(a) => anomaly::run(&a, command_line),
        Command::Force(a) => maps::force(&a, command_line),
        Command::Render(a) => render::run(&a),
    }
}

/// Parse `args` (including the program name) and run one subcommand.
/// Diagnostics go to stderr; the return value is the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    // the program path is replaced so provenance does not depend on where the binary lives
    let command_line: Vec<String> = std::iter::once("optiflow".to_owned())
        .chain(args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()))
        .collect();
    match dispatch(cli.command, &command_line) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("optiflow: {e}");
            e.exit_code()
        }
    }
}
