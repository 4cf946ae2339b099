//! Field-spec JSON: `{"family": ..., "lambda_mm": ..., <family keys>}`.

use std::fs;
use std::path::Path;

use optiflow_core::fields::{build_tir_field, BesselSpec, EvanescentSpec, GaussianPairSpec, PlaneWaveSpec, TirTwoWaveSpec};
use optiflow_core::{FieldSpec, Vec3, WaveParameters};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::CliError;

/// Wire form of a field. Parsing then serializing reproduces the input
/// object up to key order and float formatting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldDto {
    PlaneWave {
        lambda_mm: f64,
        direction: [f64; 3],
    },
    GaussianPair {
        lambda_mm: f64,
        w0_mm: f64,
        a_mm: f64,
    },
    Bessel {
        lambda_mm: f64,
        ell: i32,
        /// Transverse wavenumber in rad/mm.
        k_perp: f64,
    },
    Evanescent {
        lambda_mm: f64,
        /// Decay rate in rad/mm.
        kappa: f64,
    },
    /// Angles in radians from the interface normal. Omitted keys take the
    /// defaults of [`TirTwoWaveSpec::default_for`].
    TirTwoWave {
        lambda_mm: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta1: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta2: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        amp1: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        amp2: Option<f64>,
    },
}

impl FieldDto {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("field spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("field specs always serialize")
    }

    /// Same field with every optional key spelled out.
    pub fn resolved(&self) -> Result<Self, CliError> {
        match *self {
            FieldDto::TirTwoWave { lambda_mm, n, theta1, theta2, amp1, amp2 } => {
                let d = TirTwoWaveSpec::default_for(WaveParameters::new(lambda_mm)?);
                // the default angles are tied to the default index
                let n_val = n.unwrap_or(d.n);
                let critical = (1.0 / n_val).asin();
                Ok(FieldDto::TirTwoWave {
                    lambda_mm,
                    n: Some(n_val),
                    theta1: Some(theta1.unwrap_or(critical + 5.0_f64.to_radians())),
                    theta2: Some(theta2.unwrap_or(critical + 10.0_f64.to_radians())),
                    amp1: Some(amp1.unwrap_or(d.amp1)),
                    amp2: Some(amp2.unwrap_or(d.amp2)),
                })
            }
            ref other => Ok(other.clone()),
        }
    }

    pub fn build(&self) -> Result<FieldSpec, CliError> {
        let spec = match self.resolved()? {
            FieldDto::PlaneWave { lambda_mm, direction: [x, y, z] } => {
                FieldSpec::PlaneWave(PlaneWaveSpec::new(WaveParameters::new(lambda_mm)?, Vec3::new(x, y, z))?)
            }
            FieldDto::GaussianPair { lambda_mm, w0_mm, a_mm } => {
                FieldSpec::GaussianPair(GaussianPairSpec::new(WaveParameters::new(lambda_mm)?, w0_mm, a_mm)?)
            }
            FieldDto::Bessel { lambda_mm, ell, k_perp } => {
                FieldSpec::Bessel(BesselSpec::new(WaveParameters::new(lambda_mm)?, ell, k_perp)?)
            }
            FieldDto::Evanescent { lambda_mm, kappa } => {
                FieldSpec::Evanescent(EvanescentSpec::new(WaveParameters::new(lambda_mm)?, kappa)?)
            }
            FieldDto::TirTwoWave { lambda_mm, n, theta1, theta2, amp1, amp2 } => build_tir_field(TirTwoWaveSpec {
                wave: WaveParameters::new(lambda_mm)?,
                n: n.expect("resolved"),
                theta1: theta1.expect("resolved"),
                theta2: theta2.expect("resolved"),
                amp1: amp1.expect("resolved"),
                amp2: amp2.expect("resolved"),
            })?,
        };
        Ok(spec)
    }
}

fn parse_object(text: &str, origin: &str) -> Result<Map<String, Value>, CliError> {
    match serde_json::from_str::<Value>(text) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(CliError::Invalid(format!("{origin}: field spec must be a JSON object"))),
        Err(e) => Err(CliError::Invalid(format!("{origin}: {e}"))),
    }
}

/// Load a field from a file, an inline object, or both. Inline keys
/// override keys read from the file.
pub fn load(file: Option<&Path>, inline: Option<&str>) -> Result<FieldDto, CliError> {
    let mut merged = Map::new();
    if let Some(path) = file {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        merged = parse_object(&text, &path.display().to_string())?;
    }
    if let Some(text) = inline {
        merged.extend(parse_object(text, "--field-json")?);
    }
    if merged.is_empty() {
        return Err(CliError::Invalid("a field is required: pass --field <file> or --field-json <object>".into()));
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::Invalid(format!("field spec: {e}")))
}
