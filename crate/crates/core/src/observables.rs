//! Complex local momentum, Poynting-vector decomposition and local group
//! velocity.
//!
//! With `ψ = A e^{iΦ}` the local momentum `p = -i ∇ψ/ψ` splits into the
//! current part `Re p = ∇Φ` and the osmotic part `Im p = -∇ ln A`. For a
//! uniformly polarized field `E = e ψ` (`c = 1`, `ω = k`):
//!
//! ```text
//! P_O = Im[ψ* ∇ψ] / 2ω
//! P_S = S3 (∇|ψ|² × ẑ) / 4ω
//! W   = |ψ|² / 2
//! ```
//!
//! so that `P_O / W = Re p / k`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{evaluate, Field, FieldSample, WaveParameters};
use crate::math::{CVec3, Vec3};

/// Relative amplitude below which a point counts as singular.
pub const SINGULAR_REL: f64 = 1e-12;

/// Absolute amplitude floor for singularity checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeFloor(f64);

impl AmplitudeFloor {
    /// `SINGULAR_REL × a_max`.
    pub fn relative_to(a_max: f64) -> Self {
        AmplitudeFloor(SINGULAR_REL * a_max.abs())
    }

    pub fn absolute(value: f64) -> Self {
        AmplitudeFloor(value.abs())
    }

    /// Floor derived from the field's reference amplitude.
    pub fn for_field<F: Field + ?Sized>(field: &F) -> Self {
        Self::relative_to(field.reference_amplitude())
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    /// Matching floor for the energy density `W = A²/2`.
    pub fn energy_density(&self) -> f64 {
        0.5 * self.0 * self.0
    }

    pub fn admits(&self, amplitude: f64) -> bool {
        amplitude > self.0 && amplitude > 0.0 && amplitude.is_finite()
    }
}

/// The complex local momentum `p = -i ∇ ln ψ` in rad/mm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMomentum {
    p: CVec3,
}

impl ComplexMomentum {
    pub fn new(p: CVec3) -> Self {
        ComplexMomentum { p }
    }

    pub fn p(&self) -> CVec3 {
        self.p
    }

    /// Current part, `∇Φ`.
    pub fn re_p(&self) -> Vec3 {
        self.p.re()
    }

    /// Osmotic part, `-∇ ln A`.
    pub fn im_p(&self) -> Vec3 {
        self.p.im()
    }
}

/// `p = -i ∇ψ / ψ`, or [`Error::Singular`] when the amplitude is at or
/// below `floor`.
pub fn local_momentum(sample: &FieldSample, floor: AmplitudeFloor) -> Result<ComplexMomentum> {
    if !floor.admits(sample.amplitude) {
        return Err(Error::Singular);
    }
    let minus_i_over_psi = Complex64::new(0.0, -1.0) / sample.psi;
    let p = sample.grad.scale(minus_i_over_psi);
    if !p.is_finite() {
        return Err(Error::Singular);
    }
    Ok(ComplexMomentum::new(p))
}

/// Local group velocity `Re p / k` in units of `c`.
pub fn group_velocity(mom: &ComplexMomentum, wave: &WaveParameters) -> Vec3 {
    mom.re_p() / wave.k()
}

/// Transverse unit polarization vector `(e_x, e_y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationState {
    ex: Complex64,
    ey: Complex64,
}

impl PolarizationState {
    /// Normalizes `(ex, ey)` to unit length.
    pub fn new(ex: Complex64, ey: Complex64) -> Result<Self> {
        let norm = (ex.norm_sqr() + ey.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::param("polarization", "must be a finite nonzero vector"));
        }
        Ok(PolarizationState {
            ex: ex / norm,
            ey: ey / norm,
        })
    }

    pub fn linear_x() -> Self {
        PolarizationState {
            ex: Complex64::new(1.0, 0.0),
            ey: Complex64::new(0.0, 0.0),
        }
    }

    pub fn linear_y() -> Self {
        PolarizationState {
            ex: Complex64::new(0.0, 0.0),
            ey: Complex64::new(1.0, 0.0),
        }
    }

    /// `(1, 1)/√2`, Stokes vector `(0, 1, 0)`.
    pub fn diagonal() -> Self {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        PolarizationState {
            ex: Complex64::new(s, 0.0),
            ey: Complex64::new(s, 0.0),
        }
    }

    /// `(1, ±i)/√2`; `handedness > 0` gives `S3 = +1`.
    pub fn circular(handedness: f64) -> Self {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        PolarizationState {
            ex: Complex64::new(s, 0.0),
            ey: Complex64::new(0.0, s * handedness.signum()),
        }
    }

    pub fn ex(&self) -> Complex64 {
        self.ex
    }

    pub fn ey(&self) -> Complex64 {
        self.ey
    }

    /// `e*·e`, one up to rounding.
    pub fn norm_sqr(&self) -> f64 {
        self.ex.norm_sqr() + self.ey.norm_sqr()
    }

    /// Helicity Stokes parameter `2 Im(e_x* e_y)`.
    pub fn s3(&self) -> f64 {
        2.0 * (self.ex.conj() * self.ey).im
    }
}

/// Orbital/spin split of the Poynting vector plus the energy density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoyntingDecomposition {
    pub orbital: Vec3,
    pub spin: Vec3,
    pub energy_density: f64,
}

impl PoyntingDecomposition {
    pub fn total(&self) -> Vec3 {
        self.orbital + self.spin
    }
}

/// Decomposition from an already evaluated sample.
pub fn poynting_from_sample(
    sample: &FieldSample,
    pol: &PolarizationState,
    wave: &WaveParameters,
) -> PoyntingDecomposition {
    let omega = wave.omega();
    let cg = sample.conj_grad();
    let orbital = cg.im() * (pol.norm_sqr() / (2.0 * omega));
    let s3 = pol.s3();
    let spin = if s3 == 0.0 {
        Vec3::ZERO
    } else {
        let grad_intensity = cg.re() * 2.0;
        grad_intensity.cross(Vec3::new(0.0, 0.0, 1.0)) * (s3 / (4.0 * omega))
    };
    PoyntingDecomposition {
        orbital,
        spin,
        energy_density: 0.5 * sample.intensity() * pol.norm_sqr(),
    }
}

pub fn poynting_decomposition<F: Field + ?Sized>(
    field: &F,
    pol: &PolarizationState,
    point: Vec3,
) -> Result<PoyntingDecomposition> {
    let sample = evaluate(field, point)?;
    Ok(poynting_from_sample(&sample, pol, field.wave()))
}

/// `P_O / W`, which equals `Re p / k`.
pub fn momentum_ratio(dec: &PoyntingDecomposition, floor: AmplitudeFloor) -> Result<Vec3> {
    let w = dec.energy_density;
    if !(w > floor.energy_density() && w > 0.0) {
        return Err(Error::Singular);
    }
    Ok(dec.orbital / w)
}
