//! Calcite weak measurement of the transverse local momentum.
//!
//! A thin birefringent plate shifts the `x`-polarized component of the field
//! by `Δx` relative to the `y` component:
//!
//! ```text
//! E'(x, z) = x̂ e_x ψ(x - Δx, z) + ŷ e_y ψ(x, z)
//! ```
//!
//! For the diagonal input `(1, 1)/√2` the perturbed Stokes vector is, to
//! first order in `Δx`,
//!
//! ```text
//! S' ≃ (Δx Im p_x, 1, Δx Re p_x)
//! ```
//!
//! so `S'_3` reads out the current and `S'_1` the osmotic momentum.
//!
//! The shift follows from a plate phase `φ(α) ≈ φ0 + ζ k_x/k` (α the
//! incidence angle, `α0` its nominal value, `ζ = ∂φ/∂α` at `α0`), giving
//! `Δx = ζ/k = ∂φ/∂k_x`. Only `Δx` enters the computation here, and
//! `φ0 = 0 (mod 2π)` is assumed.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{evaluate, Field, FieldSpec};
use crate::math::Vec3;
use crate::observables::{ComplexMomentum, PolarizationState};

/// Plate parameters: lateral shift and input polarization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalciteSpec {
    pub delta_x: f64,
    pub polarization: PolarizationState,
}

impl CalciteSpec {
    /// Shift `delta_x` (mm) with the diagonal input polarization.
    pub fn new(delta_x: f64) -> Result<Self> {
        Self::with_polarization(delta_x, PolarizationState::diagonal())
    }

    pub fn with_polarization(delta_x: f64, polarization: PolarizationState) -> Result<Self> {
        if !delta_x.is_finite() {
            return Err(Error::param("delta_x", "must be finite"));
        }
        Ok(CalciteSpec {
            delta_x,
            polarization,
        })
    }

    pub fn input_stokes(&self) -> StokesVector {
        exact_stokes(self.polarization.ex(), self.polarization.ey())
            .expect("unit polarization has nonzero intensity")
    }

    /// Whether the shift is small against the transverse scale of `field`
    /// (`|Δx| ≤ w0/100` for Gaussian beams). Other families always pass.
    pub fn is_weak_for(&self, field: &FieldSpec) -> bool {
        match field {
            FieldSpec::GaussianPair(g) => self.delta_x.abs() <= g.waist() / 100.0,
            _ => true,
        }
    }
}

/// Normalized Stokes vector `(S1, S2, S3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesVector {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl StokesVector {
    pub const fn new(s1: f64, s2: f64, s3: f64) -> Self {
        StokesVector { s1, s2, s3 }
    }

    pub fn length(&self) -> f64 {
        (self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3).sqrt()
    }

    pub fn distance(&self, o: &StokesVector) -> f64 {
        let d = [self.s1 - o.s1, self.s2 - o.s2, self.s3 - o.s3];
        (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
    }
}

/// Transverse components of the field behind the plate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbedField {
    pub ex: Complex64,
    pub ey: Complex64,
}

/// `E'_x = e_x ψ(x - Δx)`, `E'_y = e_y ψ(x)`, with the shift applied exactly.
pub fn apply_calcite<F: Field + ?Sized>(
    field: &F,
    cal: &CalciteSpec,
    point: Vec3,
) -> Result<PerturbedField> {
    let shifted = evaluate(field, Vec3::new(point.x - cal.delta_x, point.y, point.z))?;
    let here = evaluate(field, point)?;
    Ok(PerturbedField {
        ex: cal.polarization.ex() * shifted.psi,
        ey: cal.polarization.ey() * here.psi,
    })
}

/// Normalized Stokes parameters of `(E_x, E_y)`.
pub fn exact_stokes(ex: Complex64, ey: Complex64) -> Result<StokesVector> {
    let ix = ex.norm_sqr();
    let iy = ey.norm_sqr();
    let intensity = ix + iy;
    if !(intensity > 0.0 && intensity.is_finite()) {
        return Err(Error::Singular);
    }
    let cross = ex.conj() * ey;
    Ok(StokesVector {
        s1: (ix - iy) / intensity,
        s2: 2.0 * cross.re / intensity,
        s3: 2.0 * cross.im / intensity,
    })
}

fn require_diagonal_input(cal: &CalciteSpec) -> Result<()> {
    let s = cal.input_stokes();
    if (s.s1).abs() > 1e-12 || (s.s2 - 1.0).abs() > 1e-12 || (s.s3).abs() > 1e-12 {
        return Err(Error::NonDiagonalInput);
    }
    Ok(())
}

/// First-order readout `(Δx Im p_x, 1, Δx Re p_x)`, renormalized to unit
/// length.
pub fn predicted_stokes(mom: &ComplexMomentum, cal: &CalciteSpec) -> Result<StokesVector> {
    require_diagonal_input(cal)?;
    let s1 = cal.delta_x * mom.im_p().x;
    let s3 = cal.delta_x * mom.re_p().x;
    let norm = (s1 * s1 + 1.0 + s3 * s3).sqrt();
    Ok(StokesVector::new(s1 / norm, 1.0 / norm, s3 / norm))
}

/// Inverse readout: `(Re p_x, Im p_x) = (S'_3, S'_1) / Δx`.
pub fn momentum_from_stokes(stokes: &StokesVector, cal: &CalciteSpec) -> Result<(f64, f64)> {
    if cal.delta_x == 0.0 {
        return Err(Error::DegeneratePointer);
    }
    Ok((stokes.s3 / cal.delta_x, stokes.s1 / cal.delta_x))
}
