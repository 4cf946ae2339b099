//! Dipole forces on a Rayleigh probe particle.
//!
//! ```text
//! F_grad = ½ Re χ Re[E*·(∇)E]
//! F_scat = ½ Im χ Im[E*·(∇)E]
//! ```
//!
//! Normalized by `W = |E|²/2` these are `-Re χ · Im p` and `Im χ · Re p`.
//! Forces carry the arbitrary field normalization; only ratios and
//! directions are meaningful.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{evaluate, Field, FieldSample};
use crate::math::Vec3;
use crate::observables::{AmplitudeFloor, PolarizationState};

/// Complex dipole polarizability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polarizability {
    pub chi: Complex64,
}

impl Polarizability {
    pub fn new(chi: Complex64) -> Result<Self> {
        if !chi.is_finite() {
            return Err(Error::param("chi", "must be finite"));
        }
        Ok(Polarizability { chi })
    }

    /// Passive (non-gain) particles have `Im χ ≥ 0`. Violations are allowed
    /// but callers should warn.
    pub fn is_passive(&self) -> bool {
        self.chi.im >= 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalForce {
    pub gradient: Vec3,
    pub scattering: Vec3,
}

impl OpticalForce {
    pub fn total(&self) -> Vec3 {
        self.gradient + self.scattering
    }
}

pub fn force_from_sample(
    sample: &FieldSample,
    pol: &PolarizationState,
    chi: &Polarizability,
) -> OpticalForce {
    // E*·(∇)E = (e*·e) ψ*∇ψ for uniform polarization
    let cg = sample.conj_grad();
    let e2 = pol.norm_sqr();
    OpticalForce {
        gradient: cg.re() * (0.5 * chi.chi.re * e2),
        scattering: cg.im() * (0.5 * chi.chi.im * e2),
    }
}

pub fn optical_force<F: Field + ?Sized>(
    field: &F,
    pol: &PolarizationState,
    chi: &Polarizability,
    point: Vec3,
) -> Result<OpticalForce> {
    let sample = evaluate(field, point)?;
    Ok(force_from_sample(&sample, pol, chi))
}

/// `(F_grad / W, F_scat / W)`; singular when `W` is at or below the floor.
pub fn normalized_forces(
    force: &OpticalForce,
    energy_density: f64,
    floor: AmplitudeFloor,
) -> Result<(Vec3, Vec3)> {
    if !(energy_density > floor.energy_density() && energy_density > 0.0) {
        return Err(Error::Singular);
    }
    Ok((force.gradient / energy_density, force.scattering / energy_density))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FieldSpec, PlaneWaveSpec, WaveParameters};
    use crate::math::CVec3;
    use core::f64::consts::PI;

    #[test]
    fn plane_wave_pure_scattering() {
        let w = WaveParameters::new(2.0 * PI / 3.0).unwrap();
        let f = FieldSpec::PlaneWave(PlaneWaveSpec::new(w, Vec3::new(0.0, 0.0, 1.0)).unwrap());
        let chi = Polarizability::new(Complex64::new(0.0, 1.0)).unwrap();
        let force = optical_force(&f, &PolarizationState::diagonal(), &chi, Vec3::xz(0.1, 0.2)).unwrap();
        assert!(force.gradient.norm() < 1e-15);
        assert!((force.scattering - Vec3::new(0.0, 0.0, 1.5)).norm() < 1e-14);
    }

    /// cos(kx) e^{ikz}: |ψ|² = cos²(kx), so F_grad,x = ½ Re χ · ½ ∂x cos² = -¼ Re χ k sin(2kx).
    struct StandingWave {
        wave: WaveParameters,
    }

    impl Field for StandingWave {
        fn wave(&self) -> &WaveParameters {
            &self.wave
        }
        fn sample(&self, p: Vec3) -> FieldSample {
            let k = self.wave.k();
            let carrier = Complex64::from_polar(1.0, k * p.z);
            let psi = (k * p.x).cos() * carrier;
            let dx = -k * (k * p.x).sin() * carrier;
            let dz = Complex64::new(0.0, k) * psi;
            FieldSample::new(psi, CVec3::new(dx, Complex64::new(0.0, 0.0), dz))
        }
        fn reference_amplitude(&self) -> f64 {
            1.0
        }
    }

    #[test]
    fn standing_wave_gradient_force() {
        let f = StandingWave { wave: WaveParameters::new(1.0).unwrap() };
        let k = f.wave.k();
        let chi = Polarizability::new(Complex64::new(2.0, 0.0)).unwrap();
        let pol = PolarizationState::linear_y();
        let h = 1e-6;
        for i in 0..20 {
            let x = -0.4 + 0.043 * f64::from(i);
            let force = optical_force(&f, &pol, &chi, Vec3::xz(x, 0.3)).unwrap();
            // oracle: ½ Re χ · ½ d|ψ|²/dx by central differences
            let int = |x: f64| f.sample(Vec3::xz(x, 0.3)).intensity();
            let fd = 0.25 * chi.chi.re * (int(x + h) - int(x - h)) / (2.0 * h);
            assert!((force.gradient.x - fd).abs() < 1e-6 * k);
            assert!((force.gradient.x + 0.25 * chi.chi.re * k * (2.0 * k * x).sin()).abs() < 1e-12 * k);
            assert_eq!(force.scattering, Vec3::ZERO);
        }
    }

    #[test]
    fn normalization_rejects_dark_points() {
        let force = OpticalForce { gradient: Vec3::ZERO, scattering: Vec3::ZERO };
        assert_eq!(normalized_forces(&force, 0.0, AmplitudeFloor::relative_to(1.0)), Err(Error::Singular));
    }

    #[test]
    fn passivity() {
        assert!(Polarizability::new(Complex64::new(1.0, 0.5)).unwrap().is_passive());
        assert!(!Polarizability::new(Complex64::new(1.0, -0.5)).unwrap().is_passive());
        assert!(Polarizability::new(Complex64::new(f64::NAN, 0.0)).is_err());
    }
}
