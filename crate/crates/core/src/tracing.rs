//! Streamlines of the real or imaginary local momentum.
//!
//! Streamlines of `Re p` are the Madelung–Bohm ("average photon")
//! trajectories; streamlines of `Im p` follow the osmotic flow. Integration
//! is classical fixed-step RK4 in one of two parameterizations:
//!
//! * paraxial: `dx/dz = v_x/v_z`, `dy/dz = v_y/v_z`, parameter `z`;
//! * arc length: `dr/ds = v/|v|`, parameter `s`.
//!
//! Near phase singularities `|p|` diverges. Whenever `|v|` exceeds
//! `vortex_guard · k` (or, in the paraxial form, `v_z <= 0`) the step is
//! halved; the trace stops with [`Termination::VortexProximity`] after
//! [`MAX_HALVINGS`] consecutive halvings. The step returns to its base value
//! once the guard is no longer exceeded.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fields::{BesselSpec, Field, FieldSpec};
use crate::math::Vec3;
use crate::observables::{local_momentum, AmplitudeFloor};
use crate::special::bessel_j_and_derivative;

pub const MAX_HALVINGS: u32 = 8;

/// Which part of the complex momentum drives the flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Real,
    Imaginary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameterization {
    ParaxialZ,
    ArcLength,
}

/// Axis-aligned box; points on the boundary are inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainBox {
    pub min: Vec3,
    pub max: Vec3,
}

impl DomainBox {
    pub fn new(min: Vec3, max: Vec3) -> Result<Self> {
        let ok = min.is_finite()
            && max.is_finite()
            && min.x <= max.x
            && min.y <= max.y
            && min.z <= max.z;
        if !ok {
            return Err(Error::param("domain", "box bounds must be finite and ordered"));
        }
        Ok(DomainBox { min, max })
    }

    pub fn contains(&self, p: Vec3) -> bool {
        p.x >= self.min.x
            && p.x <= self.max.x
            && p.y >= self.min.y
            && p.y <= self.max.y
            && p.z >= self.min.z
            && p.z <= self.max.z
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceConfig {
    pub seeds: Vec<Vec3>,
    pub parameterization: Parameterization,
    /// Base step in mm (of `z` or of arc length).
    pub step: f64,
    pub max_steps: usize,
    pub domain: DomainBox,
    /// Momentum-magnitude cutoff in units of `k`.
    pub vortex_guard: f64,
    /// Confine motion to the `x`–`z` plane.
    pub planar: bool,
    /// Singularity floor; defaults to the field's reference amplitude.
    pub amplitude_floor: Option<AmplitudeFloor>,
}

impl TraceConfig {
    pub fn new(
        seeds: Vec<Vec3>,
        parameterization: Parameterization,
        step: f64,
        max_steps: usize,
        domain: DomainBox,
    ) -> Result<Self> {
        let cfg = TraceConfig {
            seeds,
            parameterization,
            step,
            max_steps,
            domain,
            vortex_guard: 10.0,
            planar: false,
            amplitude_floor: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::param("step", "must be finite and > 0"));
        }
        if self.max_steps < 1 {
            return Err(Error::param("max_steps", "must be >= 1"));
        }
        if !(self.vortex_guard.is_finite() && self.vortex_guard > 1.0) {
            return Err(Error::param("vortex_guard", "must be finite and > 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Termination {
    LeftDomain,
    MaxSteps,
    VortexProximity,
    SingularAmplitude,
    /// The driving vector vanished (e.g. `Im p` at an intensity extremum),
    /// so the arc-length direction is undefined.
    Stagnation,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::LeftDomain => "left-domain",
            Termination::MaxSteps => "max-steps",
            Termination::VortexProximity => "vortex-proximity",
            Termination::SingularAmplitude => "singular-amplitude",
            Termination::Stagnation => "stagnation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    /// `z` (paraxial) or arc length `s`.
    pub param: f64,
    pub position: Vec3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn end(&self) -> Vec3 {
        self.points.last().expect("trajectory holds its seed").position
    }
}

enum Stop {
    Singular,
    Backward,
    Stagnant,
}

struct Flow<'a, F: ?Sized> {
    field: &'a F,
    which: Component,
    planar: bool,
    floor: AmplitudeFloor,
    k: f64,
    param: Parameterization,
}

impl<F: Field + ?Sized> Flow<'_, F> {
    fn velocity(&self, p: Vec3) -> core::result::Result<Vec3, Stop> {
        let sample = self.field.sample(p);
        let mom = local_momentum(&sample, self.floor).map_err(|_| Stop::Singular)?;
        let mut v = match self.which {
            Component::Real => mom.re_p(),
            Component::Imaginary => mom.im_p(),
        };
        if self.planar {
            v.y = 0.0;
        }
        Ok(v)
    }

    fn derivative(&self, p: Vec3) -> core::result::Result<Vec3, Stop> {
        let v = self.velocity(p)?;
        match self.param {
            Parameterization::ParaxialZ => {
                if v.z <= 0.0 {
                    return Err(Stop::Backward);
                }
                Ok(Vec3::new(v.x / v.z, v.y / v.z, 1.0))
            }
            Parameterization::ArcLength => {
                let n = v.norm();
                if n <= 1e-12 * self.k {
                    return Err(Stop::Stagnant);
                }
                Ok(v / n)
            }
        }
    }

    fn rk4(&self, p: Vec3, h: f64) -> core::result::Result<Vec3, Stop> {
        let k1 = self.derivative(p)?;
        let k2 = self.derivative(p + k1 * (0.5 * h))?;
        let k3 = self.derivative(p + k2 * (0.5 * h))?;
        let k4 = self.derivative(p + k3 * h)?;
        Ok(p + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0))
    }

    fn exceeds_guard(&self, v: Vec3, guard: f64) -> bool {
        v.norm() > guard * self.k || (self.param == Parameterization::ParaxialZ && v.z <= 0.0)
    }
}

/// Trace one streamline from `seed`.
pub fn trace_from<F: Field + ?Sized>(
    field: &F,
    cfg: &TraceConfig,
    which: Component,
    seed: Vec3,
) -> Result<Trajectory> {
    cfg.validate()?;
    if !seed.is_finite() || !cfg.domain.contains(seed) {
        return Err(Error::param("seed", "must lie inside the domain box"));
    }
    let flow = Flow {
        field,
        which,
        planar: cfg.planar,
        floor: cfg.amplitude_floor.unwrap_or_else(|| AmplitudeFloor::for_field(field)),
        k: field.wave().k(),
        param: cfg.parameterization,
    };
    flow.velocity(seed).map_err(|_| Error::SingularSeed)?;

    let mut pos = seed;
    let mut param = match cfg.parameterization {
        Parameterization::ParaxialZ => seed.z,
        Parameterization::ArcLength => 0.0,
    };
    let mut points = Vec::with_capacity(cfg.max_steps.min(1 << 16) + 1);
    points.push(TrajectoryPoint { param, position: pos });
    let mut halvings = 0u32;
    let mut taken = 0usize;

    let termination = loop {
        if taken == cfg.max_steps {
            break Termination::MaxSteps;
        }
        let v = match flow.velocity(pos) {
            Ok(v) => v,
            Err(_) => break Termination::SingularAmplitude,
        };
        if flow.exceeds_guard(v, cfg.vortex_guard) {
            halvings += 1;
            if halvings >= MAX_HALVINGS {
                break Termination::VortexProximity;
            }
        } else {
            halvings = 0;
        }
        let mut h = cfg.step / f64::from(1u32 << halvings);
        let mut outcome = flow.rk4(pos, h);
        // A stage that runs into backward flow is retried with smaller steps.
        let mut retries = halvings;
        while matches!(outcome, Err(Stop::Backward)) && retries + 1 < MAX_HALVINGS {
            retries += 1;
            h *= 0.5;
            outcome = flow.rk4(pos, h);
        }
        match outcome {
            Ok(next) => {
                if !cfg.domain.contains(next) {
                    break Termination::LeftDomain;
                }
                param = match cfg.parameterization {
                    Parameterization::ParaxialZ => next.z,
                    Parameterization::ArcLength => param + h,
                };
                pos = next;
                points.push(TrajectoryPoint { param, position: pos });
                taken += 1;
            }
            Err(Stop::Singular) => break Termination::SingularAmplitude,
            Err(Stop::Stagnant) => break Termination::Stagnation,
            Err(Stop::Backward) => break Termination::VortexProximity,
        }
    };
    Ok(Trajectory { points, termination })
}

/// Trace every seed of `cfg`, in order.
pub fn trace_streamline<F: Field + ?Sized>(
    field: &F,
    cfg: &TraceConfig,
    which: Component,
) -> Result<Vec<Trajectory>> {
    cfg.seeds.iter().map(|&s| trace_from(field, cfg, which, s)).collect()
}

/// Relative distance to a Bessel zero below which a helix seed is rejected.
const ZERO_PROXIMITY: f64 = 1e-6;

/// Integrate the 3D `Re p` streamline of a Bessel beam from
/// `(r0 cos φ0, r0 sin φ0, 0)` to `z = z_end`.
pub fn trace_bessel_helix(spec: &BesselSpec, r0: f64, phi0: f64, z_end: f64) -> Result<Trajectory> {
    if !(r0.is_finite() && r0 > 0.0) {
        return Err(Error::param("r0", "must be finite and > 0"));
    }
    if !(z_end.is_finite() && z_end > 0.0) {
        return Err(Error::param("z_end", "must be finite and > 0"));
    }
    if !phi0.is_finite() {
        return Err(Error::param("phi0", "must be finite"));
    }
    let arg = spec.k_perp() * r0;
    let (j, dj) = bessel_j_and_derivative(spec.order(), arg);
    if j.abs() <= ZERO_PROXIMITY * (arg * dj).abs() {
        return Err(Error::SingularSeed);
    }

    // keep the azimuthal advance per step small
    let total_turn = f64::from(spec.ell()).abs() * z_end / (spec.k_z() * r0 * r0);
    let steps = ((total_turn / 5e-3).ceil() as usize).max(1000);
    let step = z_end / steps as f64;
    let reach = 2.0 * r0 + 1.0;
    let domain = DomainBox::new(
        Vec3::new(-reach, -reach, -0.5 * step),
        Vec3::new(reach, reach, z_end + 0.5 * step),
    )?;
    let seed = Vec3::new(r0 * phi0.cos(), r0 * phi0.sin(), 0.0);
    let mut cfg = TraceConfig::new(alloc::vec![seed], Parameterization::ParaxialZ, step, steps, domain)?;
    cfg.vortex_guard = 1e6;
    let field = FieldSpec::Bessel(*spec);
    trace_from(&field, &cfg, Component::Real, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{GaussianPairSpec, PlaneWaveSpec, WaveParameters};

    fn big_box() -> DomainBox {
        DomainBox::new(Vec3::new(-10.0, -10.0, -1.0), Vec3::new(10.0, 10.0, 50.0)).unwrap()
    }

    #[test]
    fn plane_wave_paraxial_is_straight() {
        let w = WaveParameters::new(0.5).unwrap();
        let f = FieldSpec::PlaneWave(PlaneWaveSpec::new(w, Vec3::new(0.0, 0.0, 1.0)).unwrap());
        let cfg = TraceConfig::new(alloc::vec![Vec3::xz(1.5, 0.0)], Parameterization::ParaxialZ, 0.5, 200, big_box()).unwrap();
        let t = &trace_streamline(&f, &cfg, Component::Real).unwrap()[0];
        assert_eq!(t.termination, Termination::LeftDomain);
        for p in &t.points {
            assert_eq!(p.position.x, 1.5);
            assert_eq!(p.param, p.position.z);
        }
        assert!(t.end().z > 49.0);
    }

    #[test]
    fn gaussian_pair_axis_is_straight() {
        let f = FieldSpec::GaussianPair(GaussianPairSpec::two_slit());
        let domain = DomainBox::new(Vec3::new(-5.0, -1.0, 0.0), Vec3::new(5.0, 1.0, 3000.0)).unwrap();
        let cfg = TraceConfig::new(alloc::vec![Vec3::xz(0.0, 0.0)], Parameterization::ParaxialZ, 10.0, 1000, domain).unwrap();
        let t = trace_from(&f, &cfg, Component::Real, Vec3::xz(0.0, 0.0)).unwrap();
        assert!(t.points.iter().all(|p| p.position.x == 0.0));
        assert!((t.end().z - 3000.0).abs() < 1e-6);
    }

    #[test]
    fn config_validation() {
        let b = big_box();
        assert!(TraceConfig::new(alloc::vec![], Parameterization::ArcLength, 0.0, 10, b).is_err());
        assert!(TraceConfig::new(alloc::vec![], Parameterization::ArcLength, 0.1, 0, b).is_err());
        let mut cfg = TraceConfig::new(alloc::vec![], Parameterization::ArcLength, 0.1, 10, b).unwrap();
        cfg.vortex_guard = 1.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn singular_seed_is_an_error() {
        let w = WaveParameters::new(0.5).unwrap();
        let f = FieldSpec::Bessel(BesselSpec::new(w, 2, 1.0).unwrap());
        let cfg = TraceConfig::new(alloc::vec![Vec3::ZERO], Parameterization::ArcLength, 0.01, 10, big_box()).unwrap();
        assert_eq!(trace_streamline(&f, &cfg, Component::Real), Err(Error::SingularSeed));
    }

    #[test]
    fn helix_rejects_bessel_zero() {
        let w = WaveParameters::new(0.1).unwrap();
        let b = BesselSpec::new(w, 2, 10.0).unwrap();
        let r_zero = 5.135_622_301_840_683 / 10.0;
        assert_eq!(trace_bessel_helix(&b, r_zero, 0.0, 1.0), Err(Error::SingularSeed));
        assert!(trace_bessel_helix(&b, 0.3, 0.0, 1.0).is_ok());
    }

    #[test]
    fn zero_charge_helix_is_straight() {
        let w = WaveParameters::new(0.1).unwrap();
        let b = BesselSpec::from_kz_ratio(w, 0, 0.99).unwrap();
        let t = trace_bessel_helix(&b, 0.2, 0.4, 5.0).unwrap();
        let seed = t.points[0].position;
        for p in &t.points {
            assert!((p.position.x - seed.x).abs() < 1e-12);
            assert!((p.position.y - seed.y).abs() < 1e-12);
        }
    }
}
