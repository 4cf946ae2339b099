//! Analytic catalog of scalar optical fields.
//!
//! Every field is the scalar envelope `ψ(r)` of a uniformly polarized wave
//! `E = e ψ(r)`; the polarization is applied downstream. Each family returns
//! `ψ` together with its exact gradient so that no observable depends on
//! numerical differentiation.
//!
//! Planar families (plane wave with an `x`–`z` direction, Gaussian pair,
//! evanescent wave, two-wave TIR field) are independent of `y`.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{CVec3, Vec3};
use crate::special::bessel_j_triple;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Monochromatic wave parameters, `c = 1` so `ω = k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveParameters {
    lambda: f64,
    k: f64,
}

impl WaveParameters {
    pub fn new(lambda_mm: f64) -> Result<Self> {
        if !(lambda_mm.is_finite() && lambda_mm > 0.0) {
            return Err(Error::param("lambda_mm", "must be finite and > 0"));
        }
        Ok(WaveParameters {
            lambda: lambda_mm,
            k: 2.0 * PI / lambda_mm,
        })
    }

    /// Wavelength in mm.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Vacuum wavenumber in rad/mm.
    pub fn k(&self) -> f64 {
        self.k
    }

    /// Angular frequency; equal to `k` with `c = 1`.
    pub fn omega(&self) -> f64 {
        self.k
    }
}

/// Field value, exact gradient, and amplitude/phase split at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub psi: Complex64,
    pub grad: CVec3,
    pub amplitude: f64,
    pub phase: f64,
}

impl FieldSample {
    pub fn new(psi: Complex64, grad: CVec3) -> Self {
        FieldSample {
            psi,
            grad,
            amplitude: psi.norm(),
            phase: psi.arg(),
        }
    }

    /// Intensity `|ψ|²`.
    pub fn intensity(&self) -> f64 {
        self.psi.norm_sqr()
    }

    /// `ψ* ∇ψ`, the bilinear form behind currents and forces.
    pub fn conj_grad(&self) -> CVec3 {
        self.grad.scale(self.psi.conj())
    }
}

/// Anything that can produce field samples. Implemented by [`FieldSpec`];
/// tests and downstream code can implement it for superpositions.
pub trait Field {
    fn wave(&self) -> &WaveParameters;

    /// `ψ` and `∇ψ` at `point`. Callers must pass a finite point.
    fn sample(&self, point: Vec3) -> FieldSample;

    /// Upper bound (or typical peak) of `|ψ|`, the default reference for
    /// singularity floors when no sampling domain is known.
    fn reference_amplitude(&self) -> f64;
}

/// Plane wave `exp(i k d·r)` with unit direction `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveSpec {
    wave: WaveParameters,
    direction: Vec3,
}

impl PlaneWaveSpec {
    pub fn new(wave: WaveParameters, direction: Vec3) -> Result<Self> {
        let norm = direction.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::param("direction", "must be a finite nonzero vector"));
        }
        Ok(PlaneWaveSpec {
            wave,
            direction: direction / norm,
        })
    }

    pub fn wave(&self) -> &WaveParameters {
        &self.wave
    }

    pub fn direction(&self) -> Vec3 {
        self.direction
    }

    fn sample(&self, p: Vec3) -> FieldSample {
        let kv = self.direction * self.wave.k;
        let psi = Complex64::from_polar(1.0, kv.dot(p));
        let g = I * psi;
        FieldSample::new(psi, CVec3::new(g * kv.x, g * kv.y, g * kv.z))
    }
}

/// Two mutually displaced Gaussian beams with a common waist at `z = 0`:
///
/// ```text
/// ψ = (w0/w) { exp[-(1/w² - ik/2R)(x-a)²] + exp[-(1/w² - ik/2R)(x+a)²] } e^{ikz}
/// ```
///
/// with `w² = w0²(1 + z²/zR²)`, `1/R = z/(z² + zR²)`, `zR = k w0²/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPairSpec {
    wave: WaveParameters,
    w0: f64,
    a: f64,
}

impl GaussianPairSpec {
    pub fn new(wave: WaveParameters, w0: f64, a: f64) -> Result<Self> {
        if !(w0.is_finite() && w0 > 0.0) {
            return Err(Error::param("w0_mm", "must be finite and > 0"));
        }
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::param("a_mm", "must be finite and >= 0"));
        }
        Ok(GaussianPairSpec { wave, w0, a })
    }

    /// Two-slit interference parameters: λ = 0.943 µm, w0 = 0.608 mm,
    /// beam separation 2a = 4.69 mm.
    pub fn two_slit() -> Self {
        GaussianPairSpec {
            wave: WaveParameters::new(0.943e-3).expect("positive wavelength"),
            w0: 0.608,
            a: 4.69 / 2.0,
        }
    }

    pub fn wave(&self) -> &WaveParameters {
        &self.wave
    }

    pub fn waist(&self) -> f64 {
        self.w0
    }

    pub fn half_separation(&self) -> f64 {
        self.a
    }

    pub fn rayleigh_range(&self) -> f64 {
        0.5 * self.wave.k * self.w0 * self.w0
    }

    /// Beam width `w(z)`.
    pub fn width(&self, z: f64) -> f64 {
        let zr = self.rayleigh_range();
        self.w0 * (1.0 + (z / zr) * (z / zr)).sqrt()
    }

    /// Wavefront curvature `1/R(z)`; zero at the waist.
    pub fn inverse_curvature(&self, z: f64) -> f64 {
        let zr = self.rayleigh_range();
        z / (z * z + zr * zr)
    }

    fn sample(&self, p: Vec3) -> FieldSample {
        let k = self.wave.k;
        let zr = self.rayleigh_range();
        let z = p.z;
        let d = z * z + zr * zr;
        let inv_w2 = zr * zr / (self.w0 * self.w0 * d);
        let amp = zr / d.sqrt(); // w0 / w
        let q = Complex64::new(inv_w2, -0.5 * k * z / d);
        // dq/dz
        let dq = Complex64::new(-2.0 * z / d * inv_w2, -0.5 * k * (zr * zr - z * z) / (d * d));
        let damp_over_amp = -z / d;

        let u1 = p.x - self.a;
        let u2 = p.x + self.a;
        let e1 = (-q * u1 * u1).exp();
        let e2 = (-q * u2 * u2).exp();
        let carrier = Complex64::from_polar(1.0, k * z);

        let psi = amp * (e1 + e2) * carrier;
        let dx = amp * (-2.0 * q * (u1 * e1 + u2 * e2)) * carrier;
        let dz = psi * damp_over_amp
            + amp * (-dq * (u1 * u1 * e1 + u2 * u2 * e2)) * carrier
            + I * k * psi;
        FieldSample::new(psi, CVec3::new(dx, Complex64::new(0.0, 0.0), dz))
    }
}

/// Bessel beam `J_|ℓ|(k⊥ r) exp(iℓφ + i k_z z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselSpec {
    wave: WaveParameters,
    ell: i32,
    k_perp: f64,
    k_z: f64,
}

impl BesselSpec {
    pub fn new(wave: WaveParameters, ell: i32, k_perp: f64) -> Result<Self> {
        let k = wave.k;
        if !(k_perp.is_finite() && k_perp > 0.0 && k_perp < k) {
            return Err(Error::param("k_perp", "must satisfy 0 < k_perp < k"));
        }
        if ell == i32::MIN {
            return Err(Error::param("ell", "out of range"));
        }
        let k_z = ((k - k_perp) * (k + k_perp)).sqrt();
        Ok(BesselSpec {
            wave,
            ell,
            k_perp,
            k_z,
        })
    }

    /// Bessel beam specified by its longitudinal wavenumber ratio `k_z / k`.
    pub fn from_kz_ratio(wave: WaveParameters, ell: i32, kz_over_k: f64) -> Result<Self> {
        if !(kz_over_k > 0.0 && kz_over_k < 1.0) {
            return Err(Error::param("kz_over_k", "must lie in (0, 1)"));
        }
        let k = wave.k;
        Self::new(wave, ell, k * ((1.0 - kz_over_k) * (1.0 + kz_over_k)).sqrt())
    }

    pub fn wave(&self) -> &WaveParameters {
        &self.wave
    }

    pub fn ell(&self) -> i32 {
        self.ell
    }

    pub fn order(&self) -> u32 {
        self.ell.unsigned_abs()
    }

    pub fn k_perp(&self) -> f64 {
        self.k_perp
    }

    pub fn k_z(&self) -> f64 {
        self.k_z
    }

    fn sample(&self, p: Vec3) -> FieldSample {
        let n = self.order();
        let r = p.x.hypot(p.y);
        let carrier = Complex64::from_polar(1.0, self.k_z * p.z);
        let ell = f64::from(self.ell);

        if r == 0.0 {
            let psi = if n == 0 { carrier } else { Complex64::new(0.0, 0.0) };
            // Only |ℓ| = 1 has a nonzero transverse gradient on axis:
            // J_1(k⊥r) e^{±iφ} ≈ (k⊥/2)(x ± iy).
            let (gx, gy) = if n == 1 {
                let s = 0.5 * self.k_perp;
                (Complex64::new(s, 0.0), Complex64::new(0.0, s * ell.signum()))
            } else {
                (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
            };
            return FieldSample::new(
                psi,
                CVec3::new(gx * carrier, gy * carrier, I * self.k_z * psi),
            );
        }

        let [below, j, above] = bessel_j_triple(n, self.k_perp * r);
        let dj = 0.5 * (below - above);
        let (sin_phi, cos_phi) = (p.y / r, p.x / r);
        let phase = Complex64::from_polar(1.0, ell * p.y.atan2(p.x)) * carrier;
        let psi = j * phase;
        // ∂_r ψ and (1/r) ∂_φ ψ
        let d_r = self.k_perp * dj * phase;
        let d_phi = I * ell * j / r * phase;
        let gx = d_r * cos_phi - d_phi * sin_phi;
        let gy = d_r * sin_phi + d_phi * cos_phi;
        FieldSample::new(psi, CVec3::new(gx, gy, I * self.k_z * psi))
    }
}

/// Evanescent wave `exp(i k_z z - κ x)` with `k_z² - κ² = k²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvanescentSpec {
    wave: WaveParameters,
    kappa: f64,
    k_z: f64,
}

impl EvanescentSpec {
    pub fn new(wave: WaveParameters, kappa: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::param("kappa", "must be finite and > 0"));
        }
        let k_z = wave.k.hypot(kappa);
        Ok(EvanescentSpec { wave, kappa, k_z })
    }

    pub fn wave(&self) -> &WaveParameters {
        &self.wave
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn k_z(&self) -> f64 {
        self.k_z
    }

    fn sample(&self, p: Vec3) -> FieldSample {
        let psi = Complex64::from_polar((-self.kappa * p.x).exp(), self.k_z * p.z);
        FieldSample::new(
            psi,
            CVec3::new(-self.kappa * psi, Complex64::new(0.0, 0.0), I * self.k_z * psi),
        )
    }
}

/// Two s-polarized plane waves totally reflected at the glass (`x < 0`) /
/// air (`x > 0`) interface `x = 0`. Angles are measured from the normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TirTwoWaveSpec {
    pub wave: WaveParameters,
    pub n: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub amp1: f64,
    pub amp2: f64,
}

impl TirTwoWaveSpec {
    /// Glass index 1.5, angles 5° and 10° above critical, equal amplitudes.
    pub fn default_for(wave: WaveParameters) -> Self {
        let n = 1.5_f64;
        let critical = (1.0 / n).asin();
        TirTwoWaveSpec {
            wave,
            n,
            theta1: critical + 5.0_f64.to_radians(),
            theta2: critical + 10.0_f64.to_radians(),
            amp1: 1.0,
            amp2: 1.0,
        }
    }

    pub fn critical_angle(&self) -> f64 {
        (1.0 / self.n).asin()
    }
}

/// One incident/reflected/transmitted triple of the TIR field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TirPartialWave {
    pub amp: f64,
    pub k_x: f64,
    pub k_z: f64,
    pub kappa: f64,
    /// Reflection coefficient `(k_x - iκ)/(k_x + iκ)`, unimodular.
    pub r: Complex64,
    /// Transmission coefficient `2k_x/(k_x + iκ)`.
    pub t: Complex64,
}

impl TirPartialWave {
    fn new(wave: &WaveParameters, n: f64, theta: f64, amp: f64) -> Self {
        let kn = n * wave.k;
        let k_z = kn * theta.sin();
        let k_x = kn * theta.cos();
        let kappa = ((k_z - wave.k) * (k_z + wave.k)).sqrt();
        let den = Complex64::new(k_x, kappa);
        TirPartialWave {
            amp,
            k_x,
            k_z,
            kappa,
            r: Complex64::new(k_x, -kappa) / den,
            t: Complex64::new(2.0 * k_x, 0.0) / den,
        }
    }

    fn sample(&self, p: Vec3) -> (Complex64, Complex64, Complex64) {
        let carrier = Complex64::from_polar(self.amp, self.k_z * p.z);
        if p.x < 0.0 {
            let inc = Complex64::from_polar(1.0, self.k_x * p.x);
            let refl = self.r * inc.conj();
            let psi = (inc + refl) * carrier;
            let dx = I * self.k_x * (inc - refl) * carrier;
            (psi, dx, I * self.k_z * psi)
        } else {
            let psi = self.t * (-self.kappa * p.x).exp() * carrier;
            (psi, -self.kappa * psi, I * self.k_z * psi)
        }
    }
}

/// Precomputed two-wave TIR field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TirTwoWaveField {
    spec: TirTwoWaveSpec,
    waves: [TirPartialWave; 2],
}

impl TirTwoWaveField {
    pub fn spec(&self) -> &TirTwoWaveSpec {
        &self.spec
    }

    pub fn partial_waves(&self) -> &[TirPartialWave; 2] {
        &self.waves
    }

    fn sample(&self, p: Vec3) -> FieldSample {
        let mut psi = Complex64::new(0.0, 0.0);
        let mut dx = psi;
        let mut dz = psi;
        for w in &self.waves {
            let (v, gx, gz) = w.sample(p);
            psi += v;
            dx += gx;
            dz += gz;
        }
        FieldSample::new(psi, CVec3::new(dx, Complex64::new(0.0, 0.0), dz))
    }
}

/// Validate a TIR spec and precompute its Fresnel coefficients.
pub fn build_tir_field(spec: TirTwoWaveSpec) -> Result<FieldSpec> {
    if !(spec.n.is_finite() && spec.n > 1.0) {
        return Err(Error::param("n", "glass index must be finite and > 1"));
    }
    let critical = spec.critical_angle();
    for theta in [spec.theta1, spec.theta2] {
        if !theta.is_finite() || theta >= 0.5 * PI {
            return Err(Error::param("theta", "angles must be finite and below π/2"));
        }
        if theta <= critical {
            return Err(Error::NotTotalInternalReflection { angle: theta, critical });
        }
    }
    if !(spec.amp1.is_finite() && spec.amp2.is_finite()) {
        return Err(Error::param("amp", "amplitudes must be finite"));
    }
    if spec.amp1 == 0.0 && spec.amp2 == 0.0 {
        return Err(Error::param("amp", "at least one amplitude must be nonzero"));
    }
    Ok(FieldSpec::TirTwoWave(TirTwoWaveField {
        spec,
        waves: [
            TirPartialWave::new(&spec.wave, spec.n, spec.theta1, spec.amp1),
            TirPartialWave::new(&spec.wave, spec.n, spec.theta2, spec.amp2),
        ],
    }))
}

/// One analytic field configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldSpec {
    PlaneWave(PlaneWaveSpec),
    GaussianPair(GaussianPairSpec),
    Bessel(BesselSpec),
    Evanescent(EvanescentSpec),
    TirTwoWave(TirTwoWaveField),
}

impl FieldSpec {
    pub fn family(&self) -> &'static str {
        match self {
            FieldSpec::PlaneWave(_) => "plane_wave",
            FieldSpec::GaussianPair(_) => "gaussian_pair",
            FieldSpec::Bessel(_) => "bessel",
            FieldSpec::Evanescent(_) => "evanescent",
            FieldSpec::TirTwoWave(_) => "tir_two_wave",
        }
    }

    /// True when the field does not depend on `y`.
    pub fn is_planar(&self) -> bool {
        match self {
            FieldSpec::PlaneWave(p) => p.direction.y == 0.0,
            FieldSpec::Bessel(_) => false,
            _ => true,
        }
    }

    /// Glass index for interface fields, used by piecewise anomaly bounds.
    pub fn interface_index(&self) -> Option<f64> {
        match self {
            FieldSpec::TirTwoWave(t) => Some(t.spec.n),
            _ => None,
        }
    }
}

impl Field for FieldSpec {
    fn wave(&self) -> &WaveParameters {
        match self {
            FieldSpec::PlaneWave(s) => &s.wave,
            FieldSpec::GaussianPair(s) => &s.wave,
            FieldSpec::Bessel(s) => &s.wave,
            FieldSpec::Evanescent(s) => &s.wave,
            FieldSpec::TirTwoWave(s) => &s.spec.wave,
        }
    }

    fn sample(&self, point: Vec3) -> FieldSample {
        match self {
            FieldSpec::PlaneWave(s) => s.sample(point),
            FieldSpec::GaussianPair(s) => s.sample(point),
            FieldSpec::Bessel(s) => s.sample(point),
            FieldSpec::Evanescent(s) => s.sample(point),
            FieldSpec::TirTwoWave(s) => s.sample(point),
        }
    }

    fn reference_amplitude(&self) -> f64 {
        match self {
            FieldSpec::PlaneWave(_) | FieldSpec::Bessel(_) | FieldSpec::Evanescent(_) => 1.0,
            FieldSpec::GaussianPair(_) => 2.0,
            FieldSpec::TirTwoWave(t) => 2.0 * (t.spec.amp1.abs() + t.spec.amp2.abs()),
        }
    }
}

/// Evaluate `ψ` and its exact gradient at `point`.
pub fn evaluate<F: Field + ?Sized>(field: &F, point: Vec3) -> Result<FieldSample> {
    if !point.is_finite() {
        return Err(Error::param("point", "coordinates must be finite"));
    }
    Ok(field.sample(point))
}
