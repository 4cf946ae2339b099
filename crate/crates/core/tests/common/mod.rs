//! Independent numerical oracles shared by the integration tests.
//!
//! Nothing here calls into the analytic gradient code: every derivative is
//! rebuilt from field values alone.

#![allow(dead_code)]

use optiflow_core::fields::{
    build_tir_field, BesselSpec, EvanescentSpec, GaussianPairSpec, PlaneWaveSpec, TirTwoWaveSpec,
};
use optiflow_core::grid::PlaneGrid;
use optiflow_core::math::wrap_phase;
use optiflow_core::observables::{poynting_decomposition, PolarizationState};
use optiflow_core::{Axis, Complex64, Field, FieldSpec, Vec3, WaveParameters};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Sixth-order central stencil weights for offsets 1, 2, 3 (antisymmetric).
const D1_WEIGHTS: [f64; 3] = [45.0, -9.0, 1.0];
const D1_DENOM: f64 = 60.0;

/// A step that is exactly representable relative to `x`, so `x + h - x == h`.
pub fn exact_step(x: f64, h: f64) -> f64 {
    let t = x + h;
    t - x
}

/// `∂f/∂axis` at `p` from values alone.
pub fn fd_derivative<T, G>(f: G, p: Vec3, axis: Axis, h: f64) -> T
where
    T: Copy + core::ops::Sub<Output = T> + core::ops::Mul<f64, Output = T> + core::ops::Add<Output = T>,
    G: Fn(Vec3) -> T,
{
    let h = exact_step(p.get(axis), h);
    let at = |m: f64| f(p.with(axis, p.get(axis) + m * h));
    let mut acc = (at(1.0) - at(-1.0)) * D1_WEIGHTS[0];
    for (idx, w) in D1_WEIGHTS.iter().enumerate().skip(1) {
        let m = (idx + 1) as f64;
        acc = acc + (at(m) - at(-m)) * *w;
    }
    acc * (1.0 / (D1_DENOM * h))
}

/// `∂Φ/∂axis` with each stencil arm unwrapped against the center phase.
pub fn fd_phase_derivative<F: Field + ?Sized>(field: &F, p: Vec3, axis: Axis, h: f64) -> f64 {
    let center = field.sample(p).psi;
    let rel = |q: Vec3| wrap_phase((field.sample(q).psi * center.conj()).arg());
    fd_derivative(rel, p, axis, h)
}

pub fn fd_log_amplitude_derivative<F: Field + ?Sized>(field: &F, p: Vec3, axis: Axis, h: f64) -> f64 {
    fd_derivative(|q| field.sample(q).amplitude.ln(), p, axis, h)
}

/// `∇ψ` by the sixth-order stencil, axis by axis.
pub fn fd_gradient<F: Field + ?Sized>(field: &F, p: Vec3, h: f64) -> [Complex64; 3] {
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (slot, axis) in out.iter_mut().zip(Axis::ALL) {
        *slot = fd_derivative(|q| C(field.sample(q).psi), p, axis, h).0;
    }
    out
}

#[derive(Clone, Copy)]
pub struct C(pub Complex64);

impl core::ops::Sub for C {
    type Output = C;
    fn sub(self, o: C) -> C {
        C(self.0 - o.0)
    }
}

impl core::ops::Add for C {
    type Output = C;
    fn add(self, o: C) -> C {
        C(self.0 + o.0)
    }
}

impl core::ops::Mul<f64> for C {
    type Output = C;
    fn mul(self, s: f64) -> C {
        C(self.0 * s)
    }
}

pub fn cnorm(v: &[Complex64; 3]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// `J_n(x)` from the first 50 terms of its power series.
pub fn bessel_series_50(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / f64::from(k);
    }
    let mut sum = term;
    for m in 1..50u32 {
        term *= -half * half / (f64::from(m) * f64::from(m + n));
        sum += term;
    }
    sum
}

/// A field family with a sampling box and the stencil step suited to it.
pub struct Family {
    pub name: &'static str,
    pub field: FieldSpec,
    pub lo: Vec3,
    pub hi: Vec3,
    /// Stencil step. Kept near `0.02/k` where the carrier phase `k z` is
    /// large (its rounding error is divided by `h`), and much smaller
    /// elsewhere.
    pub h: f64,
    /// Length below which the osmotic part is compared absolutely.
    pub length: f64,
    /// Points closer than this to `x = 0` straddle the TIR interface.
    pub interface_gap: Option<f64>,
}

impl Family {
    pub fn random_point(&self, rng: &mut StdRng) -> Vec3 {
        loop {
            let p = Vec3::new(
                sample_in(rng, self.lo.x, self.hi.x),
                sample_in(rng, self.lo.y, self.hi.y),
                sample_in(rng, self.lo.z, self.hi.z),
            );
            match self.interface_gap {
                Some(g) if p.x.abs() < g => continue,
                _ => return p,
            }
        }
    }
}

fn sample_in(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..hi)
    }
}

pub fn families() -> Vec<Family> {
    let w1 = WaveParameters::new(1.0).unwrap();
    let k1 = w1.k();
    let gp = GaussianPairSpec::two_slit();
    let kg = gp.wave().k();
    let tir = build_tir_field(TirTwoWaveSpec::default_for(w1)).unwrap();
    let tir_h = 1e-3 / (1.5 * k1);
    vec![
        Family {
            name: "plane_wave",
            field: FieldSpec::PlaneWave(PlaneWaveSpec::new(w1, Vec3::new(0.6, 0.0, 0.8)).unwrap()),
            lo: Vec3::new(-5.0, 0.0, -5.0),
            hi: Vec3::new(5.0, 0.0, 5.0),
            h: 1e-3 / k1,
            length: 1.0 / k1,
            interface_gap: None,
        },
        Family {
            name: "gaussian_pair",
            field: FieldSpec::GaussianPair(gp),
            lo: Vec3::new(-4.0, 0.0, 0.0),
            hi: Vec3::new(4.0, 0.0, 3000.0),
            h: 0.02 / kg,
            length: gp.waist(),
            interface_gap: None,
        },
        Family {
            name: "bessel",
            field: FieldSpec::Bessel(BesselSpec::new(w1, 2, 0.3 * k1).unwrap()),
            lo: Vec3::new(-5.0, -5.0, 0.0),
            hi: Vec3::new(5.0, 5.0, 10.0),
            h: 1e-3 / k1,
            length: 1.0 / (0.3 * k1),
            interface_gap: None,
        },
        Family {
            name: "evanescent",
            field: FieldSpec::Evanescent(EvanescentSpec::new(w1, 0.75 * k1).unwrap()),
            lo: Vec3::new(0.0, 0.0, -5.0),
            hi: Vec3::new(3.0, 0.0, 5.0),
            h: 1e-3 / k1,
            length: 1.0 / (0.75 * k1),
            interface_gap: None,
        },
        Family {
            name: "tir_two_wave",
            field: tir,
            lo: Vec3::new(-3.0, 0.0, 0.0),
            hi: Vec3::new(3.0, 0.0, 4.0),
            h: tir_h,
            length: 1.0 / k1,
            interface_gap: Some(4.0 * tir_h),
        },
    ]
}

/// `∂²f/∂axis²` by the sixth-order central stencil.
pub fn fd_second_derivative<G: Fn(Vec3) -> Complex64>(f: G, p: Vec3, axis: Axis, h: f64) -> Complex64 {
    let h = exact_step(p.get(axis), h);
    let at = |m: f64| f(p.with(axis, p.get(axis) + m * h));
    let w = [1.5, -0.15, 1.0 / 90.0];
    let mut acc = at(0.0) * (-49.0 / 18.0);
    for (idx, wi) in w.iter().enumerate() {
        let m = (idx + 1) as f64;
        acc += (at(m) + at(-m)) * *wi;
    }
    acc / (h * h)
}

pub fn vec_err(a: Vec3, b: Vec3) -> f64 {
    (a - b).norm()
}

/// Five-point Gauss–Legendre rule on [-1, 1].
const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

/// Net in-plane outflow of `v` through the rectangle `[u0,u1]×[v0,v1]`
/// of `grid`'s plane, each edge split into `pieces` Gauss–Legendre panels.
pub fn cell_flux(grid: &PlaneGrid, v: &dyn Fn(Vec3) -> Vec3, u: (f64, f64), w: (f64, f64), pieces: usize) -> f64 {
    let (a1, a2) = (grid.first.axis, grid.second.axis);
    let line = |fixed_first: Option<f64>, fixed_second: Option<f64>, lo: f64, hi: f64, comp: Axis| {
        let mut total = 0.0;
        let step = (hi - lo) / pieces as f64;
        for piece in 0..pieces {
            let c = lo + (piece as f64 + 0.5) * step;
            for (x, wt) in GL_NODES.iter().zip(GL_WEIGHTS) {
                let t = c + 0.5 * step * x;
                let p = match (fixed_first, fixed_second) {
                    (Some(a), None) => grid.point_at(a, t),
                    (None, Some(b)) => grid.point_at(t, b),
                    _ => unreachable!(),
                };
                total += wt * 0.5 * step * v(p).get(comp);
            }
        }
        total
    };
    line(Some(u.1), None, w.0, w.1, a1) - line(Some(u.0), None, w.0, w.1, a1)
        + line(None, Some(w.1), u.0, u.1, a2)
        - line(None, Some(w.0), u.0, u.1, a2)
}

/// Largest `|∇·P_S|` over the cells of `grid` for circular polarization, in units of
/// `|P_S|max / cell size`, together with `|P_S|max`.
pub fn max_spin_divergence(f: &FieldSpec, grid: &PlaneGrid) -> (f64, f64) {
    let pol = PolarizationState::circular(1.0);
    let spin = |p: Vec3| poynting_decomposition(f, &pol, p).unwrap().spin;
    let p_max = grid.points().map(|p| spin(p).norm()).fold(0.0_f64, f64::max);
    let (n1, n2) = grid.shape();
    let (du, dv) = (grid.first.spacing(), grid.second.spacing());
    let cell = du.max(dv);
    let mut worst = 0.0_f64;
    for i in 0..n1 - 1 {
        for j in 0..n2 - 1 {
            let u = (grid.first.value(i), grid.first.value(i + 1));
            let w = (grid.second.value(j), grid.second.value(j + 1));
            let div = cell_flux(grid, &spin, u, w, 2) / (du * dv);
            worst = worst.max(div.abs() / (p_max / cell));
        }
    }
    (worst, p_max)
}
