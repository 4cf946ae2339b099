mod common;

use common::{families, fd_derivative, rng};
use optiflow_core::fields::{BesselSpec, GaussianPairSpec};
use optiflow_core::forces::{normalized_forces, optical_force, Polarizability};
use optiflow_core::grid::{AxisRange, PlaneGrid};
use optiflow_core::observables::{local_momentum, AmplitudeFloor, PolarizationState};
use optiflow_core::special::bessel_j_and_derivative;
use optiflow_core::{Axis, Complex64, Field, FieldSpec, Vec3, WaveParameters};
use rand::Rng;

fn fig1_grid() -> PlaneGrid {
    PlaneGrid::new(
        AxisRange::new(Axis::X, -4.0, 4.0, 100).unwrap(),
        AxisRange::new(Axis::Z, 0.0, 3000.0, 100).unwrap(),
        0.0,
    )
    .unwrap()
}

#[test]
fn normalized_forces_are_weak_values_on_gaussian_pair() {
    let f = FieldSpec::GaussianPair(GaussianPairSpec::two_slit());
    let floor = AmplitudeFloor::for_field(&f);
    for chi in [Complex64::new(1.0, 0.0), Complex64::new(0.3, 2.0), Complex64::new(-1.5, 0.25)] {
        let chi = Polarizability::new(chi).unwrap();
        for pol in [PolarizationState::diagonal(), PolarizationState::circular(1.0)] {
            for p in fig1_grid().points() {
                let s = f.sample(p);
                let force = optical_force(&f, &pol, &chi, p).unwrap();
                let w = 0.5 * s.intensity() * pol.norm_sqr();
                let (g, sc) = normalized_forces(&force, w, floor).unwrap();
                let m = local_momentum(&s, floor).unwrap();
                let want_g = m.im_p() * (-chi.chi.re);
                let want_s = m.re_p() * chi.chi.im;
                let scale = chi.chi.norm() * m.p().norm();
                assert!((g - want_g).norm() < 1e-10 * scale);
                assert!((sc - want_s).norm() < 1e-10 * scale);
            }
        }
    }
}

#[test]
fn real_polarizability_has_no_scattering_force() {
    let chi = Polarizability::new(Complex64::new(2.5, 0.0)).unwrap();
    let mut rng = rng(81);
    for fam in families() {
        for _ in 0..200 {
            let p = fam.random_point(&mut rng);
            let force = optical_force(&fam.field, &PolarizationState::diagonal(), &chi, p).unwrap();
            assert_eq!(force.scattering, Vec3::ZERO);
        }
    }
}

#[test]
fn gradient_force_points_up_the_intensity_slope() {
    let chi = Polarizability::new(Complex64::new(1.0, 0.1)).unwrap();
    let mut rng = rng(83);
    for fam in families() {
        for _ in 0..300 {
            let p = fam.random_point(&mut rng);
            let s = fam.field.sample(p);
            if s.amplitude < 1e-3 * fam.field.reference_amplitude() {
                continue;
            }
            let intensity = |q: Vec3| fam.field.sample(q).intensity();
            let grad_i = Vec3::new(
                fd_derivative(intensity, p, Axis::X, fam.h),
                fd_derivative(intensity, p, Axis::Y, fam.h),
                fd_derivative(intensity, p, Axis::Z, fam.h),
            );
            let force = optical_force(&fam.field, &PolarizationState::diagonal(), &chi, p).unwrap();
            // both sides vanish for uniform intensity; compare on the k·|ψ|² scale
            let natural = fam.field.wave().k() * s.intensity();
            let slack = 1e-6 * (0.5 * chi.chi.norm() * natural) * natural;
            assert!(force.gradient.dot(grad_i) >= -slack, "{} at {p:?}", fam.name);
        }
    }
}

#[test]
fn bessel_gradient_force_opposes_osmotic_momentum() {
    let w = WaveParameters::new(1.0).unwrap();
    let f = FieldSpec::Bessel(BesselSpec::new(w, 2, 0.2 * w.k()).unwrap());
    let floor = AmplitudeFloor::for_field(&f);
    let chi = Polarizability::new(Complex64::new(0.7, 0.2)).unwrap();
    let pol = PolarizationState::diagonal();
    let mut rng = rng(89);
    let mut checked = 0;
    while checked < 2000 {
        let p = Vec3::new(rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0), rng.gen_range(0.0..3.0));
        let s = f.sample(p);
        let Ok(m) = local_momentum(&s, floor) else { continue };
        if m.im_p().norm() < 1e-9 {
            continue;
        }
        let force = optical_force(&f, &pol, &chi, p).unwrap();
        let (g, _) = normalized_forces(&force, 0.5 * s.intensity(), floor).unwrap();
        let cos = g.dot(m.im_p()) / (g.norm() * m.im_p().norm());
        assert!(cos < -1.0 + 1e-12, "cos = {cos} at {p:?}");
        checked += 1;
    }
}

#[test]
fn bessel_ring_maximum_traps_radially_and_spins_azimuthally() {
    let w = WaveParameters::new(1.0).unwrap();
    let b = BesselSpec::new(w, 2, 0.2 * w.k()).unwrap();
    let f = FieldSpec::Bessel(b);
    // first maximum of J_2: root of J_2' by bisection
    let (mut lo, mut hi) = (2.0, 4.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if bessel_j_and_derivative(2, mid).1 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi) / b.k_perp();
    let chi = Polarizability::new(Complex64::new(1.0, 0.5)).unwrap();
    for phi in [0.0_f64, 0.9, 2.5, -1.2] {
        let p = Vec3::new(r * phi.cos(), r * phi.sin(), 0.4);
        let force = optical_force(&f, &PolarizationState::diagonal(), &chi, p).unwrap();
        let r_hat = Vec3::new(phi.cos(), phi.sin(), 0.0);
        let phi_hat = Vec3::new(-phi.sin(), phi.cos(), 0.0);
        let j = bessel_j_and_derivative(2, b.k_perp() * r).0;
        assert!(force.gradient.dot(r_hat).abs() < 1e-12);
        let want = 0.5 * chi.chi.im * j * j * 2.0 / r;
        assert!((force.scattering.dot(phi_hat) - want).abs() < 1e-12 * want);
    }
}
