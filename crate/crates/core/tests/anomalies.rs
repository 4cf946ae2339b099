mod common;

use common::rng;
use optiflow_core::anomaly::{
    boundary_winding, classify_anomalies, detect_vortices, AnomalyLabel, BoundModel, VortexRecord,
};
use optiflow_core::fields::{build_tir_field, BesselSpec, EvanescentSpec, GaussianPairSpec, TirTwoWaveSpec};
use optiflow_core::grid::{AxisRange, PlaneGrid};
use optiflow_core::{Axis, Field, FieldSample, FieldSpec, Vec3, WaveParameters};
use proptest::prelude::*;
use rand::Rng;

/// Superposition of displaced beams, for topological checks only.
struct Sum {
    wave: WaveParameters,
    parts: Vec<(FieldSpec, Vec3, f64)>,
}

impl Field for Sum {
    fn wave(&self) -> &WaveParameters {
        &self.wave
    }

    fn sample(&self, point: Vec3) -> FieldSample {
        let mut psi = optiflow_core::Complex64::new(0.0, 0.0);
        let mut grad = optiflow_core::CVec3::ZERO;
        for (f, shift, weight) in &self.parts {
            let s = f.sample(point - *shift);
            psi += s.psi * *weight;
            grad = grad + s.grad.scale(optiflow_core::Complex64::new(*weight, 0.0));
        }
        FieldSample::new(psi, grad)
    }

    fn reference_amplitude(&self) -> f64 {
        self.parts.iter().map(|(f, _, w)| w.abs() * f.reference_amplitude()).sum()
    }
}

fn xy_grid(half: f64, n: usize, z: f64) -> PlaneGrid {
    PlaneGrid::new(
        AxisRange::new(Axis::X, -half, half, n).unwrap(),
        AxisRange::new(Axis::Y, -half, half, n).unwrap(),
        z,
    )
    .unwrap()
}

fn total_charge(v: &[VortexRecord]) -> i32 {
    v.iter().map(|r| r.charge).sum()
}

#[test]
fn displaced_beam_charges_add_up_to_the_boundary_winding() {
    let w = WaveParameters::new(1.0).unwrap();
    let bessel = |ell| FieldSpec::Bessel(BesselSpec::new(w, ell, 0.3 * w.k()).unwrap());
    let cases = [
        (1, 2, 0.6),
        (2, -1, 0.8),
        (-3, 1, 1.0),
        (1, 1, 0.5),
    ];
    for (l1, l2, weight) in cases {
        let f = Sum {
            wave: w,
            parts: vec![
                (bessel(l1), Vec3::new(-0.7, 0.1, 0.0), 1.0),
                (bessel(l2), Vec3::new(0.6, -0.2, 0.0), weight),
            ],
        };
        let grid = xy_grid(1.5, 101, 0.0);
        let vortices = detect_vortices(&f, &grid).unwrap();
        let boundary = boundary_winding(&f, &grid).unwrap().expect("boundary is bright");
        assert_eq!(total_charge(&vortices), boundary, "ℓ = ({l1}, {l2}), weight {weight}");
        // one vortex grid cell of winding per unit of charge, never a stray zero-charge record
        assert!(vortices.iter().all(|v| v.charge != 0));
    }
}

#[test]
fn isolated_bessel_core_carries_its_order() {
    let w = WaveParameters::new(1.0).unwrap();
    for ell in [-4, -2, -1, 1, 3, 5] {
        let f = FieldSpec::Bessel(BesselSpec::new(w, ell, 0.25 * w.k()).unwrap());
        // inside the first bright ring the only zero is the axis
        let grid = xy_grid(0.6, 60, 1.3);
        let v = detect_vortices(&f, &grid).unwrap();
        assert_eq!(total_charge(&v), ell);
        assert_eq!(boundary_winding(&f, &grid).unwrap(), Some(ell));
    }
}

#[test]
fn tir_backflow_and_superluminal_cells_cluster_at_glass_vortices() {
    let w = WaveParameters::new(1.0).unwrap();
    let f = build_tir_field(TirTwoWaveSpec::default_for(w)).unwrap();
    let grid = PlaneGrid::new(
        AxisRange::new(Axis::X, -2.0, 2.0, 800).unwrap(),
        AxisRange::new(Axis::Z, 0.0, 4.0, 800).unwrap(),
        0.0,
    )
    .unwrap();
    let vortices = detect_vortices(&f, &grid).unwrap();
    assert!(!vortices.is_empty());
    assert!(vortices.iter().all(|v| v.position.x < 0.0));
    let map = classify_anomalies(&f, &grid, BoundModel::interface(f.interface_index().unwrap()).unwrap());
    let near = |p: Vec3| vortices.iter().any(|v| (v.position - p).norm() <= w.lambda());
    let counts = map.counts();
    assert!(counts.backflow > 0);
    let (n1, n2) = grid.shape();
    for i in 0..n1 {
        for j in 0..n2 {
            let p = grid.point(i, j);
            match map.label(i, j) {
                AnomalyLabel::Backflow => assert!(near(p), "backflow at {p:?} far from every vortex"),
                AnomalyLabel::Superluminal if p.x >= 0.0 => {}
                AnomalyLabel::Superluminal => assert!(near(p), "glass superluminal at {p:?} far from every vortex"),
                _ => {}
            }
        }
    }
    // every glass vortex has both kinds of anomaly in its neighborhood
    for v in &vortices {
        let close = |label| {
            (0..n1).any(|i| (0..n2).any(|j| map.label(i, j) == label && (grid.point(i, j) - v.position).norm() <= w.lambda()))
        };
        assert!(close(AnomalyLabel::Backflow), "no backflow near {v:?}");
        assert!(close(AnomalyLabel::Superluminal), "no superluminal cell near {v:?}");
    }
    // the air side is evanescent in x, so every air sample is superluminal
    for i in 0..n1 {
        for j in 0..n2 {
            if grid.point(i, j).x >= 0.0 {
                assert_eq!(map.label(i, j), AnomalyLabel::Superluminal);
            }
        }
    }
}

#[test]
fn two_slit_field_has_no_anomalies() {
    let f = FieldSpec::GaussianPair(GaussianPairSpec::two_slit());
    let grid = PlaneGrid::new(
        AxisRange::new(Axis::X, -4.0, 4.0, 200).unwrap(),
        AxisRange::new(Axis::Z, 0.0, 3000.0, 200).unwrap(),
        0.0,
    )
    .unwrap();
    let map = classify_anomalies(&f, &grid, BoundModel::free_space().with_slack(1e-4).unwrap());
    let c = map.counts();
    assert_eq!((c.backflow, c.superluminal, c.singular), (0, 0, 0));
    assert_eq!(c.normal, grid.len());
}

#[test]
fn evanescent_waves_are_superluminal_everywhere() {
    let w = WaveParameters::new(1.0).unwrap();
    let mut rng = rng(97);
    let grid = PlaneGrid::new(
        AxisRange::new(Axis::X, 0.0, 2.0, 25).unwrap(),
        AxisRange::new(Axis::Z, -1.0, 1.0, 25).unwrap(),
        0.0,
    )
    .unwrap();
    for _ in 0..50 {
        let kappa = rng.gen_range(1e-3..2.0) * w.k();
        let f = FieldSpec::Evanescent(EvanescentSpec::new(w, kappa).unwrap());
        let map = classify_anomalies(&f, &grid, BoundModel::free_space());
        assert_eq!(map.counts().superluminal, grid.len(), "κ = {kappa}");
        assert!(map.superoscillating.iter().all(|&s| s));
    }
}

#[test]
fn bound_model_switches_at_the_interface() {
    let b = BoundModel::interface(1.5).unwrap();
    assert_eq!(b.bound(2.0, Vec3::xz(-1e-300, 0.0)), 3.0);
    assert_eq!(b.bound(2.0, Vec3::xz(0.0, 0.0)), 2.0);
    assert!(BoundModel::interface(0.9).is_err());
    assert!(BoundModel::free_space().with_slack(-1e-3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn symmetric_ranges_are_exact_mirrors(half in 1e-6..1e4f64, n in 2usize..2000) {
        let r = AxisRange::new(Axis::X, -half, half, n).unwrap();
        prop_assert_eq!(r.value(0), -half);
        prop_assert_eq!(r.value(n - 1), half);
        for i in 0..n {
            prop_assert_eq!(r.value(i), -r.value(n - 1 - i));
        }
    }

    #[test]
    fn range_values_are_monotone(lo in -1e3..1e3f64, span in 1e-3..1e3f64, n in 2usize..500) {
        let r = AxisRange::new(Axis::Z, lo, lo + span, n).unwrap();
        let v = r.values();
        prop_assert!(v.windows(2).all(|w| w[0] < w[1]));
    }
}
