//! Vortex detection and anomalous-momentum classification.
//!
//! The longitudinal spectrum of a forward wave is bounded by the medium
//! wavenumber `b` (`k` in air, `n k` in glass). A sample is
//!
//! * **backflow** when `Re p_z < 0`,
//! * **superluminal** when `Re p_z > b`,
//! * **singular** when its amplitude is below the singularity floor,
//! * **normal** otherwise.
//!
//! Vortices are found from the discrete phase winding around each grid
//! plaquette. Charges are counted counterclockwise in the plane spanned by
//! the grid's (first, second) axes.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fields::Field;
use crate::grid::PlaneGrid;
use crate::math::{wrap_phase, Vec3};
use crate::observables::{local_momentum, AmplitudeFloor};

/// Edges whose wrapped phase step exceeds this are subdivided.
const EDGE_SPLIT: f64 = 0.5 * PI;
const MAX_EDGE_DEPTH: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VortexRecord {
    /// Plaquette center (or the singular grid node itself).
    pub position: Vec3,
    pub charge: i32,
}

fn amplitude_floor<F: Field + ?Sized>(field: &F, grid: &PlaneGrid) -> AmplitudeFloor {
    let a_max = grid
        .points()
        .map(|p| field.sample(p).amplitude)
        .fold(0.0_f64, f64::max);
    AmplitudeFloor::relative_to(a_max)
}

fn check_resolution<F: Field + ?Sized>(field: &F, grid: &PlaneGrid) -> Result<()> {
    let limit = field.wave().lambda() / 8.0;
    for axis in [&grid.first, &grid.second] {
        let spacing = axis.spacing();
        if spacing >= limit {
            return Err(Error::Resolution {
                axis: axis.axis.name(),
                spacing,
                limit,
            });
        }
    }
    Ok(())
}

struct PhaseWalker<'a, F: ?Sized> {
    field: &'a F,
    floor: AmplitudeFloor,
}

impl<F: Field + ?Sized> PhaseWalker<'_, F> {
    fn phase(&self, p: Vec3) -> Option<f64> {
        let s = self.field.sample(p);
        self.floor.admits(s.amplitude).then_some(s.phase)
    }

    /// Phase change from `a` to `b` along the straight edge, refining the
    /// edge until every sub-step is well below π.
    fn edge(&self, a: Vec3, pa: f64, b: Vec3, pb: f64, depth: u32) -> f64 {
        let d = wrap_phase(pb - pa);
        if d.abs() <= EDGE_SPLIT || depth == 0 {
            return d;
        }
        let mid = (a + b) * 0.5;
        match self.phase(mid) {
            Some(pm) => self.edge(a, pa, mid, pm, depth - 1) + self.edge(mid, pm, b, pb, depth - 1),
            None => d,
        }
    }

    /// Winding number of the closed polygon `loop_pts` (with node phases).
    fn winding(&self, loop_pts: &[(Vec3, f64)]) -> i32 {
        let mut total = 0.0;
        for (idx, &(a, pa)) in loop_pts.iter().enumerate() {
            let (b, pb) = loop_pts[(idx + 1) % loop_pts.len()];
            total += self.edge(a, pa, b, pb, MAX_EDGE_DEPTH);
        }
        (total / (2.0 * PI)).round() as i32
    }
}

/// Locate phase singularities on `grid` by plaquette phase winding.
pub fn detect_vortices<F: Field + ?Sized>(field: &F, grid: &PlaneGrid) -> Result<Vec<VortexRecord>> {
    check_resolution(field, grid)?;
    let walker = PhaseWalker {
        field,
        floor: amplitude_floor(field, grid),
    };
    let (n1, n2) = grid.shape();
    let phases: Vec<Option<f64>> = grid.points().map(|p| walker.phase(p)).collect();
    let node = |i: usize, j: usize| -> Option<(Vec3, f64)> {
        phases[grid.index(i, j)].map(|ph| (grid.point(i, j), ph))
    };

    let mut found = Vec::new();
    for i in 0..n1 - 1 {
        for j in 0..n2 - 1 {
            let corners = [node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)];
            if corners.iter().any(Option::is_none) {
                continue;
            }
            let ring: Vec<(Vec3, f64)> = corners.iter().flatten().copied().collect();
            let charge = walker.winding(&ring);
            if charge != 0 {
                let u = 0.5 * (grid.first.value(i) + grid.first.value(i + 1));
                let v = 0.5 * (grid.second.value(j) + grid.second.value(j + 1));
                found.push(VortexRecord {
                    position: grid.point_at(u, v),
                    charge,
                });
            }
        }
    }

    // A vortex sitting exactly on a node: wind around its 8 neighbours.
    for i in 1..n1.saturating_sub(1) {
        for j in 1..n2.saturating_sub(1) {
            if phases[grid.index(i, j)].is_some() {
                continue;
            }
            let ring_idx = [
                (i - 1, j - 1),
                (i, j - 1),
                (i + 1, j - 1),
                (i + 1, j),
                (i + 1, j + 1),
                (i, j + 1),
                (i - 1, j + 1),
                (i - 1, j),
            ];
            let ring: Option<Vec<(Vec3, f64)>> = ring_idx.iter().map(|&(a, b)| node(a, b)).collect();
            if let Some(ring) = ring {
                let charge = walker.winding(&ring);
                if charge != 0 {
                    found.push(VortexRecord {
                        position: grid.point(i, j),
                        charge,
                    });
                }
            }
        }
    }
    Ok(found)
}

/// Total winding around the boundary of `grid`, or `None` when a boundary
/// node is singular.
pub fn boundary_winding<F: Field + ?Sized>(field: &F, grid: &PlaneGrid) -> Result<Option<i32>> {
    check_resolution(field, grid)?;
    let walker = PhaseWalker {
        field,
        floor: amplitude_floor(field, grid),
    };
    let (n1, n2) = grid.shape();
    let mut idx = Vec::with_capacity(2 * (n1 + n2));
    idx.extend((0..n1).map(|i| (i, 0)));
    idx.extend((1..n2).map(|j| (n1 - 1, j)));
    idx.extend((0..n1 - 1).rev().map(|i| (i, n2 - 1)));
    idx.extend((1..n2 - 1).rev().map(|j| (0, j)));
    let ring: Option<Vec<(Vec3, f64)>> = idx
        .iter()
        .map(|&(i, j)| {
            let p = grid.point(i, j);
            walker.phase(p).map(|ph| (p, ph))
        })
        .collect();
    Ok(ring.map(|r| walker.winding(&r)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnomalyLabel {
    Normal,
    Backflow,
    Superluminal,
    Singular,
}

impl AnomalyLabel {
    pub fn name(self) -> &'static str {
        match self {
            AnomalyLabel::Normal => "normal",
            AnomalyLabel::Backflow => "backflow",
            AnomalyLabel::Superluminal => "superluminal",
            AnomalyLabel::Singular => "singular",
        }
    }
}

/// Where the local spectral bound `b` comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundProfile {
    /// `b = k` everywhere.
    FreeSpace,
    /// `b = n k` for `x < 0` (glass) and `b = k` for `x >= 0` (air).
    Interface { index: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundModel {
    pub profile: BoundProfile,
    /// Relative tolerance on the superluminal test: `Re p_z > b (1 + slack)`.
    pub slack: f64,
}

impl BoundModel {
    pub fn free_space() -> Self {
        BoundModel {
            profile: BoundProfile::FreeSpace,
            slack: 0.0,
        }
    }

    pub fn interface(index: f64) -> Result<Self> {
        if !(index.is_finite() && index >= 1.0) {
            return Err(Error::param("index", "must be finite and >= 1"));
        }
        Ok(BoundModel {
            profile: BoundProfile::Interface { index },
            slack: 0.0,
        })
    }

    pub fn with_slack(mut self, slack: f64) -> Result<Self> {
        if !(slack.is_finite() && slack >= 0.0) {
            return Err(Error::param("slack", "must be finite and >= 0"));
        }
        self.slack = slack;
        Ok(self)
    }

    /// Local bound `b` in rad/mm.
    pub fn bound(&self, k: f64, point: Vec3) -> f64 {
        match self.profile {
            BoundProfile::FreeSpace => k,
            BoundProfile::Interface { index } if point.x < 0.0 => index * k,
            BoundProfile::Interface { .. } => k,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LabelCounts {
    pub normal: usize,
    pub backflow: usize,
    pub superluminal: usize,
    pub singular: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnomalyMap {
    pub grid: PlaneGrid,
    pub bound: BoundModel,
    /// Row-major labels, one per grid sample.
    pub labels: Vec<AnomalyLabel>,
    /// `|Re p| > b`, the superoscillation flag (not part of the label).
    pub superoscillating: Vec<bool>,
}

impl AnomalyMap {
    pub fn label(&self, i: usize, j: usize) -> AnomalyLabel {
        self.labels[self.grid.index(i, j)]
    }

    pub fn counts(&self) -> LabelCounts {
        let mut c = LabelCounts::default();
        for l in &self.labels {
            match l {
                AnomalyLabel::Normal => c.normal += 1,
                AnomalyLabel::Backflow => c.backflow += 1,
                AnomalyLabel::Superluminal => c.superluminal += 1,
                AnomalyLabel::Singular => c.singular += 1,
            }
        }
        c
    }

    /// 4-connected components of cells carrying `label`, as `(i, j)` lists.
    pub fn components(&self, label: AnomalyLabel) -> Vec<Vec<(usize, usize)>> {
        let (n1, n2) = self.grid.shape();
        let mut seen = vec![false; n1 * n2];
        let mut out = Vec::new();
        for start in 0..n1 * n2 {
            if seen[start] || self.labels[start] != label {
                continue;
            }
            seen[start] = true;
            let mut stack = vec![(start / n2, start % n2)];
            let mut comp = Vec::new();
            while let Some((i, j)) = stack.pop() {
                comp.push((i, j));
                let mut visit = |a: usize, b: usize| {
                    let idx = a * n2 + b;
                    if !seen[idx] && self.labels[idx] == label {
                        seen[idx] = true;
                        stack.push((a, b));
                    }
                };
                if i > 0 {
                    visit(i - 1, j);
                }
                if i + 1 < n1 {
                    visit(i + 1, j);
                }
                if j > 0 {
                    visit(i, j - 1);
                }
                if j + 1 < n2 {
                    visit(i, j + 1);
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Label every sample of `grid`.
pub fn classify_anomalies<F: Field + ?Sized>(field: &F, grid: &PlaneGrid, bound: BoundModel) -> AnomalyMap {
    let floor = amplitude_floor(field, grid);
    let k = field.wave().k();
    let mut labels = Vec::with_capacity(grid.len());
    let mut superoscillating = Vec::with_capacity(grid.len());
    for p in grid.points() {
        let b = bound.bound(k, p);
        match local_momentum(&field.sample(p), floor) {
            Ok(m) => {
                let re = m.re_p();
                let label = if re.z < 0.0 {
                    AnomalyLabel::Backflow
                } else if re.z > b * (1.0 + bound.slack) {
                    AnomalyLabel::Superluminal
                } else {
                    AnomalyLabel::Normal
                };
                labels.push(label);
                superoscillating.push(re.norm() > b);
            }
            Err(_) => {
                labels.push(AnomalyLabel::Singular);
                superoscillating.push(false);
            }
        }
    }
    AnomalyMap {
        grid: *grid,
        bound,
        labels,
        superoscillating,
    }
}
