//! Rectangular sampling planes.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{Axis, Vec3};

/// Uniform samples `lo..=hi` along one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub axis: Axis,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn new(axis: Axis, lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::param("grid", "sample counts must be >= 2"));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::param("grid", "ranges must be finite with lo < hi"));
        }
        Ok(AxisRange { axis, lo, hi, count })
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.count - 1) as f64
    }

    /// Sample `i`. Mirrored indices of a range symmetric about zero map to
    /// exactly negated coordinates.
    pub fn value(&self, i: usize) -> f64 {
        let n = (self.count - 1) as f64;
        let t = i as f64;
        // Interpolate from the nearer end so symmetric ranges stay symmetric.
        if 2 * i <= self.count - 1 {
            self.lo + (self.hi - self.lo) * (t / n)
        } else {
            self.hi - (self.hi - self.lo) * ((n - t) / n)
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

/// A sampling plane spanned by two distinct axes; the remaining coordinate is
/// held at `fixed`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneGrid {
    pub first: AxisRange,
    pub second: AxisRange,
    pub fixed: f64,
}

impl PlaneGrid {
    pub fn new(first: AxisRange, second: AxisRange, fixed: f64) -> Result<Self> {
        if first.axis == second.axis {
            return Err(Error::param("grid", "axes must differ"));
        }
        if !fixed.is_finite() {
            return Err(Error::param("grid", "fixed coordinate must be finite"));
        }
        Ok(PlaneGrid { first, second, fixed })
    }

    pub fn normal_axis(&self) -> Axis {
        Axis::ALL
            .into_iter()
            .find(|a| *a != self.first.axis && *a != self.second.axis)
            .expect("two distinct axes leave a third")
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.first.count, self.second.count)
    }

    pub fn len(&self) -> usize {
        self.first.count * self.second.count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major index: the second axis varies fastest.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.second.count + j
    }

    pub fn point(&self, i: usize, j: usize) -> Vec3 {
        self.point_at(self.first.value(i), self.second.value(j))
    }

    /// Point with in-plane coordinates `(u, v)` along the first and second axes.
    pub fn point_at(&self, u: f64, v: f64) -> Vec3 {
        Vec3::ZERO
            .with(self.normal_axis(), self.fixed)
            .with(self.first.axis, u)
            .with(self.second.axis, v)
    }

    /// All points in row-major order.
    pub fn points(&self) -> impl Iterator<Item = Vec3> + '_ {
        (0..self.first.count).flat_map(move |i| (0..self.second.count).map(move |j| self.point(i, j)))
    }
}
