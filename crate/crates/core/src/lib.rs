//! Wave-optics engine for local photon momentum.
//!
//! The crate evaluates a small catalog of analytic scalar optical fields
//! (Gaussian-beam interference, Bessel vortex beams, evanescent waves and a
//! two-wave total-internal-reflection field) together with their exact
//! gradients, and derives from them:
//!
//! * the complex local momentum `p = -i ∇ψ / ψ`, whose real part is the phase
//!   gradient (Madelung–Bohm current) and whose imaginary part is the osmotic
//!   term `-∇ ln|ψ|`;
//! * the orbital/spin split of the Poynting vector and the energy density;
//! * the Stokes-vector readout of a calcite weak-measurement set-up;
//! * gradient and scattering forces on a Rayleigh probe;
//! * RK4 streamlines of `Re p` / `Im p`, including Bessel helices;
//! * vortex detection by phase winding and backflow/superluminal labelling.
//!
//! Units: lengths in mm, `c = 1`, `ω = k`. Momenta are in rad/mm; velocities
//! are reported in units of `c` (that is, momenta divided by `k`).
//!
//! The crate is `no_std` and only needs `alloc` for trajectories and grids.

#![no_std]
#![warn(rust_2018_idioms, missing_copy_implementations, unused_qualifications)]

extern crate alloc;

pub mod anomaly;
pub mod error;
pub mod fields;
pub mod forces;
pub mod grid;
pub mod math;
pub mod observables;
pub mod special;
pub mod tracing;
pub mod weakmeasure;

pub use error::{Error, Result};
pub use fields::{Field, FieldSample, FieldSpec, WaveParameters};
pub use math::{Axis, CVec3, Vec3};
pub use num_complex::Complex64;
