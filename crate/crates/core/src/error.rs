use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    /// A field or configuration parameter is outside its valid range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },

    /// An incidence angle is at or below the critical angle.
    #[error("angle {angle} rad is not above the critical angle {critical} rad (no total internal reflection)")]
    NotTotalInternalReflection { angle: f64, critical: f64 },

    /// The amplitude (or intensity, or energy density) is below the singularity floor.
    #[error("singular point: amplitude below threshold")]
    Singular,

    /// The calcite shift is zero, so the Stokes pointer carries no momentum information.
    #[error("degenerate pointer: calcite shift must be nonzero")]
    DegeneratePointer,

    /// The first-order Stokes prediction assumes the (0, 1, 0) input state.
    #[error("first-order Stokes prediction requires the diagonal input polarization (S = (0, 1, 0))")]
    NonDiagonalInput,

    /// Grid spacing cannot resolve phase winding.
    #[error("grid spacing {spacing} mm along {axis} exceeds the resolution limit {limit} mm")]
    Resolution { axis: &'static str, spacing: f64, limit: f64 },

    /// A streamline seed sits on a singular point.
    #[error("singular seed: the momentum is undefined at the starting point")]
    SingularSeed,

    /// The operation does not apply to this field family.
    #[error("unsupported field family for {0}")]
    Unsupported(&'static str),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidParameter { name, reason }
    }
}
