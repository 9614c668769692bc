use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector must have at least one coordinate")]
    EmptyVector,

    #[error("non-finite coordinate at index {index}")]
    NonFinite { index: usize },

    #[error("row {index} is zero: normals and generators must be nonzero")]
    ZeroRow { index: usize },

    #[error("problem too large: {vars} variables x {constraints} constraints exceeds the desk-scale caps")]
    ProblemTooLarge { vars: usize, constraints: usize },

    #[error("simplex stalled after {iterations} pivots")]
    Stalled { iterations: usize },

    #[error("cone is not full-dimensional")]
    NotFullDimensional,

    #[error("cone not proper")]
    ConeNotProper,

    #[error("apex not interior: margin {margin:.3e} is below the minimum {min:.3e}")]
    ApexNotInterior { margin: f64, min: f64 },

    #[error("candidate apex is not unit: p(u) = {value}")]
    ApexNotUnit { value: f64 },

    #[error("halfspace representation is not marked irredundant; eliminate redundancy first")]
    NotIrredundant,

    #[error("point lies outside the cone: residual {residual:.3e}")]
    OutsideCone { residual: f64 },

    #[error("sphere sampling starved: found {found} of {requested} points in {draws} draws")]
    SamplingStarved {
        requested: usize,
        found: usize,
        draws: usize,
    },

    #[error("unknown cone representation {0:?}: expected \"H\" or \"V\"")]
    UnknownRep(String),

    #[error("internal invariant violation: {0}")]
    Internal(String),
}
