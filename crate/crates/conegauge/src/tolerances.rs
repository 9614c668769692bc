//! Numerical tolerances used across the crate.
//!
//! Every threshold is defined here once and referenced by name, so there is a
//! single place to audit when a check misbehaves near machine precision.

/// Absolute tolerance on linear-constraint residuals.
///
/// This is the single source of truth for LP feasibility, halfspace
/// membership (normals are stored unit-normalized, so absolute residuals are
/// meaningful) and generator-combination residuals.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Relative tolerance when two independently computed values of the same
/// quantity are compared, as in `|a - b| <= VALUE_REL_TOL * (1 + |a|)`.
pub const VALUE_REL_TOL: f64 = 1e-8;

/// Pass/fail threshold on the max violation recorded by a property check.
pub const CHECK_TOL: f64 = 1e-8;

/// Minimum interior margin accepted for a gauge apex. Apexes closer to the
/// cone boundary make the facet denominators nearly zero, so construction
/// rejects them outright.
pub const APEX_MARGIN_MIN: f64 = 1e-6;

/// Tolerance on `|p(u) - 1|` for a candidate apex of a functional.
pub const APEX_UNIT_TOL: f64 = 1e-6;

/// Absolute bracket width at which gauge bisection stops. One order tighter
/// than the comparison tolerances so oracle error never dominates a check.
pub const BISECTION_TOL: f64 = 1e-10;

/// Floating-point slack allowed on the decomposition `Qx + Rx = x`, which is
/// exact in real arithmetic.
pub const DECOMPOSITION_TOL: f64 = 1e-12;

/// Samples with gauge value at or below this threshold are treated as cone
/// members by the boundary audit, keeping facet-level noise out of the
/// exterior-point check.
pub const EXTERIOR_GAUGE_MIN: f64 = 1e-3;

/// Simplex pivot budget, both phases combined. Exceeding it is an explicit
/// error, never a fallback to a possibly wrong answer.
pub const LP_ITERATION_CAP: usize = 10_000;
