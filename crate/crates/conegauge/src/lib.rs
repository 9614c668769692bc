//! Finite-dimensional toolkit for asymmetric norms realized as gauges of
//! proper convex cones, and for the mutually polar retraction pairs they
//! induce.
//!
//! The crate builds everything from a small deterministic LP kernel:
//! polyhedral cones in halfspace or generator representation, the gauge of a
//! cone with respect to an interior-point apex, symmetrization, sphere
//! sampling, and seeded property checkers that audit the norm axioms, the
//! properness conditions, and the retraction laws on random samples plus a
//! deterministic stencil.
//!
//! ```
//! use conegauge::{Cone, GaugeNorm, HalfspaceCone, Vector};
//!
//! // Nonpositive orthant of the plane, gauge taken with apex (1, 1).
//! let normals = vec![
//!     Vector::from_slice(&[-1.0, 0.0]).unwrap(),
//!     Vector::from_slice(&[0.0, -1.0]).unwrap(),
//! ];
//! let cone = Cone::Halfspace(HalfspaceCone::new(2, normals).unwrap());
//! let gauge = GaugeNorm::new(cone, Vector::from_slice(&[1.0, 1.0]).unwrap()).unwrap();
//! let x = Vector::from_slice(&[-3.0, 2.0]).unwrap();
//! assert_eq!(gauge.eval(&x).unwrap(), 2.0);
//! ```

mod error;

pub mod cone;
pub mod gauge;
pub mod oracle;
pub mod properness;
pub mod report;
pub mod retraction;
pub mod sampling;
pub mod simplex;
pub mod tolerances;
pub mod vector;

pub use cone::{
    cone_order_witness, eliminate_redundancy, leq_cone, on_boundary, Cone, ConeJson,
    ConeOrderWitness, GeneratorCone, HalfspaceCone, MemberSampler,
};
pub use error::Error;
pub use gauge::{check_axioms, FunctionalHandle, GaugeNorm};
pub use oracle::{fixture_suite, gauge_by_bisection, ClosedForm, Fixture};
pub use properness::{
    check_condition_i, check_condition_ii, check_condition_iii, verify_equivalence,
    ConditionOutcome, PropernessReport,
};
pub use report::{CheckOutcome, CheckReport};
pub use retraction::{
    audit_retraction, recover_gauge_value, subadditivity_certificate, RetractionAuditReport,
    RetractionPair, SubadditivityCertificate,
};
pub use simplex::{lp_solve, LpProblem, LpSolution, VarBound};
pub use vector::Vector;
