//! Numerical verification of the equivalent characterizations of a proper
//! asymmetric norm with respect to a candidate apex `u` with `p(u) = 1`:
//!
//! * (i)   `p(x - p(x) u) = 0` for all `x`;
//! * (ii)  `p(x - u) = 0` on the unit sphere of `p`;
//! * (iii) the image of `x -> x - p(x) u` equals the kernel cone of `p`.
//!
//! All three hold together or fail together; the checker samples each
//! separately and flags any disagreement as a tolerance miscalibration.
//! Gauge-built functionals pass by construction; symmetric norms fail with
//! macroscopic witnesses.

use serde::Serialize;

use crate::gauge::FunctionalHandle;
use crate::sampling::{self, rng_from_seed, DEFAULT_MAX_RADIUS};
use crate::tolerances::{APEX_UNIT_TOL, CHECK_TOL, FEASIBILITY_TOL};
use crate::vector::Vector;
use crate::Error;

/// Result of one condition sweep.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionOutcome {
    pub pass: bool,
    pub max_violation: f64,
    pub witness: Option<Vector>,
}

impl ConditionOutcome {
    fn from_sweep(max_violation: f64, witness: Option<Vector>) -> Self {
        Self {
            pass: max_violation <= CHECK_TOL,
            max_violation,
            witness,
        }
    }
}

/// Combined report over all conditions for one functional and apex.
#[derive(Debug, Clone, Serialize)]
pub struct PropernessReport {
    pub candidate_apex: Vector,
    pub seed: u64,
    pub samples_used: usize,
    pub condition_i: ConditionOutcome,
    pub condition_ii: ConditionOutcome,
    pub condition_iii_fwd: ConditionOutcome,
    pub condition_iii_bwd: ConditionOutcome,
    /// True when the three conditions agree (all pass or all fail);
    /// disagreement indicates tolerance miscalibration, not a property of
    /// the functional.
    pub equivalence_consistent: bool,
}

impl PropernessReport {
    pub fn all_pass(&self) -> bool {
        self.condition_i.pass
            && self.condition_ii.pass
            && self.condition_iii_fwd.pass
            && self.condition_iii_bwd.pass
    }

    pub fn all_fail(&self) -> bool {
        !self.condition_i.pass
            && !self.condition_ii.pass
            && !(self.condition_iii_fwd.pass && self.condition_iii_bwd.pass)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

fn ensure_unit_apex(p: &FunctionalHandle, u: &Vector) -> Result<(), Error> {
    let value = p.eval(u)?;
    if (value - 1.0).abs() > APEX_UNIT_TOL {
        return Err(Error::ApexNotUnit { value });
    }
    Ok(())
}

struct Sweep {
    max_violation: f64,
    witness: Option<Vector>,
}

impl Sweep {
    fn new() -> Self {
        Self {
            max_violation: 0.0,
            witness: None,
        }
    }

    fn observe(&mut self, violation: f64, point: &Vector) {
        if violation > self.max_violation {
            self.max_violation = violation;
            self.witness = Some(point.clone());
        }
    }

    fn outcome(self) -> ConditionOutcome {
        ConditionOutcome::from_sweep(self.max_violation, self.witness)
    }
}

/// Condition (i): `p(x - p(x) u)` over stencil and random points.
pub fn check_condition_i(
    p: &FunctionalHandle,
    u: &Vector,
    samples: usize,
    seed: u64,
) -> Result<ConditionOutcome, Error> {
    ensure_unit_apex(p, u)?;
    let mut rng = rng_from_seed(seed);
    let mut sweep = Sweep::new();
    let mut visit = |x: &Vector| -> Result<(), Error> {
        let px = p.eval(x)?;
        let projected = x - &u.scale(px);
        sweep.observe(p.eval(&projected)?, x);
        Ok(())
    };
    for x in stencil_for(p, u) {
        visit(&x)?;
    }
    for _ in 0..samples {
        let x = sampling::sample_point(&mut rng, p.dim(), DEFAULT_MAX_RADIUS);
        visit(&x)?;
    }
    Ok(sweep.outcome())
}

/// Condition (ii): `p(x - u)` over sampled points of the unit sphere of
/// `p`. Sphere points are random directions normalized by their value;
/// directions with vanishing value are redrawn, and the draw budget is
/// `100 * samples` before a starvation error.
pub fn check_condition_ii(
    p: &FunctionalHandle,
    u: &Vector,
    samples: usize,
    seed: u64,
) -> Result<ConditionOutcome, Error> {
    ensure_unit_apex(p, u)?;
    let mut rng = rng_from_seed(seed);
    let mut sweep = Sweep::new();
    let mut visit = |x: &Vector| -> Result<(), Error> {
        sweep.observe(p.eval(&(x - u))?, x);
        Ok(())
    };
    // The apex itself is on the sphere, as is every stencil point with a
    // usable value once normalized.
    visit(u)?;
    for x in stencil_for(p, u) {
        let px = p.eval(&x)?;
        if px > FEASIBILITY_TOL {
            visit(&x.scale(1.0 / px))?;
        }
    }
    let mut found = 0usize;
    let mut draws = 0usize;
    while found < samples {
        if draws >= 100 * samples {
            return Err(Error::SamplingStarved {
                requested: samples,
                found,
                draws,
            });
        }
        draws += 1;
        let x = sampling::sample_direction(&mut rng, p.dim());
        let px = p.eval(&x)?;
        if px > FEASIBILITY_TOL {
            visit(&x.scale(1.0 / px))?;
            found += 1;
        }
    }
    Ok(sweep.outcome())
}

/// Condition (iii), both inclusions.
///
/// Forward: every projection `x - p(x) u` lands in the kernel; numerically
/// the same sweep as condition (i), recorded separately for the equivalence
/// audit. Backward: every kernel member `k` is attained by the projection,
/// exhibited at `x = k` where the residual is `p(k) |u|`. Kernel members
/// come from the handle's sampler when it has one, otherwise from whatever
/// near-kernel points the forward sweep encountered.
pub fn check_condition_iii(
    p: &FunctionalHandle,
    u: &Vector,
    samples: usize,
    seed: u64,
) -> Result<(ConditionOutcome, ConditionOutcome), Error> {
    ensure_unit_apex(p, u)?;
    let mut rng = rng_from_seed(seed);
    let mut forward = Sweep::new();
    let mut kernel_points: Vec<Vector> = vec![Vector::zeros(p.dim())];

    let mut visit = |x: &Vector, kernel_points: &mut Vec<Vector>| -> Result<(), Error> {
        let px = p.eval(x)?;
        let projected = x - &u.scale(px);
        forward.observe(p.eval(&projected)?, x);
        if px <= FEASIBILITY_TOL {
            kernel_points.push(x.clone());
        }
        Ok(())
    };
    for x in stencil_for(p, u) {
        visit(&x, &mut kernel_points)?;
    }
    for _ in 0..samples {
        let x = sampling::sample_point(&mut rng, p.dim(), DEFAULT_MAX_RADIUS);
        visit(&x, &mut kernel_points)?;
    }

    if let Some(sampler) = p.kernel_sampler() {
        for _ in 0..samples {
            kernel_points.push(sampler.sample(&mut rng, DEFAULT_MAX_RADIUS));
        }
    }

    let norm_u = u.norm2();
    let mut backward = Sweep::new();
    for k in &kernel_points {
        // x = k attains k: the residual of the representation is p(k) |u|.
        backward.observe(p.eval(k)? * norm_u, k);
    }
    Ok((forward.outcome(), backward.outcome()))
}

/// Runs conditions (i), (ii) and (iii) and checks that they agree.
pub fn verify_equivalence(
    p: &FunctionalHandle,
    u: &Vector,
    samples: usize,
    seed: u64,
) -> Result<PropernessReport, Error> {
    let condition_i = check_condition_i(p, u, samples, seed)?;
    let condition_ii = check_condition_ii(p, u, samples, seed)?;
    let (condition_iii_fwd, condition_iii_bwd) = check_condition_iii(p, u, samples, seed)?;

    let iii_pass = condition_iii_fwd.pass && condition_iii_bwd.pass;
    let equivalence_consistent = condition_i.pass == condition_ii.pass
        && condition_ii.pass == iii_pass;

    Ok(PropernessReport {
        candidate_apex: u.clone(),
        seed,
        samples_used: samples,
        condition_i,
        condition_ii,
        condition_iii_fwd,
        condition_iii_bwd,
        equivalence_consistent,
    })
}

fn stencil_for(p: &FunctionalHandle, u: &Vector) -> Vec<Vector> {
    let mut extras = vec![u.clone(), u.scale(-1.0)];
    extras.extend(p.stencil_extras().iter().cloned());
    sampling::stencil(p.dim(), &extras)
}
