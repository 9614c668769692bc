//! The mutually polar retraction pair induced by a gauge: `R x = q(x) u`
//! onto the ray spanned by the apex, and `Q = I - R` onto the cone. The
//! audit verifies idempotence, polarity, ranges, the boundary law for
//! exterior points, positive homogeneity, and subadditivity of both maps in
//! their range orders.

use serde::Serialize;

use crate::cone::{self, Cone, ConeOrderWitness};
use crate::gauge::GaugeNorm;
use crate::report::{CheckOutcome, ViolationTracker};
use crate::sampling::{self, rng_from_seed, DEFAULT_MAX_RADIUS};
use crate::tolerances::{CHECK_TOL, EXTERIOR_GAUGE_MIN, FEASIBILITY_TOL};
use crate::vector::Vector;
use crate::Error;

use rand::Rng;

/// The pair `R x = q(x) u`, `Q = I - R`. `Q + R = I` holds by construction;
/// the range of `R` is the ray `{ t u : t >= 0 }` and the range of `Q` is
/// the cone of the gauge.
#[derive(Debug, Clone)]
pub struct RetractionPair {
    gauge: GaugeNorm,
}

impl RetractionPair {
    pub fn new(gauge: GaugeNorm) -> Self {
        Self { gauge }
    }

    /// Builds the pair from a cone and an interior point `-u` of it.
    /// Fails with `ConeNotProper` or `ApexNotInterior` exactly as gauge
    /// construction does.
    pub fn build(cone: Cone, minus_u: &Vector) -> Result<Self, Error> {
        Ok(Self {
            gauge: GaugeNorm::new(cone, minus_u.scale(-1.0))?,
        })
    }

    pub fn gauge(&self) -> &GaugeNorm {
        &self.gauge
    }

    /// The ray direction `u`; `q(u) = 1`, so `R` is never the zero map.
    pub fn direction(&self) -> &Vector {
        self.gauge.apex()
    }

    pub fn dim(&self) -> usize {
        self.gauge.dim()
    }

    /// `R x = q(x) u`.
    pub fn apply_r(&self, x: &Vector) -> Result<Vector, Error> {
        Ok(self.direction().scale(self.gauge.eval(x)?))
    }

    /// `Q x = x - q(x) u`.
    pub fn apply_q(&self, x: &Vector) -> Result<Vector, Error> {
        Ok(x - &self.direction().scale(self.gauge.eval(x)?))
    }
}

/// Per-law outcomes of `audit_retraction`.
#[derive(Debug, Clone, Serialize)]
pub struct RetractionAuditReport {
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub idempotence_q: CheckOutcome,
    pub idempotence_r: CheckOutcome,
    pub polarity_qr: CheckOutcome,
    pub polarity_rq: CheckOutcome,
    pub range_q: CheckOutcome,
    pub range_r: CheckOutcome,
    pub boundary_q: CheckOutcome,
    pub homogeneity: CheckOutcome,
    pub subadditivity_q: CheckOutcome,
    pub subadditivity_r: CheckOutcome,
    /// Set when the boundary law could not be exercised (generator-only
    /// representation has no facet list).
    pub boundary_note: Option<String>,
}

impl RetractionAuditReport {
    pub fn checks(&self) -> [&CheckOutcome; 10] {
        [
            &self.idempotence_q,
            &self.idempotence_r,
            &self.polarity_qr,
            &self.polarity_rq,
            &self.range_q,
            &self.range_r,
            &self.boundary_q,
            &self.homogeneity,
            &self.subadditivity_q,
            &self.subadditivity_r,
        ]
    }

    pub fn all_pass(&self) -> bool {
        self.checks().iter().all(|c| c.pass)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Membership violation of `x` in the cone: how far the worst facet product
/// dips below zero (halfspace form) or the combination residual (generator
/// form).
fn membership_violation(cone: &Cone, x: &Vector) -> Result<f64, Error> {
    match cone {
        Cone::Halfspace(h) => Ok((-h.min_slack(x)?).max(0.0)),
        Cone::Generator(g) => g.membership_residual(x),
    }
}

/// Distance from `x` to the ray `{ t u : t >= 0 }`.
fn ray_distance(x: &Vector, u: &Vector) -> Result<f64, Error> {
    let t = (x.dot(u)? / u.dot(u)?).max(0.0);
    Ok((x - &u.scale(t)).norm2())
}

/// Audits all retraction laws on seeded samples plus the stencil.
///
/// The boundary law (exterior points land on the boundary of the range of
/// `Q`) needs the facet list, so it runs against an irredundant halfspace
/// form; samples with gauge value at most [`EXTERIOR_GAUGE_MIN`] count as
/// cone members and are excluded from that law. For generator-only cones
/// the law is skipped with an explicit note.
pub fn audit_retraction(
    pair: &RetractionPair,
    samples: usize,
    seed: u64,
) -> Result<RetractionAuditReport, Error> {
    let dim = pair.dim();
    let u = pair.direction().clone();
    let gauge = pair.gauge();

    let (boundary_cone, boundary_note) = match gauge.cone() {
        Cone::Halfspace(h) => {
            let lean = if h.is_marked_irredundant() {
                h.clone()
            } else {
                cone::eliminate_redundancy(h)?
            };
            (Some(lean), None)
        }
        Cone::Generator(_) => (
            None,
            Some(
                "boundary law skipped: cone available only in generator representation"
                    .to_string(),
            ),
        ),
    };

    let mut idempotence_q = ViolationTracker::new("idempotence_q", CHECK_TOL);
    let mut idempotence_r = ViolationTracker::new("idempotence_r", CHECK_TOL);
    let mut polarity_qr = ViolationTracker::new("polarity_qr", CHECK_TOL);
    let mut polarity_rq = ViolationTracker::new("polarity_rq", CHECK_TOL);
    let mut range_q = ViolationTracker::new("range_q", CHECK_TOL);
    let mut range_r = ViolationTracker::new("range_r", CHECK_TOL);
    let mut boundary_q = ViolationTracker::new("boundary_q", CHECK_TOL);
    let mut homogeneity = ViolationTracker::new("homogeneity", CHECK_TOL);
    let mut subadditivity_q = ViolationTracker::new("subadditivity_q", CHECK_TOL);
    let mut subadditivity_r = ViolationTracker::new("subadditivity_r", CHECK_TOL);

    let mut visit = |x: &Vector, y: &Vector, t: f64| -> Result<(), Error> {
        let qx = gauge.eval(x)?;
        let rx = pair.apply_r(x)?;
        let qimg = x - &rx;

        idempotence_q.observe((&pair.apply_q(&qimg)? - &qimg).norm2(), x);
        idempotence_r.observe((&pair.apply_r(&rx)? - &rx).norm2(), x);
        polarity_qr.observe(pair.apply_q(&rx)?.norm2(), x);
        polarity_rq.observe(pair.apply_r(&qimg)?.norm2(), x);

        range_q.observe(membership_violation(gauge.cone(), &qimg)?, x);
        range_r.observe(ray_distance(&rx, &u)?, x);

        if let Some(lean) = &boundary_cone {
            if qx > EXTERIOR_GAUGE_MIN {
                // Inside the cone but off every facet would violate the law;
                // outside the cone is range_q's business.
                boundary_q.observe(lean.min_slack(&qimg)?, x);
            }
        }

        let scaled = x.scale(t);
        let q_scaled = pair.apply_q(&scaled)?;
        let r_scaled = pair.apply_r(&scaled)?;
        let hq = (&q_scaled - &qimg.scale(t)).norm2() / (1.0 + qimg.norm2());
        let hr = (&r_scaled - &rx.scale(t)).norm2() / (1.0 + rx.norm2());
        homogeneity.observe(hq.max(hr), x);

        let qy = gauge.eval(y)?;
        let qxy = gauge.eval(&(x + y))?;
        let q_of_sum = pair.apply_q(&(x + y))?;
        let defect = &(&pair.apply_q(y)? + &qimg) - &q_of_sum;
        subadditivity_q.observe(membership_violation(gauge.cone(), &defect)?, x);
        subadditivity_r.observe(qxy - qx - qy, x);
        Ok(())
    };

    let mut extras = vec![u.clone(), u.scale(-1.0)];
    match gauge.cone() {
        Cone::Halfspace(h) => extras.extend(h.normals().iter().cloned()),
        Cone::Generator(g) => extras.extend(g.generators().iter().cloned()),
    }
    let grid = sampling::stencil(dim, &extras);
    for (i, x) in grid.iter().enumerate() {
        let y = &grid[(i + 1) % grid.len()];
        visit(x, y, 2.0)?;
        visit(x, y, 0.0)?;
    }

    let mut rng = rng_from_seed(seed);
    for _ in 0..samples {
        let x = sampling::sample_point(&mut rng, dim, DEFAULT_MAX_RADIUS);
        let y = sampling::sample_point(&mut rng, dim, DEFAULT_MAX_RADIUS);
        let t: f64 = rng.random::<f64>() * DEFAULT_MAX_RADIUS;
        visit(&x, &y, t)?;
    }

    Ok(RetractionAuditReport {
        seed,
        samples,
        tol: CHECK_TOL,
        idempotence_q: idempotence_q.into_outcome(),
        idempotence_r: idempotence_r.into_outcome(),
        polarity_qr: polarity_qr.into_outcome(),
        polarity_rq: polarity_rq.into_outcome(),
        range_q: range_q.into_outcome(),
        range_r: range_r.into_outcome(),
        boundary_q: boundary_q.into_outcome(),
        homogeneity: homogeneity.into_outcome(),
        subadditivity_q: subadditivity_q.into_outcome(),
        subadditivity_r: subadditivity_r.into_outcome(),
        boundary_note,
    })
}

/// The subadditivity defect of `Q` at `(x, y)` with its algebraic
/// certificate.
#[derive(Debug, Clone, Serialize)]
pub struct SubadditivityCertificate {
    /// Order witness for `Q(x+y) <=_M Qx + Qy`: the difference is the
    /// defect vector `d = Qx + Qy - Q(x+y)`.
    pub witness: ConeOrderWitness,
    /// `s = q(x) + q(y) - q(x+y)`, nonnegative up to rounding.
    pub scalar: f64,
    /// `|d - s(-u)|`: the defect collapses onto the ray through `-u`, an
    /// exact identity in real arithmetic.
    pub ray_residual: f64,
}

/// Computes the defect `d = Qx + Qy - Q(x+y)`, checks its membership in the
/// cone, and certifies the identity `d = (q(x) + q(y) - q(x+y)) (-u)`.
pub fn subadditivity_certificate(
    pair: &RetractionPair,
    x: &Vector,
    y: &Vector,
) -> Result<SubadditivityCertificate, Error> {
    let gauge = pair.gauge();
    let scalar = gauge.eval(x)? + gauge.eval(y)? - gauge.eval(&(x + y))?;
    let qx = pair.apply_q(x)?;
    let qy = pair.apply_q(y)?;
    let q_sum = pair.apply_q(&(x + y))?;
    let combined = &qx + &qy;
    let defect = &combined - &q_sum;
    let ray_residual = (&defect - &pair.direction().scale(-scalar)).norm2();
    // d = s(-u) is exact algebra; anything beyond rounding means the gauge
    // evaluations and the Q images came from different functionals.
    debug_assert!(
        ray_residual <= 1e-9 * (1.0 + scalar.abs()),
        "defect left the apex ray: residual {ray_residual}"
    );
    let member = gauge.cone().contains(&defect, FEASIBILITY_TOL)?;
    Ok(SubadditivityCertificate {
        witness: ConeOrderWitness {
            x: q_sum,
            y: combined,
            difference: defect,
            member,
        },
        scalar,
        ray_residual,
    })
}

/// Recovers the gauge from a black-box one-dimensional-range retraction as
/// `q(x) = (Rx . u) / (u . u)`, provided the sampled images certify that the
/// range really has rank one.
pub fn recover_gauge_value(
    r_images: &[Vector],
    u: &Vector,
    x_image: &Vector,
) -> Result<f64, Error> {
    const RANK_TOL: f64 = 1e-8;
    for img in r_images {
        if ray_distance_abs(img, u)? > RANK_TOL * (1.0 + img.norm2()) {
            return Err(Error::Internal(
                "sampled images leave the ray: range of R is not one-dimensional".into(),
            ));
        }
    }
    Ok(x_image.dot(u)? / u.dot(u)?)
}

fn ray_distance_abs(x: &Vector, u: &Vector) -> Result<f64, Error> {
    let t = x.dot(u)? / u.dot(u)?;
    Ok((x - &u.scale(t)).norm2())
}
