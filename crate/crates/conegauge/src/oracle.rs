//! Independent brute-force gauge computation and the fixture cones every
//! suite runs against.
//!
//! The bisection oracle shares nothing with the closed-form gauge or the
//! minimizing LP beyond cone membership itself: the set of feasible `t` in
//! `x - t u in K` is an upward-closed ray (adding `(t1 - t0)(-u)`, an
//! interior direction, keeps membership), so bisection over membership is a
//! correct and fully separate route to the same value.

use std::f64::consts::PI;

use crate::cone::{self, Cone, GeneratorCone, HalfspaceCone};
use crate::gauge::GaugeNorm;
use crate::retraction::RetractionPair;
use crate::tolerances::FEASIBILITY_TOL;
use crate::vector::Vector;
use crate::Error;

/// Gauge of `cone + u` at `x` by bisection on membership.
///
/// `tol` is the absolute bracket width at termination; pass
/// [`crate::tolerances::BISECTION_TOL`] unless a test needs otherwise.
pub fn gauge_by_bisection(cone: &Cone, u: &Vector, x: &Vector, tol: f64) -> Result<f64, Error> {
    Ok(gauge_by_bisection_traced(cone, u, x, tol)?.0)
}

/// Same as [`gauge_by_bisection`], returning the bracket trace: every
/// `(lo, hi)` the loop visited, with `lo` always infeasible and `hi` always
/// feasible.
pub fn gauge_by_bisection_traced(
    cone: &Cone,
    u: &Vector,
    x: &Vector,
    tol: f64,
) -> Result<(f64, Vec<(f64, f64)>), Error> {
    if u.dim() != cone.dim() || x.dim() != cone.dim() {
        return Err(Error::DimensionMismatch {
            expected: cone.dim(),
            got: if u.dim() != cone.dim() { u.dim() } else { x.dim() },
        });
    }
    let member = |t: f64| cone.contains(&(x - &u.scale(t)), FEASIBILITY_TOL);

    if member(0.0)? {
        return Ok((0.0, Vec::new()));
    }
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    let mut doublings = 0;
    while !member(hi)? {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 64 {
            return Err(Error::Internal(
                "bisection found no feasible bracket; -u is not interior".into(),
            ));
        }
    }
    let mut trace = vec![(lo, hi)];
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if member(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        trace.push((lo, hi));
    }
    Ok((0.5 * (lo + hi), trace))
}

/// An analytic formula for a fixture gauge, kept alongside its plain-text
/// description.
#[derive(Debug, Clone, Copy)]
pub struct ClosedForm {
    pub description: &'static str,
    pub eval: fn(&Vector) -> f64,
}

/// A reference cone shipped in both representations with a canonical apex.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub cone_h: HalfspaceCone,
    pub cone_v: GeneratorCone,
    pub apex: Vector,
    pub closed_form: Option<ClosedForm>,
}

impl Fixture {
    pub fn dim(&self) -> usize {
        self.cone_h.dim()
    }

    /// Gauge over the halfspace form (closed-form evaluation path).
    pub fn gauge_h(&self) -> Result<GaugeNorm, Error> {
        GaugeNorm::new(Cone::Halfspace(self.cone_h.clone()), self.apex.clone())
    }

    /// Gauge over the generator form (LP evaluation path).
    pub fn gauge_v(&self) -> Result<GaugeNorm, Error> {
        GaugeNorm::new(Cone::Generator(self.cone_v.clone()), self.apex.clone())
    }

    /// The retraction pair of the halfspace form.
    pub fn pair_h(&self) -> Result<RetractionPair, Error> {
        Ok(RetractionPair::new(self.gauge_h()?))
    }
}

fn cf_halfline(x: &Vector) -> f64 {
    x[0].max(0.0)
}

fn cf_orthant(x: &Vector) -> f64 {
    x.coords().iter().fold(0.0_f64, |m, &c| m.max(c))
}

fn cf_wedge(x: &Vector) -> f64 {
    (x[1] + x[0].abs()).max(0.0)
}

fn halfline_1d() -> Result<Fixture, Error> {
    let normal = Vector::from_slice(&[-1.0])?;
    Ok(Fixture {
        name: "halfline-1d",
        cone_h: cone::eliminate_redundancy(&HalfspaceCone::new(1, vec![normal.clone()])?)?,
        cone_v: GeneratorCone::new(1, vec![normal])?,
        apex: Vector::from_slice(&[1.0])?,
        closed_form: Some(ClosedForm {
            description: "max(0, x1)",
            eval: cf_halfline,
        }),
    })
}

fn orthant(n: usize, name: &'static str) -> Result<Fixture, Error> {
    let rows: Vec<Vector> = (0..n).map(|i| Vector::basis(n, i).scale(-1.0)).collect();
    Ok(Fixture {
        name,
        cone_h: cone::eliminate_redundancy(&HalfspaceCone::new(n, rows.clone())?)?,
        cone_v: GeneratorCone::new(n, rows)?,
        apex: Vector::ones(n),
        closed_form: Some(ClosedForm {
            description: "max(0, max_i x_i)",
            eval: cf_orthant,
        }),
    })
}

fn wedge_2d() -> Result<Fixture, Error> {
    let rows = vec![
        Vector::from_slice(&[-1.0, -1.0])?,
        Vector::from_slice(&[1.0, -1.0])?,
    ];
    Ok(Fixture {
        name: "wedge-2d",
        cone_h: cone::eliminate_redundancy(&HalfspaceCone::new(2, rows.clone())?)?,
        // The extreme rays of this wedge happen to point along its normals.
        cone_v: GeneratorCone::new(2, rows)?,
        apex: Vector::from_slice(&[0.0, 1.0])?,
        closed_form: Some(ClosedForm {
            description: "max(0, x2 + |x1|)",
            eval: cf_wedge,
        }),
    })
}

/// 16-facet polyhedral approximation of the circular cone around `-e3`
/// with 45-degree half-angle. Facet normals sit at equal angles; the
/// extreme rays sit at the angular midpoints with height `-cos(pi/16)`.
/// No analytic gauge formula is kept: this fixture is oracle-only.
fn circular_cone_16() -> Result<Fixture, Error> {
    const FACETS: usize = 16;
    let mut normals = Vec::with_capacity(FACETS);
    let mut generators = Vec::with_capacity(FACETS);
    let ray_height = (PI / FACETS as f64).cos();
    for k in 0..FACETS {
        let theta = 2.0 * PI * k as f64 / FACETS as f64;
        normals.push(Vector::from_slice(&[-theta.cos(), -theta.sin(), -1.0])?);
        let phi = theta + PI / FACETS as f64;
        generators.push(Vector::from_slice(&[phi.cos(), phi.sin(), -ray_height])?);
    }
    Ok(Fixture {
        name: "circular16-3d",
        cone_h: cone::eliminate_redundancy(&HalfspaceCone::new(3, normals)?)?,
        cone_v: GeneratorCone::new(3, generators)?,
        apex: Vector::from_slice(&[0.0, 0.0, 1.0])?,
        closed_form: None,
    })
}

/// The reference fixtures: a 1D halfline, nonpositive orthants in
/// dimensions 2, 3 and 6, a 2D wedge, and the 16-facet circular-cone
/// approximation in 3D.
pub fn fixture_suite() -> Result<Vec<Fixture>, Error> {
    Ok(vec![
        halfline_1d()?,
        orthant(2, "orthant-2d")?,
        orthant(3, "orthant-3d")?,
        orthant(6, "orthant-6d")?,
        wedge_2d()?,
        circular_cone_16()?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use crate::tolerances::BISECTION_TOL;

    fn v(coords: &[f64]) -> Vector {
        Vector::from_slice(coords).unwrap()
    }

    #[test]
    fn halfline_values() {
        let f = halfline_1d().unwrap();
        let k = Cone::Halfspace(f.cone_h.clone());
        assert_eq!(
            gauge_by_bisection(&k, &f.apex, &v(&[-7.0]), BISECTION_TOL).unwrap(),
            0.0
        );
        let q3 = gauge_by_bisection(&k, &f.apex, &v(&[3.0]), BISECTION_TOL).unwrap();
        assert!((q3 - 3.0).abs() <= 1e-8, "q(3) = {q3}");
    }

    #[test]
    fn homogeneity_along_apex() {
        let f = orthant(2, "orthant-2d").unwrap();
        let k = Cone::Halfspace(f.cone_h.clone());
        let x = f.apex.scale(5.0);
        let q = gauge_by_bisection(&k, &f.apex, &x, BISECTION_TOL).unwrap();
        assert!((q - 5.0).abs() <= 1e-8, "q(5u) = {q}");
    }

    #[test]
    fn wedge_value() {
        let f = wedge_2d().unwrap();
        let k = Cone::Halfspace(f.cone_h.clone());
        let q = gauge_by_bisection(&k, &f.apex, &v(&[2.0, 0.0]), BISECTION_TOL).unwrap();
        assert!((q - 2.0).abs() <= 1e-8, "q((2,0)) = {q}");
    }

    #[test]
    fn bracket_endpoints_stay_valid() {
        let f = wedge_2d().unwrap();
        let k = Cone::Halfspace(f.cone_h.clone());
        let x = v(&[1.5, 2.5]);
        let (_, trace) = gauge_by_bisection_traced(&k, &f.apex, &x, BISECTION_TOL).unwrap();
        assert!(!trace.is_empty());
        for (lo, hi) in trace {
            assert!(
                !k.contains(&(&x - &f.apex.scale(lo)), FEASIBILITY_TOL).unwrap(),
                "lo = {lo} became feasible"
            );
            assert!(
                k.contains(&(&x - &f.apex.scale(hi)), FEASIBILITY_TOL).unwrap(),
                "hi = {hi} became infeasible"
            );
        }
    }

    #[test]
    fn fixtures_are_well_formed() {
        let fixtures = fixture_suite().unwrap();
        assert_eq!(fixtures.len(), 6);
        let dims: Vec<usize> = fixtures.iter().map(|f| f.dim()).collect();
        assert_eq!(dims, vec![1, 2, 3, 6, 2, 3]);
        for f in &fixtures {
            assert!(f.cone_h.is_marked_irredundant());
            assert_eq!(f.cone_h.dim(), f.cone_v.dim());
            // Redundancy elimination must not have dropped genuine facets.
            let expected = match f.name {
                "halfline-1d" => 1,
                "orthant-2d" | "wedge-2d" => 2,
                "orthant-3d" => 3,
                "orthant-6d" => 6,
                "circular16-3d" => 16,
                other => panic!("unknown fixture {other}"),
            };
            assert_eq!(f.cone_h.normals().len(), expected, "fixture {}", f.name);
            // Both gauges construct: apex is interior on both routes.
            f.gauge_h().unwrap();
            f.gauge_v().unwrap();
        }
    }

    #[test]
    fn representations_agree_on_random_points() {
        let fixtures = fixture_suite().unwrap();
        let mut rng = sampling::rng_from_seed(31);
        for f in &fixtures {
            let h = Cone::Halfspace(f.cone_h.clone());
            let g = Cone::Generator(f.cone_v.clone());
            for _ in 0..100 {
                let x = sampling::sample_point(&mut rng, f.dim(), 10.0);
                // Points this far from the facets never straddle the
                // membership tolerance.
                let slack = f.cone_h.min_slack(&x).unwrap();
                if slack.abs() <= 1e-6 {
                    continue;
                }
                assert_eq!(
                    h.contains(&x, 1e-7).unwrap(),
                    g.contains(&x, 1e-7).unwrap(),
                    "fixture {} disagrees at {x}",
                    f.name
                );
            }
        }
    }
}
