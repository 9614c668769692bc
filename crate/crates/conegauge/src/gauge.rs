//! Asymmetric-norm functionals: the gauge of a proper cone with respect to
//! an interior-point apex, black-box functional handles, symmetrization,
//! kernel and unit-ball predicates, sphere sampling, and the norm-axiom
//! checker.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::cone::{Cone, GeneratorCone, MemberSampler};
use crate::report::{CheckReport, ViolationTracker};
use crate::sampling::{self, rng_from_seed, DEFAULT_MAX_RADIUS};
use crate::simplex::{lp_solve, LpProblem, LpSolution, VarBound};
use crate::tolerances::{APEX_MARGIN_MIN, CHECK_TOL, FEASIBILITY_TOL};
use crate::vector::Vector;
use crate::Error;

/// The gauge `q(x) = inf { t > 0 : x in t(K + u) }` of a proper cone `K`
/// with respect to an apex `u` whose opposite `-u` is interior to `K`.
///
/// `q` vanishes exactly on `K`, satisfies `q(u) = 1`, and is a proper
/// asymmetric norm.
#[derive(Debug, Clone)]
pub struct GaugeNorm {
    cone: Cone,
    apex: Vector,
    /// Facet denominators `d_i = a_i . u` (halfspace form only); all
    /// strictly negative because `-u` is interior.
    denominators: Option<Vec<f64>>,
    margin: f64,
}

impl GaugeNorm {
    /// Validates that the cone is proper and `-apex` is interior with a
    /// usable margin, then caches the facet denominators.
    ///
    /// The margin is the smallest facet product `a_i . (-u)` in halfspace
    /// form, and the best uniform lower bound on the generator coefficients
    /// representing `-u` in generator form. Margins below
    /// [`APEX_MARGIN_MIN`] are rejected: they make the denominators nearly
    /// zero and the gauge ill-conditioned.
    pub fn new(cone: Cone, apex: Vector) -> Result<Self, Error> {
        if apex.dim() != cone.dim() {
            return Err(Error::DimensionMismatch {
                expected: cone.dim(),
                got: apex.dim(),
            });
        }
        if !cone.is_proper()? {
            return Err(Error::ConeNotProper);
        }

        let (denominators, margin) = match &cone {
            Cone::Halfspace(h) => {
                let denoms: Vec<f64> = h
                    .normals()
                    .iter()
                    .map(|a| a.dot(&apex))
                    .collect::<Result<_, _>>()?;
                let margin = denoms.iter().fold(f64::INFINITY, |m, d| m.min(-d));
                (Some(denoms), margin)
            }
            Cone::Generator(g) => {
                let margin = generator_margin(g, &apex.scale(-1.0))?;
                (None, margin)
            }
        };
        if margin < APEX_MARGIN_MIN {
            return Err(Error::ApexNotInterior {
                margin,
                min: APEX_MARGIN_MIN,
            });
        }

        let gauge = Self {
            cone,
            apex,
            denominators,
            margin,
        };

        // q(u) = 1 holds by construction; re-derive it through the LP for
        // the generator form, where no closed form exists.
        if gauge.denominators.is_none() {
            let at_apex = gauge.eval_oracle(&gauge.apex)?;
            if (at_apex - 1.0).abs() > FEASIBILITY_TOL {
                return Err(Error::Internal(format!(
                    "gauge at apex evaluated to {at_apex}, expected 1"
                )));
            }
        }
        Ok(gauge)
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn apex(&self) -> &Vector {
        &self.apex
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    /// Interior margin of `-apex`, established at construction.
    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// A Lipschitz constant of the gauge under the Euclidean norm, available
    /// in halfspace form: each linear piece `(a_i . x) / d_i` has gradient
    /// norm `1 / |d_i|`, and a max of Lipschitz pieces keeps the largest
    /// constant. Generator form carries no certified bound.
    pub fn lipschitz_bound(&self) -> Option<f64> {
        self.denominators
            .as_ref()
            .map(|denoms| denoms.iter().fold(0.0_f64, |m, d| m.max(1.0 / d.abs())))
    }

    /// Gauge value.
    ///
    /// Halfspace form has a closed form: `x in t(K + u)` unpacks to
    /// `a_i . x >= t d_i` for every facet, and since every `d_i < 0` the
    /// feasible set is `t >= (a_i . x) / d_i`, so
    /// `q(x) = max(0, max_i (a_i . x) / d_i)`. Generator form defers to the
    /// LP oracle.
    pub fn eval(&self, x: &Vector) -> Result<f64, Error> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        match (&self.cone, &self.denominators) {
            (Cone::Halfspace(h), Some(denoms)) => {
                // Strict comparison keeps the result a clean +0.0 inside
                // the cone, where every ratio is <= 0.
                let mut best = 0.0_f64;
                for (a, d) in h.normals().iter().zip(denoms) {
                    let ratio = a.dot(x)? / d;
                    if ratio > best {
                        best = ratio;
                    }
                }
                Ok(best)
            }
            _ => self.eval_oracle(x),
        }
    }

    /// Gauge value by direct LP transcription: `min t >= 0` subject to
    /// `x - t u in K`. Independent of the closed form above.
    pub fn eval_oracle(&self, x: &Vector) -> Result<f64, Error> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        let solution = match &self.cone {
            Cone::Halfspace(h) => {
                // a_i . x - t d_i - w_i = 0, variables (t, w).
                let m = h.normals().len();
                let nvars = 1 + m;
                let mut objective = vec![0.0; nvars];
                objective[0] = 1.0;
                let mut rows = Vec::with_capacity(m);
                let mut rhs = Vec::with_capacity(m);
                let denoms = self.denominators.as_ref().expect("cached at construction");
                for (i, a) in h.normals().iter().enumerate() {
                    let mut row = vec![0.0; nvars];
                    row[0] = -denoms[i];
                    row[1 + i] = -1.0;
                    rows.push(row);
                    rhs.push(-a.dot(x)?);
                }
                lp_solve(&LpProblem::new(
                    objective,
                    rows,
                    rhs,
                    vec![VarBound::NonNegative; nvars],
                )?)?
            }
            Cone::Generator(g) => {
                // t u + G l = x, variables (t, l).
                let r = g.generators().len();
                let n = g.dim();
                let nvars = 1 + r;
                let mut objective = vec![0.0; nvars];
                objective[0] = 1.0;
                let mut rows = Vec::with_capacity(n);
                for d in 0..n {
                    let mut row = vec![0.0; nvars];
                    row[0] = self.apex[d];
                    for (j, gen) in g.generators().iter().enumerate() {
                        row[1 + j] = gen[d];
                    }
                    rows.push(row);
                }
                lp_solve(&LpProblem::new(
                    objective,
                    rows,
                    x.coords().to_vec(),
                    vec![VarBound::NonNegative; nvars],
                )?)?
            }
        };
        match solution {
            LpSolution::Optimal { point, .. } => {
                let t = point[0];
                Ok(if t > 0.0 { t } else { 0.0 })
            }
            other => Err(Error::Internal(format!(
                "gauge LP cannot be {other:?} when -u is interior"
            ))),
        }
    }

    /// Samples the unit sphere `{ x : q(x) = 1 }`: random directions with
    /// positive gauge, scaled to gauge one. Deterministic per seed.
    pub fn sphere_sample(&self, count: usize, seed: u64) -> Result<Vec<Vector>, Error> {
        let mut rng = rng_from_seed(seed);
        let mut out = Vec::with_capacity(count);
        let mut draws = 0usize;
        while out.len() < count {
            if draws >= 100 * count {
                return Err(Error::SamplingStarved {
                    requested: count,
                    found: out.len(),
                    draws,
                });
            }
            draws += 1;
            let v = sampling::sample_direction(&mut rng, self.dim());
            let q = self.eval(&v)?;
            if q > FEASIBILITY_TOL {
                out.push(v.scale(1.0 / q));
            }
        }
        Ok(out)
    }

    /// Draws points of the kernel cone `K`. Needs no further LP work: the
    /// halfspace form samples a ball around `-u` (its margin is a valid
    /// radius for unit normals), the generator form combines generators.
    pub fn kernel_sampler(&self) -> MemberSampler {
        match &self.cone {
            Cone::Halfspace(_) => {
                MemberSampler::from_interior(self.apex.scale(-1.0), self.margin)
            }
            Cone::Generator(g) => MemberSampler::from_generators(g),
        }
    }

    /// Wraps the gauge as a black-box functional handle carrying its kernel
    /// sampler and structure points for the checkers' stencil.
    pub fn functional(&self) -> FunctionalHandle {
        let mut extras = vec![self.apex.clone(), self.apex.scale(-1.0)];
        match &self.cone {
            Cone::Halfspace(h) => extras.extend(h.normals().iter().cloned()),
            Cone::Generator(g) => extras.extend(g.generators().iter().cloned()),
        }
        let name = format!("gauge-{}-{}d", self.cone.rep_label().to_lowercase(), self.dim());
        let g = self.clone();
        FunctionalHandle {
            dim: self.dim(),
            name,
            eval: Arc::new(move |x| g.eval(x)),
            kernel: Some(Arc::new(self.kernel_sampler())),
            stencil_extras: extras,
        }
    }
}

/// Best uniform lower bound `s` on coefficients representing `target` as a
/// nonnegative combination of the generators: `max s` s.t. `G l = target`,
/// `l_j >= s`. Positive exactly when `target` is in the relative interior.
fn generator_margin(g: &GeneratorCone, target: &Vector) -> Result<f64, Error> {
    let r = g.generators().len();
    let n = g.dim();
    // Variables (l_1..l_r, s, v_1..v_r) with l_j - s - v_j = 0.
    let nvars = r + 1 + r;
    let s_col = r;
    let v0 = r + 1;
    let mut objective = vec![0.0; nvars];
    objective[s_col] = -1.0;
    let mut rows = Vec::with_capacity(n + r);
    let mut rhs = Vec::with_capacity(n + r);
    for d in 0..n {
        let mut row = vec![0.0; nvars];
        for (j, gen) in g.generators().iter().enumerate() {
            row[j] = gen[d];
        }
        rows.push(row);
        rhs.push(target[d]);
    }
    for j in 0..r {
        let mut row = vec![0.0; nvars];
        row[j] = 1.0;
        row[s_col] = -1.0;
        row[v0 + j] = -1.0;
        rows.push(row);
        rhs.push(0.0);
    }
    let problem = LpProblem::new(objective, rows, rhs, vec![VarBound::NonNegative; nvars])?;
    match lp_solve(&problem)? {
        LpSolution::Optimal { point, .. } => Ok(point[s_col]),
        LpSolution::Infeasible => Ok(f64::NEG_INFINITY),
        LpSolution::Unbounded => Err(Error::Internal(
            "generator margin LP unbounded: cone is not pointed".into(),
        )),
    }
}

type EvalFn = dyn Fn(&Vector) -> Result<f64, Error> + Send + Sync;

/// A deterministic functional `p : R^n -> R` in black-box form, as consumed
/// by the axiom and properness checkers.
///
/// Handles built from a [`GaugeNorm`] also carry a kernel sampler and the
/// cone rows, which the checkers fold into their deterministic stencil.
#[derive(Clone)]
pub struct FunctionalHandle {
    dim: usize,
    name: String,
    eval: Arc<EvalFn>,
    kernel: Option<Arc<MemberSampler>>,
    stencil_extras: Vec<Vector>,
}

impl fmt::Debug for FunctionalHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionalHandle")
            .field("dim", &self.dim)
            .field("name", &self.name)
            .field("has_kernel_sampler", &self.kernel.is_some())
            .finish()
    }
}

impl FunctionalHandle {
    pub fn new(
        dim: usize,
        name: &str,
        eval: impl Fn(&Vector) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            name: name.to_string(),
            eval: Arc::new(move |x| Ok(eval(x))),
            kernel: None,
            stencil_extras: Vec::new(),
        }
    }

    /// The Euclidean norm: a symmetric norm, so it fails every properness
    /// condition and serves as the negative control.
    pub fn euclidean(dim: usize) -> Self {
        Self::new(dim, &format!("euclidean-{dim}d"), |x| x.norm2())
    }

    /// The raw linear functional `x -> c . x`. Not an asymmetric norm (it
    /// vanishes on the whole hyperplane `c . x = 0`) and used to exercise
    /// the definiteness detector.
    pub fn linear(c: Vector) -> Self {
        let dim = c.dim();
        Self::new(dim, &format!("linear-{dim}d"), move |x| {
            c.dot(x).expect("dimension checked by handle")
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kernel_sampler(&self) -> Option<&MemberSampler> {
        self.kernel.as_deref()
    }

    pub fn stencil_extras(&self) -> &[Vector] {
        &self.stencil_extras
    }

    pub fn eval(&self, x: &Vector) -> Result<f64, Error> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        (self.eval)(x)
    }

    /// The symmetrization `x -> max(p(x), p(-x))`, a genuine norm whenever
    /// `p` is an asymmetric norm.
    pub fn symmetrize(&self) -> Self {
        let inner = self.eval.clone();
        Self {
            dim: self.dim,
            name: format!("{}-sym", self.name),
            eval: Arc::new(move |x| {
                let plus = inner(x)?;
                let minus = inner(&x.scale(-1.0))?;
                Ok(plus.max(minus))
            }),
            // The kernel of the symmetrization is {0}; no sampler.
            kernel: None,
            stencil_extras: self.stencil_extras.clone(),
        }
    }

    /// Membership in the kernel cone `{ x : p(x) = 0 }` within `tol`.
    pub fn kernel_contains(&self, x: &Vector, tol: f64) -> Result<bool, Error> {
        Ok(self.eval(x)? <= tol)
    }

    /// Membership in the unit ball, open (`p < 1`) or closed (`p <= 1`).
    pub fn unit_ball_contains(&self, x: &Vector, strict: bool, tol: f64) -> Result<bool, Error> {
        let v = self.eval(x)?;
        Ok(if strict { v < 1.0 - tol } else { v <= 1.0 + tol })
    }
}

/// Checks the asymmetric-norm axioms on seeded samples plus the stencil:
/// positive homogeneity `p(tx) = t p(x)` for `t >= 0`, subadditivity
/// `p(x+y) <= p(x) + p(y)`, and definiteness (`p(x) = p(-x) = 0` only at
/// the origin). Failures are data, not errors.
pub fn check_axioms(p: &FunctionalHandle, samples: usize, seed: u64) -> Result<CheckReport, Error> {
    let mut rng = rng_from_seed(seed);
    let dim = p.dim();
    let mut homogeneity = ViolationTracker::new("positive_homogeneity", CHECK_TOL);
    let mut subadditivity = ViolationTracker::new("subadditivity", CHECK_TOL);
    let mut definiteness = ViolationTracker::new("definiteness", CHECK_TOL);

    let mut visit = |x: &Vector, y: &Vector, t: f64| -> Result<(), Error> {
        let px = p.eval(x)?;
        let ptx = p.eval(&x.scale(t))?;
        homogeneity.observe((ptx - t * px).abs() / (1.0 + px), x);

        let py = p.eval(y)?;
        let pxy = p.eval(&(x + y))?;
        subadditivity.observe(pxy - px - py, x);

        if px <= FEASIBILITY_TOL {
            let pmx = p.eval(&x.scale(-1.0))?;
            let norm = x.norm2();
            if pmx <= FEASIBILITY_TOL && norm > 10.0 * FEASIBILITY_TOL {
                definiteness.observe(norm, x);
            }
        }
        Ok(())
    };

    let grid = sampling::stencil(dim, p.stencil_extras());
    for (i, x) in grid.iter().enumerate() {
        let y = &grid[(i + 1) % grid.len()];
        visit(x, y, 2.0)?;
        visit(x, y, 0.0)?;
    }
    for _ in 0..samples {
        let x = sampling::sample_point(&mut rng, dim, DEFAULT_MAX_RADIUS);
        let y = sampling::sample_point(&mut rng, dim, DEFAULT_MAX_RADIUS);
        let t: f64 = rng.random::<f64>() * DEFAULT_MAX_RADIUS;
        visit(&x, &y, t)?;
    }

    Ok(CheckReport {
        subject: p.name().to_string(),
        seed,
        samples,
        checks: vec![
            homogeneity.into_outcome(),
            subadditivity.into_outcome(),
            definiteness.into_outcome(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::HalfspaceCone;

    fn v(coords: &[f64]) -> Vector {
        Vector::from_slice(coords).unwrap()
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Vector>();
        assert_send_sync::<Cone>();
        assert_send_sync::<GaugeNorm>();
        assert_send_sync::<FunctionalHandle>();
        assert_send_sync::<crate::retraction::RetractionPair>();
        assert_send_sync::<crate::report::CheckReport>();
    }

    fn orthant_gauge() -> GaugeNorm {
        let normals = vec![v(&[-1.0, 0.0]), v(&[0.0, -1.0])];
        let cone = Cone::Halfspace(HalfspaceCone::new(2, normals).unwrap());
        GaugeNorm::new(cone, v(&[1.0, 1.0])).unwrap()
    }

    fn wedge_gauge_h() -> GaugeNorm {
        let normals = vec![v(&[-1.0, -1.0]), v(&[1.0, -1.0])];
        let cone = Cone::Halfspace(HalfspaceCone::new(2, normals).unwrap());
        GaugeNorm::new(cone, v(&[0.0, 1.0])).unwrap()
    }

    #[test]
    fn orthant_closed_form() {
        let g = orthant_gauge();
        // q(x) = max(0, max_i x_i) for the nonpositive orthant with apex 1.
        assert_eq!(g.eval(&v(&[-3.0, 2.0])).unwrap(), 2.0);
        assert_eq!(g.eval(&v(&[-1.0, -5.0])).unwrap(), 0.0);
        assert_eq!(g.eval(&Vector::zeros(2)).unwrap(), 0.0);
    }

    #[test]
    fn gauge_of_apex_is_one() {
        let g = orthant_gauge();
        assert_eq!(g.eval(g.apex()).unwrap(), 1.0);
        let w = wedge_gauge_h();
        assert_eq!(w.eval(w.apex()).unwrap(), 1.0);
    }

    #[test]
    fn oracle_matches_closed_form() {
        let g = orthant_gauge();
        for x in [
            v(&[-3.0, 2.0]),
            v(&[5.0, 5.0]),
            v(&[0.25, -0.75]),
            Vector::zeros(2),
        ] {
            let fast = g.eval(&x).unwrap();
            let slow = g.eval_oracle(&x).unwrap();
            assert!(
                (fast - slow).abs() <= 1e-8 * (1.0 + fast.abs()),
                "mismatch at {x}: {fast} vs {slow}"
            );
        }
    }

    #[test]
    fn wedge_closed_form() {
        // q(x) = max(0, x2 + |x1|).
        let g = wedge_gauge_h();
        assert!((g.eval(&v(&[1.0, 0.0])).unwrap() - 1.0).abs() <= 1e-12);
        assert!((g.eval(&v(&[-3.0, 2.0])).unwrap() - 5.0).abs() <= 1e-12);
        assert_eq!(g.eval(&v(&[0.0, -2.0])).unwrap(), 0.0);
    }

    #[test]
    fn generator_form_defers_to_oracle() {
        let gens = vec![v(&[-1.0, -1.0]), v(&[1.0, -1.0])];
        let cone = Cone::Generator(GeneratorCone::new(2, gens).unwrap());
        let g = GaugeNorm::new(cone, v(&[0.0, 1.0])).unwrap();
        assert!((g.eval(&v(&[1.0, 0.0])).unwrap() - 1.0).abs() <= 1e-8);
        assert!((g.eval(&v(&[2.0, 0.0])).unwrap() - 2.0).abs() <= 1e-8);
    }

    #[test]
    fn rejects_boundary_apex() {
        let normals = vec![v(&[-1.0, 0.0]), v(&[0.0, -1.0])];
        let cone = Cone::Halfspace(HalfspaceCone::new(2, normals).unwrap());
        // -u = (-1, 0) sits on the facet x2 = 0: margin 0.
        let res = GaugeNorm::new(cone, v(&[1.0, 0.0]));
        assert!(matches!(res, Err(Error::ApexNotInterior { .. })));
    }

    #[test]
    fn rejects_improper_cone() {
        let halfplane = Cone::Halfspace(HalfspaceCone::new(2, vec![v(&[0.0, -1.0])]).unwrap());
        let res = GaugeNorm::new(halfplane, v(&[0.0, 1.0]));
        assert!(matches!(res, Err(Error::ConeNotProper)));
    }

    #[test]
    fn symmetrization_values() {
        let p = orthant_gauge().functional();
        let ps = p.symmetrize();
        // p((-3,2)) = 2, p((3,-2)) = 3, so p^s = 3.
        assert_eq!(ps.eval(&v(&[-3.0, 2.0])).unwrap(), 3.0);
        assert_eq!(ps.eval(&Vector::zeros(2)).unwrap(), 0.0);
        let x = v(&[0.3, -1.7]);
        assert_eq!(ps.eval(&x).unwrap(), ps.eval(&x.scale(-1.0)).unwrap());
    }

    #[test]
    fn kernel_and_ball_predicates() {
        let p = orthant_gauge().functional();
        assert!(p.kernel_contains(&v(&[-1.0, -5.0]), FEASIBILITY_TOL).unwrap());
        assert!(!p.kernel_contains(&v(&[1.0, 1.0]), FEASIBILITY_TOL).unwrap());
        let u = v(&[1.0, 1.0]);
        assert!(p.unit_ball_contains(&Vector::zeros(2), true, FEASIBILITY_TOL).unwrap());
        assert!(p.unit_ball_contains(&u, false, FEASIBILITY_TOL).unwrap());
        assert!(!p.unit_ball_contains(&u, true, FEASIBILITY_TOL).unwrap());
        assert!(!p.unit_ball_contains(&u.scale(2.0), false, FEASIBILITY_TOL).unwrap());
        let euclid = FunctionalHandle::euclidean(3);
        assert!(euclid.kernel_contains(&Vector::zeros(3), FEASIBILITY_TOL).unwrap());
        assert!(!euclid
            .kernel_contains(&v(&[0.0, 1e-3, 0.0]), FEASIBILITY_TOL)
            .unwrap());
    }

    #[test]
    fn sphere_sampling() {
        let g = orthant_gauge();
        let pts = g.sphere_sample(64, 9).unwrap();
        assert_eq!(pts.len(), 64);
        for x in &pts {
            let q = g.eval(x).unwrap();
            assert!((q - 1.0).abs() <= 1e-9, "off-sphere sample {x}: q = {q}");
            // Closed-form sphere of the orthant gauge: max coordinate is 1.
            let m = x.coords().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!((m - 1.0).abs() <= 1e-9);
        }
        let again = g.sphere_sample(64, 9).unwrap();
        assert_eq!(pts, again);
    }

    #[test]
    fn axioms_pass_for_gauge_and_fail_for_linear() {
        let report = check_axioms(&orthant_gauge().functional(), 2000, 3).unwrap();
        assert!(report.all_pass(), "{report:?}");

        let euclid = check_axioms(&FunctionalHandle::euclidean(2), 2000, 3).unwrap();
        assert!(euclid.all_pass());

        let linear = check_axioms(&FunctionalHandle::linear(v(&[1.0, 0.0])), 2000, 3).unwrap();
        let definiteness = linear.check("definiteness").unwrap();
        assert!(!definiteness.pass);
        assert!(definiteness
            .witnesses
            .iter()
            .any(|w| w[0].abs() <= 1e-9 && w[1].abs() > 1e-3));
        assert!(linear.check("positive_homogeneity").unwrap().pass);
        assert!(linear.check("subadditivity").unwrap().pass);
    }
}
