//! Polyhedral convex cones in halfspace or generator representation, with
//! the predicates the rest of the crate builds on: membership, pointedness,
//! interior points, properness, boundary tests and the induced partial order.
//!
//! Both representations store unit-normalized rows, so absolute residual
//! tolerances are meaningful everywhere.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::simplex::{lp_solve, LpProblem, LpSolution, VarBound};
use crate::tolerances::FEASIBILITY_TOL;
use crate::vector::Vector;
use crate::Error;

/// Rows whose Euclidean norm is below this are rejected as zero.
const ZERO_ROW_TOL: f64 = 1e-12;

fn normalize_rows(dim: usize, rows: Vec<Vector>) -> Result<Vec<Vector>, Error> {
    if rows.is_empty() {
        return Err(Error::EmptyVector);
    }
    let mut out = Vec::with_capacity(rows.len());
    for (index, row) in rows.into_iter().enumerate() {
        if row.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: row.dim(),
            });
        }
        let norm = row.norm2();
        if norm < ZERO_ROW_TOL {
            return Err(Error::ZeroRow { index });
        }
        out.push(row.scale(1.0 / norm));
    }
    Ok(out)
}

/// Cone `K = { x : a_i . x >= 0 for all i }` given by inward unit normals.
///
/// Closedness and convexity are automatic for this representation.
#[derive(Debug, Clone)]
pub struct HalfspaceCone {
    dim: usize,
    normals: Vec<Vector>,
    irredundant: bool,
}

impl HalfspaceCone {
    pub fn new(dim: usize, normals: Vec<Vector>) -> Result<Self, Error> {
        Ok(Self {
            dim,
            normals: normalize_rows(dim, normals)?,
            irredundant: false,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normals(&self) -> &[Vector] {
        &self.normals
    }

    /// Whether this representation has been through redundancy elimination.
    pub fn is_marked_irredundant(&self) -> bool {
        self.irredundant
    }

    /// Smallest facet product `min_i a_i . x`; nonnegative exactly on `K`.
    pub fn min_slack(&self, x: &Vector) -> Result<f64, Error> {
        let mut min = f64::INFINITY;
        for a in &self.normals {
            min = min.min(a.dot(x)?);
        }
        Ok(min)
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> Result<bool, Error> {
        Ok(self.min_slack(x)? >= -tol)
    }
}

/// Cone `K = { sum_j l_j g_j : l_j >= 0 }` given by unit generators.
#[derive(Debug, Clone)]
pub struct GeneratorCone {
    dim: usize,
    generators: Vec<Vector>,
}

impl GeneratorCone {
    pub fn new(dim: usize, generators: Vec<Vector>) -> Result<Self, Error> {
        Ok(Self {
            dim,
            generators: normalize_rows(dim, generators)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    /// Smallest l1 distance from `x` to a nonnegative combination of the
    /// generators, computed as the LP
    /// `min sum(s+ + s-)` s.t. `G l + s+ - s- = x`, `l, s >= 0`.
    pub fn membership_residual(&self, x: &Vector) -> Result<f64, Error> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        let r = self.generators.len();
        let n = self.dim;
        let nvars = r + 2 * n;
        let mut objective = vec![0.0; nvars];
        for c in objective.iter_mut().skip(r) {
            *c = 1.0;
        }
        let mut rows = Vec::with_capacity(n);
        for d in 0..n {
            let mut row = vec![0.0; nvars];
            for (j, g) in self.generators.iter().enumerate() {
                row[j] = g[d];
            }
            row[r + d] = 1.0;
            row[r + n + d] = -1.0;
            rows.push(row);
        }
        let rhs = x.coords().to_vec();
        let problem = LpProblem::new(objective, rows, rhs, vec![VarBound::NonNegative; nvars])?;
        match lp_solve(&problem)? {
            LpSolution::Optimal { objective, .. } => Ok(objective.max(0.0)),
            other => Err(Error::Internal(format!(
                "generator membership LP is always feasible and bounded, got {other:?}"
            ))),
        }
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> Result<bool, Error> {
        Ok(self.membership_residual(x)? <= tol)
    }
}

/// A polyhedral cone in whichever representation it was supplied.
#[derive(Debug, Clone)]
pub enum Cone {
    Halfspace(HalfspaceCone),
    Generator(GeneratorCone),
}

impl Cone {
    pub fn dim(&self) -> usize {
        match self {
            Cone::Halfspace(h) => h.dim(),
            Cone::Generator(g) => g.dim(),
        }
    }

    pub fn rep_label(&self) -> &'static str {
        match self {
            Cone::Halfspace(_) => "H",
            Cone::Generator(_) => "V",
        }
    }

    pub fn as_halfspace(&self) -> Option<&HalfspaceCone> {
        match self {
            Cone::Halfspace(h) => Some(h),
            Cone::Generator(_) => None,
        }
    }

    pub fn as_generator(&self) -> Option<&GeneratorCone> {
        match self {
            Cone::Generator(g) => Some(g),
            Cone::Halfspace(_) => None,
        }
    }

    /// Membership within an absolute residual tolerance.
    pub fn contains(&self, x: &Vector, tol: f64) -> Result<bool, Error> {
        match self {
            Cone::Halfspace(h) => h.contains(x, tol),
            Cone::Generator(g) => g.contains(x, tol),
        }
    }

    /// `K` is pointed when `K n (-K) = {0}`.
    ///
    /// Halfspace form: the normals span the whole space. Generator form: the
    /// LP `max sum(mu)` s.t. `G mu = 0`, `0 <= mu <= 1` has optimum zero
    /// (any nontrivial vanishing combination scales to one with sum >= 1).
    pub fn is_pointed(&self) -> Result<bool, Error> {
        match self {
            Cone::Halfspace(h) => Ok(rank(&h.normals) == h.dim),
            Cone::Generator(g) => {
                let r = g.generators.len();
                let n = g.dim;
                // Variables (mu_1..mu_r, s_1..s_r) with mu_j + s_j = 1.
                let nvars = 2 * r;
                let mut objective = vec![0.0; nvars];
                for c in objective.iter_mut().take(r) {
                    *c = -1.0;
                }
                let mut rows = Vec::with_capacity(n + r);
                let mut rhs = Vec::with_capacity(n + r);
                for d in 0..n {
                    let mut row = vec![0.0; nvars];
                    for (j, gen) in g.generators.iter().enumerate() {
                        row[j] = gen[d];
                    }
                    rows.push(row);
                    rhs.push(0.0);
                }
                for j in 0..r {
                    let mut row = vec![0.0; nvars];
                    row[j] = 1.0;
                    row[r + j] = 1.0;
                    rows.push(row);
                    rhs.push(1.0);
                }
                let problem =
                    LpProblem::new(objective, rows, rhs, vec![VarBound::NonNegative; nvars])?;
                match lp_solve(&problem)? {
                    LpSolution::Optimal { objective, .. } => {
                        // Optimum of max sum(mu) is either 0 or at least 1.
                        Ok(-objective < 0.5)
                    }
                    other => Err(Error::Internal(format!(
                        "pointedness LP is always feasible and bounded, got {other:?}"
                    ))),
                }
            }
        }
    }

    /// A point of the topological interior, or `NotFullDimensional`.
    ///
    /// Halfspace form solves `max s` s.t. `a_i . x >= s`, `|x|_inf <= 1`.
    /// Generator form returns the sum of the generators once their span is
    /// verified to be the whole space; positive combinations lie in the
    /// relative interior, which is then the interior.
    pub fn interior_point(&self) -> Result<Vector, Error> {
        match self {
            Cone::Halfspace(h) => {
                let (point, margin) = halfspace_interior(h)?;
                if margin <= FEASIBILITY_TOL {
                    return Err(Error::NotFullDimensional);
                }
                Ok(point)
            }
            Cone::Generator(g) => {
                if rank(&g.generators) < g.dim {
                    return Err(Error::NotFullDimensional);
                }
                let mut sum = Vector::zeros(g.dim);
                for gen in &g.generators {
                    sum = &sum + gen;
                }
                Ok(sum)
            }
        }
    }

    /// Convex, pointed, closed and with nonempty interior. Convexity and
    /// closedness hold for every polyhedral representation, so this reduces
    /// to pointedness plus full-dimensionality.
    pub fn is_proper(&self) -> Result<bool, Error> {
        if !self.is_pointed()? {
            return Ok(false);
        }
        match self.interior_point() {
            Ok(_) => Ok(true),
            Err(Error::NotFullDimensional) => Ok(false),
            Err(e) => Err(e),
        }
    }
}

/// Maximize `s` s.t. `a_i . x >= s`, `|x|_inf <= 1`; returns the optimizer
/// and the achieved margin.
fn halfspace_interior(cone: &HalfspaceCone) -> Result<(Vector, f64), Error> {
    let n = cone.dim;
    let m = cone.normals.len();
    // Variables: x (free, n), s (>= 0), w (m), p (n), q (n).
    let nvars = n + 1 + m + 2 * n;
    let s_col = n;
    let w0 = n + 1;
    let p0 = w0 + m;
    let q0 = p0 + n;

    let mut objective = vec![0.0; nvars];
    objective[s_col] = -1.0; // max s

    let mut rows = Vec::with_capacity(m + 2 * n);
    let mut rhs = Vec::with_capacity(m + 2 * n);
    for (i, a) in cone.normals.iter().enumerate() {
        let mut row = vec![0.0; nvars];
        for d in 0..n {
            row[d] = a[d];
        }
        row[s_col] = -1.0;
        row[w0 + i] = -1.0;
        rows.push(row);
        rhs.push(0.0);
    }
    for d in 0..n {
        let mut row = vec![0.0; nvars];
        row[d] = 1.0;
        row[p0 + d] = 1.0;
        rows.push(row);
        rhs.push(1.0);
        let mut row = vec![0.0; nvars];
        row[d] = -1.0;
        row[q0 + d] = 1.0;
        rows.push(row);
        rhs.push(1.0);
    }

    let mut bounds = vec![VarBound::NonNegative; nvars];
    for b in bounds.iter_mut().take(n) {
        *b = VarBound::Free;
    }

    let problem = LpProblem::new(objective, rows, rhs, bounds)?;
    match lp_solve(&problem)? {
        LpSolution::Optimal { point, .. } => {
            let x = Vector::new(point.coords()[..n].to_vec())?;
            let margin = point[s_col];
            Ok((x, margin))
        }
        other => Err(Error::Internal(format!(
            "interior-point LP is always feasible and bounded, got {other:?}"
        ))),
    }
}

/// Rank of a list of vectors by Gaussian elimination with partial pivoting.
fn rank(rows: &[Vector]) -> usize {
    const RANK_TOL: f64 = 1e-9;
    if rows.is_empty() {
        return 0;
    }
    let n = rows[0].dim();
    let mut mat: Vec<Vec<f64>> = rows.iter().map(|r| r.coords().to_vec()).collect();
    let mut rank = 0;
    for col in 0..n {
        let pivot = (rank..mat.len()).max_by(|&a, &b| {
            mat[a][col]
                .abs()
                .partial_cmp(&mat[b][col].abs())
                .expect("finite entries")
        });
        let Some(pr) = pivot else { break };
        if mat[pr][col].abs() <= RANK_TOL {
            continue;
        }
        mat.swap(rank, pr);
        let inv = 1.0 / mat[rank][col];
        let (top, bottom) = mat.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in bottom {
            let f = row[col] * inv;
            if f != 0.0 {
                for (v, p) in row[col..n].iter_mut().zip(&pivot_row[col..n]) {
                    *v -= f * p;
                }
            }
        }
        rank += 1;
        if rank == mat.len() {
            break;
        }
    }
    rank
}

/// True when `x` sits on the boundary of the cone: some facet is active
/// within `tol`. Requires an irredundant representation (a redundant facet
/// could report a spurious activity) and `x` inside the cone.
pub fn on_boundary(cone: &HalfspaceCone, x: &Vector, tol: f64) -> Result<bool, Error> {
    if !cone.irredundant {
        return Err(Error::NotIrredundant);
    }
    let ms = cone.min_slack(x)?;
    if ms < -tol {
        return Err(Error::OutsideCone { residual: -ms });
    }
    Ok(ms <= tol)
}

/// The order `x <=_K y  iff  y - x in K`.
pub fn leq_cone(x: &Vector, y: &Vector, cone: &Cone, tol: f64) -> Result<bool, Error> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    cone.contains(&(y - x), tol)
}

/// Evidence record for one comparison in the cone order.
#[derive(Debug, Clone, Serialize)]
pub struct ConeOrderWitness {
    pub x: Vector,
    pub y: Vector,
    /// `y - x`, the vector whose membership decides the comparison.
    pub difference: Vector,
    pub member: bool,
}

pub fn cone_order_witness(
    x: &Vector,
    y: &Vector,
    cone: &Cone,
    tol: f64,
) -> Result<ConeOrderWitness, Error> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    let difference = y - x;
    let member = cone.contains(&difference, tol)?;
    Ok(ConeOrderWitness {
        x: x.clone(),
        y: y.clone(),
        difference,
        member,
    })
}

/// Removes every normal implied by the others and marks the result
/// irredundant.
///
/// Normal `a_i` is redundant when `min a_i . x` over the region cut out by
/// the remaining normals (boxed to `|x|_inf <= 1`) cannot go below zero.
/// Exact duplicates are collapsed first, keeping the first occurrence.
pub fn eliminate_redundancy(cone: &HalfspaceCone) -> Result<HalfspaceCone, Error> {
    const DUP_TOL: f64 = 1e-12;
    let mut rows: Vec<Vector> = Vec::with_capacity(cone.normals.len());
    for cand in &cone.normals {
        if !rows.iter().any(|kept| kept.distance_inf(cand) <= DUP_TOL) {
            rows.push(cand.clone());
        }
    }

    let mut i = 0;
    while i < rows.len() {
        if rows.len() == 1 {
            break;
        }
        let others: Vec<&Vector> = rows
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v)
            .collect();
        let min = min_over_region(&rows[i], &others)?;
        if min >= -FEASIBILITY_TOL {
            rows.remove(i);
        } else {
            i += 1;
        }
    }

    Ok(HalfspaceCone {
        dim: cone.dim,
        normals: rows,
        irredundant: true,
    })
}

/// `min a . x` s.t. `b_j . x >= 0` for all j, `|x|_inf <= 1`.
fn min_over_region(a: &Vector, others: &[&Vector]) -> Result<f64, Error> {
    let n = a.dim();
    let m = others.len();
    // Variables: x (free, n), w (m), p (n), q (n).
    let nvars = n + m + 2 * n;
    let w0 = n;
    let p0 = w0 + m;
    let q0 = p0 + n;

    let mut objective = vec![0.0; nvars];
    for d in 0..n {
        objective[d] = a[d];
    }

    let mut rows = Vec::with_capacity(m + 2 * n);
    let mut rhs = Vec::with_capacity(m + 2 * n);
    for (j, b) in others.iter().enumerate() {
        let mut row = vec![0.0; nvars];
        for d in 0..n {
            row[d] = b[d];
        }
        row[w0 + j] = -1.0;
        rows.push(row);
        rhs.push(0.0);
    }
    for d in 0..n {
        let mut row = vec![0.0; nvars];
        row[d] = 1.0;
        row[p0 + d] = 1.0;
        rows.push(row);
        rhs.push(1.0);
        let mut row = vec![0.0; nvars];
        row[d] = -1.0;
        row[q0 + d] = 1.0;
        rows.push(row);
        rhs.push(1.0);
    }

    let mut bounds = vec![VarBound::NonNegative; nvars];
    for b in bounds.iter_mut().take(n) {
        *b = VarBound::Free;
    }

    let problem = LpProblem::new(objective, rows, rhs, bounds)?;
    match lp_solve(&problem)? {
        LpSolution::Optimal { objective, .. } => Ok(objective),
        other => Err(Error::Internal(format!(
            "facet-redundancy LP is always feasible and bounded, got {other:?}"
        ))),
    }
}

/// Draws points of a cone. Construction does whatever LP work is needed;
/// sampling itself runs no LP and is deterministic per RNG state.
#[derive(Debug, Clone)]
pub struct MemberSampler {
    dim: usize,
    kind: SamplerKind,
}

#[derive(Debug, Clone)]
enum SamplerKind {
    /// Nonnegative combinations of the stored generators.
    Generators(Vec<Vector>),
    /// Scaled points of a ball around an interior point.
    InteriorBall { center: Vector, radius: f64 },
}

impl MemberSampler {
    pub fn new(cone: &Cone) -> Result<Self, Error> {
        match cone {
            Cone::Generator(g) => Ok(Self {
                dim: g.dim(),
                kind: SamplerKind::Generators(g.generators.clone()),
            }),
            Cone::Halfspace(h) => {
                let (center, margin) = halfspace_interior(h)?;
                if margin <= FEASIBILITY_TOL {
                    return Err(Error::NotFullDimensional);
                }
                Ok(Self::from_interior(center, margin))
            }
        }
    }

    /// Samples nonnegative combinations of the given generators. Never
    /// needs LP work.
    pub fn from_generators(cone: &GeneratorCone) -> Self {
        Self {
            dim: cone.dim(),
            kind: SamplerKind::Generators(cone.generators.clone()),
        }
    }

    /// Builds a halfspace-style sampler from a known interior point and its
    /// facet margin (with unit normals the margin is a valid ball radius).
    pub fn from_interior(center: Vector, margin: f64) -> Self {
        Self {
            dim: center.dim(),
            kind: SamplerKind::InteriorBall {
                center,
                radius: 0.9 * margin,
            },
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R, max_scale: f64) -> Vector {
        match &self.kind {
            SamplerKind::Generators(gens) => {
                let mut sum = Vector::zeros(self.dim);
                for g in gens {
                    let lambda: f64 = rng.random::<f64>() * max_scale;
                    sum = &sum + &g.scale(lambda);
                }
                sum
            }
            SamplerKind::InteriorBall { center, radius } => {
                let dir = crate::sampling::sample_direction(rng, self.dim);
                let rho: f64 = rng.random::<f64>();
                let t: f64 = rng.random::<f64>() * max_scale;
                (center + &dir.scale(rho * radius)).scale(t)
            }
        }
    }
}

/// On-disk cone format: `{"dim": n, "rep": "H"|"V", "rows": [[...], ...]}`.
/// Rows are normals for `"H"`, generators for `"V"`, and are normalized on
/// load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConeJson {
    pub dim: usize,
    pub rep: String,
    pub rows: Vec<Vec<f64>>,
}

impl Cone {
    pub fn to_json(&self) -> ConeJson {
        let (rep, rows) = match self {
            Cone::Halfspace(h) => (
                "H",
                h.normals.iter().map(|v| v.coords().to_vec()).collect(),
            ),
            Cone::Generator(g) => (
                "V",
                g.generators.iter().map(|v| v.coords().to_vec()).collect(),
            ),
        };
        ConeJson {
            dim: self.dim(),
            rep: rep.to_string(),
            rows,
        }
    }

    pub fn from_json(json: &ConeJson) -> Result<Self, Error> {
        let rows = json
            .rows
            .iter()
            .map(|r| Vector::from_slice(r))
            .collect::<Result<Vec<_>, _>>()?;
        match json.rep.as_str() {
            "H" => Ok(Cone::Halfspace(HalfspaceCone::new(json.dim, rows)?)),
            "V" => Ok(Cone::Generator(GeneratorCone::new(json.dim, rows)?)),
            other => Err(Error::UnknownRep(other.to_string())),
        }
    }
}
