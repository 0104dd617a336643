//! Scenario generation: polyhedral vertex-ray constructions, deterministic
//! lattice / low-discrepancy sampling, the equal-uncertainty diagonal
//! reduction, and uncertainty-set predicates.

use nalgebra::DMatrix;

use crate::constants::{DEDUP_TOL, MEMBERSHIP_TOL, SCENARIO_CAP};
use crate::error::{Error, Result};
use crate::geometry::support::Support;
use crate::linalg;
use crate::model::problem::UncertainMOP;
use crate::model::uncertainty::UncertaintySet;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Provenance {
    Vertex,
    Ray { gamma: f64 },
    Grid,
    Random { seed: u64 },
}

fn combine(a: Provenance, b: Provenance) -> Provenance {
    use Provenance::*;
    match (a, b) {
        (Vertex, Vertex) => Vertex,
        (Ray { gamma: g1 }, Ray { gamma: g2 }) => Ray {
            gamma: g1.max(g2),
        },
        (Ray { gamma }, Vertex) | (Vertex, Ray { gamma }) => Ray { gamma },
        (Random { seed }, _) | (_, Random { seed }) => Random { seed },
        _ => Grid,
    }
}

/// One scenario: a perturbation vector per objective.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub u: Vec<Vec<f64>>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioSet {
    pub scenarios: Vec<Scenario>,
    pub seed: u64,
}

impl ScenarioSet {
    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }

    pub fn single(u: Vec<Vec<f64>>) -> Self {
        ScenarioSet {
            scenarios: vec![Scenario {
                u,
                provenance: Provenance::Grid,
            }],
            seed: 0,
        }
    }

    pub fn merge(mut self, other: ScenarioSet) -> Self {
        for s in other.scenarios {
            if !self
                .scenarios
                .iter()
                .any(|t| scenario_eq(&t.u, &s.u, DEDUP_TOL))
            {
                self.scenarios.push(s);
            }
        }
        self
    }
}

fn scenario_eq(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| linalg::dist_inf(x, y) <= tol)
}

fn cartesian_product(
    per_component: Vec<Vec<(Vec<f64>, Provenance)>>,
    seed: u64,
) -> Result<ScenarioSet> {
    let total = per_component
        .iter()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))
        .unwrap_or(usize::MAX);
    if total > SCENARIO_CAP {
        return Err(Error::blowup(
            total,
            SCENARIO_CAP,
            "thin the gamma grid or lower the resolution",
        ));
    }
    let mut scenarios: Vec<Scenario> = vec![Scenario {
        u: Vec::new(),
        provenance: Provenance::Vertex,
    }];
    for comp in per_component {
        let mut next = Vec::with_capacity(scenarios.len() * comp.len());
        for s in &scenarios {
            for (point, prov) in &comp {
                let mut u = s.u.clone();
                u.push(point.clone());
                next.push(Scenario {
                    u,
                    provenance: combine(s.provenance, *prov),
                });
            }
        }
        scenarios = next;
    }
    Ok(ScenarioSet { scenarios, seed })
}

fn replicate_diagonal(
    points: Vec<(Vec<f64>, Provenance)>,
    p: usize,
    seed: u64,
) -> ScenarioSet {
    ScenarioSet {
        scenarios: points
            .into_iter()
            .map(|(point, provenance)| Scenario {
                u: vec![point; p],
                provenance,
            })
            .collect(),
        seed,
    }
}

/// Validates the construction invariant: every component lies in its
/// uncertainty set within `MEMBERSHIP_TOL`.
pub fn validate_membership(set: &ScenarioSet, problem: &UncertainMOP) -> Result<()> {
    for s in &set.scenarios {
        if s.u.len() != problem.num_objectives() {
            return Err(Error::Dimension {
                expected: problem.num_objectives(),
                found: s.u.len(),
            });
        }
        for (u_i, set_i) in s.u.iter().zip(&problem.uncertainty) {
            if !set_i.contains(u_i, MEMBERSHIP_TOL)? {
                return Err(Error::validation(format!(
                    "scenario component {u_i:?} escapes its uncertainty set"
                )));
            }
        }
    }
    Ok(())
}

/// Vertex-plus-scaled-ray scenarios for polyhedral uncertainty. Bounded
/// components contribute their vertices only; ray directions are swept over
/// the nonnegative `gamma_grid` (which must contain 0), so verdicts driven
/// by rays are resolution-limited in gamma.
pub fn epd_scenarios(problem: &UncertainMOP, gamma_grid: &[f64]) -> Result<ScenarioSet> {
    if gamma_grid.is_empty() {
        return Err(Error::config("gamma grid must be nonempty"));
    }
    if gamma_grid.iter().any(|g| *g < 0.0) {
        return Err(Error::config("gamma grid must be nonnegative"));
    }
    if !gamma_grid.iter().any(|g| *g == 0.0) {
        return Err(Error::config("gamma grid must contain 0"));
    }
    let component = |set: &UncertaintySet| -> Result<Vec<(Vec<f64>, Provenance)>> {
        let UncertaintySet::Polytope(poly) = set else {
            return Err(Error::config(
                "epd scenarios need polytope uncertainty sets",
            ));
        };
        let mut out: Vec<(Vec<f64>, Provenance)> = Vec::new();
        for w in poly.vertices() {
            out.push((w.clone(), Provenance::Vertex));
        }
        for w in poly.vertices() {
            for d in poly.rays() {
                for &gamma in gamma_grid {
                    if gamma == 0.0 {
                        continue;
                    }
                    let point = linalg::axpy(w, gamma, d);
                    if !out
                        .iter()
                        .any(|(q, _)| linalg::dist_inf(q, &point) <= DEDUP_TOL)
                    {
                        out.push((point, Provenance::Ray { gamma }));
                    }
                }
            }
        }
        Ok(out)
    };

    let set = if problem.diagonal_uncertainty {
        replicate_diagonal(
            component(&problem.uncertainty[0])?,
            problem.num_objectives(),
            0,
        )
    } else {
        let per: Vec<_> = problem
            .uncertainty
            .iter()
            .map(component)
            .collect::<Result<_>>()?;
        cartesian_product(per, 0)?
    };
    validate_membership(&set, problem)?;
    Ok(set)
}

/// Deterministic scenario sampling: affine lattices for boxes and polytopes
/// (clipped by membership), low-discrepancy points for balls and ellipsoids
/// (seed-offset Halton), all points for finite sets. The product across
/// components is capped.
pub fn sample(problem: &UncertainMOP, resolution: usize, seed: u64) -> Result<ScenarioSet> {
    if resolution < 2 {
        return Err(Error::config("sampling needs resolution >= 2"));
    }
    let component = |idx: usize, set: &UncertaintySet| -> Result<Vec<(Vec<f64>, Provenance)>> {
        component_points(set, resolution, seed, idx)
    };
    let set = if problem.diagonal_uncertainty {
        replicate_diagonal(
            component(0, &problem.uncertainty[0])?,
            problem.num_objectives(),
            seed,
        )
    } else {
        let per: Vec<_> = problem
            .uncertainty
            .iter()
            .enumerate()
            .map(|(idx, set)| component(idx, set))
            .collect::<Result<_>>()?;
        cartesian_product(per, seed)?
    };
    validate_membership(&set, problem)?;
    Ok(set)
}

fn component_points(
    set: &UncertaintySet,
    resolution: usize,
    seed: u64,
    component: usize,
) -> Result<Vec<(Vec<f64>, Provenance)>> {
    let dim = set.dim();
    match set {
        UncertaintySet::Finite { points } => Ok(points
            .iter()
            .map(|p| (p.clone(), Provenance::Vertex))
            .collect()),
        UncertaintySet::Box { lo, hi } => {
            let axes: Vec<Vec<f64>> = lo
                .iter()
                .zip(hi)
                .map(|(l, h)| linalg::linspace(*l, *h, resolution))
                .collect();
            Ok(lattice(&axes)
                .into_iter()
                .map(|p| (p, Provenance::Grid))
                .collect())
        }
        UncertaintySet::Polytope(poly) => {
            // Bounding box over vertices, extended one unit along each ray.
            let mut lo = poly.vertices()[0].clone();
            let mut hi = lo.clone();
            let mut extremes: Vec<Vec<f64>> = poly.vertices().to_vec();
            for v in poly.vertices() {
                for r in poly.rays() {
                    extremes.push(linalg::add(v, r));
                }
            }
            for p in &extremes {
                for c in 0..dim {
                    lo[c] = lo[c].min(p[c]);
                    hi[c] = hi[c].max(p[c]);
                }
            }
            let axes: Vec<Vec<f64>> = lo
                .iter()
                .zip(&hi)
                .map(|(l, h)| linalg::linspace(*l, *h, resolution))
                .collect();
            let mut out = Vec::new();
            for p in lattice(&axes) {
                if set.contains(&p, MEMBERSHIP_TOL)? {
                    out.push((p, Provenance::Grid));
                }
            }
            if out.is_empty() {
                // Degenerate lattice misses a thin polytope; fall back to vertices.
                out = poly
                    .vertices()
                    .iter()
                    .map(|v| (v.clone(), Provenance::Vertex))
                    .collect();
            }
            Ok(out)
        }
        UncertaintySet::Ball { center, radius } => {
            let target = resolution.pow(dim as u32).min(SCENARIO_CAP);
            let points = halton_unit_ball(dim, target, seed, component);
            Ok(points
                .into_iter()
                .map(|z| (linalg::axpy(center, *radius, &z), Provenance::Random { seed }))
                .collect())
        }
        UncertaintySet::Ellipsoid { center, .. } => {
            let chol = set.cholesky_factor()?;
            let target = resolution.pow(dim as u32).min(SCENARIO_CAP);
            let points = halton_unit_ball(dim, target, seed, component);
            Ok(points
                .into_iter()
                .map(|z| {
                    let lz: Vec<f64> = (0..dim)
                        .map(|i| (0..dim).map(|j| chol[i][j] * z[j]).sum::<f64>())
                        .collect();
                    (linalg::add(center, &lz), Provenance::Random { seed })
                })
                .collect())
        }
    }
}

fn lattice(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in axes {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for base in &out {
            for &v in axis {
                let mut p = base.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Radical-inverse (van der Corput) value of `index` in `base`.
fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let mut result = 0.0;
    let mut fraction = 1.0 / base as f64;
    while index > 0 {
        result += (index % base) as f64 * fraction;
        index /= base;
        fraction /= base as f64;
    }
    result
}

const HALTON_BASES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Deterministic low-discrepancy points in the closed unit ball, offset by
/// the seed so distinct seeds give distinct (but reproducible) clouds.
fn halton_unit_ball(dim: usize, count: usize, seed: u64, component: usize) -> Vec<Vec<f64>> {
    assert!(dim <= HALTON_BASES.len(), "halton basis table exhausted");
    let start = 1 + seed.wrapping_mul(7919) + (component as u64).wrapping_mul(104_729);
    let mut out = Vec::with_capacity(count);
    let mut index = start;
    let budget = (count as u64) * 64 + 4096;
    let mut used = 0u64;
    while out.len() < count && used < budget {
        let z: Vec<f64> = (0..dim)
            .map(|c| 2.0 * radical_inverse(index, HALTON_BASES[c]) - 1.0)
            .collect();
        if linalg::norm2(&z) <= 1.0 {
            out.push(z);
        }
        index = index.wrapping_add(1);
        used += 1;
    }
    out
}

/// Restricts an equal-uncertainty problem to diagonal scenarios
/// u_1 = ... = u_p; returns `None` when the component sets differ
/// structurally.
pub fn diagonal_reduce(problem: &UncertainMOP) -> Option<UncertainMOP> {
    let first = &problem.uncertainty[0];
    if !problem
        .uncertainty
        .iter()
        .skip(1)
        .all(|s| first.structurally_eq(s, 1e-12))
    {
        return None;
    }
    let mut reduced = problem.clone();
    reduced.diagonal_uncertainty = true;
    Some(reduced)
}

/// Is the closed ball of radius `margin` around the origin contained in the
/// set? Exact for boxes, balls, and centered ellipsoids; support checked on
/// a direction net otherwise (resolution limited).
pub fn contains_zero_interior(set: &UncertaintySet, margin: f64) -> Result<bool> {
    if !(margin > 0.0) {
        return Err(Error::config("margin must be positive"));
    }
    match set {
        UncertaintySet::Ball { center, radius } => {
            Ok(linalg::norm2(center) + margin <= *radius + 1e-12)
        }
        UncertaintySet::Box { lo, hi } => Ok(lo
            .iter()
            .zip(hi)
            .all(|(l, h)| *l <= -margin + 1e-12 && *h >= margin - 1e-12)),
        UncertaintySet::Ellipsoid { center, shape } => {
            if linalg::norm_inf(center) <= 1e-12 {
                let n = shape.len();
                let m = DMatrix::from_fn(n, n, |i, j| shape[i][j]);
                let eig = m.symmetric_eigen();
                let lambda_min = eig.eigenvalues.iter().fold(f64::INFINITY, |a, b| a.min(*b));
                return Ok(margin <= lambda_min.max(0.0).sqrt() + 1e-12);
            }
            Ok(net_supports_ball(set, margin))
        }
        UncertaintySet::Finite { .. } => Ok(false),
        UncertaintySet::Polytope(_) => Ok(net_supports_ball(set, margin)),
    }
}

fn net_supports_ball(set: &UncertaintySet, margin: f64) -> bool {
    direction_net(set.dim(), 512)
        .iter()
        .all(|d| set.support(d) >= margin * linalg::norm2(d) - 1e-12)
}

/// Euclidean-unit direction net of roughly `count` points.
pub fn direction_net(dim: usize, count: usize) -> Vec<Vec<f64>> {
    match dim {
        0 => Vec::new(),
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..count)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                vec![theta.cos(), theta.sin()]
            })
            .collect(),
        _ => {
            // Halton cloud on the cube pushed to the sphere.
            let mut out = Vec::with_capacity(count);
            let mut index = 1u64;
            while out.len() < count {
                let z: Vec<f64> = (0..dim)
                    .map(|c| 2.0 * radical_inverse(index, HALTON_BASES[c]) - 1.0)
                    .collect();
                let norm = linalg::norm2(&z);
                if norm > 1e-9 {
                    out.push(linalg::scale(&z, 1.0 / norm));
                }
                index += 1;
            }
            out
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormSup {
    Exact(f64),
    UpperBound(f64),
    Unbounded,
}

impl NormSup {
    pub fn value(&self) -> f64 {
        match self {
            NormSup::Exact(v) | NormSup::UpperBound(v) => *v,
            NormSup::Unbounded => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, NormSup::Unbounded)
    }
}

/// Supremum of the Euclidean norm over the set.
pub fn norm_sup(set: &UncertaintySet) -> NormSup {
    match set {
        UncertaintySet::Polytope(p) => {
            if !p.is_bounded() {
                return NormSup::Unbounded;
            }
            NormSup::Exact(
                p.vertices()
                    .iter()
                    .map(|v| linalg::norm2(v))
                    .fold(0.0, f64::max),
            )
        }
        UncertaintySet::Box { lo, hi } => NormSup::Exact(
            lo.iter()
                .zip(hi)
                .map(|(l, h)| l.powi(2).max(h.powi(2)))
                .sum::<f64>()
                .sqrt(),
        ),
        UncertaintySet::Ball { center, radius } => {
            NormSup::Exact(linalg::norm2(center) + radius)
        }
        UncertaintySet::Ellipsoid { center, shape } => {
            let n = shape.len();
            let m = DMatrix::from_fn(n, n, |i, j| shape[i][j]);
            let eig = m.symmetric_eigen();
            let lambda_max = eig.eigenvalues.iter().fold(0.0f64, |a, b| a.max(*b));
            let semi_axis = lambda_max.max(0.0).sqrt();
            if linalg::norm_inf(center) <= 1e-12 {
                NormSup::Exact(semi_axis)
            } else {
                NormSup::UpperBound(linalg::norm2(center) + semi_axis)
            }
        }
        UncertaintySet::Finite { points } => NormSup::Exact(
            points
                .iter()
                .map(|p| linalg::norm2(p))
                .fold(0.0, f64::max),
        ),
    }
}
