//! V-representation polytopes: generator vertices plus recession rays.
//! Consumers treat V-reps as generators; vertices are deduplicated but not
//! minimalized.

use crate::constants::{DEDUP_TOL, MINKOWSKI_CAP};
use crate::error::{Error, Result};
use crate::geometry::lp::{solve, LinearProgram, LpOutcome, Relation, Row};
use crate::linalg;

#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    vertices: Vec<Vec<f64>>,
    rays: Vec<Vec<f64>>,
}

impl Polytope {
    pub fn new(vertices: Vec<Vec<f64>>, rays: Vec<Vec<f64>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::validation("polytope needs at least one vertex"));
        }
        let dim = vertices[0].len();
        for v in vertices.iter().chain(rays.iter()) {
            if v.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: v.len(),
                });
            }
            if !linalg::is_finite_vec(v) {
                return Err(Error::validation("polytope generator has NaN/Inf entry"));
            }
        }
        for r in &rays {
            if linalg::norm_inf(r) == 0.0 {
                return Err(Error::validation("zero ray in polytope"));
            }
        }
        Ok(Polytope {
            vertices: dedup_points(vertices),
            rays,
        })
    }

    pub fn singleton(point: Vec<f64>) -> Self {
        Polytope::new(vec![point], vec![]).expect("singleton is always valid")
    }

    /// Segment between two points (the kink case: both may coincide).
    pub fn segment(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        Polytope::new(vec![a, b], vec![])
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn rays(&self) -> &[Vec<f64>] {
        &self.rays
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn translate(&self, shift: &[f64]) -> Result<Self> {
        if shift.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: shift.len(),
            });
        }
        Ok(Polytope {
            vertices: self
                .vertices
                .iter()
                .map(|v| linalg::add(v, shift))
                .collect(),
            rays: self.rays.clone(),
        })
    }
}

fn dedup_points(points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| linalg::dist_inf(q, &p) <= DEDUP_TOL) {
            out.push(p);
        }
    }
    out
}

/// Membership of `y` in the polytope, decided by an LP that minimizes the
/// infinity-norm residual over convex vertex weights and nonnegative ray
/// coefficients. Accepts iff the optimal residual is `<= tol`.
pub fn contains_point(p: &Polytope, y: &[f64], tol: f64) -> Result<bool> {
    Ok(membership_residual(p, y)?.residual <= tol)
}

#[derive(Clone, Debug)]
pub struct Membership {
    pub residual: f64,
    /// Convex weights over the vertices.
    pub vertex_weights: Vec<f64>,
    /// Nonnegative ray coefficients.
    pub ray_weights: Vec<f64>,
}

/// Best infinity-norm reconstruction of `y` from the generators.
pub fn membership_residual(p: &Polytope, y: &[f64]) -> Result<Membership> {
    let dim = p.dim();
    if y.len() != dim {
        return Err(Error::Dimension {
            expected: dim,
            found: y.len(),
        });
    }
    let nv = p.vertices.len();
    let nr = p.rays.len();
    let ncols = nv + nr + 1; // weights, ray coefficients, residual bound s
    let mut rows = Vec::with_capacity(2 * dim + 1);
    for c in 0..dim {
        let mut up = vec![0.0; ncols];
        let mut dn = vec![0.0; ncols];
        for (k, v) in p.vertices.iter().enumerate() {
            up[k] = v[c];
            dn[k] = v[c];
        }
        for (t, r) in p.rays.iter().enumerate() {
            up[nv + t] = r[c];
            dn[nv + t] = r[c];
        }
        up[nv + nr] = -1.0; // sum - s <= y_c
        dn[nv + nr] = 1.0; //  sum + s >= y_c
        rows.push(Row::new(up, Relation::Le, y[c]));
        rows.push(Row::new(dn, Relation::Ge, y[c]));
    }
    let mut conv = vec![0.0; ncols];
    for w in conv.iter_mut().take(nv) {
        *w = 1.0;
    }
    rows.push(Row::new(conv, Relation::Eq, 1.0));

    let mut objective = vec![0.0; ncols];
    objective[nv + nr] = 1.0;
    match solve(&LinearProgram { objective, rows })? {
        LpOutcome::Optimal { x, objective } => Ok(Membership {
            residual: objective.max(0.0),
            vertex_weights: x[..nv].to_vec(),
            ray_weights: x[nv..nv + nr].to_vec(),
        }),
        LpOutcome::Infeasible => Err(Error::Solver(
            "membership LP infeasible despite slack variable".into(),
        )),
        LpOutcome::Unbounded => Err(Error::Solver("membership LP unbounded".into())),
    }
}

/// Nonnegatively weighted Minkowski sum by the generator-product
/// construction. A zero coefficient contributes the origin (the Lipschitz
/// class has singular subdifferential {0}).
pub fn minkowski_sum(parts: &[(f64, &Polytope)]) -> Result<Polytope> {
    if parts.is_empty() {
        return Err(Error::validation("empty Minkowski sum"));
    }
    let dim = parts[0].1.dim();
    for (coeff, p) in parts {
        if *coeff < 0.0 {
            return Err(Error::validation("negative Minkowski coefficient"));
        }
        if p.dim() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: p.dim(),
            });
        }
    }

    let active: Vec<(f64, &Polytope)> = parts
        .iter()
        .filter(|(c, _)| *c > 0.0)
        .map(|(c, p)| (*c, *p))
        .collect();
    if active.is_empty() {
        return Ok(Polytope::singleton(vec![0.0; dim]));
    }

    let count: usize = active
        .iter()
        .try_fold(1usize, |acc, (_, p)| acc.checked_mul(p.vertices.len()))
        .ok_or_else(|| Error::blowup(usize::MAX, MINKOWSKI_CAP, ""))?;
    if count > MINKOWSKI_CAP {
        return Err(Error::blowup(
            count,
            MINKOWSKI_CAP,
            "reduce active generators",
        ));
    }

    let mut vertices = vec![vec![0.0; dim]];
    for (coeff, p) in &active {
        let mut next = Vec::with_capacity(vertices.len() * p.vertices.len());
        for base in &vertices {
            for v in &p.vertices {
                next.push(linalg::axpy(base, *coeff, v));
            }
        }
        vertices = next;
    }

    let mut rays = Vec::new();
    for (coeff, p) in &active {
        for r in &p.rays {
            rays.push(linalg::scale(r, *coeff));
        }
    }
    Polytope::new(vertices, rays)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Polytope {
        Polytope::new(
            vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 1.0],
            ],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn centroid_is_inside_square() {
        assert!(contains_point(&unit_square(), &[0.5, 0.5], 1e-9).unwrap());
    }

    #[test]
    fn outside_point_is_rejected() {
        assert!(!contains_point(&unit_square(), &[1.5, 0.0], 1e-7).unwrap());
    }

    #[test]
    fn every_vertex_is_inside() {
        let p = unit_square();
        for v in p.vertices() {
            assert!(contains_point(&p, v, 1e-9).unwrap());
        }
    }

    #[test]
    fn ray_extends_membership() {
        let p = Polytope::new(vec![vec![0.0, 0.0]], vec![vec![1.0, 0.0]]).unwrap();
        assert!(contains_point(&p, &[7.5, 0.0], 1e-9).unwrap());
        assert!(!contains_point(&p, &[-0.5, 0.0], 1e-7).unwrap());
    }

    #[test]
    fn minkowski_sum_of_segments_is_square() {
        // [-1,1] x {1}  +  {1} x [-1,1]  ->  [0,2] x [0,2]
        let s1 = Polytope::segment(vec![-1.0, 1.0], vec![1.0, 1.0]).unwrap();
        let s2 = Polytope::segment(vec![1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let sum = minkowski_sum(&[(1.0, &s1), (1.0, &s2)]).unwrap();
        let mut got: Vec<Vec<f64>> = sum.vertices().to_vec();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let want = vec![
            vec![0.0, 0.0],
            vec![0.0, 2.0],
            vec![2.0, 0.0],
            vec![2.0, 2.0],
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn zero_coefficient_contributes_origin() {
        let s = Polytope::segment(vec![-1.0], vec![1.0]).unwrap();
        let sum = minkowski_sum(&[(0.0, &s)]).unwrap();
        assert_eq!(sum.vertices(), &[vec![0.0]]);
    }

    #[test]
    fn single_part_identity() {
        let s = Polytope::segment(vec![-1.0, 1.0], vec![2.0, 3.0]).unwrap();
        let sum = minkowski_sum(&[(1.0, &s)]).unwrap();
        assert_eq!(sum.vertices(), s.vertices());
    }

    #[test]
    fn vertices_are_deduplicated() {
        let p = Polytope::new(vec![vec![1.0, 2.0], vec![1.0, 2.0 + 1e-13]], vec![]).unwrap();
        assert_eq!(p.vertices().len(), 1);
    }
}
