//! Necessary-condition refuter: hunts for a direction d in (a proxy of) the
//! tangent cone and a scenario u with <x* - u_i, d> < 0 for every
//! subgradient of every objective. Such a pair refutes local highly robust
//! weak efficiency.
//!
//! The tangent cone is replaced by the linearization cone of
//! epsilon-active constraint gradients, which is exact for the convex
//! suprema in this class under a Slater point; the proxy is recorded in the
//! refuter output.

use crate::constants::{ACT_TOL, CONE_EPS, DEFAULT_V_GRID, FEAS_TOL, STRICT_TOL};
use crate::error::{Error, Result};
use crate::geometry::support::Support;
use crate::linalg;
use crate::model::constraint::active_set;
use crate::model::problem::{is_robust_feasible_with_grid, UncertainMOP};
use crate::scenarios::direction_net;
use crate::subdiff::{subdiff_constraint, subdiff_scalar};

#[derive(Clone, Debug)]
pub struct NecessaryConfig {
    pub direction_net: usize,
    pub v_grid: usize,
    pub feas_tol: f64,
}

impl Default for NecessaryConfig {
    fn default() -> Self {
        NecessaryConfig {
            direction_net: 720,
            v_grid: DEFAULT_V_GRID,
            feas_tol: FEAS_TOL,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RefutingPair {
    pub d: Vec<f64>,
    pub u: Vec<Vec<f64>>,
    /// Verified margin: min over i of <u_i, d> - sigma_{df_i}(d).
    pub margin: f64,
}

/// Rows a with a.d <= 0 describing the linearization cone of the
/// epsilon-active constraints at `x_bar`.
pub fn linearization_cone(
    problem: &UncertainMOP,
    x_bar: &[f64],
    v_grid: usize,
) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for j in 0..problem.num_constraints() {
        let sup = crate::model::constraint::constraint_sup(&problem.constraints[j], x_bar, v_grid)?;
        if sup.value < -CONE_EPS {
            continue; // inactive constraint does not constrain directions
        }
        for v in active_set(&problem.constraints[j], x_bar, CONE_EPS, v_grid)? {
            let gen = subdiff_constraint(problem, j, x_bar, v)?;
            for vertex in gen.vertices() {
                if linalg::norm_inf(vertex) > ACT_TOL {
                    rows.push(vertex.clone());
                }
            }
        }
    }
    Ok(rows)
}

fn in_cone(rows: &[Vec<f64>], d: &[f64]) -> bool {
    rows.iter().all(|a| linalg::dot(a, d) <= 1e-9)
}

/// Candidate directions with |d|_inf = 1: cone extreme rays in the plane,
/// signed axes, and a dense net, all filtered by cone membership.
fn candidate_directions(rows: &[Vec<f64>], n: usize, net: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    let mut push = |d: Vec<f64>| {
        let norm = linalg::norm_inf(&d);
        if norm <= 1e-12 {
            return;
        }
        let d = linalg::scale(&d, 1.0 / norm);
        if in_cone(rows, &d) && !out.iter().any(|q| linalg::dist_inf(q, &d) <= 1e-9) {
            out.push(d);
        }
    };

    if n == 2 {
        // Boundary directions of the planar cone: each row normal rotated
        // by +-90 degrees.
        for a in rows {
            push(vec![-a[1], a[0]]);
            push(vec![a[1], -a[0]]);
        }
    }
    for c in 0..n {
        let mut e = vec![0.0; n];
        e[c] = 1.0;
        push(e.clone());
        e[c] = -1.0;
        push(e);
    }
    for d in direction_net(n, net) {
        push(d);
    }
    out
}

/// Searches for a pair (d, u) violating the first-order necessary condition
/// for local highly robust weak efficiency. A returned pair is re-verified
/// by direct substitution against every subdifferential vertex.
pub fn necessary_refute(
    problem: &UncertainMOP,
    x_bar: &[f64],
    config: &NecessaryConfig,
) -> Result<Option<RefutingPair>> {
    if !is_robust_feasible_with_grid(problem, x_bar, config.feas_tol, config.v_grid)? {
        return Err(Error::config("candidate is not robust feasible"));
    }
    let subdiffs: Vec<_> = problem
        .objectives
        .iter()
        .map(|f| subdiff_scalar(f, x_bar))
        .collect::<Result<_>>()?;
    let cone_rows = linearization_cone(problem, x_bar, config.v_grid)?;
    let directions = candidate_directions(&cone_rows, problem.n, config.direction_net);

    for d in directions {
        let mut u: Vec<Vec<f64>> = Vec::with_capacity(problem.num_objectives());
        let mut margin = f64::INFINITY;
        let mut ok = true;
        for (set, sd) in problem.uncertainty.iter().zip(&subdiffs) {
            let sigma_f = sd.support(&d);
            let sigma_u = set.support(&d);
            if !(sigma_u > sigma_f + STRICT_TOL) {
                ok = false;
                break;
            }
            let u_i = set.support_point(&d, sigma_f + 1.0);
            margin = margin.min(linalg::dot(&u_i, &d) - sigma_f);
            u.push(u_i);
        }
        if !ok {
            continue;
        }
        // Direct re-verification: every subgradient loses to u_i along d.
        let verified = subdiffs.iter().zip(&u).all(|(sd, u_i)| {
            sd.vertices().iter().all(|x_star| {
                linalg::dot(&linalg::sub(x_star, u_i), &d) < -0.5 * STRICT_TOL
            })
        });
        if verified {
            return Ok(Some(RefutingPair { d, u, margin }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::constraint::ParamConstraint;
    use crate::model::expr::{FrozenSurrogate, ScalarExpr};
    use crate::model::uncertainty::UncertaintySet;

    /// f1 = |x1+1| + x2, f2 = x1 + |x2+1|, box constraints [-1,1]^2,
    /// U1 = U2 = [-1,0]^2.
    fn kinked_problem() -> UncertainMOP {
        let f1 = ScalarExpr::zero(2)
            .with_linear(vec![0.0, 1.0])
            .with_abs(1.0, vec![1.0, 0.0], -1.0);
        let f2 = ScalarExpr::zero(2)
            .with_linear(vec![1.0, 0.0])
            .with_abs(1.0, vec![0.0, 1.0], -1.0);
        let u = UncertaintySet::Box {
            lo: vec![-1.0, -1.0],
            hi: vec![0.0, 0.0],
        };
        let constraints = vec![
            ParamConstraint::certain(ScalarExpr::affine(-1.0, vec![1.0, 0.0])),
            ParamConstraint::certain(ScalarExpr::affine(-1.0, vec![-1.0, 0.0])),
            ParamConstraint::certain(ScalarExpr::affine(-1.0, vec![0.0, 1.0])),
            ParamConstraint::certain(ScalarExpr::affine(-1.0, vec![0.0, -1.0])),
        ];
        UncertainMOP::new(
            2,
            vec![f1, f2],
            vec![u.clone(), u],
            constraints,
            Some((vec![-1.0, -1.0], vec![1.0, 1.0])),
        )
        .unwrap()
    }

    #[test]
    fn cone_at_box_corner_is_nonnegative_orthant() {
        let p = kinked_problem();
        let rows = linearization_cone(&p, &[-1.0, -1.0], 101).unwrap();
        // Active faces are -x1 <= 1 and -x2 <= 1: normals (-1,0), (0,-1).
        assert!(in_cone(&rows, &[1.0, 1.0]));
        assert!(in_cone(&rows, &[0.3, 0.0]));
        assert!(!in_cone(&rows, &[-1.0, 0.0]));
        assert!(!in_cone(&rows, &[0.0, -0.2]));
    }

    #[test]
    fn no_refuting_pair_on_the_kinked_corner() {
        let p = kinked_problem();
        let pair = necessary_refute(&p, &[-1.0, -1.0], &NecessaryConfig::default()).unwrap();
        assert!(pair.is_none());
    }

    /// f1 = x, f2 frozen-linearized -cbrt near -1, constraint x <= 1,
    /// U1 = U2 = [-1,1].
    fn surrogate_problem() -> UncertainMOP {
        let f1 = ScalarExpr::affine(0.0, vec![1.0]);
        let f2 = ScalarExpr::zero(1).with_surrogate(FrozenSurrogate {
            anchor: vec![-1.0],
            value: 1.0,
            gradient: vec![-1.0 / 3.0],
            valid_radius: 1.5,
        });
        let u = UncertaintySet::Box {
            lo: vec![-1.0],
            hi: vec![1.0],
        };
        UncertainMOP::new(
            1,
            vec![f1, f2],
            vec![u.clone(), u],
            vec![ParamConstraint::certain(ScalarExpr::affine(
                -1.0,
                vec![1.0],
            ))],
            Some((vec![-2.0], vec![1.0])),
        )
        .unwrap()
    }

    #[test]
    fn refuting_pair_on_smooth_surrogate() {
        let p = surrogate_problem();
        let pair = necessary_refute(&p, &[-1.0], &NecessaryConfig::default())
            .unwrap()
            .expect("pair exists");
        assert!((pair.d[0] + 1.0).abs() <= 1e-12, "d should be the -1 direction");
        assert!(pair.margin > STRICT_TOL);
        // Re-verify by hand: gradients are {1} and {-1/3}.
        for (grad, u_i) in [(1.0, &pair.u[0]), (-1.0 / 3.0, &pair.u[1])] {
            assert!((grad - u_i[0]) * pair.d[0] < 0.0);
        }
    }

    #[test]
    fn zero_uncertainty_at_interior_minimizer_finds_nothing() {
        let f1 = ScalarExpr::zero(1).with_quad(vec![vec![2.0]]);
        let f2 = ScalarExpr::zero(1).with_quad(vec![vec![4.0]]);
        let u = UncertaintySet::Finite {
            points: vec![vec![0.0]],
        };
        let p = UncertainMOP::new(
            1,
            vec![f1, f2],
            vec![u.clone(), u],
            vec![],
            Some((vec![-1.0], vec![1.0])),
        )
        .unwrap();
        let pair = necessary_refute(&p, &[0.0], &NecessaryConfig::default()).unwrap();
        assert!(pair.is_none());
    }
}
