//! The uncertain multi-objective program: p objectives under objective-wise
//! linear uncertainty, q parametric constraints, and an optional search box
//! for the grid oracles.

use crate::constants::DEFAULT_V_GRID;
use crate::error::{Error, Result};
use crate::linalg;
use crate::model::constraint::{constraint_sup, ParamConstraint};
use crate::model::expr::{eval_scalar, ScalarExpr};
use crate::model::uncertainty::UncertaintySet;

#[derive(Clone, Debug, PartialEq)]
pub struct UncertainMOP {
    pub n: usize,
    pub objectives: Vec<ScalarExpr>,
    pub uncertainty: Vec<UncertaintySet>,
    pub constraints: Vec<ParamConstraint>,
    pub box_bounds: Option<(Vec<f64>, Vec<f64>)>,
    /// Set by `diagonal_reduce`: scenario generators emit equal components
    /// u_1 = ... = u_p drawn from the shared first uncertainty set.
    pub diagonal_uncertainty: bool,
}

impl UncertainMOP {
    pub fn new(
        n: usize,
        objectives: Vec<ScalarExpr>,
        uncertainty: Vec<UncertaintySet>,
        constraints: Vec<ParamConstraint>,
        box_bounds: Option<(Vec<f64>, Vec<f64>)>,
    ) -> Result<Self> {
        let p = UncertainMOP {
            n,
            objectives,
            uncertainty,
            constraints,
            box_bounds,
            diagonal_uncertainty: false,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn num_objectives(&self) -> usize {
        self.objectives.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.objectives.len() < 2 {
            return Err(Error::validation("need at least two objectives"));
        }
        if self.uncertainty.len() != self.objectives.len() {
            return Err(Error::validation(format!(
                "{} objectives but {} uncertainty sets",
                self.objectives.len(),
                self.uncertainty.len()
            )));
        }
        for f in &self.objectives {
            if f.dim() != self.n {
                return Err(Error::Dimension {
                    expected: self.n,
                    found: f.dim(),
                });
            }
            f.validate()?;
        }
        for u in &self.uncertainty {
            u.validate()?;
            if u.dim() != self.n {
                return Err(Error::Dimension {
                    expected: self.n,
                    found: u.dim(),
                });
            }
        }
        for c in &self.constraints {
            c.validate(self.n)?;
        }
        if let Some((lo, hi)) = &self.box_bounds {
            if lo.len() != self.n || hi.len() != self.n {
                return Err(Error::validation("box_bounds dimension mismatch"));
            }
            if lo.iter().zip(hi).any(|(l, h)| l > h) {
                return Err(Error::validation("box_bounds need lo <= hi"));
            }
        }
        Ok(())
    }

    /// f_i(x, u_i) = f_i(x) - <u_i, x> for one component.
    pub fn objective_component(&self, i: usize, x: &[f64], u_i: &[f64]) -> Result<f64> {
        if u_i.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: u_i.len(),
            });
        }
        Ok(eval_scalar(&self.objectives[i], x)? - linalg::dot(u_i, x))
    }
}

/// The objective vector under scenario u: component i is
/// f_i(x) - <u_i, x>. Membership of u in the uncertainty set is not
/// required here.
pub fn eval_objective_scenario(
    problem: &UncertainMOP,
    x: &[f64],
    u: &[Vec<f64>],
) -> Result<Vec<f64>> {
    if u.len() != problem.num_objectives() {
        return Err(Error::Dimension {
            expected: problem.num_objectives(),
            found: u.len(),
        });
    }
    (0..problem.num_objectives())
        .map(|i| problem.objective_component(i, x, &u[i]))
        .collect()
}

/// G_j(x) <= tol for every j: membership in the robust feasible set.
pub fn is_robust_feasible(problem: &UncertainMOP, x: &[f64], tol: f64) -> Result<bool> {
    is_robust_feasible_with_grid(problem, x, tol, DEFAULT_V_GRID)
}

pub fn is_robust_feasible_with_grid(
    problem: &UncertainMOP,
    x: &[f64],
    tol: f64,
    v_grid: usize,
) -> Result<bool> {
    for c in &problem.constraints {
        if constraint_sup(c, x, v_grid)?.value > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::constraint::ParamConstraint;

    /// min (x - u1 x, x^2 - u2 x) over [-1, 1] with U = [-0.5,0.5] x [0,1].
    pub(crate) fn two_objective_interval_problem() -> UncertainMOP {
        let f1 = ScalarExpr::affine(0.0, vec![1.0]);
        let f2 = ScalarExpr::zero(1).with_quad(vec![vec![2.0]]);
        let u1 = UncertaintySet::Box {
            lo: vec![-0.5],
            hi: vec![0.5],
        };
        let u2 = UncertaintySet::Box {
            lo: vec![0.0],
            hi: vec![1.0],
        };
        let upper = ParamConstraint::certain(ScalarExpr::affine(-1.0, vec![1.0]));
        let lower = ParamConstraint::certain(ScalarExpr::affine(-1.0, vec![-1.0]));
        UncertainMOP::new(
            1,
            vec![f1, f2],
            vec![u1, u2],
            vec![upper, lower],
            Some((vec![-1.0], vec![1.0])),
        )
        .unwrap()
    }

    #[test]
    fn candidate_origin_maps_to_zero_vector() {
        let p = two_objective_interval_problem();
        let f = eval_objective_scenario(&p, &[0.0], &[vec![0.33], vec![0.77]]).unwrap();
        assert_eq!(f, vec![0.0, 0.0]);
    }

    #[test]
    fn scenario_evaluation_is_direct_arithmetic() {
        let p = two_objective_interval_problem();
        let f = eval_objective_scenario(&p, &[0.5], &[vec![0.5], vec![1.0]]).unwrap();
        assert_eq!(f, vec![0.25, -0.25]);
    }

    #[test]
    fn box_feasibility() {
        let p = two_objective_interval_problem();
        assert!(is_robust_feasible(&p, &[1.0], 1e-9).unwrap());
        assert!(is_robust_feasible(&p, &[-1.0], 1e-9).unwrap());
        assert!(!is_robust_feasible(&p, &[1.1], 1e-9).unwrap());
    }

    #[test]
    fn unconstrained_problem_is_always_feasible() {
        let mut p = two_objective_interval_problem();
        p.constraints.clear();
        assert!(is_robust_feasible(&p, &[250.0], 0.0).unwrap());
    }

    #[test]
    fn feasibility_is_monotone_in_tol() {
        let p = two_objective_interval_problem();
        // x slightly outside: infeasible at tight tol, feasible at loose tol.
        assert!(!is_robust_feasible(&p, &[1.0 + 1e-6], 1e-9).unwrap());
        assert!(is_robust_feasible(&p, &[1.0 + 1e-6], 1e-3).unwrap());
    }

    #[test]
    fn single_objective_is_rejected() {
        let f1 = ScalarExpr::affine(0.0, vec![1.0]);
        let u1 = UncertaintySet::Finite {
            points: vec![vec![0.0]],
        };
        assert!(UncertainMOP::new(1, vec![f1], vec![u1], vec![], None).is_err());
    }
}
