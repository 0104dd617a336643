//! Exact polytope-valued subdifferentials for the supported function class,
//! plus a finite-difference oracle for validation.
//!
//! On this class (nonnegative abs weights, maxima of smooth pieces) every
//! expression is Clarke regular, so the limiting and Clarke subdifferentials
//! coincide and one engine serves both.

use crate::constants::ACT_TOL;
use crate::error::{Error, Result};
use crate::geometry::polytope::{minkowski_sum, Polytope};
use crate::linalg;
use crate::model::constraint::{ConstraintKind, ParamConstraint};
use crate::model::expr::{eval_scalar, ScalarExpr};
use crate::model::problem::UncertainMOP;

/// Subdifferential of `expr` at `x_bar` as a V-representation polytope:
/// the Minkowski sum of the smooth gradient, one segment (or signed
/// singleton) per abs term, and the hull of active-piece gradients per max
/// term. Kinks are active within `ACT_TOL`.
pub fn subdiff_scalar(expr: &ScalarExpr, x_bar: &[f64]) -> Result<Polytope> {
    expr.validate()?;
    if x_bar.len() != expr.dim() {
        return Err(Error::Dimension {
            expected: expr.dim(),
            found: x_bar.len(),
        });
    }

    let mut smooth_grad = expr.smooth.gradient(x_bar);
    for s in &expr.surrogates {
        smooth_grad = linalg::add(&smooth_grad, &s.gradient);
    }
    let mut parts: Vec<Polytope> = vec![Polytope::singleton(smooth_grad)];

    for term in &expr.abs_terms {
        let residual = linalg::dot(&term.a, x_bar) - term.b;
        let scaled = linalg::scale(&term.a, term.weight);
        if residual.abs() <= ACT_TOL {
            let neg: Vec<f64> = scaled.iter().map(|v| -v).collect();
            parts.push(Polytope::segment(neg, scaled)?);
        } else {
            parts.push(Polytope::singleton(linalg::scale(
                &scaled,
                residual.signum(),
            )));
        }
    }

    for term in &expr.max_terms {
        let values: Vec<f64> = term.pieces.iter().map(|p| p.eval(x_bar)).collect();
        let top = values.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
        let gradients: Vec<Vec<f64>> = term
            .pieces
            .iter()
            .zip(&values)
            .filter(|(_, v)| **v >= top - ACT_TOL)
            .map(|(p, _)| p.gradient(x_bar))
            .collect();
        parts.push(Polytope::new(gradients, vec![])?);
    }

    let weighted: Vec<(f64, &Polytope)> = parts.iter().map(|p| (1.0, p)).collect();
    minkowski_sum(&weighted)
}

/// d_x f_i(x_bar, u_i): the objective subdifferential translated by -u_i.
pub fn subdiff_objective_scenario(
    problem: &UncertainMOP,
    i: usize,
    x_bar: &[f64],
    u_i: &[f64],
) -> Result<Polytope> {
    if i >= problem.num_objectives() {
        return Err(Error::config(format!("objective index {i} out of range")));
    }
    let shift: Vec<f64> = u_i.iter().map(|v| -v).collect();
    subdiff_scalar(&problem.objectives[i], x_bar)?.translate(&shift)
}

/// d_x g_j(x_bar, v): a gradient singleton for affine-in-x constraints, the
/// expression subdifferential for finite-scenario constraints.
pub fn subdiff_constraint(
    problem: &UncertainMOP,
    j: usize,
    x_bar: &[f64],
    v: f64,
) -> Result<Polytope> {
    if j >= problem.num_constraints() {
        return Err(Error::config(format!("constraint index {j} out of range")));
    }
    let constraint: &ParamConstraint = &problem.constraints[j];
    if !constraint.domain.closure_contains(v) {
        return Err(Error::Domain(format!(
            "parameter {v} outside domain closure of constraint {j}"
        )));
    }
    match &constraint.kind {
        ConstraintKind::AffineInX { .. } => {
            let a = constraint
                .x_coefficients(v)?
                .expect("affine constraint has coefficients");
            Ok(Polytope::singleton(a))
        }
        ConstraintKind::FiniteScenarios { .. } => {
            subdiff_scalar(constraint.scenario_expr(v)?, x_bar)
        }
    }
}

/// Central finite-difference gradient estimate with step `h > 0`.
pub fn fd_gradient(expr: &ScalarExpr, x_bar: &[f64], h: f64) -> Result<Vec<f64>> {
    if !(h > 0.0) {
        return Err(Error::config("finite-difference step must be positive"));
    }
    let n = expr.dim();
    let mut grad = vec![0.0; n];
    let mut xp = x_bar.to_vec();
    let mut xm = x_bar.to_vec();
    for c in 0..n {
        xp[c] += h;
        xm[c] -= h;
        grad[c] = (eval_scalar(expr, &xp)? - eval_scalar(expr, &xm)?) / (2.0 * h);
        xp[c] = x_bar[c];
        xm[c] = x_bar[c];
    }
    Ok(grad)
}
