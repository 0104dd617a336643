//! KKT membership as LP feasibility: for a fixed scenario u, multipliers
//! (lambda, mu) and generator weights must reproduce
//!
//!   sum_i lambda_i u_i  in  sum_i lambda_i o df_i(x_bar)
//!                         + sum_j mu_j co{ d_x g_j(x_bar, v) : v active },
//!
//! with complementarity enforced structurally (mu_j = 0 unless constraint j
//! is active) and either joint or lambda-only normalization. The lambda = 0
//! branch is covered by the {0} singular-subdifferential convention.

use crate::constants::{ACT_TOL, DEFAULT_V_GRID, FEAS_TOL};
use crate::error::{Error, Result};
use crate::exec::{self, Threading};
use crate::geometry::lp::{solve, LinearProgram, LpOutcome, Relation, Row};
use crate::geometry::polytope::{contains_point, membership_residual, minkowski_sum, Polytope};
use crate::linalg;
use crate::model::constraint::{active_set, constraint_sup};
use crate::model::problem::{is_robust_feasible_with_grid, UncertainMOP};
use crate::scenarios::ScenarioSet;
use crate::subdiff::{subdiff_constraint, subdiff_scalar};

use super::{Multipliers, Resolution, Verdict, Witness};

pub use super::MultiplierNormalization as Normalization;

#[derive(Clone, Debug)]
pub struct KktConfig {
    pub normalization: Normalization,
    pub v_grid: usize,
    pub feas_tol: f64,
    pub threading: Threading,
}

impl Default for KktConfig {
    fn default() -> Self {
        KktConfig {
            normalization: Normalization::Joint,
            v_grid: DEFAULT_V_GRID,
            feas_tol: FEAS_TOL,
            threading: Threading::default(),
        }
    }
}

/// Active-constraint generator table at the candidate: for each j with
/// G_j(x_bar) ~ 0, the subgradient vertices collected over the active
/// parameter set V_j(x_bar).
pub(crate) fn active_constraint_generators(
    problem: &UncertainMOP,
    x_bar: &[f64],
    v_grid: usize,
) -> Result<Vec<(usize, Vec<Vec<f64>>)>> {
    let mut out = Vec::new();
    for j in 0..problem.num_constraints() {
        let sup = constraint_sup(&problem.constraints[j], x_bar, v_grid)?;
        if sup.value.abs() > ACT_TOL {
            continue;
        }
        let mut generators: Vec<Vec<f64>> = Vec::new();
        for v in active_set(&problem.constraints[j], x_bar, 0.0, v_grid)? {
            for vertex in subdiff_constraint(problem, j, x_bar, v)?.vertices() {
                if !generators
                    .iter()
                    .any(|g| linalg::dist_inf(g, vertex) <= 1e-12)
                {
                    generators.push(vertex.clone());
                }
            }
        }
        if !generators.is_empty() {
            out.push((j, generators));
        }
    }
    Ok(out)
}

/// Feasibility of the KKT membership system for one scenario. Returns the
/// multipliers found, or None when the system is infeasible.
pub fn kkt_solve(
    problem: &UncertainMOP,
    x_bar: &[f64],
    u: &[Vec<f64>],
    config: &KktConfig,
) -> Result<Option<Multipliers>> {
    if u.len() != problem.num_objectives() {
        return Err(Error::Dimension {
            expected: problem.num_objectives(),
            found: u.len(),
        });
    }
    if !is_robust_feasible_with_grid(problem, x_bar, config.feas_tol, config.v_grid)? {
        return Err(Error::config("candidate is not robust feasible"));
    }

    let n = problem.n;
    let p = problem.num_objectives();
    let obj_generators: Vec<Vec<Vec<f64>>> = problem
        .objectives
        .iter()
        .map(|f| Ok(subdiff_scalar(f, x_bar)?.vertices().to_vec()))
        .collect::<Result<_>>()?;
    let con_generators = active_constraint_generators(problem, x_bar, config.v_grid)?;

    // Columns: per-objective vertex weights c_ik (shifted by -u_i), then
    // per-active-constraint generator weights w_jm.
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut obj_span = Vec::with_capacity(p);
    for (i, gens) in obj_generators.iter().enumerate() {
        let start = columns.len();
        for g in gens {
            columns.push(linalg::sub(g, &u[i]));
        }
        obj_span.push((start, columns.len()));
    }
    let mut con_span = Vec::with_capacity(con_generators.len());
    for (_, gens) in &con_generators {
        let start = columns.len();
        for g in gens {
            columns.push(g.clone());
        }
        con_span.push((start, columns.len()));
    }
    let ncols = columns.len();
    let n_obj_cols = obj_span.last().map_or(0, |(_, e)| *e);

    let mut rows = Vec::with_capacity(n + 1);
    for c in 0..n {
        let coeffs: Vec<f64> = columns.iter().map(|col| col[c]).collect();
        rows.push(Row::new(coeffs, Relation::Eq, 0.0));
    }
    let norm_row: Vec<f64> = match config.normalization {
        Normalization::Joint => vec![1.0; ncols],
        Normalization::LambdaOnly => (0..ncols)
            .map(|k| if k < n_obj_cols { 1.0 } else { 0.0 })
            .collect(),
    };
    rows.push(Row::new(norm_row, Relation::Eq, 1.0));

    let lp = LinearProgram {
        objective: vec![0.0; ncols],
        rows,
    };
    let weights = match solve(&lp)? {
        LpOutcome::Infeasible => return Ok(None),
        LpOutcome::Unbounded => {
            return Err(Error::Solver("feasibility LP reported unbounded".into()))
        }
        // Simplex roundoff can leave weights a hair below zero; clamp
        // within solver tolerance.
        LpOutcome::Optimal { x, .. } => x
            .into_iter()
            .map(|w| if w > -1e-9 { w.max(0.0) } else { w })
            .collect::<Vec<f64>>(),
    };
    if weights.iter().any(|w| *w < 0.0) {
        return Err(Error::Solver("feasibility LP returned negative weight".into()));
    }

    let mut lambda = vec![0.0; p];
    let mut objective_weights = Vec::with_capacity(p);
    for (i, (start, end)) in obj_span.iter().enumerate() {
        let w = weights[*start..*end].to_vec();
        lambda[i] = w.iter().sum();
        objective_weights.push(w);
    }
    let mut mu = vec![0.0; problem.num_constraints()];
    let mut constraint_weights = Vec::with_capacity(con_generators.len());
    for ((j, _), (start, end)) in con_generators.iter().zip(&con_span) {
        let w = weights[*start..*end].to_vec();
        mu[*j] = w.iter().sum();
        constraint_weights.push((*j, w));
    }
    Ok(Some(Multipliers {
        lambda,
        mu,
        objective_weights,
        constraint_weights,
        normalization: config.normalization,
    }))
}

/// Independent residual check: assembles the weighted Minkowski sum
/// sum_i lambda_i o df_i + sum_j mu_j co{active generators} as a polytope
/// and measures how far sum_i lambda_i u_i is from it.
pub fn verify_multipliers(
    problem: &UncertainMOP,
    x_bar: &[f64],
    u: &[Vec<f64>],
    multipliers: &Multipliers,
    v_grid: usize,
) -> Result<f64> {
    let obj_polys: Vec<Polytope> = problem
        .objectives
        .iter()
        .map(|f| subdiff_scalar(f, x_bar))
        .collect::<Result<_>>()?;
    let con_generators = active_constraint_generators(problem, x_bar, v_grid)?;

    let mut parts: Vec<(f64, Polytope)> = Vec::new();
    for (i, poly) in obj_polys.into_iter().enumerate() {
        parts.push((multipliers.lambda[i], poly));
    }
    for (j, gens) in &con_generators {
        parts.push((multipliers.mu[*j], Polytope::new(gens.clone(), vec![])?));
    }
    let borrowed: Vec<(f64, &Polytope)> = parts.iter().map(|(c, p)| (*c, p)).collect();
    let assembled = minkowski_sum(&borrowed)?;

    let mut target = vec![0.0; problem.n];
    for (i, u_i) in u.iter().enumerate() {
        target = linalg::axpy(&target, multipliers.lambda[i], u_i);
    }
    Ok(membership_residual(&assembled, &target)?.residual)
}

/// Constraint qualification: the origin must lie outside the convex hull of
/// the active constraint subgradients. Vacuously true with no active
/// constraints.
pub fn cq2(problem: &UncertainMOP, x_bar: &[f64], v_grid: usize) -> Result<bool> {
    let con_generators = active_constraint_generators(problem, x_bar, v_grid)?;
    let union: Vec<Vec<f64>> = con_generators
        .into_iter()
        .flat_map(|(_, gens)| gens)
        .collect();
    if union.is_empty() {
        return Ok(true);
    }
    let hull = Polytope::new(union, vec![])?;
    Ok(!contains_point(&hull, &vec![0.0; problem.n], 1e-9)?)
}

/// Highly robust KKT check over a scenario set: the membership system must
/// be feasible at every scenario with the lambda-normalized multipliers.
/// An infeasible scenario refutes local highly robust weak efficiency when
/// CQ2 holds, and is inconclusive otherwise.
pub fn highly_robust_kkt(
    problem: &UncertainMOP,
    x_bar: &[f64],
    scenarios: &ScenarioSet,
    config: &KktConfig,
) -> Result<Verdict> {
    if scenarios.is_empty() {
        return Err(Error::config("scenario set is empty"));
    }
    let per_scenario = KktConfig {
        normalization: Normalization::LambdaOnly,
        ..config.clone()
    };
    let outcomes = exec::map(config.threading, &scenarios.scenarios, |s| {
        kkt_solve(problem, x_bar, &s.u, &per_scenario)
    });

    let mut resolution = Resolution::new();
    resolution.insert("scenarios".into(), scenarios.len() as f64);
    resolution.insert("v_grid".into(), config.v_grid as f64);
    resolution.insert("act_tol".into(), ACT_TOL);

    for (s, outcome) in scenarios.scenarios.iter().zip(outcomes) {
        if outcome?.is_none() {
            let cq = cq2(problem, x_bar, config.v_grid)?;
            let witness = Witness {
                u: Some(s.u.clone()),
                ..Witness::default()
            };
            return Ok(if cq {
                Verdict::refuted(witness, resolution)
                    .with_note("KKT system infeasible at scenario; CQ2 holds")
            } else {
                Verdict::inconclusive(resolution)
                    .with_witness(witness)
                    .with_note("KKT system infeasible but CQ2 fails")
            });
        }
    }
    Ok(Verdict::consistent(resolution)
        .with_note("KKT membership feasible at every sampled scenario"))
}
