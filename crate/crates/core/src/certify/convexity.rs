//! Generalized convexity: for every sample x and scenario u there must be a
//! direction d with <x*, d> bounded by the objective (and constraint)
//! increments over all subdifferential generators. Feasibility of each
//! d-system is decided by the margin LP.

use crate::constants::{DEFAULT_GRID, DEFAULT_V_GRID, FEAS_TOL};
use crate::error::Result;
use crate::exec::Threading;
use crate::geometry::strict::solve_strict_feasibility_in_box;
use crate::linalg;
use crate::model::constraint::{active_set, constraint_sup};
use crate::model::problem::UncertainMOP;
use crate::scenarios::ScenarioSet;
use crate::subdiff::{subdiff_constraint, subdiff_objective_scenario};

use super::kkt::{highly_robust_kkt, KktConfig};
use super::{CertificateKind, Resolution, Status, Verdict, Witness};

/// One inequality of the d-system: <gradient, d> (<|<=) delta.
#[derive(Clone, Debug)]
pub struct ConvexityRow {
    pub gradient: Vec<f64>,
    pub delta: f64,
    pub strict: bool,
}

/// Feasibility of a d-system over the box |d|_inf <= box_radius.
pub fn direction_system_feasible(rows: &[ConvexityRow], box_radius: f64) -> Result<bool> {
    let strict: Vec<(Vec<f64>, f64)> = rows
        .iter()
        .filter(|r| r.strict)
        .map(|r| (r.gradient.clone(), r.delta))
        .collect();
    let weak: Vec<(Vec<f64>, f64)> = rows
        .iter()
        .filter(|r| !r.strict)
        .map(|r| (r.gradient.clone(), r.delta))
        .collect();
    Ok(solve_strict_feasibility_in_box(&strict, &weak, box_radius)?.is_some())
}

#[derive(Clone, Debug)]
pub struct GcConfig {
    pub strict: bool,
    pub include_constraints: bool,
    pub v_grid: usize,
    pub feas_tol: f64,
    pub threading: Threading,
}

impl Default for GcConfig {
    fn default() -> Self {
        GcConfig {
            strict: false,
            include_constraints: false,
            v_grid: DEFAULT_V_GRID,
            feas_tol: FEAS_TOL,
            threading: Threading::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GcOutcome {
    pub holds: bool,
    /// Failing (x, u) pair when the property does not hold.
    pub counterexample: Option<(Vec<f64>, Vec<Vec<f64>>)>,
}

/// Checks (strict) generalized convexity of the objective family (and, when
/// requested, the constraint family) at `x_bar` over the given samples and
/// scenarios.
pub fn generalized_convexity(
    problem: &UncertainMOP,
    x_bar: &[f64],
    x_samples: &[Vec<f64>],
    scenarios: &ScenarioSet,
    config: &GcConfig,
) -> Result<GcOutcome> {
    // The witness direction d = x - x_bar of the convex case must fit, so
    // the search box scales with the sample spread.
    let spread = x_samples
        .iter()
        .map(|x| linalg::dist_inf(x, x_bar))
        .fold(0.0, f64::max);
    let box_radius = spread.max(1.0) + 1.0;

    // Constraint rows come from the maximizer sets of every constraint,
    // active or not, per the definition of (f, g) generalized convexity.
    let mut constraint_rows: Vec<(usize, f64, Vec<Vec<f64>>, f64)> = Vec::new();
    if config.include_constraints {
        for j in 0..problem.num_constraints() {
            let _ = constraint_sup(&problem.constraints[j], x_bar, config.v_grid)?;
            for v in active_set(&problem.constraints[j], x_bar, 0.0, config.v_grid)? {
                let g_bar = problem.constraints[j].eval(x_bar, v)?;
                let gens = subdiff_constraint(problem, j, x_bar, v)?
                    .vertices()
                    .to_vec();
                constraint_rows.push((j, v, gens, g_bar));
            }
        }
    }

    for x in x_samples {
        for s in &scenarios.scenarios {
            let mut rows: Vec<ConvexityRow> = Vec::new();
            for i in 0..problem.num_objectives() {
                let delta = problem.objective_component(i, x, &s.u[i])?
                    - problem.objective_component(i, x_bar, &s.u[i])?;
                let sd = subdiff_objective_scenario(problem, i, x_bar, &s.u[i])?;
                for vertex in sd.vertices() {
                    rows.push(ConvexityRow {
                        gradient: vertex.clone(),
                        delta,
                        strict: config.strict,
                    });
                }
            }
            for (j, v, gens, g_bar) in &constraint_rows {
                let delta = problem.constraints[*j].eval(x, *v)? - g_bar;
                for g in gens {
                    rows.push(ConvexityRow {
                        gradient: g.clone(),
                        delta,
                        strict: false,
                    });
                }
            }
            if !direction_system_feasible(&rows, box_radius)? {
                return Ok(GcOutcome {
                    holds: false,
                    counterexample: Some((x.clone(), s.u.clone())),
                });
            }
        }
    }
    Ok(GcOutcome {
        holds: true,
        counterexample: None,
    })
}

/// Sufficiency certificate: highly robust KKT feasibility on every scenario
/// plus generalized convexity of (f, g) on every sample yields
/// Certified(GeneralizedConvexKKT) for local highly robust weak efficiency
/// at the sampled resolution (strict convexity upgrades to strict
/// efficiency along the same gate).
pub fn sufficiency_certificate(
    problem: &UncertainMOP,
    x_bar: &[f64],
    scenarios: &ScenarioSet,
    x_samples: &[Vec<f64>],
    kkt_config: &KktConfig,
) -> Result<Verdict> {
    let kkt = highly_robust_kkt(problem, x_bar, scenarios, kkt_config)?;
    let mut resolution: Resolution = kkt.resolution.clone();
    resolution.insert("x_samples".into(), x_samples.len() as f64);
    resolution.insert("grid_default".into(), DEFAULT_GRID as f64);
    match kkt.status {
        Status::Refuted => return Ok(kkt),
        Status::Inconclusive => {
            return Ok(Verdict::inconclusive(resolution)
                .with_note("highly robust KKT inconclusive; no certificate"))
        }
        _ => {}
    }

    let gc = generalized_convexity(
        problem,
        x_bar,
        x_samples,
        scenarios,
        &GcConfig {
            include_constraints: true,
            v_grid: kkt_config.v_grid,
            feas_tol: kkt_config.feas_tol,
            threading: kkt_config.threading,
            ..GcConfig::default()
        },
    )?;
    if !gc.holds {
        let (x, u) = gc.counterexample.expect("failure carries a counterexample");
        return Ok(Verdict::inconclusive(resolution)
            .with_witness(Witness {
                x: Some(x),
                u: Some(u),
                ..Witness::default()
            })
            .with_note("generalized convexity failed at a sample"));
    }
    Ok(
        Verdict::certified(CertificateKind::GeneralizedConvexKKT, resolution).with_note(
            "KKT feasible on all scenarios and (f,g) generalized convex on all samples: \
             local highly robust weak efficiency at sampled resolution",
        ),
    )
}
