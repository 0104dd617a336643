//! Scenario-wise efficiency oracles: lattice search for dominating points
//! under a fixed scenario, and the highly-robust scan over a scenario set.

use crate::constants::{DEFAULT_GRID, DEFAULT_V_GRID, FEAS_TOL, STRICT_TOL};
use crate::error::{Error, Result};
use crate::exec::{self, Threading};
use crate::linalg;
use crate::model::problem::{eval_objective_scenario, is_robust_feasible_with_grid, UncertainMOP};
use crate::scenarios::ScenarioSet;

use super::{Resolution, Verdict, Witness};

/// Which efficiency notion a dominating point must violate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EfficiencyMode {
    /// f(x) < f(x_bar) in every component.
    Weak,
    /// f(x) <= f(x_bar) componentwise with at least one strict.
    Efficient,
    /// f(x) <= f(x_bar) componentwise with x != x_bar.
    Strict,
}

impl EfficiencyMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            EfficiencyMode::Weak => "weak",
            EfficiencyMode::Efficient => "efficient",
            EfficiencyMode::Strict => "strict",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub mode: EfficiencyMode,
    /// Euclidean neighborhood radius around the candidate; infinite = global.
    pub radius: f64,
    /// Lattice points per axis over the search box.
    pub grid: usize,
    pub feas_tol: f64,
    /// Parameter-grid resolution for constraint suprema.
    pub v_grid: usize,
    pub threading: Threading,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            mode: EfficiencyMode::Efficient,
            radius: f64::INFINITY,
            grid: DEFAULT_GRID,
            feas_tol: FEAS_TOL,
            v_grid: DEFAULT_V_GRID,
            threading: Threading::default(),
        }
    }
}

impl ScanConfig {
    pub fn resolution(&self, extra: &[(&str, f64)]) -> Resolution {
        let mut r = Resolution::new();
        r.insert("grid".into(), self.grid as f64);
        r.insert("radius".into(), self.radius);
        r.insert("feas_tol".into(), self.feas_tol);
        r.insert("v_grid".into(), self.v_grid as f64);
        r.insert("strict_tol".into(), STRICT_TOL);
        for (k, v) in extra {
            r.insert((*k).into(), *v);
        }
        r
    }
}

/// True when `fx` violates the `mode` efficiency of `f_bar`; the strict
/// parts must clear `STRICT_TOL` so every witness re-validates with margin.
pub(crate) fn dominates(mode: EfficiencyMode, fx: &[f64], f_bar: &[f64]) -> bool {
    match mode {
        EfficiencyMode::Weak => fx
            .iter()
            .zip(f_bar)
            .all(|(a, b)| *a < b - STRICT_TOL),
        EfficiencyMode::Efficient => {
            fx.iter().zip(f_bar).all(|(a, b)| a <= b)
                && fx.iter().zip(f_bar).any(|(a, b)| *a < b - STRICT_TOL)
        }
        EfficiencyMode::Strict => fx.iter().zip(f_bar).all(|(a, b)| a <= b),
    }
}

fn violator_on_lattice(
    problem: &UncertainMOP,
    x_bar: &[f64],
    u: &[Vec<f64>],
    lattice: &[Vec<f64>],
    mode: EfficiencyMode,
) -> Result<Option<Vec<f64>>> {
    let f_bar = eval_objective_scenario(problem, x_bar, u)?;
    for x in lattice {
        if linalg::dist_inf(x, x_bar) <= 1e-12 {
            continue;
        }
        let fx = eval_objective_scenario(problem, x, u)?;
        if dominates(mode, &fx, &f_bar) {
            return Ok(Some(x.clone()));
        }
    }
    Ok(None)
}

/// Scans the robust-feasible lattice for a point violating the efficiency
/// of `x_bar` under the fixed scenario `u`; None when no violator exists at
/// this resolution.
pub fn grid_efficiency(
    problem: &UncertainMOP,
    x_bar: &[f64],
    u: &[Vec<f64>],
    config: &ScanConfig,
) -> Result<Option<Vec<f64>>> {
    if !is_robust_feasible_with_grid(problem, x_bar, config.feas_tol, config.v_grid)? {
        return Err(Error::config("candidate is not robust feasible"));
    }
    let lattice = super::feasible_lattice(
        problem,
        x_bar,
        config.radius,
        config.grid,
        config.feas_tol,
        config.v_grid,
    )?;
    violator_on_lattice(problem, x_bar, u, &lattice, config.mode)
}

/// Runs the per-scenario grid oracle over the whole scenario set. Any
/// witness refutes highly robust efficiency in the given mode; otherwise
/// the candidate is consistent at this resolution. The scenario loop is
/// data parallel; the reported witness is always the first in scenario
/// order.
pub fn highly_robust_scan(
    problem: &UncertainMOP,
    x_bar: &[f64],
    scenarios: &ScenarioSet,
    config: &ScanConfig,
) -> Result<Verdict> {
    if scenarios.is_empty() {
        return Err(Error::config("scenario set is empty"));
    }
    if !is_robust_feasible_with_grid(problem, x_bar, config.feas_tol, config.v_grid)? {
        return Err(Error::config("candidate is not robust feasible"));
    }
    let lattice = super::feasible_lattice(
        problem,
        x_bar,
        config.radius,
        config.grid,
        config.feas_tol,
        config.v_grid,
    )?;

    let outcomes = exec::map(config.threading, &scenarios.scenarios, |s| {
        violator_on_lattice(problem, x_bar, &s.u, &lattice, config.mode)
    });
    let mut first: Option<(Vec<f64>, Vec<Vec<f64>>)> = None;
    for (s, outcome) in scenarios.scenarios.iter().zip(outcomes) {
        if let Some(x) = outcome? {
            first = Some((x, s.u.clone()));
            break;
        }
    }

    let resolution = config.resolution(&[
        ("scenarios".into(), scenarios.len() as f64),
        ("lattice_points".into(), lattice.len() as f64),
    ]);
    Ok(match first {
        Some((x, u)) => Verdict::refuted(
            Witness {
                x: Some(x),
                u: Some(u),
                ..Witness::default()
            },
            resolution,
        )
        .with_note(format!("mode={}", config.mode.as_str())),
        None => Verdict::consistent(resolution).with_note(format!("mode={}", config.mode.as_str())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::constraint::ParamConstraint;
    use crate::model::expr::ScalarExpr;
    use crate::model::uncertainty::UncertaintySet;
    use crate::scenarios::sample;

    /// min (x - u1 x, x^2 - u2 x) over [-1,1], U = [-0.5,0.5] x [0,1].
    fn interval_problem() -> UncertainMOP {
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
        UncertainMOP::new(
            1,
            vec![f1, f2],
            vec![u1, u2],
            vec![
                ParamConstraint::certain(ScalarExpr::affine(-1.0, vec![1.0])),
                ParamConstraint::certain(ScalarExpr::affine(-1.0, vec![-1.0])),
            ],
            Some((vec![-1.0], vec![1.0])),
        )
        .unwrap()
    }

    #[test]
    fn candidate_survives_every_sampled_scenario() {
        let p = interval_problem();
        let scenarios = sample(&p, 11, 0).unwrap();
        let config = ScanConfig {
            grid: 201,
            ..ScanConfig::default()
        };
        let v = highly_robust_scan(&p, &[0.0], &scenarios, &config).unwrap();
        assert_eq!(v.status, super::super::Status::ConsistentAtResolution);
    }

    #[test]
    fn single_zero_scenario_on_shared_minimizer_is_consistent() {
        // Both objectives are x^2-like with unique minimum at 0.
        let f1 = ScalarExpr::zero(1).with_quad(vec![vec![2.0]]);
        let f2 = ScalarExpr::zero(1)
            .with_quad(vec![vec![4.0]])
            .with_abs(1.0, vec![1.0], 0.0);
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
        let scenarios = ScenarioSet::single(vec![vec![0.0], vec![0.0]]);
        let v = highly_robust_scan(&p, &[0.0], &scenarios, &ScanConfig::default()).unwrap();
        assert_eq!(v.status, super::super::Status::ConsistentAtResolution);
        for mode in [EfficiencyMode::Weak, EfficiencyMode::Strict] {
            let cfg = ScanConfig {
                mode,
                ..ScanConfig::default()
            };
            let v = highly_robust_scan(&p, &[0.0], &scenarios, &cfg).unwrap();
            assert_eq!(v.status, super::super::Status::ConsistentAtResolution);
        }
    }

    #[test]
    fn witness_revalidates_by_direct_evaluation() {
        // f1 = f2 = x on [0,1]: x_bar = 1 is dominated everywhere.
        let f = ScalarExpr::affine(0.0, vec![1.0]);
        let u = UncertaintySet::Finite {
            points: vec![vec![0.0]],
        };
        let p = UncertainMOP::new(
            1,
            vec![f.clone(), f],
            vec![u.clone(), u],
            vec![],
            Some((vec![0.0], vec![1.0])),
        )
        .unwrap();
        let scenarios = ScenarioSet::single(vec![vec![0.0], vec![0.0]]);
        let cfg = ScanConfig {
            mode: EfficiencyMode::Weak,
            ..ScanConfig::default()
        };
        let v = highly_robust_scan(&p, &[1.0], &scenarios, &cfg).unwrap();
        assert!(v.is_refuted());
        let w = v.witness.unwrap();
        let x = w.x.unwrap();
        let u = w.u.unwrap();
        let fx = eval_objective_scenario(&p, &x, &u).unwrap();
        let fb = eval_objective_scenario(&p, &[1.0], &u).unwrap();
        for (a, b) in fx.iter().zip(&fb) {
            assert!(*a < b - STRICT_TOL);
        }
    }

    #[test]
    fn threading_modes_agree() {
        let p = interval_problem();
        let scenarios = sample(&p, 5, 0).unwrap();
        let seq = highly_robust_scan(
            &p,
            &[0.0],
            &scenarios,
            &ScanConfig {
                threading: Threading::Sequential,
                ..ScanConfig::default()
            },
        )
        .unwrap();
        let par = highly_robust_scan(
            &p,
            &[0.0],
            &scenarios,
            &ScanConfig {
                threading: Threading::Parallel,
                ..ScanConfig::default()
            },
        )
        .unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn infeasible_candidate_is_rejected() {
        let p = interval_problem();
        let scenarios = ScenarioSet::single(vec![vec![0.0], vec![0.0]]);
        assert!(matches!(
            highly_robust_scan(&p, &[2.0], &scenarios, &ScanConfig::default()),
            Err(Error::Config(_))
        ));
    }
}
