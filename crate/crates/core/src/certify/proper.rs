//! Properness refuter: when every sampled feasible direction admits a
//! scenario with strictly positive supports, a highly robust weakly
//! efficient point must be properly efficient; failing the bounded
//! tradeoff-ratio test for every bound M in the sweep therefore refutes
//! high robustness by contraposition.
//!
//! Properness is tested in the Geoffrion tradeoff-ratio form, which agrees
//! with the cone-based notion for efficient points under the nonnegative
//! orthant in finite dimension; that equivalence is an assumption of the
//! refuter and recorded in its notes.

use crate::constants::STRICT_TOL;
use crate::error::{Error, Result};
use crate::geometry::support::Support;
use crate::linalg;
use crate::model::problem::{eval_objective_scenario, UncertainMOP};

use super::efficiency::{grid_efficiency, ScanConfig};
use super::{Resolution, Verdict, Witness};

#[derive(Clone, Debug)]
pub struct ProperConfig {
    /// Cap on how many sampled directions are tested for the support
    /// condition.
    pub direction_net: usize,
    /// Tradeoff bounds; properness must fail at every one to refute.
    pub m_list: Vec<f64>,
    pub scan: ScanConfig,
}

impl Default for ProperConfig {
    fn default() -> Self {
        ProperConfig {
            direction_net: 720,
            m_list: crate::constants::DEFAULT_M_LIST.to_vec(),
            scan: ScanConfig::default(),
        }
    }
}

pub fn proper_refuter(
    problem: &UncertainMOP,
    x_bar: &[f64],
    config: &ProperConfig,
) -> Result<Verdict> {
    if config.m_list.is_empty() {
        return Err(Error::config("tradeoff bound list is empty"));
    }
    let mut resolution: Resolution = config.scan.resolution(&[]);
    resolution.insert("direction_net".into(), config.direction_net as f64);
    resolution.insert(
        "m_max".into(),
        config.m_list.iter().copied().fold(0.0, f64::max),
    );

    // Precondition: the candidate is efficient for the nominal problem on
    // the lattice (the properness equivalence needs an efficient point).
    let zero_u = vec![vec![0.0; problem.n]; problem.num_objectives()];
    if let Some(x) = grid_efficiency(problem, x_bar, &zero_u, &config.scan)? {
        return Ok(Verdict::inconclusive(resolution)
            .with_witness(Witness {
                x: Some(x),
                ..Witness::default()
            })
            .with_note("candidate is not efficient at u = 0 on the lattice"));
    }

    let lattice = super::feasible_lattice(
        problem,
        x_bar,
        config.scan.radius,
        config.scan.grid,
        config.scan.feas_tol,
        config.scan.v_grid,
    )?;

    // Step 1: for every sampled direction (x - x_bar)/|x - x_bar| some
    // scenario must have all supports strictly positive; with product
    // uncertainty that decouples into per-component support positivity.
    let stride = (lattice.len() / config.direction_net.max(1)).max(1);
    for x in lattice.iter().step_by(stride) {
        let d = linalg::sub(x, x_bar);
        let norm = linalg::norm2(&d);
        if norm <= 1e-12 {
            continue;
        }
        let d = linalg::scale(&d, 1.0 / norm);
        if !problem
            .uncertainty
            .iter()
            .all(|set| set.support(&d) > STRICT_TOL)
        {
            return Ok(Verdict::inconclusive(resolution).with_note(
                "support condition fails along a sampled direction; \
                 properness carries no highly-robust implication here",
            ));
        }
    }

    // Step 2: Geoffrion tradeoff test. For a bound M, properness is
    // violated by (x, i) with f_i(x) < f_i(x_bar) while every objective
    // that worsens does so at a tradeoff ratio above M.
    let f_bar = eval_objective_scenario(problem, x_bar, &zero_u)?;
    let mut last_witness: Option<Vec<f64>> = None;
    for &m in &config.m_list {
        let mut violated = false;
        'points: for x in &lattice {
            if linalg::dist_inf(x, x_bar) <= 1e-12 {
                continue;
            }
            let fx = eval_objective_scenario(problem, x, &zero_u)?;
            for i in 0..fx.len() {
                let gain = f_bar[i] - fx[i];
                if gain <= STRICT_TOL {
                    continue;
                }
                let bounded_somewhere = fx.iter().zip(&f_bar).enumerate().any(|(k, (a, b))| {
                    k != i && *a > b + STRICT_TOL && gain <= m * (a - b)
                });
                if !bounded_somewhere {
                    violated = true;
                    last_witness = Some(x.clone());
                    break 'points;
                }
            }
        }
        if !violated {
            return Ok(Verdict::inconclusive(resolution).with_note(format!(
                "tradeoff ratios bounded by M = {m} on the lattice; properness not refuted"
            )));
        }
    }

    Ok(Verdict::refuted(
        Witness {
            x: last_witness,
            ..Witness::default()
        },
        resolution,
    )
    .with_note(
        "support condition holds and tradeoff ratios exceed every bound in the sweep: \
         candidate cannot be highly robust weakly efficient (Geoffrion form assumed \
         equivalent for efficient points)",
    ))
}
