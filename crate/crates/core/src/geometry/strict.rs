//! Strict-inequality feasibility as a margin-maximization LP.
//!
//! LPs cannot express open constraints, so "a.x < rhs" is realized by
//! maximizing a common margin t over "a.x + t <= rhs"; the system counts as
//! strictly solvable iff the optimal margin exceeds `STRICT_TOL`.

use crate::constants::STRICT_TOL;
use crate::error::{Error, Result};
use crate::geometry::lp::{solve, LinearProgram, LpOutcome, Relation, Row};
use crate::linalg;

#[derive(Clone, Debug)]
pub struct StrictWitness {
    pub x: Vec<f64>,
    /// Maximized strict margin; infinite when the system had no strict rows.
    pub margin: f64,
}

/// Searches the box `|x|_inf <= 1`.
pub fn solve_strict_feasibility(
    strict: &[(Vec<f64>, f64)],
    weak: &[(Vec<f64>, f64)],
) -> Result<Option<StrictWitness>> {
    solve_strict_feasibility_in_box(strict, weak, 1.0)
}

/// Same system over `|x|_inf <= box_radius`. Callers with inhomogeneous
/// right-hand sides (where scaling the witness is not free) pick the radius.
pub fn solve_strict_feasibility_in_box(
    strict: &[(Vec<f64>, f64)],
    weak: &[(Vec<f64>, f64)],
    box_radius: f64,
) -> Result<Option<StrictWitness>> {
    if box_radius <= 0.0 || !box_radius.is_finite() {
        return Err(Error::config("box radius must be positive and finite"));
    }
    let n = strict
        .iter()
        .chain(weak.iter())
        .map(|(a, _)| a.len())
        .next()
        .ok_or_else(|| Error::config("strict feasibility needs at least one row"))?;
    for (a, _) in strict.iter().chain(weak.iter()) {
        if a.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: a.len(),
            });
        }
    }

    // Shifted variables z = x + R in [0, 2R]; free margin t = tp - tm.
    let r = box_radius;
    let ncols = n + 2;
    let shift = |a: &[f64], rhs: f64| rhs + r * a.iter().sum::<f64>();
    let mut rows = Vec::with_capacity(strict.len() + weak.len() + n);
    for (a, rhs) in strict {
        let mut coeffs = vec![0.0; ncols];
        coeffs[..n].copy_from_slice(a);
        coeffs[n] = 1.0;
        coeffs[n + 1] = -1.0;
        rows.push(Row::new(coeffs, Relation::Le, shift(a, *rhs)));
    }
    for (a, rhs) in weak {
        let mut coeffs = vec![0.0; ncols];
        coeffs[..n].copy_from_slice(a);
        rows.push(Row::new(coeffs, Relation::Le, shift(a, *rhs)));
    }
    for i in 0..n {
        let mut coeffs = vec![0.0; ncols];
        coeffs[i] = 1.0;
        rows.push(Row::new(coeffs, Relation::Le, 2.0 * r));
    }

    let mut objective = vec![0.0; ncols];
    if !strict.is_empty() {
        objective[n] = -1.0; // maximize t
        objective[n + 1] = 1.0;
    }

    match solve(&LinearProgram { objective, rows })? {
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(Error::Solver(
            "margin LP unbounded; box normalization missing".into(),
        )),
        LpOutcome::Optimal { x, .. } => {
            let witness: Vec<f64> = x[..n].iter().map(|z| z - r).collect();
            let margin = if strict.is_empty() {
                f64::INFINITY
            } else {
                x[n] - x[n + 1]
            };
            if margin > STRICT_TOL {
                Ok(Some(StrictWitness {
                    x: witness,
                    margin,
                }))
            } else {
                Ok(None)
            }
        }
    }
}

/// Direct substitution check: every strict row satisfied by at least
/// `STRICT_TOL`, every weak row satisfied up to roundoff.
pub fn witness_satisfies(
    witness: &StrictWitness,
    strict: &[(Vec<f64>, f64)],
    weak: &[(Vec<f64>, f64)],
) -> bool {
    strict
        .iter()
        .all(|(a, rhs)| linalg::dot(a, &witness.x) <= rhs - STRICT_TOL)
        && weak
            .iter()
            .all(|(a, rhs)| linalg::dot(a, &witness.x) <= rhs + 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_strict_row_in_r1() {
        // x < 0 has witness x = -1 with margin 1.
        let strict = vec![(vec![1.0], 0.0)];
        let w = solve_strict_feasibility(&strict, &[]).unwrap().unwrap();
        assert!((w.x[0] + 1.0).abs() < 1e-9);
        assert!((w.margin - 1.0).abs() < 1e-9);
        assert!(witness_satisfies(&w, &strict, &[]));
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        // x < 0 and -x < 0
        let strict = vec![(vec![1.0], 0.0), (vec![-1.0], 0.0)];
        assert!(solve_strict_feasibility(&strict, &[]).unwrap().is_none());
    }

    #[test]
    fn weak_rows_constrain_the_witness() {
        // x + y < 0 with y >= 0.5 forces x <= -0.5 - margin.
        let strict = vec![(vec![1.0, 1.0], 0.0)];
        let weak = vec![(vec![0.0, -1.0], -0.5)];
        let w = solve_strict_feasibility(&strict, &weak).unwrap().unwrap();
        assert!(witness_satisfies(&w, &strict, &weak));
    }

    #[test]
    fn weak_only_system_reports_feasibility() {
        let weak = vec![(vec![1.0], 0.25)];
        let w = solve_strict_feasibility(&[], &weak).unwrap().unwrap();
        assert!(w.margin.is_infinite());
        assert!(w.x[0] <= 0.25 + 1e-12);
    }

    #[test]
    fn larger_box_admits_larger_witnesses() {
        // d = 3 is needed: d >= 3 (weak), d < 4 (strict)
        let strict = vec![(vec![1.0], 4.0)];
        let weak = vec![(vec![-1.0], -3.0)];
        assert!(solve_strict_feasibility(&strict, &weak).unwrap().is_none());
        let w = solve_strict_feasibility_in_box(&strict, &weak, 5.0)
            .unwrap()
            .unwrap();
        assert!(w.x[0] >= 3.0 - 1e-9);
    }
}
