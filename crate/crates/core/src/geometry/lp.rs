//! Self-contained dense two-phase simplex with Bland's rule.
//!
//! Problem sizes here are desk scale (at most a few hundred rows), so a
//! dense tableau is simpler and more auditable than an external solver.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub rel: Relation,
    pub rhs: f64,
}

impl Row {
    pub fn new(coeffs: Vec<f64>, rel: Relation, rhs: f64) -> Self {
        Row { coeffs, rel, rhs }
    }
}

/// Minimize `objective . x` subject to the rows, with `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

const REDCOST_TOL: f64 = 1e-10;
const PIVOT_TOL: f64 = 1e-11;
const PHASE1_TOL: f64 = 1e-9;

struct Tableau {
    rows: Vec<Vec<f64>>, // m x (ncols + 1), last column is rhs
    obj: Vec<f64>,       // ncols + 1, last entry is -objective value
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c];
        debug_assert!(piv.abs() > PIVOT_TOL);
        let inv = 1.0 / piv;
        for v in self.rows[r].iter_mut() {
            *v *= inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c];
            if factor != 0.0 {
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= factor * p;
                }
            }
        }
        let factor = self.obj[c];
        if factor != 0.0 {
            for (v, p) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= factor * p;
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule iteration loop over the allowed entering columns.
    /// Returns false when the current basis hit an unbounded direction.
    fn iterate(&mut self, allowed: &[bool], max_iter: usize) -> Result<bool> {
        for _ in 0..max_iter {
            // Entering: lowest-index allowed column with negative reduced cost.
            let entering = (0..self.ncols)
                .find(|&j| allowed[j] && self.obj[j] < -REDCOST_TOL && !self.basis.contains(&j));
            let Some(c) = entering else {
                return Ok(true);
            };
            // Leaving: min ratio, ties broken by smallest basic variable index.
            let mut best: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[c];
                if a > PIVOT_TOL {
                    let ratio = row[self.ncols] / a;
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-12
                                || ((ratio - br).abs() <= 1e-12
                                    && self.basis[i] < self.basis[bi])
                            {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Ok(false),
            }
        }
        Err(Error::Solver("simplex iteration cap exceeded".into()))
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    let n = lp.objective.len();
    let m = lp.rows.len();
    for row in &lp.rows {
        if row.coeffs.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: row.coeffs.len(),
            });
        }
        if !row.rhs.is_finite() || row.coeffs.iter().any(|v| !v.is_finite()) {
            return Err(Error::Solver("non-finite LP data".into()));
        }
    }

    // Normalize rhs >= 0 so slack columns give a feasible start where possible.
    let mut rows = lp.rows.clone();
    for row in rows.iter_mut() {
        if row.rhs < 0.0 {
            for v in row.coeffs.iter_mut() {
                *v = -*v;
            }
            row.rhs = -row.rhs;
            row.rel = match row.rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    let n_slack = rows
        .iter()
        .filter(|r| matches!(r.rel, Relation::Le | Relation::Ge))
        .count();
    let n_art = rows
        .iter()
        .filter(|r| matches!(r.rel, Relation::Eq | Relation::Ge))
        .count();
    let ncols = n + n_slack + n_art;

    let mut tab = Tableau {
        rows: vec![vec![0.0; ncols + 1]; m],
        obj: vec![0.0; ncols + 1],
        basis: vec![usize::MAX; m],
        ncols,
    };

    let mut slack_at = n;
    let mut art_at = n + n_slack;
    for (i, row) in rows.iter().enumerate() {
        tab.rows[i][..n].copy_from_slice(&row.coeffs);
        tab.rows[i][ncols] = row.rhs;
        match row.rel {
            Relation::Le => {
                tab.rows[i][slack_at] = 1.0;
                tab.basis[i] = slack_at;
                slack_at += 1;
            }
            Relation::Ge => {
                tab.rows[i][slack_at] = -1.0;
                slack_at += 1;
                tab.rows[i][art_at] = 1.0;
                tab.basis[i] = art_at;
                art_at += 1;
            }
            Relation::Eq => {
                tab.rows[i][art_at] = 1.0;
                tab.basis[i] = art_at;
                art_at += 1;
            }
        }
    }

    let max_iter = 20_000 + 200 * (m + ncols);

    // Phase 1: drive the artificial variables to zero.
    if n_art > 0 {
        for j in (n + n_slack)..ncols {
            tab.obj[j] = 1.0;
        }
        // Canonicalize: zero out reduced costs of the basic artificials.
        for (i, &b) in tab.basis.iter().enumerate() {
            if b >= n + n_slack {
                let row = tab.rows[i].clone();
                for (v, p) in tab.obj.iter_mut().zip(&row) {
                    *v -= *p;
                }
            }
        }
        let allowed: Vec<bool> = (0..ncols).map(|_| true).collect();
        tab.iterate(&allowed, max_iter)?;
        let phase1_obj = -tab.obj[ncols];
        if phase1_obj > PHASE1_TOL {
            return Ok(LpOutcome::Infeasible);
        }
        // Pivot lingering artificials out of the basis; a row with no usable
        // structural pivot is redundant and the artificial stays at zero.
        for i in 0..m {
            if tab.basis[i] >= n + n_slack {
                if let Some(c) = (0..n + n_slack)
                    .find(|&j| tab.rows[i][j].abs() > 1e-8 && !tab.basis.contains(&j))
                {
                    tab.pivot(i, c);
                }
            }
        }
    }

    // Phase 2: original objective, artificial columns locked out.
    tab.obj = vec![0.0; ncols + 1];
    tab.obj[..n].copy_from_slice(&lp.objective);
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < ncols && tab.obj[b].abs() > 0.0 {
            let factor = tab.obj[b];
            let row = tab.rows[i].clone();
            for (v, p) in tab.obj.iter_mut().zip(&row) {
                *v -= factor * p;
            }
        }
    }
    let allowed: Vec<bool> = (0..ncols).map(|j| j < n + n_slack).collect();
    let bounded = tab.iterate(&allowed, max_iter)?;
    if !bounded {
        return Ok(LpOutcome::Unbounded);
    }

    let mut x = vec![0.0; n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.rows[i][ncols];
        }
    }
    let objective = crate::linalg::dot(&lp.objective, &x);
    Ok(LpOutcome::Optimal { x, objective })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(objective: Vec<f64>, rows: Vec<Row>) -> LinearProgram {
        LinearProgram { objective, rows }
    }

    #[test]
    fn textbook_maximization() {
        // max x + 2y st x + y <= 4, 2x + y >= 2, y <= 3 -> x=1, y=3, obj 7
        let out = solve(&lp(
            vec![-1.0, -2.0],
            vec![
                Row::new(vec![1.0, 1.0], Relation::Le, 4.0),
                Row::new(vec![2.0, 1.0], Relation::Ge, 2.0),
                Row::new(vec![0.0, 1.0], Relation::Le, 3.0),
            ],
        ))
        .unwrap();
        match out {
            LpOutcome::Optimal { x, objective } => {
                assert!((x[0] - 1.0).abs() < 1e-9);
                assert!((x[1] - 3.0).abs() < 1e-9);
                assert!((objective + 7.0).abs() < 1e-9);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn detects_infeasibility() {
        // x <= 1 and x >= 2
        let out = solve(&lp(
            vec![1.0],
            vec![
                Row::new(vec![1.0], Relation::Le, 1.0),
                Row::new(vec![1.0], Relation::Ge, 2.0),
            ],
        ))
        .unwrap();
        assert!(matches!(out, LpOutcome::Infeasible));
    }

    #[test]
    fn detects_unboundedness() {
        // min -x st x >= 1
        let out = solve(&lp(vec![-1.0], vec![Row::new(vec![1.0], Relation::Ge, 1.0)])).unwrap();
        assert!(matches!(out, LpOutcome::Unbounded));
    }

    #[test]
    fn equality_rows_and_negative_rhs() {
        // min x + y st x - y = -2, x + y >= 4  ->  x = 1, y = 3
        let out = solve(&lp(
            vec![1.0, 1.0],
            vec![
                Row::new(vec![1.0, -1.0], Relation::Eq, -2.0),
                Row::new(vec![1.0, 1.0], Relation::Ge, 4.0),
            ],
        ))
        .unwrap();
        match out {
            LpOutcome::Optimal { x, objective } => {
                assert!((objective - 4.0).abs() < 1e-9);
                assert!((x[1] - x[0] - 2.0).abs() < 1e-9);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Classic cycling-prone instance (Beale); Bland's rule must terminate.
        let out = solve(&lp(
            vec![-0.75, 150.0, -0.02, 6.0],
            vec![
                Row::new(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0),
                Row::new(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0),
                Row::new(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0),
            ],
        ))
        .unwrap();
        match out {
            LpOutcome::Optimal { objective, .. } => {
                assert!((objective + 0.05).abs() < 1e-9);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }
}
