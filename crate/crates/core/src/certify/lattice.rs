//! Shared robust-feasible lattice over the search box, used by every grid
//! oracle. Lattice oracles are limited to low dimension; higher-dimensional
//! problems must pass explicit sample lists instead.

use crate::constants::MAX_LATTICE_DIM;
use crate::error::{Error, Result};
use crate::linalg;
use crate::model::problem::{is_robust_feasible_with_grid, UncertainMOP};

/// 0.25 * Euclidean diameter of the search box.
pub fn default_local_radius(problem: &UncertainMOP) -> Result<f64> {
    let (lo, hi) = problem
        .box_bounds
        .as_ref()
        .ok_or_else(|| Error::config("problem has no box_bounds for grid oracles"))?;
    Ok(0.25 * linalg::dist2(hi, lo))
}

/// Robust-feasible lattice points of the box intersected with the Euclidean
/// ball around `x_bar` (radius may be infinite). The candidate itself is
/// kept if feasible; callers that need x != x_bar skip it.
pub fn feasible_lattice(
    problem: &UncertainMOP,
    x_bar: &[f64],
    radius: f64,
    grid: usize,
    feas_tol: f64,
    v_grid: usize,
) -> Result<Vec<Vec<f64>>> {
    let (lo, hi) = problem
        .box_bounds
        .as_ref()
        .ok_or_else(|| Error::config("problem has no box_bounds for grid oracles"))?;
    if problem.n > MAX_LATTICE_DIM {
        return Err(Error::config(format!(
            "lattice oracles support n <= {MAX_LATTICE_DIM}; supply explicit samples"
        )));
    }
    if grid < 2 {
        return Err(Error::config("lattice needs at least 2 points per axis"));
    }
    if !(radius > 0.0) {
        return Err(Error::config("radius must be positive"));
    }

    let axes: Vec<Vec<f64>> = lo
        .iter()
        .zip(hi)
        .map(|(l, h)| linalg::linspace(*l, *h, grid))
        .collect();
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in &axes {
        let mut next = Vec::with_capacity(points.len() * axis.len());
        for base in &points {
            for &v in axis {
                let mut p = base.clone();
                p.push(v);
                next.push(p);
            }
        }
        points = next;
    }

    let mut out = Vec::new();
    for p in points {
        if radius.is_finite() && linalg::dist2(&p, x_bar) > radius {
            continue;
        }
        if is_robust_feasible_with_grid(problem, &p, feas_tol, v_grid)? {
            out.push(p);
        }
    }
    if out.is_empty() {
        return Err(Error::config(
            "empty lattice: no robust-feasible grid point in the search region",
        ));
    }
    Ok(out)
}
