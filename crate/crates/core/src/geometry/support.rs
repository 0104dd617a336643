//! Support functions: sigma_S(d) = sup of d.s over s in S, +inf along
//! unbounded recession directions.

use crate::geometry::polytope::Polytope;
use crate::linalg;

/// Ray alignment threshold: a recession ray with d.r above this makes the
/// support infinite.
pub const RAY_TOL: f64 = 1e-12;

pub trait Support {
    /// Support value in direction `d`; `f64::INFINITY` when unbounded.
    fn support(&self, d: &[f64]) -> f64;

    /// A point of the set attaining (or approaching within any tolerance)
    /// the support in direction `d`. For unbounded directions the returned
    /// point travels along an improving ray far enough to exceed `target`.
    fn support_point(&self, d: &[f64], target: f64) -> Vec<f64>;
}

impl Support for Polytope {
    fn support(&self, d: &[f64]) -> f64 {
        if self.rays().iter().any(|r| linalg::dot(d, r) > RAY_TOL) {
            return f64::INFINITY;
        }
        self.vertices()
            .iter()
            .map(|v| linalg::dot(d, v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn support_point(&self, d: &[f64], target: f64) -> Vec<f64> {
        let best = self
            .vertices()
            .iter()
            .max_by(|a, b| linalg::dot(d, a).total_cmp(&linalg::dot(d, b)))
            .expect("polytope has a vertex")
            .clone();
        let improving = self
            .rays()
            .iter()
            .find(|r| linalg::dot(d, r) > RAY_TOL);
        match improving {
            None => best,
            Some(r) => {
                let have = linalg::dot(d, &best);
                let rate = linalg::dot(d, r);
                let gamma = ((target - have) / rate).max(0.0) + 1.0;
                linalg::axpy(&best, gamma, r)
            }
        }
    }
}

/// Convenience free function mirroring the operation name.
pub fn support_value<S: Support + ?Sized>(set: &S, d: &[f64]) -> f64 {
    set.support(d)
}
