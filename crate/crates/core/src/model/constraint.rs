//! Parametric constraints g_j(x, v) <= 0 over one-dimensional parameter
//! domains, their pointwise suprema G_j, and (perturbed) active index sets.

use crate::constants::{ACT_TOL, GOLDEN_TOL};
use crate::error::{Error, Result};
use crate::linalg;
use crate::model::expr::{eval_scalar, ScalarExpr};

/// Matching tolerance for parameter values (endpoints, finite labels,
/// deduplication of maximizers).
pub const V_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum ParamDomain {
    Interval {
        lo: f64,
        hi: f64,
        lo_closed: bool,
        hi_closed: bool,
    },
    Finite {
        values: Vec<f64>,
    },
}

impl ParamDomain {
    pub fn interval(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::validation("interval domain needs lo < hi"));
        }
        Ok(ParamDomain::Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }

    pub fn finite(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::validation("finite domain needs at least one value"));
        }
        values.sort_by(|a, b| a.total_cmp(b));
        values.dedup_by(|a, b| (*a - *b).abs() <= V_TOL);
        Ok(ParamDomain::Finite { values })
    }

    /// Membership of `v` in the closure of the domain.
    pub fn closure_contains(&self, v: f64) -> bool {
        match self {
            ParamDomain::Interval { lo, hi, .. } => v >= lo - V_TOL && v <= hi + V_TOL,
            ParamDomain::Finite { values } => {
                values.iter().any(|w| (w - v).abs() <= V_TOL)
            }
        }
    }

    /// True when `v` sits at an excluded (open) endpoint.
    pub fn at_excluded_endpoint(&self, v: f64) -> bool {
        match self {
            ParamDomain::Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
            } => {
                (!lo_closed && (v - lo).abs() <= V_TOL)
                    || (!hi_closed && (v - hi).abs() <= V_TOL)
            }
            ParamDomain::Finite { .. } => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Poly,
    Sin,
    Cos,
}

/// One basis block: poly sums c_k v^k, sin/cos sum c_k sin((k+1)v) /
/// c_k cos((k+1)v).
#[derive(Clone, Debug, PartialEq)]
pub struct BasisTerm {
    pub basis: Basis,
    pub coeffs: Vec<f64>,
}

impl BasisTerm {
    pub fn eval(&self, v: f64) -> f64 {
        match self.basis {
            Basis::Poly => {
                let mut acc = 0.0;
                for &c in self.coeffs.iter().rev() {
                    acc = acc * v + c;
                }
                acc
            }
            Basis::Sin => self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * ((k + 1) as f64 * v).sin())
                .sum(),
            Basis::Cos => self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * ((k + 1) as f64 * v).cos())
                .sum(),
        }
    }
}

/// Coefficient function of the scalar parameter: a sum of basis blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefFn {
    pub terms: Vec<BasisTerm>,
}

impl CoefFn {
    pub fn constant(c: f64) -> Self {
        CoefFn {
            terms: vec![BasisTerm {
                basis: Basis::Poly,
                coeffs: vec![c],
            }],
        }
    }

    pub fn poly(coeffs: Vec<f64>) -> Self {
        CoefFn {
            terms: vec![BasisTerm {
                basis: Basis::Poly,
                coeffs,
            }],
        }
    }

    pub fn sin() -> Self {
        CoefFn {
            terms: vec![BasisTerm {
                basis: Basis::Sin,
                coeffs: vec![1.0],
            }],
        }
    }

    pub fn cos() -> Self {
        CoefFn {
            terms: vec![BasisTerm {
                basis: Basis::Cos,
                coeffs: vec![1.0],
            }],
        }
    }

    pub fn eval(&self, v: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(v)).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConstraintKind {
    /// g(x, v) = a(v).x + b(v); smooth in x for every parameter value.
    AffineInX { a_of_v: Vec<CoefFn>, b_of_v: CoefFn },
    /// Finitely many labelled scenarios, each a full expression in x.
    FiniteScenarios { scenarios: Vec<(f64, ScalarExpr)> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamConstraint {
    pub kind: ConstraintKind,
    pub domain: ParamDomain,
}

impl ParamConstraint {
    /// A parameter-free constraint expr(x) <= 0, encoded as a single
    /// scenario with label 0.
    pub fn certain(expr: ScalarExpr) -> Self {
        ParamConstraint {
            kind: ConstraintKind::FiniteScenarios {
                scenarios: vec![(0.0, expr)],
            },
            domain: ParamDomain::Finite { values: vec![0.0] },
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match &self.kind {
            ConstraintKind::AffineInX { a_of_v, .. } => {
                if a_of_v.len() != n {
                    return Err(Error::Dimension {
                        expected: n,
                        found: a_of_v.len(),
                    });
                }
            }
            ConstraintKind::FiniteScenarios { scenarios } => {
                if scenarios.is_empty() {
                    return Err(Error::validation("finite-scenario constraint is empty"));
                }
                for (_, expr) in scenarios {
                    if expr.dim() != n {
                        return Err(Error::Dimension {
                            expected: n,
                            found: expr.dim(),
                        });
                    }
                    expr.validate()?;
                }
                if !matches!(self.domain, ParamDomain::Finite { .. }) {
                    return Err(Error::validation(
                        "finite-scenario constraint needs a finite domain",
                    ));
                }
            }
        }
        Ok(())
    }

    /// g(x, v); `v` must lie in the closure of the domain.
    pub fn eval(&self, x: &[f64], v: f64) -> Result<f64> {
        if !self.domain.closure_contains(v) {
            return Err(Error::Domain(format!("parameter {v} outside domain closure")));
        }
        match &self.kind {
            ConstraintKind::AffineInX { a_of_v, b_of_v } => {
                let a: Vec<f64> = a_of_v.iter().map(|f| f.eval(v)).collect();
                Ok(linalg::dot(&a, x) + b_of_v.eval(v))
            }
            ConstraintKind::FiniteScenarios { scenarios } => {
                let (_, expr) = scenarios
                    .iter()
                    .min_by(|(l1, _), (l2, _)| {
                        (l1 - v).abs().total_cmp(&(l2 - v).abs())
                    })
                    .expect("validated nonempty");
                let label = scenarios
                    .iter()
                    .map(|(l, _)| (l - v).abs())
                    .fold(f64::INFINITY, f64::min);
                if label > V_TOL {
                    return Err(Error::Domain(format!(
                        "no scenario labelled near parameter {v}"
                    )));
                }
                eval_scalar(expr, x)
            }
        }
    }

    /// x-gradient generators of g(., v) at x.
    pub(crate) fn x_coefficients(&self, v: f64) -> Result<Option<Vec<f64>>> {
        match &self.kind {
            ConstraintKind::AffineInX { a_of_v, .. } => {
                Ok(Some(a_of_v.iter().map(|f| f.eval(v)).collect()))
            }
            ConstraintKind::FiniteScenarios { .. } => Ok(None),
        }
    }

    pub(crate) fn scenario_expr(&self, v: f64) -> Result<&ScalarExpr> {
        match &self.kind {
            ConstraintKind::FiniteScenarios { scenarios } => scenarios
                .iter()
                .find(|(l, _)| (l - v).abs() <= V_TOL)
                .map(|(_, e)| e)
                .ok_or_else(|| Error::Domain(format!("no scenario labelled near {v}"))),
            ConstraintKind::AffineInX { .. } => Err(Error::Domain(
                "affine constraint has no scenario expressions".into(),
            )),
        }
    }
}

/// Supremum of g(x, .) over the (closure of the) parameter domain, with the
/// set of maximizers found. Open endpoints keep the supremum value, but a
/// maximizer sitting at an excluded endpoint is dropped from `arg_set` and
/// flagged, so the active set may be empty.
#[derive(Clone, Debug)]
pub struct ConstraintSup {
    pub value: f64,
    pub arg_set: Vec<f64>,
    pub attained_outside_domain: bool,
}

pub fn constraint_sup(
    constraint: &ParamConstraint,
    x: &[f64],
    grid_resolution: usize,
) -> Result<ConstraintSup> {
    let mut candidates: Vec<(f64, f64)> = Vec::new(); // (v, value)
    match &constraint.domain {
        ParamDomain::Finite { values } => {
            for &v in values {
                candidates.push((v, constraint.eval(x, v)?));
            }
        }
        ParamDomain::Interval { lo, hi, .. } => {
            if grid_resolution < 2 {
                return Err(Error::config("interval domains need grid_resolution >= 2"));
            }
            let grid = linalg::linspace(*lo, *hi, grid_resolution);
            let values: Vec<f64> = grid
                .iter()
                .map(|&v| constraint.eval(x, v))
                .collect::<Result<_>>()?;
            // Refine every grid-local maximum by golden section in its bracket.
            for k in 0..grid.len() {
                let left_ok = k == 0 || values[k] >= values[k - 1];
                let right_ok = k + 1 == grid.len() || values[k] >= values[k + 1];
                if left_ok && right_ok {
                    let a = if k == 0 { grid[0] } else { grid[k - 1] };
                    let b = if k + 1 == grid.len() {
                        grid[grid.len() - 1]
                    } else {
                        grid[k + 1]
                    };
                    let (mut v_star, f_star) =
                        golden_max(|v| constraint.eval(x, v).expect("grid point in closure"), a, b);
                    // Snap to exact endpoints so active sets report them exactly.
                    if (v_star - lo).abs() <= 1e-7 {
                        v_star = *lo;
                    }
                    if (v_star - hi).abs() <= 1e-7 {
                        v_star = *hi;
                    }
                    candidates.push((v_star, constraint.eval(x, v_star)?.max(f_star)));
                }
            }
        }
    }

    let value = candidates
        .iter()
        .map(|(_, f)| *f)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut attained_outside = false;
    let mut arg_set: Vec<f64> = Vec::new();
    let mut sorted = candidates;
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (v, f) in sorted {
        if f >= value - ACT_TOL {
            if constraint.domain.at_excluded_endpoint(v) {
                attained_outside = true;
            } else if !arg_set.iter().any(|w| (w - v).abs() <= V_TOL) {
                arg_set.push(v);
            }
        }
    }
    Ok(ConstraintSup {
        value,
        arg_set,
        attained_outside_domain: attained_outside,
    })
}

/// Perturbed active set {v : g(x, v) >= G(x) - eps}, discretized like
/// `constraint_sup`; eps = 0 recovers the maximizer set up to `ACT_TOL`.
pub fn active_set(
    constraint: &ParamConstraint,
    x: &[f64],
    eps: f64,
    grid_resolution: usize,
) -> Result<Vec<f64>> {
    if eps < 0.0 {
        return Err(Error::config("active-set epsilon must be nonnegative"));
    }
    let sup = constraint_sup(constraint, x, grid_resolution)?;
    let threshold = sup.value - eps - ACT_TOL;
    let mut out: Vec<f64> = sup.arg_set.clone();
    match &constraint.domain {
        ParamDomain::Finite { values } => {
            for &v in values {
                if constraint.eval(x, v)? >= threshold
                    && !out.iter().any(|w| (w - v).abs() <= V_TOL)
                {
                    out.push(v);
                }
            }
        }
        ParamDomain::Interval { lo, hi, .. } => {
            for v in linalg::linspace(*lo, *hi, grid_resolution.max(2)) {
                if constraint.domain.at_excluded_endpoint(v) {
                    continue;
                }
                if constraint.eval(x, v)? >= threshold
                    && !out.iter().any(|w| (w - v).abs() <= V_TOL)
                {
                    out.push(v);
                }
            }
        }
    }
    out.sort_by(|a, b| a.total_cmp(b));
    Ok(out)
}

/// Golden-section maximization over [a, b] to `GOLDEN_TOL` in the parameter.
fn golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    const PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a, b);
    let mut c = b - PHI * (b - a);
    let mut d = a + PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > GOLDEN_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + PHI * (b - a);
            fd = f(d);
        }
    }
    let v = 0.5 * (a + b);
    (v, f(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// g(x, v) = x1 sin v + x2 cos v - 1 on [-pi/2, pi].
    fn trig_constraint() -> ParamConstraint {
        ParamConstraint {
            kind: ConstraintKind::AffineInX {
                a_of_v: vec![CoefFn::sin(), CoefFn::cos()],
                b_of_v: CoefFn::constant(-1.0),
            },
            domain: ParamDomain::interval(-PI / 2.0, PI, true, true).unwrap(),
        }
    }

    #[test]
    fn trig_constraint_two_maximizers() {
        let sup = constraint_sup(&trig_constraint(), &[-1.0, -1.0], 1001).unwrap();
        assert!(sup.value.abs() <= 1e-9);
        assert_eq!(sup.arg_set.len(), 2);
        assert!((sup.arg_set[0] + PI / 2.0).abs() <= 1e-6);
        assert!((sup.arg_set[1] - PI).abs() <= 1e-6);
        assert!(!sup.attained_outside_domain);
    }

    #[test]
    fn half_open_interval_keeps_value_drops_arg() {
        // g(x, v) = -x1 - v on [1, 2): maximizer v = 1 is included.
        let c = ParamConstraint {
            kind: ConstraintKind::AffineInX {
                a_of_v: vec![CoefFn::constant(-1.0)],
                b_of_v: CoefFn::poly(vec![0.0, -1.0]),
            },
            domain: ParamDomain::interval(1.0, 2.0, true, false).unwrap(),
        };
        let sup = constraint_sup(&c, &[-1.0], 1001).unwrap();
        assert!(sup.value.abs() <= 1e-9);
        assert_eq!(sup.arg_set, vec![1.0]);

        // g(x, v) = v x^2 on [0, 1): supremum 1 approached, arg excluded.
        let c2 = ParamConstraint {
            kind: ConstraintKind::AffineInX {
                a_of_v: vec![CoefFn::poly(vec![0.0, 1.0])],
                b_of_v: CoefFn::constant(0.0),
            },
            domain: ParamDomain::interval(0.0, 1.0, true, false).unwrap(),
        };
        let sup2 = constraint_sup(&c2, &[1.0], 1001).unwrap();
        assert!((sup2.value - 1.0).abs() <= 1e-9);
        assert!(sup2.arg_set.is_empty());
        assert!(sup2.attained_outside_domain);
    }

    #[test]
    fn finite_domain_is_exact() {
        let e1 = ScalarExpr::affine(0.0, vec![1.0]);
        let e2 = ScalarExpr::affine(-0.5, vec![2.0]);
        let c = ParamConstraint {
            kind: ConstraintKind::FiniteScenarios {
                scenarios: vec![(0.0, e1), (1.0, e2)],
            },
            domain: ParamDomain::finite(vec![0.0, 1.0]).unwrap(),
        };
        let sup = constraint_sup(&c, &[2.0], 2).unwrap();
        assert_eq!(sup.value, 3.5);
        assert_eq!(sup.arg_set, vec![1.0]);
    }

    #[test]
    fn epsilon_dominating_range_returns_whole_domain() {
        let e1 = ScalarExpr::affine(0.0, vec![1.0]);
        let e2 = ScalarExpr::affine(-0.5, vec![2.0]);
        let c = ParamConstraint {
            kind: ConstraintKind::FiniteScenarios {
                scenarios: vec![(0.0, e1), (1.0, e2)],
            },
            domain: ParamDomain::finite(vec![0.0, 1.0]).unwrap(),
        };
        let act = active_set(&c, &[2.0], 100.0, 2).unwrap();
        assert_eq!(act, vec![0.0, 1.0]);
    }

    #[test]
    fn active_sets_grow_with_epsilon() {
        let c = trig_constraint();
        let small = active_set(&c, &[-1.0, -1.0], 0.0, 401).unwrap();
        let large = active_set(&c, &[-1.0, -1.0], 0.5, 401).unwrap();
        for v in &small {
            assert!(large.iter().any(|w| (w - v).abs() <= V_TOL));
        }
        assert!(large.len() > small.len());
    }

    #[test]
    fn eval_outside_closure_errors() {
        let c = trig_constraint();
        assert!(matches!(
            c.eval(&[0.0, 0.0], 4.0),
            Err(Error::Domain(_))
        ));
    }
}
