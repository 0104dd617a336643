//! Shared fixtures and independent oracles for the integration tests.
//!
//! The oracles are deliberately written in a different style from the
//! library (index loops, no shared helpers) so they stay independent of
//! the implementation paths they check.

#![allow(dead_code)]

use hirob_core::model::{
    CoefFn, ConstraintKind, FrozenSurrogate, ParamConstraint, ParamDomain, ScalarExpr,
    UncertainMOP, UncertaintySet,
};

/// Naive re-evaluation of a ScalarExpr straight from its fields.
pub fn naive_eval(expr: &ScalarExpr, x: &[f64]) -> f64 {
    let mut total = expr.smooth.constant;
    for i in 0..x.len() {
        total += expr.smooth.linear[i] * x[i];
    }
    if let Some(q) = &expr.smooth.quad {
        let mut quad = 0.0;
        for i in 0..x.len() {
            for j in 0..x.len() {
                quad += x[i] * q[i][j] * x[j];
            }
        }
        total += 0.5 * quad;
    }
    for term in &expr.abs_terms {
        let mut inner = -term.b;
        for i in 0..x.len() {
            inner += term.a[i] * x[i];
        }
        total += term.weight * inner.abs();
    }
    for term in &expr.max_terms {
        let mut best = f64::NEG_INFINITY;
        for piece in &term.pieces {
            let mut v = piece.constant;
            for i in 0..x.len() {
                v += piece.linear[i] * x[i];
            }
            if let Some(q) = &piece.quad {
                let mut quad = 0.0;
                for i in 0..x.len() {
                    for j in 0..x.len() {
                        quad += x[i] * q[i][j] * x[j];
                    }
                }
                v += 0.5 * quad;
            }
            if v > best {
                best = v;
            }
        }
        total += best;
    }
    for s in &expr.surrogates {
        let mut v = s.value;
        for i in 0..x.len() {
            v += s.gradient[i] * (x[i] - s.anchor[i]);
        }
        total += v;
    }
    total
}

/// Brute-force membership: enumerate convex weights on a simplex grid with
/// the given step and report the best infinity-norm reconstruction of `y`.
pub fn simplex_grid_residual(vertices: &[Vec<f64>], y: &[f64], step: f64) -> f64 {
    let k = vertices.len();
    let ticks = (1.0 / step).round() as usize;
    let mut best = f64::INFINITY;
    let mut weights = vec![0usize; k];
    enumerate_compositions(ticks, k, 0, &mut weights, &mut |w| {
        let mut residual: f64 = 0.0;
        for c in 0..y.len() {
            let mut acc = 0.0;
            for (idx, &count) in w.iter().enumerate() {
                acc += (count as f64 / ticks as f64) * vertices[idx][c];
            }
            residual = residual.max((acc - y[c]).abs());
        }
        if residual < best {
            best = residual;
        }
    });
    best
}

fn enumerate_compositions(
    remaining: usize,
    slots: usize,
    at: usize,
    weights: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if at + 1 == slots {
        weights[at] = remaining;
        visit(weights);
        return;
    }
    for take in 0..=remaining {
        weights[at] = take;
        enumerate_compositions(remaining - take, slots, at + 1, weights, visit);
    }
}

fn box_face_constraints(lo: &[f64], hi: &[f64]) -> Vec<ParamConstraint> {
    let n = lo.len();
    let mut out = Vec::with_capacity(2 * n);
    for c in 0..n {
        let mut a = vec![0.0; n];
        a[c] = 1.0;
        out.push(ParamConstraint::certain(ScalarExpr::affine(-hi[c], a)));
        let mut a = vec![0.0; n];
        a[c] = -1.0;
        out.push(ParamConstraint::certain(ScalarExpr::affine(lo[c], a)));
    }
    out
}

/// min (x - u1 x, x^2 - u2 x) over [-1,1], U = [-0.5,0.5] x [0,1];
/// the origin is a highly robust efficient candidate.
pub fn exhrob() -> (UncertainMOP, Vec<f64>) {
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
    let p = UncertainMOP::new(
        1,
        vec![f1, f2],
        vec![u1, u2],
        box_face_constraints(&[-1.0], &[1.0]),
        Some((vec![-1.0], vec![1.0])),
    )
    .unwrap();
    (p, vec![0.0])
}

/// f1 = |x1+1| + x2, f2 = x1 + |x2+1| on [-1,1]^2 with U1 = U2 = [-1,0]^2;
/// the corner (-1,-1) is a highly robust efficient candidate.
pub fn ex1_nec1() -> (UncertainMOP, Vec<f64>) {
    let f1 = ScalarExpr::zero(2)
        .with_linear(vec![0.0, 1.0])
        .with_abs(1.0, vec![1.0, 0.0], -1.0);
    let f2 = ScalarExpr::zero(2)
        .with_linear(vec![1.0, 0.0])
        .with_abs(1.0, vec![0.0, 1.0], -1.0);
    let u = UncertaintySet::Box {
        lo: vec![-1.0, -1.0],
        hi: vec![0.0, 0.0],
    };
    let p = UncertainMOP::new(
        2,
        vec![f1, f2],
        vec![u.clone(), u],
        box_face_constraints(&[-1.0, -1.0], &[1.0, 1.0]),
        Some((vec![-1.0, -1.0], vec![1.0, 1.0])),
    )
    .unwrap();
    (p, vec![-1.0, -1.0])
}

/// f1 = x, f2 = frozen linearization of -cbrt at -1, constraint x <= 1,
/// U1 = U2 = [-1,1]; the candidate -1 is refutable.
pub fn ex2_nec1() -> (UncertainMOP, Vec<f64>) {
    let f1 = ScalarExpr::affine(0.0, vec![1.0]);
    let f2 = ScalarExpr::zero(1).with_surrogate(FrozenSurrogate {
        anchor: vec![-1.0],
        value: 1.0,
        gradient: vec![-1.0 / 3.0],
        valid_radius: 1.5,
    });
    let u = UncertaintySet::Box {
        lo: vec![-1.0],
        hi: vec![1.0],
    };
    let p = UncertainMOP::new(
        1,
        vec![f1, f2],
        vec![u.clone(), u],
        vec![ParamConstraint::certain(ScalarExpr::affine(
            -1.0,
            vec![1.0],
        ))],
        Some((vec![-2.0], vec![1.0])),
    )
    .unwrap();
    (p, vec![-1.0])
}

/// The objectives of ex1_nec1 with three parametric constraints: a trig
/// family on [-pi/2, pi], and two affine families on [1,2) and (-1,0].
pub fn ex_neckkt() -> (UncertainMOP, Vec<f64>) {
    let (base, x_bar) = ex1_nec1();
    let g1 = ParamConstraint {
        kind: ConstraintKind::AffineInX {
            a_of_v: vec![CoefFn::sin(), CoefFn::cos()],
            b_of_v: CoefFn::constant(-1.0),
        },
        domain: ParamDomain::interval(-std::f64::consts::FRAC_PI_2, std::f64::consts::PI, true, true)
            .unwrap(),
    };
    let g2 = ParamConstraint {
        kind: ConstraintKind::AffineInX {
            a_of_v: vec![CoefFn::constant(-1.0), CoefFn::constant(0.0)],
            b_of_v: CoefFn::poly(vec![0.0, -1.0]),
        },
        domain: ParamDomain::interval(1.0, 2.0, true, false).unwrap(),
    };
    let g3 = ParamConstraint {
        kind: ConstraintKind::AffineInX {
            a_of_v: vec![CoefFn::constant(0.0), CoefFn::constant(-1.0)],
            b_of_v: CoefFn::poly(vec![-1.0, 1.0]),
        },
        domain: ParamDomain::interval(-1.0, 0.0, false, true).unwrap(),
    };
    let p = UncertainMOP::new(
        2,
        base.objectives,
        base.uncertainty,
        vec![g1, g2, g3],
        Some((vec![-1.0, -1.0], vec![1.0, 1.0])),
    )
    .unwrap();
    (p, x_bar)
}
