//! Expression trees for one nonsmooth objective or constraint piece:
//! affine + quadratic + weighted absolute values + finite maxima, plus
//! frozen local linearizations for functions outside the class.
//!
//! Nonnegative abs weights and max-of-smooth pieces keep every expression
//! Clarke regular, so one subdifferential engine serves both the limiting
//! and the Clarke calculus.

use crate::constants::SYM_TOL;
use crate::error::{Error, Result};
use crate::linalg;

/// Smooth piece: constant + linear.x + 0.5 x'Qx.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothExpr {
    pub constant: f64,
    pub linear: Vec<f64>,
    pub quad: Option<Vec<Vec<f64>>>,
}

impl SmoothExpr {
    pub fn affine(constant: f64, linear: Vec<f64>) -> Self {
        SmoothExpr {
            constant,
            linear,
            quad: None,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut v = self.constant + linalg::dot(&self.linear, x);
        if let Some(q) = &self.quad {
            v += 0.5 * linalg::dot(x, &linalg::symv(q, x));
        }
        v
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        match &self.quad {
            None => self.linear.clone(),
            Some(q) => linalg::add(&self.linear, &linalg::symv(q, x)),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.linear.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: self.linear.len(),
            });
        }
        if let Some(q) = &self.quad {
            if q.len() != n || q.iter().any(|row| row.len() != n) {
                return Err(Error::validation("quad matrix shape mismatch"));
            }
            for i in 0..n {
                for j in 0..i {
                    if (q[i][j] - q[j][i]).abs() > SYM_TOL {
                        return Err(Error::validation(format!(
                            "quad matrix not symmetric at ({i},{j})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// weight * |a.x - b| with weight >= 0.
#[derive(Clone, Debug, PartialEq)]
pub struct AbsTerm {
    pub weight: f64,
    pub a: Vec<f64>,
    pub b: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaxTerm {
    pub pieces: Vec<SmoothExpr>,
}

/// Frozen local linearization: value + gradient.(x - anchor). Stands in for
/// a smooth function that is outside the class; only trustworthy within
/// `valid_radius` of the anchor.
#[derive(Clone, Debug, PartialEq)]
pub struct FrozenSurrogate {
    pub anchor: Vec<f64>,
    pub value: f64,
    pub gradient: Vec<f64>,
    pub valid_radius: f64,
}

impl FrozenSurrogate {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.value + linalg::dot(&self.gradient, &linalg::sub(x, &self.anchor))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarExpr {
    dim: usize,
    pub smooth: SmoothExpr,
    pub abs_terms: Vec<AbsTerm>,
    pub max_terms: Vec<MaxTerm>,
    pub surrogates: Vec<FrozenSurrogate>,
}

impl ScalarExpr {
    /// The zero expression in dimension `n`.
    pub fn zero(n: usize) -> Self {
        ScalarExpr {
            dim: n,
            smooth: SmoothExpr::affine(0.0, vec![0.0; n]),
            abs_terms: Vec::new(),
            max_terms: Vec::new(),
            surrogates: Vec::new(),
        }
    }

    pub fn affine(constant: f64, linear: Vec<f64>) -> Self {
        let n = linear.len();
        ScalarExpr {
            dim: n,
            smooth: SmoothExpr::affine(constant, linear),
            ..ScalarExpr::zero(n)
        }
    }

    pub fn with_constant(mut self, c: f64) -> Self {
        self.smooth.constant = c;
        self
    }

    pub fn with_linear(mut self, linear: Vec<f64>) -> Self {
        self.smooth.linear = linear;
        self
    }

    pub fn with_quad(mut self, quad: Vec<Vec<f64>>) -> Self {
        self.smooth.quad = Some(quad);
        self
    }

    /// Adds weight * |a.x - b|.
    pub fn with_abs(mut self, weight: f64, a: Vec<f64>, b: f64) -> Self {
        self.abs_terms.push(AbsTerm { weight, a, b });
        self
    }

    pub fn with_max(mut self, pieces: Vec<SmoothExpr>) -> Self {
        self.max_terms.push(MaxTerm { pieces });
        self
    }

    pub fn with_surrogate(mut self, s: FrozenSurrogate) -> Self {
        self.surrogates.push(s);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim;
        self.smooth.validate(n)?;
        for term in &self.abs_terms {
            if term.a.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: term.a.len(),
                });
            }
            if !(term.weight >= 0.0) {
                return Err(Error::UnsupportedExpression(format!(
                    "abs weight {} is negative; only convex-generating kinks are supported",
                    term.weight
                )));
            }
        }
        for term in &self.max_terms {
            if term.pieces.is_empty() {
                return Err(Error::validation("max term with no pieces"));
            }
            for piece in &term.pieces {
                piece.validate(n)?;
            }
        }
        for s in &self.surrogates {
            if s.anchor.len() != n || s.gradient.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: s.anchor.len().min(s.gradient.len()),
                });
            }
            if !(s.valid_radius > 0.0) {
                return Err(Error::validation("surrogate radius must be positive"));
            }
        }
        Ok(())
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(())
    }
}

/// Evaluates `expr` at `x`.
pub fn eval_scalar(expr: &ScalarExpr, x: &[f64]) -> Result<f64> {
    expr.check_dim(x)?;
    let mut v = expr.smooth.eval(x);
    for term in &expr.abs_terms {
        v += term.weight * (linalg::dot(&term.a, x) - term.b).abs();
    }
    for term in &expr.max_terms {
        v += term
            .pieces
            .iter()
            .map(|p| p.eval(x))
            .fold(f64::NEG_INFINITY, f64::max);
    }
    for s in &expr.surrogates {
        v += s.eval(x);
    }
    Ok(v)
}
