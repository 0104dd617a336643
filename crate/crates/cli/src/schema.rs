//! Problem-file schema (JSON) and its conversion to and from the core
//! model. Deserialization is permissive about optional parts; every model
//! invariant is checked when the problem is built.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use hirob_core::model::{
    Basis, BasisTerm, CoefFn, ConstraintKind, FrozenSurrogate, ParamConstraint, ParamDomain,
    ScalarExpr, SmoothExpr, UncertainMOP, UncertaintySet,
};

use crate::error::CliError;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ProblemFile {
    pub dimension: usize,
    pub objectives: Vec<ExprSchema>,
    pub uncertainty: Vec<UncertaintySchema>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<ConstraintSchema>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub box_bounds: Option<BoundsSchema>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub candidates: BTreeMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub diagonal_uncertainty: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BoundsSchema {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct ExprSchema {
    #[serde(default, skip_serializing_if = "is_zero")]
    pub constant: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub abs_terms: Vec<AbsSchema>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub max_terms: Vec<MaxSchema>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub surrogates: Vec<SurrogateSchema>,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AbsSchema {
    pub weight: f64,
    pub a: Vec<f64>,
    pub b: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MaxSchema {
    pub pieces: Vec<SmoothSchema>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SmoothSchema {
    #[serde(default, skip_serializing_if = "is_zero")]
    pub constant: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SurrogateSchema {
    pub anchor: Vec<f64>,
    pub value: f64,
    pub gradient: Vec<f64>,
    pub valid_radius: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UncertaintySchema {
    Polytope {
        vertices: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        rays: Vec<Vec<f64>>,
    },
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Ellipsoid {
        center: Vec<f64>,
        shape: Vec<Vec<f64>>,
    },
    Finite {
        points: Vec<Vec<f64>>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermSchema {
    pub basis: String,
    pub coeffs: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSchema {
    Interval {
        lo: f64,
        hi: f64,
        #[serde(default = "default_true")]
        lo_closed: bool,
        #[serde(default = "default_true")]
        hi_closed: bool,
    },
    Finite {
        values: Vec<f64>,
    },
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ScenarioExprSchema {
    pub v: f64,
    pub expr: ExprSchema,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintSchema {
    AffineInX {
        a_of_v: Vec<Vec<TermSchema>>,
        b_of_v: Vec<TermSchema>,
        domain: DomainSchema,
    },
    FiniteScenarios {
        scenarios: Vec<ScenarioExprSchema>,
        domain: DomainSchema,
    },
}

pub fn parse_file(path: &Path) -> Result<ProblemFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_str(&text)
}

pub fn parse_str(text: &str) -> Result<ProblemFile, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = format!("/{}", e.path().to_string().replace('.', "/"));
        CliError::Parse {
            pointer,
            message: e.inner().to_string(),
        }
    })
}

impl ExprSchema {
    fn build(&self, n: usize) -> Result<ScalarExpr, CliError> {
        let mut e = ScalarExpr::zero(n)
            .with_constant(self.constant)
            .with_linear(self.linear.clone().unwrap_or_else(|| vec![0.0; n]));
        if let Some(q) = &self.quad {
            e = e.with_quad(q.clone());
        }
        for t in &self.abs_terms {
            e = e.with_abs(t.weight, t.a.clone(), t.b);
        }
        for t in &self.max_terms {
            e = e.with_max(
                t.pieces
                    .iter()
                    .map(|p| SmoothExpr {
                        constant: p.constant,
                        linear: p.linear.clone().unwrap_or_else(|| vec![0.0; n]),
                        quad: p.quad.clone(),
                    })
                    .collect(),
            );
        }
        for s in &self.surrogates {
            e = e.with_surrogate(FrozenSurrogate {
                anchor: s.anchor.clone(),
                value: s.value,
                gradient: s.gradient.clone(),
                valid_radius: s.valid_radius,
            });
        }
        Ok(e)
    }

    fn from_expr(expr: &ScalarExpr) -> ExprSchema {
        ExprSchema {
            constant: expr.smooth.constant,
            linear: if expr.smooth.linear.iter().all(|v| *v == 0.0) {
                None
            } else {
                Some(expr.smooth.linear.clone())
            },
            quad: expr.smooth.quad.clone(),
            abs_terms: expr
                .abs_terms
                .iter()
                .map(|t| AbsSchema {
                    weight: t.weight,
                    a: t.a.clone(),
                    b: t.b,
                })
                .collect(),
            max_terms: expr
                .max_terms
                .iter()
                .map(|t| MaxSchema {
                    pieces: t
                        .pieces
                        .iter()
                        .map(|p| SmoothSchema {
                            constant: p.constant,
                            linear: if p.linear.iter().all(|v| *v == 0.0) {
                                None
                            } else {
                                Some(p.linear.clone())
                            },
                            quad: p.quad.clone(),
                        })
                        .collect(),
                })
                .collect(),
            surrogates: expr
                .surrogates
                .iter()
                .map(|s| SurrogateSchema {
                    anchor: s.anchor.clone(),
                    value: s.value,
                    gradient: s.gradient.clone(),
                    valid_radius: s.valid_radius,
                })
                .collect(),
        }
    }
}

fn term_to_core(t: &TermSchema) -> Result<BasisTerm, CliError> {
    let basis = match t.basis.as_str() {
        "poly" => Basis::Poly,
        "sin" => Basis::Sin,
        "cos" => Basis::Cos,
        other => {
            return Err(CliError::Validation(format!(
                "unknown basis {other:?}; expected poly|sin|cos"
            )))
        }
    };
    Ok(BasisTerm {
        basis,
        coeffs: t.coeffs.clone(),
    })
}

fn term_from_core(t: &BasisTerm) -> TermSchema {
    TermSchema {
        basis: match t.basis {
            Basis::Poly => "poly",
            Basis::Sin => "sin",
            Basis::Cos => "cos",
        }
        .to_string(),
        coeffs: t.coeffs.clone(),
    }
}

fn coef_to_core(terms: &[TermSchema]) -> Result<CoefFn, CliError> {
    Ok(CoefFn {
        terms: terms.iter().map(term_to_core).collect::<Result<_, _>>()?,
    })
}

fn domain_to_core(d: &DomainSchema) -> Result<ParamDomain, CliError> {
    Ok(match d {
        DomainSchema::Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        } => ParamDomain::interval(*lo, *hi, *lo_closed, *hi_closed)?,
        DomainSchema::Finite { values } => ParamDomain::finite(values.clone())?,
    })
}

fn domain_from_core(d: &ParamDomain) -> DomainSchema {
    match d {
        ParamDomain::Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        } => DomainSchema::Interval {
            lo: *lo,
            hi: *hi,
            lo_closed: *lo_closed,
            hi_closed: *hi_closed,
        },
        ParamDomain::Finite { values } => DomainSchema::Finite {
            values: values.clone(),
        },
    }
}

/// Builds the fully validated model and the named candidate points.
pub fn build_problem(
    file: &ProblemFile,
) -> Result<(UncertainMOP, BTreeMap<String, Vec<f64>>), CliError> {
    let n = file.dimension;
    let objectives: Vec<ScalarExpr> = file
        .objectives
        .iter()
        .map(|e| e.build(n))
        .collect::<Result<_, _>>()?;
    let uncertainty: Vec<UncertaintySet> = file
        .uncertainty
        .iter()
        .map(|u| {
            Ok(match u {
                UncertaintySchema::Polytope { vertices, rays } => UncertaintySet::Polytope(
                    hirob_core::geometry::Polytope::new(vertices.clone(), rays.clone())?,
                ),
                UncertaintySchema::Box { lo, hi } => UncertaintySet::Box {
                    lo: lo.clone(),
                    hi: hi.clone(),
                },
                UncertaintySchema::Ball { center, radius } => UncertaintySet::Ball {
                    center: center.clone(),
                    radius: *radius,
                },
                UncertaintySchema::Ellipsoid { center, shape } => UncertaintySet::Ellipsoid {
                    center: center.clone(),
                    shape: shape.clone(),
                },
                UncertaintySchema::Finite { points } => UncertaintySet::Finite {
                    points: points.clone(),
                },
            })
        })
        .collect::<Result<_, CliError>>()?;
    let constraints: Vec<ParamConstraint> = file
        .constraints
        .iter()
        .map(|c| {
            Ok(match c {
                ConstraintSchema::AffineInX {
                    a_of_v,
                    b_of_v,
                    domain,
                } => ParamConstraint {
                    kind: ConstraintKind::AffineInX {
                        a_of_v: a_of_v
                            .iter()
                            .map(|t| coef_to_core(t))
                            .collect::<Result<_, _>>()?,
                        b_of_v: coef_to_core(b_of_v)?,
                    },
                    domain: domain_to_core(domain)?,
                },
                ConstraintSchema::FiniteScenarios { scenarios, domain } => ParamConstraint {
                    kind: ConstraintKind::FiniteScenarios {
                        scenarios: scenarios
                            .iter()
                            .map(|s| Ok((s.v, s.expr.build(n)?)))
                            .collect::<Result<_, CliError>>()?,
                    },
                    domain: domain_to_core(domain)?,
                },
            })
        })
        .collect::<Result<_, CliError>>()?;
    let box_bounds = file
        .box_bounds
        .as_ref()
        .map(|b| (b.lo.clone(), b.hi.clone()));

    let mut problem = UncertainMOP::new(n, objectives, uncertainty, constraints, box_bounds)?;
    problem.diagonal_uncertainty = file.diagonal_uncertainty;
    for (name, point) in &file.candidates {
        if point.len() != n {
            return Err(CliError::Validation(format!(
                "candidate {name:?} has dimension {} but the problem has {n}",
                point.len()
            )));
        }
    }
    Ok((problem, file.candidates.clone()))
}

/// Re-encodes a model (plus candidates and notes) as a problem file.
pub fn from_problem(
    problem: &UncertainMOP,
    candidates: &BTreeMap<String, Vec<f64>>,
    notes: &[String],
) -> ProblemFile {
    ProblemFile {
        dimension: problem.n,
        objectives: problem.objectives.iter().map(ExprSchema::from_expr).collect(),
        uncertainty: problem
            .uncertainty
            .iter()
            .map(|u| match u {
                UncertaintySet::Polytope(p) => UncertaintySchema::Polytope {
                    vertices: p.vertices().to_vec(),
                    rays: p.rays().to_vec(),
                },
                UncertaintySet::Box { lo, hi } => UncertaintySchema::Box {
                    lo: lo.clone(),
                    hi: hi.clone(),
                },
                UncertaintySet::Ball { center, radius } => UncertaintySchema::Ball {
                    center: center.clone(),
                    radius: *radius,
                },
                UncertaintySet::Ellipsoid { center, shape } => UncertaintySchema::Ellipsoid {
                    center: center.clone(),
                    shape: shape.clone(),
                },
                UncertaintySet::Finite { points } => UncertaintySchema::Finite {
                    points: points.clone(),
                },
            })
            .collect(),
        constraints: problem
            .constraints
            .iter()
            .map(|c| match &c.kind {
                ConstraintKind::AffineInX { a_of_v, b_of_v } => ConstraintSchema::AffineInX {
                    a_of_v: a_of_v
                        .iter()
                        .map(|f| f.terms.iter().map(term_from_core).collect())
                        .collect(),
                    b_of_v: b_of_v.terms.iter().map(term_from_core).collect(),
                    domain: domain_from_core(&c.domain),
                },
                ConstraintKind::FiniteScenarios { scenarios } => {
                    ConstraintSchema::FiniteScenarios {
                        scenarios: scenarios
                            .iter()
                            .map(|(v, e)| ScenarioExprSchema {
                                v: *v,
                                expr: ExprSchema::from_expr(e),
                            })
                            .collect(),
                        domain: domain_from_core(&c.domain),
                    }
                }
            })
            .collect(),
        box_bounds: problem.box_bounds.as_ref().map(|(lo, hi)| BoundsSchema {
            lo: lo.clone(),
            hi: hi.clone(),
        }),
        candidates: candidates.clone(),
        diagonal_uncertainty: problem.diagonal_uncertainty,
        notes: notes.to_vec(),
    }
}

/// Canonical bytes of a problem file (sorted keys, 17-digit floats).
pub fn canonical_bytes(file: &ProblemFile) -> Result<Vec<u8>, CliError> {
    let value = serde_json::to_value(file)
        .map_err(|e| CliError::Io(format!("serialization failed: {e}")))?;
    Ok(crate::canon::from_json(&value).to_bytes())
}

/// Hex SHA-256 digest of the canonical problem bytes.
pub fn problem_hash(file: &ProblemFile) -> Result<String, CliError> {
    use sha2::{Digest, Sha256};
    let bytes = canonical_bytes(file)?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}
