//! Historical-returns ingestion: estimates the mean return vector and
//! covariance over a trailing window and emits a two-objective portfolio
//! problem (maximize expected return, minimize variance) with simplex-style
//! constraints and a return-uncertainty set sized by per-asset standard
//! errors.
//!
//! Only the return vector is treated as uncertain: objective-wise linear
//! perturbation cannot express covariance uncertainty, so the covariance is
//! frozen at its estimate (recorded in the emitted file's notes).

use std::collections::BTreeMap;
use std::path::Path;

use hirob_core::model::{ParamConstraint, ScalarExpr, UncertainMOP, UncertaintySet};

use crate::error::CliError;
use crate::schema::{from_problem, ProblemFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetType {
    Box,
    Ball,
    Ellipsoid,
}

impl std::str::FromStr for SetType {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "box" => Ok(SetType::Box),
            "ball" => Ok(SetType::Ball),
            "ellipsoid" => Ok(SetType::Ellipsoid),
            other => Err(CliError::Config(format!(
                "unknown set type {other:?}; expected box|ball|ellipsoid"
            ))),
        }
    }
}

pub fn ingest_returns(
    csv_path: &Path,
    window: usize,
    set_type: SetType,
    budget: f64,
) -> Result<ProblemFile, CliError> {
    if window < 2 {
        return Err(CliError::Ingest("window must be at least 2 rows".into()));
    }
    if !(budget > 0.0) {
        return Err(CliError::Ingest("budget must be positive".into()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(csv_path)
        .map_err(|e| CliError::Ingest(format!("{}: {e}", csv_path.display())))?;
    let assets: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Ingest(e.to_string()))?
        .iter()
        .map(|s| s.to_string())
        .collect();
    let n = assets.len();
    if n == 0 {
        return Err(CliError::Ingest("no asset columns in header".into()));
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Ingest(e.to_string()))?;
        if record.len() != n {
            return Err(CliError::Ingest(format!(
                "row {} has {} cells, expected {n}",
                line + 2,
                record.len()
            )));
        }
        let row: Vec<f64> = record
            .iter()
            .enumerate()
            .map(|(col, cell)| {
                cell.parse::<f64>().map_err(|_| {
                    CliError::Ingest(format!(
                        "non-numeric cell {cell:?} at row {}, column {:?}",
                        line + 2,
                        assets[col]
                    ))
                })
            })
            .collect::<Result<_, _>>()?;
        rows.push(row);
    }
    if rows.len() < window {
        return Err(CliError::Ingest(format!(
            "history has {} rows but the window needs {window}",
            rows.len()
        )));
    }
    let tail = &rows[rows.len() - window..];

    // Trailing-window mean and sample covariance.
    let mut mean = vec![0.0; n];
    for row in tail {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v / window as f64;
        }
    }
    let mut cov = vec![vec![0.0; n]; n];
    for row in tail {
        for i in 0..n {
            for j in 0..n {
                cov[i][j] += (row[i] - mean[i]) * (row[j] - mean[j]) / (window - 1) as f64;
            }
        }
    }
    let se: Vec<f64> = (0..n)
        .map(|i| (cov[i][i].max(0.0) / window as f64).sqrt())
        .collect();

    // Objectives: minimize -r.x (maximize return) and x' Cov x (risk).
    let neg_mean: Vec<f64> = mean.iter().map(|v| -v).collect();
    let return_obj = ScalarExpr::affine(0.0, neg_mean);
    let double_cov: Vec<Vec<f64>> = cov
        .iter()
        .map(|row| row.iter().map(|v| 2.0 * v).collect())
        .collect();
    let risk_obj = ScalarExpr::zero(n).with_quad(double_cov);

    // Return uncertainty: deviations from the estimated mean, sized by two
    // standard errors. Zero-variance history degenerates to the singleton.
    let zero = vec![0.0; n];
    let widths: Vec<f64> = se.iter().map(|s| 2.0 * s).collect();
    let return_uncertainty = if widths.iter().all(|w| *w <= 0.0) {
        UncertaintySet::Finite {
            points: vec![zero.clone()],
        }
    } else {
        match set_type {
            SetType::Box => UncertaintySet::Box {
                lo: widths.iter().map(|w| -w).collect(),
                hi: widths.clone(),
            },
            SetType::Ball => UncertaintySet::Ball {
                center: zero.clone(),
                radius: widths.iter().map(|w| w * w).sum::<f64>().sqrt(),
            },
            SetType::Ellipsoid => {
                if widths.iter().any(|w| *w <= 0.0) {
                    return Err(CliError::Ingest(
                        "zero-variance asset breaks the SPD ellipsoid shape; use box".into(),
                    ));
                }
                let shape: Vec<Vec<f64>> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| if i == j { widths[i] * widths[i] } else { 0.0 })
                            .collect()
                    })
                    .collect();
                UncertaintySet::Ellipsoid {
                    center: zero.clone(),
                    shape,
                }
            }
        }
    };
    let risk_uncertainty = UncertaintySet::Finite {
        points: vec![zero.clone()],
    };

    // Simplex-style feasible set: x >= 0 and sum(x) <= budget.
    let mut constraints = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut a = vec![0.0; n];
        a[i] = -1.0;
        constraints.push(ParamConstraint::certain(ScalarExpr::affine(0.0, a)));
    }
    constraints.push(ParamConstraint::certain(ScalarExpr::affine(
        -budget,
        vec![1.0; n],
    )));

    let problem = UncertainMOP::new(
        n,
        vec![return_obj, risk_obj],
        vec![return_uncertainty, risk_uncertainty],
        constraints,
        Some((vec![0.0; n], vec![budget; n])),
    )?;

    let mut candidates = BTreeMap::new();
    candidates.insert("equal_weight".to_string(), vec![budget / n as f64; n]);

    let notes = vec![
        format!(
            "ingested {} assets over a {window}-row trailing window: {}",
            n,
            assets.join(", ")
        ),
        "covariance uncertainty is out of scope for objective-wise linear \
         perturbation; the risk objective uses the frozen covariance estimate"
            .to_string(),
        "return uncertainty is centered at zero (deviation from the estimated \
         mean, which already sits in the return objective), half-width two \
         standard errors per asset"
            .to_string(),
    ];
    Ok(from_problem(&problem, &candidates, &notes))
}
