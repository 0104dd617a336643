//! Check reports with canonical serialization: identical runs produce
//! byte-identical files. Wall times are recorded only when explicitly
//! requested, since they would break that byte identity.

use std::collections::BTreeMap;

use hirob_core::certify::{Multipliers, Verdict, Witness};

use crate::canon::CanonValue;
use crate::error::CliError;

#[derive(Clone, Debug)]
pub struct CheckRecord {
    pub name: String,
    pub verdict: Option<Verdict>,
    pub error: Option<String>,
    pub wall_time_ms: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub toolkit_version: String,
    pub problem_hash: String,
    pub candidate_name: String,
    pub candidate_point: Vec<f64>,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    /// 0 = nothing refuted, 1 = some check refuted, 2 = some check errored.
    pub fn exit_code(&self) -> u8 {
        if self.checks.iter().any(|c| c.error.is_some()) {
            return 2;
        }
        if self
            .checks
            .iter()
            .any(|c| c.verdict.as_ref().is_some_and(|v| v.is_refuted()))
        {
            return 1;
        }
        0
    }

    pub fn to_canonical_bytes(&self) -> Vec<u8> {
        self.to_canon().to_bytes()
    }

    fn to_canon(&self) -> CanonValue {
        CanonValue::object(vec![
            (
                "toolkit_version",
                CanonValue::Str(self.toolkit_version.clone()),
            ),
            ("problem_hash", CanonValue::Str(self.problem_hash.clone())),
            (
                "candidate",
                CanonValue::object(vec![
                    ("name", CanonValue::Str(self.candidate_name.clone())),
                    ("point", CanonValue::floats(&self.candidate_point)),
                ]),
            ),
            ("seed", CanonValue::Int(self.seed as i64)),
            (
                "checks",
                CanonValue::Array(self.checks.iter().map(check_to_canon).collect()),
            ),
        ])
    }

    /// Writes the canonical bytes; the caller decides the exit code.
    pub fn emit(&self, path: &std::path::Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_canonical_bytes())
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

fn check_to_canon(check: &CheckRecord) -> CanonValue {
    CanonValue::object(vec![
        ("name", CanonValue::Str(check.name.clone())),
        (
            "verdict",
            check
                .verdict
                .as_ref()
                .map_or(CanonValue::Null, verdict_to_canon),
        ),
        (
            "error",
            check
                .error
                .as_ref()
                .map_or(CanonValue::Null, |e| CanonValue::Str(e.clone())),
        ),
        (
            "wall_time_ms",
            check
                .wall_time_ms
                .map_or(CanonValue::Null, CanonValue::Float),
        ),
    ])
}

fn verdict_to_canon(v: &Verdict) -> CanonValue {
    let resolution: BTreeMap<String, CanonValue> = v
        .resolution
        .iter()
        .map(|(k, val)| (k.clone(), CanonValue::Float(*val)))
        .collect();
    CanonValue::object(vec![
        ("status", CanonValue::Str(v.status.as_str().to_string())),
        (
            "certificate",
            v.certificate.map_or(CanonValue::Null, |c| {
                CanonValue::Str(c.as_str().to_string())
            }),
        ),
        (
            "witness",
            v.witness.as_ref().map_or(CanonValue::Null, witness_to_canon),
        ),
        ("resolution", CanonValue::Object(resolution)),
        (
            "notes",
            CanonValue::Array(
                v.notes
                    .iter()
                    .map(|n| CanonValue::Str(n.clone()))
                    .collect(),
            ),
        ),
    ])
}

fn witness_to_canon(w: &Witness) -> CanonValue {
    CanonValue::object(vec![
        (
            "x",
            w.x.as_ref().map_or(CanonValue::Null, |x| CanonValue::floats(x)),
        ),
        (
            "u",
            w.u.as_ref().map_or(CanonValue::Null, |u| {
                CanonValue::Array(u.iter().map(|ui| CanonValue::floats(ui)).collect())
            }),
        ),
        (
            "d",
            w.d.as_ref().map_or(CanonValue::Null, |d| CanonValue::floats(d)),
        ),
        (
            "multipliers",
            w.multipliers
                .as_ref()
                .map_or(CanonValue::Null, multipliers_to_canon),
        ),
    ])
}

fn multipliers_to_canon(m: &Multipliers) -> CanonValue {
    CanonValue::object(vec![
        ("lambda", CanonValue::floats(&m.lambda)),
        ("mu", CanonValue::floats(&m.mu)),
    ])
}

/// Human-oriented rendering for the `report` subcommand.
pub fn summarize(bytes: &[u8]) -> Result<(String, u8), CliError> {
    let value: serde_json::Value = serde_json::from_slice(bytes)
        .map_err(|e| CliError::Parse {
            pointer: "/".into(),
            message: e.to_string(),
        })?;
    let mut out = String::new();
    let hash = value["problem_hash"].as_str().unwrap_or("?");
    let name = value["candidate"]["name"].as_str().unwrap_or("?");
    out.push_str(&format!("problem {hash}\ncandidate {name}\n"));
    let mut exit = 0u8;
    if let Some(checks) = value["checks"].as_array() {
        for c in checks {
            let cname = c["name"].as_str().unwrap_or("?");
            if let Some(err) = c["error"].as_str() {
                out.push_str(&format!("  {cname}: ERROR {err}\n"));
                exit = 2;
            } else {
                let status = c["verdict"]["status"].as_str().unwrap_or("?");
                out.push_str(&format!("  {cname}: {status}\n"));
                if status == "refuted" && exit == 0 {
                    exit = 1;
                }
            }
        }
    }
    Ok((out, exit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use hirob_core::certify::Resolution;

    fn dummy_report(status_refuted: bool) -> Report {
        let mut resolution = Resolution::new();
        resolution.insert("grid".into(), 101.0);
        let verdict = if status_refuted {
            Verdict::refuted(
                Witness {
                    x: Some(vec![0.5]),
                    ..Witness::default()
                },
                resolution,
            )
        } else {
            Verdict::consistent(resolution)
        };
        Report {
            toolkit_version: "0.0.0-test".into(),
            problem_hash: "abc".into(),
            candidate_name: "xbar".into(),
            candidate_point: vec![0.0],
            seed: 42,
            checks: vec![CheckRecord {
                name: "scan".into(),
                verdict: Some(verdict),
                error: None,
                wall_time_ms: None,
            }],
        }
    }

    #[test]
    fn exit_codes_track_verdicts() {
        assert_eq!(dummy_report(false).exit_code(), 0);
        assert_eq!(dummy_report(true).exit_code(), 1);
        let mut r = dummy_report(false);
        r.checks.push(CheckRecord {
            name: "boom".into(),
            verdict: None,
            error: Some("solver exploded".into()),
            wall_time_ms: None,
        });
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn serialization_is_deterministic() {
        let a = dummy_report(true).to_canonical_bytes();
        let b = dummy_report(true).to_canonical_bytes();
        assert_eq!(a, b);
    }

    #[test]
    fn summary_reads_back_the_exit_code() {
        let bytes = dummy_report(true).to_canonical_bytes();
        let (text, exit) = summarize(&bytes).unwrap();
        assert!(text.contains("refuted"));
        assert_eq!(exit, 1);
    }
}
