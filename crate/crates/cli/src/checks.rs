//! Check orchestration: builds scenario sets and lattices at the
//! configured resolutions, runs the requested certifier suites, and
//! assembles the report. Individual check failures are recorded without
//! aborting siblings; report assembly is single threaded and ordered.

use std::collections::BTreeMap;
use std::time::Instant;

use hirob_core::certify::{
    default_local_radius, feasible_lattice, highly_robust_kkt, highly_robust_scan,
    isolated_implies_hr, necessary_refute, proper_refuter, set_based_check,
    strictness_condition, sufficiency_certificate, worst_case_check, EfficiencyMode, KktConfig,
    NecessaryConfig, ProperConfig, Resolution, ScanConfig, Verdict, Witness,
};
use hirob_core::constants::DEFAULT_GAMMA_GRID;
use hirob_core::model::UncertainMOP;
use hirob_core::scenarios::{sample, ScenarioSet};

use crate::error::CliError;
use crate::report::{CheckRecord, Report};
use crate::schema::{build_problem, problem_hash, ProblemFile};

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub candidate: String,
    pub suites: Vec<String>,
    pub grid: usize,
    pub scenario_res: usize,
    /// None = global search over the whole box.
    pub radius: Option<f64>,
    /// Use the default local radius (quarter box diameter).
    pub local: bool,
    pub tol: f64,
    pub seed: u64,
    pub gamma_grid: Vec<f64>,
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            candidate: "xbar".into(),
            suites: vec!["highly-robust".into()],
            grid: hirob_core::constants::DEFAULT_GRID,
            scenario_res: 11,
            radius: None,
            local: false,
            tol: hirob_core::constants::FEAS_TOL,
            seed: 0,
            gamma_grid: DEFAULT_GAMMA_GRID.to_vec(),
            timings: false,
        }
    }
}

pub const KNOWN_SUITES: &[&str] = &[
    "highly-robust",
    "highly-robust-weak",
    "highly-robust-strict",
    "necessary",
    "kkt",
    "sufficiency",
    "isolated",
    "worst-case",
    "set-based",
    "robustness",
    "strictness",
    "proper",
    "all",
];

fn expand_suites(suites: &[String]) -> Result<Vec<&'static str>, CliError> {
    let mut out: Vec<&'static str> = Vec::new();
    let mut push = |name: &'static str| {
        if !out.contains(&name) {
            out.push(name);
        }
    };
    for s in suites {
        match s.as_str() {
            "all" => {
                for name in KNOWN_SUITES.iter().filter(|n| **n != "all" && **n != "robustness") {
                    push(name);
                }
            }
            "robustness" => {
                push("worst-case");
                push("set-based");
            }
            other => {
                let known = KNOWN_SUITES
                    .iter()
                    .find(|n| **n == other)
                    .ok_or_else(|| CliError::Config(format!("unknown suite {other:?}")))?;
                push(known);
            }
        }
    }
    Ok(out)
}

struct CheckContext<'a> {
    problem: &'a UncertainMOP,
    x_bar: &'a [f64],
    config: &'a RunConfig,
    radius: f64,
}

impl CheckContext<'_> {
    fn scan_config(&self, mode: EfficiencyMode) -> ScanConfig {
        ScanConfig {
            mode,
            radius: self.radius,
            grid: self.config.grid,
            feas_tol: self.config.tol,
            ..ScanConfig::default()
        }
    }

    fn scenarios(&self) -> Result<ScenarioSet, hirob_core::Error> {
        sample(self.problem, self.config.scenario_res, self.config.seed)
    }

    fn samples(&self) -> Result<Vec<Vec<f64>>, hirob_core::Error> {
        feasible_lattice(
            self.problem,
            self.x_bar,
            self.radius,
            self.config.grid,
            self.config.tol,
            hirob_core::constants::DEFAULT_V_GRID,
        )
    }

    fn run(&self, suite: &str) -> Result<Verdict, hirob_core::Error> {
        match suite {
            "highly-robust" | "highly-robust-weak" | "highly-robust-strict" => {
                let mode = match suite {
                    "highly-robust-weak" => EfficiencyMode::Weak,
                    "highly-robust-strict" => EfficiencyMode::Strict,
                    _ => EfficiencyMode::Efficient,
                };
                highly_robust_scan(
                    self.problem,
                    self.x_bar,
                    &self.scenarios()?,
                    &self.scan_config(mode),
                )
            }
            "necessary" => {
                let nc = NecessaryConfig {
                    feas_tol: self.config.tol,
                    ..NecessaryConfig::default()
                };
                let mut resolution = Resolution::new();
                resolution.insert("direction_net".into(), nc.direction_net as f64);
                resolution.insert("v_grid".into(), nc.v_grid as f64);
                Ok(match necessary_refute(self.problem, self.x_bar, &nc)? {
                    Some(pair) => {
                        resolution.insert("margin".into(), pair.margin);
                        Verdict::refuted(
                            Witness {
                                d: Some(pair.d),
                                u: Some(pair.u),
                                ..Witness::default()
                            },
                            resolution,
                        )
                        .with_note(
                            "first-order necessary condition violated \
                             (linearization-cone proxy for the tangent cone)",
                        )
                    }
                    None => Verdict::consistent(resolution)
                        .with_note("no refuting pair on the direction net"),
                })
            }
            "kkt" => highly_robust_kkt(
                self.problem,
                self.x_bar,
                &self.scenarios()?,
                &KktConfig {
                    feas_tol: self.config.tol,
                    ..KktConfig::default()
                },
            ),
            "sufficiency" => sufficiency_certificate(
                self.problem,
                self.x_bar,
                &self.scenarios()?,
                &self.samples()?,
                &KktConfig {
                    feas_tol: self.config.tol,
                    ..KktConfig::default()
                },
            ),
            "isolated" => {
                isolated_implies_hr(self.problem, self.x_bar, &self.scan_config(EfficiencyMode::Strict))
            }
            "worst-case" => {
                worst_case_check(self.problem, self.x_bar, &self.scan_config(EfficiencyMode::Efficient))
            }
            "set-based" => set_based_check(
                self.problem,
                self.x_bar,
                &self.scenarios()?,
                &self.scan_config(EfficiencyMode::Efficient),
            ),
            "strictness" => {
                let samples = self.samples()?;
                let (holds, failing) = strictness_condition(self.problem, self.x_bar, &samples);
                let mut resolution = Resolution::new();
                resolution.insert("x_samples".into(), samples.len() as f64);
                Ok(if holds {
                    Verdict::consistent(resolution).with_note(
                        "support positivity holds: highly robust weak efficiency would \
                         upgrade to strict efficiency of the nominal problem",
                    )
                } else {
                    Verdict::inconclusive(resolution)
                        .with_witness(Witness {
                            x: failing,
                            ..Witness::default()
                        })
                        .with_note("support positivity fails along a sampled direction")
                })
            }
            "proper" => proper_refuter(
                self.problem,
                self.x_bar,
                &ProperConfig {
                    scan: self.scan_config(EfficiencyMode::Efficient),
                    ..ProperConfig::default()
                },
            ),
            other => Err(hirob_core::Error::config(format!("unknown suite {other:?}"))),
        }
    }
}

/// Executes the configured checks and assembles the report. Deterministic
/// given the seed (timings stay unset unless requested).
pub fn run_check(file: &ProblemFile, config: &RunConfig) -> Result<Report, CliError> {
    let suites = expand_suites(&config.suites)?;
    let (problem, candidates) = build_problem(file)?;
    let x_bar = candidates
        .get(&config.candidate)
        .ok_or_else(|| {
            CliError::Config(format!(
                "candidate {:?} not found; available: {:?}",
                config.candidate,
                candidates.keys().collect::<Vec<_>>()
            ))
        })?
        .clone();
    let radius = match (config.radius, config.local) {
        (Some(r), _) => r,
        (None, true) => default_local_radius(&problem)?,
        (None, false) => f64::INFINITY,
    };

    let ctx = CheckContext {
        problem: &problem,
        x_bar: &x_bar,
        config,
        radius,
    };

    let mut checks = Vec::with_capacity(suites.len());
    for suite in suites {
        let started = Instant::now();
        let (verdict, error) = match ctx.run(suite) {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e.to_string())),
        };
        checks.push(CheckRecord {
            name: suite.to_string(),
            verdict,
            error,
            wall_time_ms: config
                .timings
                .then(|| started.elapsed().as_secs_f64() * 1e3),
        });
    }

    Ok(Report {
        toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
        problem_hash: problem_hash(file)?,
        candidate_name: config.candidate.clone(),
        candidate_point: x_bar,
        seed: config.seed,
        checks,
    })
}

/// Diagonal reduction entry point: returns the reduced problem file, or
/// None when the component sets differ.
pub fn reduce_problem(file: &ProblemFile) -> Result<Option<ProblemFile>, CliError> {
    let (problem, candidates) = build_problem(file)?;
    Ok(hirob_core::scenarios::diagonal_reduce(&problem).map(|reduced| {
        let mut notes = file.notes.clone();
        notes.push(
            "diagonal reduction: equal uncertainty sets; scenarios range over \
             u_1 = ... = u_p from the shared set"
                .to_string(),
        );
        crate::schema::from_problem(&reduced, &candidates, &notes)
    }))
}

/// The candidate map of a parsed file (for error messages and tooling).
pub fn candidate_names(file: &ProblemFile) -> BTreeMap<String, Vec<f64>> {
    file.candidates.clone()
}
