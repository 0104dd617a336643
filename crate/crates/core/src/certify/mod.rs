//! The theorem suite: scenario oracles, necessary-condition refuters, KKT
//! feasibility, constraint qualification, generalized convexity, and
//! composite certificates for highly robust efficiency.
//!
//! Verdict semantics are deliberately asymmetric: a `Refuted` always carries
//! an independently re-checkable witness, while scenario- and lattice-based
//! consistency is only ever `ConsistentAtResolution`. `Certified` is emitted
//! by the isolated-efficiency and generalized-convex-KKT paths alone.

pub mod convexity;
pub mod efficiency;
pub mod isolated;
pub mod kkt;
pub mod lattice;
pub mod necessary;
pub mod proper;
pub mod robustness;

use std::collections::BTreeMap;

pub use convexity::{generalized_convexity, sufficiency_certificate, ConvexityRow, GcConfig};
pub use efficiency::{grid_efficiency, highly_robust_scan, EfficiencyMode, ScanConfig};
pub use isolated::{isolated_check, isolated_implies_hr};
pub use kkt::{cq2, highly_robust_kkt, kkt_solve, verify_multipliers, KktConfig, Normalization};
pub use lattice::{default_local_radius, feasible_lattice};
pub use necessary::{necessary_refute, NecessaryConfig};
pub use proper::{proper_refuter, ProperConfig};
pub use robustness::{set_based_check, strictness_condition, worst_case_check};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Refuted,
    Certified,
    ConsistentAtResolution,
    Inconclusive,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Refuted => "refuted",
            Status::Certified => "certified",
            Status::ConsistentAtResolution => "consistent_at_resolution",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    IsolatedEfficiency,
    GeneralizedConvexKKT,
}

impl CertificateKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertificateKind::IsolatedEfficiency => "isolated_efficiency",
            CertificateKind::GeneralizedConvexKKT => "generalized_convex_kkt",
        }
    }
}

/// How the multiplier vector is normalized in the KKT membership system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MultiplierNormalization {
    /// sum(lambda) + sum(mu) = 1.
    #[default]
    Joint,
    /// sum(lambda) = 1 with mu >= 0 free.
    LambdaOnly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Multipliers {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    /// Per objective: weights over the vertices of its subdifferential,
    /// summing to lambda_i.
    pub objective_weights: Vec<Vec<f64>>,
    /// Per active constraint (index, weights over its active subgradient
    /// generators summing to mu_j).
    pub constraint_weights: Vec<(usize, Vec<f64>)>,
    pub normalization: MultiplierNormalization,
}

/// Record of the grids and tolerances a verdict was computed at.
pub type Resolution = BTreeMap<String, f64>;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Witness {
    pub x: Option<Vec<f64>>,
    pub u: Option<Vec<Vec<f64>>>,
    pub d: Option<Vec<f64>>,
    pub multipliers: Option<Multipliers>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
    pub certificate: Option<CertificateKind>,
    pub resolution: Resolution,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn refuted(witness: Witness, resolution: Resolution) -> Self {
        Verdict {
            status: Status::Refuted,
            witness: Some(witness),
            certificate: None,
            resolution,
            notes: Vec::new(),
        }
    }

    pub fn certified(kind: CertificateKind, resolution: Resolution) -> Self {
        Verdict {
            status: Status::Certified,
            witness: None,
            certificate: Some(kind),
            resolution,
            notes: Vec::new(),
        }
    }

    pub fn consistent(resolution: Resolution) -> Self {
        Verdict {
            status: Status::ConsistentAtResolution,
            witness: None,
            certificate: None,
            resolution,
            notes: Vec::new(),
        }
    }

    pub fn inconclusive(resolution: Resolution) -> Self {
        Verdict {
            status: Status::Inconclusive,
            witness: None,
            certificate: None,
            resolution,
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_witness(mut self, witness: Witness) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn is_refuted(&self) -> bool {
        self.status == Status::Refuted
    }
}
