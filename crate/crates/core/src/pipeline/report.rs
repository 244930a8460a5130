//! The machine-readable verification report. Serialization is deterministic
//! for a given config and seed: fixed field order, no timestamps.

use serde::{Deserialize, Serialize};

use super::config::{FamilyConfig, TauMode};

pub const REPORT_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub a: String,
    pub b: String,
    pub s: String,
    pub samples: Vec<String>,
    pub tau_mode: String,
    pub smooth_check: bool,
    pub jobs: usize,
}

impl ConfigEcho {
    pub fn of(config: &FamilyConfig) -> ConfigEcho {
        ConfigEcho {
            a: config.a.to_string(),
            b: config.b.to_string(),
            s: config.s.to_string(),
            samples: config.samples.iter().map(|c| c.to_string()).collect(),
            tau_mode: match &config.tau {
                TauMode::Search(s) => format!(
                    "search(seed={}, max_attempts={}, coeff_range=[{},{}])",
                    s.seed, s.max_attempts, s.coeff_range.0, s.coeff_range.1
                ),
                TauMode::Fixed(_) => "fixed".to_string(),
            },
            smooth_check: config.smooth_check,
            jobs: config.jobs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    /// Chosen generator of H^1(P^1, O(-2)).
    pub ext_generator: String,
    pub transition_convention: String,
    pub extension_convention: String,
    pub sym_basis_order: String,
}

impl Default for Normalization {
    fn default() -> Self {
        Normalization {
            ext_generator: "[z^-1]".to_string(),
            transition_convention: "f0(z) = T(z) * z^d * f1(1/z); O(d) <-> z^d".to_string(),
            extension_convention: "sub-bundle first, quotient second".to_string(),
            sym_basis_order: "degree-k exponent vectors, descending lexicographic".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleGridRecord {
    pub cases: u64,
    pub disagreements: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftRecord {
    pub transition_identity_over_qt: bool,
    pub q_at_zero_is_quotient_section: bool,
    pub sigma_slice_equals_sigma0: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialFiberRecord {
    pub splitting_type_g: Vec<i64>,
    pub splitting_type_e: Vec<i64>,
    pub sigma_nonzero: bool,
    pub fiberwise_nonvanishing: bool,
    pub generic_squarefree: bool,
    pub h1: u64,
    pub h2: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub c: String,
    pub splitting_type_g: Vec<i64>,
    pub splitting_type_e: Vec<i64>,
    pub sigma_nonzero: bool,
    pub h1: u64,
    pub h2: u64,
    /// "verified_smooth" | "singular" | "skipped"
    pub smooth: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauRecord {
    pub mode: String,
    pub seed: u64,
    pub attempt: Option<u32>,
    pub coeffs: Vec<String>,
    pub basis_size: usize,
    pub basis_order_version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub version: String,
    pub config: ConfigEcho,
    pub normalization: Normalization,
    pub oracle_grid: Option<OracleGridRecord>,
    pub lift: Option<LiftRecord>,
    pub t0: Option<SpecialFiberRecord>,
    pub samples: Vec<SampleRecord>,
    pub tau: Option<TauRecord>,
    pub bad_parameter_roots: Vec<String>,
    pub bad_parameter_roots_complete: bool,
    /// Sample parameters whose fibers failed the smoothness certificate;
    /// they play the role of the removed finite bad set.
    pub candidate_bad_set: Vec<String>,
    pub failures: Vec<String>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
