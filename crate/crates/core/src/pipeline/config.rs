//! Run configuration: the free choices of the construction (three linear
//! forms, sample parameters, τ resolution policy) with validation.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Deserialize;

use crate::algebra::parse::parse_mpoly;
use crate::algebra::poly::{rat_i, Rat};
use crate::smooth::LinearFormPair;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigError {
    BadJson(String),
    BadLinearForm { field: &'static str, value: String },
    SectionsNotDistinct,
    EmptySamples,
    ZeroSample,
    BadRational(String),
    EmptyCoeffRange,
    BadTauMode(String),
    ZeroJobs,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::BadJson(e) => write!(f, "invalid config JSON: {e}"),
            ConfigError::BadLinearForm { field, value } => {
                write!(
                    f,
                    "field `{field}` must be a linear form in z0, z1, got `{value}`"
                )
            }
            ConfigError::SectionsNotDistinct => {
                write!(f, "sections a, b, s must be pairwise non-proportional")
            }
            ConfigError::EmptySamples => write!(f, "samples must be nonempty"),
            ConfigError::ZeroSample => {
                write!(
                    f,
                    "c = 0 is always processed separately and may not appear in samples"
                )
            }
            ConfigError::BadRational(s) => write!(f, "invalid rational `{s}`"),
            ConfigError::EmptyCoeffRange => write!(f, "coeff_range is empty"),
            ConfigError::BadTauMode(s) => write!(f, "invalid tau mode `{s}`"),
            ConfigError::ZeroJobs => write!(f, "jobs must be at least 1"),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauSearchConfig {
    pub seed: u64,
    pub max_attempts: u32,
    pub coeff_range: (i64, i64),
}

impl Default for TauSearchConfig {
    fn default() -> Self {
        TauSearchConfig {
            seed: 0,
            max_attempts: 1000,
            coeff_range: (-3, 3),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauMode {
    Search(TauSearchConfig),
    Fixed(BTreeMap<usize, Rat>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyConfig {
    pub a: LinearFormPair,
    pub b: LinearFormPair,
    pub s: LinearFormPair,
    pub samples: Vec<Rat>,
    pub tau: TauMode,
    pub smooth_check: bool,
    pub jobs: usize,
}

impl Default for FamilyConfig {
    /// a = z0, b = z1, s = z0 + z1; samples 1, -1, 2; seeded search.
    fn default() -> Self {
        FamilyConfig {
            a: LinearFormPair::new(rat_i(1), rat_i(0)).unwrap(),
            b: LinearFormPair::new(rat_i(0), rat_i(1)).unwrap(),
            s: LinearFormPair::new(rat_i(1), rat_i(1)).unwrap(),
            samples: vec![rat_i(1), rat_i(-1), rat_i(2)],
            tau: TauMode::Search(TauSearchConfig::default()),
            smooth_check: true,
            jobs: 1,
        }
    }
}

#[derive(Deserialize)]
struct RawTau {
    mode: String,
    seed: Option<u64>,
    max_attempts: Option<u32>,
    coeff_range: Option<(i64, i64)>,
    coeffs: Option<BTreeMap<String, serde_json::Value>>,
}

#[derive(Deserialize)]
struct RawConfig {
    a: Option<String>,
    b: Option<String>,
    s: Option<String>,
    samples: Option<Vec<serde_json::Value>>,
    tau: Option<RawTau>,
    smooth_check: Option<bool>,
    jobs: Option<usize>,
}

pub(crate) fn rat_from_value(v: &serde_json::Value) -> Result<Rat, ConfigError> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(rat_i(i))
            } else {
                Err(ConfigError::BadRational(n.to_string()))
            }
        }
        serde_json::Value::String(s) => parse_rat(s),
        other => Err(ConfigError::BadRational(other.to_string())),
    }
}

pub(crate) fn parse_rat(s: &str) -> Result<Rat, ConfigError> {
    parse_mpoly(s)
        .ok()
        .and_then(|p| p.constant_value())
        .ok_or_else(|| ConfigError::BadRational(s.to_string()))
}

fn linear_form(field: &'static str, value: &str) -> Result<LinearFormPair, ConfigError> {
    parse_mpoly(value)
        .ok()
        .and_then(|p| LinearFormPair::from_form(&p))
        .ok_or(ConfigError::BadLinearForm {
            field,
            value: value.to_string(),
        })
}

impl FamilyConfig {
    pub fn from_json(text: &str) -> Result<FamilyConfig, ConfigError> {
        let raw: RawConfig =
            serde_json::from_str(text).map_err(|e| ConfigError::BadJson(e.to_string()))?;
        let default = FamilyConfig::default();
        let a = match &raw.a {
            Some(s) => linear_form("a", s)?,
            None => default.a,
        };
        let b = match &raw.b {
            Some(s) => linear_form("b", s)?,
            None => default.b,
        };
        let s = match &raw.s {
            Some(v) => linear_form("s", v)?,
            None => default.s,
        };
        let samples = match &raw.samples {
            Some(values) => values
                .iter()
                .map(rat_from_value)
                .collect::<Result<Vec<_>, _>>()?,
            None => default.samples,
        };
        let tau = match raw.tau {
            None => default.tau,
            Some(rt) => match rt.mode.as_str() {
                "search" => {
                    let d = TauSearchConfig::default();
                    TauMode::Search(TauSearchConfig {
                        seed: rt.seed.unwrap_or(d.seed),
                        max_attempts: rt.max_attempts.unwrap_or(d.max_attempts),
                        coeff_range: rt.coeff_range.unwrap_or(d.coeff_range),
                    })
                }
                "fixed" => {
                    let mut coeffs = BTreeMap::new();
                    for (k, v) in rt.coeffs.unwrap_or_default() {
                        let idx: usize = k
                            .parse()
                            .map_err(|_| ConfigError::BadTauMode(format!("bad index `{k}`")))?;
                        coeffs.insert(idx, rat_from_value(&v)?);
                    }
                    TauMode::Fixed(coeffs)
                }
                other => return Err(ConfigError::BadTauMode(other.to_string())),
            },
        };
        let config = FamilyConfig {
            a,
            b,
            s,
            samples,
            tau,
            smooth_check: raw.smooth_check.unwrap_or(default.smooth_check),
            jobs: raw.jobs.unwrap_or(default.jobs),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.a.proportional(&self.b)
            || self.a.proportional(&self.s)
            || self.b.proportional(&self.s)
        {
            return Err(ConfigError::SectionsNotDistinct);
        }
        if self.samples.is_empty() {
            return Err(ConfigError::EmptySamples);
        }
        if self.samples.iter().any(|c| c.is_zero()) {
            return Err(ConfigError::ZeroSample);
        }
        if let TauMode::Search(s) = &self.tau {
            if s.coeff_range.0 > s.coeff_range.1 {
                return Err(ConfigError::EmptyCoeffRange);
            }
        }
        if self.jobs == 0 {
            return Err(ConfigError::ZeroJobs);
        }
        Ok(())
    }

    /// Override the search seed (CLI `--seed`).
    pub fn with_seed(mut self, seed: u64) -> FamilyConfig {
        if let TauMode::Search(s) = &mut self.tau {
            s.seed = seed;
        }
        self
    }

    pub fn seed(&self) -> u64 {
        match &self.tau {
            TauMode::Search(s) => s.seed,
            TauMode::Fixed(_) => 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat;

    #[test]
    fn defaults_round_trip() {
        let c = FamilyConfig::from_json("{}").unwrap();
        assert_eq!(c, FamilyConfig::default());
    }

    #[test]
    fn explicit_fields() {
        let c = FamilyConfig::from_json(
            r#"{
                "a": "z0 + z1", "b": "z0 - z1", "s": "z1",
                "samples": [2, "-1/2"],
                "tau": {"mode": "search", "seed": 7, "max_attempts": 10, "coeff_range": [-1, 1]},
                "smooth_check": false,
                "jobs": 2
            }"#,
        )
        .unwrap();
        assert_eq!(c.samples, vec![rat_i(2), rat(-1, 2)]);
        assert!(!c.smooth_check);
        assert_eq!(c.seed(), 7);
    }

    #[test]
    fn distinctness_enforced() {
        let err = FamilyConfig::from_json(r#"{"a": "z0", "b": "2*z0"}"#).unwrap_err();
        assert_eq!(err, ConfigError::SectionsNotDistinct);
    }

    #[test]
    fn zero_sample_rejected() {
        let err = FamilyConfig::from_json(r#"{"samples": [1, 0]}"#).unwrap_err();
        assert_eq!(err, ConfigError::ZeroSample);
    }

    #[test]
    fn fixed_mode_parses() {
        let c = FamilyConfig::from_json(
            r#"{"tau": {"mode": "fixed", "coeffs": {"0": 1, "5": "-2/3"}}}"#,
        )
        .unwrap();
        match c.tau {
            TauMode::Fixed(m) => {
                assert_eq!(m.get(&0), Some(&rat_i(1)));
                assert_eq!(m.get(&5), Some(&rat(-2, 3)));
            }
            _ => panic!("expected fixed mode"),
        }
    }
}
