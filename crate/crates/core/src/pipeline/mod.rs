//! Assembles the construction from configuration, runs every certificate,
//! searches for the smoothing section τ, and emits the machine-readable
//! verification report.

mod config;
mod family;
mod report;
mod verify;

pub use config::{ConfigError, FamilyConfig, TauMode, TauSearchConfig};
pub use family::{
    build_family, find_tau, sigma_frame_form, tau_basis, tau_from_coeffs, FamilyData, TauBasis,
    TauLock,
};
pub use report::{
    LiftRecord, OracleGridRecord, SampleRecord, SpecialFiberRecord, TauRecord, VerificationReport,
};
pub use verify::{
    bad_parameter_roots, oracle_grid, overall_pass, verify, BadParameterRoots, SmoothVerdict,
};

use std::fmt;

use crate::algebra::poly::PolyError;
use crate::bundle::BundleError;
use crate::cohomology::CohomologyError;
use crate::smooth::SmoothError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PipelineError {
    Config(ConfigError),
    Bundle(BundleError),
    Smooth(SmoothError),
    Cohomology(CohomologyError),
    Poly(PolyError),
    TauSearchExhausted { attempts: u32 },
    TauBasisIndexOutOfRange { index: usize, size: usize },
    SigmaIdenticallyZero,
    UnexpectedShape(String),
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::Config(e) => write!(f, "{e}"),
            PipelineError::Bundle(e) => write!(f, "{e}"),
            PipelineError::Smooth(e) => write!(f, "{e}"),
            PipelineError::Cohomology(e) => write!(f, "{e}"),
            PipelineError::Poly(e) => write!(f, "{e}"),
            PipelineError::TauSearchExhausted { attempts } => write!(
                f,
                "no smooth member found within {attempts} attempts; enlarge coeff_range"
            ),
            PipelineError::TauBasisIndexOutOfRange { index, size } => {
                write!(
                    f,
                    "fixed tau coefficient index {index} out of range (basis size {size})"
                )
            }
            PipelineError::SigmaIdenticallyZero => write!(f, "sigma vanishes identically"),
            PipelineError::UnexpectedShape(s) => write!(f, "unexpected shape: {s}"),
        }
    }
}

impl std::error::Error for PipelineError {}

impl From<ConfigError> for PipelineError {
    fn from(e: ConfigError) -> Self {
        PipelineError::Config(e)
    }
}

impl From<BundleError> for PipelineError {
    fn from(e: BundleError) -> Self {
        PipelineError::Bundle(e)
    }
}

impl From<SmoothError> for PipelineError {
    fn from(e: SmoothError) -> Self {
        PipelineError::Smooth(e)
    }
}

impl From<CohomologyError> for PipelineError {
    fn from(e: CohomologyError) -> Self {
        PipelineError::Cohomology(e)
    }
}

impl From<PolyError> for PipelineError {
    fn from(e: PolyError) -> Self {
        PipelineError::Poly(e)
    }
}
