use std::fmt;

use nspgap_core::bounds::BoundsError;
use nspgap_core::certify::CertifyError;
use nspgap_core::gap::GapError;
use nspgap_core::io::IoError;
use nspgap_core::linalg::MatrixError;
use nspgap_core::solver::SolverError;

/// A failed command, classified by its exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: unparsable files, out-of-domain parameters, missing or extra flags.
    Validation(String),
    /// A requested enumeration or search exceeds its budget.
    Resource(String),
    /// A computed identity did not hold.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Resource(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "error: {m}"),
            CliError::Resource(m) => write!(f, "resource limit: {m}"),
            CliError::Internal(m) => write!(f, "internal consistency failure: {m}"),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<MatrixError> for CliError {
    fn from(e: MatrixError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Identity(_) => CliError::Internal(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<CertifyError> for CliError {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::InvalidArgument(_) => CliError::Validation(e.to_string()),
            CertifyError::ResourceLimit { .. } => CliError::Resource(e.to_string()),
            CertifyError::Solver { .. } | CertifyError::Internal(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Lp(_) => CliError::Internal(e.to_string()),
            SolverError::Bounds(b) => b.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<GapError> for CliError {
    fn from(e: GapError) -> Self {
        match e {
            GapError::InvalidArgument(_) => CliError::Validation(e.to_string()),
            GapError::ConstructionFailure { .. } => CliError::Resource(e.to_string()),
            GapError::Internal(_) => CliError::Internal(e.to_string()),
            GapError::Certify(c) => c.into(),
            GapError::Matrix(m) => m.into(),
            GapError::Bounds(b) => b.into(),
            GapError::Io(i) => i.into(),
        }
    }
}
