//! Exact null space and restricted isometry analysis for compressed sensing
//! at desk scale, basis pursuit recovery, closed-form stability bounds, and
//! the explicit construction of a matrix that has the null space property but
//! shares its kernel with no well-conditioned RIP matrix.
//!
//! The numerical core is generic over the scalar (`f32` or `f64`); the
//! aliases below fix it to `f64`, which is what the command line uses.

pub mod bounds;
pub mod certify;
pub mod gap;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod matrixlab;
pub mod report;
pub mod scalar;
pub mod solver;

pub use scalar::Scalar;

pub type DenseMatrixF64 = linalg::DenseMatrix<f64>;
pub type DenseMatrixF32 = linalg::DenseMatrix<f32>;
pub type SubspaceF64 = matrixlab::Subspace<f64>;
pub type SubspaceF32 = matrixlab::Subspace<f32>;
pub type NspCertificateF64 = certify::NspCertificate<f64>;
pub type RipCertificateF64 = certify::RipCertificate<f64>;
pub type BoundReportF64 = bounds::BoundReport<f64>;
pub type RecoveryResultF64 = solver::RecoveryResult<f64>;
pub type GapConstructionF64 = gap::GapConstruction<f64>;
