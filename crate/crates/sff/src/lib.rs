//! Exact finite-`N` spectral form factors (structure functions) for the
//! classical unitary ensembles.
//!
//! The crate computes the variance of the linear statistic `Σ_j exp(i k λ_j)`
//! over the Laguerre (LUE), Jacobi (JUE) and Gaussian (GUE) unitary ensembles
//! at finite matrix size, together with the closed-form scaled limits that
//! quantify the dip-ramp-plateau shape of that statistic.
//!
//! The LUE structure function is computed through two independent exact
//! routes which must agree:
//!
//! * a double sum over Laplace–Fourier transforms of Laguerre polynomial
//!   products ([`structure::s_lue_kernel_sum`]), and
//! * a single integral of the Jacobi ensemble spectral density
//!   ([`structure::s_lue_jue`]).
//!
//! Everything is cross-validated by quadrature oracles and by Monte Carlo
//! sampling of complex Wishart spectra ([`montecarlo`]).
//!
//! See the `examples/` directory for runnable walkthroughs of each
//! capability, and the `sff` binary for the CSV command-line surface.

pub mod asymptotics;
pub mod cli;
pub(crate) mod eigen;
pub mod hypergeom;
pub mod kernels;
pub mod montecarlo;
pub mod orthopoly;
pub mod quadrature;
pub(crate) mod special;
pub mod structure;
pub mod transforms;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("series did not converge: {0}")]
    NoConvergence(String),
    #[error("eigensolver failed to converge")]
    EigenFailure,
    #[error("N = {0} exceeds the double-precision certification bound {1}; request extended precision")]
    PrecisionLimit(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
