//! Geometric observables of Euclidean-invariant elementary systems on the
//! momentum 2-sphere.
//!
//! The crate builds up, layer by layer, everything needed to compute the
//! "empirical" distance, angle and 3-volume between elementary quantum
//! mechanical systems carrying a unitary irreducible representation of the
//! quantum mechanical Euclidean group E(3), and to check numerically that
//! these observables converge to the geometry of Euclidean 3-space in the
//! classical limit:
//!
//! * [`swsh`] — spin-weighted spherical harmonics on the momentum sphere,
//!   the edth ladder operators, Gauss–Legendre quadrature and the Y1 product
//!   expansion;
//! * [`operators`] — exact sparse matrix elements and application of the
//!   basic observables **p**, **J**, **C**, **W**, plus closed-form moments
//!   and spectra;
//! * [`classical`] — classical E(3) elementary systems, centre-of-mass
//!   lines and the classical empirical distance/angle/volume;
//! * [`empirical`] — quantum empirical geometry for pairs and triples of
//!   placed basis states, uncertainties, and the classical-limit sweep;
//! * [`oracle`] — independent brute-force verification by sphere quadrature
//!   and finite differences;
//! * [`cli`] — config ingestion and table emission behind the `spingeo`
//!   binary.
//!
//! Every runnable capability also has a corresponding example under
//! `examples/`; start with `cargo run --example empirical_distance`.

pub mod classical;
pub mod cli;
pub mod empirical;
pub mod geom;
pub mod half;
pub mod operators;
pub mod oracle;
pub mod swsh;

pub use half::HalfInt;
pub use swsh::QNum;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),
    #[error("point on a pole of the momentum sphere (theta = {0})")]
    PoleExcluded(f64),
    #[error("spin weight mismatch: state has s = {state}, operand has s = {operand}")]
    SpinWeightMismatch { state: String, operand: String },
    #[error("degenerate system: {0}")]
    DegenerateSystem(String),
    #[error("momenta are parallel; no unique transverse direction")]
    ParallelMomenta,
    #[error("undefined angle: {0}")]
    UndefinedAngle(String),
    #[error("relative uncertainty undefined: numerator expectation value is zero")]
    UndefinedUncertainty,
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("argument out of supported range: {0}")]
    OutOfRange(String),
    #[error("internal consistency violation: {0}")]
    InternalConsistency(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Clamp an inverse-trigonometric argument to [-1, 1].
///
/// Excess beyond `1e-12` is treated as a real domain violation rather than
/// floating-point dust.
pub fn clamped_acos(x: f64) -> Result<f64> {
    if x.abs() > 1.0 + 1e-12 {
        return Err(Error::OutOfRange(format!(
            "arccos argument {x} exceeds [-1, 1] beyond tolerance"
        )));
    }
    Ok(x.clamp(-1.0, 1.0).acos())
}
