//! PAC learning of stabiliser states under two-outcome Pauli measurements.
//!
//! The toolkit has three layers:
//!
//! - **Kernels**: signed Pauli operators with phase-tracked multiplication
//!   ([`pauli`]) and bit-packed GF(2) linear algebra with independence
//!   certificates ([`gf2`]).
//! - **States and learning**: stabiliser tableaux with an exact
//!   `{0, 1/2, 1}` measurement oracle ([`tableau`]), the generator-harvesting
//!   learner and sign-resolved predictor ([`learner`]), and a brute-force
//!   dense-matrix reference ([`dense`]) for small-`n` validation.
//! - **Experiments**: measurement distributions, training-set generation, the
//!   sample-complexity calculator and reproducible multi-trial PAC runs
//!   ([`harness`]).
//!
//! With the `parallel` feature (on by default) experiment trials run on a
//! rayon pool; per-trial seeds are derived purely from the master seed, so
//! reports are identical at any thread count.

pub mod dense;
pub mod gf2;
pub mod harness;
pub mod learner;
pub mod pauli;
pub mod tableau;

#[cfg(test)]
pub(crate) mod testutil;

pub use gf2::{Gf2Vector, IncrementalBasis, Insertion};
pub use learner::{LearnedHypothesis, TrainingExample};
pub use pauli::{CheckVector, Expectation, PauliOperator, PhasedPauli, Sign};
pub use tableau::{Gate, StabiliserTableau};

use thiserror::Error;

/// Errors across the toolkit. Variant names follow the failing contract.
#[derive(Debug, Error, PartialEq)]
pub enum Error {
    #[error("malformed Pauli string: {0}")]
    MalformedPauli(String),
    #[error("operator qubit counts differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("product of supposedly commuting generators has odd phase")]
    NonHermitianProduct,
    #[error("vector widths differ: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("bad dimensions: need 1 <= l <= n, got n={n} l={l}")]
    BadDimensions { n: usize, l: usize },
    #[error("qubit index {index} out of range for {n} qubits")]
    BadQubitIndex { index: usize, n: usize },
    #[error("group has 2^{0} elements, enumeration capped at 2^20")]
    GroupTooLarge(usize),
    #[error("generators are not a valid stabiliser set: {0}")]
    InvalidGenerators(String),
    #[error("inconsistent training set: {0}")]
    InconsistentTrainingSet(String),
    #[error("label {0} is not 0, 1/2 or 1")]
    BadLabel(f64),
    #[error("dense representation needs n <= {max}, got n={n}")]
    TooLarge { n: usize, max: usize },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
