//! Permanent computation and additive-error permanent estimation.
//!
//! The crate is organised bottom-up:
//!
//! - [`matrix`]: dense complex matrices, the text file format, multiplicity
//!   expansion and the spectral norm.
//! - [`exact`]: exact permanents (permutation sum, Ryser and Glynn with
//!   Gray-code sweeps, and the roots-of-unity average for repeated columns).
//! - [`estimate`]: the Glynn estimator and its roots-of-unity generalisation,
//!   randomized sampling, derandomized averages over sample spaces, and
//!   permanent upper bounds.
//! - [`smallbias`]: enumerable sample spaces with small bias, both over
//!   `{±1}^n` and over products of cyclic groups, plus exhaustive bias audits.
//! - [`optics`]: linear-optics amplitudes and probabilities built on the above.
//!
//! Every estimator reports the absolute additive guarantee it carries, so
//! callers never need to recompute norms.

pub mod error;
pub mod estimate;
pub mod exact;
pub mod gray;
mod kahan;
pub mod matrix;
pub mod optics;
pub mod roots;
pub mod smallbias;

pub use error::{Error, ParseErrorKind, Result};
pub use estimate::{Estimate, EstimateMode, GuaranteeReport, PhaseVector};
pub use matrix::{spectral_norm, ComplexMatrix, MultiplicitySpec, SpectralNormResult};
pub use num_complex::Complex64;
pub use smallbias::SampleSpace;
