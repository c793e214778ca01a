//! Correlated-disorder pinning and copolymer models.
//!
//! The crate is organised bottom-up:
//!
//! - [`correlation`]: two-point functions of the Gaussian environment, their
//!   spectral symbol and Toeplitz solves.
//! - [`disorder`]: exact sampling of stationary Gaussian paths, mean-shift
//!   tilts and the associated change-of-measure costs.
//! - [`renewal`]: heavy-tailed inter-arrival laws, signed trajectories and the
//!   backward-recurrence chain.
//! - [`constants`]: closed-form correlation/renewal constants and slopes.
//! - [`partition`]: exact quenched and annealed partition functions plus
//!   brute-force enumeration.
//! - [`estimators`]: free energies, critical points, fractional moments and
//!   the inequality checks built on top of them.
//! - [`verify`]: named, seeded verification suites.

// Guards such as `!(x > 0.0)` are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod constants;
pub mod correlation;
pub mod disorder;
pub mod error;
pub mod estimators;
pub mod numeric;
pub mod parallel;
pub mod partition;
pub mod renewal;
pub mod rng;
pub mod stats;
pub mod verify;

pub use correlation::{CorrelationKind, CorrelationModel, ToeplitzSolveResult};
pub use disorder::{DisorderPath, GaussianSampler, Tilt, TiltKind};
pub use error::{Error, Result};
pub use renewal::{RenewalLaw, SignedTrajectory};
