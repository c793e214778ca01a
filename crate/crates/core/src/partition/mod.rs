//! Partition functions.
//!
//! - [`quenched`]: O(N²) dynamic programs for a fixed environment.
//! - [`transfer`]: exact annealed values for finite-range correlations via a
//!   chain on (age, recent-site window).
//! - [`enumerate`]: brute-force sums over all renewal sets and signs.
//! - [`tilted`]: annealed expectations under a shifted environment.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub mod enumerate;
pub mod quenched;
pub mod tilted;
pub mod transfer;

pub use enumerate::{enumerate_oracle, enumerate_pair_oracle, OracleKind, ENUMERATION_LIMIT, PAIR_ENUMERATION_LIMIT};
pub use quenched::{quenched_copolymer_logz, quenched_pinning_logz, site_weight_pinning_logz};
pub use tilted::{block_length, tilted_copolymer_expectation, tilted_copolymer_expectation_mc, TiltedExpectation};
pub use transfer::{AnnealedTransferSpec, TransferProfile};

pub(crate) const MODULE: &str = "partition";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Polymer pinned at N (N ∈ τ).
    #[default]
    Constrained,
    /// Endpoint free; the last excursion may be incomplete.
    Free,
}

impl std::str::FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constrained" => Ok(Boundary::Constrained),
            "free" => Ok(Boundary::Free),
            _ => Err(Error::domain(MODULE, format!("unknown boundary `{s}` (constrained, free)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CopolymerParams {
    pub lambda: f64,
    pub h: f64,
    pub boundary: Boundary,
}

impl CopolymerParams {
    pub fn new(lambda: f64, h: f64, boundary: Boundary) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) || !h.is_finite() {
            return Err(Error::domain(MODULE, format!("copolymer needs finite lambda >= 0 and h, got ({lambda}, {h})")));
        }
        Ok(CopolymerParams { lambda, h, boundary })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PinningParams {
    pub beta: f64,
    pub h: f64,
    pub boundary: Boundary,
}

impl PinningParams {
    pub fn new(beta: f64, h: f64, boundary: Boundary) -> Result<Self> {
        if !(beta >= 0.0 && beta.is_finite()) || !h.is_finite() {
            return Err(Error::domain(MODULE, format!("pinning needs finite beta >= 0 and h, got ({beta}, {h})")));
        }
        Ok(PinningParams { beta, h, boundary })
    }
}
