//! Estimators built on the partition engines.
//!
//! - [`free_energy`]: quenched Monte Carlo and annealed (exact or Monte Carlo)
//!   free energies at one parameter point.
//! - [`critical`]: bisection for the localisation threshold over a sequence of
//!   sizes.
//! - [`fractional`]: E[Z^ζ] on one block of length t/λ².
//! - [`interpolation`]: the two-replica lower bound on the quenched pinning
//!   free energy.
//! - [`decoupling`]: the Gaussian decoupling inequality for pairs of blocks.
//! - [`bounds`]: linear lower bounds and the smoothing inequality.

use serde::{Deserialize, Serialize};

use crate::correlation::CorrelationModel;
use crate::partition::{
    quenched_copolymer_logz, quenched_pinning_logz, AnnealedTransferSpec, Boundary, CopolymerParams, PinningParams,
    TransferProfile,
};
use crate::renewal::RenewalLaw;
use crate::{Error, Result};

pub mod bounds;
pub mod critical;
pub mod decoupling;
pub mod fractional;
pub mod free_energy;
pub mod interpolation;

pub use bounds::{linear_bound_check, smoothing_check, LinearBoundCheck, SmoothingCheck};
pub use critical::{annealed_critical_point, critical_point, Bracket, CriticalPointEstimate, CriticalStrategy};
pub use decoupling::{decoupling_check, Block, DecouplingCheck, Functional};
pub use fractional::{
    copolymer_block, copolymer_fractional_bound, fractional_moment, pinning_block, pinning_fractional_bound,
    FractionalMoment,
};
pub use free_energy::{free_energy, quenched_logz_samples, FreeEnergyEstimate, FreeEnergyRequest};
pub use interpolation::{two_replica_quantities, TwoReplicaQuantities};

pub(crate) const MODULE: &str = "estimators";

/// Which polymer model a computation refers to. The coupling is λ for the
/// copolymer and β for pinning.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Polymer {
    Copolymer,
    Pinning,
}

impl std::str::FromStr for Polymer {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "copolymer" | "cop" => Ok(Polymer::Copolymer),
            "pinning" | "pin" => Ok(Polymer::Pinning),
            _ => Err(Error::domain(MODULE, format!("unknown polymer `{s}` (copolymer, pinning)"))),
        }
    }
}

impl std::fmt::Display for Polymer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Polymer::Copolymer => "copolymer",
            Polymer::Pinning => "pinning",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    QuenchedMc,
    AnnealedExact,
    AnnealedMc,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quenched-mc" => Ok(Method::QuenchedMc),
            "annealed-exact" => Ok(Method::AnnealedExact),
            "annealed-mc" => Ok(Method::AnnealedMc),
            _ => Err(Error::domain(
                MODULE,
                format!("unknown method `{s}` (quenched-mc, annealed-exact, annealed-mc)"),
            )),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::QuenchedMc => "quenched-mc",
            Method::AnnealedExact => "annealed-exact",
            Method::AnnealedMc => "annealed-mc",
        })
    }
}

/// log Z in the environment `omega`.
pub fn quenched_logz(
    polymer: Polymer,
    omega: &[f64],
    law: &RenewalLaw,
    coupling: f64,
    h: f64,
    boundary: Boundary,
) -> Result<f64> {
    match polymer {
        Polymer::Copolymer => quenched_copolymer_logz(omega, law, &CopolymerParams::new(coupling, h, boundary)?),
        Polymer::Pinning => quenched_pinning_logz(omega, law, &PinningParams::new(coupling, h, boundary)?),
    }
}

/// log E Z_n for n = 1..=N from the transfer chain.
pub fn annealed_profile(
    polymer: Polymer,
    model: &CorrelationModel,
    law: &RenewalLaw,
    coupling: f64,
    h: f64,
    n: usize,
) -> Result<TransferProfile> {
    let spec = AnnealedTransferSpec::new(model, law)?;
    match polymer {
        Polymer::Copolymer => spec.copolymer(coupling, h, n),
        Polymer::Pinning => spec.pinning(coupling, h, n),
    }
}
