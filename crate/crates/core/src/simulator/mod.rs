//! Seeded Monte Carlo estimators of the average age and energy.
//!
//! Two independent routes are provided:
//!
//! * [`run_slot_sim`] steps the link slot by slot through [`LinkState`] and
//!   integrates the age sawtooth directly. `horizon` counts slots.
//! * [`run_cycle_sim`] draws whole success cycles from the geometric
//!   inter-success distribution and accumulates trapezoid areas.
//!   `horizon` counts success cycles.
//!
//! # Reproducibility
//!
//! Every run draws from `ChaCha8Rng::seed_from_u64(seed)`; the slot estimator
//! uses stream 0 and the cycle estimator stream 1. The slot estimator takes
//! one `Bernoulli(p)` draw per slot; the cycle estimator takes one `f64`
//! uniform per cycle. Equal configs therefore give bit-identical results.
//!
//! Standard errors come from batch means over `batches` contiguous windows of
//! equal length, since samples within a success cycle are correlated.

mod cycle;
mod process;
mod slot;
mod stats;
mod trace;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::{EnergyParams, LinkSpec, Policy};
use crate::error::{Error, Result};

pub use cycle::run_cycle_sim;
pub use process::{cycle_counts, LinkState, SlotOutcome};
pub use slot::{run_slot_sim, run_slot_sim_traced};
pub use trace::{AgeTrace, TraceRow};

pub const DEFAULT_HORIZON: u64 = 1_000_000;
pub const DEFAULT_BATCHES: u64 = 100;

pub(crate) const SLOT_STREAM: u64 = 0;
pub(crate) const CYCLE_STREAM: u64 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    #[default]
    Slot,
    Cycle,
}

impl std::str::FromStr for Estimator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "slot" => Ok(Estimator::Slot),
            "cycle" => Ok(Estimator::Cycle),
            other => Err(format!("unknown estimator `{other}` (expected slot or cycle)")),
        }
    }
}

impl std::fmt::Display for Estimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Estimator::Slot => "slot",
            Estimator::Cycle => "cycle",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub link: LinkSpec,
    pub policy: Policy,
    pub energy: EnergyParams,
    pub seed: u64,
    /// Slots for the slot estimator, success cycles for the cycle estimator.
    pub horizon: u64,
    /// Leading slots (or cycles) excluded from the estimates. `None` picks
    /// [`default_warmup`].
    pub warmup: Option<u64>,
    pub batches: u64,
}

/// 1% of the horizon but at least 1000, shrunk to a tenth of the horizon
/// for runs too short to afford that.
pub fn default_warmup(horizon: u64) -> u64 {
    let w = (horizon / 100).max(1000);
    if w < horizon {
        w
    } else {
        horizon / 10
    }
}

impl SimConfig {
    pub fn new(link: LinkSpec, policy: Policy, energy: EnergyParams) -> Self {
        SimConfig {
            link,
            policy,
            energy,
            seed: 0,
            horizon: DEFAULT_HORIZON,
            warmup: None,
            batches: DEFAULT_BATCHES,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn horizon(mut self, horizon: u64) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn warmup(mut self, warmup: u64) -> Self {
        self.warmup = Some(warmup);
        self
    }

    pub fn batches(mut self, batches: u64) -> Self {
        self.batches = batches;
        self
    }

    pub fn effective_warmup(&self) -> u64 {
        self.warmup.unwrap_or_else(|| default_warmup(self.horizon))
    }

    /// Checks the config and returns the batch window length.
    pub fn validate(&self) -> Result<u64> {
        self.link.validate()?;
        self.energy.validate()?;
        let warmup = self.effective_warmup();
        if self.horizon == 0 {
            return Err(Error::InvalidConfig("horizon must be positive".into()));
        }
        if warmup >= self.horizon {
            return Err(Error::InvalidConfig(format!(
                "warmup ({warmup}) must be smaller than horizon ({})",
                self.horizon
            )));
        }
        if self.batches < 2 {
            return Err(Error::InvalidConfig("at least 2 batches are required".into()));
        }
        let len = (self.horizon - warmup) / self.batches;
        if len == 0 {
            return Err(Error::InvalidConfig(format!(
                "{} post-warmup samples cannot fill {} batches",
                self.horizon - warmup,
                self.batches
            )));
        }
        Ok(len)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub estimator: Estimator,
    pub avg_aoi_est: f64,
    pub avg_energy_est: f64,
    pub stderr_aoi: f64,
    pub stderr_energy: f64,
    /// Total simulated slots, warmup included.
    pub slots: u64,
    pub packets_generated: u64,
    pub successes: u64,
    pub seed: u64,
}

pub fn run(cfg: &SimConfig, estimator: Estimator) -> Result<SimResult> {
    match estimator {
        Estimator::Slot => run_slot_sim(cfg),
        Estimator::Cycle => run_cycle_sim(cfg),
    }
}

pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
