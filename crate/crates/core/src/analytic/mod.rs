//! Closed-form evaluation of the threshold-retransmission link.
//!
//! All functions are pure. Probabilities are validated to lie in `[0, 1)`;
//! `p = 0` is accepted and evaluated as the continuous limit (`p^M = 0`).

mod link;
mod moments;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use link::{dbm_to_watts, failure_prob, noise_from_reference_snr, transmit_energy, LinkSpec, PowerModel};
pub use moments::{
    avg_aoi, avg_energy, interval_moments, one_minus_pow, sense_count_mean, sense_count_pmf, yhat_mean,
    yhat_pmf, ytilde_pmf,
};

/// Threshold retransmission policy: each packet is transmitted at most
/// `max_tx` times, counting the first transmission.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Policy {
    max_tx: u64,
}

impl Policy {
    pub fn new(max_tx: u64) -> Result<Self> {
        check_max_tx(max_tx)?;
        Ok(Policy { max_tx })
    }

    pub fn max_tx(self) -> u64 {
        self.max_tx
    }
}

/// Per-event energies. The slot length is one, so joules per slot are
/// numerically watts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyParams {
    pub sense: f64,
    pub tx: f64,
}

impl EnergyParams {
    pub fn new(sense: f64, tx: f64) -> Result<Self> {
        let e = EnergyParams { sense, tx };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sense.is_finite() && self.sense >= 0.0) {
            return Err(Error::param("sense_energy", self.sense, "must be finite and >= 0"));
        }
        if !(self.tx.is_finite() && self.tx >= 0.0) {
            return Err(Error::param("tx_energy", self.tx, "must be finite and >= 0"));
        }
        Ok(())
    }
}

/// One (average energy, average age) pair and the parameters that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricPoint {
    pub p: f64,
    #[serde(rename = "M")]
    pub max_tx: u64,
    /// Transmit power in dBm when the point came from a power sweep.
    pub pt_dbm: Option<f64>,
    pub avg_aoi: f64,
    pub avg_energy: f64,
    pub link: LinkSpec,
    pub energy: EnergyParams,
}

impl MetricPoint {
    pub fn evaluate(link: LinkSpec, policy: Policy, energy: EnergyParams) -> Result<Self> {
        let p = failure_prob(&link)?;
        let max_tx = policy.max_tx();
        Ok(MetricPoint {
            p,
            max_tx,
            pt_dbm: None,
            avg_aoi: avg_aoi(p, max_tx)?,
            avg_energy: avg_energy(p, max_tx, &energy)?,
            link,
            energy,
        })
    }

    pub fn with_pt_dbm(mut self, dbm: f64) -> Self {
        self.pt_dbm = Some(dbm);
        self
    }
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if p.is_finite() && (0.0..1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param("p", p, "failure probability must lie in [0, 1)"))
    }
}

pub(crate) fn check_max_tx(m: u64) -> Result<()> {
    if m >= 1 {
        Ok(())
    } else {
        Err(Error::param("M", m as f64, "at least one transmission per packet is required"))
    }
}
