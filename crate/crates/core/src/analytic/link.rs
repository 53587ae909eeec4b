use serde::{Deserialize, Serialize};

use super::check_probability;
use crate::error::{Error, Result};

/// Channel description.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LinkSpec {
    FixedFailure { p: f64 },
    /// Rayleigh block fading: outage at spectral efficiency `rate` (bits/s/Hz)
    /// with noise power and transmit power in watts.
    Rayleigh {
        rate: f64,
        noise_power: f64,
        transmit_power: f64,
    },
}

impl LinkSpec {
    pub fn fixed(p: f64) -> Self {
        LinkSpec::FixedFailure { p }
    }

    pub fn rayleigh(rate: f64, noise_power: f64, transmit_power: f64) -> Self {
        LinkSpec::Rayleigh {
            rate,
            noise_power,
            transmit_power,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            LinkSpec::FixedFailure { p } => check_probability(p),
            LinkSpec::Rayleigh {
                rate,
                noise_power,
                transmit_power,
            } => {
                if !(rate.is_finite() && rate >= 0.0) {
                    return Err(Error::param("rate", rate, "must be finite and >= 0"));
                }
                if !(noise_power.is_finite() && noise_power > 0.0) {
                    return Err(Error::param("noise_power", noise_power, "must be finite and > 0"));
                }
                if !(transmit_power.is_finite() && transmit_power > 0.0) {
                    return Err(Error::param("transmit_power", transmit_power, "must be finite and > 0"));
                }
                Ok(())
            }
        }
    }
}

/// Per-slot failure probability of the link.
///
/// For Rayleigh fading this is the outage probability
/// `1 - exp(-(2^R - 1) * sigma^2 / P_t)`. A result that rounds to 1 is
/// rejected because the link would never deliver.
pub fn failure_prob(link: &LinkSpec) -> Result<f64> {
    link.validate()?;
    match *link {
        LinkSpec::FixedFailure { p } => Ok(p),
        LinkSpec::Rayleigh {
            rate,
            noise_power,
            transmit_power,
        } => {
            let threshold = rate.exp2() - 1.0;
            let p = -(-threshold * noise_power / transmit_power).exp_m1();
            check_probability(p)?;
            Ok(p)
        }
    }
}

/// Power consumption model `E_t = P_c + eta * P_t` over one unit slot.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerModel {
    pub circuit_power: f64,
    /// Inverse drain efficiency of the power amplifier.
    pub inv_drain_eff: f64,
    pub transmit_power: f64,
    pub max_power: f64,
}

impl PowerModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.circuit_power.is_finite() && self.circuit_power >= 0.0) {
            return Err(Error::param("circuit_power", self.circuit_power, "must be finite and >= 0"));
        }
        if !(self.inv_drain_eff.is_finite() && self.inv_drain_eff > 0.0) {
            return Err(Error::param("inv_drain_eff", self.inv_drain_eff, "must be finite and > 0"));
        }
        if !(self.max_power.is_finite() && self.max_power > 0.0) {
            return Err(Error::param("max_power", self.max_power, "must be finite and > 0"));
        }
        if !(self.transmit_power > 0.0 && self.transmit_power <= self.max_power) {
            return Err(Error::param("transmit_power", self.transmit_power, "must lie in (0, max_power]"));
        }
        Ok(())
    }
}

pub fn transmit_energy(pm: &PowerModel) -> Result<f64> {
    pm.validate()?;
    Ok(pm.circuit_power + pm.inv_drain_eff * pm.transmit_power)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Noise power that yields `snr_ref_db` when transmitting at `p_ref` watts.
pub fn noise_from_reference_snr(p_ref: f64, snr_ref_db: f64) -> Result<f64> {
    if !(p_ref.is_finite() && p_ref > 0.0) {
        return Err(Error::param("p_ref", p_ref, "must be finite and > 0"));
    }
    if !snr_ref_db.is_finite() {
        return Err(Error::param("snr_ref_db", snr_ref_db, "must be finite"));
    }
    Ok(p_ref / 10f64.powf(snr_ref_db / 10.0))
}
