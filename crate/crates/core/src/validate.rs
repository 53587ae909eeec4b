//! Side-by-side check of both Monte Carlo estimators against the closed
//! forms on a grid of failure probabilities and retransmission limits.
//!
//! A point passes when each estimate lies within
//! `max(3 * stderr, 0.5% of the exact value)` of the closed form.

use serde::{Deserialize, Serialize};

use crate::analytic::{avg_aoi, avg_energy, EnergyParams, LinkSpec, Policy};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::simulator::{self, Estimator, SimConfig, SimResult, DEFAULT_BATCHES, DEFAULT_HORIZON};

pub const SIGMA_FACTOR: f64 = 3.0;
pub const REL_TOLERANCE: f64 = 0.005;

/// Reference transmit and sensing energy, `P_c + eta * P_max` with
/// `P_c = 2.1 W`, `eta = 19.2308`, `P_max = 0.1 W`.
pub const REFERENCE_ENERGY: f64 = 2.1 + 19.2308 * 0.1;

pub fn within_tolerance(estimate: f64, stderr: f64, exact: f64) -> bool {
    (estimate - exact).abs() <= (SIGMA_FACTOR * stderr).max(REL_TOLERANCE * exact.abs())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationConfig {
    pub p_list: Vec<f64>,
    pub max_tx: Vec<u64>,
    pub energy: EnergyParams,
    pub slots: u64,
    pub cycles: u64,
    pub seed: u64,
    pub batches: u64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig {
            p_list: vec![0.1, 0.4, 0.7],
            max_tx: vec![1, 3, 6],
            energy: EnergyParams {
                sense: REFERENCE_ENERGY,
                tx: REFERENCE_ENERGY,
            },
            slots: DEFAULT_HORIZON,
            cycles: DEFAULT_HORIZON,
            seed: 0,
            batches: DEFAULT_BATCHES,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateCheck {
    #[serde(flatten)]
    pub result: SimResult,
    pub aoi_pass: bool,
    pub energy_pass: bool,
}

impl EstimateCheck {
    fn new(result: SimResult, exact_aoi: f64, exact_energy: f64) -> Self {
        EstimateCheck {
            aoi_pass: within_tolerance(result.avg_aoi_est, result.stderr_aoi, exact_aoi),
            energy_pass: within_tolerance(result.avg_energy_est, result.stderr_energy, exact_energy),
            result,
        }
    }

    pub fn pass(&self) -> bool {
        self.aoi_pass && self.energy_pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationPoint {
    pub p: f64,
    #[serde(rename = "M")]
    pub max_tx: u64,
    pub analytic_aoi: f64,
    pub analytic_energy: f64,
    pub slot: EstimateCheck,
    pub cycle: EstimateCheck,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub points: Vec<ValidationPoint>,
    pub passed: usize,
    pub failed: usize,
    pub all_pass: bool,
}

/// Runs both estimators on every grid point. Point `i` (row-major over
/// `p_list` then `max_tx`) is seeded with `seed + i`.
pub fn run_validation(cfg: &ValidationConfig, exec: Execution) -> Result<ValidationReport> {
    if cfg.p_list.is_empty() || cfg.max_tx.is_empty() {
        return Err(Error::InvalidSpec("validation grid is empty".into()));
    }
    let grid: Vec<(f64, u64)> = cfg
        .p_list
        .iter()
        .flat_map(|&p| cfg.max_tx.iter().map(move |&m| (p, m)))
        .collect();
    let mut jobs = Vec::with_capacity(grid.len() * 2);
    for (i, &(p, m)) in grid.iter().enumerate() {
        let base = SimConfig::new(LinkSpec::fixed(p), Policy::new(m)?, cfg.energy)
            .seed(cfg.seed.wrapping_add(i as u64))
            .batches(cfg.batches);
        jobs.push((base.clone().horizon(cfg.slots), Estimator::Slot));
        jobs.push((base.horizon(cfg.cycles), Estimator::Cycle));
    }
    let results = exec
        .map(&jobs, |(c, est)| simulator::run(c, *est))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let mut points = Vec::with_capacity(grid.len());
    for (&(p, m), pair) in grid.iter().zip(results.chunks(2)) {
        let aoi = avg_aoi(p, m)?;
        let energy = avg_energy(p, m, &cfg.energy)?;
        let slot = EstimateCheck::new(pair[0].clone(), aoi, energy);
        let cycle = EstimateCheck::new(pair[1].clone(), aoi, energy);
        let pass = slot.pass() && cycle.pass();
        points.push(ValidationPoint {
            p,
            max_tx: m,
            analytic_aoi: aoi,
            analytic_energy: energy,
            slot,
            cycle,
            pass,
        });
    }
    let passed = points.iter().filter(|p| p.pass).count();
    let failed = points.len() - passed;
    Ok(ValidationReport {
        points,
        passed,
        failed,
        all_pass: failed == 0,
    })
}
