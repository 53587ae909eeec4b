use rand::Rng;

use super::process::cycle_counts;
use super::stats::{batch_stderr, RatioBatches};
use super::{stream_rng, Estimator, SimConfig, SimResult, CYCLE_STREAM};
use crate::analytic::failure_prob;
use crate::error::{Error, Result};

/// Inverse-transform draw of a geometric success-cycle length on `{1, 2, ...}`.
#[inline]
fn draw_cycle<R: Rng>(rng: &mut R, ln_p: f64) -> u64 {
    // u in (0, 1]
    let u = 1.0 - rng.random::<f64>();
    if ln_p == f64::NEG_INFINITY {
        return 1;
    }
    1 + (u.ln() / ln_p).floor() as u64
}

/// Renewal estimator over success cycles.
///
/// Each cycle of `Ỹ` slots contributes the trapezoid area
/// `(Ŷ_prev + Ỹ/2) Ỹ` to the age integral, where `Ŷ_prev` is the previous
/// cycle's delivered-packet transmission count, and `ceil(Ỹ/M)` sensing
/// events to the energy. `warmup` cycles (at least one) seed `Ŷ_prev` and are
/// then discarded.
pub fn run_cycle_sim(cfg: &SimConfig) -> Result<SimResult> {
    let batch_len = cfg.validate()?;
    let warmup = cfg.effective_warmup();
    if warmup == 0 {
        return Err(Error::InvalidConfig(
            "cycle estimator needs at least one warmup cycle".into(),
        ));
    }
    let p = failure_prob(&cfg.link)?;
    let ln_p = p.ln();
    let max_tx = cfg.policy.max_tx();
    let mut rng = stream_rng(cfg.seed, CYCLE_STREAM);

    let mut area_batches = RatioBatches::new(cfg.batches, batch_len);
    let mut sense_batches = RatioBatches::new(cfg.batches, batch_len);
    // twice the trapezoid area is an integer
    let mut twice_area: u128 = 0;
    let mut span: u128 = 0;
    let mut senses: u128 = 0;
    let mut slots = 0u64;
    let mut packets = 0u64;
    let mut prev_yhat = 0u64;

    for k in 0..cfg.horizon {
        let ytilde = draw_cycle(&mut rng, ln_p);
        let (yhat, g) = cycle_counts(ytilde, max_tx);
        slots = slots.saturating_add(ytilde);
        packets = packets.saturating_add(g);
        if k >= warmup {
            let y = u128::from(ytilde);
            let area2 = (2 * u128::from(prev_yhat) + y) * y;
            twice_area += area2;
            span += y;
            senses += u128::from(g);
            let i = k - warmup;
            area_batches.add(i, area2 as f64 / 2.0, ytilde as f64);
            sense_batches.add(i, g as f64, ytilde as f64);
        }
        prev_yhat = yhat;
    }

    let es = cfg.energy.sense;
    let et = cfg.energy.tx;
    let energy_per_batch: Vec<f64> = sense_batches.ratios().iter().map(|r| es * r + et).collect();

    Ok(SimResult {
        estimator: Estimator::Cycle,
        avg_aoi_est: twice_area as f64 / (2.0 * span as f64),
        avg_energy_est: es * (senses as f64 / span as f64) + et,
        stderr_aoi: batch_stderr(&area_batches.ratios()),
        stderr_energy: batch_stderr(&energy_per_batch),
        slots,
        packets_generated: packets,
        successes: cfg.horizon,
        seed: cfg.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{EnergyParams, LinkSpec, Policy};

    fn cfg(p: f64, m: u64) -> SimConfig {
        SimConfig::new(LinkSpec::fixed(p), Policy::new(m).unwrap(), EnergyParams::new(1.0, 1.0).unwrap())
    }

    #[test]
    fn perfect_channel() {
        let r = run_cycle_sim(&cfg(0.0, 4).horizon(50_000)).unwrap();
        assert_eq!(r.avg_aoi_est, 1.5);
        assert_eq!(r.avg_energy_est, 2.0);
        assert_eq!(r.slots, 50_000);
    }

    #[test]
    fn zero_warmup_rejected() {
        assert!(run_cycle_sim(&cfg(0.3, 2).horizon(1000).warmup(0).batches(10)).is_err());
    }

    #[test]
    fn geometric_draw_mean() {
        let mut rng = stream_rng(3, 9);
        let ln_p = 0.4f64.ln();
        let n = 200_000;
        let total: u64 = (0..n).map(|_| draw_cycle(&mut rng, ln_p)).sum();
        let mean = total as f64 / n as f64;
        assert!((mean - 1.0 / 0.6).abs() < 0.01, "{mean}");
    }
}
