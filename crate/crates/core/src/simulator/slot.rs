use rand::distr::{Bernoulli, Distribution};

use super::process::LinkState;
use super::stats::{batch_stderr, RatioBatches};
use super::trace::{AgeTrace, TraceRow};
use super::{stream_rng, Estimator, SimConfig, SimResult, SLOT_STREAM};
use crate::analytic::failure_prob;
use crate::error::Result;

/// Slot-by-slot estimator. The age integral over a slot starting at age `a`
/// is `a + 1/2`; energy per slot is `E_t` plus `E_s` when a packet is sensed.
pub fn run_slot_sim(cfg: &SimConfig) -> Result<SimResult> {
    simulate(cfg, None)
}

/// Same as [`run_slot_sim`] and also records the age at every slot end,
/// warmup included.
pub fn run_slot_sim_traced(cfg: &SimConfig) -> Result<(SimResult, AgeTrace)> {
    let mut trace = AgeTrace {
        rows: Vec::with_capacity(cfg.horizon.min(1 << 24) as usize),
    };
    let res = simulate(cfg, Some(&mut trace))?;
    Ok((res, trace))
}

fn simulate(cfg: &SimConfig, mut trace: Option<&mut AgeTrace>) -> Result<SimResult> {
    let batch_len = cfg.validate()?;
    let p = failure_prob(&cfg.link)?;
    let fail = Bernoulli::new(p).expect("probability validated");
    let mut rng = stream_rng(cfg.seed, SLOT_STREAM);
    let mut state = LinkState::new(cfg.policy.max_tx());
    let warmup = cfg.effective_warmup();
    let window = cfg.horizon - warmup;

    let mut age_batches = RatioBatches::new(cfg.batches, batch_len);
    let mut sense_batches = RatioBatches::new(cfg.batches, batch_len);
    // integer sums keep degenerate cases (p = 0, M = 1) exact
    let mut age_sum: u128 = 0;
    let mut senses: u64 = 0;
    let mut packets = 0u64;
    let mut successes = 0u64;

    for slot in 0..cfg.horizon {
        let out = state.step(fail.sample(&mut rng));
        packets += u64::from(out.sensed);
        successes += u64::from(out.delivered);
        if let Some(t) = trace.as_deref_mut() {
            t.rows.push(TraceRow {
                slot,
                age: out.age_end,
                reset: out.delivered,
            });
        }
        if slot >= warmup {
            let i = slot - warmup;
            age_sum += u128::from(out.age_start);
            senses += u64::from(out.sensed);
            age_batches.add(i, out.age_start as f64 + 0.5, 1.0);
            sense_batches.add(i, if out.sensed { 1.0 } else { 0.0 }, 1.0);
        }
    }

    let n = window as f64;
    let es = cfg.energy.sense;
    let et = cfg.energy.tx;
    let energy_per_batch: Vec<f64> = sense_batches.ratios().iter().map(|r| es * r + et).collect();

    Ok(SimResult {
        estimator: Estimator::Slot,
        avg_aoi_est: age_sum as f64 / n + 0.5,
        avg_energy_est: es * (senses as f64 / n) + et,
        stderr_aoi: batch_stderr(&age_batches.ratios()),
        stderr_energy: batch_stderr(&energy_per_batch),
        slots: cfg.horizon,
        packets_generated: packets,
        successes,
        seed: cfg.seed,
    })
}
