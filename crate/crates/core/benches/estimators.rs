use aoi_tradeoff::analytic::EnergyParams;
use aoi_tradeoff::sweep::{self, CircuitModel, MSweep, PowerSweep, SweepSpec};
use aoi_tradeoff::validate::{run_validation, ValidationConfig};
use aoi_tradeoff::Execution;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn energy() -> EnergyParams {
    let et = 2.1 + 19.2308 * 0.1;
    EnergyParams::new(et, et).unwrap()
}

fn validation(c: &mut Criterion) {
    let cfg = ValidationConfig {
        slots: 100_000,
        cycles: 100_000,
        ..ValidationConfig::default()
    };
    let mut group = c.benchmark_group("validation_grid_1e5");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_validation(black_box(&cfg), exec).unwrap())
        });
    }
    group.finish();
}

fn sweeps(c: &mut Criterion) {
    let m_sweep = SweepSpec::M(MSweep {
        p_list: (1..=19).map(|i| i as f64 * 0.05).collect(),
        max_tx: (1..=64).collect(),
        energy: energy(),
    });
    let power = SweepSpec::Power(PowerSweep {
        dbm_min: -10.0,
        dbm_max: 20.0,
        dbm_step: 0.01,
        max_tx: (1..=16).collect(),
        rate: 2.0,
        snr_ref_db: 20.0,
        p_ref_dbm: 20.0,
        sense_energy: energy().sense,
        circuit: CircuitModel {
            circuit_power: 2.1,
            inv_drain_eff: 19.2308,
            max_power: 0.1,
        },
    });
    for (label, spec) in [("m_sweep", &m_sweep), ("power_sweep", &power)] {
        let mut group = c.benchmark_group(label);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
                b.iter(|| sweep::run(black_box(spec), exec).unwrap())
            });
        }
        group.finish();
    }
}

criterion_group!(benches, validation, sweeps);
criterion_main!(benches);
