//! Tradeoff curves over the retransmission limit, the transmit power and the
//! sensing energy. Every point is an exact closed-form evaluation.

mod pareto;

use serde::{Deserialize, Serialize};

use crate::analytic::{
    dbm_to_watts, noise_from_reference_snr, transmit_energy, EnergyParams, LinkSpec, MetricPoint, Policy,
    PowerModel,
};
use crate::error::{Error, Result};
use crate::exec::Execution;

pub use pareto::pareto_front;

/// Fixed failure probabilities, one curve per `p`, points over `M`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MSweep {
    pub p_list: Vec<f64>,
    pub max_tx: Vec<u64>,
    pub energy: EnergyParams,
}

/// Power model without the transmit power, which is the swept variable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitModel {
    pub circuit_power: f64,
    pub inv_drain_eff: f64,
    pub max_power: f64,
}

impl CircuitModel {
    /// Transmit energy at full power, `P_c + eta * P_max`.
    pub fn full_power_energy(&self) -> f64 {
        self.circuit_power + self.inv_drain_eff * self.max_power
    }

    fn at(&self, transmit_power: f64) -> PowerModel {
        PowerModel {
            circuit_power: self.circuit_power,
            inv_drain_eff: self.inv_drain_eff,
            transmit_power,
            max_power: self.max_power,
        }
    }
}

/// Rayleigh link with transmit power on a dBm grid, one curve per `M`.
/// The noise power is fixed by the SNR `snr_ref_db` seen at `p_ref_dbm`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSweep {
    pub dbm_min: f64,
    pub dbm_max: f64,
    pub dbm_step: f64,
    pub max_tx: Vec<u64>,
    pub rate: f64,
    pub snr_ref_db: f64,
    pub p_ref_dbm: f64,
    pub sense_energy: f64,
    pub circuit: CircuitModel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SweepBase {
    M(MSweep),
    Power(PowerSweep),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub enum Normalizer {
    Fixed(f64),
    /// `E_s` of the curve plus the reference transmit energy: `E_t` for an
    /// M-sweep, `P_c + eta * P_max` for a power sweep.
    #[default]
    SensePlusReference,
}

/// Repeats a base sweep for each sensing energy and normalizes each curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EsSweep {
    pub es_list: Vec<f64>,
    pub base: SweepBase,
    pub normalizer: Normalizer,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SweepSpec {
    M(MSweep),
    Power(PowerSweep),
    Es(EsSweep),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TradeoffCurve {
    pub label: String,
    /// Ordered by the swept parameter, ascending.
    pub points: Vec<MetricPoint>,
    /// Energies are reported divided by this factor; 1 when unnormalized.
    pub normalizer: f64,
}

impl TradeoffCurve {
    pub fn normalized_energy(&self, point: &MetricPoint) -> f64 {
        point.avg_energy / self.normalizer
    }

    pub fn normalized_energies(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|pt| self.normalized_energy(pt))
    }
}

pub fn run(spec: &SweepSpec, exec: Execution) -> Result<Vec<TradeoffCurve>> {
    match spec {
        SweepSpec::M(s) => m_sweep(s, exec),
        SweepSpec::Power(s) => power_sweep(s, exec),
        SweepSpec::Es(s) => es_sweep(s, exec),
    }
}

fn sorted_max_tx(list: &[u64]) -> Result<Vec<u64>> {
    if list.is_empty() {
        return Err(Error::InvalidSpec("M list is empty".into()));
    }
    if list.contains(&0) {
        return Err(Error::InvalidSpec("M values must be >= 1".into()));
    }
    let mut out = list.to_vec();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn m_sweep(spec: &MSweep, exec: Execution) -> Result<Vec<TradeoffCurve>> {
    if spec.p_list.is_empty() {
        return Err(Error::InvalidSpec("p list is empty".into()));
    }
    let ms = sorted_max_tx(&spec.max_tx)?;
    spec.energy.validate()?;

    let jobs: Vec<(f64, u64)> = spec
        .p_list
        .iter()
        .flat_map(|&p| ms.iter().map(move |&m| (p, m)))
        .collect();
    let energy = spec.energy;
    let points = exec
        .map(&jobs, |&(p, m)| MetricPoint::evaluate(LinkSpec::fixed(p), Policy::new(m)?, energy))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    Ok(spec
        .p_list
        .iter()
        .zip(points.chunks(ms.len()))
        .map(|(p, chunk)| TradeoffCurve {
            label: format!("p={p}"),
            points: chunk.to_vec(),
            normalizer: 1.0,
        })
        .collect())
}

/// Inclusive dBm grid `min, min + step, ...` built in dB space.
pub fn power_grid(dbm_min: f64, dbm_max: f64, dbm_step: f64) -> Result<Vec<f64>> {
    if !(dbm_min.is_finite() && dbm_max.is_finite()) {
        return Err(Error::InvalidSpec("power range must be finite".into()));
    }
    if !(dbm_step.is_finite() && dbm_step > 0.0) {
        return Err(Error::InvalidSpec(format!("dbm_step must be > 0, got {dbm_step}")));
    }
    if dbm_min > dbm_max {
        return Err(Error::InvalidSpec(format!("dbm_min {dbm_min} exceeds dbm_max {dbm_max}")));
    }
    let count = ((dbm_max - dbm_min) / dbm_step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| dbm_min + i as f64 * dbm_step).collect())
}

pub fn power_sweep(spec: &PowerSweep, exec: Execution) -> Result<Vec<TradeoffCurve>> {
    let grid = power_grid(spec.dbm_min, spec.dbm_max, spec.dbm_step)?;
    if spec.max_tx.is_empty() {
        return Err(Error::InvalidSpec("M list is empty".into()));
    }
    if spec.max_tx.contains(&0) {
        return Err(Error::InvalidSpec("M values must be >= 1".into()));
    }
    let noise = noise_from_reference_snr(dbm_to_watts(spec.p_ref_dbm), spec.snr_ref_db)?;

    let jobs: Vec<(u64, f64)> = spec
        .max_tx
        .iter()
        .flat_map(|&m| grid.iter().map(move |&d| (m, d)))
        .collect();
    let points = exec
        .map(&jobs, |&(m, dbm)| {
            let pt = dbm_to_watts(dbm);
            let et = transmit_energy(&spec.circuit.at(pt))?;
            let energy = EnergyParams::new(spec.sense_energy, et)?;
            let link = LinkSpec::rayleigh(spec.rate, noise, pt);
            Ok(MetricPoint::evaluate(link, Policy::new(m)?, energy)?.with_pt_dbm(dbm))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    Ok(spec
        .max_tx
        .iter()
        .zip(points.chunks(grid.len()))
        .map(|(m, chunk)| TradeoffCurve {
            label: format!("M={m}"),
            points: chunk.to_vec(),
            normalizer: 1.0,
        })
        .collect())
}

pub fn es_sweep(spec: &EsSweep, exec: Execution) -> Result<Vec<TradeoffCurve>> {
    if spec.es_list.is_empty() {
        return Err(Error::InvalidSpec("E_s list is empty".into()));
    }
    let mut curves = Vec::new();
    for &es in &spec.es_list {
        let (base_curves, reference) = match &spec.base {
            SweepBase::M(m) => {
                let s = MSweep {
                    energy: EnergyParams::new(es, m.energy.tx)?,
                    ..m.clone()
                };
                (m_sweep(&s, exec)?, m.energy.tx)
            }
            SweepBase::Power(pw) => {
                let s = PowerSweep {
                    sense_energy: es,
                    ..pw.clone()
                };
                (power_sweep(&s, exec)?, pw.circuit.full_power_energy())
            }
        };
        let factor = match spec.normalizer {
            Normalizer::Fixed(x) => x,
            Normalizer::SensePlusReference => es + reference,
        };
        for mut c in base_curves {
            c.label = format!("Es={es} {}", c.label);
            curves.push(normalize_curve(&c, factor)?);
        }
    }
    Ok(curves)
}

/// Divides the curve's energies by `factor` on top of any earlier
/// normalization. Ages are untouched.
pub fn normalize_curve(curve: &TradeoffCurve, factor: f64) -> Result<TradeoffCurve> {
    if !(factor.is_finite() && factor > 0.0) {
        return Err(Error::param("normalizer", factor, "must be finite and > 0"));
    }
    Ok(TradeoffCurve {
        label: format!("{} /{factor}", curve.label),
        points: curve.points.clone(),
        normalizer: curve.normalizer * factor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ET: f64 = 4.02308;

    fn reference_power_sweep(ms: Vec<u64>) -> PowerSweep {
        PowerSweep {
            dbm_min: 2.0,
            dbm_max: 20.0,
            dbm_step: 3.0,
            max_tx: ms,
            rate: 2.0,
            snr_ref_db: 20.0,
            p_ref_dbm: 20.0,
            sense_energy: ET,
            circuit: CircuitModel {
                circuit_power: 2.1,
                inv_drain_eff: 19.2308,
                max_power: dbm_to_watts(20.0),
            },
        }
    }

    #[test]
    fn m_sweep_endpoints() {
        let spec = MSweep {
            p_list: vec![0.4],
            max_tx: (1..=6).collect(),
            energy: EnergyParams::new(ET, ET).unwrap(),
        };
        let curves = m_sweep(&spec, Execution::Sequential).unwrap();
        assert_eq!(curves.len(), 1);
        let pts = &curves[0].points;
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0].avg_energy, 2.0 * ET);
        assert!((pts[0].avg_aoi - 2.1666666666666667).abs() < 1e-12);
        assert!((pts[5].avg_energy - 6.446855785617891).abs() < 1e-12);
        assert!((pts[5].avg_aoi - 2.808656256024677).abs() < 1e-12);
    }

    #[test]
    fn m_sweep_sorts_and_rejects_empty() {
        let e = EnergyParams::new(1.0, 1.0).unwrap();
        let spec = MSweep {
            p_list: vec![0.2],
            max_tx: vec![3, 1, 2, 3],
            energy: e,
        };
        let c = m_sweep(&spec, Execution::Sequential).unwrap();
        let ms: Vec<u64> = c[0].points.iter().map(|p| p.max_tx).collect();
        assert_eq!(ms, vec![1, 2, 3]);

        let empty = MSweep {
            p_list: vec![],
            ..spec.clone()
        };
        assert!(matches!(m_sweep(&empty, Execution::Sequential), Err(Error::InvalidSpec(_))));
        let zero = MSweep {
            max_tx: vec![0, 1],
            ..spec
        };
        assert!(m_sweep(&zero, Execution::Sequential).is_err());
    }

    #[test]
    fn power_sweep_reference_grid() {
        let curves = power_sweep(&reference_power_sweep(vec![6]), Execution::Sequential).unwrap();
        let pts = &curves[0].points;
        assert_eq!(pts.len(), 7);
        assert_eq!(pts[0].pt_dbm, Some(2.0));
        let top = pts.last().unwrap();
        assert_eq!(top.pt_dbm, Some(20.0));
        // values evaluated at 40 digits from the closed forms
        assert!((top.p - 0.029554466451491823).abs() < 1e-12);
        assert!((top.avg_aoi - 1.5609090639085992).abs() < 1e-10);
        assert!((top.avg_energy - 7.927_260_019_710_1).abs() < 1e-10);
        assert!((pts[0].avg_aoi - 9.169854949631159).abs() < 1e-9);
        assert!((pts[0].avg_energy - 3.1008311628061866).abs() < 1e-9);
        for w in pts.windows(2) {
            assert!(w[1].avg_aoi < w[0].avg_aoi);
            assert!(w[1].avg_energy > w[0].avg_energy);
        }
    }

    #[test]
    fn power_grid_rules() {
        assert_eq!(power_grid(2.0, 20.0, 3.0).unwrap().len(), 7);
        assert_eq!(power_grid(0.0, 1.0, 0.1).unwrap().len(), 11);
        assert_eq!(power_grid(5.0, 5.0, 1.0).unwrap(), vec![5.0]);
        assert_eq!(power_grid(0.0, 10.0, 4.0).unwrap(), vec![0.0, 4.0, 8.0]);
        assert!(power_grid(20.0, 2.0, 3.0).is_err());
        assert!(power_grid(2.0, 20.0, 0.0).is_err());
        let mut bad = reference_power_sweep(vec![6]);
        bad.dbm_min = 25.0;
        assert!(power_sweep(&bad, Execution::Sequential).is_err());
    }

    #[test]
    fn normalization() {
        let spec = MSweep {
            p_list: vec![0.4],
            max_tx: vec![1, 6],
            energy: EnergyParams::new(ET, ET).unwrap(),
        };
        let c = &m_sweep(&spec, Execution::Sequential).unwrap()[0];
        let n = normalize_curve(c, 2.0 * ET).unwrap();
        let e: Vec<f64> = n.normalized_energies().collect();
        assert_eq!(e[0], 1.0);
        assert!(e[1] > 0.0 && e[1] < 1.0);
        assert_eq!(n.points[0].avg_aoi, c.points[0].avg_aoi);
        assert!(normalize_curve(c, 0.0).is_err());
        assert!(normalize_curve(c, -1.0).is_err());
        assert!((6.44709f64 / 8.04616 - 0.80126).abs() < 5e-6);
    }

    #[test]
    fn zero_sense_energy_curve_is_flat_after_normalization() {
        let spec = EsSweep {
            es_list: vec![0.0, 2.0, 8.0],
            base: SweepBase::M(MSweep {
                p_list: vec![0.4],
                max_tx: (1..=6).collect(),
                energy: EnergyParams::new(ET, ET).unwrap(),
            }),
            normalizer: Normalizer::SensePlusReference,
        };
        let curves = es_sweep(&spec, Execution::Sequential).unwrap();
        assert_eq!(curves.len(), 3);
        assert!(curves[0].normalized_energies().all(|e| e == 1.0));
        for c in &curves {
            let first = c.normalized_energies().next().unwrap();
            assert_eq!(first, 1.0, "{}", c.label);
        }
    }

    #[test]
    fn es_sweep_over_power() {
        let spec = EsSweep {
            es_list: vec![0.0, ET],
            base: SweepBase::Power(reference_power_sweep(vec![6])),
            normalizer: Normalizer::SensePlusReference,
        };
        let curves = es_sweep(&spec, Execution::Sequential).unwrap();
        assert_eq!(curves.len(), 2);
        assert_eq!(curves[1].normalizer, 2.0 * ET);
        // with E_s = 0 power control still moves the energy
        let e: Vec<f64> = curves[0].normalized_energies().collect();
        assert!(e.windows(2).all(|w| w[1] > w[0]));
        assert!(e.iter().all(|&x| x > 0.0 && x <= 1.0 + 1e-12));
    }

    #[test]
    fn parallel_matches_sequential() {
        let spec = SweepSpec::Power(reference_power_sweep(vec![1, 2, 3, 6]));
        assert_eq!(
            run(&spec, Execution::Sequential).unwrap(),
            run(&spec, Execution::Parallel).unwrap()
        );
    }
}
