//! Distributions of the success-cycle length, the per-packet transmission
//! count and the per-cycle sensing count, with their moments and the
//! resulting average age and energy.
//!
//! Notation used in the docs below: `Ỹ` is the number of slots between two
//! consecutive successful receptions, `Ŷ` the number of transmissions spent
//! on the packet that was finally received, and `g` the number of packets
//! sensed within one success cycle.

use super::{check_max_tx, check_probability, EnergyParams};
use crate::error::Result;

fn check(p: f64, max_tx: u64) -> Result<()> {
    check_probability(p)?;
    check_max_tx(max_tx)
}

/// `1 - p^n` without cancellation for `p` close to one.
///
/// Evaluated as `-expm1(n ln p)`; at `p = 0` this is exactly 1.
pub fn one_minus_pow(p: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    -(n as f64 * p.ln()).exp_m1()
}

/// `(1 - p) / (1 - p^M)`, the long-run number of sensing events per slot.
/// Exactly 1 at `M = 1`.
fn delivery_ratio(p: f64, max_tx: u64) -> f64 {
    if max_tx == 1 {
        1.0
    } else {
        (1.0 - p) / one_minus_pow(p, max_tx)
    }
}

/// `P(Ỹ = m) = p^(m-1) (1 - p)`, zero outside `m >= 1`.
pub fn ytilde_pmf(m: u64, p: f64) -> Result<f64> {
    check_probability(p)?;
    if m == 0 {
        return Ok(0.0);
    }
    Ok(p.powf((m - 1) as f64) * (1.0 - p))
}

/// Mean and second moment of `Ỹ`.
pub fn interval_moments(p: f64) -> Result<(f64, f64)> {
    check_probability(p)?;
    let q = 1.0 - p;
    Ok((1.0 / q, (1.0 + p) / (q * q)))
}

/// `P(Ŷ = m) = (1 - p) p^(m-1) / (1 - p^M)` on `{1, ..., M}`, zero elsewhere.
pub fn yhat_pmf(m: u64, p: f64, max_tx: u64) -> Result<f64> {
    check(p, max_tx)?;
    if m == 0 || m > max_tx {
        return Ok(0.0);
    }
    Ok(delivery_ratio(p, max_tx) * p.powf((m - 1) as f64))
}

/// `E[Ŷ] = 1/(1-p) - M p^M / (1 - p^M)`.
///
/// The closed form subtracts two numbers of size `1/(1-p)` while the result
/// is at most `M`; when `(M + 1)(1 - p)` is small the truncated pmf is summed
/// directly instead.
pub fn yhat_mean(p: f64, max_tx: u64) -> Result<f64> {
    check(p, max_tx)?;
    if max_tx == 1 {
        return Ok(1.0);
    }
    let q = 1.0 - p;
    if (max_tx as f64 + 1.0) * q < 0.125 {
        // Horner on sum_{m=1..M} m p^(m-1)
        let mut acc = max_tx as f64;
        for m in (1..max_tx).rev() {
            acc = acc * p + m as f64;
        }
        return Ok(acc * delivery_ratio(p, max_tx));
    }
    let m = max_tx as f64;
    Ok(1.0 / q - m * p.powf(m) / one_minus_pow(p, max_tx))
}

/// `P(g = l) = p^((l-1) M) (1 - p^M)`, zero outside `l >= 1`.
pub fn sense_count_pmf(l: u64, p: f64, max_tx: u64) -> Result<f64> {
    check(p, max_tx)?;
    if l == 0 {
        return Ok(0.0);
    }
    let exponent = (l - 1) as f64 * max_tx as f64;
    Ok(p.powf(exponent) * one_minus_pow(p, max_tx))
}

/// `E[g] = 1 / (1 - p^M)`.
pub fn sense_count_mean(p: f64, max_tx: u64) -> Result<f64> {
    check(p, max_tx)?;
    Ok(1.0 / one_minus_pow(p, max_tx))
}

/// Average age of information in slots:
/// `(3 + p) / (2 (1 - p)) - M p^M / (1 - p^M)`.
pub fn avg_aoi(p: f64, max_tx: u64) -> Result<f64> {
    check(p, max_tx)?;
    let m = max_tx as f64;
    let q = 1.0 - p;
    Ok((3.0 + p) / (2.0 * q) - m * p.powf(m) / one_minus_pow(p, max_tx))
}

/// Average energy per slot: `(1 - p) / (1 - p^M) E_s + E_t`.
pub fn avg_energy(p: f64, max_tx: u64, energy: &EnergyParams) -> Result<f64> {
    check(p, max_tx)?;
    energy.validate()?;
    Ok(delivery_ratio(p, max_tx) * energy.sense + energy.tx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    // Reference values below were evaluated at 40 significant digits.
    const ET: f64 = 4.02308;

    #[test]
    fn ytilde_examples() {
        assert_eq!(ytilde_pmf(1, 0.4).unwrap(), 0.6);
        assert!((ytilde_pmf(3, 0.4).unwrap() - 0.096).abs() < 1e-15);
        assert_eq!(ytilde_pmf(0, 0.4).unwrap(), 0.0);
        assert_eq!(ytilde_pmf(1, 0.0).unwrap(), 1.0);
        assert_eq!(ytilde_pmf(2, 0.0).unwrap(), 0.0);
        assert!(ytilde_pmf(1, 1.0).is_err());
    }

    #[test]
    fn interval_moment_examples() {
        assert_eq!(interval_moments(0.0).unwrap(), (1.0, 1.0));
        let (m1, m2) = interval_moments(0.4).unwrap();
        assert!(rel(m1, 1.0 / 0.6) < 1e-15 && rel(m2, 1.4 / 0.36) < 1e-15);
        assert_eq!(interval_moments(0.5).unwrap(), (2.0, 6.0));
    }

    #[test]
    fn yhat_examples() {
        for &p in &[0.0, 0.3, 0.9] {
            assert_eq!(yhat_pmf(1, p, 1).unwrap(), 1.0);
            assert_eq!(yhat_mean(p, 1).unwrap(), 1.0);
        }
        assert!((yhat_pmf(2, 0.4, 3).unwrap() - 0.24 / 0.936).abs() < 1e-15);
        assert_eq!(yhat_pmf(4, 0.4, 3).unwrap(), 0.0);
        assert_eq!(yhat_pmf(0, 0.4, 3).unwrap(), 0.0);
        let total: f64 = (1..=5).map(|m| yhat_pmf(m, 0.7, 5).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-12);

        assert!(rel(yhat_mean(0.4, 6).unwrap(), 1.641_989_589_358_010_3) < 1e-14);
        assert_eq!(yhat_mean(0.0, 10).unwrap(), 1.0);
        assert!(yhat_mean(0.4, 0).is_err());
    }

    #[test]
    fn sense_count_examples() {
        assert!((sense_count_pmf(1, 0.4, 3).unwrap() - 0.936).abs() < 1e-15);
        assert!((sense_count_pmf(2, 0.4, 3).unwrap() - 0.059904).abs() < 1e-15);
        for m in [1, 4, 100] {
            assert_eq!(sense_count_pmf(1, 0.0, m).unwrap(), 1.0);
            assert_eq!(sense_count_mean(0.0, m).unwrap(), 1.0);
        }
        assert!(rel(sense_count_mean(0.4, 3).unwrap(), 1.0 / 0.936) < 1e-15);
        assert!(rel(sense_count_mean(0.4, 6).unwrap(), 1.0 / 0.995904) < 1e-15);
    }

    #[test]
    fn avg_aoi_examples() {
        for m in [1, 2, 50] {
            assert_eq!(avg_aoi(0.0, m).unwrap(), 1.5);
        }
        assert!(rel(avg_aoi(0.4, 1).unwrap(), 2.6 / 1.2) < 1e-15);
        assert!(rel(avg_aoi(0.4, 6).unwrap(), 2.808_656_256_024_677) < 1e-14);
        let delta = avg_aoi(0.4, 6).unwrap() - avg_aoi(0.4, 1).unwrap();
        assert!((delta - 0.64).abs() < 0.005, "{delta}");
    }

    #[test]
    fn avg_energy_examples() {
        let e = EnergyParams::new(ET, ET).unwrap();
        for &p in &[0.0, 0.1, 0.4, 0.9] {
            assert_eq!(avg_energy(p, 1, &e).unwrap(), ET + ET);
        }
        let e6 = avg_energy(0.4, 6, &e).unwrap();
        assert!(rel(e6, 6.446_855_785_617_891) < 1e-14, "{e6}");
        assert!(((2.0 * ET - e6) - 1.6).abs() < 0.005);
        let zero_sense = EnergyParams::new(0.0, 1.0).unwrap();
        assert_eq!(avg_energy(0.4, 3, &zero_sense).unwrap(), 1.0);
    }

    #[test]
    fn one_minus_pow_near_one() {
        // binomial series 1 - (1-q)^M = sum_k (-1)^(k+1) C(M,k) q^k with exact q
        fn series(q: f64, m: u64) -> f64 {
            let mut term = 1.0;
            let mut sum = 0.0;
            for k in 1..=60u64 {
                if k > m {
                    break;
                }
                term *= (m - k + 1) as f64 / k as f64 * q;
                let signed = if k % 2 == 1 { term } else { -term };
                sum += signed;
                if term < 1e-30 * sum.abs() {
                    break;
                }
            }
            sum
        }
        for &q in &[1e-9, 1e-7, 1e-5] {
            let p = 1.0 - q;
            let q_exact = 1.0 - p;
            for &m in &[1u64, 2, 7, 100, 1000, 100_000, 1_000_000] {
                if m as f64 * q_exact > 0.5 {
                    continue;
                }
                let got = one_minus_pow(p, m);
                let want = series(q_exact, m);
                assert!(rel(got, want) < 1e-12, "q={q} m={m} got={got} want={want}");
            }
        }
    }

    #[test]
    fn yhat_mean_near_one_stays_accurate() {
        // Direct summation oracle in extended steps: sum m p^(m-1) (1-p) / (1 - p^M)
        for &(p, m) in &[(1.0f64 - 1e-9, 3u64), (1.0 - 1e-6, 50), (0.999, 20), (0.99, 12)] {
            let norm: f64 = (1..=m).map(|k| p.powf((k - 1) as f64)).sum();
            let mean: f64 = (1..=m).map(|k| k as f64 * p.powf((k - 1) as f64)).sum::<f64>() / norm;
            assert!(rel(yhat_mean(p, m).unwrap(), mean) < 1e-12, "p={p} m={m}");
        }
    }
}
