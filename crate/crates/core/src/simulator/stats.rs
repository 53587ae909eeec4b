/// Standard error of the mean of per-batch estimates.
pub(crate) fn batch_stderr(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    // shifted by the first value: constant input gives exactly zero
    let shift = values[0];
    let sum: f64 = values.iter().map(|v| v - shift).sum();
    let sum_sq: f64 = values.iter().map(|v| (v - shift).powi(2)).sum();
    let var = ((sum_sq - sum * sum / n as f64) / (n - 1) as f64).max(0.0);
    (var / n as f64).sqrt()
}

/// Numerator/denominator sums over contiguous equal windows of samples.
/// Samples past the last full window are ignored.
#[derive(Debug)]
pub(crate) struct RatioBatches {
    len: u64,
    num: Vec<f64>,
    den: Vec<f64>,
}

impl RatioBatches {
    pub(crate) fn new(batches: u64, len: u64) -> Self {
        RatioBatches {
            len,
            num: vec![0.0; batches as usize],
            den: vec![0.0; batches as usize],
        }
    }

    #[inline]
    pub(crate) fn add(&mut self, index: u64, num: f64, den: f64) {
        let b = (index / self.len) as usize;
        if b < self.num.len() {
            self.num[b] += num;
            self.den[b] += den;
        }
    }

    pub(crate) fn ratios(&self) -> Vec<f64> {
        self.num.iter().zip(&self.den).map(|(n, d)| n / d).collect()
    }
}
