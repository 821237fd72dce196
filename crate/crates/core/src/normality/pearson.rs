use super::{sorted_for, TestKind, TestOutcome};
use crate::error::Result;
use crate::stats::{mean_sd, phi};

/// Number of equiprobable classes, ceil(2 n^0.4).
pub fn pearson_class_count(n: usize) -> usize {
    (2.0 * (n as f64).powf(0.4)).ceil() as usize
}

/// Pearson chi-square against k equiprobable classes of the fitted
/// N(x̄, s²). Classes are left-closed and right-open, the last one closed.
pub fn pearson_chisq(values: &[f64]) -> Result<TestOutcome> {
    let sorted = sorted_for(TestKind::PearsonChiSquare, values)?;
    pearson_sorted(sorted.values())
}

pub(crate) fn pearson_sorted(x: &[f64]) -> Result<TestOutcome> {
    let (mean, sd) = mean_sd(x)?;
    let k = pearson_class_count(x.len());
    let mut counts = vec![0usize; k];
    for &v in x {
        let p = phi((v - mean) / sd);
        let class = ((k as f64 * p).floor() as usize).min(k - 1);
        counts[class] += 1;
    }
    Ok(TestOutcome {
        kind: TestKind::PearsonChiSquare,
        statistic: chi_square(&counts, x.len()),
        p_value: None,
    })
}

fn chi_square(counts: &[usize], n: usize) -> f64 {
    let expected = n as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum()
}
