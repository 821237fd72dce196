use super::{sorted_for, TestKind, TestOutcome};
use crate::error::Result;
use crate::stats::moments;

/// LM = (n/6)[S² + (K − 3)²/4]; p-value from the chi-square(2) tail,
/// which is exactly exp(−LM/2).
pub fn jarque_bera(values: &[f64]) -> Result<TestOutcome> {
    let sorted = sorted_for(TestKind::JarqueBera, values)?;
    jarque_bera_values(sorted.values())
}

pub(crate) fn jarque_bera_values(x: &[f64]) -> Result<TestOutcome> {
    let m = moments(x)?;
    let n = x.len() as f64;
    let excess = m.kurtosis - 3.0;
    let lm = n / 6.0 * (m.skewness * m.skewness + excess * excess / 4.0);
    Ok(TestOutcome {
        kind: TestKind::JarqueBera,
        statistic: lm,
        p_value: Some((-lm / 2.0).exp()),
    })
}
