//! EDF statistics: Anderson-Darling, Cramer-von Mises and Lilliefors.

use super::{sorted_for, TestKind, TestOutcome};
use crate::error::Result;
use crate::stats::{mean_sd, phi, phi_upper};

const P_CLAMP: f64 = 1e-15;

/// Fitted-normal probabilities p_(i) = Φ((x_(i) − x̄)/s) and their
/// complements, both clamped away from 0 and 1.
fn fitted_probabilities(sorted: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let (mean, sd) = mean_sd(sorted)?;
    let mut lower = Vec::with_capacity(sorted.len());
    let mut upper = Vec::with_capacity(sorted.len());
    for &x in sorted {
        let z = (x - mean) / sd;
        lower.push(phi(z).clamp(P_CLAMP, 1.0 - P_CLAMP));
        upper.push(phi_upper(z).clamp(P_CLAMP, 1.0 - P_CLAMP));
    }
    Ok((lower, upper))
}

pub fn anderson_darling(values: &[f64]) -> Result<TestOutcome> {
    let sorted = sorted_for(TestKind::AndersonDarling, values)?;
    anderson_darling_sorted(sorted.values())
}

pub(crate) fn anderson_darling_sorted(x: &[f64]) -> Result<TestOutcome> {
    let (p, q) = fitted_probabilities(x)?;
    let n = x.len();
    let nf = n as f64;
    let sum: f64 = (0..n)
        .map(|i| (2 * i + 1) as f64 * (p[i].ln() + q[n - 1 - i].ln()))
        .sum();
    let a2 = (-nf - sum / nf).max(0.0);
    Ok(TestOutcome {
        kind: TestKind::AndersonDarling,
        statistic: a2,
        p_value: None,
    })
}

pub fn cramer_von_mises(values: &[f64]) -> Result<TestOutcome> {
    let sorted = sorted_for(TestKind::CramerVonMises, values)?;
    cramer_von_mises_sorted(sorted.values())
}

pub(crate) fn cramer_von_mises_sorted(x: &[f64]) -> Result<TestOutcome> {
    let (p, _) = fitted_probabilities(x)?;
    let nf = x.len() as f64;
    let ss: f64 = p
        .iter()
        .enumerate()
        .map(|(i, &pi)| {
            let d = pi - (2 * i + 1) as f64 / (2.0 * nf);
            d * d
        })
        .sum();
    Ok(TestOutcome {
        kind: TestKind::CramerVonMises,
        statistic: 1.0 / (12.0 * nf) + ss,
        p_value: None,
    })
}

pub fn lilliefors(values: &[f64]) -> Result<TestOutcome> {
    let sorted = sorted_for(TestKind::Lilliefors, values)?;
    lilliefors_sorted(sorted.values())
}

pub(crate) fn lilliefors_sorted(x: &[f64]) -> Result<TestOutcome> {
    let (p, _) = fitted_probabilities(x)?;
    let nf = x.len() as f64;
    let mut d_plus = f64::NEG_INFINITY;
    let mut d_minus = f64::NEG_INFINITY;
    for (i, &pi) in p.iter().enumerate() {
        d_plus = d_plus.max((i + 1) as f64 / nf - pi);
        d_minus = d_minus.max(pi - i as f64 / nf);
    }
    Ok(TestOutcome {
        kind: TestKind::Lilliefors,
        statistic: d_plus.max(d_minus),
        p_value: None,
    })
}
