//! Shapiro-Francia W′ with Blom scores and Royston's (1993) log-normal
//! approximation for the p-value.

use super::{sorted_for, TestKind, TestOutcome};
use crate::error::{Error, Result};
use crate::stats::{is_constant, phi_inv, phi_upper};

/// Centered Blom scores Φ⁻¹((i − 0.375)/(n + 0.25)) for one sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapiroFranciaScores {
    centered: Vec<f64>,
    sum_sq: f64,
}

impl ShapiroFranciaScores {
    pub fn new(n: usize) -> Result<Self> {
        TestKind::ShapiroFrancia.check_size(n)?;
        let an25 = n as f64 + 0.25;
        let w: Vec<f64> = (1..=n)
            .map(|i| phi_inv((i as f64 - 0.375) / an25))
            .collect();
        // Σw is zero by symmetry; center anyway so rounding cannot leak in.
        let mean = w.iter().sum::<f64>() / n as f64;
        let centered: Vec<f64> = w.iter().map(|v| v - mean).collect();
        let sum_sq = centered.iter().map(|v| v * v).sum();
        Ok(ShapiroFranciaScores { centered, sum_sq })
    }

    pub fn scores(&self) -> &[f64] {
        &self.centered
    }

    pub fn test(&self, x: &[f64]) -> Result<TestOutcome> {
        let n = self.centered.len();
        if x.len() != n {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: n,
            });
        }
        if is_constant(x) {
            return Err(Error::DegenerateSample);
        }
        let mean = x.iter().sum::<f64>() / n as f64;
        let (mut sxx, mut sxw) = (0.0, 0.0);
        for (&xi, &wi) in x.iter().zip(&self.centered) {
            let d = xi - mean;
            sxx += d * d;
            sxw += d * wi;
        }
        if !(sxx > 0.0) {
            return Err(Error::DegenerateSample);
        }
        let w = (sxw * sxw / (sxx * self.sum_sq)).clamp(f64::MIN_POSITIVE, 1.0);
        Ok(TestOutcome {
            kind: TestKind::ShapiroFrancia,
            statistic: w,
            p_value: Some(p_value(w, n)),
        })
    }
}

fn p_value(w: f64, n: usize) -> f64 {
    if w >= 1.0 {
        return 1.0;
    }
    let u = (n as f64).ln();
    let v = u.ln();
    let mu = -1.2725 + 1.0521 * (v - u);
    let sigma = 1.0308 - 0.26758 * (v + 2.0 / u);
    phi_upper(((1.0 - w).ln() - mu) / sigma).clamp(0.0, 1.0)
}

pub fn shapiro_francia(values: &[f64]) -> Result<TestOutcome> {
    let sorted = sorted_for(TestKind::ShapiroFrancia, values)?;
    ShapiroFranciaScores::new(sorted.len())?.test(sorted.values())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blom_scores_as_data_give_one() {
        // With x_i = w_i the statistic is (wᵀw)²/((wᵀw)(wᵀw)) = 1.
        for n in [5, 9, 30, 200] {
            let scores = ShapiroFranciaScores::new(n).unwrap();
            let out = scores.test(scores.scores()).unwrap();
            assert!((out.statistic - 1.0).abs() < 1e-14, "n = {n}");
            assert_eq!(out.p_value, Some(1.0));
        }
    }

    #[test]
    fn closed_form_on_perturbed_scores() {
        let n = 12;
        let scores = ShapiroFranciaScores::new(n).unwrap();
        let mut x: Vec<f64> = scores.scores().to_vec();
        x[n - 1] += 1.0;
        // Direct evaluation of (a*ᵀx)²/((n−1)s²).
        let w = scores.scores();
        let wtw: f64 = w.iter().map(|v| v * v).sum();
        let mean = x.iter().sum::<f64>() / n as f64;
        let num: f64 = w.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>().powi(2) / wtw;
        let den: f64 = x.iter().map(|v| (v - mean).powi(2)).sum();
        let out = scores.test(&x).unwrap();
        assert!((out.statistic - num / den).abs() < 1e-13);
    }

    #[test]
    fn needs_five_observations() {
        assert!(matches!(
            shapiro_francia(&[1.0, 2.0, 3.0, 5.0]),
            Err(Error::UnsupportedSize { .. })
        ));
    }
}
