//! Shapiro-Wilk W with Royston's (1995, AS R94) approximations for the
//! coefficients and the null distribution, valid for 3 <= n <= 5000.

use std::f64::consts::FRAC_1_SQRT_2;

use super::{sorted_for, TestKind, TestOutcome};
use crate::error::{Error, Result};
use crate::stats::{is_constant, phi_inv, phi_upper};

const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const C3: [f64; 4] = [0.5440, -0.39978, 0.025054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];
const G: [f64; 2] = [-2.273, 0.459];

/// Coefficients a_1..a_{n/2} for one sample size. The upper half of the
/// antisymmetric coefficient vector; for odd n the median gets weight 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapiroWilkCoefficients {
    n: usize,
    half: Vec<f64>,
}

/// Horner evaluation with `c[0]` the constant term.
fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

impl ShapiroWilkCoefficients {
    pub fn new(n: usize) -> Result<Self> {
        TestKind::ShapiroWilk.check_size(n)?;
        let nn2 = n / 2;
        if n == 3 {
            return Ok(ShapiroWilkCoefficients {
                n,
                half: vec![FRAC_1_SQRT_2],
            });
        }
        let an = n as f64;
        let an25 = an + 0.25;
        // m_i: Blom-type approximations to expected normal order statistics,
        // lower half (negative values).
        let m: Vec<f64> = (1..=nn2)
            .map(|i| phi_inv((i as f64 - 0.375) / an25))
            .collect();
        let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
        let ssumm2 = summ2.sqrt();
        let rsn = 1.0 / an.sqrt();
        let a1 = poly(&C1, rsn) - m[0] / ssumm2;

        let mut half = vec![0.0; nn2];
        let (first_scaled, fac) = if n > 5 {
            let a2 = -m[1] / ssumm2 + poly(&C2, rsn);
            let fac = ((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1])
                / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2))
                .sqrt();
            half[1] = a2;
            (2, fac)
        } else {
            let fac = ((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
            (1, fac)
        };
        half[0] = a1;
        for i in first_scaled..nn2 {
            half[i] = -m[i] / fac;
        }
        Ok(ShapiroWilkCoefficients { n, half })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coefficient a_i for the i-th order statistic, 0-based, ascending.
    /// Negative on the lower half, positive on the upper half.
    pub fn coefficient(&self, i: usize) -> f64 {
        let j = self.n - 1 - i;
        if i == j {
            0.0
        } else if i < j {
            -self.half[i]
        } else {
            self.half[j]
        }
    }

    /// W and its upper-tail p-value for an ascending sample of length n.
    pub fn test(&self, x: &[f64]) -> Result<TestOutcome> {
        let n = self.n;
        if x.len() != n {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: n,
            });
        }
        let range = x[n - 1] - x[0];
        if !(range > 0.0) || is_constant(x) {
            return Err(Error::DegenerateSample);
        }
        // Scale by the range and center both vectors; W is the squared
        // correlation between the data and the coefficients.
        let nf = n as f64;
        let sx = x.iter().map(|v| v / range).sum::<f64>() / nf;
        let sa = (0..n).map(|i| self.coefficient(i)).sum::<f64>() / nf;
        let (mut ssa, mut ssx, mut sax) = (0.0, 0.0, 0.0);
        for (i, &xi) in x.iter().enumerate() {
            let asa = self.coefficient(i) - sa;
            let xsx = xi / range - sx;
            ssa += asa * asa;
            ssx += xsx * xsx;
            sax += asa * xsx;
        }
        let ssassx = (ssa * ssx).sqrt();
        // 1 - W, computed this way to keep precision when W is near 1.
        let w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
        let w = (1.0 - w1).clamp(f64::MIN_POSITIVE, 1.0);
        Ok(TestOutcome {
            kind: TestKind::ShapiroWilk,
            statistic: w,
            p_value: Some(p_value(w, w1, n)),
        })
    }
}

fn p_value(w: f64, w1: f64, n: usize) -> f64 {
    if n == 3 {
        const PI6: f64 = 1.909_859_317_102_744;
        const STQR: f64 = std::f64::consts::FRAC_PI_3;
        return (PI6 * (w.sqrt().asin() - STQR)).clamp(0.0, 1.0);
    }
    if w1 <= 0.0 {
        return 1.0;
    }
    let an = n as f64;
    let mut y = w1.ln();
    let (m, s) = if n <= 11 {
        let gamma = poly(&G, an);
        if y >= gamma {
            return 1e-99;
        }
        y = -(gamma - y).ln();
        (poly(&C3, an), poly(&C4, an).exp())
    } else {
        let xx = an.ln();
        (poly(&C5, xx), poly(&C6, xx).exp())
    };
    phi_upper((y - m) / s).clamp(0.0, 1.0)
}

pub fn shapiro_wilk(values: &[f64]) -> Result<TestOutcome> {
    let sorted = sorted_for(TestKind::ShapiroWilk, values)?;
    ShapiroWilkCoefficients::new(sorted.len())?.test(sorted.values())
}
