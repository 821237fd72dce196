//! The Box-Cox power family, its inverses, and positivity shifting.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stats::{check_finite, is_constant};

/// |λ| below this is treated as the log branch.
pub const LAMBDA_ZERO_TOL: f64 = 1e-12;

/// Forward transform variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// (y^λ − 1)/λ, log y at λ = 0.
    Conventional,
    /// y^λ, log y at λ = 0.
    Simple,
}

/// Inverse transform variant used to generate simulated data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InverseConvention {
    /// (zλ + 1)^{1/λ}, λ ≠ 0.
    Study1,
    /// z^{1/λ}, or exp(z) at λ = 0.
    Study2,
}

impl fmt::Display for InverseConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InverseConvention::Study1 => f.write_str("(z*lambda + 1)^(1/lambda)"),
            InverseConvention::Study2 => f.write_str("z^(1/lambda)"),
        }
    }
}

/// Observations plus the constant added to make them positive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    values: Vec<f64>,
    shift: f64,
}

impl Sample {
    /// Wraps strictly positive data; no shift is applied.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        check_finite(&values)?;
        if let Some(index) = values.iter().position(|&v| v <= 0.0) {
            return Err(Error::NonPositive {
                index,
                value: values[index],
            });
        }
        Ok(Sample { values, shift: 0.0 })
    }

    /// Raw observations, before shifting.
    pub fn raw(&self) -> &[f64] {
        &self.values
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Observations with the shift added; all strictly positive.
    pub fn shifted(&self) -> Vec<f64> {
        self.values.iter().map(|v| v + self.shift).collect()
    }

    pub fn transform(&self, lambda: f64, convention: Convention) -> Result<Vec<f64>> {
        transform(&self.shifted(), lambda, convention)
    }
}

/// Shifts the data so every value is positive. Positive data is left alone;
/// otherwise the shift is −min + ε with ε = 1e-4 · range.
pub fn ensure_positive(values: &[f64]) -> Result<Sample> {
    check_finite(values)?;
    if is_constant(values) {
        return Err(Error::DegenerateSample);
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let shift = if min > 0.0 {
        0.0
    } else {
        -min + 1e-4 * (max - min)
    };
    let sample = Sample {
        values: values.to_vec(),
        shift,
    };
    // Rounding in v + shift can still land on zero for extreme magnitudes.
    if let Some(index) = sample.shifted().iter().position(|&v| v <= 0.0) {
        return Err(Error::NonPositive {
            index,
            value: values[index] + shift,
        });
    }
    Ok(sample)
}

/// Single-value Box-Cox transform for y > 0. The conventional branch uses
/// expm1 so it approaches log y smoothly as λ → 0.
#[inline]
pub fn transform_one(y: f64, lambda: f64, convention: Convention) -> f64 {
    let ln_y = y.ln();
    if lambda.abs() < LAMBDA_ZERO_TOL {
        return ln_y;
    }
    match convention {
        Convention::Conventional => (lambda * ln_y).exp_m1() / lambda,
        Convention::Simple => y.powf(lambda),
    }
}

pub fn transform(values: &[f64], lambda: f64, convention: Convention) -> Result<Vec<f64>> {
    if !lambda.is_finite() {
        return Err(Error::Domain {
            what: "lambda",
            value: lambda,
        });
    }
    values
        .iter()
        .enumerate()
        .map(|(index, &y)| {
            if y > 0.0 && y.is_finite() {
                Ok(transform_one(y, lambda, convention))
            } else {
                Err(Error::NonPositive { index, value: y })
            }
        })
        .collect()
}

pub fn inverse_transform(
    z: &[f64],
    lambda: f64,
    convention: InverseConvention,
) -> Result<Vec<f64>> {
    if !lambda.is_finite() {
        return Err(Error::Domain {
            what: "lambda",
            value: lambda,
        });
    }
    let zero = lambda.abs() < LAMBDA_ZERO_TOL;
    if zero && convention == InverseConvention::Study1 {
        return Err(Error::Domain {
            what: "lambda for (z*lambda + 1)^(1/lambda)",
            value: lambda,
        });
    }
    z.iter()
        .enumerate()
        .map(|(index, &v)| {
            let fail = || Error::InverseDomain {
                index,
                value: v,
                convention,
            };
            let out = match convention {
                InverseConvention::Study1 => {
                    let base = v * lambda + 1.0;
                    if !(base > 0.0) {
                        return Err(fail());
                    }
                    base.powf(1.0 / lambda)
                }
                InverseConvention::Study2 if zero => v.exp(),
                InverseConvention::Study2 => {
                    if !(v > 0.0) {
                        return Err(fail());
                    }
                    v.powf(1.0 / lambda)
                }
            };
            if out.is_finite() && out > 0.0 {
                Ok(out)
            } else {
                Err(fail())
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn forward_examples() {
        let t = |y: f64, l: f64| transform(&[y], l, Convention::Conventional).unwrap()[0];
        assert_eq!(t(1.0, 0.7), 0.0);
        assert!((t(3.0, 2.0) - 4.0).abs() < 1e-14);
        assert!((t(std::f64::consts::E, 0.0) - 1.0).abs() < 1e-15);
        assert!((transform(&[3.0], 2.0, Convention::Simple).unwrap()[0] - 9.0).abs() < 1e-14);
        assert_eq!(
            transform(&[1.0], 1e-13, Convention::Simple).unwrap()[0],
            0.0,
            "tiny lambda uses the log branch"
        );
    }

    #[test]
    fn forward_rejects_non_positive() {
        assert_eq!(
            transform(&[1.0, 2.0, 0.0], 0.5, Convention::Conventional),
            Err(Error::NonPositive {
                index: 2,
                value: 0.0
            })
        );
    }

    #[test]
    fn inverse_examples() {
        let v = inverse_transform(&[0.0], 2.0, InverseConvention::Study1).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-15);
        let v = inverse_transform(&[8.0], 3.0, InverseConvention::Study2).unwrap();
        assert!((v[0] - 2.0).abs() < 1e-14);
        let v = inverse_transform(&[1.0], 0.0, InverseConvention::Study2).unwrap();
        assert!((v[0] - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn inverse_domain_errors() {
        assert!(matches!(
            inverse_transform(&[1.0, 1.0], 0.0, InverseConvention::Study1),
            Err(Error::Domain { .. })
        ));
        assert_eq!(
            inverse_transform(&[0.1, 2.0], -1.0, InverseConvention::Study1),
            Err(Error::InverseDomain {
                index: 1,
                value: 2.0,
                convention: InverseConvention::Study1
            })
        );
        assert!(matches!(
            inverse_transform(&[-1.0], 0.5, InverseConvention::Study2),
            Err(Error::InverseDomain { index: 0, .. })
        ));
    }

    #[test]
    fn round_trip_example() {
        let y = [2.0, 3.0, 7.0];
        let z = transform(&y, -0.5, Convention::Conventional).unwrap();
        let back = inverse_transform(&z, -0.5, InverseConvention::Study1).unwrap();
        for (a, b) in y.iter().zip(&back) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn ensure_positive_examples() {
        let s = ensure_positive(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.shift(), 0.0);
        let s = ensure_positive(&[-1.0, 0.0, 9.0]).unwrap();
        assert!((s.shift() - 1.001).abs() < 1e-12);
        assert!((s.shifted()[0] - 0.001).abs() < 1e-12);
        assert_eq!(
            ensure_positive(&[5.0, 5.0, 5.0]),
            Err(Error::DegenerateSample)
        );
        assert_eq!(ensure_positive(&[]), Err(Error::EmptySample));
    }

    #[test]
    fn sample_new_requires_positive() {
        assert!(matches!(
            Sample::new(vec![1.0, -2.0]),
            Err(Error::NonPositive { index: 1, .. })
        ));
    }

    proptest! {
        #[test]
        fn round_trip(ys in proptest::collection::vec(0.05f64..50.0, 1..30),
                      li in 0usize..4) {
            let lambda = [-2.0, -0.5, 0.5, 2.0][li];
            let z = transform(&ys, lambda, Convention::Conventional).unwrap();
            let back = inverse_transform(&z, lambda, InverseConvention::Study1).unwrap();
            for (a, b) in ys.iter().zip(&back) {
                prop_assert!((a - b).abs() <= 1e-10);
            }
        }

        #[test]
        fn continuous_at_zero(ys in proptest::collection::vec(0.5f64..10.0, 1..30)) {
            let near = transform(&ys, 1e-9, Convention::Conventional).unwrap();
            let at = transform(&ys, 0.0, Convention::Conventional).unwrap();
            for (a, b) in near.iter().zip(&at) {
                prop_assert!((a - b).abs() <= 1e-6);
            }
        }

        #[test]
        fn shifted_is_positive(ys in proptest::collection::vec(-1e3f64..1e3, 2..30)) {
            prop_assume!(!is_constant(&ys));
            let s = ensure_positive(&ys).unwrap();
            prop_assert!(s.shift() >= 0.0);
            prop_assert!(s.shifted().iter().all(|&v| v > 0.0));
        }
    }
}
