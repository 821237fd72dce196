//! Post-transformation normality check: Shapiro-Wilk, Shapiro-Francia and
//! Jarque-Bera p-values, adjusted for multiplicity with a step-up
//! false-discovery-rate procedure.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::normality::{jarque_bera, shapiro_francia, shapiro_wilk};
use crate::stats::check_finite;

/// Step-up FDR adjustment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum PAdjust {
    /// Benjamini-Hochberg (independent or positively dependent tests).
    #[serde(rename = "BH")]
    BenjaminiHochberg,
    /// Benjamini-Yekutieli, BH scaled by the harmonic sum Σ 1/j (arbitrary
    /// dependence).
    #[default]
    #[serde(rename = "BY")]
    BenjaminiYekutieli,
}

impl PAdjust {
    pub fn apply(self, p: &[f64]) -> Result<Vec<f64>> {
        let scale = match self {
            PAdjust::BenjaminiHochberg => 1.0,
            PAdjust::BenjaminiYekutieli => (1..=p.len()).map(|j| 1.0 / j as f64).sum(),
        };
        step_up(p, scale)
    }
}

impl fmt::Display for PAdjust {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PAdjust::BenjaminiHochberg => f.write_str("BH"),
            PAdjust::BenjaminiYekutieli => f.write_str("BY"),
        }
    }
}

impl FromStr for PAdjust {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bh" | "fdr" => Ok(PAdjust::BenjaminiHochberg),
            "by" => Ok(PAdjust::BenjaminiYekutieli),
            other => Err(format!(
                "unknown p-value adjustment '{other}' (expected bh or by)"
            )),
        }
    }
}

/// Benjamini-Hochberg adjusted p-values, in the input order.
pub fn bh_adjust(p: &[f64]) -> Result<Vec<f64>> {
    PAdjust::BenjaminiHochberg.apply(p)
}

/// Benjamini-Yekutieli adjusted p-values, in the input order.
pub fn by_adjust(p: &[f64]) -> Result<Vec<f64>> {
    PAdjust::BenjaminiYekutieli.apply(p)
}

/// p_(i) ↦ min_{j ≥ i} (scale · m · p_(j) / j), capped at 1.
fn step_up(p: &[f64], scale: f64) -> Result<Vec<f64>> {
    if let Some(&bad) = p.iter().find(|&&v| !(0.0..=1.0).contains(&v)) {
        return Err(Error::Domain {
            what: "p-value",
            value: bad,
        });
    }
    let m = p.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p[a].total_cmp(&p[b]));
    let mut adjusted = vec![0.0; m];
    let mut running = 1.0_f64;
    for rank in (0..m).rev() {
        let idx = order[rank];
        let candidate = scale * m as f64 * p[idx] / (rank + 1) as f64;
        running = running.min(candidate);
        // Clamp at the raw value: scale·m/j ≥ 1, but m·p/m can round below p.
        adjusted[idx] = running.min(1.0).max(p[idx]);
    }
    Ok(adjusted)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationPValues {
    pub sw: f64,
    pub sf: f64,
    pub jb: f64,
}

impl ValidationPValues {
    pub fn as_array(&self) -> [f64; 3] {
        [self.sw, self.sf, self.jb]
    }

    fn from_slice(v: &[f64]) -> Self {
        ValidationPValues {
            sw: v[0],
            sf: v[1],
            jb: v[2],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationReport {
    pub raw_p: ValidationPValues,
    pub adjusted_p: ValidationPValues,
    pub adjustment: PAdjust,
    pub alpha: f64,
    /// Every adjusted p-value exceeds alpha.
    pub passed: bool,
}

/// Runs the three validation tests on transformed data.
pub fn validate(z: &[f64], alpha: f64, adjustment: PAdjust) -> Result<ValidationReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain {
            what: "alpha",
            value: alpha,
        });
    }
    check_finite(z)?;
    let p = |o: crate::normality::TestOutcome| o.p_value.unwrap_or(f64::NAN);
    let raw = [
        p(shapiro_wilk(z)?),
        p(shapiro_francia(z)?),
        p(jarque_bera(z)?),
    ];
    let adjusted = adjustment.apply(&raw)?;
    let passed = adjusted.iter().all(|&q| q > alpha);
    Ok(ValidationReport {
        raw_p: ValidationPValues::from_slice(&raw),
        adjusted_p: ValidationPValues::from_slice(&adjusted),
        adjustment,
        alpha,
        passed,
    })
}
