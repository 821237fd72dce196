use serde::Serialize;

use crate::error::{Error, Result};

/// Closed interval of candidate λ values on a lattice `lower + k·step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaGrid {
    lower: f64,
    upper: f64,
    step: f64,
}

impl Default for LambdaGrid {
    fn default() -> Self {
        LambdaGrid {
            lower: -3.0,
            upper: 3.0,
            step: 0.01,
        }
    }
}

impl LambdaGrid {
    /// At least ten steps must fit between the bounds.
    pub fn new(lower: f64, upper: f64, step: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && step.is_finite()) {
            return Err(Error::InvalidGrid("bounds and step must be finite".into()));
        }
        if !(step > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "step must be positive, got {step}"
            )));
        }
        if !(lower < upper) {
            return Err(Error::InvalidGrid(format!(
                "lower ({lower}) must be below upper ({upper})"
            )));
        }
        if (upper - lower) / step < 10.0 - 1e-9 {
            return Err(Error::InvalidGrid(format!(
                "[{lower}, {upper}] holds fewer than 10 steps of {step}"
            )));
        }
        Ok(LambdaGrid { lower, upper, step })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    fn steps(&self) -> usize {
        ((self.upper - self.lower) / self.step + 1e-9).floor() as usize
    }

    /// Lattice value at position k. When 1/step is an integer m the value is
    /// computed as an integer divided by m, so decimal lattices like 0.01
    /// reproduce literals such as -0.06 exactly.
    fn lattice(&self, k: usize) -> f64 {
        let m = 1.0 / self.step;
        let mr = m.round();
        if (m - mr).abs() < 1e-9 * mr.max(1.0) {
            let origin = self.lower * mr;
            let or = origin.round();
            if (origin - or).abs() < 1e-6 {
                return (or + k as f64) / mr;
            }
        }
        self.lower + k as f64 * self.step
    }

    /// Ascending candidate values. λ = 0 is inserted when it lies inside the
    /// interval but off the lattice.
    pub fn points(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = (0..=self.steps())
            .map(|k| {
                let v = self.lattice(k);
                if v.abs() < 1e-9 * self.step {
                    0.0
                } else {
                    v
                }
            })
            .collect();
        if self.lower <= 0.0 && 0.0 <= self.upper && !pts.contains(&0.0) {
            let at = pts.partition_point(|&v| v < 0.0);
            pts.insert(at, 0.0);
        }
        pts
    }

    /// Same step, half-width doubled about the center.
    pub fn expanded(&self) -> LambdaGrid {
        let center = 0.5 * (self.lower + self.upper);
        let half = self.upper - self.lower;
        LambdaGrid {
            lower: center - half,
            upper: center + half,
            step: self.step,
        }
    }

    pub fn contains(&self, lambda: f64) -> bool {
        self.lower - 1e-12 <= lambda && lambda <= self.upper + 1e-12
    }
}
