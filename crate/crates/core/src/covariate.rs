//! λ estimation through an artificial covariate.
//!
//! A non-informative covariate x ~ N(0, 100²) is simulated and the
//! Jacobian-normalized transform z(λ) = (y^λ − 1)/(λ ġ^{λ−1}) is regressed
//! on it. The λ minimizing the residual sum of squares is recorded; this is
//! repeated with fresh covariates and the per-repetition minimizers are
//! averaged.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimate::{
    best_index, check_validation_size, EstimateConfig, EstimationResult, Method,
};
use crate::grid::LambdaGrid;
use crate::transform::{Convention, Sample, LAMBDA_ZERO_TOL};
use crate::validation::validate;

const MAX_REDRAWS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AcConfig {
    pub covariate_mean: f64,
    pub covariate_sd: f64,
    pub repetitions: usize,
    pub seed: u64,
}

impl Default for AcConfig {
    fn default() -> Self {
        AcConfig {
            covariate_mean: 0.0,
            covariate_sd: 100.0,
            repetitions: 100,
            seed: 1,
        }
    }
}

impl AcConfig {
    fn check(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::InvalidConfig(
                "repetitions must be at least 1".into(),
            ));
        }
        if !(self.covariate_sd > 0.0 && self.covariate_sd.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "covariate sd must be positive, got {}",
                self.covariate_sd
            )));
        }
        if !self.covariate_mean.is_finite() {
            return Err(Error::InvalidConfig("covariate mean must be finite".into()));
        }
        Ok(())
    }
}

/// Residual sum of squares of the least-squares line of `response` on
/// `covariate` (with intercept).
pub fn ols_sse(response: &[f64], covariate: &[f64]) -> Result<f64> {
    if response.len() != covariate.len() {
        return Err(Error::LengthMismatch {
            left: response.len(),
            right: covariate.len(),
        });
    }
    if response.len() < 3 {
        return Err(Error::UnsupportedSize {
            test: "least squares",
            n: response.len(),
            min: 3,
            max: usize::MAX,
        });
    }
    let x = CenteredCovariate::new(covariate).ok_or(Error::Singular)?;
    let z = centered(response);
    let szz: f64 = z.iter().map(|v| v * v).sum();
    Ok(x.sse(&z, szz))
}

fn centered(v: &[f64]) -> Vec<f64> {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| x - mean).collect()
}

struct CenteredCovariate {
    values: Vec<f64>,
    sxx: f64,
}

impl CenteredCovariate {
    fn new(x: &[f64]) -> Option<Self> {
        let values = centered(x);
        let sxx: f64 = values.iter().map(|v| v * v).sum();
        let spread = x.iter().any(|&v| v != x[0]);
        (spread && sxx > 0.0 && sxx.is_finite()).then_some(CenteredCovariate { values, sxx })
    }

    /// SSE for a centered response with total sum of squares `szz`.
    fn sse(&self, z: &[f64], szz: f64) -> f64 {
        let szx: f64 = z.iter().zip(&self.values).map(|(a, b)| a * b).sum();
        (szz - szx * szx / self.sxx).max(0.0)
    }
}

/// Covariate for one repetition, drawn from its own ChaCha stream so that
/// repetitions are reproducible in any execution order.
fn draw_covariate(cfg: &AcConfig, repetition: usize, n: usize) -> Option<CenteredCovariate> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(repetition as u64);
    let dist = Normal::new(cfg.covariate_mean, cfg.covariate_sd).ok()?;
    (0..MAX_REDRAWS).find_map(|_| {
        let x: Vec<f64> = (0..n).map(|_| dist.sample(&mut rng)).collect();
        CenteredCovariate::new(&x)
    })
}

/// Centered normalized transforms for every λ of a grid.
struct NormalizedProfile {
    points: Vec<f64>,
    /// (centered z, Σ z²) per λ; None where the transform overflows.
    columns: Vec<Option<(Vec<f64>, f64)>>,
}

impl NormalizedProfile {
    fn new(log_y: &[f64], grid: &LambdaGrid) -> Self {
        let log_gm = log_y.iter().sum::<f64>() / log_y.len() as f64;
        let points = grid.points();
        let columns = points
            .par_iter()
            .map(|&lambda| {
                let z: Vec<f64> = if lambda.abs() < LAMBDA_ZERO_TOL {
                    let gm = log_gm.exp();
                    log_y.iter().map(|l| gm * l).collect()
                } else {
                    let scale = (-(lambda - 1.0) * log_gm).exp() / lambda;
                    log_y
                        .iter()
                        .map(|l| (lambda * l).exp_m1() * scale)
                        .collect()
                };
                if !z.iter().all(|v| v.is_finite()) {
                    return None;
                }
                let zc = centered(&z);
                let szz: f64 = zc.iter().map(|v| v * v).sum();
                szz.is_finite().then_some((zc, szz))
            })
            .collect();
        NormalizedProfile { points, columns }
    }

    /// (index of arg-min λ, minimal SSE) for one covariate.
    fn argmin(&self, x: &CenteredCovariate) -> Option<(usize, f64)> {
        let sse: Vec<Option<f64>> = self
            .columns
            .iter()
            .map(|c| c.as_ref().map(|(z, szz)| x.sse(z, *szz)))
            .collect();
        let i = best_index(&sse, |a, b| a < b)?;
        Some((i, sse[i].expect("defined at best index")))
    }
}

/// Per-repetition arg-min λ values on one grid (None for failed repetitions).
pub fn ac_repetition_lambdas(
    sample: &Sample,
    ac: &AcConfig,
    grid: &LambdaGrid,
) -> Result<Vec<Option<f64>>> {
    ac.check()?;
    let log_y: Vec<f64> = sample.shifted().iter().map(|v| v.ln()).collect();
    let profile = NormalizedProfile::new(&log_y, grid);
    Ok(run_repetitions(&profile, ac, log_y.len())
        .into_iter()
        .map(|r| r.map(|(i, _)| profile.points[i]))
        .collect())
}

fn run_repetitions(
    profile: &NormalizedProfile,
    ac: &AcConfig,
    n: usize,
) -> Vec<Option<(usize, f64)>> {
    (0..ac.repetitions)
        .into_par_iter()
        .map(|r| draw_covariate(ac, r, n).and_then(|x| profile.argmin(&x)))
        .collect()
}

pub fn ac_estimate(
    sample: &Sample,
    ac: &AcConfig,
    config: &EstimateConfig,
) -> Result<EstimationResult> {
    ac.check()?;
    let n = sample.len();
    if n < 5 {
        return Err(Error::UnsupportedSize {
            test: "artificial covariate",
            n,
            min: 5,
            max: usize::MAX,
        });
    }
    check_validation_size(n)?;
    let log_y: Vec<f64> = sample.shifted().iter().map(|v| v.ln()).collect();

    let mut grid = config.grid;
    let mut expansions = 0;
    loop {
        let profile = NormalizedProfile::new(&log_y, &grid);
        let last = profile.points.len() - 1;
        let reps: Vec<(usize, f64)> = run_repetitions(&profile, ac, n)
            .into_iter()
            .flatten()
            .collect();
        if reps.is_empty() {
            return Err(Error::EstimationFailed(
                "every artificial-covariate repetition failed".into(),
            ));
        }
        let lambdas: Vec<f64> = reps.iter().map(|&(i, _)| profile.points[i]).collect();
        let lambda_hat = lambdas.iter().sum::<f64>() / lambdas.len() as f64;
        if reps.iter().any(|&(i, _)| i == 0 || i == last) {
            if expansions < config.max_expansions {
                grid = grid.expanded();
                expansions += 1;
                continue;
            }
            return Err(Error::NonInteriorOptimum {
                best_lambda: lambda_hat,
                lower: grid.lower(),
                upper: grid.upper(),
                expansions,
            });
        }
        let objective = reps.iter().map(|&(_, s)| s).sum::<f64>() / reps.len() as f64;
        let z = sample.transform(lambda_hat, Convention::Conventional)?;
        let validation = validate(&z, config.alpha, config.adjustment)?;
        return Ok(EstimationResult {
            method: Method::ArtificialCovariate,
            lambda_hat,
            objective,
            grid,
            expansions,
            shift: sample.shift(),
            validation,
        });
    }
}
