//! Monte Carlo accuracy studies.
//!
//! Study I draws N(μ, σ²) data and maps it through (yλ + 1)^{1/λ}; Study II
//! shifts N(μ, σ²) draws to positivity and maps them through y^{1/λ} (or
//! exp at λ = 0). Each estimator is then run on the generated sample and the
//! estimates are summarized as bias, SE and MSE.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::covariate::{ac_estimate, AcConfig};
use crate::error::{Error, Result};
use crate::estimate::{estimate, EstimateConfig, Method};
use crate::transform::{
    ensure_positive, inverse_transform, InverseConvention, Sample, LAMBDA_ZERO_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Study {
    I,
    II,
}

impl fmt::Display for Study {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Study::I => f.write_str("I"),
            Study::II => f.write_str("II"),
        }
    }
}

impl FromStr for Study {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(Study::I),
            "II" | "2" => Ok(Study::II),
            _ => Err(format!("unknown study '{s}' (expected I or II)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyCondition {
    pub study: Study,
    pub n: usize,
    pub mu: f64,
    pub sigma: f64,
    pub true_lambda: f64,
    pub replications: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
}

impl StudyCondition {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.study == Study::I && self.true_lambda.abs() < LAMBDA_ZERO_TOL {
            return bad(
                "study I requires lambda != 0: (y*lambda + 1)^(1/lambda) is undefined at 0".into(),
            );
        }
        if !self.true_lambda.is_finite() || !self.mu.is_finite() {
            return bad("mu and lambda must be finite".into());
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return bad(format!("sigma must be positive, got {}", self.sigma));
        }
        if self.replications == 0 {
            return bad("replications must be at least 1".into());
        }
        if self.methods.is_empty() {
            return bad("no estimation methods selected".into());
        }
        let min_n = self
            .methods
            .iter()
            .map(|m| match m {
                Method::Test(k) => k.size_range().0.max(5),
                Method::ArtificialCovariate => 5,
            })
            .max()
            .unwrap_or(5);
        if self.n < min_n || self.n > 5000 {
            return bad(format!(
                "n = {} outside the supported range [{min_n}, 5000] for the selected methods",
                self.n
            ));
        }
        Ok(())
    }
}

/// Estimator settings shared by every replication.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SimulationOptions {
    pub estimate: EstimateConfig,
    /// Seed is ignored; each replication derives its own.
    pub ac: AcConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Accuracy {
    pub mean: f64,
    pub bias: f64,
    /// 100 · bias / λ; absent when λ = 0.
    pub percent_bias: Option<f64>,
    /// Standard deviation with divisor R.
    pub se: f64,
    /// bias² + se².
    pub mse: f64,
}

/// Bias, SE (divisor R) and MSE of a set of estimates.
pub fn summarize(lambda_hats: &[f64], true_lambda: f64) -> Result<Accuracy> {
    if lambda_hats.is_empty() {
        return Err(Error::EmptySample);
    }
    let r = lambda_hats.len() as f64;
    let mean = lambda_hats.iter().sum::<f64>() / r;
    let var = lambda_hats
        .iter()
        .map(|l| (l - mean) * (l - mean))
        .sum::<f64>()
        / r;
    let se = var.sqrt();
    let bias = mean - true_lambda;
    Ok(Accuracy {
        mean,
        bias,
        percent_bias: (true_lambda != 0.0).then(|| 100.0 * bias / true_lambda),
        se,
        mse: bias * bias + se * se,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodSummary {
    pub method: Method,
    pub accuracy: Option<Accuracy>,
    pub successes: usize,
    /// Replications where data generation or estimation failed.
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationSummary {
    pub condition: StudyCondition,
    pub methods: Vec<MethodSummary>,
    pub generation_failures: usize,
    /// Positivity shift per replication (Study II), None where generation failed.
    pub shifts: Vec<Option<f64>>,
}

impl SimulationSummary {
    pub fn method(&self, method: Method) -> Option<&MethodSummary> {
        self.methods.iter().find(|m| m.method == method)
    }

    pub const CSV_HEADER: &'static str =
        "study,n,mu,sigma,true_lambda,method,bias,se,mse,failures,replications,seed";

    /// One CSV line per method, without the header.
    pub fn csv_rows(&self) -> String {
        let c = &self.condition;
        let mut out = String::new();
        for m in &self.methods {
            let (bias, se, mse) = match &m.accuracy {
                Some(a) => (fmt6(a.bias), fmt6(a.se), fmt6(a.mse)),
                None => ("NA".into(), "NA".into(), "NA".into()),
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                c.study,
                c.n,
                c.mu,
                c.sigma,
                c.true_lambda,
                m.method,
                bias,
                se,
                mse,
                m.failures,
                c.replications,
                c.seed
            );
        }
        out
    }
}

fn fmt6(v: f64) -> String {
    let s = format!("{v:.6}");
    // Avoid "-0.000000".
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

struct Replication {
    lambdas: Vec<Option<f64>>,
    shift: Option<f64>,
}

/// The generated sample for replication `r` with its positivity shift, plus
/// a seed for any randomness the estimators need. Both come from the
/// replication's own ChaCha stream.
pub fn generate_replication(cond: &StudyCondition, r: usize) -> (Result<(Sample, f64)>, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(cond.seed);
    rng.set_stream(r as u64);
    let dist = Normal::new(cond.mu, cond.sigma).expect("sigma validated");
    let draws: Vec<f64> = (0..cond.n).map(|_| dist.sample(&mut rng)).collect();
    let ac_seed = rng.next_u64();
    let sample = match cond.study {
        Study::I => inverse_transform(&draws, cond.true_lambda, InverseConvention::Study1)
            .and_then(Sample::new)
            .map(|s| (s, 0.0)),
        Study::II => ensure_positive(&draws).and_then(|shifted| {
            let z = inverse_transform(
                &shifted.shifted(),
                cond.true_lambda,
                InverseConvention::Study2,
            )?;
            Ok((Sample::new(z)?, shifted.shift()))
        }),
    };
    (sample, ac_seed)
}

fn run_replication(cond: &StudyCondition, opts: &SimulationOptions, r: usize) -> Replication {
    let (generated, ac_seed) = generate_replication(cond, r);
    let (sample, shift) = match generated {
        Ok(v) => v,
        Err(_) => {
            return Replication {
                lambdas: vec![None; cond.methods.len()],
                shift: None,
            }
        }
    };
    let ac = AcConfig {
        seed: ac_seed,
        ..opts.ac
    };
    let lambdas = cond
        .methods
        .iter()
        .map(|&m| {
            let r = match m {
                Method::Test(kind) => estimate(&sample, kind, &opts.estimate),
                Method::ArtificialCovariate => ac_estimate(&sample, &ac, &opts.estimate),
            };
            r.ok().map(|e| e.lambda_hat)
        })
        .collect();
    Replication {
        lambdas,
        shift: Some(shift),
    }
}

pub fn run_study(cond: &StudyCondition, opts: &SimulationOptions) -> Result<SimulationSummary> {
    cond.validate()?;
    let reps: Vec<Replication> = (0..cond.replications)
        .into_par_iter()
        .map(|r| run_replication(cond, opts, r))
        .collect();

    let generation_failures = reps.iter().filter(|r| r.shift.is_none()).count();
    let methods: Vec<MethodSummary> = cond
        .methods
        .iter()
        .enumerate()
        .map(|(j, &method)| {
            let ok: Vec<f64> = reps.iter().filter_map(|r| r.lambdas[j]).collect();
            MethodSummary {
                method,
                accuracy: summarize(&ok, cond.true_lambda).ok(),
                successes: ok.len(),
                failures: cond.replications - ok.len(),
            }
        })
        .collect();
    if methods.iter().all(|m| m.successes == 0) {
        return Err(Error::EstimationFailed(format!(
            "all {} replications failed for every method",
            cond.replications
        )));
    }
    Ok(SimulationSummary {
        condition: cond.clone(),
        methods,
        generation_failures,
        shifts: reps.iter().map(|r| r.shift).collect(),
    })
}

/// (μ, σ, λ) triples simulated for each n in Study I.
pub const STUDY1_TRIPLES: [(f64, f64, f64); 12] = [
    (-5.0, 1.0, -2.0),
    (-10.0, 2.0, -2.0),
    (-5.0, 1.0, -1.0),
    (-10.0, 2.0, -1.0),
    (-10.0, 1.0, -0.5),
    (-15.0, 2.0, -0.5),
    (10.0, 1.0, 0.5),
    (15.0, 2.0, 0.5),
    (5.0, 1.0, 1.0),
    (10.0, 2.0, 1.0),
    (5.0, 1.0, 2.0),
    (10.0, 2.0, 2.0),
];
pub const STUDY1_SIZES: [usize; 2] = [20, 100];
pub const STUDY2_SIZES: [usize; 5] = [20, 30, 50, 100, 500];
pub const STUDY2_LAMBDAS: [f64; 6] = [-5.0, -2.0, -1.0, 0.0, 2.0, 5.0];
pub const STUDY2_SIGMAS: [f64; 2] = [1.0, 5.0];

pub fn study1_preset(replications: usize, seed: u64) -> Vec<StudyCondition> {
    let methods = vec![
        Method::Test(crate::normality::TestKind::ShapiroWilk),
        Method::Test(crate::normality::TestKind::AndersonDarling),
    ];
    STUDY1_SIZES
        .iter()
        .flat_map(|&n| {
            let methods = methods.clone();
            STUDY1_TRIPLES
                .iter()
                .map(move |&(mu, sigma, true_lambda)| StudyCondition {
                    study: Study::I,
                    n,
                    mu,
                    sigma,
                    true_lambda,
                    replications,
                    seed,
                    methods: methods.clone(),
                })
        })
        .collect()
}

pub fn study2_preset(replications: usize, seed: u64) -> Vec<StudyCondition> {
    let mut out = Vec::new();
    for &sigma in &STUDY2_SIGMAS {
        for &n in &STUDY2_SIZES {
            for &true_lambda in &STUDY2_LAMBDAS {
                out.push(StudyCondition {
                    study: Study::II,
                    n,
                    mu: 0.0,
                    sigma,
                    true_lambda,
                    replications,
                    seed,
                    methods: Method::ALL.to_vec(),
                });
            }
        }
    }
    out
}
