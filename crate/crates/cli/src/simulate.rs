//! The `simulate` subcommand.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use boxcox_core::covariate::AcConfig;
use boxcox_core::estimate::{EstimateConfig, Method};
use boxcox_core::normality::TestKind;
use boxcox_core::simulation::{
    run_study, study1_preset, study2_preset, SimulationOptions, SimulationSummary, Study,
    StudyCondition, STUDY1_SIZES, STUDY2_LAMBDAS, STUDY2_SIGMAS, STUDY2_SIZES,
};

#[derive(Debug, Clone)]
pub struct SimulateConfig {
    pub study: Study,
    pub n: Option<Vec<usize>>,
    pub mu: Option<Vec<f64>>,
    pub sigma: Option<Vec<f64>>,
    pub lambda: Option<Vec<f64>>,
    pub methods: Option<Vec<Method>>,
    pub replications: usize,
    pub seed: u64,
    pub ac_repetitions: usize,
    pub estimate: EstimateConfig,
    pub output: Option<PathBuf>,
}

/// Conditions to run. Axes left unset fall back to the default design;
/// for study I that design pairs (μ, σ, λ), so those three are given
/// together or not at all.
pub fn conditions(cfg: &SimulateConfig) -> Result<Vec<StudyCondition>> {
    let mut conds = match cfg.study {
        Study::I => {
            let sizes = cfg.n.clone().unwrap_or_else(|| STUDY1_SIZES.to_vec());
            match (&cfg.mu, &cfg.sigma, &cfg.lambda) {
                (None, None, None) => study1_preset(cfg.replications, cfg.seed)
                    .into_iter()
                    .filter(|c| sizes.contains(&c.n))
                    .collect(),
                (Some(mu), Some(sigma), Some(lambda)) => {
                    product(Study::I, &sizes, mu, sigma, lambda, cfg.replications, cfg.seed)
                }
                _ => bail!("study I: give --mu, --sigma and --lambda together, or none of them to use the preset (mu, sigma, lambda) triples"),
            }
        }
        Study::II => {
            let mu = cfg.mu.clone().unwrap_or_else(|| vec![0.0]);
            let sigma = cfg.sigma.clone().unwrap_or_else(|| STUDY2_SIGMAS.to_vec());
            let sizes = cfg.n.clone().unwrap_or_else(|| STUDY2_SIZES.to_vec());
            let lambda = cfg
                .lambda
                .clone()
                .unwrap_or_else(|| STUDY2_LAMBDAS.to_vec());
            if cfg.n.is_none() && cfg.mu.is_none() && cfg.sigma.is_none() && cfg.lambda.is_none() {
                study2_preset(cfg.replications, cfg.seed)
            } else {
                product(
                    Study::II,
                    &sizes,
                    &mu,
                    &sigma,
                    &lambda,
                    cfg.replications,
                    cfg.seed,
                )
            }
        }
    };
    let methods = cfg.methods.clone().unwrap_or_else(|| match cfg.study {
        Study::I => vec![
            Method::Test(TestKind::ShapiroWilk),
            Method::Test(TestKind::AndersonDarling),
        ],
        Study::II => Method::ALL.to_vec(),
    });
    for c in &mut conds {
        c.methods = methods.clone();
    }
    if conds.is_empty() {
        bail!("no conditions selected");
    }
    for c in &conds {
        c.validate().with_context(|| {
            format!(
                "invalid condition n={} mu={} sigma={} lambda={}",
                c.n, c.mu, c.sigma, c.true_lambda
            )
        })?;
    }
    Ok(conds)
}

fn product(
    study: Study,
    sizes: &[usize],
    mu: &[f64],
    sigma: &[f64],
    lambda: &[f64],
    replications: usize,
    seed: u64,
) -> Vec<StudyCondition> {
    let mut out = Vec::new();
    for &s in sigma {
        for &n in sizes {
            for &m in mu {
                for &l in lambda {
                    out.push(StudyCondition {
                        study,
                        n,
                        mu: m,
                        sigma: s,
                        true_lambda: l,
                        replications,
                        seed,
                        methods: Vec::new(),
                    });
                }
            }
        }
    }
    out
}

pub fn run(cfg: &SimulateConfig) -> Result<Vec<SimulationSummary>> {
    let conds = conditions(cfg)?;
    let opts = SimulationOptions {
        estimate: cfg.estimate,
        ac: AcConfig {
            repetitions: cfg.ac_repetitions,
            ..AcConfig::default()
        },
    };
    let mut csv = String::from(SimulationSummary::CSV_HEADER);
    csv.push('\n');
    let mut summaries = Vec::with_capacity(conds.len());
    for (i, c) in conds.iter().enumerate() {
        eprintln!(
            "[{}/{}] study {} n={} mu={} sigma={} lambda={}",
            i + 1,
            conds.len(),
            c.study,
            c.n,
            c.mu,
            c.sigma,
            c.true_lambda
        );
        let s = run_study(c, &opts)?;
        csv.push_str(&s.csv_rows());
        summaries.push(s);
    }
    match &cfg.output {
        Some(path) => std::fs::write(path, &csv)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => std::io::stdout().write_all(csv.as_bytes())?,
    }
    Ok(summaries)
}
