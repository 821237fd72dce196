//! Grid-search estimation of λ.
//!
//! For every candidate λ the shifted data are Box-Cox transformed and the
//! chosen normality statistic is evaluated; the λ with the best statistic
//! wins. If the winner sits on either end of the grid the interval is
//! widened and the search repeated, up to a fixed number of times.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::grid::LambdaGrid;
use crate::normality::{StatisticEvaluator, TestKind};
use crate::stats::SortedSample;
use crate::transform::{Convention, Sample, LAMBDA_ZERO_TOL};
use crate::validation::{validate, PAdjust, ValidationReport};

/// An estimator: one of the seven statistics, or the artificial covariate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Test(TestKind),
    ArtificialCovariate,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Test(TestKind::ShapiroWilk),
        Method::Test(TestKind::AndersonDarling),
        Method::Test(TestKind::CramerVonMises),
        Method::Test(TestKind::PearsonChiSquare),
        Method::Test(TestKind::ShapiroFrancia),
        Method::Test(TestKind::Lilliefors),
        Method::Test(TestKind::JarqueBera),
        Method::ArtificialCovariate,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Method::Test(k) => k.code(),
            Method::ArtificialCovariate => "AC",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("ac") {
            return Ok(Method::ArtificialCovariate);
        }
        s.parse::<TestKind>()
            .map(Method::Test)
            .map_err(|_| format!("unknown method '{s}'"))
    }
}

impl Serialize for Method {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateConfig {
    pub grid: LambdaGrid,
    pub alpha: f64,
    pub max_expansions: usize,
    pub adjustment: PAdjust,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        EstimateConfig {
            grid: LambdaGrid::default(),
            alpha: 0.05,
            max_expansions: 3,
            adjustment: PAdjust::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimationResult {
    pub method: Method,
    pub lambda_hat: f64,
    /// Statistic at λ̂ (for the artificial covariate: mean residual SSE of
    /// the per-repetition optima).
    pub objective: f64,
    /// Grid of the final search pass.
    pub grid: LambdaGrid,
    pub expansions: usize,
    pub shift: f64,
    pub validation: ValidationReport,
}

/// Smallest n that the validation trio accepts.
pub const MIN_VALIDATION_N: usize = 5;
pub const MAX_VALIDATION_N: usize = 5000;

pub(crate) fn check_validation_size(n: usize) -> Result<()> {
    if !(MIN_VALIDATION_N..=MAX_VALIDATION_N).contains(&n) {
        return Err(Error::UnsupportedSize {
            test: "validation (Shapiro-Wilk, Shapiro-Francia, Jarque-Bera)",
            n,
            min: MIN_VALIDATION_N,
            max: MAX_VALIDATION_N,
        });
    }
    Ok(())
}

/// Positive observations sorted once, with logs cached. The Box-Cox map is
/// increasing in y for every λ, so transformed values stay sorted.
pub(crate) struct PreparedData {
    log_y: Vec<f64>,
}

impl PreparedData {
    pub(crate) fn new(sample: &Sample) -> Self {
        let mut y = sample.shifted();
        y.sort_by(f64::total_cmp);
        PreparedData {
            log_y: y.iter().map(|v| v.ln()).collect(),
        }
    }

    /// Conventional transform, or None if any value is non-finite.
    fn transformed(&self, lambda: f64) -> Option<Vec<f64>> {
        let z: Vec<f64> = if lambda.abs() < LAMBDA_ZERO_TOL {
            self.log_y.clone()
        } else {
            self.log_y
                .iter()
                .map(|&l| (lambda * l).exp_m1() / lambda)
                .collect()
        };
        z.iter().all(|v| v.is_finite()).then_some(z)
    }
}

/// Statistic at every grid point, None where it is undefined.
pub fn profile(
    sample: &Sample,
    kind: TestKind,
    grid: &LambdaGrid,
) -> Result<Vec<(f64, Option<f64>)>> {
    let evaluator = StatisticEvaluator::new(kind, sample.len())?;
    let data = PreparedData::new(sample);
    Ok(profile_points(&data, &evaluator, &grid.points()))
}

fn profile_points(
    data: &PreparedData,
    evaluator: &StatisticEvaluator,
    points: &[f64],
) -> Vec<(f64, Option<f64>)> {
    points
        .par_iter()
        .map(|&lambda| {
            let stat = data
                .transformed(lambda)
                .and_then(|z| SortedSample::from_vec(z).ok())
                .and_then(|s| evaluator.statistic(&s).ok())
                .filter(|v| v.is_finite());
            (lambda, stat)
        })
        .collect()
}

/// Index of the best defined value. Exact ties keep the earliest, i.e.
/// smallest, λ.
pub(crate) fn best_index<F>(values: &[Option<f64>], improves: F) -> Option<usize>
where
    F: Fn(f64, f64) -> bool,
{
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.iter().enumerate() {
        if let Some(v) = *v {
            match best {
                Some((_, b)) if !improves(v, b) => {}
                _ => best = Some((i, v)),
            }
        }
    }
    best.map(|(i, _)| i)
}

/// Grid-search estimate of λ for one normality statistic.
pub fn estimate(
    sample: &Sample,
    kind: TestKind,
    config: &EstimateConfig,
) -> Result<EstimationResult> {
    let n = sample.len();
    kind.check_size(n)?;
    check_validation_size(n)?;
    let evaluator = StatisticEvaluator::new(kind, n)?;
    let data = PreparedData::new(sample);
    let direction = kind.direction();

    let mut grid = config.grid;
    let mut expansions = 0;
    loop {
        let points = grid.points();
        let prof = profile_points(&data, &evaluator, &points);
        let stats: Vec<Option<f64>> = prof.iter().map(|p| p.1).collect();
        let best = best_index(&stats, |a, b| direction.improves(a, b)).ok_or_else(|| {
            Error::EstimationFailed(format!(
                "{} is undefined at every lambda in [{}, {}]",
                kind.name(),
                grid.lower(),
                grid.upper()
            ))
        })?;
        let lambda_hat = points[best];
        let interior = best != 0 && best != points.len() - 1;
        if !interior {
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
        let z = sample.transform(lambda_hat, Convention::Conventional)?;
        let validation = validate(&z, config.alpha, config.adjustment)?;
        return Ok(EstimationResult {
            method: Method::Test(kind),
            lambda_hat,
            objective: stats[best].expect("best index is defined"),
            grid,
            expansions,
            shift: sample.shift(),
            validation,
        });
    }
}
