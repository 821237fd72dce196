//! The `estimate` subcommand: λ̂ per method, validation, and optional
//! transformed-data and density outputs.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use boxcox_core::covariate::{ac_estimate, AcConfig};
use boxcox_core::estimate::{estimate, EstimateConfig, EstimationResult, Method};
use boxcox_core::grid::LambdaGrid;
use boxcox_core::stats::kde;
use boxcox_core::transform::{ensure_positive, Convention, Sample};
use boxcox_core::validation::{validate, PAdjust, ValidationReport};
use serde::{Deserialize, Serialize};

use crate::ingest::{ingest, ColumnSelector};

const KDE_POINTS: usize = 512;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub column: ColumnSelector,
    pub methods: Vec<Method>,
    pub grid: LambdaGrid,
    pub alpha: f64,
    pub adjustment: PAdjust,
    pub max_expansions: usize,
    pub seed: u64,
    pub ac_repetitions: usize,
    pub convention: Convention,
    pub report: Option<PathBuf>,
    pub transformed: Option<PathBuf>,
    pub plot_data: Option<PathBuf>,
}

impl RunConfig {
    fn check(&self) -> Result<()> {
        if self.methods.is_empty() {
            bail!("no methods selected");
        }
        let outputs: Vec<&PathBuf> = [&self.report, &self.transformed, &self.plot_data]
            .into_iter()
            .flatten()
            .collect();
        for (i, a) in outputs.iter().enumerate() {
            if *a == &self.input {
                bail!("output path {} would overwrite the input", a.display());
            }
            if outputs[i + 1..].contains(a) {
                bail!("output path {} given twice", a.display());
            }
        }
        Ok(())
    }
}

fn round3(v: f64) -> f64 {
    let r = (v * 1000.0).round() / 1000.0;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PValues {
    pub sw: f64,
    pub sf: f64,
    pub jb: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationSection {
    pub raw_p: PValues,
    pub adjusted_p: PValues,
    pub passed: bool,
}

impl ValidationSection {
    /// p-values rounded to 3 decimals.
    fn rounded(v: &ValidationReport) -> Self {
        Self::with(v, round3)
    }

    /// p-values at full precision; raw-data screening is often far below 1e-3.
    fn exact(v: &ValidationReport) -> Self {
        Self::with(v, |x| x)
    }

    fn with(v: &ValidationReport, f: fn(f64) -> f64) -> Self {
        let p = |a: [f64; 3]| PValues {
            sw: f(a[0]),
            sf: f(a[1]),
            jb: f(a[2]),
        };
        ValidationSection {
            raw_p: p(v.raw_p.as_array()),
            adjusted_p: p(v.adjusted_p.as_array()),
            passed: v.passed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSection {
    pub lower: f64,
    pub upper: f64,
    pub step: f64,
}

impl From<&LambdaGrid> for GridSection {
    fn from(g: &LambdaGrid) -> Self {
        GridSection {
            lower: g.lower(),
            upper: g.upper(),
            step: g.step(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodRow {
    pub method: String,
    pub lambda_hat: f64,
    pub objective: f64,
    pub expansions: usize,
    pub final_grid: GridSection,
    pub validation: ValidationSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub input: String,
    pub column: String,
    pub n: usize,
    pub shift: f64,
    pub grid: GridSection,
    pub alpha: f64,
    pub p_adjust: String,
    pub max_expansions: usize,
    pub ac_repetitions: usize,
    pub seed: u64,
    /// Normality of the untransformed data.
    pub raw_screening: ValidationSection,
    pub methods: Vec<MethodRow>,
    pub all_passed: bool,
}

pub struct Outcome {
    pub report: Report,
    pub results: Vec<EstimationResult>,
}

/// Runs every selected method on the configured input.
pub fn compute(cfg: &RunConfig) -> Result<(Sample, Outcome)> {
    cfg.check()?;
    let values = ingest(&cfg.input, &cfg.column)?;
    let sample = ensure_positive(&values).context("cannot make the data positive")?;
    let raw_screening =
        validate(sample.raw(), cfg.alpha, cfg.adjustment).context("raw-data screening failed")?;

    let config = EstimateConfig {
        grid: cfg.grid,
        alpha: cfg.alpha,
        max_expansions: cfg.max_expansions,
        adjustment: cfg.adjustment,
    };
    let ac = AcConfig {
        repetitions: cfg.ac_repetitions,
        seed: cfg.seed,
        ..AcConfig::default()
    };
    let mut results = Vec::with_capacity(cfg.methods.len());
    for &method in &cfg.methods {
        let r = match method {
            Method::Test(kind) => estimate(&sample, kind, &config),
            Method::ArtificialCovariate => ac_estimate(&sample, &ac, &config),
        }
        .with_context(|| format!("method {method}"))?;
        results.push(r);
    }

    let methods: Vec<MethodRow> = results
        .iter()
        .map(|r| MethodRow {
            method: r.method.to_string(),
            lambda_hat: round3(r.lambda_hat),
            objective: r.objective,
            expansions: r.expansions,
            final_grid: (&r.grid).into(),
            validation: ValidationSection::rounded(&r.validation),
        })
        .collect();
    let report = Report {
        input: cfg.input.display().to_string(),
        column: match &cfg.column {
            ColumnSelector::Name(n) => n.clone(),
            ColumnSelector::Index(i) => i.to_string(),
        },
        n: sample.len(),
        shift: sample.shift(),
        grid: (&cfg.grid).into(),
        alpha: cfg.alpha,
        p_adjust: cfg.adjustment.to_string(),
        max_expansions: cfg.max_expansions,
        ac_repetitions: cfg.ac_repetitions,
        seed: cfg.seed,
        raw_screening: ValidationSection::exact(&raw_screening),
        all_passed: results.iter().all(|r| r.validation.passed),
        methods,
    };
    Ok((sample, Outcome { report, results }))
}

/// Runs the command and writes every requested output. Returns whether all
/// validations passed.
pub fn run(cfg: &RunConfig) -> Result<bool> {
    let (sample, outcome) = compute(cfg)?;
    let json = serde_json::to_string_pretty(&outcome.report)? + "\n";
    match &cfg.report {
        Some(path) => std::fs::write(path, &json)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => std::io::stdout().write_all(json.as_bytes())?,
    }
    if let Some(path) = &cfg.transformed {
        write_transformed(path, &sample, &outcome.results, cfg.convention)?;
    }
    if let Some(path) = &cfg.plot_data {
        write_plot_data(path, &sample, &outcome.results, cfg.convention)?;
    }
    eprint!("{}", summary_table(&outcome.report));
    Ok(outcome.report.all_passed)
}

fn write_transformed(
    path: &PathBuf,
    sample: &Sample,
    results: &[EstimationResult],
    convention: Convention,
) -> Result<()> {
    let columns = results
        .iter()
        .map(|r| sample.transform(r.lambda_hat, convention))
        .collect::<boxcox_core::Result<Vec<_>>>()?;
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    let mut header = vec!["raw".to_string()];
    header.extend(results.iter().map(|r| r.method.to_string()));
    w.write_record(&header)?;
    for (i, raw) in sample.raw().iter().enumerate() {
        let mut row = vec![raw.to_string()];
        row.extend(columns.iter().map(|c| c[i].to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn write_plot_data(
    path: &PathBuf,
    sample: &Sample,
    results: &[EstimationResult],
    convention: Convention,
) -> Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    w.write_record(["series", "x", "density"])?;
    let mut series = vec![("raw".to_string(), sample.raw().to_vec())];
    for r in results {
        series.push((
            r.method.to_string(),
            sample.transform(r.lambda_hat, convention)?,
        ));
    }
    for (name, values) in series {
        for (x, d) in kde(&values, KDE_POINTS)? {
            w.write_record([name.clone(), x.to_string(), d.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn summary_table(r: &Report) -> String {
    let mut out = format!(
        "n = {}, shift = {}, raw SW/SF/JB p = {:.3e}/{:.3e}/{:.3e}\n",
        r.n, r.shift, r.raw_screening.raw_p.sw, r.raw_screening.raw_p.sf, r.raw_screening.raw_p.jb
    );
    out.push_str(&format!(
        "{:<6} {:>9} {:>8} {:>8} {:>8} {:>6}\n",
        "method", "lambda", "SW p", "SF p", "JB p", "valid"
    ));
    for m in &r.methods {
        let p = &m.validation.adjusted_p;
        out.push_str(&format!(
            "{:<6} {:>9.3} {:>8.3} {:>8.3} {:>8.3} {:>6}\n",
            m.method,
            m.lambda_hat,
            p.sw,
            p.sf,
            p.jb,
            if m.validation.passed { "yes" } else { "no" }
        ));
    }
    out
}
