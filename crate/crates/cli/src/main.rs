use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use boxcox_cli::estimate::{self, RunConfig};
use boxcox_cli::ingest::ColumnSelector;
use boxcox_cli::parse_methods;
use boxcox_cli::simulate::{self, SimulateConfig};
use boxcox_core::estimate::EstimateConfig;
use boxcox_core::grid::LambdaGrid;
use boxcox_core::simulation::Study;
use boxcox_core::transform::Convention;
use boxcox_core::validation::PAdjust;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "boxcox",
    version,
    about = "Box-Cox lambda estimation by normality-test grid search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate lambda for one data column.
    Estimate(EstimateArgs),
    /// Run a Monte Carlo accuracy study and write CSV.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    /// (y^lambda - 1) / lambda
    Conventional,
    /// y^lambda
    Simple,
}

#[derive(Clone, Copy, ValueEnum)]
enum AdjustArg {
    /// Benjamini-Yekutieli
    By,
    /// Benjamini-Hochberg
    Bh,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    lambda_min: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    lambda_max: f64,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    /// Validation significance level.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Multiplicity adjustment for the validation p-values.
    #[arg(long, value_enum, default_value_t = AdjustArg::By)]
    p_adjust: AdjustArg,
    /// Times the grid may be widened when the optimum sits on an endpoint.
    #[arg(long, default_value_t = 3)]
    max_expansions: usize,
    /// Artificial-covariate repetitions.
    #[arg(long, default_value_t = 100)]
    ac_reps: usize,
}

impl GridArgs {
    fn estimate_config(&self) -> Result<EstimateConfig> {
        Ok(EstimateConfig {
            grid: LambdaGrid::new(self.lambda_min, self.lambda_max, self.step)?,
            alpha: self.alpha,
            max_expansions: self.max_expansions,
            adjustment: match self.p_adjust {
                AdjustArg::By => PAdjust::BenjaminiYekutieli,
                AdjustArg::Bh => PAdjust::BenjaminiHochberg,
            },
        })
    }
}

#[derive(Args)]
struct EstimateArgs {
    /// CSV or whitespace-separated text file.
    #[arg(long)]
    input: PathBuf,
    /// Column name or 1-based index.
    #[arg(long, default_value = "1")]
    column: ColumnSelector,
    /// sw, ad, cvm, pt, sf, lt, jb, ac or all; comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    method: Vec<String>,
    #[command(flatten)]
    grid: GridArgs,
    /// Seed for the artificial covariate.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// CSV of the raw data and each method's transform.
    #[arg(long)]
    transformed: Option<PathBuf>,
    /// CSV of kernel density estimates (series, x, density).
    #[arg(long)]
    plot_data: Option<PathBuf>,
    /// Transform written to --transformed and --plot-data.
    #[arg(long, value_enum, default_value_t = ConventionArg::Conventional)]
    convention: ConventionArg,
}

#[derive(Args)]
struct SimulateArgs {
    /// I or II.
    #[arg(long)]
    study: Study,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    mu: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    sigma: Option<Vec<f64>>,
    /// True lambda values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lambda: Option<Vec<f64>>,
    /// Methods to evaluate; defaults to sw,ad for study I and all for study II.
    #[arg(long, value_delimiter = ',')]
    method: Option<Vec<String>>,
    #[arg(long, default_value_t = 1000)]
    replications: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    grid: GridArgs,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Estimate(a) => {
            let est = a.grid.estimate_config()?;
            let cfg = RunConfig {
                input: a.input,
                column: a.column,
                methods: parse_methods(&a.method).map_err(|e| anyhow!(e))?,
                grid: est.grid,
                alpha: est.alpha,
                adjustment: est.adjustment,
                max_expansions: est.max_expansions,
                seed: a.seed,
                ac_repetitions: a.grid.ac_reps,
                convention: match a.convention {
                    ConventionArg::Conventional => Convention::Conventional,
                    ConventionArg::Simple => Convention::Simple,
                },
                report: a.report,
                transformed: a.transformed,
                plot_data: a.plot_data,
            };
            let passed = estimate::run(&cfg)?;
            Ok(if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Simulate(a) => {
            let cfg = SimulateConfig {
                study: a.study,
                n: a.n,
                mu: a.mu,
                sigma: a.sigma,
                lambda: a.lambda,
                methods: a
                    .method
                    .map(|m| parse_methods(&m))
                    .transpose()
                    .map_err(|e| anyhow!(e))?,
                replications: a.replications,
                seed: a.seed,
                ac_repetitions: a.grid.ac_reps,
                estimate: a.grid.estimate_config()?,
                output: a.output,
            };
            simulate::run(&cfg)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    // Usage errors exit 1; 2 is reserved for failed validation.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
