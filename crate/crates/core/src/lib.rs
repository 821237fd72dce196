//! Box-Cox λ estimation by normality-statistic grid search, with an
//! artificial-covariate estimator and Monte Carlo accuracy studies.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod covariate;
pub mod error;
pub mod estimate;
pub mod grid;
pub mod normality;
pub mod simulation;
pub mod stats;
pub mod transform;
pub mod validation;

pub use covariate::{ac_estimate, ols_sse, AcConfig};
pub use error::{Error, Result};
pub use estimate::{estimate, profile, EstimateConfig, EstimationResult, Method};
pub use grid::LambdaGrid;
pub use normality::{evaluate, Direction, TestKind, TestOutcome};
pub use simulation::{
    run_study, summarize, Accuracy, SimulationOptions, SimulationSummary, Study, StudyCondition,
};
pub use transform::{
    ensure_positive, inverse_transform, transform, Convention, InverseConvention, Sample,
};
pub use validation::{validate, PAdjust, ValidationReport};
