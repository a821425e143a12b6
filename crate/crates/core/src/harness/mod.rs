//! Experiment orchestration: configuration, grid search, repeated runs, and
//! the synthetic study pipeline.
//!
//! The orchestration layer is fixed to `f64`; the numeric core underneath
//! stays generic.

mod config;
mod grid;
mod report_io;
mod run;

pub use config::{
    DatasetConfig, ExperimentConfig, GridConfig, MaskKind, Method, Overrides, RunConfig,
    SplitConfig, StudyConfig, SyntheticConfig, TrainSection,
};
pub use grid::{fit_method, grid_search, CellResult, GridCell, GridResult, MethodPredictor, TrainedMethod};
pub use report_io::{
    write_bucket_csv, write_experiment, write_grid_csv, write_mae_csv, write_manifest,
    write_mean_report, write_quartile_csv, write_study, write_summary_json, ManifestEntry,
};
pub use run::{
    materialize_dataset, run_experiment, run_repeat, run_synthetic_study, ExperimentResult,
    MeanBucket, MeanCell, MeanReport, RepeatResult, StudyResult, StudyRun,
};

use thiserror::Error;

use crate::data::DataError;
use crate::eval::EvalError;
use crate::models::TrainError;
use crate::synthgen::SynthError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("config error: {0}")]
    Config(String),
    #[error("all {0} grid cells failed")]
    AllCellsFailed(usize),
}
