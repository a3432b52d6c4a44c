//! TSPLIB ingestion, replicate sweeps and CSV reports for [`mmga_core`].

pub mod experiment;
pub mod optima;
pub mod report;
pub mod tsplib;

pub use experiment::{
    derive_seed, run_experiment, run_experiment_observed, ExperimentError, ExperimentResult,
    ExperimentSpec, RunRecord, SpecError, SpecOverrides,
};
pub use optima::known_optimum;
pub use tsplib::{load_tsplib, parse_tsplib, TsplibError};
