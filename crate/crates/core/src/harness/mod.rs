//! Seeded Monte-Carlo experiments tying the selector, the oracle, the rate
//! functionals and the confidence balls together.

mod config;
mod records;
mod runner;
mod seed;

pub use config::{parse_config, ExperimentConfig, SignSpec, SignalSpec, ThetaCheck};
pub use records::{read_reps_csv, write_reps_csv, RepRecord, REPS_CSV_HEADER};
pub use runner::{
    run_experiment, run_experiment_with, threads_from_env, Execution, ExperimentOutcome, ExperimentReport,
    THREADS_ENV,
};
pub use seed::{splitmix64, stream_rng, stream_seed};
