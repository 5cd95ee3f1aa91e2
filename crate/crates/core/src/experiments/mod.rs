//! Seeded Monte-Carlo sweeps over model parameters, CSV results and a
//! heatmap renderer.

mod config;
mod plot;
mod sweep;
mod trial;
mod verify;

pub use config::{CheckKind, KModeConfig, SweepConfig, TrialConfig, VariantConfig};
pub use plot::{phase_diagram, RAMP};
pub use sweep::{
    read_rows, run_sweep, summarize, sweep_csv, write_csv, ResultRow, SweepOutput, CSV_COLUMNS,
};
pub use trial::{cell_seed, check_margins, run_trial, trial_seed, TrialResult, EIG_STREAM};
pub use verify::verify;
