//! Timescale sweeps comparing the true error with every estimate and bound,
//! plus regime detection and CSV output.

mod detect;
mod output;
mod sweep;

pub use detect::{detect_hyperadiabatic, DEFAULT_DETECT_TOL, DEFAULT_DETECT_WINDOW};
pub use output::{emit_csv, emit_plot_data, CSV_HEADER};
pub use sweep::{run_sweep, Diagnostic, Scenario, ScheduleRef, Spacing, SweepConfig, SweepRecord};
