//! Reference models: a finite-difference solver of the full PDE and the
//! two-state equivalent circuit, plus a timing harness.

pub mod fd;
pub mod tec;
pub mod timing;

pub use fd::{fd_solve, field_metrics, FdConfig, FdRunOptions, FdScheme, FdSolver, FdState, FdTrajectory};
pub use tec::{tec_metrics, tec_run, tec_step, TecModel, TecStepper};
pub use timing::{timing_harness, TimedModel, TimingRow};
