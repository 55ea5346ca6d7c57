//! Benchmark harness: exact solutions, error norms, case drivers, and
//! reporting.

pub mod cases;
pub mod driver;
pub mod norms;

pub use cases::{FreestreamCase, SmoothPeriodicField, ViscousShockCase, VortexCase};
pub use driver::{
    convergence_csv, convergence_driver, run_case, CaseKind, CaseSpec, ConvergenceRow,
    MonitorRow, RunResult,
};
pub use norms::{error_norms, linf_deviation, rate, ErrorReport};
