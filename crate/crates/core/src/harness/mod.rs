//! Configuration, scenario orchestration, fitting, sweeps, verification
//! suites and CSV export.

pub mod config;
pub mod csv;
pub mod fit;
pub mod scenario;
pub mod sweep;
pub mod verify;

pub use config::{GridConfig, Output, ScenarioConfig};
pub use fit::{fit_decay, fit_tail, FitModel, FitResult};
pub use scenario::{run_scenario, write_outputs, ScenarioOutput};
pub use sweep::{analyze_sweep, sweep_nu, SweepSeries, SweepTable};
pub use verify::{gronwall_premise, verify_suite, GronwallReport, Suite, VerifyReport};
