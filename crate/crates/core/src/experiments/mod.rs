//! Reproduction harness: sweeps, Monte Carlo aggregation, comparison tables
//! and result files.

pub mod analytic;
pub mod config;
pub mod fig3;
pub mod fig4;
pub mod mc;
pub mod persist;
pub mod stats;
pub mod sweep;
pub mod table;

pub use analytic::analytic_table;
pub use config::ExperimentConfig;
pub use fig3::run_fig3;
pub use fig4::{run_fig4, Fig4Report};
pub use mc::{monte_carlo, run_replications, Executor};
pub use persist::{load_summary, persist, verify_manifest, Summary};
pub use stats::{AggregateStats, MetricStats, ReplicationRecord};
pub use sweep::run_sweep;
pub use table::{Cell, Table};
