//! Experiment orchestration: scenario configs, sweeps, CSV output,
//! comparison reports and the figure recipes.

pub mod compare;
pub mod config;
pub mod reproduce;
pub mod sweep;

pub use compare::{compare, CompareOptions, ComparisonReport, Regime};
pub use config::{
    parse_config, parse_number, ConfigError, LawSpec, ScenarioConfig, ScenarioLaws, Sweep,
};
pub use reproduce::{reproduce, Figure, FigureFile, ReproduceOptions};
pub use sweep::{
    read_csv, run_sweep, write_csv, CsvError, ResultRow, SimColumns, CSV_HEADER, CSV_SCHEMA_VERSION,
};
