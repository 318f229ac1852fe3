//! Experiment harness behind the `hblab` binary: parameter resolution,
//! seeded experiment runners, and CSV/JSON rendering.

pub mod experiment;
pub mod render;
pub mod spec;

pub use experiment::{
    build_tables, leakage_for_spec, run_attack_campaign, run_auth_sim, surface_for_spec,
    tables_for_spec, CampaignSummary, ScenarioRow, TABLE_PARAMETER_SETS, TABLE_QUERY_COUNTS,
};
pub use spec::{CliError, CommonArgs, ExperimentSpec, OutputFormat, SurfaceArgs, SurfaceSpec};
