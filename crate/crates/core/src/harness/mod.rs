//! Config-driven runs, communication accounting, cost sweeps, the audit
//! battery, and report rendering.

mod config;
mod cost;
mod render;
mod run;
mod suite;
mod sweep;

pub use config::{auto_n, auto_p, DatasetSource, Resolved, RunConfig};
pub use cost::{
    closed_form_total, fit_through_origin, remark_total, theorem_bound, threshold_reference, CostReport, LinearFit,
};
pub use render::{render, Format, Report};
pub use run::{run_protocol, RunReport, ThetaRun};
pub use suite::{run_audit_suite, select_cases, AuditError, SuiteReport};
pub use sweep::{cost_table, parse_range, CostRow, CostTable};

/// Bumped whenever a report's JSON shape changes.
pub const SCHEMA_VERSION: u32 = 1;
