//! Experiment harness for random regular digraph matrices.

pub mod error;
pub mod experiments;
pub mod report;
pub mod stats;

pub use error::{LabError, Result};
pub use experiments::{
    coupling_audit, d2_cycle_experiment, discrepancy_audit, erdos_oracle, mc_singularity, perm_sum_experiment,
    restricted_sweep, AuditMode, CellEstimate, CouplingAuditSpec, CouplingVerdict, D2Row, ErdosResult,
    ExperimentSpec, MCEstimate, PermSumRow,
};
pub use report::{run_report, ReportFiles};
