//! Margin-reporting checks of the block-matrix inequalities and the batch
//! driver that runs them over seeded random instances.
//!
//! A report is *sound* when its right-hand side uses only certified upper
//! bounds (`ω`, `r`, `dist(X, ℂI)`, the indiameter). Reports built on the
//! lower estimate `δ̂₂` are informational and never count as violations.

mod batch;
mod report;
mod statements;

pub use batch::{batch_verify, default_p_grid, BatchConfig, BatchResult, StatementSummary, BATCH_SCHEMA};
pub use report::{MarginReport, ReportKind, StatementId, REPORT_SCHEMA, WITNESS_MARGIN};
pub use statements::{
    cor36_report, cor37_report, prop39_report, verify_cor22, verify_cor23, verify_cor24, verify_cor35, verify_cor36,
    verify_cor37, verify_prop34, verify_prop39, verify_reverse, verify_thm11, verify_thm21, BlockInstance,
    Prop34Outcome, PROP34_COMPLETIONS,
};
