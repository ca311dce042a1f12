//! Transaction files, synthetic data, run reports.

mod datagen;
mod report;
mod transactions;

pub use datagen::{generate_synthetic, write_synthetic, GenSpec, BLOCK_SIZE};
pub use report::{emit_report, ConfigEcho, ReportFormat, RunReport, CSV_COLUMNS};
pub use transactions::{
    parse_transactions, read_transactions, read_transactions_capped, write_transactions,
    DEFAULT_LINE_CAP,
};
