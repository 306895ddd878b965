//! Snapshot frames, CSV series and TOML documents.

mod csv;
mod report;
mod snapshot;

pub use csv::{export_envelope, export_timeseries, import_timeseries};
pub use report::{
    config_hash, read_constants, read_report, read_toml, to_toml, write_constants, write_report, write_toml,
    ReportDocument,
};
pub use snapshot::{read_frame, read_snapshot, write_snapshot, SnapshotError, SnapshotFrame, MAGIC, VERSION};
