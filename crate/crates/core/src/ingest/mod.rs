//! Everything between raw logs and the canonical event store.

pub mod binning;
pub mod log;
pub mod merge;
pub mod ratings;
pub mod requests;
pub mod stabilize;
pub mod store;

pub use binning::{apply_bins, bin_request, compute_bins, optimal_partition, BinningSpec};
pub use log::{parse_event_log, parse_event_log_reader, write_event_log, ParsedLog, SensorMap, Warning};
pub use merge::{augment_channels, merge_households};
pub use ratings::{parse_ratings, parse_ratings_reader};
pub use requests::{parse_requests, parse_requests_reader, write_requests};
pub use stabilize::{stabilize, StabilizationConfig};
pub use store::{ingest, EventStore, IngestOptions, LogSource};
