//! Detecting and resolving conflicts between residents who want the same
//! shared smart-home service configured differently at the same time.
//!
//! The pipeline runs from raw sensor logs ([`ingest`]) through conflict
//! detection ([`detect`]) and preference extraction ([`preference`]) to a
//! resolution that ranks candidate items by their distance from an ideal
//! compromise ([`aggregate`]). [`evaluate`] compares that resolver with
//! the classic group-recommendation strategies.
//!
//! ```
//! use iot_conflict::demo;
//!
//! let resolution = demo::run(None).unwrap();
//! assert_eq!(resolution.chosen, ["Ch2", "Ch3"]);
//! ```

pub mod aggregate;
pub mod commands;
pub mod demo;
pub mod detect;
pub mod error;
pub mod evaluate;
pub mod ingest;
pub mod linalg;
pub mod model;
pub mod preference;
pub mod provenance;
pub mod synthetic;

pub use error::{Error, Result};
pub use model::{
    AttributeValue, ConflictSituation, Location, ResidentId, ServiceEvent, ServiceId, ServiceRequest, TimeOfDay,
    TimeOfDayInterval,
};
pub use provenance::RunConfig;
