//! Optical flow for event cameras by space-time triplet matching.
//!
//! Each event is matched against earlier events of the same polarity in a
//! small space-time neighborhood. Three events lying on a line at constant
//! velocity form a triplet; an event's flow is the weighted mean velocity of
//! the triplets it closes. Everything runs on the CPU, one event at a time.
//!
//! # Modules
//! - [`events`]: event type, normalization and polarity split.
//! - [`matcher`]: the incremental [`Matcher`], the batch driver and a
//!   brute-force reference.
//! - [`postprocess`]: voxelized flow and the 3x3 valid-neighbor filter.
//! - [`eval`]: AEE / %Out, images of warped events, flow warp loss and the
//!   triplet direction histogram.
//! - [`synthetic`]: moving-shape scenes with analytic ground truth.
//! - [`io`]: event text files, Middlebury `.flo`, PNG color wheel.
//!
//! # Feature flags
//! - `parallel` (default): rayon-backed batch driver, oracle and filters.
//!   Without it every path runs sequentially; results are identical.

pub mod error;
pub mod eval;
pub mod events;
pub mod field;
pub mod io;
pub mod matcher;
pub mod postprocess;
pub mod synthetic;
pub mod throughput;

pub use error::{Error, Result};
pub use events::{
    normalize_stream, split_by_polarity, Event, EventBatch, Normalized, Polarity, PolarityEncoding,
    RawEvent, Resolution,
};
pub use field::FlowField;
#[cfg(feature = "parallel")]
pub use matcher::process_batch_parallel;
pub use matcher::{
    brute_force_flow, process_batch, process_batch_sequential, process_batch_traced,
    triplet_velocity, triplet_weight, BatchOutput, Flow, FlowRecord, IndexMap, Matcher,
    MatcherParams, TimeUnit, Triplet, Weighting,
};
