//! File formats.

pub mod flo;
pub mod render;
pub mod text;

pub use flo::{read_flo, write_flo};
pub use render::{render_flow, write_png};
pub use text::{read_events, write_events, write_flow_records};
