//! Bounded search for closed quasigeodesics through vertices.

mod closed;
mod push;
mod segments;

pub use closed::{assemble_closed, enumerate_all, search, SearchConfig, SearchResult};
pub use push::{push_to_vertex, PushError};
pub use segments::{enumerate_segments, GeodesicSegment, SegmentList, DEFAULT_NODE_BUDGET};
