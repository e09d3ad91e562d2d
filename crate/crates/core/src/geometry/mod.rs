//! Points, directions and straight segments on an intrinsic surface.

mod curve;
mod point;
mod ray;
mod strip;
mod svg;
mod word;

pub use curve::PLCurve;
pub use point::{
    angle_rule_defect, common_faces, side_angles_at_vertex, vertex_angle, vertex_direction, Direction, Side,
    SurfacePoint,
};
pub use ray::{trace_ray, RayTrace};
pub use strip::{trace_segment, unfold_strip, Realizability, RejectReason, StripError, UnfoldedStrip};
pub use svg::strips_svg;
pub use word::{canonical_word, format_word, parse_word, Letter, WordError};
