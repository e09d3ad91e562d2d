pub mod diskflow;
pub mod geometry;
pub mod mesh;
pub mod pipeline;
pub mod search;
pub mod verify;
