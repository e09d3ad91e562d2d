//! Intrinsic polyhedral spheres: representation, validation, preprocessing
//! and the derived metric quantities.

mod error;
pub mod generate;
mod intrinsic;
pub mod io;
mod shelling;
mod subdivide;

pub use error::MeshError;
pub use intrinsic::{
    corner_angles, cross, next, prev, wrap, Edge, EdgeId, Face, FaceId, FaceInput, FanEntry,
    GlobalQuantities, HalfEdge, IntrinsicMesh, Vec2, Vertex, VertexData, VertexId,
    DEFAULT_TOLERANCE,
};
pub use shelling::{compute_shelling, is_prefix_disk, Shelling};
pub(crate) use shelling::disk_boundary;
pub use subdivide::barycentric_subdivide;

/// Subdivides at most twice until the mesh has neither loops nor multiple
/// edges; fails if that does not suffice.
pub fn preprocess(mesh: IntrinsicMesh) -> Result<IntrinsicMesh, MeshError> {
    let mut mesh = mesh;
    let mut rounds = 0;
    while mesh.has_loops_or_multi_edges() {
        if rounds == 2 {
            return Err(MeshError::Internal(
                "loops or multiple edges remain after two subdivisions".into(),
            ));
        }
        mesh = barycentric_subdivide(&mesh)?;
        rounds += 1;
        mesh.set_subdivisions(rounds);
    }
    Ok(mesh)
}
