use std::collections::BTreeMap;

use nalgebra::Point3;

use super::intrinsic::{next, prev, FaceInput, HalfEdge, IntrinsicMesh, Vec2};
use super::MeshError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum SideKey {
    /// Half `h` of edge `e`, counted from the canonical start.
    Half(usize, u8),
    /// Centroid to corner `k` of face `f`.
    ToCorner(usize, u8),
    /// Centroid to midpoint of side `s` of face `f`.
    ToMid(usize, u8),
}

/// Barycentric subdivision: every face is split into six by its centroid and
/// side midpoints. The metric is unchanged.
pub fn barycentric_subdivide(mesh: &IntrinsicMesh) -> Result<IntrinsicMesh, MeshError> {
    let n = mesh.num_vertices();
    let m = mesh.num_edges();
    let mut faces: Vec<FaceInput> = Vec::with_capacity(6 * mesh.num_faces());
    let mut keys: Vec<[SideKey; 3]> = Vec::with_capacity(6 * mesh.num_faces());

    for (fi, f) in mesh.faces().iter().enumerate() {
        let c = f.corner;
        let g = (c[0] + c[1] + c[2]) / 3.0;
        let gid = n + m + fi;
        let mid = |s: usize| -> (usize, Vec2) {
            (n + f.edge[s], (c[next(s)] + c[prev(s)]) * 0.5)
        };
        let half_near = |s: usize, corner: usize| -> u8 {
            let start = if f.canonical[s] { next(s) } else { prev(s) };
            if corner == start {
                0
            } else {
                1
            }
        };
        for k in 0..3 {
            let (m2, p2) = mid(prev(k));
            let (m1, p1) = mid(next(k));
            // (c_k, M_{k+2}, G)
            let tri = [(f.v[k], c[k]), (m2, p2), (gid, g)];
            faces.push(face_from(tri));
            keys.push([
                SideKey::ToMid(fi, prev(k) as u8),
                SideKey::ToCorner(fi, k as u8),
                SideKey::Half(f.edge[prev(k)], half_near(prev(k), k)),
            ]);
            // (c_k, G, M_{k+1})
            let tri = [(f.v[k], c[k]), (gid, g), (m1, p1)];
            faces.push(face_from(tri));
            keys.push([
                SideKey::ToMid(fi, next(k) as u8),
                SideKey::Half(f.edge[next(k)], half_near(next(k), k)),
                SideKey::ToCorner(fi, k as u8),
            ]);
        }
    }

    let mut by_key: BTreeMap<SideKey, Vec<HalfEdge>> = BTreeMap::new();
    for (fi, ks) in keys.iter().enumerate() {
        for (s, k) in ks.iter().enumerate() {
            by_key.entry(*k).or_default().push(HalfEdge::new(fi, s));
        }
    }
    let mut glue = Vec::with_capacity(by_key.len());
    for (k, hs) in by_key {
        if hs.len() != 2 {
            return Err(MeshError::Internal(format!("subdivision key {k:?} used {} times", hs.len())));
        }
        glue.push((hs[0], hs[1]));
    }

    let mut out = IntrinsicMesh::from_parts(&faces, &glue, mesh.eps())?;
    if let Some(pos) = mesh.positions() {
        let mut p: Vec<Point3<f64>> = pos.to_vec();
        for e in mesh.edges() {
            p.push(nalgebra::center(&pos[e.v[0]], &pos[e.v[1]]));
        }
        for f in mesh.faces() {
            let s = pos[f.v[0]].coords + pos[f.v[1]].coords + pos[f.v[2]].coords;
            p.push(Point3::from(s / 3.0));
        }
        out.set_positions(Some(p));
    }
    out.set_subdivisions(mesh.subdivisions() + 1);
    Ok(out)
}

fn face_from(tri: [(usize, Vec2); 3]) -> FaceInput {
    let d = |a: usize, b: usize| (tri[a].1 - tri[b].1).norm();
    FaceInput { v: [tri[0].0, tri[1].0, tri[2].0], len: [d(1, 2), d(2, 0), d(0, 1)] }
}
