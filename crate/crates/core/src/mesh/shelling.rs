use std::collections::{BTreeMap, BTreeSet};

use super::intrinsic::{next, prev, FaceId, HalfEdge, IntrinsicMesh};
use super::MeshError;

/// Face order whose every proper prefix is a disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shelling {
    pub order: Vec<FaceId>,
}

const SHELLING_BUDGET: usize = 1_000_000;

/// Greedy shelling by face addition (lowest admissible face id first), with
/// backtracking if the greedy choice gets stuck. The result is checked with
/// [`is_prefix_disk`] before being returned.
pub fn compute_shelling(mesh: &IntrinsicMesh) -> Result<Shelling, MeshError> {
    let nf = mesh.num_faces();
    let mut in_prefix = vec![false; nf];
    let mut vertex_count = vec![0usize; mesh.num_vertices()];
    let mut order: Vec<FaceId> = Vec::with_capacity(nf);
    // Candidate index tried next at each depth.
    let mut cursor: Vec<usize> = vec![0];
    let mut steps = 0usize;

    let admissible = |f: FaceId, in_prefix: &[bool], vertex_count: &[usize], len: usize| -> bool {
        if len == 0 {
            return true;
        }
        let face = mesh.face(f);
        let shared: Vec<usize> = (0..3).filter(|&s| in_prefix[face.twin[s].face]).collect();
        match shared.len() {
            0 => false,
            1 => vertex_count[face.v[shared[0]]] == 0,
            2 => true,
            _ => len + 1 == nf,
        }
    };

    while order.len() < nf {
        steps += 1;
        if steps > SHELLING_BUDGET {
            return Err(MeshError::ShellingNotFound);
        }
        let depth = order.len();
        let start = cursor[depth];
        let found = (start..nf).find(|&f| {
            !in_prefix[f] && admissible(f, &in_prefix, &vertex_count, depth)
        });
        match found {
            Some(f) => {
                cursor[depth] = f + 1;
                in_prefix[f] = true;
                for &v in &mesh.face(f).v {
                    vertex_count[v] += 1;
                }
                order.push(f);
                cursor.push(0);
            }
            None => {
                cursor.pop();
                let Some(f) = order.pop() else {
                    return Err(MeshError::ShellingNotFound);
                };
                in_prefix[f] = false;
                for &v in &mesh.face(f).v {
                    vertex_count[v] -= 1;
                }
            }
        }
    }

    for i in 1..nf {
        if !is_prefix_disk(mesh, &order[..i]) {
            return Err(MeshError::Internal(format!("shelling prefix {i} is not a disk")));
        }
    }
    Ok(Shelling { order })
}

/// Disk test for a set of faces: connected, Euler characteristic one and a
/// boundary that is a single simple cycle.
pub fn is_prefix_disk(mesh: &IntrinsicMesh, faces: &[FaceId]) -> bool {
    if faces.is_empty() {
        return false;
    }
    let set: BTreeSet<FaceId> = faces.iter().cloned().collect();
    if set.len() != faces.len() {
        return false;
    }
    let mut verts = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for &f in &set {
        let face = mesh.face(f);
        verts.extend(face.v.iter().cloned());
        edges.extend(face.edge.iter().cloned());
    }
    let chi = verts.len() as i64 - edges.len() as i64 + set.len() as i64;
    if chi != 1 {
        return false;
    }

    // Connectivity through shared sides.
    let first = *set.iter().next().unwrap();
    let mut seen = BTreeSet::from([first]);
    let mut stack = vec![first];
    while let Some(f) = stack.pop() {
        for s in 0..3 {
            let g = mesh.face(f).twin[s].face;
            if set.contains(&g) && seen.insert(g) {
                stack.push(g);
            }
        }
    }
    if seen.len() != set.len() {
        return false;
    }

    // Boundary half-edges keyed by start vertex.
    let mut out: BTreeMap<usize, Vec<HalfEdge>> = BTreeMap::new();
    let mut total = 0;
    for &f in &set {
        let face = mesh.face(f);
        for s in 0..3 {
            if !set.contains(&face.twin[s].face) {
                out.entry(face.v[next(s)]).or_default().push(HalfEdge::new(f, s));
                total += 1;
            }
        }
    }
    if total < 3 || out.values().any(|v| v.len() != 1) {
        return false;
    }
    let start = *out.keys().next().unwrap();
    let mut v = start;
    let mut walked = 0;
    loop {
        let h = out[&v][0];
        v = mesh.face(h.face).v[prev(h.side)];
        walked += 1;
        if v == start || walked > total {
            break;
        }
        if !out.contains_key(&v) {
            return false;
        }
    }
    walked == total
}

/// Boundary cycle of a disk of faces, as half-edges with the disk on the left.
pub(crate) fn disk_boundary(mesh: &IntrinsicMesh, faces: &[FaceId]) -> Vec<HalfEdge> {
    let set: BTreeSet<FaceId> = faces.iter().cloned().collect();
    let mut out: BTreeMap<usize, HalfEdge> = BTreeMap::new();
    for &f in &set {
        let face = mesh.face(f);
        for s in 0..3 {
            if !set.contains(&face.twin[s].face) {
                out.insert(face.v[next(s)], HalfEdge::new(f, s));
            }
        }
    }
    let Some((&start, _)) = out.iter().next() else {
        return Vec::new();
    };
    let mut cycle = Vec::with_capacity(out.len());
    let mut v = start;
    loop {
        let h = out[&v];
        cycle.push(h);
        v = mesh.face(h.face).v[prev(h.side)];
        if v == start || cycle.len() > out.len() {
            break;
        }
    }
    cycle
}
