use serde::{Deserialize, Serialize};

use crate::geometry::{side_angles_at_vertex, vertex_angle, PLCurve, SurfacePoint};
use crate::mesh::{cross, next, prev, FaceId, IntrinsicMesh, Vec2, VertexId};

/// Position of a point or an open segment relative to the closed star of a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// A boundary incidence of an arc. The gate is open to the right when the
/// curve enters the star interior just after it, open to the left when it
/// comes from the interior just before it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub point: usize,
    pub open_left: bool,
    pub open_right: bool,
}

/// Connected component of the curve inside a closed star, as a cyclic run of
/// point indices `start..=end`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: usize,
    pub end: usize,
    pub gates: Vec<Gate>,
    /// The whole curve lies in the open star.
    pub interior_loop: bool,
}

impl Arc {
    pub fn front(&self) -> Option<&Gate> {
        self.gates.first()
    }

    pub fn exit(&self) -> Option<&Gate> {
        self.gates.last()
    }
}

/// Apex angles at the star center of the regions right and left of a pair
/// of gates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionAngles {
    pub right: f64,
    pub left: f64,
}

fn in_star(mesh: &IntrinsicMesh, i: VertexId, f: FaceId) -> bool {
    mesh.face(f).corner_of(i).is_some()
}

/// Whether side `s` of face `f` lies on the link of `i`.
fn is_link_side(mesh: &IntrinsicMesh, i: VertexId, f: FaceId, s: usize) -> bool {
    let face = mesh.face(f);
    if face.v[next(s)] == i || face.v[prev(s)] == i {
        return false;
    }
    face.v[s] == i || in_star(mesh, i, face.twin[s].face)
}

pub fn point_membership(mesh: &IntrinsicMesh, i: VertexId, q: &SurfacePoint) -> Membership {
    match *q {
        SurfacePoint::Vertex { vertex } => {
            if vertex == i {
                Membership::Interior
            } else if mesh.edge_between(i, vertex).is_some() {
                Membership::Boundary
            } else {
                Membership::Outside
            }
        }
        SurfacePoint::Edge { edge, .. } => {
            let e = mesh.edge(edge);
            if e.v.contains(&i) {
                return Membership::Interior;
            }
            let h = e.half[0];
            if is_link_side(mesh, i, h.face, h.side) {
                Membership::Boundary
            } else {
                Membership::Outside
            }
        }
        SurfacePoint::Face { face, .. } => {
            if in_star(mesh, i, face) {
                Membership::Interior
            } else {
                Membership::Outside
            }
        }
    }
}

/// Membership of the open segment `k` of the curve.
pub fn segment_membership(mesh: &IntrinsicMesh, i: VertexId, curve: &PLCurve, k: usize) -> Membership {
    let f = curve.faces[k];
    let face = mesh.face(f);
    let (a, b) = curve.segment(mesh, k);
    let eps = mesh.eps();
    let on_side = |s: usize| face.side_distance(s, a) <= eps && face.side_distance(s, b) <= eps;
    match face.corner_of(i) {
        Some(c) => {
            if on_side(c) {
                Membership::Boundary
            } else {
                Membership::Interior
            }
        }
        None => {
            if (0..3).any(|s| on_side(s) && is_link_side(mesh, i, f, s)) {
                Membership::Boundary
            } else {
                Membership::Outside
            }
        }
    }
}

/// Connected components of the curve inside the closed star of `i`, in
/// curve order. A curve entirely in the open star yields one gateless arc
/// flagged as an interior loop.
pub fn decompose_arcs(mesh: &IntrinsicMesh, curve: &PLCurve, i: VertexId) -> Vec<Arc> {
    let n = curve.points.len();
    let segs = curve.num_segments();
    if n == 0 {
        return Vec::new();
    }
    let pm: Vec<Membership> = curve.points.iter().map(|q| point_membership(mesh, i, q)).collect();
    let sm: Vec<Membership> = (0..segs).map(|k| segment_membership(mesh, i, curve, k)).collect();
    let seg_in = |k: usize| k < segs && sm[k] != Membership::Outside;
    let seg_interior = |k: usize| k < segs && sm[k] == Membership::Interior;

    if curve.closed && sm.iter().all(|&m| m == Membership::Interior) && pm.iter().all(|&m| m == Membership::Interior) {
        return vec![Arc { start: 0, end: n - 1, gates: Vec::new(), interior_loop: true }];
    }

    let gate_at = |p: usize| -> Option<Gate> {
        if pm[p] != Membership::Boundary {
            return None;
        }
        let before = if p > 0 { Some(p - 1) } else if curve.closed { Some(segs - 1) } else { None };
        let open_left = before.is_some_and(seg_interior);
        let open_right = seg_interior(p);
        (open_left || open_right).then_some(Gate { point: p, open_left, open_right })
    };

    // Start the cyclic walk just after a segment leaving the closed star, or
    // at a point outside it, so that no arc wraps around index 0.
    let origin = if curve.closed {
        (0..n)
            .find(|&p| pm[p] == Membership::Outside)
            .or_else(|| (0..segs).find(|&k| !seg_in(k)).map(|k| (k + 1) % n))
    } else {
        Some(0)
    };
    let Some(origin) = origin else {
        // Every point and segment is in the closed star but some point is on
        // its boundary: a single arc around the whole curve.
        let first = (0..n).find(|&p| gate_at(p).is_some()).unwrap_or(0);
        let gates = (0..n).map(|d| (first + d) % n).filter_map(gate_at).collect();
        return vec![Arc { start: first, end: (first + n - 1) % n, gates, interior_loop: false }];
    };

    let mut arcs = Vec::new();
    let mut d = 0;
    while d < n {
        let start = (origin + d) % n;
        if pm[start] == Membership::Outside {
            d += 1;
            continue;
        }
        let mut gates = Vec::new();
        let mut end;
        loop {
            end = (origin + d) % n;
            gates.extend(gate_at(end));
            d += 1;
            if d >= n || !seg_in(end) {
                break;
            }
        }
        arcs.push(Arc { start, end, gates, interior_loop: false });
    }
    arcs
}

/// Cone-angle coordinate at `i` of a point of the star other than `i`,
/// measured in face `f` of the star.
pub fn star_angle(mesh: &IntrinsicMesh, i: VertexId, f: FaceId, q: &SurfacePoint) -> f64 {
    let face = mesh.face(f);
    let c = face.corner_of(i).expect("face lies in the star");
    let p = q.chart_in(mesh, f).expect("point lies on the face");
    vertex_angle(mesh, i, f, p - face.corner[c])
}

/// Distance from the star center, measured in face `f`.
pub fn star_radius(mesh: &IntrinsicMesh, i: VertexId, f: FaceId, q: &SurfacePoint) -> f64 {
    let face = mesh.face(f);
    let c = face.corner_of(i).expect("face lies in the star");
    (q.chart_in(mesh, f).expect("point lies on the face") - face.corner[c]).norm()
}

/// Region angles for gates at cone-angle coordinates `a` and `b`: the
/// regions are bounded by the spokes towards the gates, and the right one is
/// on the right of the path from `a` through the center to `b`.
pub fn region_angles_from(mesh: &IntrinsicMesh, i: VertexId, a: f64, b: f64) -> RegionAngles {
    let (left, right) = side_angles_at_vertex(mesh, i, a, b);
    RegionAngles { right, left }
}

/// Region angles for two gates on the star boundary, each located in the
/// lowest star face containing it.
pub fn region_angles(mesh: &IntrinsicMesh, i: VertexId, a: &SurfacePoint, b: &SurfacePoint) -> RegionAngles {
    let face_of = |q: &SurfacePoint| {
        q.faces(mesh)
            .into_iter()
            .find(|&f| in_star(mesh, i, f))
            .expect("gate lies in the star")
    };
    let ta = star_angle(mesh, i, face_of(a), a);
    let tb = star_angle(mesh, i, face_of(b), b);
    region_angles_from(mesh, i, ta, tb)
}

/// Signed angle swept around the corner at `i` by segment `k`, or `None`
/// when the segment touches the center.
pub(crate) fn swept_angle(mesh: &IntrinsicMesh, i: VertexId, curve: &PLCurve, k: usize) -> Option<f64> {
    let face = mesh.face(curve.faces[k]);
    let c = face.corner_of(i)?;
    let (a, b) = curve.segment(mesh, k);
    let (u, v): (Vec2, Vec2) = (a - face.corner[c], b - face.corner[c]);
    let eps = mesh.eps();
    if u.norm() <= eps || v.norm() <= eps {
        return None;
    }
    Some(cross(u, v).atan2(u.dot(&v)))
}
