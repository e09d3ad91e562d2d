use serde::{Deserialize, Serialize};

use crate::mesh::{next, prev, EdgeId, FaceId, IntrinsicMesh, Vec2, VertexId};

/// A point on the surface, stored in its lowest-dimensional cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SurfacePoint {
    Vertex { vertex: VertexId },
    /// `t` runs along the edge's canonical orientation (lower vertex id first).
    Edge { edge: EdgeId, t: f64 },
    Face { face: FaceId, bary: [f64; 3] },
}

impl SurfacePoint {
    pub fn vertex(v: VertexId) -> Self {
        SurfacePoint::Vertex { vertex: v }
    }

    pub fn as_vertex(&self) -> Option<VertexId> {
        match *self {
            SurfacePoint::Vertex { vertex } => Some(vertex),
            _ => None,
        }
    }

    /// Canonical point at chart position `p` of face `f`, snapping to sides
    /// and corners within the mesh tolerance.
    pub fn from_chart(mesh: &IntrinsicMesh, f: FaceId, p: Vec2) -> Self {
        let face = mesh.face(f);
        let eps = mesh.eps();
        let dist: [f64; 3] = std::array::from_fn(|s| face.side_distance(s, p));
        let near: Vec<usize> = (0..3).filter(|&s| dist[s] <= eps).collect();
        match near.len() {
            0 => {
                let b = face.barycentric(p);
                SurfacePoint::Face { face: f, bary: b }
            }
            1 => {
                let s = near[0];
                let a = face.corner[next(s)];
                let b = face.corner[prev(s)];
                let lambda = ((p - a).dot(&(b - a)) / (face.len[s] * face.len[s])).clamp(0.0, 1.0);
                if lambda * face.len[s] <= eps {
                    return SurfacePoint::vertex(face.v[next(s)]);
                }
                if (1.0 - lambda) * face.len[s] <= eps {
                    return SurfacePoint::vertex(face.v[prev(s)]);
                }
                let t = if face.canonical[s] { lambda } else { 1.0 - lambda };
                SurfacePoint::Edge { edge: face.edge[s], t }
            }
            2 => {
                let k = 3 - near[0] - near[1];
                SurfacePoint::vertex(face.v[k])
            }
            _ => {
                let b = face.barycentric(p);
                let k = (0..3).max_by(|&i, &j| b[i].total_cmp(&b[j])).unwrap();
                SurfacePoint::vertex(face.v[k])
            }
        }
    }

    /// Point on side `s` of face `f` at fraction `lambda` from corner `s+1`
    /// towards corner `s+2`.
    pub fn on_side(mesh: &IntrinsicMesh, f: FaceId, s: usize, lambda: f64) -> Self {
        let face = mesh.face(f);
        let eps = mesh.eps();
        if lambda * face.len[s] <= eps {
            return SurfacePoint::vertex(face.v[next(s)]);
        }
        if (1.0 - lambda) * face.len[s] <= eps {
            return SurfacePoint::vertex(face.v[prev(s)]);
        }
        let t = if face.canonical[s] { lambda } else { 1.0 - lambda };
        SurfacePoint::Edge { edge: face.edge[s], t }
    }

    /// Chart position in face `f`, if the point lies on the closed face.
    pub fn chart_in(&self, mesh: &IntrinsicMesh, f: FaceId) -> Option<Vec2> {
        let face = mesh.face(f);
        match *self {
            SurfacePoint::Vertex { vertex } => face.corner_of(vertex).map(|c| face.corner[c]),
            SurfacePoint::Edge { edge, t } => face.side_of(edge).map(|s| face.point_on_side(s, t)),
            SurfacePoint::Face { face: g, bary } => (g == f).then(|| face.from_barycentric(bary)),
        }
    }

    /// Faces whose closure contains the point, ascending.
    pub fn faces(&self, mesh: &IntrinsicMesh) -> Vec<FaceId> {
        let mut out: Vec<FaceId> = match *self {
            SurfacePoint::Vertex { vertex } => mesh.vertex(vertex).fan.iter().map(|e| e.face).collect(),
            SurfacePoint::Edge { edge, .. } => mesh.edge(edge).half.iter().map(|h| h.face).collect(),
            SurfacePoint::Face { face, .. } => vec![face],
        };
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Same cell and position within `tol`.
    pub fn approx_eq(&self, other: &SurfacePoint, tol: f64) -> bool {
        match (*self, *other) {
            (SurfacePoint::Vertex { vertex: a }, SurfacePoint::Vertex { vertex: b }) => a == b,
            (SurfacePoint::Edge { edge: a, t: s }, SurfacePoint::Edge { edge: b, t }) => {
                a == b && (s - t).abs() <= tol
            }
            (SurfacePoint::Face { face: a, bary: x }, SurfacePoint::Face { face: b, bary: y }) => {
                a == b && (0..3).all(|k| (x[k] - y[k]).abs() <= tol)
            }
            _ => false,
        }
    }
}

/// Faces containing both points, ascending.
pub fn common_faces(mesh: &IntrinsicMesh, a: &SurfacePoint, b: &SurfacePoint) -> Vec<FaceId> {
    let fb = b.faces(mesh);
    a.faces(mesh).into_iter().filter(|f| fb.contains(f)).collect()
}

/// A tangent direction. At a cone point it is an angle in `[0, Θ)` measured
/// counter-clockwise from the first spoke of the vertex fan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Direction {
    AtVertex { vertex: VertexId, angle: f64 },
    Planar { face: FaceId, vec: [f64; 2] },
}

/// Cone-angle coordinate at `v` of the chart direction `d` in face `f`.
pub fn vertex_angle(mesh: &IntrinsicMesh, v: VertexId, f: FaceId, d: Vec2) -> f64 {
    let (_, entry) = mesh.fan_entry(v, f).expect("face is incident to vertex");
    let phi = mesh.local_angle(f, entry.corner, d).min(entry.angle);
    let theta = entry.start + phi;
    let cone = mesh.vertex(v).cone_angle;
    if theta >= cone {
        theta - cone
    } else {
        theta
    }
}

/// Face, corner and unit chart direction realizing the cone-angle
/// coordinate `theta` at `v`.
pub fn vertex_direction(mesh: &IntrinsicMesh, v: VertexId, theta: f64) -> (FaceId, usize, Vec2) {
    let vx = mesh.vertex(v);
    let j = vx.fan_index(theta);
    let entry = vx.fan[j];
    let t = crate::mesh::wrap(theta, vx.cone_angle);
    let phi = (t - entry.start).clamp(0.0, entry.angle);
    (entry.face, entry.corner, mesh.fan_direction(v, j, phi))
}

/// Angles on the left and right of a curve passing through a cone point,
/// given the direction back along the incoming piece and the outgoing one.
pub fn side_angles_at_vertex(mesh: &IntrinsicMesh, v: VertexId, theta_in: f64, theta_out: f64) -> (f64, f64) {
    let cone = mesh.vertex(v).cone_angle;
    let mut left = (theta_in - theta_out).rem_euclid(cone);
    if cone - left <= 1e-12 * cone.max(1.0) {
        left = 0.0;
    }
    (left, cone - left)
}

/// Which side of a curve violated the angle condition, and by what angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Checks the quasigeodesic angle condition at a vertex of cone angle `cone`.
/// Returns the worst amount by which a side angle misses its bound; cone
/// angles within `eps` of 2π count as flat.
pub fn angle_rule_defect(cone: f64, left: f64, right: f64, eps: f64) -> (Side, f64) {
    use std::f64::consts::PI;
    let defect = |a: f64| {
        if cone < 2.0 * PI - eps {
            a - PI
        } else if cone > 2.0 * PI + eps {
            PI - a
        } else {
            (a - PI).abs()
        }
    };
    let (dl, dr) = (defect(left), defect(right));
    if dl >= dr {
        (Side::Left, dl)
    } else {
        (Side::Right, dr)
    }
}
