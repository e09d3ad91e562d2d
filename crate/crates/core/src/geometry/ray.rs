use nalgebra::Point2;

use super::curve::PLCurve;
use super::point::{vertex_angle, vertex_direction, Direction, SurfacePoint};
use super::word::Letter;
use crate::mesh::{cross, next, prev, FaceId, HalfEdge, IntrinsicMesh, Vec2, VertexId};

/// Result of shooting a straight ray over the surface.
#[derive(Clone, Debug)]
pub struct RayTrace {
    /// Open polyline from the start point to where the ray stopped.
    pub curve: PLCurve,
    /// Crossed and followed edges in order, ending with `V` if a vertex was hit.
    pub word: Vec<Letter>,
    pub length: f64,
    pub hit: Option<VertexId>,
    /// Cone-angle coordinate at the hit vertex pointing back along the ray.
    pub arrival: Option<f64>,
}

/// Traces a geodesic ray from `start` in direction `dir` for at most
/// `max_len`, stopping early on reaching a vertex.
pub fn trace_ray(mesh: &IntrinsicMesh, start: &SurfacePoint, dir: &Direction, max_len: f64) -> RayTrace {
    let eps = mesh.eps();
    let mut points = vec![*start];
    let mut faces: Vec<FaceId> = Vec::new();
    let mut word = Vec::new();

    // Resolve the starting face, chart position, direction and the sides
    // that cannot be exit sides.
    let (mut f, mut p, mut d, mut skip): (FaceId, Vec2, Vec2, [bool; 3]) = match (*start, *dir) {
        (SurfacePoint::Vertex { vertex }, _) => {
            let theta = match *dir {
                Direction::AtVertex { angle, .. } => angle,
                Direction::Planar { face, vec } => vertex_angle(mesh, vertex, face, Vec2::new(vec[0], vec[1])),
            };
            let (f, c, d) = vertex_direction(mesh, vertex, theta);
            let face = mesh.face(f);
            let phi = mesh.local_angle(f, c, d);
            // A direction along a spoke follows that edge.
            for (k, along) in [(next(c), phi <= eps), (prev(c), face.angle[c] - phi <= eps)] {
                if along {
                    return follow_edge(mesh, vertex, f, k, max_len);
                }
            }
            let mut skip = [true; 3];
            skip[c] = false;
            (f, face.corner[c], d, skip)
        }
        (SurfacePoint::Edge { edge, .. }, Direction::Planar { face, vec }) => {
            let fc = mesh.face(face);
            let s = fc.side_of(edge).expect("planar direction given in a face of the edge");
            let p = start.chart_in(mesh, face).unwrap();
            let d = Vec2::new(vec[0], vec[1]).normalize();
            let mut skip = [false; 3];
            skip[s] = true;
            let (a, b) = (fc.corner[next(s)], fc.corner[prev(s)]);
            if cross(b - a, d) < 0.0 {
                // Pointing out of this face: continue in the neighbour.
                let h = HalfEdge::new(face, s);
                let t = mesh.twin(h);
                let tr = mesh.transition(h);
                let mut skip = [false; 3];
                skip[t.side] = true;
                (t.face, (tr * Point2::from(p)).coords, tr * d, skip)
            } else {
                (face, p, d, skip)
            }
        }
        (SurfacePoint::Face { face, .. }, Direction::Planar { vec, .. }) => {
            (face, start.chart_in(mesh, face).unwrap(), Vec2::new(vec[0], vec[1]).normalize(), [false; 3])
        }
        _ => panic!("vertex direction given at a non-vertex point"),
    };

    let mut remaining = max_len;
    let mut hit = None;
    let mut arrival = None;
    loop {
        let face = mesh.face(f);
        let mut best: Option<(f64, usize)> = None;
        for s in 0..3 {
            if skip[s] {
                continue;
            }
            let (a, b) = (face.corner[next(s)], face.corner[prev(s)]);
            let rate = cross(b - a, d) / face.len[s];
            if rate >= 0.0 {
                continue;
            }
            let u = face.side_distance(s, p).max(0.0) / -rate;
            if best.map_or(true, |(bu, _)| u < bu) {
                best = Some((u, s));
            }
        }
        let Some((u, s)) = best else {
            break;
        };
        if u >= remaining {
            let q = SurfacePoint::from_chart(mesh, f, p + d * remaining);
            faces.push(f);
            points.push(q);
            if let SurfacePoint::Vertex { vertex } = q {
                hit = Some(vertex);
                arrival = Some(vertex_angle(mesh, vertex, f, -d));
                word.push(Letter::V(vertex));
            }
            remaining = 0.0;
            break;
        }
        let x = p + d * u;
        remaining -= u;
        faces.push(f);
        let near = [next(s), prev(s)].into_iter().find(|&k| (x - face.corner[k]).norm() <= eps);
        if let Some(k) = near {
            let vertex = face.v[k];
            points.push(SurfacePoint::vertex(vertex));
            hit = Some(vertex);
            arrival = Some(vertex_angle(mesh, vertex, f, -d));
            word.push(Letter::V(vertex));
            break;
        }
        let (a, b) = (face.corner[next(s)], face.corner[prev(s)]);
        let lambda = ((x - a).dot(&(b - a)) / (face.len[s] * face.len[s])).clamp(0.0, 1.0);
        points.push(SurfacePoint::on_side(mesh, f, s, lambda));
        word.push(Letter::Cross(face.edge[s]));
        let h = HalfEdge::new(f, s);
        let t = mesh.twin(h);
        let tr = mesh.transition(h);
        p = (tr * Point2::from(x)).coords;
        d = tr * d;
        f = t.face;
        skip = [false; 3];
        skip[t.side] = true;
    }
    RayTrace {
        curve: PLCurve { points, faces, closed: false },
        word,
        length: max_len - remaining,
        hit,
        arrival,
    }
}

/// Ray leaving `v` along side towards corner `k` of face `f`.
fn follow_edge(mesh: &IntrinsicMesh, v: VertexId, f: FaceId, k: usize, max_len: f64) -> RayTrace {
    let face = mesh.face(f);
    let c = face.corner_of(v).unwrap();
    // The side joining corners c and k is opposite the remaining corner.
    let s = 3 - c - k;
    let e = face.edge[s];
    let len = face.len[s];
    let w = face.v[k];
    if len <= max_len {
        let arrival = mesh.spoke_angle(w, e);
        RayTrace {
            curve: PLCurve { points: vec![SurfacePoint::vertex(v), SurfacePoint::vertex(w)], faces: vec![f], closed: false },
            word: vec![Letter::Follow(e), Letter::V(w)],
            length: len,
            hit: Some(w),
            arrival,
        }
    } else {
        let p = face.corner[c] + (face.corner[k] - face.corner[c]) * (max_len / len);
        RayTrace {
            curve: PLCurve {
                points: vec![SurfacePoint::vertex(v), SurfacePoint::from_chart(mesh, f, p)],
                faces: vec![f],
                closed: false,
            },
            word: vec![Letter::Follow(e)],
            length: max_len,
            hit: None,
            arrival: None,
        }
    }
}
