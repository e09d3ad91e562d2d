#![allow(dead_code)]

use std::collections::BTreeMap;

use nalgebra::Point2;
use quasigeodesic::mesh::{cross, next, prev, FaceId, HalfEdge, IntrinsicMesh, Vec2, VertexId};

/// A vertex-to-vertex straight segment found by the direction-sampling oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleSegment {
    pub end: VertexId,
    pub first_face: FaceId,
    pub word: Vec<usize>,
    pub length: f64,
}

struct Event {
    key: (FaceId, Vec<usize>),
    end: VertexId,
    signed: f64,
    dist: f64,
}

/// Shoots a ray from `v` at cone angle `theta` and records, for every face
/// entered, the signed offset of its far corner from the ray.
fn shoot(m: &IntrinsicMesh, v: VertexId, theta: f64, max_len: f64) -> Vec<Event> {
    let vx = m.vertex(v);
    let entry = vx
        .fan
        .iter()
        .rev()
        .find(|e| e.start <= theta)
        .copied()
        .unwrap_or(vx.fan[0]);
    let first = entry.face;
    let mut f = entry.face;
    let face = m.face(f);
    let c = entry.corner;
    let phi = theta - entry.start;
    let r = (face.corner[next(c)] - face.corner[c]).normalize();
    let mut d = Vec2::new(r.x * phi.cos() - r.y * phi.sin(), r.x * phi.sin() + r.y * phi.cos());
    let mut p = face.corner[c];
    let mut sides: Vec<usize> = vec![c];
    let mut travelled = 0.0;
    let mut word = Vec::new();
    let mut out = Vec::new();
    loop {
        let face = m.face(f);
        let mut best: Option<(f64, usize)> = None;
        for &s in &sides {
            let a = face.corner[next(s)];
            let b = face.corner[prev(s)];
            let den = cross(b - a, d);
            if den >= 0.0 {
                continue;
            }
            let u = cross(b - a, a - p) / den;
            if best.map_or(true, |(bu, _)| u < bu) {
                best = Some((u, s));
            }
        }
        let Some((u, s)) = best else { break };
        travelled += u.max(0.0);
        if travelled > max_len {
            break;
        }
        let x = p + d * u;
        let h = HalfEdge::new(f, s);
        word.push(face.edge[s]);
        let t = m.twin(h);
        let tr = m.transition(h);
        p = (tr * Point2::from(x)).coords;
        d = tr * d;
        f = t.face;
        let g = m.face(f);
        let rr = g.corner[t.side];
        out.push(Event {
            key: (first, word.clone()),
            end: g.v[t.side],
            signed: cross(d, rr - p),
            dist: travelled + (rr - p).dot(&d),
        });
        sides = vec![next(t.side), prev(t.side)];
    }
    out
}

/// Every straight segment of length at most `max_len` from `v` that crosses
/// at least one edge, located by sampling `samples` directions and bisecting
/// wherever a far corner switches sides of the ray.
pub fn oracle_segments(m: &IntrinsicMesh, v: VertexId, max_len: f64, samples: usize) -> Vec<OracleSegment> {
    let cone = m.vertex(v).cone_angle;
    let theta = |k: usize| (k as f64 + 0.5) * cone / samples as f64;
    let events: Vec<BTreeMap<(FaceId, Vec<usize>), (f64, VertexId)>> = (0..samples)
        .map(|k| {
            shoot(m, v, theta(k), max_len + 0.1)
                .into_iter()
                .map(|e| (e.key, (e.signed, e.end)))
                .collect()
        })
        .collect();
    let mut found: BTreeMap<(FaceId, Vec<usize>), OracleSegment> = BTreeMap::new();
    for k in 0..samples - 1 {
        for (key, &(s0, end)) in &events[k] {
            let Some(&(s1, _)) = events[k + 1].get(key) else { continue };
            if (s0 > 0.0) == (s1 > 0.0) {
                continue;
            }
            // Bisect on the direction, keeping the same crossing sequence.
            let (mut lo, mut hi) = (theta(k), theta(k + 1));
            let eval = |t: f64| shoot(m, v, t, max_len + 0.1).into_iter().find(|e| &e.key == key);
            let mut last = None;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                match eval(mid) {
                    Some(e) => {
                        if (e.signed > 0.0) == (s0 > 0.0) {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                        last = Some(e);
                    }
                    None => break,
                }
            }
            if let Some(e) = last {
                if e.signed.abs() < 1e-9 && e.dist <= max_len {
                    found.insert(
                        key.clone(),
                        OracleSegment { end, first_face: key.0, word: key.1.clone(), length: e.dist },
                    );
                }
            }
        }
    }
    found.into_values().collect()
}

/// Face containing the 3D point `p` of an extrinsic mesh, with its chart position.
pub fn locate(m: &IntrinsicMesh, p: nalgebra::Point3<f64>) -> Option<(FaceId, Vec2)> {
    let pos = m.positions()?;
    for f in 0..m.num_faces() {
        let face = m.face(f);
        let x: [nalgebra::Point3<f64>; 3] = std::array::from_fn(|k| pos[face.v[k]]);
        let (e1, e2, d) = (x[1] - x[0], x[2] - x[0], p - x[0]);
        let (a11, a12, a22) = (e1.dot(&e1), e1.dot(&e2), e2.dot(&e2));
        let (b1, b2) = (d.dot(&e1), d.dot(&e2));
        let det = a11 * a22 - a12 * a12;
        let s = (b1 * a22 - b2 * a12) / det;
        let t = (a11 * b2 - a12 * b1) / det;
        let off = (d - e1 * s - e2 * t).norm();
        if off < 1e-9 && s >= -1e-9 && t >= -1e-9 && s + t <= 1.0 + 1e-9 {
            let c = face.corner;
            return Some((f, c[0] + (c[1] - c[0]) * s + (c[2] - c[0]) * t));
        }
    }
    None
}

/// Closed surface curve through 3D points of an extrinsic mesh, consecutive
/// points joined by straight segments inside flat parts of the surface.
pub fn curve_through(m: &IntrinsicMesh, pts: &[nalgebra::Point3<f64>]) -> quasigeodesic::geometry::PLCurve {
    use quasigeodesic::geometry::{trace_ray, Direction, PLCurve, SurfacePoint};
    let n = pts.len();
    let mut points = Vec::new();
    let mut faces = Vec::new();
    for k in 0..n {
        let (p, q) = (pts[k], pts[(k + 1) % n]);
        // The face the segment enters first.
        let (f, _) = locate(m, p + (q - p) * 1e-6).expect("segment on the surface");
        let face = m.face(f);
        let pos = m.positions().unwrap();
        // Chart of p in face f through the affine map of its plane.
        let x: [nalgebra::Point3<f64>; 3] = std::array::from_fn(|j| pos[face.v[j]]);
        let (e1, e2) = (x[1] - x[0], x[2] - x[0]);
        let to_chart = |y: nalgebra::Point3<f64>| {
            let d = y - x[0];
            let (a11, a12, a22) = (e1.dot(&e1), e1.dot(&e2), e2.dot(&e2));
            let (b1, b2) = (d.dot(&e1), d.dot(&e2));
            let det = a11 * a22 - a12 * a12;
            let s = (b1 * a22 - b2 * a12) / det;
            let t = (a11 * b2 - a12 * b1) / det;
            face.corner[0] + (face.corner[1] - face.corner[0]) * s + (face.corner[2] - face.corner[0]) * t
        };
        let (cp, cq) = (to_chart(p), to_chart(q));
        let dir = cq - cp;
        let start = SurfacePoint::from_chart(m, f, cp);
        let tr = trace_ray(m, &start, &Direction::Planar { face: f, vec: [dir.x, dir.y] }, (cq - cp).norm());
        let last = tr.curve.points.len() - 1;
        points.extend_from_slice(&tr.curve.points[..last]);
        faces.extend_from_slice(&tr.curve.faces);
    }
    let mut c = PLCurve { points, faces, closed: true };
    c.canonicalize(m);
    c
}
