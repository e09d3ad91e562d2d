use nalgebra::{Isometry2, Point2};
use serde::{Deserialize, Serialize};

use crate::geometry::{vertex_angle, Letter};
use crate::mesh::{cross, next, prev, FaceId, HalfEdge, IntrinsicMesh, Vec2, VertexId};

/// Default cap on wedge-propagation nodes per enumeration.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// A straight segment joining two vertices and meeting no other vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSegment {
    pub start: VertexId,
    pub end: VertexId,
    /// Crossed edges, or a single followed edge.
    pub inner: Vec<Letter>,
    pub first_face: FaceId,
    pub length: f64,
    /// Cone-angle coordinate of the segment leaving `start`.
    pub exit: f64,
    /// Cone-angle coordinate at `end` pointing back along the segment.
    pub entry: f64,
}

#[derive(Clone, Debug, Default)]
pub struct SegmentList {
    pub segments: Vec<GeodesicSegment>,
    pub complete: bool,
    pub nodes: u64,
}

struct Frame {
    face: FaceId,
    /// Chart of `face` to the plane where the start vertex sits at the origin.
    place: Isometry2<f64>,
    /// Side of `face` through which the wedge entered.
    entry: usize,
    /// Clockwise and counter-clockwise unit boundary rays of the wedge.
    lo: Vec2,
    hi: Vec2,
    word: Vec<Letter>,
    /// Spokes crossed so far in the current visit of each corner's star.
    runs: [usize; 3],
}

/// All segments of length at most `max_len` leaving vertex `v`, found by
/// unfolding faces along every wedge of directions that still avoids
/// vertices.
pub fn enumerate_segments(mesh: &IntrinsicMesh, v: VertexId, max_len: f64, budget: u64) -> SegmentList {
    let eps = mesh.eps();
    let mut out = SegmentList { complete: true, ..Default::default() };
    let vx = mesh.vertex(v);
    for entry in &vx.fan {
        let f = entry.face;
        let c = entry.corner;
        let face = mesh.face(f);
        // Bare edge along the spoke towards corner c+1.
        let spoke = face.edge[prev(c)];
        if face.len[prev(c)] <= max_len + eps {
            let w = face.v[next(c)];
            out.segments.push(GeodesicSegment {
                start: v,
                end: w,
                inner: vec![Letter::Follow(spoke)],
                first_face: mesh.edge(spoke).half[0].face,
                length: face.len[prev(c)],
                exit: entry.start,
                entry: mesh.spoke_angle(w, spoke).unwrap(),
            });
        }
        let place = Isometry2::translation(-face.corner[c].x, -face.corner[c].y);
        let a = (face.corner[next(c)] - face.corner[c]).normalize();
        let b = (face.corner[prev(c)] - face.corner[c]).normalize();
        let mut runs = [0; 3];
        runs[c] = 0;
        let mut stack = vec![Frame { face: f, place, entry: c, lo: a, hi: b, word: Vec::new(), runs }];
        let mut first = true;
        while let Some(fr) = stack.pop() {
            out.nodes += 1;
            if out.nodes > budget {
                out.complete = false;
                break;
            }
            let face = mesh.face(fr.face);
            // Leave through the entry side when starting at the corner, else
            // through the two other sides.
            let exits: Vec<usize> = if first { vec![c] } else { vec![next(fr.entry), prev(fr.entry)] };
            first = false;
            for s in exits {
                let pa = fr.place * Point2::from(face.corner[next(s)]);
                let pb = fr.place * Point2::from(face.corner[prev(s)]);
                let (pa, pb) = (pa.coords, pb.coords);
                if segment_distance(pa, pb) > max_len + eps {
                    continue;
                }
                // Directions through the side, counter-clockwise from pa to pb
                // as seen from the origin.
                let (mut da, mut db) = (pa.normalize(), pb.normalize());
                if cross(da, db) < 0.0 {
                    std::mem::swap(&mut da, &mut db);
                }
                let lo = if cross(fr.lo, da) > 0.0 { da } else { fr.lo };
                let hi = if cross(db, fr.hi) > 0.0 { db } else { fr.hi };
                if cross(lo, hi) * max_len <= eps {
                    continue;
                }
                let h = HalfEdge::new(fr.face, s);
                let t = mesh.twin(h);
                let g = mesh.face(t.face);
                let place = fr.place * mesh.transition(h).inverse();
                let e = face.edge[s];
                // Star bookkeeping: the two ends of the crossed edge stay in
                // their stars, the far corner starts a new visit.
                let mut runs = [0; 3];
                let mut over = false;
                for k in 0..3 {
                    let u = g.v[k];
                    if k == t.side {
                        runs[k] = 0;
                        continue;
                    }
                    let old = face.corner_of(u).map(|j| fr.runs[j]).unwrap_or(0);
                    runs[k] = old + 1;
                    if runs[k] > mesh.vertex(u).degree() {
                        over = true;
                    }
                }
                if over {
                    continue;
                }
                let mut word = fr.word.clone();
                word.push(Letter::Cross(e));
                let r = (place * Point2::from(g.corner[t.side])).coords;
                let rl = r.norm();
                if cross(lo, r) > eps && cross(r, hi) > eps && rl <= max_len + eps {
                    let w = g.v[t.side];
                    let back = place.inverse_transform_vector(&(-r));
                    out.segments.push(GeodesicSegment {
                        start: v,
                        end: w,
                        inner: word.clone(),
                        first_face: f,
                        length: rl,
                        exit: vertex_angle(mesh, v, f, r),
                        entry: vertex_angle(mesh, w, t.face, back),
                    });
                }
                stack.push(Frame { face: t.face, place, entry: t.side, lo, hi, word, runs });
            }
        }
        if !out.complete {
            break;
        }
    }
    out.segments.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then(a.end.cmp(&b.end))
            .then(a.inner.cmp(&b.inner))
            .then(a.first_face.cmp(&b.first_face))
    });
    out
}

/// Distance from the origin to the segment `ab`.
fn segment_distance(a: Vec2, b: Vec2) -> f64 {
    let d = b - a;
    let l2 = d.norm_squared();
    if l2 == 0.0 {
        return a.norm();
    }
    let t = (-a.dot(&d) / l2).clamp(0.0, 1.0);
    (a + d * t).norm()
}
