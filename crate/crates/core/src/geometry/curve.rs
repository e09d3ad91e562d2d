use serde::{Deserialize, Serialize};

use super::point::{common_faces, SurfacePoint};
use crate::mesh::{FaceId, IntrinsicMesh, Vec2};

/// Piecewise-linear curve on the surface. Segment `i` joins `points[i]` to
/// `points[i + 1]` (cyclically when closed) inside face `faces[i]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PLCurve {
    pub points: Vec<SurfacePoint>,
    pub faces: Vec<FaceId>,
    pub closed: bool,
}

impl PLCurve {
    /// Builds a curve choosing the lowest common face for each segment.
    /// Returns `None` if two consecutive points share no face.
    pub fn from_points(mesh: &IntrinsicMesh, points: Vec<SurfacePoint>, closed: bool) -> Option<Self> {
        let n = points.len();
        let segs = if closed { n } else { n.saturating_sub(1) };
        let mut faces = Vec::with_capacity(segs);
        for i in 0..segs {
            let f = *common_faces(mesh, &points[i], &points[(i + 1) % n]).first()?;
            faces.push(f);
        }
        Some(PLCurve { points, faces, closed })
    }

    pub fn num_segments(&self) -> usize {
        self.faces.len()
    }

    /// Chart endpoints of segment `i` in its face.
    pub fn segment(&self, mesh: &IntrinsicMesh, i: usize) -> (Vec2, Vec2) {
        let f = self.faces[i];
        let n = self.points.len();
        let a = self.points[i].chart_in(mesh, f).expect("segment start lies on its face");
        let b = self.points[(i + 1) % n].chart_in(mesh, f).expect("segment end lies on its face");
        (a, b)
    }

    pub fn segment_length(&self, mesh: &IntrinsicMesh, i: usize) -> f64 {
        let (a, b) = self.segment(mesh, i);
        (b - a).norm()
    }

    pub fn length(&self, mesh: &IntrinsicMesh) -> f64 {
        (0..self.num_segments()).map(|i| self.segment_length(mesh, i)).sum()
    }

    /// Checks that every segment's endpoints lie on its face.
    pub fn is_consistent(&self, mesh: &IntrinsicMesh) -> bool {
        let n = self.points.len();
        let segs = if self.closed { n } else { n.saturating_sub(1) };
        self.faces.len() == segs
            && (0..segs).all(|i| {
                self.faces[i] < mesh.num_faces()
                    && self.points[i].chart_in(mesh, self.faces[i]).is_some()
                    && self.points[(i + 1) % n].chart_in(mesh, self.faces[i]).is_some()
            })
    }

    /// Drops zero-length segments, keeping the lower-dimensional point of
    /// each merged pair.
    pub fn canonicalize(&mut self, mesh: &IntrinsicMesh) {
        let eps = mesh.eps();
        while self.num_segments() > 1 {
            let Some(i) = (0..self.num_segments()).find(|&i| self.segment_length(mesh, i) <= eps) else {
                break;
            };
            let n = self.points.len();
            let j = (i + 1) % n;
            let p = if rank(&self.points[j]) < rank(&self.points[i]) { self.points[j] } else { self.points[i] };
            if j == 0 {
                self.points[0] = p;
            } else {
                self.points[i] = p;
            }
            self.points.remove(if j == 0 { i } else { j });
            self.faces.remove(i);
        }
    }

    /// Reverses the traversal direction.
    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        let mut faces = self.faces.clone();
        if self.closed {
            // Segment i (p_i -> p_i+1) becomes segment n-1-i of the reversed curve
            // when the reversed list starts at p_0.
            points.reverse();
            points.rotate_right(1);
            faces.reverse();
        } else {
            points.reverse();
            faces.reverse();
        }
        PLCurve { points, faces, closed: self.closed }
    }

    /// Cumulative arclength at each point.
    pub fn arclengths(&self, mesh: &IntrinsicMesh) -> Vec<f64> {
        let mut out = vec![0.0];
        let mut acc = 0.0;
        for i in 0..self.num_segments() {
            acc += self.segment_length(mesh, i);
            out.push(acc);
        }
        out
    }
}

fn rank(p: &SurfacePoint) -> u8 {
    match p {
        SurfacePoint::Vertex { .. } => 0,
        SurfacePoint::Edge { .. } => 1,
        SurfacePoint::Face { .. } => 2,
    }
}
