use nalgebra::{Isometry2, Point2};
use serde::{Deserialize, Serialize};

use super::point::SurfacePoint;
use crate::mesh::{cross, next, prev, EdgeId, FaceId, HalfEdge, IntrinsicMesh, Vec2, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StripError {
    #[error("letters at position {0} share no face")]
    NonAdjacentLetters(usize),
    #[error("start point does not lie on the first face")]
    StartNotOnStrip,
    #[error("end point does not lie on the last face")]
    EndNotOnStrip,
}

/// A sequence of faces laid out in the plane, each glued to the next along
/// one crossed side.
#[derive(Clone, Debug)]
pub struct UnfoldedStrip {
    pub faces: Vec<FaceId>,
    /// Chart of face `i` to the plane.
    pub placements: Vec<Isometry2<f64>>,
    /// `crossed[i]` is the side of `faces[i]` glued to `faces[i + 1]`.
    pub crossed: Vec<HalfEdge>,
    pub word: Vec<EdgeId>,
    pub start: Vec2,
    pub end: Vec2,
}

impl UnfoldedStrip {
    pub fn place(&self, i: usize, p: Vec2) -> Vec2 {
        (self.placements[i] * Point2::from(p)).coords
    }

    pub fn unplace(&self, i: usize, p: Vec2) -> Vec2 {
        self.placements[i].inverse_transform_point(&Point2::from(p)).coords
    }

    pub fn corners(&self, mesh: &IntrinsicMesh, i: usize) -> [Vec2; 3] {
        let f = mesh.face(self.faces[i]);
        std::array::from_fn(|k| self.place(i, f.corner[k]))
    }

    /// Plane endpoints of crossed side `i`, from corner `s+1` to corner `s+2`
    /// of `faces[i]`.
    pub fn crossed_side(&self, mesh: &IntrinsicMesh, i: usize) -> (Vec2, Vec2) {
        let h = self.crossed[i];
        let f = mesh.face(h.face);
        (self.place(i, f.corner[next(h.side)]), self.place(i, f.corner[prev(h.side)]))
    }
}

/// Lays out the faces crossed by `word`, starting in `first` (or the lowest
/// face holding `start` and the first letter).
pub fn unfold_strip(
    mesh: &IntrinsicMesh,
    start: &SurfacePoint,
    word: &[EdgeId],
    end: &SurfacePoint,
    first: Option<FaceId>,
) -> Result<UnfoldedStrip, StripError> {
    let first = match first {
        Some(f) => f,
        None => {
            let cands = start.faces(mesh);
            let hit = cands.iter().copied().find(|&f| match word.first() {
                Some(&e) => mesh.face(f).side_of(e).is_some(),
                None => end.chart_in(mesh, f).is_some(),
            });
            match hit {
                Some(f) => f,
                None if word.is_empty() => return Err(StripError::EndNotOnStrip),
                None => return Err(StripError::StartNotOnStrip),
            }
        }
    };
    let start_chart = start.chart_in(mesh, first).ok_or(StripError::StartNotOnStrip)?;
    let mut faces = vec![first];
    let mut placements = vec![Isometry2::identity()];
    let mut crossed = Vec::with_capacity(word.len());
    for (i, &e) in word.iter().enumerate() {
        let f = *faces.last().unwrap();
        let s = mesh.face(f).side_of(e).ok_or(StripError::NonAdjacentLetters(i))?;
        let h = HalfEdge::new(f, s);
        let t = mesh.twin(h);
        let place = placements.last().unwrap() * mesh.transition(h).inverse();
        crossed.push(h);
        faces.push(t.face);
        placements.push(place);
    }
    let last = faces.len() - 1;
    let end_chart = end.chart_in(mesh, faces[last]).ok_or(StripError::EndNotOnStrip)?;
    let end_plane = (placements[last] * Point2::from(end_chart)).coords;
    Ok(UnfoldedStrip {
        faces,
        placements,
        crossed,
        word: word.to_vec(),
        start: start_chart,
        end: end_plane,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    /// Both ends of a crossed side lie on the same side of the segment.
    WrongSide,
    /// Crossings are out of order along the segment.
    OutOfOrder,
    /// A crossing falls outside the open segment.
    OutsideSegment,
    /// The segment has zero length.
    Degenerate,
}

/// Outcome of checking whether the straight segment of a strip crosses its
/// word.
#[derive(Clone, Debug, PartialEq)]
pub enum Realizability {
    Accept {
        /// Canonical edge parameter of each crossing.
        crossings: Vec<f64>,
        /// Fraction along the segment of each crossing.
        along: Vec<f64>,
        length: f64,
    },
    Reject { position: usize, reason: RejectReason },
    VertexGraze { position: usize, vertex: VertexId },
}

impl Realizability {
    pub fn is_accept(&self) -> bool {
        matches!(self, Realizability::Accept { .. })
    }
}

/// Checks that the planar segment from the strip's start to its end crosses
/// exactly the strip's sides, in order and in their interiors.
pub fn trace_segment(mesh: &IntrinsicMesh, strip: &UnfoldedStrip) -> Realizability {
    let eps = mesh.eps();
    let s = strip.start;
    let d = strip.end - s;
    let length = d.norm();
    if length <= eps {
        return Realizability::Reject { position: 0, reason: RejectReason::Degenerate };
    }
    let u = d / length;
    let mut crossings = Vec::with_capacity(strip.crossed.len());
    let mut along = Vec::with_capacity(strip.crossed.len());
    let mut last = 0.0;
    for i in 0..strip.crossed.len() {
        let h = strip.crossed[i];
        let face = mesh.face(h.face);
        let (a, b) = strip.crossed_side(mesh, i);
        let sa = cross(u, a - s);
        let sb = cross(u, b - s);
        // The segment runs from the start side of the strip, so the corner
        // at `a` must be on the right and `b` on the left.
        let graze = |p: Vec2| {
            let w = (p - s).dot(&u);
            w > eps && w < length - eps
        };
        if sa.abs() <= eps && graze(a) {
            return Realizability::VertexGraze { position: i, vertex: face.v[next(h.side)] };
        }
        if sb.abs() <= eps && graze(b) {
            return Realizability::VertexGraze { position: i, vertex: face.v[prev(h.side)] };
        }
        if !(sa < -eps && sb > eps) {
            return Realizability::Reject { position: i, reason: RejectReason::WrongSide };
        }
        let lambda = sa / (sa - sb);
        let x = a + (b - a) * lambda;
        let w = (x - s).dot(&u) / length;
        if w * length <= eps || (1.0 - w) * length <= eps {
            return Realizability::Reject { position: i, reason: RejectReason::OutsideSegment };
        }
        if w <= last {
            return Realizability::Reject { position: i, reason: RejectReason::OutOfOrder };
        }
        last = w;
        crossings.push(if face.canonical[h.side] { lambda } else { 1.0 - lambda });
        along.push(w);
    }
    Realizability::Accept { crossings, along, length }
}
