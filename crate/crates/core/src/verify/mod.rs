//! Checking crossing words and curves for being weakly simple closed
//! quasigeodesics.

mod numeric;
mod simple;

use serde::{Deserialize, Serialize};

pub use numeric::{check_curve_numeric, NumericReport};
pub use simple::{check_weakly_simple, Simplicity, SIMPLICITY_BUDGET};

use crate::geometry::{
    angle_rule_defect, format_word, side_angles_at_vertex, trace_segment, unfold_strip, vertex_angle, Letter,
    PLCurve, Realizability, RejectReason, Side, SurfacePoint, UnfoldedStrip,
};
use crate::mesh::io::mesh_hash;
use crate::mesh::{EdgeId, FaceId, IntrinsicMesh, VertexId};

pub const SCHEMA_VERSION: u32 = 1;

/// Largest number of candidate combinations tried when a subword can be
/// realized in several ways.
const MAX_COMBINATIONS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexAngles {
    pub vertex: VertexId,
    pub left: f64,
    pub right: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub simple: bool,
    pub weakly_simple: bool,
    pub degenerate_doubled_segment: bool,
}

/// A verified weakly simple closed quasigeodesic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub mesh_hash: String,
    pub word: Vec<Letter>,
    pub word_text: String,
    pub realization: PLCurve,
    pub angles: Vec<VertexAngles>,
    pub total_length: f64,
    pub witness: Vec<Vec<usize>>,
    pub flags: Flags,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, thiserror::Error)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Rejection {
    #[error("letter {position}: {message}")]
    Malformed { position: usize, message: String },
    #[error("the word passes through no vertex")]
    NoVertex,
    #[error("segment {segment} (letter {position}) is not realizable: {detail}")]
    Unrealizable { segment: usize, position: usize, detail: String },
    #[error("angle {value} on the {side:?} of vertex {vertex} breaks the quasigeodesic rule")]
    AngleViolation { vertex: VertexId, side: Side, value: f64 },
    #[error("the curve is not weakly simple")]
    NotWeaklySimple,
    #[error("weak simplicity undecided within the search budget")]
    Inconclusive,
}

/// One straight piece between consecutive vertex letters.
#[derive(Clone, Debug)]
struct Piece {
    /// Points from the start vertex up to (not including) the end vertex.
    points: Vec<SurfacePoint>,
    faces: Vec<FaceId>,
    length: f64,
    exit: f64,
    entry: f64,
    strip: Option<UnfoldedStrip>,
}

/// Realizes the subword between vertices `p` and `q`; every realization is
/// returned, in order of the first face used.
fn realize(
    mesh: &IntrinsicMesh,
    p: VertexId,
    inner: &[Letter],
    q: VertexId,
) -> Result<Vec<Piece>, (String, usize)> {
    if inner.is_empty() {
        return Err(("consecutive vertices need a crossed or followed edge between them".into(), 0));
    }
    if let [Letter::Follow(e)] = inner {
        let edge = mesh.edge(*e);
        if !((edge.v[0] == p && edge.v[1] == q) || (edge.v[0] == q && edge.v[1] == p)) {
            return Err((format!("followed edge {e} does not join {p} and {q}"), 1));
        }
        return Ok(vec![Piece {
            points: vec![SurfacePoint::vertex(p)],
            faces: vec![edge.half[0].face],
            length: edge.len,
            exit: mesh.spoke_angle(p, *e).unwrap(),
            entry: mesh.spoke_angle(q, *e).unwrap(),
            strip: None,
        }]);
    }
    let mut word: Vec<EdgeId> = Vec::with_capacity(inner.len());
    for (i, l) in inner.iter().enumerate() {
        match *l {
            Letter::Cross(e) => word.push(e),
            _ => return Err(("a straight segment cannot both cross and follow edges".into(), i + 1)),
        }
    }
    let start = SurfacePoint::vertex(p);
    let end = SurfacePoint::vertex(q);
    let firsts: Vec<FaceId> = start
        .faces(mesh)
        .into_iter()
        .filter(|&f| mesh.face(f).side_of(word[0]).is_some())
        .collect();
    if firsts.is_empty() {
        return Err((format!("edge {} is not opposite vertex {p}", word[0]), 1));
    }
    let mut out = Vec::new();
    let mut why = None;
    for f in firsts {
        let strip = match unfold_strip(mesh, &start, &word, &end, Some(f)) {
            Ok(s) => s,
            Err(e) => {
                let pos = match e {
                    crate::geometry::StripError::NonAdjacentLetters(i) => i + 1,
                    _ => inner.len(),
                };
                why.get_or_insert((e.to_string(), pos));
                continue;
            }
        };
        match trace_segment(mesh, &strip) {
            Realizability::Accept { crossings, length, .. } => {
                let mut points = vec![start];
                for (&e, &t) in word.iter().zip(&crossings) {
                    points.push(SurfacePoint::Edge { edge: e, t });
                }
                let d = strip.end - strip.start;
                let last = strip.faces.len() - 1;
                let back = strip.placements[last].inverse_transform_vector(&(-d));
                out.push(Piece {
                    points,
                    faces: strip.faces.clone(),
                    length,
                    exit: vertex_angle(mesh, p, f, d),
                    entry: vertex_angle(mesh, q, strip.faces[last], back),
                    strip: Some(strip),
                });
            }
            Realizability::Reject { position, reason } => {
                let text = match reason {
                    RejectReason::WrongSide => "the straight line misses the crossed side",
                    RejectReason::OutOfOrder => "sides are crossed out of order",
                    RejectReason::OutsideSegment => "a crossing falls outside the segment",
                    RejectReason::Degenerate => "zero-length segment",
                };
                why.get_or_insert((text.to_string(), position + 1));
            }
            Realizability::VertexGraze { position, vertex } => {
                why.get_or_insert((format!("the straight line passes through vertex {vertex}"), position + 1));
            }
        }
    }
    if out.is_empty() {
        Err(why.unwrap_or_else(|| ("no realization".into(), 1)))
    } else {
        Ok(out)
    }
}

/// Checks a cyclic crossing word and returns its certificate.
pub fn check_word(mesh: &IntrinsicMesh, word: &[Letter]) -> Result<Certificate, Rejection> {
    check_word_with_strips(mesh, word).map(|(c, _)| c)
}

/// As [`check_word`], also returning the unfolded strip of every crossing
/// segment.
pub fn check_word_with_strips(
    mesh: &IntrinsicMesh,
    word: &[Letter],
) -> Result<(Certificate, Vec<UnfoldedStrip>), Rejection> {
    for (i, l) in word.iter().enumerate() {
        let ok = match *l {
            Letter::V(v) => v < mesh.num_vertices(),
            Letter::Cross(e) | Letter::Follow(e) => e < mesh.num_edges(),
        };
        if !ok {
            return Err(Rejection::Malformed { position: i, message: format!("{l} is out of range") });
        }
    }
    let n = word.len();
    let vpos: Vec<usize> = (0..n).filter(|&i| word[i].vertex().is_some()).collect();
    if vpos.is_empty() {
        return Err(Rejection::NoVertex);
    }
    let k = vpos.len();
    let mut options: Vec<Vec<Piece>> = Vec::with_capacity(k);
    for j in 0..k {
        let a = vpos[j];
        let b = if j + 1 < k { vpos[j + 1] } else { vpos[0] + n };
        let p = word[a].vertex().unwrap();
        let q = word[b % n].vertex().unwrap();
        let inner: Vec<Letter> = (a + 1..b).map(|i| word[i % n]).collect();
        match realize(mesh, p, &inner, q) {
            Ok(pieces) => options.push(pieces),
            Err((detail, off)) => {
                return Err(Rejection::Unrealizable { segment: j, position: (a + off) % n, detail })
            }
        }
    }

    // Try realizations in lexicographic order of candidate choices.
    let mut choice = vec![0usize; k];
    let mut first_failure: Option<Rejection> = None;
    for _ in 0..MAX_COMBINATIONS {
        let pieces: Vec<&Piece> = (0..k).map(|j| &options[j][choice[j]]).collect();
        match assemble(mesh, word, &vpos, &pieces) {
            Ok(r) => return Ok(r),
            Err(e) => {
                first_failure.get_or_insert(e);
            }
        }
        // Advance the mixed-radix counter.
        let mut j = k;
        loop {
            if j == 0 {
                return Err(first_failure.unwrap());
            }
            j -= 1;
            choice[j] += 1;
            if choice[j] < options[j].len() {
                break;
            }
            choice[j] = 0;
        }
    }
    Err(first_failure.unwrap())
}

fn assemble(
    mesh: &IntrinsicMesh,
    word: &[Letter],
    vpos: &[usize],
    pieces: &[&Piece],
) -> Result<(Certificate, Vec<UnfoldedStrip>), Rejection> {
    let k = pieces.len();
    let mut angles = Vec::with_capacity(k);
    for j in 0..k {
        let v = word[vpos[(j + 1) % k]].vertex().unwrap();
        let (left, right) = side_angles_at_vertex(mesh, v, pieces[j].entry, pieces[(j + 1) % k].exit);
        let (side, defect) = angle_rule_defect(mesh.vertex(v).cone_angle, left, right, mesh.eps());
        if defect > mesh.eps() {
            let value = if side == Side::Left { left } else { right };
            return Err(Rejection::AngleViolation { vertex: v, side, value });
        }
        angles.push(VertexAngles { vertex: v, left, right });
    }
    // Angles listed at each vertex letter in word order.
    angles.rotate_right(1);
    let mut points = Vec::new();
    let mut faces = Vec::new();
    let mut total = 0.0;
    for p in pieces {
        points.extend_from_slice(&p.points);
        faces.extend_from_slice(&p.faces);
        total += p.length;
    }
    let realization = PLCurve { points, faces, closed: true };
    let simplicity = check_weakly_simple(mesh, &realization);
    let (flags, witness) = match simplicity {
        Simplicity::Simple => {
            (Flags { simple: true, weakly_simple: true, degenerate_doubled_segment: false }, Vec::new())
        }
        Simplicity::WeaklySimple { witness, degenerate } => (
            Flags { simple: false, weakly_simple: true, degenerate_doubled_segment: degenerate },
            witness,
        ),
        Simplicity::NotWeaklySimple => return Err(Rejection::NotWeaklySimple),
        Simplicity::Inconclusive => return Err(Rejection::Inconclusive),
    };
    let strips = pieces.iter().filter_map(|p| p.strip.clone()).collect();
    let cert = Certificate {
        schema_version: SCHEMA_VERSION,
        mesh_hash: mesh_hash(mesh),
        word: word.to_vec(),
        word_text: format_word(word),
        realization,
        angles,
        total_length: total,
        witness,
        flags,
    };
    Ok((cert, strips))
}

/// Reads off the crossing word of a curve: vertices, crossed edges, and
/// edges followed between consecutive vertices.
pub fn extract_word(mesh: &IntrinsicMesh, curve: &PLCurve) -> Vec<Letter> {
    let n = curve.points.len();
    let mut out = Vec::new();
    for i in 0..n {
        match curve.points[i] {
            SurfacePoint::Vertex { vertex } => {
                out.push(Letter::V(vertex));
                if let SurfacePoint::Vertex { vertex: w } = curve.points[(i + 1) % n] {
                    if i + 1 < n || curve.closed {
                        let face = mesh.face(curve.faces[i]);
                        let a = face.corner_of(vertex).unwrap();
                        let b = face.corner_of(w).unwrap();
                        out.push(Letter::Follow(face.edge[3 - a - b]));
                    }
                }
            }
            SurfacePoint::Edge { edge, .. } => out.push(Letter::Cross(edge)),
            SurfacePoint::Face { .. } => {}
        }
    }
    out
}
