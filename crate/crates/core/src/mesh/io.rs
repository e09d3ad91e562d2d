//! Mesh documents: the canonical intrinsic JSON format and OBJ ingestion.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::Point3;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::intrinsic::{next, prev, FaceInput, HalfEdge, IntrinsicMesh};
use super::{preprocess, MeshError};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaceRecord {
    pub v: [usize; 3],
    pub len: [f64; 3],
}

/// `{faces: [{v, len}], glue: [[[f, s], [f', s']]], positions?}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IntrinsicDocument {
    pub faces: Vec<FaceRecord>,
    pub glue: Vec<[[usize; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<[f64; 3]>>,
}

impl IntrinsicDocument {
    pub fn from_mesh(mesh: &IntrinsicMesh) -> Self {
        IntrinsicDocument {
            faces: mesh
                .faces()
                .iter()
                .map(|f| FaceRecord { v: f.v, len: f.len })
                .collect(),
            glue: mesh
                .glue_pairs()
                .into_iter()
                .map(|(a, b)| [[a.face, a.side], [b.face, b.side]])
                .collect(),
            positions: mesh
                .positions()
                .map(|p| p.iter().map(|x| [x.x, x.y, x.z]).collect()),
        }
    }

    /// Builds the mesh exactly as described, without preprocessing.
    pub fn to_mesh_raw(&self, eps: f64) -> Result<IntrinsicMesh, MeshError> {
        let faces: Vec<FaceInput> = self
            .faces
            .iter()
            .map(|f| FaceInput { v: f.v, len: f.len })
            .collect();
        let glue: Vec<(HalfEdge, HalfEdge)> = self
            .glue
            .iter()
            .map(|[a, b]| (HalfEdge::new(a[0], a[1]), HalfEdge::new(b[0], b[1])))
            .collect();
        let mut mesh = IntrinsicMesh::from_parts(&faces, &glue, eps)?;
        if let Some(p) = &self.positions {
            mesh.set_positions(Some(p.iter().map(|x| Point3::new(x[0], x[1], x[2])).collect()));
        }
        Ok(mesh)
    }
}

/// Parses and validates an intrinsic document, then preprocesses it.
pub fn load_intrinsic(text: &str, eps: f64) -> Result<IntrinsicMesh, MeshError> {
    let doc: IntrinsicDocument =
        serde_json::from_str(text).map_err(|e| MeshError::Parse(e.to_string()))?;
    preprocess(doc.to_mesh_raw(eps)?)
}

/// Canonical intrinsic serialization (faces and gluing only).
pub fn to_canonical_json(mesh: &IntrinsicMesh) -> String {
    let mut doc = IntrinsicDocument::from_mesh(mesh);
    doc.positions = None;
    serde_json::to_string(&doc).expect("serializable")
}

pub fn to_json(mesh: &IntrinsicMesh) -> String {
    serde_json::to_string_pretty(&IntrinsicDocument::from_mesh(mesh)).expect("serializable")
}

/// SHA-256 of the canonical intrinsic form, hex encoded.
pub fn mesh_hash(mesh: &IntrinsicMesh) -> String {
    hex::encode(Sha256::digest(to_canonical_json(mesh).as_bytes()))
}

/// Intrinsic mesh of a closed triangulated surface in 3-space.
pub fn from_extrinsic(
    points: &[Point3<f64>],
    faces: &[[usize; 3]],
    eps: f64,
) -> Result<IntrinsicMesh, MeshError> {
    let mut inputs = Vec::with_capacity(faces.len());
    let mut directed: BTreeMap<(usize, usize), HalfEdge> = BTreeMap::new();
    for (fi, f) in faces.iter().enumerate() {
        if f.iter().any(|&v| v >= points.len()) {
            return Err(MeshError::Parse(format!("face {fi} references a missing vertex")));
        }
        let p = f.map(|v| points[v]);
        let len = [(p[1] - p[2]).norm(), (p[2] - p[0]).norm(), (p[0] - p[1]).norm()];
        let longest = len.iter().cloned().fold(0.0, f64::max);
        let area2 = (p[1] - p[0]).cross(&(p[2] - p[0])).norm();
        if longest <= eps || area2 / longest <= eps {
            return Err(MeshError::DegenerateFace { face: fi });
        }
        inputs.push(FaceInput { v: *f, len });
        for s in 0..3 {
            let key = (f[next(s)], f[prev(s)]);
            if let Some(other) = directed.insert(key, HalfEdge::new(fi, s)) {
                return Err(MeshError::NonOrientable {
                    a: (other.face, other.side),
                    b: (fi, s),
                });
            }
        }
    }
    let mut glue = Vec::new();
    for (&(a, b), &h) in &directed {
        match directed.get(&(b, a)) {
            Some(&t) => {
                if h < t {
                    glue.push((h, t));
                }
            }
            None => {
                return Err(MeshError::NotASphere(format!("edge {a}-{b} has one incident face")))
            }
        }
    }
    let mut mesh = IntrinsicMesh::from_parts(&inputs, &glue, eps)?;
    mesh.set_positions(Some(points.to_vec()));
    preprocess(mesh)
}

/// Reads `v x y z` and triangular `f i j k` records.
pub fn parse_obj(text: &str) -> Result<(Vec<Point3<f64>>, Vec<[usize; 3]>), MeshError> {
    let mut points = Vec::new();
    let mut faces = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let c: Vec<f64> = it
                    .take(3)
                    .map(|x| x.parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| MeshError::Parse(format!("line {}: {e}", ln + 1)))?;
                if c.len() != 3 {
                    return Err(MeshError::Parse(format!("line {}: expected 3 coordinates", ln + 1)));
                }
                points.push(Point3::new(c[0], c[1], c[2]));
            }
            Some("f") => {
                let idx: Vec<usize> = it
                    .map(|tok| {
                        let first = tok.split('/').next().unwrap_or("");
                        let i: i64 = first
                            .parse()
                            .map_err(|e| MeshError::Parse(format!("line {}: {e}", ln + 1)))?;
                        if i > 0 {
                            Ok(i as usize - 1)
                        } else if i < 0 && (-i) as usize <= points.len() {
                            Ok(points.len() - (-i) as usize)
                        } else {
                            Err(MeshError::Parse(format!("line {}: bad index {i}", ln + 1)))
                        }
                    })
                    .collect::<Result<_, _>>()?;
                if idx.len() != 3 {
                    return Err(MeshError::NonTriangularFace { line: ln + 1 });
                }
                faces.push([idx[0], idx[1], idx[2]]);
            }
            _ => {}
        }
    }
    Ok((points, faces))
}

pub fn load_obj(text: &str, eps: f64) -> Result<IntrinsicMesh, MeshError> {
    let (points, faces) = parse_obj(text)?;
    from_extrinsic(&points, &faces, eps)
}

/// Loads `.obj` files as extrinsic meshes and anything else as intrinsic JSON.
pub fn load_path(path: &Path, eps: f64) -> Result<IntrinsicMesh, MeshError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| MeshError::Parse(format!("{}: {e}", path.display())))?;
    let is_obj = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("obj"))
        .unwrap_or(false);
    if is_obj {
        load_obj(&text, eps)
    } else {
        load_intrinsic(&text, eps)
    }
}

pub fn to_obj(mesh: &IntrinsicMesh) -> Option<String> {
    let pos = mesh.positions()?;
    let mut s = String::new();
    for p in pos {
        s.push_str(&format!("v {} {} {}\n", p.x, p.y, p.z));
    }
    for f in mesh.faces() {
        s.push_str(&format!("f {} {} {}\n", f.v[0] + 1, f.v[1] + 1, f.v[2] + 1));
    }
    Some(s)
}
