//! Intrinsic triangulated polyhedral spheres.
//!
//! A mesh is a list of Euclidean triangles given only by side lengths, plus an
//! involution pairing every triangle side with its twin. Each face carries a
//! canonical planar chart: corner 0 at the origin, corner 1 on the positive
//! x-axis and corner 2 in the upper half plane, so every chart is
//! counter-clockwise. Side `s` is opposite corner `s` and runs from corner
//! `s+1` to corner `s+2`.

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;

use nalgebra::{Isometry2, Point3, Vector2};

use super::MeshError;

pub type Vec2 = Vector2<f64>;
pub type VertexId = usize;
pub type FaceId = usize;
pub type EdgeId = usize;

/// Global default for `ε_geom`.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[inline]
pub fn next(k: usize) -> usize {
    (k + 1) % 3
}

#[inline]
pub fn prev(k: usize) -> usize {
    (k + 2) % 3
}

/// An oriented triangle side: side `side` of face `face`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub face: FaceId,
    pub side: usize,
}

impl HalfEdge {
    pub fn new(face: FaceId, side: usize) -> Self {
        HalfEdge { face, side }
    }
}

/// Raw face record as read from a document.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceInput {
    pub v: [VertexId; 3],
    pub len: [f64; 3],
}

#[derive(Clone, Debug)]
pub struct Face {
    pub v: [VertexId; 3],
    pub len: [f64; 3],
    pub angle: [f64; 3],
    pub corner: [Vec2; 3],
    pub area: f64,
    pub twin: [HalfEdge; 3],
    pub edge: [EdgeId; 3],
    /// Whether side `s` is the canonical half of its edge.
    pub canonical: [bool; 3],
}

impl Face {
    /// Smallest altitude of the triangle.
    pub fn min_altitude(&self) -> f64 {
        let longest = self.len.iter().cloned().fold(0.0, f64::max);
        2.0 * self.area / longest
    }

    pub fn corner_of(&self, v: VertexId) -> Option<usize> {
        self.v.iter().position(|&w| w == v)
    }

    pub fn side_of(&self, e: EdgeId) -> Option<usize> {
        self.edge.iter().position(|&x| x == e)
    }

    /// Chart position of the point at canonical parameter `t` along side `s`.
    pub fn point_on_side(&self, s: usize, t: f64) -> Vec2 {
        let (a, b) = self.side_canonical_ends(s);
        a + (b - a) * t
    }

    /// Endpoints of side `s` in canonical edge orientation.
    pub fn side_canonical_ends(&self, s: usize) -> (Vec2, Vec2) {
        let a = self.corner[next(s)];
        let b = self.corner[prev(s)];
        if self.canonical[s] {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Barycentric coordinates of a chart point.
    pub fn barycentric(&self, p: Vec2) -> [f64; 3] {
        let c = &self.corner;
        let total = cross(c[1] - c[0], c[2] - c[0]);
        let b0 = cross(c[1] - p, c[2] - p) / total;
        let b1 = cross(c[2] - p, c[0] - p) / total;
        [b0, b1, 1.0 - b0 - b1]
    }

    pub fn from_barycentric(&self, b: [f64; 3]) -> Vec2 {
        self.corner[0] * b[0] + self.corner[1] * b[1] + self.corner[2] * b[2]
    }

    /// Signed distance from `p` to the line of side `s`, positive inside.
    pub fn side_distance(&self, s: usize, p: Vec2) -> f64 {
        let a = self.corner[next(s)];
        let b = self.corner[prev(s)];
        cross(b - a, p - a) / self.len[s]
    }
}

#[derive(Clone, Debug)]
pub struct Edge {
    /// Canonical half first.
    pub half: [HalfEdge; 2],
    /// Canonical start and end vertex.
    pub v: [VertexId; 2],
    pub len: f64,
}

impl Edge {
    pub fn other(&self, v: VertexId) -> Option<VertexId> {
        if self.v[0] == v {
            Some(self.v[1])
        } else if self.v[1] == v {
            Some(self.v[0])
        } else {
            None
        }
    }
}

/// One corner in the cyclic fan around a vertex. `start` is the cone-angle
/// coordinate of the side from the vertex to corner `corner + 1`.
#[derive(Clone, Copy, Debug)]
pub struct FanEntry {
    pub face: FaceId,
    pub corner: usize,
    pub start: f64,
    pub angle: f64,
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub id: VertexId,
    pub fan: Vec<FanEntry>,
    pub cone_angle: f64,
}

impl Vertex {
    pub fn curvature(&self) -> f64 {
        2.0 * PI - self.cone_angle
    }

    pub fn degree(&self) -> usize {
        self.fan.len()
    }

    pub fn is_convex(&self) -> bool {
        self.cone_angle <= 2.0 * PI
    }

    /// Fan index whose angular range contains `theta` (taken modulo the cone angle).
    pub fn fan_index(&self, theta: f64) -> usize {
        let t = wrap(theta, self.cone_angle);
        match self
            .fan
            .iter()
            .rposition(|entry| entry.start <= t)
        {
            Some(j) => j,
            None => 0,
        }
    }
}

/// Summary of the per-vertex angle structure.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexData {
    pub cone_angle: f64,
    pub curvature: f64,
    pub is_convex: bool,
    pub star_faces: Vec<FaceId>,
    pub degree: usize,
}

/// Edge-sum, smallest altitude, maximal degree and the word-length bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GlobalQuantities {
    pub edge_sum: f64,
    pub min_altitude: f64,
    pub max_degree: usize,
    pub eta: u64,
}

#[derive(Clone, Debug)]
pub struct IntrinsicMesh {
    faces: Vec<Face>,
    edges: Vec<Edge>,
    vertices: Vec<Vertex>,
    /// Chart-to-chart map across each half-edge, into the twin's face.
    transition: Vec<[Isometry2<f64>; 3]>,
    eps: f64,
    positions: Option<Vec<Point3<f64>>>,
    subdivisions: usize,
}

#[inline]
pub fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// `x` reduced into `[0, period)`.
#[inline]
pub fn wrap(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    if r >= period {
        0.0
    } else {
        r
    }
}

/// Corner angles of a triangle with side `k` opposite corner `k`.
pub fn corner_angles(len: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for k in 0..3 {
        let a = len[next(k)];
        let b = len[prev(k)];
        let c = len[k];
        let cos = ((a * a + b * b - c * c) / (2.0 * a * b)).clamp(-1.0, 1.0);
        out[k] = cos.acos();
    }
    out
}

fn chart(len: [f64; 3]) -> [Vec2; 3] {
    let l0 = len[0];
    let l1 = len[1];
    let l2 = len[2];
    let x = (l2 * l2 + l1 * l1 - l0 * l0) / (2.0 * l2);
    let y = (l1 * l1 - x * x).max(0.0).sqrt();
    [Vec2::new(0.0, 0.0), Vec2::new(l2, 0.0), Vec2::new(x, y)]
}

fn heron(len: [f64; 3]) -> f64 {
    // Kahan's stable form.
    let mut s = len;
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let (a, b, c) = (s[0], s[1], s[2]);
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    0.25 * p.max(0.0).sqrt()
}

impl IntrinsicMesh {
    /// Builds and validates a mesh from faces and explicit side pairings.
    pub fn from_parts(
        input: &[FaceInput],
        glue: &[(HalfEdge, HalfEdge)],
        eps: f64,
    ) -> Result<Self, MeshError> {
        let nf = input.len();
        if nf == 0 {
            return Err(MeshError::NotASphere("no faces".into()));
        }
        let n = input
            .iter()
            .flat_map(|f| f.v.iter().cloned())
            .max()
            .map_or(0, |m| m + 1);

        for (fi, f) in input.iter().enumerate() {
            for k in 0..3 {
                let l = f.len[k];
                if !(l.is_finite() && l > 0.0) {
                    return Err(MeshError::TriangleInequalityViolation { face: fi });
                }
            }
            for k in 0..3 {
                if f.len[next(k)] + f.len[prev(k)] - f.len[k] <= eps {
                    return Err(MeshError::TriangleInequalityViolation { face: fi });
                }
            }
        }

        let mut twin: Vec<[Option<HalfEdge>; 3]> = vec![[None; 3]; nf];
        for &(a, b) in glue {
            for h in [a, b] {
                if h.face >= nf || h.side > 2 {
                    return Err(MeshError::InvalidGluing(format!(
                        "side ({}, {}) does not exist",
                        h.face, h.side
                    )));
                }
            }
            if a == b {
                return Err(MeshError::InvalidGluing(format!(
                    "side ({}, {}) glued to itself",
                    a.face, a.side
                )));
            }
            for (h, t) in [(a, b), (b, a)] {
                if twin[h.face][h.side].is_some() {
                    return Err(MeshError::InvalidGluing(format!(
                        "side ({}, {}) glued twice",
                        h.face, h.side
                    )));
                }
                twin[h.face][h.side] = Some(t);
            }
        }
        let mut twins = Vec::with_capacity(nf);
        for (fi, t) in twin.iter().enumerate() {
            let mut row = [HalfEdge::new(0, 0); 3];
            for s in 0..3 {
                row[s] = t[s].ok_or_else(|| {
                    MeshError::NotASphere(format!("side ({fi}, {s}) is not glued (boundary)"))
                })?;
            }
            twins.push(row);
        }

        for (fi, f) in input.iter().enumerate() {
            for s in 0..3 {
                let t = twins[fi][s];
                let g = &input[t.face];
                let l = f.len[s];
                let lt = g.len[t.side];
                if (l - lt).abs() > eps * l.max(1.0) {
                    return Err(MeshError::GluingLengthMismatch {
                        a: (fi, s),
                        b: (t.face, t.side),
                        len_a: l,
                        len_b: lt,
                    });
                }
                let (a0, a1) = (f.v[next(s)], f.v[prev(s)]);
                let (b0, b1) = (g.v[next(t.side)], g.v[prev(t.side)]);
                if a0 == b1 && a1 == b0 {
                    continue;
                }
                if a0 == b0 && a1 == b1 {
                    return Err(MeshError::NonOrientable { a: (fi, s), b: (t.face, t.side) });
                }
                return Err(MeshError::InvalidGluing(format!(
                    "side ({fi}, {s}) joins vertices {a0}-{a1} but its twin joins {b0}-{b1}"
                )));
            }
        }

        let mut faces: Vec<Face> = input
            .iter()
            .enumerate()
            .map(|(fi, f)| Face {
                v: f.v,
                len: f.len,
                angle: corner_angles(f.len),
                corner: chart(f.len),
                area: heron(f.len),
                twin: twins[fi],
                edge: [usize::MAX; 3],
                canonical: [false; 3],
            })
            .collect();

        // Edges, canonically oriented from the lower start vertex.
        let mut raw: Vec<(VertexId, VertexId, HalfEdge, HalfEdge)> = Vec::new();
        for fi in 0..nf {
            for s in 0..3 {
                let h = HalfEdge::new(fi, s);
                let t = faces[fi].twin[s];
                if h < t {
                    let hs = faces[fi].v[next(s)];
                    let ts = faces[t.face].v[next(t.side)];
                    let (c, o) = if (hs, h) <= (ts, t) { (h, t) } else { (t, h) };
                    let cv = faces[c.face].v[next(c.side)];
                    let ov = faces[c.face].v[prev(c.side)];
                    raw.push((cv, ov, c, o));
                }
            }
        }
        raw.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
        let mut edges = Vec::with_capacity(raw.len());
        for (ei, &(v0, v1, c, o)) in raw.iter().enumerate() {
            faces[c.face].edge[c.side] = ei;
            faces[c.face].canonical[c.side] = true;
            faces[o.face].edge[o.side] = ei;
            faces[o.face].canonical[o.side] = false;
            edges.push(Edge { half: [c, o], v: [v0, v1], len: faces[c.face].len[c.side] });
        }

        // Corner orbits around vertices.
        let mut seen = vec![[false; 3]; nf];
        let mut orbit_of_id: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut vertices: Vec<Option<Vertex>> = vec![None; n];
        for fi in 0..nf {
            for k in 0..3 {
                if seen[fi][k] {
                    continue;
                }
                let id = faces[fi].v[k];
                let mut fan = Vec::new();
                let (mut f, mut c) = (fi, k);
                loop {
                    if seen[f][c] {
                        break;
                    }
                    seen[f][c] = true;
                    if faces[f].v[c] != id {
                        return Err(MeshError::InvalidVertexIds(format!(
                            "corners around vertex {id} carry id {}",
                            faces[f].v[c]
                        )));
                    }
                    fan.push((f, c));
                    let t = faces[f].twin[next(c)];
                    f = t.face;
                    c = next(t.side);
                }
                if (f, c) != (fi, k) {
                    return Err(MeshError::NotASphere(format!(
                        "fan around vertex {id} does not close"
                    )));
                }
                if orbit_of_id.insert(id, fi).is_some() {
                    return Err(MeshError::NotASphere(format!(
                        "vertex id {id} names more than one cone point"
                    )));
                }
                // Rotate so the fan starts at the lowest (face, corner).
                let start = fan
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, fc)| **fc)
                    .map(|(i, _)| i)
                    .unwrap();
                fan.rotate_left(start);
                let mut acc = 0.0;
                let entries: Vec<FanEntry> = fan
                    .iter()
                    .map(|&(f, c)| {
                        let a = faces[f].angle[c];
                        let e = FanEntry { face: f, corner: c, start: acc, angle: a };
                        acc += a;
                        e
                    })
                    .collect();
                vertices[id] = Some(Vertex { id, fan: entries, cone_angle: acc });
            }
        }
        let vertices: Vec<Vertex> = vertices
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| MeshError::InvalidVertexIds(format!("vertex id {i} is unused")))
            })
            .collect::<Result<_, _>>()?;

        // Connectivity of the face adjacency graph.
        let mut reached = vec![false; nf];
        let mut queue = VecDeque::from([0usize]);
        reached[0] = true;
        let mut count = 1;
        while let Some(f) = queue.pop_front() {
            for s in 0..3 {
                let g = faces[f].twin[s].face;
                if !reached[g] {
                    reached[g] = true;
                    count += 1;
                    queue.push_back(g);
                }
            }
        }
        if count != nf {
            return Err(MeshError::NotASphere("gluing graph is disconnected".into()));
        }
        let chi = vertices.len() as i64 - edges.len() as i64 + nf as i64;
        if chi != 2 {
            return Err(MeshError::NotASphere(format!("Euler characteristic {chi} != 2")));
        }

        let transition = (0..nf)
            .map(|fi| {
                let mut row = [Isometry2::identity(); 3];
                for s in 0..3 {
                    let t = faces[fi].twin[s];
                    let f = &faces[fi];
                    let g = &faces[t.face];
                    let pa = f.corner[next(s)];
                    let pb = f.corner[prev(s)];
                    let qa = g.corner[prev(t.side)];
                    let qb = g.corner[next(t.side)];
                    let da = pb - pa;
                    let db = qb - qa;
                    let rot = db.y.atan2(db.x) - da.y.atan2(da.x);
                    let iso = Isometry2::new(Vec2::zeros(), rot);
                    let moved = iso.transform_vector(&pa);
                    row[s] = Isometry2::new(qa - moved, rot);
                }
                row
            })
            .collect();

        let mesh = IntrinsicMesh {
            faces,
            edges,
            vertices,
            transition,
            eps,
            positions: None,
            subdivisions: 0,
        };
        let total: f64 = mesh.vertices.iter().map(|v| v.curvature()).sum();
        if (total - 4.0 * PI).abs() > mesh.vertices.len() as f64 * eps.max(1e-12) * 10.0 {
            return Err(MeshError::Internal(format!(
                "total curvature {total} differs from 4π"
            )));
        }
        Ok(mesh)
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: FaceId) -> &Face {
        &self.faces[f]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn set_eps(&mut self, eps: f64) {
        self.eps = eps;
    }

    pub fn positions(&self) -> Option<&[Point3<f64>]> {
        self.positions.as_deref()
    }

    pub(crate) fn set_positions(&mut self, p: Option<Vec<Point3<f64>>>) {
        self.positions = p;
    }

    /// How many barycentric subdivisions were applied during preprocessing.
    pub fn subdivisions(&self) -> usize {
        self.subdivisions
    }

    pub(crate) fn set_subdivisions(&mut self, k: usize) {
        self.subdivisions = k;
    }

    pub fn twin(&self, h: HalfEdge) -> HalfEdge {
        self.faces[h.face].twin[h.side]
    }

    /// Rigid map from the chart of `h.face` to the chart of its twin's face.
    pub fn transition(&self, h: HalfEdge) -> &Isometry2<f64> {
        &self.transition[h.face][h.side]
    }

    /// Edge joining `a` and `b`, if exactly one exists.
    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let mut found = None;
        for (i, e) in self.edges.iter().enumerate() {
            if e.v[0].min(e.v[1]) == lo && e.v[0].max(e.v[1]) == hi {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    pub fn vertex_data(&self, v: VertexId) -> VertexData {
        let vx = &self.vertices[v];
        VertexData {
            cone_angle: vx.cone_angle,
            curvature: vx.curvature(),
            is_convex: vx.is_convex(),
            star_faces: vx.fan.iter().map(|e| e.face).collect(),
            degree: vx.degree(),
        }
    }

    pub fn total_curvature(&self) -> f64 {
        self.vertices.iter().map(|v| v.curvature()).sum()
    }

    pub fn total_area(&self) -> f64 {
        self.faces.iter().map(|f| f.area).sum()
    }

    pub fn global_quantities(&self) -> GlobalQuantities {
        let edge_sum: f64 = self.edges.iter().map(|e| e.len).sum();
        let min_altitude = self
            .faces
            .iter()
            .map(|f| f.min_altitude())
            .fold(f64::INFINITY, f64::min);
        let max_degree = self.vertices.iter().map(|v| v.degree()).max().unwrap_or(0);
        let eta = ((max_degree as f64 + 1.0) * edge_sum / min_altitude).ceil() as u64;
        GlobalQuantities { edge_sum, min_altitude, max_degree, eta }
    }

    /// True if some edge is a loop or two edges join the same pair of vertices.
    pub fn has_loops_or_multi_edges(&self) -> bool {
        let mut pairs = std::collections::BTreeSet::new();
        for e in &self.edges {
            if e.v[0] == e.v[1] {
                return true;
            }
            let key = (e.v[0].min(e.v[1]), e.v[0].max(e.v[1]));
            if !pairs.insert(key) {
                return true;
            }
        }
        false
    }

    /// Returns the input records describing this mesh.
    pub fn face_inputs(&self) -> Vec<FaceInput> {
        self.faces.iter().map(|f| FaceInput { v: f.v, len: f.len }).collect()
    }

    /// Each gluing pair once, lower half-edge first.
    pub fn glue_pairs(&self) -> Vec<(HalfEdge, HalfEdge)> {
        let mut out = Vec::with_capacity(self.edges.len());
        for (fi, f) in self.faces.iter().enumerate() {
            for s in 0..3 {
                let h = HalfEdge::new(fi, s);
                if h < f.twin[s] {
                    out.push((h, f.twin[s]));
                }
            }
        }
        out
    }

    /// Fan entry at vertex `v` lying in face `f`, if `f` is incident to `v`.
    pub fn fan_entry(&self, v: VertexId, f: FaceId) -> Option<(usize, &FanEntry)> {
        self.vertices[v]
            .fan
            .iter()
            .enumerate()
            .find(|(_, e)| e.face == f)
    }

    /// Cone-angle coordinate at `v` of the edge `e` leaving `v`.
    pub fn spoke_angle(&self, v: VertexId, e: EdgeId) -> Option<f64> {
        let vx = &self.vertices[v];
        for entry in &vx.fan {
            let f = &self.faces[entry.face];
            // The side from v to corner+1 is opposite corner+2.
            if f.edge[prev(entry.corner)] == e {
                return Some(entry.start);
            }
        }
        None
    }

    /// Unit direction in the chart of fan entry `j` at local angle `phi`
    /// from the side towards corner+1.
    pub fn fan_direction(&self, v: VertexId, j: usize, phi: f64) -> Vec2 {
        let entry = self.vertices[v].fan[j];
        let f = &self.faces[entry.face];
        let c = entry.corner;
        let d = (f.corner[next(c)] - f.corner[c]).normalize();
        let (s, co) = phi.sin_cos();
        Vec2::new(co * d.x - s * d.y, s * d.x + co * d.y)
    }

    /// Local angle at corner `c` of face `f` of the direction `d`, measured
    /// counter-clockwise from the side towards corner `c+1`.
    pub fn local_angle(&self, f: FaceId, c: usize, d: Vec2) -> f64 {
        let face = &self.faces[f];
        let r = face.corner[next(c)] - face.corner[c];
        let a = cross(r, d).atan2(r.dot(&d));
        if a < 0.0 {
            // Directions slightly outside the corner due to rounding.
            if a > -1e-9 {
                0.0
            } else {
                a + 2.0 * PI
            }
        } else {
            a
        }
    }

    /// Returns a uniformly scaled copy.
    pub fn scaled(&self, lambda: f64) -> Result<IntrinsicMesh, MeshError> {
        let inputs: Vec<FaceInput> = self
            .face_inputs()
            .into_iter()
            .map(|f| FaceInput { v: f.v, len: f.len.map(|l| l * lambda) })
            .collect();
        let mut m = IntrinsicMesh::from_parts(&inputs, &self.glue_pairs(), self.eps)?;
        m.positions = self
            .positions
            .as_ref()
            .map(|p| p.iter().map(|x| Point3::from(x.coords * lambda)).collect());
        m.subdivisions = self.subdivisions;
        Ok(m)
    }
}
