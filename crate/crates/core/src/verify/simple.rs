//! Weak simplicity of closed piecewise-linear curves.
//!
//! The curve is cut at every point where it meets itself, so that any two
//! pieces either coincide or share at most endpoints. Coincident pieces form
//! bundles whose copies must be ordered side by side; at every node the
//! passes of the curve must then form a non-crossing chord diagram.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::geometry::{vertex_angle, PLCurve, SurfacePoint};
use crate::mesh::{cross, next, prev, FaceId, HalfEdge, IntrinsicMesh, Vec2};

/// Steps of the bundle-order search before giving up.
pub const SIMPLICITY_BUDGET: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Simplicity {
    Simple,
    /// Side-by-side order of each bundle of coincident pieces, by index of
    /// the curve segment each copy belongs to.
    WeaklySimple { witness: Vec<Vec<usize>>, degenerate: bool },
    NotWeaklySimple,
    Inconclusive,
}

impl Simplicity {
    pub fn accepted(&self) -> bool {
        matches!(self, Simplicity::Simple | Simplicity::WeaklySimple { .. })
    }
}

/// Where a piece lies: inside a face, or along an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Track {
    Face(FaceId),
    Edge(usize),
}

struct Piece {
    a: usize,
    b: usize,
    face: FaceId,
    track: Track,
    segment: usize,
}

pub fn check_weakly_simple(mesh: &IntrinsicMesh, curve: &PLCurve) -> Simplicity {
    let n = curve.num_segments();
    if n == 0 {
        return Simplicity::Simple;
    }
    let tol = (mesh.eps() * 100.0).max(1e-9);

    // Split parameters per segment, from pairwise intersections.
    let mut cuts: Vec<Vec<f64>> = vec![Vec::new(); n];
    let faces_of = |i: usize| -> Vec<FaceId> {
        let f = curve.faces[i];
        let mut out = vec![f];
        if let Some(s) = along_side(mesh, curve, i) {
            out.push(mesh.twin(HalfEdge::new(f, s)).face);
        }
        out
    };
    let seg_faces: Vec<Vec<FaceId>> = (0..n).map(faces_of).collect();
    let chart = |i: usize, f: FaceId| -> Option<(Vec2, Vec2)> {
        let p = curve.points[i].chart_in(mesh, f)?;
        let q = curve.points[(i + 1) % n].chart_in(mesh, f)?;
        Some((p, q))
    };
    for i in 0..n {
        for j in i + 1..n {
            for &f in &seg_faces[i] {
                if !seg_faces[j].contains(&f) {
                    continue;
                }
                let (Some((p0, p1)), Some((q0, q1))) = (chart(i, f), chart(j, f)) else {
                    continue;
                };
                for (s, t) in intersect(p0, p1, q0, q1, tol) {
                    cuts[i].push(s);
                    cuts[j].push(t);
                }
            }
        }
    }

    // Refined pieces and node identification.
    let mut nodes: Vec<SurfacePoint> = Vec::new();
    let mut node_of = |p: SurfacePoint| -> usize {
        if let Some(k) = nodes.iter().position(|q| same_point(mesh, q, &p, tol)) {
            k
        } else {
            nodes.push(p);
            nodes.len() - 1
        }
    };
    let mut pieces: Vec<Piece> = Vec::new();
    for i in 0..n {
        let f = curve.faces[i];
        let (p, q) = chart(i, f).expect("curve is consistent");
        let mut ts: Vec<f64> = cuts[i].iter().copied().filter(|&t| t > 1e-12 && t < 1.0 - 1e-12).collect();
        ts.sort_by(|a, b| a.total_cmp(b));
        let len = (q - p).norm();
        ts.dedup_by(|a, b| (*a - *b) * len <= tol);
        let mut pts = vec![curve.points[i]];
        for &t in &ts {
            pts.push(SurfacePoint::from_chart(mesh, f, p + (q - p) * t));
        }
        pts.push(curve.points[(i + 1) % n]);
        let track = match along_side(mesh, curve, i) {
            Some(s) => Track::Edge(mesh.face(f).edge[s]),
            None => Track::Face(f),
        };
        for w in pts.windows(2) {
            let a = node_of(w[0]);
            let b = node_of(w[1]);
            if a != b {
                pieces.push(Piece { a, b, face: f, track, segment: i });
            }
        }
    }
    let m = pieces.len();
    if m == 0 {
        return Simplicity::Simple;
    }

    // Bundles of coincident pieces.
    let mut bundle_key: BTreeMap<(usize, usize, Track), usize> = BTreeMap::new();
    let mut bundles: Vec<Vec<usize>> = Vec::new();
    let mut bundle_of = vec![0; m];
    for (k, pc) in pieces.iter().enumerate() {
        let key = (pc.a.min(pc.b), pc.a.max(pc.b), pc.track);
        let id = *bundle_key.entry(key).or_insert_with(|| {
            bundles.push(Vec::new());
            bundles.len() - 1
        });
        bundles[id].push(k);
        bundle_of[k] = id;
    }
    let bundle_start: Vec<usize> = bundles.iter().map(|b| pieces[b[0]].a.min(pieces[b[0]].b)).collect();

    // Passes at nodes: piece k-1 arrives and piece k leaves.
    let mut passes: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes.len()];
    for k in 0..m {
        let prev_piece = (k + m - 1) % m;
        passes[pieces[k].a].push((prev_piece, k));
    }
    let node_visits: usize = passes.iter().map(|p| p.len()).max().unwrap_or(0);
    let multi: Vec<usize> = (0..bundles.len()).filter(|&b| bundles[b].len() > 1).collect();
    if multi.is_empty() && node_visits <= 1 {
        return Simplicity::Simple;
    }

    // Direction of each bundle at each of its ends, as an angle.
    let angle_at = |k: usize, node: usize| -> f64 {
        let pc = &pieces[k];
        let other = if pc.a == node { pc.b } else { pc.a };
        let p = nodes[node].chart_in(mesh, pc.face).expect("node on face");
        let q = nodes[other].chart_in(mesh, pc.face).expect("node on face");
        node_angle(mesh, &nodes[node], pc.face, q - p)
    };

    // Ports around each node, grouped by bundle in angular order.
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (node, ps) in passes.iter().enumerate() {
        let mut bs: Vec<(f64, usize)> = Vec::new();
        for &(i, o) in ps {
            for k in [i, o] {
                let b = bundle_of[k];
                if !bs.iter().any(|x| x.1 == b) {
                    bs.push((angle_at(k, node), b));
                }
            }
        }
        bs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        groups[node] = bs.into_iter().map(|x| x.1).collect();
    }

    // Order of search: bundles with several copies; a node is checked once
    // all its multi-copy bundles are fixed.
    let mut rank = vec![usize::MAX; bundles.len()];
    for (r, &b) in multi.iter().enumerate() {
        rank[b] = r;
    }
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); multi.len() + 1];
    for node in 0..nodes.len() {
        if passes[node].is_empty() {
            continue;
        }
        let r = groups[node]
            .iter()
            .filter(|&&b| rank[b] != usize::MAX)
            .map(|&b| rank[b] + 1)
            .max()
            .unwrap_or(0);
        ready[r].push(node);
    }

    let ctx = Ctx {
        pieces: &pieces,
        bundles: &bundles,
        bundle_start: &bundle_start,
        passes: &passes,
        groups: &groups,
    };
    let mut order: Vec<Vec<usize>> = bundles.clone();
    for &node in &ready[0] {
        if !ctx.node_ok(node, &order) {
            return Simplicity::NotWeaklySimple;
        }
    }
    let mut steps = 0u64;
    match search(&ctx, &multi, &ready, 0, &mut order, &mut steps) {
        Some(true) => {
            if multi.is_empty() {
                return Simplicity::WeaklySimple { witness: Vec::new(), degenerate: false };
            }
            let witness: Vec<Vec<usize>> = multi
                .iter()
                .map(|&b| order[b].iter().map(|&k| pieces[k].segment).collect())
                .collect();
            let degenerate = bundles.iter().all(|b| {
                b.len() == 2 && pieces[b[0]].a == pieces[b[1]].b && pieces[b[0]].b == pieces[b[1]].a
            });
            Simplicity::WeaklySimple { witness, degenerate }
        }
        Some(false) => Simplicity::NotWeaklySimple,
        None => Simplicity::Inconclusive,
    }
}

struct Ctx<'a> {
    pieces: &'a [Piece],
    bundles: &'a [Vec<usize>],
    bundle_start: &'a [usize],
    passes: &'a [Vec<(usize, usize)>],
    groups: &'a [Vec<usize>],
}

impl Ctx<'_> {
    /// Checks that the passes through `node` do not cross, for the given
    /// side-by-side order of every bundle.
    fn node_ok(&self, node: usize, order: &[Vec<usize>]) -> bool {
        // Position of each port counter-clockwise around the node. Copies of
        // a bundle appear in its order at the bundle's start node and in
        // reverse at the other end.
        let mut pos: BTreeMap<usize, usize> = BTreeMap::new();
        let mut idx = 0;
        for &b in &self.groups[node] {
            let mut copies: Vec<usize> = order[b].clone();
            if self.bundle_start[b] != node {
                copies.reverse();
            }
            for k in copies {
                let pc = &self.pieces[k];
                if pc.a == node || pc.b == node {
                    pos.insert(k, idx);
                    idx += 1;
                }
            }
        }
        // Each port holds one end of a chord; chords must nest.
        let mut at: Vec<usize> = vec![usize::MAX; idx];
        for (c, &(i, o)) in self.passes[node].iter().enumerate() {
            at[pos[&i]] = c;
            at[pos[&o]] = c;
        }
        let mut stack: Vec<usize> = Vec::new();
        for &c in &at {
            if c == usize::MAX {
                continue;
            }
            if stack.last() == Some(&c) {
                stack.pop();
            } else {
                stack.push(c);
            }
        }
        stack.is_empty()
    }
}

fn search(
    ctx: &Ctx,
    multi: &[usize],
    ready: &[Vec<usize>],
    r: usize,
    order: &mut Vec<Vec<usize>>,
    steps: &mut u64,
) -> Option<bool> {
    if r == multi.len() {
        return Some(true);
    }
    let b = multi[r];
    let mut copies = ctx.bundles[b].clone();
    copies.sort_unstable();
    let mut found = false;
    let mut exhausted = false;
    permutations(&mut copies, 0, &mut |perm| {
        if found || exhausted {
            return;
        }
        *steps += 1;
        if *steps > SIMPLICITY_BUDGET {
            exhausted = true;
            return;
        }
        order[b] = perm.to_vec();
        if ready[r + 1].iter().all(|&node| ctx.node_ok(node, order)) {
            match search(ctx, multi, ready, r + 1, order, steps) {
                Some(true) => found = true,
                Some(false) => {}
                None => exhausted = true,
            }
        }
    });
    if found {
        Some(true)
    } else if exhausted {
        None
    } else {
        Some(false)
    }
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Side of the segment's face that the segment runs along, if any.
fn along_side(mesh: &IntrinsicMesh, curve: &PLCurve, i: usize) -> Option<usize> {
    let n = curve.points.len();
    let f = curve.faces[i];
    let face = mesh.face(f);
    let on = |p: &SurfacePoint, s: usize| match *p {
        SurfacePoint::Vertex { vertex } => face.v[next(s)] == vertex || face.v[prev(s)] == vertex,
        SurfacePoint::Edge { edge, .. } => face.edge[s] == edge,
        SurfacePoint::Face { .. } => false,
    };
    let (p, q) = (&curve.points[i], &curve.points[(i + 1) % n]);
    (0..3).find(|&s| on(p, s) && on(q, s))
}

fn same_point(mesh: &IntrinsicMesh, p: &SurfacePoint, q: &SurfacePoint, tol: f64) -> bool {
    match (*p, *q) {
        (SurfacePoint::Vertex { vertex: a }, SurfacePoint::Vertex { vertex: b }) => a == b,
        (SurfacePoint::Edge { edge: a, t: s }, SurfacePoint::Edge { edge: b, t }) => {
            a == b && (s - t).abs() * mesh.edge(a).len <= tol
        }
        (SurfacePoint::Face { face: a, .. }, SurfacePoint::Face { face: b, .. }) => {
            a == b && (p.chart_in(mesh, a).unwrap() - q.chart_in(mesh, a).unwrap()).norm() <= tol
        }
        _ => false,
    }
}

/// Angle of chart direction `d` (in face `f`) around the node `p`.
fn node_angle(mesh: &IntrinsicMesh, p: &SurfacePoint, f: FaceId, d: Vec2) -> f64 {
    match *p {
        SurfacePoint::Vertex { vertex } => vertex_angle(mesh, vertex, f, d),
        SurfacePoint::Edge { edge, .. } => {
            let h0 = mesh.edge(edge).half[0];
            let d = if f == h0.face {
                d
            } else {
                let s = mesh.face(f).side_of(edge).unwrap();
                mesh.transition(HalfEdge::new(f, s)) * d
            };
            let a = d.y.atan2(d.x);
            if a < 0.0 {
                a + 2.0 * std::f64::consts::PI
            } else {
                a
            }
        }
        SurfacePoint::Face { .. } => {
            let a = d.y.atan2(d.x);
            if a < 0.0 {
                a + 2.0 * std::f64::consts::PI
            } else {
                a
            }
        }
    }
}

/// Parameters along both segments of their common points: one point for a
/// transverse or touching intersection, the overlap ends for collinear ones.
fn intersect(p0: Vec2, p1: Vec2, q0: Vec2, q1: Vec2, tol: f64) -> Vec<(f64, f64)> {
    let r = p1 - p0;
    let s = q1 - q0;
    let (lr, ls) = (r.norm(), s.norm());
    if lr <= tol || ls <= tol {
        return Vec::new();
    }
    let denom = cross(r, s);
    let proj = |x: Vec2, a: Vec2, d: Vec2, l: f64| (x - a).dot(&d) / (l * l);
    let dist = |x: Vec2, a: Vec2, d: Vec2, l: f64| cross(d, x - a).abs() / l;
    if denom.abs() <= tol * lr * ls {
        // Parallel: only collinear overlaps matter.
        if dist(q0, p0, r, lr) > tol {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (x, tq) in [(q0, 0.0), (q1, 1.0)] {
            let t = proj(x, p0, r, lr);
            if t * lr >= -tol && (t - 1.0) * lr <= tol {
                out.push((t.clamp(0.0, 1.0), tq));
            }
        }
        for (x, tp) in [(p0, 0.0), (p1, 1.0)] {
            let t = proj(x, q0, s, ls);
            if t * ls >= -tol && (t - 1.0) * ls <= tol {
                out.push((tp, t.clamp(0.0, 1.0)));
            }
        }
        return out;
    }
    let w = q0 - p0;
    let t = cross(w, s) / denom;
    let u = cross(w, r) / denom;
    if t * lr >= -tol && (t - 1.0) * lr <= tol && u * ls >= -tol && (u - 1.0) * ls <= tol {
        vec![(t.clamp(0.0, 1.0), u.clamp(0.0, 1.0))]
    } else {
        Vec::new()
    }
}
