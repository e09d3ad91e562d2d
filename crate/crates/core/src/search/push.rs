use crate::geometry::{unfold_strip, PLCurve, SurfacePoint};
use crate::mesh::{cross, next, prev, EdgeId, FaceId, IntrinsicMesh, Vec2};
use crate::verify::check_curve_numeric;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum PushError {
    #[error("the curve already passes through a vertex")]
    HasVertex,
    #[error("the curve crosses no edge")]
    NoCrossing,
    #[error("the unfolded curve does not close up by a translation")]
    NotParallel,
    #[error("no vertex reached while pushing the curve")]
    NoVertexHit,
    #[error("pushed curve failed verification")]
    Unverified,
}

/// Translates a vertex-free closed geodesic sideways within its band of
/// parallel geodesics until it first meets a vertex.
pub fn push_to_vertex(mesh: &IntrinsicMesh, curve: &PLCurve) -> Result<PLCurve, PushError> {
    let eps = mesh.eps();
    let mut c = curve.clone();
    c.canonicalize(mesh);
    if c.points.iter().any(|p| p.as_vertex().is_some()) {
        return Err(PushError::HasVertex);
    }
    let n = c.points.len();
    let idx: Vec<usize> = (0..n).filter(|&i| matches!(c.points[i], SurfacePoint::Edge { .. })).collect();
    if idx.is_empty() {
        return Err(PushError::NoCrossing);
    }
    let i0 = idx[0];
    let word: Vec<EdgeId> = idx[1..]
        .iter()
        .chain(std::iter::once(&i0))
        .map(|&i| match c.points[i] {
            SurfacePoint::Edge { edge, .. } => edge,
            _ => unreachable!(),
        })
        .collect();
    let start = c.points[i0];
    let strip = unfold_strip(mesh, &start, &word, &start, Some(c.faces[i0])).map_err(|_| PushError::NotParallel)?;
    let last = strip.faces.len() - 1;
    if strip.faces[last] != strip.faces[0] {
        return Err(PushError::NotParallel);
    }
    // Holonomy around the curve must be a translation along it.
    let rot = strip.placements[last].rotation.angle() - strip.placements[0].rotation.angle();
    let rot = (rot + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI) - std::f64::consts::PI;
    if rot.abs() > 1e-7 {
        return Err(PushError::NotParallel);
    }
    let s = strip.start;
    let d = strip.end - s;
    let len = d.norm();
    let u = d / len;
    let normal = Vec2::new(-u.y, u.x);

    // Nearest corners on each side of the line.
    let (mut left, mut right) = (f64::INFINITY, f64::INFINITY);
    for i in 0..last {
        for p in strip.corners(mesh, i) {
            let h = cross(u, p - s);
            if h > 0.0 {
                left = left.min(h);
            } else {
                right = right.min(-h);
            }
        }
    }
    if !left.is_finite() && !right.is_finite() {
        return Err(PushError::NoVertexHit);
    }
    let shift = if left <= right { left } else { -right };
    let s2 = s + normal * shift;

    // Intersections of the shifted line with each crossed side.
    let mut points: Vec<SurfacePoint> = Vec::new();
    let mut faces: Vec<FaceId> = Vec::new();
    for i in 0..last {
        let h = strip.crossed[i];
        let face = mesh.face(h.face);
        let (a, b) = strip.crossed_side(mesh, i);
        let ha = cross(u, a - s2);
        let hb = cross(u, b - s2);
        let p = if ha.abs() <= eps * 10.0 {
            SurfacePoint::vertex(face.v[next(h.side)])
        } else if hb.abs() <= eps * 10.0 {
            SurfacePoint::vertex(face.v[prev(h.side)])
        } else if ha * hb < 0.0 {
            SurfacePoint::on_side(mesh, h.face, h.side, ha / (ha - hb))
        } else {
            return Err(PushError::NoVertexHit);
        };
        // The segment leaving a crossing of side i lies in strip face i + 1.
        if points.last() == Some(&p) {
            *faces.last_mut().unwrap() = strip.faces[i + 1];
            continue;
        }
        points.push(p);
        faces.push(strip.faces[i + 1]);
    }
    let mut out = PLCurve { points, faces, closed: true };
    if out.points.len() > 1 && out.points.first() == out.points.last() {
        out.points.pop();
        out.faces.pop();
    }
    fix_faces(mesh, &mut out);
    out.canonicalize(mesh);
    if out.points.iter().all(|p| p.as_vertex().is_none()) {
        return Err(PushError::NoVertexHit);
    }
    let report = check_curve_numeric(mesh, &out, 1e-6);
    if !report.accept || (report.length - len).abs() > 1e-6 * len.max(1.0) {
        return Err(PushError::Unverified);
    }
    Ok(out)
}

/// Replaces any segment face that does not hold both endpoints by one that
/// does (needed where a run of crossings collapsed onto a vertex).
fn fix_faces(mesh: &IntrinsicMesh, c: &mut PLCurve) {
    let n = c.points.len();
    for i in 0..n {
        let (p, q) = (c.points[i], c.points[(i + 1) % n]);
        let f = c.faces[i];
        if p.chart_in(mesh, f).is_some() && q.chart_in(mesh, f).is_some() {
            continue;
        }
        if let Some(&g) = crate::geometry::common_faces(mesh, &p, &q).first() {
            c.faces[i] = g;
        }
    }
}
