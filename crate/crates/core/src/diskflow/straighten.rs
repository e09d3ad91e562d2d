use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::star::{decompose_arcs, region_angles_from, star_angle, star_radius, swept_angle, RegionAngles};
use crate::geometry::{PLCurve, Side, SurfacePoint};
use crate::mesh::{cross, prev, FaceId, IntrinsicMesh, Vec2, VertexId};

/// Portals closer than this (in angle) to a gate are skipped.
const PORTAL_GAP: f64 = 1e-10;

/// Which replacement the straightening rules pick for a piece of arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    /// Through the star center: `[A p] ∪ [p B]`.
    Apex,
    /// Shortest path inside the region on the given side.
    Shortest(Side),
}

/// Picks the replacement rule. `current` is the region containing the piece
/// when it avoids the center. Flat centers follow the convex rules; in the
/// concave case an angle within `eps` of π counts as at least π.
pub fn choose_rule(cone: f64, angles: RegionAngles, current: Option<Side>, eps: f64) -> Rule {
    if cone <= 2.0 * PI + eps {
        let r_ok = angles.right <= PI + eps;
        let l_ok = angles.left <= PI + eps;
        if r_ok && l_ok {
            match current {
                None => Rule::Apex,
                Some(side) => Rule::Shortest(side),
            }
        } else if !r_ok {
            Rule::Shortest(Side::Left)
        } else {
            Rule::Shortest(Side::Right)
        }
    } else if angles.right >= PI - eps && angles.left >= PI - eps {
        Rule::Apex
    } else if angles.right < PI - eps {
        Rule::Shortest(Side::Right)
    } else {
        Rule::Shortest(Side::Left)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Node {
    Start,
    End,
    Center,
    /// Link vertex at the end of portal `k`.
    Link(usize),
}

struct Portal {
    /// Angle relative to the start gate, signed along the sweep.
    psi: f64,
    fan: usize,
    radius: f64,
}

/// A gate of the star boundary with its cone-angle coordinate and radius.
#[derive(Clone, Copy, Debug)]
pub struct GatePoint {
    pub point: SurfacePoint,
    pub angle: f64,
    pub radius: f64,
}

/// Replacement path between two gates: points from `A` to `B` inclusive and
/// the face of each segment.
#[derive(Clone, Debug, PartialEq)]
pub struct Replacement {
    pub points: Vec<SurfacePoint>,
    pub faces: Vec<FaceId>,
    pub length: f64,
}

fn polar(r: f64, psi: f64) -> Vec2 {
    Vec2::new(r * psi.cos(), r * psi.sin())
}

/// Shortest path from `a` to `b` within the region swept from `a` by the
/// signed angle `sweep` around the center (positive = counter-clockwise,
/// i.e. the right region). The region carries no interior cone point, so it
/// is unfolded flat and the path is found by the funnel algorithm across
/// the spokes.
pub fn shortest_path_in_region(mesh: &IntrinsicMesh, i: VertexId, a: &GatePoint, b: &GatePoint, sweep: f64) -> Replacement {
    let vx = mesh.vertex(i);
    let cone = vx.cone_angle;
    let total = sweep.abs();
    let dir = if sweep >= 0.0 { 1.0 } else { -1.0 };

    let mut portals = Vec::new();
    for (j, entry) in vx.fan.iter().enumerate() {
        let base = if dir > 0.0 {
            (entry.start - a.angle).rem_euclid(cone)
        } else {
            (a.angle - entry.start).rem_euclid(cone)
        };
        let face = mesh.face(entry.face);
        let radius = face.len[prev(entry.corner)];
        let mut off = base;
        while off < total - PORTAL_GAP {
            if off > PORTAL_GAP {
                portals.push(Portal { psi: dir * off, fan: j, radius });
            }
            off += cone;
        }
    }
    portals.sort_by(|p, q| p.psi.abs().total_cmp(&q.psi.abs()));

    let start = polar(a.radius, 0.0);
    let end = polar(b.radius, sweep);
    let pos = |n: Node| match n {
        Node::Start => start,
        Node::End => end,
        Node::Center => Vec2::zeros(),
        Node::Link(k) => polar(portals[k].radius, portals[k].psi),
    };
    // Counter-clockwise travel keeps the center on the left.
    let mut gates: Vec<(Node, Node)> = vec![(Node::Start, Node::Start)];
    for k in 0..portals.len() {
        gates.push(if dir > 0.0 { (Node::Center, Node::Link(k)) } else { (Node::Link(k), Node::Center) });
    }
    gates.push((Node::End, Node::End));

    let mut path: Vec<(Node, usize)> = vec![(Node::Start, 0)];
    let (mut apex, mut left, mut right) = (Node::Start, Node::Start, Node::Start);
    let (mut left_i, mut right_i) = (0usize, 0usize);
    let mut g = 1;
    while g < gates.len() {
        let (l, r) = gates[g];
        let pa = pos(apex);
        if cross(pos(right) - pa, pos(r) - pa) >= 0.0 {
            if apex == right || cross(pos(left) - pa, pos(r) - pa) < 0.0 {
                right = r;
                right_i = g;
            } else {
                apex = left;
                let apex_i = left_i;
                path.push((apex, apex_i));
                right = apex;
                right_i = apex_i;
                g = apex_i + 1;
                continue;
            }
        }
        if cross(pos(left) - pa, pos(l) - pa) <= 0.0 {
            if apex == left || cross(pos(right) - pa, pos(l) - pa) > 0.0 {
                left = l;
                left_i = g;
            } else {
                apex = right;
                let apex_i = right_i;
                path.push((apex, apex_i));
                left = apex;
                left_i = apex_i;
                g = apex_i + 1;
                continue;
            }
        }
        g += 1;
    }
    path.push((Node::End, gates.len() - 1));

    let surface_of = |n: Node| -> SurfacePoint {
        match n {
            Node::Start => a.point,
            Node::End => b.point,
            Node::Center => SurfacePoint::vertex(i),
            Node::Link(k) => {
                let entry = vx.fan[portals[k].fan];
                SurfacePoint::vertex(mesh.face(entry.face).v[crate::mesh::next(entry.corner)])
            }
        }
    };
    let angle_of = |n: Node| -> Option<f64> {
        match n {
            Node::Start => Some(0.0),
            Node::End => Some(sweep),
            Node::Center => None,
            Node::Link(k) => Some(portals[k].psi),
        }
    };

    // Emit path vertices together with the spoke crossings of each leg.
    let mut pts: Vec<(SurfacePoint, Option<f64>)> = vec![(a.point, Some(0.0))];
    let mut length = 0.0;
    for w in path.windows(2) {
        let ((u, ui), (v, vi)) = (w[0], w[1]);
        let (pu, pv) = (pos(u), pos(v));
        length += (pv - pu).norm();
        if u != Node::Center && v != Node::Center {
            for k in ui..vi.saturating_sub(1) {
                let portal = &portals[k];
                let d = polar(1.0, portal.psi);
                let denom = cross(d, pv - pu);
                if denom.abs() <= f64::EPSILON {
                    continue;
                }
                let t = -cross(d, pu) / denom;
                let rho = (pu + (pv - pu) * t).dot(&d).clamp(0.0, portal.radius);
                let entry = vx.fan[portal.fan];
                let q = SurfacePoint::on_side(mesh, entry.face, prev(entry.corner), rho / portal.radius);
                pts.push((q, Some(portal.psi)));
            }
        }
        pts.push((surface_of(v), angle_of(v)));
    }
    pts.dedup_by(|x, y| x.0.approx_eq(&y.0, 0.0));

    let mut faces = Vec::with_capacity(pts.len() - 1);
    for w in pts.windows(2) {
        let mid = match (w[0].1, w[1].1) {
            (Some(x), Some(y)) => 0.5 * (x + y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => 0.0,
        };
        // Nudge towards the sweep so that a leg along a spoke picks a face
        // on the swept side.
        let theta = a.angle + mid + dir * 1e-12;
        faces.push(vx.fan[vx.fan_index(theta)].face);
    }
    Replacement { points: pts.into_iter().map(|p| p.0).collect(), faces, length }
}

/// The path `[A p] ∪ [p B]`.
pub fn apex_path(mesh: &IntrinsicMesh, i: VertexId, a: &GatePoint, b: &GatePoint) -> Replacement {
    let vx = mesh.vertex(i);
    let fa = vx.fan[vx.fan_index(a.angle)].face;
    let fb = vx.fan[vx.fan_index(b.angle)].face;
    Replacement {
        points: vec![a.point, SurfacePoint::vertex(i), b.point],
        faces: vec![fa, fb],
        length: a.radius + b.radius,
    }
}

/// A piece of curve between a gate open to the right and the next gate,
/// lying in the star: points `A..=B` and the faces of its segments.
#[derive(Clone, Debug)]
pub struct Piece {
    pub points: Vec<SurfacePoint>,
    pub faces: Vec<FaceId>,
}

/// Outcome of straightening one piece.
#[derive(Clone, Debug)]
pub struct Straightened {
    pub rule: Rule,
    pub angles: RegionAngles,
    pub replacement: Replacement,
    /// The piece was already the replacement, or not longer than it.
    pub unchanged: bool,
}

/// Applies the convex/concave straightening rules to a piece.
pub fn straighten_piece(mesh: &IntrinsicMesh, i: VertexId, piece: &Piece) -> Straightened {
    let eps = mesh.eps();
    let m = piece.faces.len();
    let sub = PLCurve { points: piece.points.clone(), faces: piece.faces.clone(), closed: false };
    let old_len = sub.length(mesh);
    let a_pt = piece.points[0];
    let b_pt = piece.points[m];
    let a = GatePoint {
        point: a_pt,
        angle: star_angle(mesh, i, piece.faces[0], &a_pt),
        radius: star_radius(mesh, i, piece.faces[0], &a_pt),
    };
    let b = GatePoint {
        point: b_pt,
        angle: star_angle(mesh, i, piece.faces[m - 1], &b_pt),
        radius: star_radius(mesh, i, piece.faces[m - 1], &b_pt),
    };
    let cone = mesh.vertex(i).cone_angle;

    let mut winding = Some(0.0);
    for k in 0..m {
        winding = match (winding, swept_angle(mesh, i, &sub, k)) {
            (Some(w), Some(d)) => Some(w + d),
            _ => None,
        };
    }
    let through_center = winding.is_none() || piece.points.iter().any(|q| q.as_vertex() == Some(i));
    let (angles, current) = if through_center {
        (region_angles_from(mesh, i, a.angle, b.angle), None)
    } else {
        let w = winding.unwrap().clamp(-cone, cone);
        if w >= 0.0 {
            (RegionAngles { right: w, left: cone - w }, Some(Side::Right))
        } else {
            (RegionAngles { right: cone + w, left: -w }, Some(Side::Left))
        }
    };
    let rule = choose_rule(cone, angles, current, eps);
    let replacement = match rule {
        Rule::Apex => apex_path(mesh, i, &a, &b),
        Rule::Shortest(Side::Right) => shortest_path_in_region(mesh, i, &a, &b, angles.right),
        Rule::Shortest(Side::Left) => shortest_path_in_region(mesh, i, &a, &b, -angles.left),
    };
    let unchanged = replacement.length >= old_len - 1e-12 * (1.0 + old_len);
    Straightened { rule, angles, replacement, unchanged }
}

/// Result of straightening a curve in one star.
#[derive(Clone, Debug, PartialEq)]
pub enum LocalOutcome {
    Curve(PLCurve),
    /// The curve lay strictly inside the star and was replaced by a point.
    Collapsed(SurfacePoint),
}

/// One straightening step in the star of `i`, applied to every piece of the
/// curve between consecutive gates.
pub fn phi_loc(mesh: &IntrinsicMesh, curve: &PLCurve, i: VertexId) -> LocalOutcome {
    let mut c = curve.clone();
    c.canonicalize(mesh);
    let n = c.points.len();
    if n < 2 || c.length(mesh) <= mesh.eps() {
        return LocalOutcome::Collapsed(c.points[0]);
    }
    let arcs = decompose_arcs(mesh, &c, i);
    if arcs.iter().any(|arc| arc.interior_loop) {
        return LocalOutcome::Collapsed(SurfacePoint::vertex(i));
    }
    let mut gates: Vec<_> = arcs.iter().flat_map(|arc| arc.gates.iter().cloned()).collect();
    gates.sort_by_key(|g| g.point);

    // Straightened pieces keyed by their first point.
    let mut pieces: Vec<(usize, usize, Replacement)> = Vec::new();
    for (k, g) in gates.iter().enumerate() {
        if !g.open_right {
            continue;
        }
        let b = gates[(k + 1) % gates.len()].point;
        let span = if b > g.point { b - g.point } else { b + n - g.point };
        let points: Vec<SurfacePoint> = (0..=span).map(|d| c.points[(g.point + d) % n]).collect();
        let faces: Vec<FaceId> = (0..span).map(|d| c.faces[(g.point + d) % n]).collect();
        if points[0].as_vertex() == Some(i) || points[span].as_vertex() == Some(i) {
            continue;
        }
        let s = straighten_piece(mesh, i, &Piece { points, faces });
        if !s.unchanged {
            pieces.push((g.point, span, s.replacement));
        }
    }
    if pieces.is_empty() {
        return LocalOutcome::Curve(c);
    }

    let mut points = Vec::with_capacity(n);
    let mut faces = Vec::with_capacity(n);
    let mut pos = pieces[0].0;
    let mut covered = 0;
    while covered < n {
        match pieces.iter().find(|p| p.0 == pos) {
            Some((_, span, rep)) => {
                let k = rep.points.len() - 1;
                points.extend_from_slice(&rep.points[..k]);
                faces.extend_from_slice(&rep.faces);
                covered += span;
                pos = (pos + span) % n;
            }
            None => {
                points.push(c.points[pos]);
                faces.push(c.faces[pos]);
                covered += 1;
                pos = (pos + 1) % n;
            }
        }
    }
    if points.is_empty() {
        return LocalOutcome::Collapsed(c.points[pieces[0].0]);
    }
    let mut out = PLCurve { points, faces, closed: true };
    out.canonicalize(mesh);
    if out.points.len() < 2 || out.length(mesh) <= mesh.eps() {
        return LocalOutcome::Collapsed(out.points[0]);
    }
    LocalOutcome::Curve(out)
}
