use serde::{Deserialize, Serialize};

use crate::geometry::{angle_rule_defect, side_angles_at_vertex, vertex_angle, PLCurve, SurfacePoint};
use crate::mesh::{cross, FaceId, HalfEdge, IntrinsicMesh, Vec2, VertexId};

/// How far a closed curve is from being a quasigeodesic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericReport {
    /// Largest turning angle at a point that is not a vertex.
    pub straightness: f64,
    pub worst_point: Option<usize>,
    /// Largest amount by which a side angle at a vertex misses its bound.
    pub angle_violation: f64,
    pub worst_vertex: Option<VertexId>,
    pub length: f64,
    pub accept: bool,
}

pub fn check_curve_numeric(mesh: &IntrinsicMesh, curve: &PLCurve, tol: f64) -> NumericReport {
    let mut c = curve.clone();
    c.canonicalize(mesh);
    let n = c.points.len();
    let mut report = NumericReport {
        straightness: 0.0,
        worst_point: None,
        angle_violation: 0.0,
        worst_vertex: None,
        length: c.length(mesh),
        accept: true,
    };
    if n < 2 || c.num_segments() < 2 {
        report.accept = false;
        return report;
    }
    for i in 0..n {
        let f_in = c.faces[(i + n - 1) % n];
        let f_out = c.faces[i];
        let p = c.points[i];
        let prev = c.points[(i + n - 1) % n].chart_in(mesh, f_in).unwrap();
        let here_in = p.chart_in(mesh, f_in).unwrap();
        let here_out = p.chart_in(mesh, f_out).unwrap();
        let nxt = c.points[(i + 1) % n].chart_in(mesh, f_out).unwrap();
        match p {
            SurfacePoint::Vertex { vertex } => {
                let t_in = vertex_angle(mesh, vertex, f_in, prev - here_in);
                let t_out = vertex_angle(mesh, vertex, f_out, nxt - here_out);
                let (l, r) = side_angles_at_vertex(mesh, vertex, t_in, t_out);
                let (_, d) = angle_rule_defect(mesh.vertex(vertex).cone_angle, l, r, mesh.eps());
                if d > report.angle_violation {
                    report.angle_violation = d;
                    report.worst_vertex = Some(vertex);
                }
            }
            _ => {
                let d_in = to_face(mesh, &p, f_in, f_out, here_in - prev);
                let d_out = nxt - here_out;
                let turn = cross(d_in, d_out).atan2(d_in.dot(&d_out)).abs();
                if turn > report.straightness {
                    report.straightness = turn;
                    report.worst_point = Some(i);
                }
            }
        }
    }
    report.accept = report.straightness <= tol && report.angle_violation <= tol;
    report
}

/// Carries a chart vector at point `p` from face `from` into face `to`.
fn to_face(mesh: &IntrinsicMesh, p: &SurfacePoint, from: FaceId, to: FaceId, d: Vec2) -> Vec2 {
    if from == to {
        return d;
    }
    if let SurfacePoint::Edge { edge, .. } = *p {
        if let Some(s) = mesh.face(from).side_of(edge) {
            let h = HalfEdge::new(from, s);
            if mesh.twin(h).face == to {
                return mesh.transition(h) * d;
            }
        }
    }
    d
}
