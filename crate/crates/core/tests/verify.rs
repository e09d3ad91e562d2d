use std::f64::consts::PI;

use quasigeodesic::geometry::{parse_word, trace_ray, Direction, Letter, PLCurve, SurfacePoint};
use quasigeodesic::mesh::{generate, IntrinsicMesh};
use quasigeodesic::verify::{
    check_curve_numeric, check_weakly_simple, check_word, extract_word, Rejection, Simplicity,
};

fn word(m: &IntrinsicMesh, s: &str) -> Vec<Letter> {
    parse_word(m, s).unwrap()
}

fn face_with(m: &IntrinsicMesh, vs: [usize; 3]) -> usize {
    (0..m.num_faces())
        .find(|&f| vs.iter().all(|v| m.face(f).v.contains(v)))
        .unwrap()
}

/// The traced horizontal band loop of the cube at height `z`, starting a
/// quarter of the way along the lateral face y = 0.
fn cube_band(m: &IntrinsicMesh, z: f64) -> PLCurve {
    let f = face_with(m, [0, 5, 4]);
    let face = m.face(f);
    // In this face, corner order is (0, 5, 4); 3D (x, z) = (0,0), (1,1), (0,1).
    let c0 = face.corner[face.corner_of(0).unwrap()];
    let c5 = face.corner[face.corner_of(5).unwrap()];
    let c4 = face.corner[face.corner_of(4).unwrap()];
    let ex = c5 - c4;
    let ez = c4 - c0;
    let p = SurfacePoint::from_chart(m, f, c0 + ex * 0.25 + ez * z);
    let tr = trace_ray(m, &p, &Direction::Planar { face: f, vec: [ex.x, ex.y] }, 4.0);
    let mut c = tr.curve;
    c.points.pop();
    c.closed = true;
    c
}

#[test]
fn tetra_doubled_edge() {
    let m = generate::tetrahedron();
    let e = m.edge(0);
    let w = word(&m, &format!("V{} F0 V{} F0", e.v[0], e.v[1]));
    let c = check_word(&m, &w).unwrap();
    assert!((c.total_length - 2.0).abs() < 1e-12);
    assert_eq!(c.angles.len(), 2);
    for a in &c.angles {
        assert!(a.left.abs() < 1e-12 && (a.right - PI).abs() < 1e-12);
    }
    assert!(c.flags.weakly_simple && !c.flags.simple && c.flags.degenerate_doubled_segment);
    assert_eq!(c.witness.len(), 1);
    assert_eq!(extract_word(&m, &c.realization), w);
}

#[test]
fn doubled_median() {
    let m = generate::doubled_triangle();
    let w = word(&m, "V2 X0-1");
    let c = check_word(&m, &w).unwrap();
    assert!((c.total_length - 3f64.sqrt()).abs() < 1e-12);
    assert!((c.angles[0].left - PI / 3.0).abs() < 1e-12);
    assert!((c.angles[0].right - PI / 3.0).abs() < 1e-12);
    // The two halves lie in different faces, so the curve is simple.
    assert!(c.flags.simple);
    assert_eq!(extract_word(&m, &c.realization), w);
}

#[test]
fn cube_face_square_and_violation() {
    let m = generate::cube();
    let w = word(&m, "V0 F0-1 V1 F1-3 V3 F2-3 V2 F0-2");
    let c = check_word(&m, &w).unwrap();
    assert!((c.total_length - 4.0).abs() < 1e-12);
    for a in &c.angles {
        let (lo, hi) = if a.left < a.right { (a.left, a.right) } else { (a.right, a.left) };
        assert!((lo - PI / 2.0).abs() < 1e-12 && (hi - PI).abs() < 1e-12);
    }
    assert!(c.flags.simple);

    let bad = word(&m, "V0 F0-1 V1 F1-5 V5 F0-5");
    match check_word(&m, &bad) {
        Err(Rejection::AngleViolation { vertex, side, value }) => {
            assert_eq!(vertex, 5);
            assert!((value - 1.25 * PI).abs() < 1e-12);
            let _ = side;
        }
        r => panic!("{r:?}"),
    }
}

#[test]
fn unrealizable_and_malformed() {
    let m = generate::cube();
    assert_eq!(check_word(&m, &word(&m, "X0 X1")), Err(Rejection::NoVertex));
    assert!(matches!(check_word(&m, &word(&m, "V0 V1")), Err(Rejection::Unrealizable { .. })));
    assert!(matches!(check_word(&m, &word(&m, "V0 F1-3 V1")), Err(Rejection::Unrealizable { .. })));
    assert!(matches!(check_word(&m, &[Letter::V(99)]), Err(Rejection::Malformed { .. })));
}

#[test]
fn invariance_under_rotation_reversal_and_scale() {
    let cases = [
        (generate::tetrahedron(), "V0 F0 V1 F0"),
        (generate::doubled_triangle(), "V2 X0-1"),
        (generate::cube(), "V0 F0-1 V1 F1-3 V3 F2-3 V2 F0-2"),
    ];
    for (m, text) in &cases {
        let w = word(m, text);
        let base = check_word(m, &w).unwrap();
        for r in 0..w.len() {
            let mut rw = w.clone();
            rw.rotate_left(r);
            let c = check_word(m, &rw).unwrap();
            assert!((c.total_length - base.total_length).abs() < 1e-9);
            rw.reverse();
            let c = check_word(m, &rw).unwrap();
            assert!((c.total_length - base.total_length).abs() < 1e-9);
        }
        let s = m.scaled(2.5).unwrap();
        let c = check_word(&s, &w).unwrap();
        assert!((c.total_length - 2.5 * base.total_length).abs() < 1e-9);
        for (a, b) in c.angles.iter().zip(&base.angles) {
            assert!((a.left - b.left).abs() < 1e-12 && (a.right - b.right).abs() < 1e-12);
        }
        for a in &c.angles {
            assert!((a.left + a.right - m.vertex(a.vertex).cone_angle).abs() < 1e-12);
        }
        assert_eq!(check_word(m, &w).unwrap().to_json(), base.to_json());
    }
}

#[test]
fn band_loop_is_simple_and_straight() {
    let m = generate::cube();
    let band = cube_band(&m, 0.5);
    assert_eq!(check_weakly_simple(&m, &band), Simplicity::Simple);
    let r = check_curve_numeric(&m, &band, 1e-9);
    assert!(r.accept, "{r:?}");
    assert!(r.straightness < 1e-12);
    assert!((r.length - 4.0).abs() < 1e-12);
}

#[test]
fn displaced_waypoint_is_reported() {
    let m = generate::cube();
    let mut band = cube_band(&m, 0.5);
    // Move one crossing point of a vertical edge up by 0.01.
    let i = band
        .points
        .iter()
        .position(|p| matches!(p, SurfacePoint::Edge { edge, .. } if m.edge(*edge).v == [1, 5]))
        .unwrap();
    if let SurfacePoint::Edge { t, .. } = &mut band.points[i] {
        *t += 0.01;
    }
    let r = check_curve_numeric(&m, &band, 1e-4);
    assert!(!r.accept);
    // Neighbouring crossings are 0.5 away on either side.
    let expect = 2.0 * (0.01f64 / 0.5).atan();
    assert!((r.straightness - expect).abs() < 1e-9, "{}", r.straightness);
    assert_eq!(r.worst_point, Some(i));
}

#[test]
fn reparameterization_leaves_report_unchanged() {
    let m = generate::cube();
    let band = cube_band(&m, 0.3);
    let mut fine = band.clone();
    // Insert the midpoint of every segment.
    let mut points = Vec::new();
    let mut faces = Vec::new();
    for i in 0..band.num_segments() {
        let (a, b) = band.segment(&m, i);
        points.push(band.points[i]);
        faces.push(band.faces[i]);
        points.push(SurfacePoint::from_chart(&m, band.faces[i], (a + b) / 2.0));
        faces.push(band.faces[i]);
    }
    fine.points = points;
    fine.faces = faces;
    let a = check_curve_numeric(&m, &band, 1e-9);
    let b = check_curve_numeric(&m, &fine, 1e-9);
    assert!(a.accept && b.accept);
    assert!((a.length - b.length).abs() < 1e-12);
    assert!((a.straightness - b.straightness).abs() < 1e-12);
}

#[test]
fn figure_eight_is_rejected() {
    let m = generate::cube();
    let f = 0;
    let face = m.face(f);
    let at = |b: [f64; 3]| SurfacePoint::from_chart(&m, f, face.from_barycentric(b));
    let pts = vec![
        at([0.6, 0.2, 0.2]),
        at([0.2, 0.6, 0.2]),
        at([0.5, 0.2, 0.3]),
        at([0.2, 0.5, 0.3]),
    ];
    // Segments 0->1 and 2->3 are parallel; 1->2 and 3->0 cross.
    let c = PLCurve { faces: vec![f; 4], points: pts, closed: true };
    assert_eq!(check_weakly_simple(&m, &c), Simplicity::NotWeaklySimple);
}

#[test]
fn touching_loops_pair_up_at_the_shared_vertex() {
    // Two triangles of the cube meeting only at vertex 0. Traversing the
    // second one in either direction changes how the passes pair at 0: one
    // pairing touches, the other crosses.
    let m = generate::cube();
    let loop_at = |vs: &[usize]| {
        let pts = vs.iter().map(|&v| SurfacePoint::vertex(v)).collect();
        PLCurve::from_points(&m, pts, true).unwrap()
    };
    let a = check_weakly_simple(&m, &loop_at(&[0, 2, 3, 0, 5, 4]));
    let b = check_weakly_simple(&m, &loop_at(&[0, 2, 3, 0, 4, 5]));
    let accepted = [&a, &b].iter().filter(|s| s.accepted()).count();
    assert_eq!(accepted, 1, "{a:?} {b:?}");
    for s in [a, b] {
        assert!(matches!(s, Simplicity::WeaklySimple { .. } | Simplicity::NotWeaklySimple));
    }
}
