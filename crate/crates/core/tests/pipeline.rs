use quasigeodesic::mesh::generate;
use quasigeodesic::geometry::SurfacePoint;
use quasigeodesic::pipeline::{curve_from_word, export, find, lift, ExportError, ExportFormat, FindConfig, Source};
use quasigeodesic::verify::check_word;

#[test]
fn cube_find_reaches_four() {
    let m = generate::cube();
    let r = find(&m, &FindConfig::for_mesh(&m)).unwrap();
    assert!((r.certificate.total_length - 4.0).abs() < 1e-6, "{}", r.certificate.total_length);
}

#[test]
fn tetra_find_refines_to_doubled_edge() {
    let m = generate::tetrahedron();
    let r = find(&m, &FindConfig::for_mesh(&m)).unwrap();
    assert!((r.certificate.total_length - 2.0).abs() < 1e-9);
    assert_eq!(r.source, Source::Search);
}

#[test]
fn random_hulls_find_short_certificates() {
    for seed in 0..4 {
        let m = generate::random_convex_hull(10, seed).unwrap();
        let r = find(&m, &FindConfig::for_mesh(&m)).unwrap();
        let bound = m.global_quantities().edge_sum;
        assert!(r.certificate.total_length <= bound + 1e-9);
        assert!(check_word(&m, &r.certificate.word).is_ok());
    }
}

#[test]
fn word_seed_reproduces_its_curve_faces() {
    let m = generate::cube();
    let r = find(&m, &FindConfig::for_mesh(&m)).unwrap();
    let c = curve_from_word(&m, &r.certificate.word).unwrap();
    assert!(c.length(&m) >= r.certificate.total_length - 1e-9);
}

#[test]
fn export_checks_mesh_hash() {
    let m = generate::cube();
    let r = find(&m, &FindConfig::for_mesh(&m)).unwrap();
    let other = generate::octahedron();
    assert!(matches!(export(&other, &r.certificate, ExportFormat::Json), Err(ExportError::HashMismatch { .. })));
    let svg = export(&m, &r.certificate, ExportFormat::Svg).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    let obj = export(&m, &r.certificate, ExportFormat::ObjPolyline).unwrap();
    assert!(obj.lines().any(|l| l.starts_with("l ")));
    let intrinsic = generate::tetrahedron();
    let t = find(&intrinsic, &FindConfig::for_mesh(&intrinsic)).unwrap();
    if intrinsic.positions().is_none() {
        assert!(matches!(export(&intrinsic, &t.certificate, ExportFormat::ObjPolyline), Err(ExportError::NoEmbedding)));
    }
}

#[test]
fn lifted_edge_points_lie_on_their_edge() {
    let m = generate::cube();
    let p = SurfacePoint::Edge { edge: 0, t: 0.25 };
    let e = m.edge(0);
    let pos = m.positions().unwrap();
    let x = lift(&m, &p).unwrap();
    let expect = pos[e.v[0]] + (pos[e.v[1]] - pos[e.v[0]]) * 0.25;
    assert!((x - expect).norm() < 1e-12);
}

#[test]
fn falls_back_to_deepening_search_when_every_fiber_collapses() {
    let m = generate::random_convex_hull(6, 2).unwrap();
    let r = find(&m, &FindConfig::for_mesh(&m)).unwrap();
    assert_eq!(r.flow_certified, 0);
    assert_eq!(r.source, Source::Search);
    assert!(r.certificate.total_length <= m.global_quantities().edge_sum / 4.0);
    assert!(check_word(&m, &r.certificate.word).is_ok());
}
