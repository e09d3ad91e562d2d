use std::f64::consts::{FRAC_PI_2, PI};

use quasigeodesic::mesh::generate;
use quasigeodesic::mesh::io::{from_extrinsic, load_intrinsic, mesh_hash, to_json, IntrinsicDocument};
use quasigeodesic::mesh::{
    barycentric_subdivide, compute_shelling, corner_angles, is_prefix_disk, FaceInput, HalfEdge,
    IntrinsicMesh, MeshError, DEFAULT_TOLERANCE,
};

fn eta(edge_sum: f64, h: f64, d: usize) -> u64 {
    ((d as f64 + 1.0) * edge_sum / h).ceil() as u64
}

#[test]
fn corner_angles_of_right_triangle() {
    let a = corner_angles([3.0, 4.0, 5.0]);
    assert!((a[0] - (3.0f64 / 5.0).asin()).abs() < 1e-12);
    assert!((a[1] - (4.0f64 / 5.0).asin()).abs() < 1e-12);
    assert!((a[2] - FRAC_PI_2).abs() < 1e-12);
    assert!((a[0] - 0.6435).abs() < 1e-4 && (a[1] - 0.9273).abs() < 1e-4);
}

#[test]
fn tetrahedron_quantities() {
    let m = generate::tetrahedron();
    assert_eq!((m.num_vertices(), m.num_edges(), m.num_faces()), (4, 6, 4));
    let g = m.global_quantities();
    assert!((g.edge_sum - 6.0).abs() < 1e-12);
    assert!((g.min_altitude - 3f64.sqrt() / 2.0).abs() < 1e-12);
    assert_eq!(g.max_degree, 3);
    assert_eq!(g.eta, 28);
    assert_eq!(g.eta, eta(6.0, 3f64.sqrt() / 2.0, 3));
    for v in m.vertices() {
        assert!((v.cone_angle - PI).abs() < 1e-12);
        assert!(v.is_convex());
    }
    assert!((m.total_curvature() - 4.0 * PI).abs() < 1e-8);
}

#[test]
fn cube_quantities() {
    let m = generate::cube();
    assert_eq!((m.num_vertices(), m.num_faces()), (8, 12));
    let g = m.global_quantities();
    assert!((g.edge_sum - (12.0 + 6.0 * 2f64.sqrt())).abs() < 1e-12);
    assert!((g.min_altitude - 2f64.sqrt() / 2.0).abs() < 1e-12);
    assert_eq!(g.max_degree, 6);
    assert_eq!(g.eta, 203);
    for v in m.vertices() {
        assert!((v.cone_angle - 1.5 * PI).abs() < 1e-12);
    }
}

#[test]
fn doubled_triangle_quantities() {
    let m = generate::doubled_triangle();
    assert_eq!((m.num_vertices(), m.num_edges(), m.num_faces()), (3, 3, 2));
    assert!((m.global_quantities().edge_sum - 3.0).abs() < 1e-12);
    for v in m.vertices() {
        assert!((v.curvature() - 4.0 * PI / 3.0).abs() < 1e-12);
    }
    assert!(!m.has_loops_or_multi_edges());
}

#[test]
fn gauss_bonnet_on_generated_surfaces() {
    let mut meshes = vec![
        generate::tetrahedron(),
        generate::cube(),
        generate::octahedron(),
        generate::icosahedron(),
        generate::doubled_triangle(),
    ];
    for seed in 0..5 {
        meshes.push(generate::random_convex_hull(8 + seed as usize, seed).unwrap());
    }
    for m in &meshes {
        assert!((m.total_curvature() - 4.0 * PI).abs() < 1e-8);
        assert_eq!(m.num_vertices() + m.num_faces(), m.num_edges() + 2);
    }
}

#[test]
fn triangle_inequality_is_rejected() {
    let faces = [
        FaceInput { v: [0, 1, 2], len: [1.0, 1.0, 2.5] },
        FaceInput { v: [0, 2, 1], len: [1.0, 2.5, 1.0] },
    ];
    let glue = [
        (HalfEdge::new(0, 0), HalfEdge::new(1, 0)),
        (HalfEdge::new(0, 1), HalfEdge::new(1, 2)),
        (HalfEdge::new(0, 2), HalfEdge::new(1, 1)),
    ];
    let err = IntrinsicMesh::from_parts(&faces, &glue, DEFAULT_TOLERANCE).unwrap_err();
    assert!(matches!(err, MeshError::TriangleInequalityViolation { .. }));
}

#[test]
fn extrinsic_tetrahedron_matches_intrinsic() {
    let a = generate::tetrahedron();
    let b = generate::tetrahedron_extrinsic();
    let (ga, gb) = (a.global_quantities(), b.global_quantities());
    assert!((ga.edge_sum - gb.edge_sum).abs() < 1e-12);
    assert!((ga.min_altitude - gb.min_altitude).abs() < 1e-12);
    for f in b.faces() {
        for l in f.len {
            assert!((l - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn json_round_trip_preserves_hash() {
    for m in [generate::cube(), generate::tetrahedron(), generate::icosahedron()] {
        let text = to_json(&m);
        let back = load_intrinsic(&text, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(mesh_hash(&m), mesh_hash(&back));
        assert_eq!(to_json(&back), text);
    }
}

#[test]
fn non_orientable_gluing_is_rejected() {
    let mut doc = IntrinsicDocument::from_mesh(&generate::tetrahedron());
    // Glue one pair of sides with the wrong orientation by swapping vertex order on one face.
    let f = &mut doc.faces[0];
    f.v.swap(1, 2);
    f.len.swap(1, 2);
    assert!(doc.to_mesh_raw(DEFAULT_TOLERANCE).is_err());
}

#[test]
fn subdivision_preserves_area_and_curvature() {
    for m in [generate::tetrahedron(), generate::cube(), generate::doubled_triangle()] {
        let s = barycentric_subdivide(&m).unwrap();
        assert_eq!(s.num_faces(), 6 * m.num_faces());
        assert_eq!(s.num_vertices(), m.num_vertices() + m.num_edges() + m.num_faces());
        assert!((s.total_area() - m.total_area()).abs() < 1e-10);
        for v in 0..m.num_vertices() {
            assert!((s.vertex(v).cone_angle - m.vertex(v).cone_angle).abs() < 1e-9);
        }
        for v in m.num_vertices()..s.num_vertices() {
            assert!((s.vertex(v).cone_angle - 2.0 * PI).abs() < 1e-9);
        }
        assert!(!s.has_loops_or_multi_edges());
    }
}

#[test]
fn shelling_prefixes_are_disks() {
    let mut meshes = vec![generate::tetrahedron(), generate::cube(), generate::icosahedron()];
    meshes.push(generate::random_convex_hull(10, 3).unwrap());
    for m in &meshes {
        let sh = compute_shelling(m).unwrap();
        let mut sorted = sh.order.clone();
        sorted.sort();
        assert_eq!(sorted, (0..m.num_faces()).collect::<Vec<_>>());
        for k in 1..m.num_faces() {
            assert!(is_prefix_disk(m, &sh.order[..k]));
        }
    }
}

#[test]
fn every_tetrahedron_order_is_a_shelling() {
    // Any 1, 2 or 3 faces of a tetrahedron form a disk.
    let m = generate::tetrahedron();
    let mut order = vec![0, 1, 2, 3];
    let mut count = 0;
    permute(&mut order, 0, &mut |o| {
        for k in 1..4 {
            assert!(is_prefix_disk(&m, &o[..k]));
        }
        count += 1;
    });
    assert_eq!(count, 24);
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

#[test]
fn scaling_leaves_eta_unchanged() {
    let m = generate::cube();
    for lambda in [0.01, 0.5, 3.0, 1000.0] {
        let s = m.scaled(lambda).unwrap();
        assert_eq!(s.global_quantities().eta, m.global_quantities().eta);
    }
}

#[test]
fn min_altitude_bounds_vertex_distances() {
    // Any two distinct vertices are at least h apart; edges and altitudes both bound this.
    let m = generate::random_convex_hull(9, 11).unwrap();
    let h = m.global_quantities().min_altitude;
    for e in m.edges() {
        assert!(e.len >= h - 1e-12);
    }
}

#[test]
fn degenerate_extrinsic_face_is_rejected() {
    let pts = generate::cube_points();
    let mut faces = generate::cube_faces();
    faces[0] = [0, 1, 1];
    assert!(from_extrinsic(&pts, &faces, DEFAULT_TOLERANCE).is_err());
}
