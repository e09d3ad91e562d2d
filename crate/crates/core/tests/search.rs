mod common;

use std::f64::consts::PI;

use quasigeodesic::geometry::{trace_ray, Direction, Letter, PLCurve, SurfacePoint};
use quasigeodesic::mesh::{generate, IntrinsicMesh};
use quasigeodesic::search::{
    enumerate_all, enumerate_segments, push_to_vertex, search, SearchConfig,
    DEFAULT_NODE_BUDGET,
};
use quasigeodesic::verify::{check_curve_numeric, check_word, extract_word};

fn crossed(inner: &[Letter]) -> Vec<usize> {
    inner
        .iter()
        .filter_map(|l| match l {
            Letter::Cross(e) => Some(*e),
            _ => None,
        })
        .collect()
}

fn config(max_total: f64, max_word: usize) -> SearchConfig {
    SearchConfig {
        max_segment_length: max_total,
        max_total_length: max_total,
        max_word_length: max_word,
        max_solutions: usize::MAX,
        budget: DEFAULT_NODE_BUDGET,
        first_only: false,
    }
}

#[test]
fn tetra_short_segments_are_edges() {
    let m = generate::tetrahedron();
    let s = enumerate_segments(&m, 0, 1.01, DEFAULT_NODE_BUDGET);
    assert!(s.complete);
    assert_eq!(s.segments.len(), 3);
    let mut ends: Vec<usize> = s.segments.iter().map(|x| x.end).collect();
    ends.sort();
    assert_eq!(ends, vec![1, 2, 3]);
    for x in &s.segments {
        assert!(matches!(x.inner[..], [Letter::Follow(_)]));
        assert!((x.length - 1.0).abs() < 1e-12);
    }
}

#[test]
fn doubled_triangle_nothing_within_unit() {
    let m = generate::doubled_triangle();
    let s = enumerate_segments(&m, 2, 0.9, DEFAULT_NODE_BUDGET);
    assert!(s.segments.is_empty());
}

#[test]
fn cube_corner_segments() {
    let m = generate::cube();
    let s = enumerate_segments(&m, 1, 2f64.sqrt() + 1e-6, DEFAULT_NODE_BUDGET);
    let mut got: Vec<(usize, usize, bool)> = s
        .segments
        .iter()
        .map(|x| (x.end, (x.length * 1e6).round() as usize, matches!(x.inner[..], [Letter::Follow(_)])))
        .collect();
    got.sort();
    let r2 = (2f64.sqrt() * 1e6).round() as usize;
    // Cube edges to 0, 3, 5; the triangulation diagonal to 7; straight
    // segments across the other diagonals to 2 and 4.
    assert_eq!(
        got,
        vec![(0, 1_000_000, true), (2, r2, false), (3, 1_000_000, true), (4, r2, false), (5, 1_000_000, true), (7, r2, true)]
    );
}

#[test]
fn tetra_segments_match_sampling_oracle() {
    let m = generate::tetrahedron();
    for v in 0..4 {
        let got = enumerate_segments(&m, v, 2.01, DEFAULT_NODE_BUDGET);
        assert!(got.complete);
        let mut mine: Vec<(usize, usize, Vec<usize>, f64)> = got
            .segments
            .iter()
            .filter(|s| matches!(s.inner.first(), Some(Letter::Cross(_))))
            .map(|s| (s.first_face, s.end, crossed(&s.inner), s.length))
            .collect();
        mine.sort_by(|a, b| (a.0, &a.2).cmp(&(b.0, &b.2)));
        let mut oracle: Vec<(usize, usize, Vec<usize>, f64)> = common::oracle_segments(&m, v, 2.01, 20_000)
            .into_iter()
            .map(|s| (s.first_face, s.end, s.word, s.length))
            .collect();
        oracle.sort_by(|a, b| (a.0, &a.2).cmp(&(b.0, &b.2)));
        assert_eq!(mine.len(), oracle.len(), "vertex {v}: {mine:?} vs {oracle:?}");
        for (a, b) in mine.iter().zip(&oracle) {
            assert_eq!((a.0, a.1, &a.2), (b.0, b.1, &b.2));
            assert!((a.3 - b.3).abs() < 1e-6);
        }
    }
}

#[test]
fn segment_properties() {
    let meshes = [
        generate::tetrahedron(),
        generate::cube(),
        generate::octahedron(),
        generate::random_convex_hull(8, 5).unwrap(),
    ];
    for m in &meshes {
        let g = m.global_quantities();
        for list in enumerate_all(m, 2.5, DEFAULT_NODE_BUDGET) {
            for s in &list.segments {
                assert!(s.length >= g.min_altitude - 1e-9);
                // Re-verify the segment by tracing a ray along it.
                let tr = trace_ray(m, &SurfacePoint::vertex(s.start), &Direction::AtVertex { vertex: s.start, angle: s.exit }, s.length + 1e-6);
                assert_eq!(tr.hit, Some(s.end));
                assert_eq!(&tr.word[..tr.word.len() - 1], &s.inner[..]);
                assert!((tr.length - s.length).abs() < 1e-8);
                // Spokes crossed per visit of a star stay within its degree.
                let w = crossed(&s.inner);
                for u in 0..m.num_vertices() {
                    let mut run = 0;
                    for &e in &w {
                        if m.edge(e).v.contains(&u) {
                            run += 1;
                            assert!(run <= m.vertex(u).degree());
                        } else {
                            run = 0;
                        }
                    }
                }
                // At most d + 1 edges per stretch of length h.
                let win = (s.length / g.min_altitude).ceil() as usize;
                assert!(w.len() <= win * (g.max_degree + 1));
            }
        }
    }
}

#[test]
fn tetra_doubled_edges_found() {
    let m = generate::tetrahedron();
    let r = search(&m, &config(2.01, 28));
    assert!(r.complete);
    let doubled: Vec<_> = r
        .certificates
        .iter()
        .filter(|c| c.flags.degenerate_doubled_segment && (c.total_length - 2.0).abs() < 1e-9)
        .collect();
    assert_eq!(doubled.len(), 6);
    for c in &doubled {
        for a in &c.angles {
            assert!(a.left.abs() < 1e-9 && (a.right - PI).abs() < 1e-9);
        }
    }
    for c in &r.certificates {
        assert!(c.total_length <= 2.01);
        assert_eq!(check_word(&m, &c.word).unwrap(), *c);
    }
}

#[test]
fn doubled_triangle_median_found() {
    let m = generate::doubled_triangle();
    let r = search(&m, &config(1.8, 20));
    assert!(r.certificates.iter().any(|c| (c.total_length - 3f64.sqrt()).abs() < 1e-9));
}

#[test]
fn cube_band_certificate_found() {
    let m = generate::cube();
    let r = search(&m, &config(4.01, 16));
    let band = r
        .certificates
        .iter()
        .find(|c| (c.total_length - 4.0).abs() < 1e-6)
        .expect("a length-4 certificate");
    for a in &band.angles {
        assert!(a.left <= PI + 1e-9 && a.right <= PI + 1e-9);
    }
}

#[test]
fn search_is_deterministic_across_thread_counts() {
    let m = generate::cube();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let r = search(&m, &config(3.0, 12));
            r.certificates.iter().map(|c| c.to_json()).collect::<Vec<_>>()
        })
    };
    let a = run(1);
    assert_eq!(a, run(4));
    assert_eq!(a, run(8));
}

fn face_with(m: &IntrinsicMesh, vs: [usize; 3]) -> usize {
    (0..m.num_faces())
        .find(|&f| vs.iter().all(|v| m.face(f).v.contains(v)))
        .unwrap()
}

#[test]
fn push_cube_band_onto_vertices() {
    let m = generate::cube();
    let f = face_with(&m, [0, 5, 4]);
    let face = m.face(f);
    let c0 = face.corner[face.corner_of(0).unwrap()];
    let c5 = face.corner[face.corner_of(5).unwrap()];
    let c4 = face.corner[face.corner_of(4).unwrap()];
    let (ex, ez) = (c5 - c4, c4 - c0);
    let p = SurfacePoint::from_chart(&m, f, c0 + ex * 0.25 + ez * 0.5);
    let tr = trace_ray(&m, &p, &Direction::Planar { face: f, vec: [ex.x, ex.y] }, 4.0);
    let mut band = tr.curve;
    band.points.pop();
    band.closed = true;
    let pushed = push_to_vertex(&m, &band).unwrap();
    assert!((pushed.length(&m) - 4.0).abs() < 1e-9);
    assert!(pushed.points.iter().any(|p| p.as_vertex().is_some()));
    assert!(check_curve_numeric(&m, &pushed, 1e-9).accept);
    let w = extract_word(&m, &pushed);
    let c = check_word(&m, &w).unwrap();
    assert!((c.total_length - 4.0).abs() < 1e-9);
    // Already through a vertex.
    assert!(push_to_vertex(&m, &pushed).is_err());
}

#[test]
fn push_doubled_triangle_geodesic() {
    // A ray leaving side 0-1 perpendicularly, off its midpoint, closes up
    // after four crossings.
    let m = generate::doubled_triangle();
    let e = m.edge_between(0, 1).unwrap();
    let p = SurfacePoint::Edge { edge: e, t: 0.4 };
    let f = m.edge(e).half[0].face;
    let face = m.face(f);
    let (a, b) = face.side_canonical_ends(face.side_of(e).unwrap());
    let t = (b - a).normalize();
    let tr = trace_ray(&m, &p, &Direction::Planar { face: f, vec: [-t.y, t.x] }, 5.0);
    assert!(tr.curve.points[4].approx_eq(&p, 1e-9));
    let curve = PLCurve { points: tr.curve.points[..4].to_vec(), faces: tr.curve.faces[..4].to_vec(), closed: true };
    let len = curve.length(&m);
    assert!(check_curve_numeric(&m, &curve, 1e-9).accept);
    let pushed = push_to_vertex(&m, &curve).unwrap();
    assert!((pushed.length(&m) - len).abs() < 1e-9);
    let c = check_word(&m, &extract_word(&m, &pushed)).unwrap();
    assert!((c.total_length - len).abs() < 1e-9);
}

#[test]
fn longer_segments_match_sampling_oracle() {
    for (m, len) in [(generate::tetrahedron(), 3.5), (generate::cube(), 2.5), (generate::octahedron(), 2.5)] {
        for v in 0..m.num_vertices() {
            let got = enumerate_segments(&m, v, len, DEFAULT_NODE_BUDGET);
            let mut mine: Vec<(usize, Vec<usize>, usize, f64)> = got
                .segments
                .iter()
                .filter(|s| matches!(s.inner.first(), Some(Letter::Cross(_))))
                .map(|s| (s.first_face, crossed(&s.inner), s.end, s.length))
                .collect();
            mine.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
            let mut oracle: Vec<(usize, Vec<usize>, usize, f64)> = common::oracle_segments(&m, v, len, 20_000)
                .into_iter()
                .map(|s| (s.first_face, s.word, s.end, s.length))
                .collect();
            oracle.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
            let key = |x: &(usize, Vec<usize>, usize, f64)| (x.0, x.1.clone(), x.2);
            assert_eq!(mine.iter().map(key).collect::<Vec<_>>(), oracle.iter().map(key).collect::<Vec<_>>(), "vertex {v}");
            for (a, b) in mine.iter().zip(&oracle) {
                assert!((a.3 - b.3).abs() < 1e-6);
            }
        }
    }
}
