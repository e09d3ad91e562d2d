//! Standard test surfaces and seeded random convex polyhedra.

use std::collections::BTreeMap;

use nalgebra::{Point3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::intrinsic::{next, prev, FaceInput, HalfEdge, IntrinsicMesh};
use super::io::from_extrinsic;
use super::{preprocess, MeshError, DEFAULT_TOLERANCE};

fn glue_by_vertices(faces: &[[usize; 3]]) -> Vec<(HalfEdge, HalfEdge)> {
    let mut directed = BTreeMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for s in 0..3 {
            directed.insert((f[next(s)], f[prev(s)]), HalfEdge::new(fi, s));
        }
    }
    let mut glue = Vec::new();
    for (&(a, b), &h) in &directed {
        let t = directed[&(b, a)];
        if h < t {
            glue.push((h, t));
        }
    }
    glue
}

const TETRA_FACES: [[usize; 3]; 4] = [[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]];

/// Regular tetrahedron with unit edges, given intrinsically.
pub fn tetrahedron() -> IntrinsicMesh {
    let inputs: Vec<FaceInput> = TETRA_FACES
        .iter()
        .map(|&v| FaceInput { v, len: [1.0; 3] })
        .collect();
    IntrinsicMesh::from_parts(&inputs, &glue_by_vertices(&TETRA_FACES), DEFAULT_TOLERANCE)
        .expect("tetrahedron is valid")
}

/// Coordinates of a regular tetrahedron with unit edges.
pub fn tetrahedron_points() -> Vec<Point3<f64>> {
    let k = 1.0 / (2.0 * 2.0f64.sqrt());
    [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]
        .iter()
        .map(|c| Point3::new(c[0] * k, c[1] * k, c[2] * k))
        .collect()
}

/// Outward-oriented faces for [`tetrahedron_points`].
pub fn tetrahedron_extrinsic() -> IntrinsicMesh {
    let pts = tetrahedron_points();
    let faces = orient_outward(&pts, &TETRA_FACES);
    from_extrinsic(&pts, &faces, DEFAULT_TOLERANCE).expect("tetrahedron is valid")
}

/// Two unit equilateral triangles glued along all three sides.
pub fn doubled_triangle() -> IntrinsicMesh {
    let faces = [[0, 1, 2], [0, 2, 1]];
    let inputs: Vec<FaceInput> = faces.iter().map(|&v| FaceInput { v, len: [1.0; 3] }).collect();
    IntrinsicMesh::from_parts(&inputs, &glue_by_vertices(&faces), DEFAULT_TOLERANCE)
        .expect("doubled triangle is valid")
}

/// Unit cube points, index `x + 2y + 4z`.
pub fn cube_points() -> Vec<Point3<f64>> {
    (0..8)
        .map(|i| Point3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64))
        .collect()
}

/// Unit cube with every square split by the diagonal through corner 0 or
/// corner 7, which gives those two corners degree 6.
pub fn cube_faces() -> Vec<[usize; 3]> {
    let quads = [
        [0, 2, 3, 1],
        [4, 5, 7, 6],
        [0, 1, 5, 4],
        [2, 6, 7, 3],
        [0, 4, 6, 2],
        [1, 3, 7, 5],
    ];
    let mut faces = Vec::new();
    for q in quads {
        let r = q.iter().position(|&v| v == 0 || v == 7).unwrap();
        let q = [q[r], q[(r + 1) % 4], q[(r + 2) % 4], q[(r + 3) % 4]];
        faces.push([q[0], q[1], q[2]]);
        faces.push([q[0], q[2], q[3]]);
    }
    faces
}

pub fn cube() -> IntrinsicMesh {
    from_extrinsic(&cube_points(), &cube_faces(), DEFAULT_TOLERANCE).expect("cube is valid")
}

pub fn octahedron() -> IntrinsicMesh {
    let pts = vec![
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(-1.0, 0.0, 0.0),
        Point3::new(0.0, 1.0, 0.0),
        Point3::new(0.0, -1.0, 0.0),
        Point3::new(0.0, 0.0, 1.0),
        Point3::new(0.0, 0.0, -1.0),
    ];
    hull_mesh(&pts).expect("octahedron is valid")
}

pub fn icosahedron() -> IntrinsicMesh {
    let t = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut pts = Vec::new();
    for &(a, b) in &[(1.0, t), (-1.0, t), (1.0, -t), (-1.0, -t)] {
        pts.push(Point3::new(0.0, a, b));
        pts.push(Point3::new(a, b, 0.0));
        pts.push(Point3::new(b, 0.0, a));
    }
    // Unit edge length.
    let pts: Vec<_> = pts.iter().map(|p| Point3::from(p.coords * 0.5)).collect();
    hull_mesh(&pts).expect("icosahedron is valid")
}

/// Seeded random convex polyhedron with `n` vertices on the unit sphere.
pub fn random_convex_hull(n: usize, seed: u64) -> Result<IntrinsicMesh, MeshError> {
    assert!(n >= 4, "a polyhedron needs at least four vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let min_sep = 1.2 / (n as f64).sqrt();
    loop {
        let mut pts: Vec<Point3<f64>> = Vec::with_capacity(n);
        let mut tries = 0;
        while pts.len() < n && tries < 10_000 {
            tries += 1;
            let v = Vector3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let r = v.norm();
            if !(0.1..=1.0).contains(&r) {
                continue;
            }
            let p = Point3::from(v / r);
            if pts.iter().all(|q| (q - p).norm() > min_sep) {
                pts.push(p);
            }
        }
        if pts.len() < n {
            continue;
        }
        if let Ok(m) = hull_mesh(&pts) {
            if m.num_vertices() == n {
                return Ok(m);
            }
        }
    }
}

/// Convex hull of points in general position, by brute force over triples.
pub fn convex_hull_faces(pts: &[Point3<f64>]) -> Vec<[usize; 3]> {
    let n = pts.len();
    let mut faces = Vec::new();
    let scale = pts.iter().map(|p| p.coords.norm()).fold(0.0, f64::max).max(1.0);
    let tol = 1e-9 * scale * scale * scale;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let nrm = (pts[j] - pts[i]).cross(&(pts[k] - pts[i]));
                let mut pos = false;
                let mut neg = false;
                for l in 0..n {
                    if l == i || l == j || l == k {
                        continue;
                    }
                    let d = nrm.dot(&(pts[l] - pts[i]));
                    if d > tol {
                        pos = true;
                    } else if d < -tol {
                        neg = true;
                    }
                }
                if !pos {
                    faces.push([i, j, k]);
                } else if !neg {
                    faces.push([i, k, j]);
                }
            }
        }
    }
    faces
}

fn orient_outward(pts: &[Point3<f64>], faces: &[[usize; 3]]) -> Vec<[usize; 3]> {
    let c = pts.iter().fold(Vector3::zeros(), |a, p| a + p.coords) / pts.len() as f64;
    faces
        .iter()
        .map(|&[a, b, d]| {
            let nrm = (pts[b] - pts[a]).cross(&(pts[d] - pts[a]));
            if nrm.dot(&(pts[a].coords - c)) >= 0.0 {
                [a, b, d]
            } else {
                [a, d, b]
            }
        })
        .collect()
}

pub fn hull_mesh(pts: &[Point3<f64>]) -> Result<IntrinsicMesh, MeshError> {
    let faces = convex_hull_faces(pts);
    let m = from_extrinsic(pts, &faces, DEFAULT_TOLERANCE)?;
    preprocess(m)
}

/// Named test surfaces.
pub fn by_name(name: &str, seed: u64, vertices: usize) -> Option<Result<IntrinsicMesh, MeshError>> {
    Some(match name {
        "tetrahedron" => Ok(tetrahedron()),
        "doubled-triangle" => Ok(doubled_triangle()),
        "cube" => Ok(cube()),
        "octahedron" => Ok(octahedron()),
        "icosahedron" => Ok(icosahedron()),
        "random" => random_convex_hull(vertices, seed),
        _ => return None,
    })
}
