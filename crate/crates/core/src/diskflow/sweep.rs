use serde::{Deserialize, Serialize};

use crate::geometry::{PLCurve, SurfacePoint};
use crate::mesh::{disk_boundary, next, prev, HalfEdge, IntrinsicMesh, Shelling};

/// A sampled fiber of the shelling sweep-out: the boundary of the disk swept
/// so far, with the disk on its left.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fiber {
    pub curve: PLCurve,
    /// Position in the shelling of the face being swept.
    pub step: usize,
    /// Sweep parameter within that face.
    pub s: f64,
    pub disk_area: f64,
}

/// Fibers of the sweep-out following the shelling: each face is swept by
/// segments parallel to one of its sides, `samples` times at parameters
/// `(j + 1/2) / samples`. Fibers come in sweep order, so their disks are nested.
pub fn sweep_out_fibers(mesh: &IntrinsicMesh, shelling: &Shelling, samples: usize) -> Vec<Fiber> {
    let order = &shelling.order;
    let nf = order.len();
    let mut out = Vec::with_capacity(nf * samples);
    let mut area_before = 0.0;
    for (step, &t) in order.iter().enumerate() {
        let face = mesh.face(t);
        let cycle = if step == 0 || step + 1 == nf { Vec::new() } else { disk_boundary(mesh, &order[..step]) };
        let shared: Vec<usize> = (0..3)
            .filter(|&s| order[..step].contains(&face.twin[s].face))
            .collect();
        for j in 0..samples {
            let s = (j as f64 + 0.5) / samples as f64;
            let (points, faces, area) = if step == 0 {
                // Homothetic copy of the first face shrinking to its corner 0.
                let pts = vec![
                    SurfacePoint::vertex(face.v[0]),
                    SurfacePoint::on_side(mesh, t, 2, s),
                    SurfacePoint::on_side(mesh, t, 1, 1.0 - s),
                ];
                (pts, vec![t; 3], s * s * face.area)
            } else if step + 1 == nf {
                // Shrinks to corner 0 of the last face; the disk is outside.
                let r = 1.0 - s;
                let pts = vec![
                    SurfacePoint::vertex(face.v[0]),
                    SurfacePoint::on_side(mesh, t, 1, 1.0 - r),
                    SurfacePoint::on_side(mesh, t, 2, r),
                ];
                (pts, vec![t; 3], area_before + face.area * (1.0 - r * r))
            } else if shared.len() == 1 {
                let side = shared[0];
                let h = mesh.twin(HalfEdge::new(t, side));
                let k = cycle.iter().position(|&c| c == h).expect("shared side lies on the disk boundary");
                let a = face.v[prev(side)];
                let mut pts = vec![
                    SurfacePoint::vertex(a),
                    SurfacePoint::on_side(mesh, t, next(side), s),
                    SurfacePoint::on_side(mesh, t, prev(side), 1.0 - s),
                ];
                let mut fs = vec![t; 3];
                rest_of_cycle(mesh, &cycle, k, 1, &mut pts, &mut fs);
                let swept = 1.0 - (1.0 - s) * (1.0 - s);
                (pts, fs, area_before + face.area * swept)
            } else {
                let free = (0..3).find(|x| !shared.contains(x)).expect("a middle face has a free side");
                let into = mesh.twin(HalfEdge::new(t, prev(free)));
                let k = cycle.iter().position(|&c| c == into).expect("shared side lies on the disk boundary");
                let n1 = face.v[next(free)];
                let mut pts = vec![
                    SurfacePoint::vertex(n1),
                    SurfacePoint::on_side(mesh, t, prev(free), s),
                    SurfacePoint::on_side(mesh, t, next(free), 1.0 - s),
                ];
                let mut fs = vec![t; 3];
                rest_of_cycle(mesh, &cycle, k, 2, &mut pts, &mut fs);
                (pts, fs, area_before + face.area * s * s)
            };
            out.push(Fiber { curve: PLCurve { points, faces, closed: true }, step, s, disk_area: area });
        }
        area_before += face.area;
    }
    out
}

/// Appends the boundary cycle after skipping `skip` half-edges from `k`:
/// the start vertex and face of each remaining half-edge.
fn rest_of_cycle(
    mesh: &IntrinsicMesh,
    cycle: &[HalfEdge],
    k: usize,
    skip: usize,
    pts: &mut Vec<SurfacePoint>,
    fs: &mut Vec<usize>,
) {
    let len = cycle.len();
    for d in skip..len {
        let h = cycle[(k + d) % len];
        pts.push(SurfacePoint::vertex(mesh.face(h.face).v[next(h.side)]));
        fs.push(h.face);
    }
}
