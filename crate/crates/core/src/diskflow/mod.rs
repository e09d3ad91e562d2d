//! Curve shortening by successive straightening inside vertex stars, and the
//! shelling sweep-out used to seed it.

mod star;
mod straighten;
mod sweep;

pub use star::{
    decompose_arcs, point_membership, region_angles, region_angles_from, segment_membership, star_angle, Arc,
    Gate, Membership, RegionAngles,
};
pub use straighten::{
    apex_path, choose_rule, phi_loc, shortest_path_in_region, straighten_piece, GatePoint, LocalOutcome, Piece,
    Replacement, Rule, Straightened,
};
pub use sweep::{sweep_out_fibers, Fiber};

use serde::{Deserialize, Serialize};

use crate::geometry::{PLCurve, SurfacePoint};
use crate::mesh::IntrinsicMesh;
use crate::verify::{check_curve_numeric, NumericReport};

pub const DEFAULT_FLOW_TOLERANCE: f64 = 1e-7;
pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;
/// Tolerance of the straightness check a converged curve must pass.
pub const CONVERGED_NUMERIC_TOLERANCE: f64 = 1e-5;

/// One full pass over the stars in ascending vertex order.
pub fn phi(mesh: &IntrinsicMesh, curve: &PLCurve) -> LocalOutcome {
    let mut c = curve.clone();
    for i in 0..mesh.num_vertices() {
        match phi_loc(mesh, &c, i) {
            LocalOutcome::Curve(next) => c = next,
            collapsed => return collapsed,
        }
    }
    LocalOutcome::Curve(c)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FlowOutcome {
    Converged { curve: PLCurve, report: NumericReport },
    Collapsed { point: SurfacePoint },
    /// A pass left the curve unchanged but it fails the numeric check;
    /// replacements shorter than rounding level are not taken.
    Stalled { curve: PLCurve, report: NumericReport },
    MaxIterations { curve: PLCurve, residual: f64 },
}

/// Flow result with the length after each pass, starting with the input length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowRun {
    pub outcome: FlowOutcome,
    pub iterations: usize,
    pub lengths: Vec<f64>,
}

/// Iterates `phi` until a pass shortens the curve by less than `tol` and the
/// result passes the numeric quasigeodesic check, the curve collapses or
/// stops changing, or
/// `max_iter` passes have run.
pub fn iterate_flow(mesh: &IntrinsicMesh, curve: &PLCurve, tol: f64, max_iter: usize) -> FlowRun {
    let mut c = curve.clone();
    c.canonicalize(mesh);
    let mut lengths = vec![c.length(mesh)];
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter.max(1) {
        let next = match phi(mesh, &c) {
            LocalOutcome::Curve(next) => next,
            LocalOutcome::Collapsed(point) => {
                return FlowRun { outcome: FlowOutcome::Collapsed { point }, iterations: it, lengths };
            }
        };
        let len = next.length(mesh);
        residual = lengths.last().unwrap() - len;
        lengths.push(len);
        c = next;
        if residual < tol {
            let report = check_curve_numeric(mesh, &c, CONVERGED_NUMERIC_TOLERANCE);
            if report.accept {
                return FlowRun { outcome: FlowOutcome::Converged { curve: c, report }, iterations: it, lengths };
            }
            if residual == 0.0 {
                return FlowRun { outcome: FlowOutcome::Stalled { curve: c, report }, iterations: it, lengths };
            }
        }
    }
    FlowRun {
        outcome: FlowOutcome::MaxIterations { curve: c, residual },
        iterations: max_iter.max(1),
        lengths,
    }
}
