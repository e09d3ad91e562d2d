//! End-to-end pipeline: flow sweep-out fibers to quasigeodesics, certify
//! them, and fall back on (or refine with) the bounded search; plus
//! certificate export.

use nalgebra::Point3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diskflow::{iterate_flow, sweep_out_fibers, FlowOutcome, DEFAULT_FLOW_TOLERANCE, DEFAULT_MAX_ITERATIONS};
use crate::geometry::{strips_svg, Letter, PLCurve, SurfacePoint};
use crate::mesh::{compute_shelling, io::mesh_hash, IntrinsicMesh, MeshError};
use crate::search::{push_to_vertex, search, SearchConfig, SearchResult};
use crate::verify::{check_word, check_word_with_strips, extract_word, Certificate, Rejection};

#[derive(Clone, Debug)]
pub struct FindConfig {
    /// Sweep-out fibers sampled per face.
    pub samples: usize,
    pub flow_tol: f64,
    pub max_iter: usize,
    pub search: SearchConfig,
    /// Search below the best flowed certificate for a shorter one.
    pub refine: bool,
    /// Node budget of that refining search.
    pub refine_budget: u64,
}

pub const DEFAULT_REFINE_BUDGET: u64 = 1_000_000;

impl FindConfig {
    pub fn for_mesh(mesh: &IntrinsicMesh) -> Self {
        FindConfig {
            samples: 3,
            flow_tol: DEFAULT_FLOW_TOLERANCE,
            max_iter: DEFAULT_MAX_ITERATIONS,
            search: SearchConfig::for_mesh(mesh),
            refine: true,
            refine_budget: DEFAULT_REFINE_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Flow,
    Search,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FindReport {
    pub certificate: Certificate,
    pub source: Source,
    pub fibers: usize,
    /// Fibers whose flow ended in a certified quasigeodesic.
    pub flow_certified: usize,
    /// Whether the last search run covered its whole bound, if one ran.
    pub search_complete: Option<bool>,
    pub search_nodes: u64,
}

#[derive(Debug, Error)]
pub enum FindError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("no certificate found within the search budget ({nodes} nodes)")]
    BudgetExhausted { nodes: u64 },
    #[error("search covered its bound without finding a certificate")]
    SearchExhausted,
}

/// Certificate for a closed quasigeodesic found numerically: pushed onto a
/// vertex if it avoids all of them, then read back as a word and verified.
pub fn certify_curve(mesh: &IntrinsicMesh, curve: &PLCurve) -> Option<Certificate> {
    let through_vertex = curve.points.iter().any(|p| p.as_vertex().is_some());
    let c = if through_vertex { curve.clone() } else { push_to_vertex(mesh, curve).ok()? };
    check_word(mesh, &extract_word(mesh, &c)).ok()
}

/// Flows every fiber independently and certifies the converged ones, in
/// fiber order.
pub fn flow_certificates(mesh: &IntrinsicMesh, fibers: &[PLCurve], tol: f64, max_iter: usize) -> Vec<Option<Certificate>> {
    fibers
        .par_iter()
        .map(|c| match iterate_flow(mesh, c, tol, max_iter).outcome {
            FlowOutcome::Converged { curve, .. } => certify_curve(mesh, &curve),
            _ => None,
        })
        .collect()
}

/// Shortest certificate, earliest on ties.
fn shortest(certs: impl IntoIterator<Item = Certificate>) -> Option<Certificate> {
    let mut best: Option<Certificate> = None;
    for c in certs {
        if best.as_ref().is_none_or(|b| c.total_length < b.total_length - 1e-12) {
            best = Some(c);
        }
    }
    best
}

pub fn find(mesh: &IntrinsicMesh, config: &FindConfig) -> Result<FindReport, FindError> {
    let shelling = compute_shelling(mesh)?;
    let fibers: Vec<PLCurve> = sweep_out_fibers(mesh, &shelling, config.samples)
        .into_iter()
        .map(|f| f.curve)
        .collect();
    let flowed = flow_certificates(mesh, &fibers, config.flow_tol, config.max_iter);
    let flow_certified = flowed.iter().filter(|c| c.is_some()).count();
    let bound = config.search.max_total_length;
    let best = shortest(flowed.into_iter().flatten().filter(|c| c.total_length <= bound + mesh.eps()));

    let report = |certificate: Certificate, source: Source, complete: Option<bool>, nodes: u64| FindReport {
        certificate,
        source,
        fibers: fibers.len(),
        flow_certified,
        search_complete: complete,
        search_nodes: nodes,
    };
    match best {
        Some(b) if config.refine => {
            let below = b.total_length - 1e-6;
            let mut sc = config.search.clone();
            sc.max_total_length = sc.max_total_length.min(below);
            sc.max_segment_length = sc.max_segment_length.min(below);
            sc.budget = sc.budget.min(config.refine_budget);
            let r = search(mesh, &sc);
            match r.certificates.into_iter().next() {
                Some(c) => Ok(report(c, Source::Search, Some(r.complete), r.nodes)),
                None => Ok(report(b, Source::Flow, Some(r.complete), r.nodes)),
            }
        }
        Some(b) => Ok(report(b, Source::Flow, None, 0)),
        None => {
            let r = deepening_search(mesh, &config.search);
            match r.certificates.into_iter().next() {
                Some(c) => Ok(report(c, Source::Search, Some(r.complete), r.nodes)),
                None if !r.complete => Err(FindError::BudgetExhausted { nodes: r.nodes }),
                None => Err(FindError::SearchExhausted),
            }
        }
    }
}

/// Search with the length bound doubled from an eighth of the configured
/// one until a certificate turns up; a short bound keeps the tree small.
pub fn deepening_search(mesh: &IntrinsicMesh, config: &SearchConfig) -> SearchResult {
    let full = config.max_total_length;
    let mut bound = full / 8.0;
    let mut nodes = 0;
    loop {
        let mut sc = config.clone();
        sc.max_total_length = bound.min(full);
        sc.max_segment_length = sc.max_segment_length.min(sc.max_total_length);
        let mut r = search(mesh, &sc);
        nodes += r.nodes;
        r.nodes = nodes;
        if !r.certificates.is_empty() || !r.complete || bound >= full {
            return r;
        }
        bound *= 2.0;
    }
}

/// PL curve through the vertices and edge midpoints named by a word;
/// `F` letters add no point since their endpoints are the neighboring `V`s.
pub fn curve_from_word(mesh: &IntrinsicMesh, word: &[Letter]) -> Option<PLCurve> {
    let points: Vec<SurfacePoint> = word
        .iter()
        .filter_map(|l| match *l {
            Letter::V(v) => Some(SurfacePoint::vertex(v)),
            Letter::Cross(e) => Some(SurfacePoint::Edge { edge: e, t: 0.5 }),
            Letter::Follow(_) => None,
        })
        .collect();
    if points.len() < 2 {
        return None;
    }
    PLCurve::from_points(mesh, points, true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExportFormat {
    Svg,
    ObjPolyline,
    Json,
}

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("certificate was computed on mesh {expected}, not {found}")]
    HashMismatch { expected: String, found: String },
    #[error("the mesh has no 3D embedding")]
    NoEmbedding,
    #[error("certificate does not verify: {0}")]
    Rejected(Rejection),
}

/// 3D position of a surface point on a mesh with an embedding.
pub fn lift(mesh: &IntrinsicMesh, p: &SurfacePoint) -> Option<Point3<f64>> {
    let pos = mesh.positions()?;
    Some(match *p {
        SurfacePoint::Vertex { vertex } => pos[vertex],
        SurfacePoint::Edge { edge, t } => {
            let e = mesh.edge(edge);
            pos[e.v[0]] + (pos[e.v[1]] - pos[e.v[0]]) * t
        }
        SurfacePoint::Face { face, bary } => {
            let v = mesh.face(face).v;
            Point3::from(pos[v[0]].coords * bary[0] + pos[v[1]].coords * bary[1] + pos[v[2]].coords * bary[2])
        }
    })
}

/// Closed polyline as an OBJ `l` element.
pub fn polyline_obj(mesh: &IntrinsicMesh, curve: &PLCurve) -> Option<String> {
    let mut s = String::new();
    for p in &curve.points {
        let x = lift(mesh, p)?;
        s.push_str(&format!("v {:.12} {:.12} {:.12}\n", x.x, x.y, x.z));
    }
    s.push('l');
    for k in 0..curve.points.len() {
        s.push_str(&format!(" {}", k + 1));
    }
    if curve.closed && !curve.points.is_empty() {
        s.push_str(" 1");
    }
    s.push('\n');
    Some(s)
}

pub fn export(mesh: &IntrinsicMesh, cert: &Certificate, format: ExportFormat) -> Result<String, ExportError> {
    let found = mesh_hash(mesh);
    if found != cert.mesh_hash {
        return Err(ExportError::HashMismatch { expected: cert.mesh_hash.clone(), found });
    }
    match format {
        ExportFormat::Json => Ok(cert.to_json()),
        ExportFormat::ObjPolyline => polyline_obj(mesh, &cert.realization).ok_or(ExportError::NoEmbedding),
        ExportFormat::Svg => {
            let (_, strips) = check_word_with_strips(mesh, &cert.word).map_err(ExportError::Rejected)?;
            Ok(strips_svg(mesh, &strips))
        }
    }
}
