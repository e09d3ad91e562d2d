use std::collections::BTreeSet;

use rayon::prelude::*;

use super::segments::{enumerate_segments, GeodesicSegment, SegmentList};
use crate::geometry::{angle_rule_defect, canonical_word, side_angles_at_vertex, Letter};
use crate::mesh::{IntrinsicMesh, VertexId};
use crate::verify::{check_word, Certificate};

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub max_segment_length: f64,
    pub max_total_length: f64,
    pub max_word_length: usize,
    pub max_solutions: usize,
    /// Node budget, shared between segment enumeration and chain assembly.
    pub budget: u64,
    /// Stop at the first verified certificate.
    pub first_only: bool,
}

impl SearchConfig {
    /// Bounds from the mesh: total length up to the edge sum, words up to
    /// the word-length bound.
    pub fn for_mesh(mesh: &IntrinsicMesh) -> Self {
        let g = mesh.global_quantities();
        SearchConfig {
            max_segment_length: g.edge_sum,
            max_total_length: g.edge_sum,
            max_word_length: g.eta.min(usize::MAX as u64) as usize,
            max_solutions: usize::MAX,
            budget: super::DEFAULT_NODE_BUDGET,
            first_only: false,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SearchResult {
    pub certificates: Vec<Certificate>,
    /// False if a budget ran out, so that absence of a solution proves nothing.
    pub complete: bool,
    pub nodes: u64,
}

/// Enumerates segments from every vertex in parallel, merged in vertex order.
pub fn enumerate_all(mesh: &IntrinsicMesh, max_len: f64, budget: u64) -> Vec<SegmentList> {
    (0..mesh.num_vertices())
        .into_par_iter()
        .map(|v| enumerate_segments(mesh, v, max_len, budget))
        .collect()
}

/// Chains segments into closed words obeying the angle rule at every
/// junction, verifies each, and returns them deduplicated and sorted by
/// length and canonical word.
pub fn assemble_closed(mesh: &IntrinsicMesh, segments: &[SegmentList], config: &SearchConfig) -> SearchResult {
    let eps = mesh.eps();
    let mut complete = segments.iter().all(|s| s.complete);
    let seg_nodes: u64 = segments.iter().map(|s| s.nodes).sum();
    let budget = config.budget.saturating_sub(seg_nodes).max(1);

    // Candidate words per start vertex, found independently.
    let per_start: Vec<(Vec<(f64, Vec<Letter>)>, bool, u64)> = (0..mesh.num_vertices())
        .into_par_iter()
        .map(|v0| {
            let mut found = Vec::new();
            let mut nodes = 0u64;
            let mut path: Vec<&GeodesicSegment> = Vec::new();
            let ok = chains(mesh, segments, config, v0, &mut path, 0.0, 0, &mut found, &mut nodes, budget, eps);
            (found, ok, nodes)
        })
        .collect();

    let mut nodes = seg_nodes;
    let mut words: BTreeSet<(u64, Vec<Letter>)> = BTreeSet::new();
    let mut seen: BTreeSet<Vec<Letter>> = BTreeSet::new();
    for (found, ok, n) in per_start {
        complete &= ok;
        nodes += n;
        for (len, w) in found {
            let c = canonical_word(&w);
            if seen.insert(c.clone()) {
                words.insert((len.to_bits(), c));
            }
        }
    }
    let mut ordered: Vec<(f64, Vec<Letter>)> = words.into_iter().map(|(b, w)| (f64::from_bits(b), w)).collect();
    ordered.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut certificates = Vec::new();
    for (_, w) in ordered {
        if certificates.len() >= config.max_solutions {
            break;
        }
        if let Ok(c) = check_word(mesh, &w) {
            certificates.push(c);
            if config.first_only {
                break;
            }
        }
    }
    certificates.sort_by(|a, b| {
        a.total_length
            .total_cmp(&b.total_length)
            .then(a.word.cmp(&b.word))
    });
    SearchResult { certificates, complete, nodes }
}

#[allow(clippy::too_many_arguments)]
fn chains<'a>(
    mesh: &IntrinsicMesh,
    segments: &'a [SegmentList],
    config: &SearchConfig,
    v0: VertexId,
    path: &mut Vec<&'a GeodesicSegment>,
    length: f64,
    letters: usize,
    found: &mut Vec<(f64, Vec<Letter>)>,
    nodes: &mut u64,
    budget: u64,
    eps: f64,
) -> bool {
    *nodes += 1;
    if *nodes > budget {
        return false;
    }
    let here = path.last().map_or(v0, |s| s.end);
    for seg in &segments[here].segments {
        if seg.end < v0 {
            continue;
        }
        let total = length + seg.length;
        if total > config.max_total_length + eps {
            // Segments are sorted by length.
            break;
        }
        let count = letters + 1 + seg.inner.len();
        if count > config.max_word_length {
            continue;
        }
        if let Some(last) = path.last() {
            if !junction_ok(mesh, here, last.entry, seg.exit) {
                continue;
            }
        }
        path.push(seg);
        if seg.end == v0 && junction_ok(mesh, v0, seg.entry, path[0].exit) {
            let mut w = Vec::with_capacity(count);
            for s in path.iter() {
                w.push(Letter::V(s.start));
                w.extend_from_slice(&s.inner);
            }
            found.push((total, w));
        }
        let ok = chains(mesh, segments, config, v0, path, total, count, found, nodes, budget, eps);
        path.pop();
        if !ok {
            return false;
        }
    }
    true
}

fn junction_ok(mesh: &IntrinsicMesh, v: VertexId, entry: f64, exit: f64) -> bool {
    let (l, r) = side_angles_at_vertex(mesh, v, entry, exit);
    angle_rule_defect(mesh.vertex(v).cone_angle, l, r, mesh.eps()).1 <= mesh.eps()
}

/// Full search: enumerate segments up to the segment bound, then assemble.
pub fn search(mesh: &IntrinsicMesh, config: &SearchConfig) -> SearchResult {
    let max_seg = config.max_segment_length.min(config.max_total_length);
    let segs = enumerate_all(mesh, max_seg, config.budget);
    assemble_closed(mesh, &segs, config)
}
