//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use hotvis::graph::TemporalGraph;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exhaustive enumeration of causal paths: every sequence of edge indices
/// whose consecutive edges share a vertex and satisfy `0 < dt <= delta`.
pub fn brute_force_paths(g: &TemporalGraph, delta: u64, max_len: usize) -> BTreeMap<Vec<String>, u64> {
    fn extend(
        g: &TemporalGraph,
        delta: u64,
        max_len: usize,
        seq: &mut Vec<usize>,
        out: &mut BTreeMap<Vec<String>, u64>,
    ) {
        let edges = g.edges();
        let names = g.vertices();
        let mut nodes = vec![names.name(edges[seq[0]].source).to_string()];
        nodes.extend(seq.iter().map(|&i| names.name(edges[i].target).to_string()));
        *out.entry(nodes).or_insert(0) += 1;
        if seq.len() == max_len {
            return;
        }
        let last = edges[*seq.last().unwrap()];
        for (j, e) in edges.iter().enumerate() {
            if e.source == last.target && e.time > last.time && e.time - last.time <= delta {
                seq.push(j);
                extend(g, delta, max_len, seq, out);
                seq.pop();
            }
        }
    }
    let mut out = BTreeMap::new();
    for i in 0..g.edges().len() {
        extend(g, delta, max_len, &mut vec![i], &mut out);
    }
    out
}

pub fn named_counts(pc: &hotvis::PathCollection) -> BTreeMap<Vec<String>, u64> {
    pc.iter()
        .map(|(p, c)| (pc.path_names(p).iter().map(|s| s.to_string()).collect(), c))
        .collect()
}

pub fn random_temporal_graph(rng: &mut impl Rng, max_vertices: usize, max_edges: usize, max_time: u64) -> TemporalGraph {
    let n = rng.gen_range(2..=max_vertices);
    let m = rng.gen_range(1..=max_edges);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut b = TemporalGraph::builder();
    for name in &names {
        b.add_vertex(name);
    }
    for _ in 0..m {
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        b.add_edge(&names[s], &names[t], rng.gen_range(0..=max_time));
    }
    b.build()
}

pub fn temporal_graph_strategy(max_vertices: usize, max_edges: usize, max_time: u64) -> impl Strategy<Value = TemporalGraph> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_temporal_graph(&mut rng, max_vertices, max_edges, max_time)
    })
}

/// Segment intersection by exact parametric solution on the snapped grid.
/// Counts a crossing when the relative interiors share exactly one point or
/// the segments overlap collinearly over positive length.
pub fn brute_force_cross(p1: (f64, f64), p2: (f64, f64), q1: (f64, f64), q2: (f64, f64)) -> bool {
    let snap = |p: (f64, f64)| -> (i128, i128) {
        let s = (2.0f64).powi(30);
        ((p.0 * s).round() as i128, (p.1 * s).round() as i128)
    };
    let (p1, p2, q1, q2) = (snap(p1), snap(p2), snap(q1), snap(q2));
    let cross = |a: (i128, i128), b: (i128, i128)| a.0 * b.1 - a.1 * b.0;
    let sub = |a: (i128, i128), b: (i128, i128)| (a.0 - b.0, a.1 - b.1);
    let r = sub(p2, p1);
    let w = sub(q2, q1);
    let qp = sub(q1, p1);
    let denom = cross(r, w);
    if denom != 0 {
        // s = cross(qp, w) / denom, u = cross(qp, r) / denom, both in (0, 1)
        let (mut sn, mut un, mut d) = (cross(qp, w), cross(qp, r), denom);
        if d < 0 {
            sn = -sn;
            un = -un;
            d = -d;
        }
        return 0 < sn && sn < d && 0 < un && un < d;
    }
    if r == (0, 0) || w == (0, 0) || cross(qp, r) != 0 {
        return false;
    }
    // collinear: project q onto p's parameter scaled by |r|^2
    let rr = r.0 * r.0 + r.1 * r.1;
    let t0 = qp.0 * r.0 + qp.1 * r.1;
    let q2p = sub(q2, p1);
    let t1 = q2p.0 * r.0 + q2p.1 * r.1;
    let lo = t0.min(t1).max(0);
    let hi = t0.max(t1).min(rr);
    lo < hi
}

/// Area under the ROC curve as the Mann–Whitney statistic, ties counted 1/2.
pub fn mann_whitney_auc(scored: &[(f64, bool)]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for &(sp, lp) in scored {
        if !lp {
            continue;
        }
        for &(sn, ln) in scored {
            if ln {
                continue;
            }
            pairs += 1.0;
            if sp > sn {
                wins += 1.0;
            } else if sp == sn {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}
