//! k-th order De Bruijn graph models of path statistics.
//!
//! In the order-`k` model every vertex is a `k`-tuple of base vertices and
//! every observed path `v0 ... vk` of length `k` becomes an edge
//! `(v0..v{k-1}) -> (v1..vk)` weighted by the path's count.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::paths::{PathCollection, PathNodes};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HigherOrderGraph {
    order: usize,
    vertices: BTreeSet<PathNodes>,
    edges: BTreeMap<(PathNodes, PathNodes), u64>,
}

impl HigherOrderGraph {
    /// Builds the order-`k` model. For `k >= 2` the vertex set consists of
    /// the prefixes and suffixes of observed length-`k` paths only; for
    /// `k = 1` it is the full base vertex set.
    pub fn build(pc: &PathCollection, k: usize) -> Result<Self> {
        if k < 1 || k > pc.max_length() {
            return Err(Error::invalid(format!(
                "order {k} outside 1..={} supported by the path collection",
                pc.max_length()
            )));
        }
        let mut vertices = BTreeSet::new();
        if k == 1 {
            vertices.extend(pc.vertices().ids().map(|v| vec![v]));
        }
        let mut edges = BTreeMap::new();
        for (path, count) in pc.of_length(k) {
            let source = path[..k].to_vec();
            let target = path[1..].to_vec();
            vertices.insert(source.clone());
            vertices.insert(target.clone());
            *edges.entry((source, target)).or_insert(0) += count;
        }
        Ok(Self {
            order: k,
            vertices,
            edges,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vertices(&self) -> &BTreeSet<PathNodes> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeMap<(PathNodes, PathNodes), u64> {
        &self.edges
    }

    pub fn edge_weight(&self, source: &[VertexId], target: &[VertexId]) -> u64 {
        self.edges
            .get(&(source.to_vec(), target.to_vec()))
            .copied()
            .unwrap_or(0)
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.values().sum()
    }

    /// First and last base vertex of the path an edge stands for.
    pub fn endpoints(source: &[VertexId], target: &[VertexId]) -> (VertexId, VertexId) {
        (source[0], *target.last().expect("higher-order vertex is non-empty"))
    }

    /// Describes every edge violating the De Bruijn overlap condition or
    /// carrying endpoints of the wrong arity. Empty for a valid graph.
    pub fn overlap_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (source, target) in self.edges.keys() {
            if source.len() != self.order || target.len() != self.order {
                out.push(format!("edge {source:?}->{target:?} has wrong arity"));
            } else if source[1..] != target[..self.order - 1] {
                out.push(format!("edge {source:?}->{target:?} does not overlap"));
            }
            if !self.vertices.contains(source) || !self.vertices.contains(target) {
                out.push(format!("edge {source:?}->{target:?} has unknown endpoint"));
            }
        }
        out
    }
}

/// Number of distinct paths of length `k`.
pub fn unique_path_count(pc: &PathCollection, k: usize) -> usize {
    pc.counts_of_length(k).map_or(0, BTreeMap::len)
}

/// Force coefficients `alpha_k = 1 / m_k` for `k = 2..=max_order`, with
/// `alpha_k = 0` for orders without any observed path.
pub fn default_alphas(pc: &PathCollection, max_order: usize) -> Result<BTreeMap<usize, f64>> {
    if max_order > pc.max_length() {
        return Err(Error::invalid(format!(
            "order {max_order} exceeds maximum path length {}",
            pc.max_length()
        )));
    }
    Ok((2..=max_order)
        .map(|k| {
            let m = unique_path_count(pc, k);
            (k, if m == 0 { 0.0 } else { 1.0 / m as f64 })
        })
        .collect())
}
