//! Temporal graphs and their time-aggregated projections.
//!
//! Vertices are identified by arbitrary strings externally and by dense
//! [`VertexId`] indices internally. A [`VertexTable`] owns that mapping and is
//! shared (via `Arc`) between a graph and every path collection derived from it.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type VertexId = u32;

/// Interned vertex names in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VertexTable {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
}

impl VertexTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut table = Self::new();
        for name in names {
            let name = name.into();
            if table.index.contains_key(&name) {
                return Err(Error::InvalidData(format!("duplicate vertex {name:?}")));
            }
            table.intern(&name);
        }
        Ok(table)
    }

    /// Returns the id of `name`, inserting it if absent.
    pub fn intern(&mut self, name: &str) -> VertexId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = VertexId::try_from(self.names.len()).expect("vertex count exceeds u32 range");
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn id(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: VertexId) -> &str {
        &self.names[id as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = VertexId> {
        0..self.names.len() as VertexId
    }
}

/// A directed edge that fires instantaneously at `time`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimedEdge {
    pub source: VertexId,
    pub target: VertexId,
    pub time: u64,
}

/// A vertex set plus a multiset of time-stamped directed edges.
///
/// Immutable once built; use [`TemporalGraphBuilder`] to construct one.
#[derive(Debug, Clone)]
pub struct TemporalGraph {
    vertices: Arc<VertexTable>,
    edges: Vec<TimedEdge>,
}

#[derive(Debug, Default)]
pub struct TemporalGraphBuilder {
    vertices: VertexTable,
    edges: Vec<TimedEdge>,
}

impl TemporalGraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: &str) -> VertexId {
        self.vertices.intern(name)
    }

    pub fn add_edge(&mut self, source: &str, target: &str, time: u64) -> &mut Self {
        let source = self.vertices.intern(source);
        let target = self.vertices.intern(target);
        self.edges.push(TimedEdge {
            source,
            target,
            time,
        });
        self
    }

    pub fn build(self) -> TemporalGraph {
        TemporalGraph {
            vertices: Arc::new(self.vertices),
            edges: self.edges,
        }
    }
}

impl TemporalGraph {
    pub fn builder() -> TemporalGraphBuilder {
        TemporalGraphBuilder::new()
    }

    /// Builds a graph from `(source, target, time)` triples.
    pub fn from_edges<'a, I>(edges: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, &'a str, u64)>,
    {
        let mut builder = Self::builder();
        for (s, t, time) in edges {
            builder.add_edge(s, t, time);
        }
        builder.build()
    }

    /// Assembles a graph from an existing vertex table and id-based edges.
    pub fn from_parts(vertices: Arc<VertexTable>, edges: Vec<TimedEdge>) -> Result<Self> {
        let n = vertices.len() as VertexId;
        if let Some(e) = edges.iter().find(|e| e.source >= n || e.target >= n) {
            return Err(Error::InvalidData(format!(
                "edge endpoint out of range: {} -> {}",
                e.source, e.target
            )));
        }
        Ok(Self { vertices, edges })
    }

    pub fn vertices(&self) -> &Arc<VertexTable> {
        &self.vertices
    }

    pub fn edges(&self) -> &[TimedEdge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn aggregate(&self) -> AggregateGraph {
        let mut weights = BTreeMap::new();
        for e in &self.edges {
            *weights.entry((e.source, e.target)).or_insert(0u64) += 1;
        }
        AggregateGraph {
            vertices: Arc::clone(&self.vertices),
            weights,
        }
    }

    /// Randomly permutes the timestamps over the edges.
    ///
    /// The `(source, target)` multiset and the timestamp multiset are both
    /// preserved; only their pairing changes.
    pub fn shuffle_timestamps(&self, seed: u64) -> TemporalGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut times: Vec<u64> = self.edges.iter().map(|e| e.time).collect();
        times.shuffle(&mut rng);
        let edges = self
            .edges
            .iter()
            .zip(times)
            .map(|(e, time)| TimedEdge { time, ..*e })
            .collect();
        TemporalGraph {
            vertices: Arc::clone(&self.vertices),
            edges,
        }
    }
}

/// Weighted time-aggregated graph; weights are activation counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggregateGraph {
    vertices: Arc<VertexTable>,
    weights: BTreeMap<(VertexId, VertexId), u64>,
}

impl AggregateGraph {
    pub fn vertices(&self) -> &Arc<VertexTable> {
        &self.vertices
    }

    pub fn weights(&self) -> &BTreeMap<(VertexId, VertexId), u64> {
        &self.weights
    }

    pub fn weight(&self, source: VertexId, target: VertexId) -> u64 {
        self.weights.get(&(source, target)).copied().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    /// Weight map keyed by vertex names.
    pub fn named_weights(&self) -> BTreeMap<(String, String), u64> {
        self.weights
            .iter()
            .map(|(&(s, t), &w)| {
                (
                    (self.vertices.name(s).to_string(), self.vertices.name(t).to_string()),
                    w,
                )
            })
            .collect()
    }
}
