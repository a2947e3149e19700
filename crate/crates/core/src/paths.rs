//! Causal (time-respecting) path statistics.
//!
//! A causal path of length `l` is a sequence of `l` time-stamped edges
//! `(v0,v1;t0), (v1,v2;t1), ...` with `0 < t_{i+1} - t_i <= delta`. Every
//! window of a longer causal path is itself a causal path, so counts include
//! all sub-paths. The count of a node sequence is the number of distinct
//! edge-occurrence tuples realising it; duplicated time-stamped edges
//! therefore contribute with multiplicity.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, VertexId, VertexTable};

/// Default cap on simultaneously tracked partial paths during extraction.
pub const DEFAULT_PARTIAL_PATH_CAP: usize = 100_000_000;

/// Node sequence of a path; a path of length `l` has `l + 1` nodes.
pub type PathNodes = Vec<VertexId>;

/// Multiset of paths with lengths in `1..=max_length`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathCollection {
    vertices: Arc<VertexTable>,
    // index `l - 1` holds the paths of length `l`
    by_length: Vec<BTreeMap<PathNodes, u64>>,
    delta: Option<u64>,
}

impl PathCollection {
    pub fn empty(vertices: Arc<VertexTable>, max_length: usize, delta: Option<u64>) -> Result<Self> {
        if max_length < 1 {
            return Err(Error::invalid("maximum path length must be at least 1"));
        }
        Ok(Self {
            vertices,
            by_length: vec![BTreeMap::new(); max_length],
            delta,
        })
    }

    /// Builds a collection from explicit counts, validating every entry.
    /// Repeated paths are summed.
    pub fn from_counts<I>(
        vertices: Arc<VertexTable>,
        max_length: usize,
        delta: Option<u64>,
        counts: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (PathNodes, u64)>,
    {
        let mut pc = Self::empty(vertices, max_length, delta)?;
        let n = pc.vertices.len() as VertexId;
        for (nodes, count) in counts {
            if nodes.len() < 2 {
                return Err(Error::InvalidData("path must contain at least two nodes".into()));
            }
            let len = nodes.len() - 1;
            if len > max_length {
                return Err(Error::InvalidData(format!(
                    "path of length {len} exceeds maximum length {max_length}"
                )));
            }
            if count == 0 {
                return Err(Error::InvalidData("path frequency must be positive".into()));
            }
            if nodes.iter().any(|&v| v >= n) {
                return Err(Error::InvalidData("path references unknown vertex".into()));
            }
            *pc.by_length[len - 1].entry(nodes).or_insert(0) += count;
        }
        Ok(pc)
    }

    pub fn vertices(&self) -> &Arc<VertexTable> {
        &self.vertices
    }

    pub fn delta(&self) -> Option<u64> {
        self.delta
    }

    pub fn max_length(&self) -> usize {
        self.by_length.len()
    }

    /// Paths of exactly `length` edges; empty for lengths outside `1..=max_length`.
    pub fn of_length(&self, length: usize) -> impl Iterator<Item = (&[VertexId], u64)> {
        let map = length
            .checked_sub(1)
            .and_then(|i| self.by_length.get(i));
        map.into_iter()
            .flat_map(|m| m.iter().map(|(p, &c)| (p.as_slice(), c)))
    }

    pub fn counts_of_length(&self, length: usize) -> Option<&BTreeMap<PathNodes, u64>> {
        length.checked_sub(1).and_then(|i| self.by_length.get(i))
    }

    /// All paths in order of increasing length, then lexicographic node ids.
    pub fn iter(&self) -> impl Iterator<Item = (&[VertexId], u64)> {
        self.by_length
            .iter()
            .flat_map(|m| m.iter().map(|(p, &c)| (p.as_slice(), c)))
    }

    pub fn count(&self, nodes: &[VertexId]) -> u64 {
        nodes
            .len()
            .checked_sub(2)
            .and_then(|i| self.by_length.get(i))
            .and_then(|m| m.get(nodes))
            .copied()
            .unwrap_or(0)
    }

    /// Count of the path given by vertex names; 0 if unknown.
    pub fn count_named(&self, names: &[&str]) -> u64 {
        let ids: Option<Vec<_>> = names.iter().map(|n| self.vertices.id(n)).collect();
        ids.map_or(0, |ids| self.count(&ids))
    }

    /// Number of distinct paths.
    pub fn unique_len(&self) -> usize {
        self.by_length.iter().map(BTreeMap::len).sum()
    }

    /// Number of path occurrences, counted with multiplicity.
    pub fn total_count(&self) -> u64 {
        self.by_length.iter().flat_map(|m| m.values()).sum()
    }

    pub fn total_count_of_length(&self, length: usize) -> u64 {
        self.of_length(length).map(|(_, c)| c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_length.iter().all(BTreeMap::is_empty)
    }

    pub fn path_names(&self, nodes: &[VertexId]) -> Vec<&str> {
        nodes.iter().map(|&v| self.vertices.name(v)).collect()
    }
}

/// Live partial paths keyed by final vertex, with multiplicities.
type PartialsByEnd = HashMap<VertexId, Vec<(PathNodes, u64)>>;

/// Counts all causal paths of length `1..=max_length` in `graph`.
pub fn extract_causal_paths(
    graph: &TemporalGraph,
    delta: u64,
    max_length: usize,
) -> Result<PathCollection> {
    extract_causal_paths_capped(graph, delta, max_length, DEFAULT_PARTIAL_PATH_CAP)
}

/// Like [`extract_causal_paths`] with an explicit bound on the number of
/// partial paths kept alive inside the `delta` window.
pub fn extract_causal_paths_capped(
    graph: &TemporalGraph,
    delta: u64,
    max_length: usize,
    cap: usize,
) -> Result<PathCollection> {
    if delta < 1 {
        return Err(Error::invalid("delta must be at least 1"));
    }
    if max_length < 1 {
        return Err(Error::invalid("maximum path length must be at least 1"));
    }

    let edges = graph.edges();
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by_key(|&i| edges[i].time);

    let mut counts: Vec<HashMap<PathNodes, u64>> = vec![HashMap::new(); max_length];
    // Partial paths (length < max_length) grouped by timestamp of their last
    // edge and by their final vertex. Only timestamps within `delta` of the
    // current one are retained.
    let mut window: VecDeque<(u64, PartialsByEnd)> = VecDeque::new();
    let mut active = 0usize;

    let mut start = 0;
    while start < order.len() {
        let time = edges[order[start]].time;
        let mut end = start;
        while end < order.len() && edges[order[end]].time == time {
            end += 1;
        }

        while let Some((t, state)) = window.front() {
            if time - t > delta {
                active -= state.values().map(Vec::len).sum::<usize>();
                window.pop_front();
            } else {
                break;
            }
        }

        let mut fresh: HashMap<VertexId, HashMap<PathNodes, u64>> = HashMap::new();
        for &i in &order[start..end] {
            let e = edges[i];
            let base = vec![e.source, e.target];
            *counts[0].entry(base.clone()).or_insert(0) += 1;
            if max_length == 1 {
                continue;
            }
            let slot = fresh.entry(e.target).or_default();
            *slot.entry(base).or_insert(0) += 1;
            for (_, state) in &window {
                let Some(ending_here) = state.get(&e.source) else {
                    continue;
                };
                for (prefix, c) in ending_here {
                    let mut extended = Vec::with_capacity(prefix.len() + 1);
                    extended.extend_from_slice(prefix);
                    extended.push(e.target);
                    let len = extended.len() - 1;
                    if len < max_length {
                        *slot.entry(extended.clone()).or_insert(0) += c;
                    }
                    *counts[len - 1].entry(extended).or_insert(0) += c;
                }
            }
        }

        if max_length > 1 {
            let state: HashMap<VertexId, Vec<(PathNodes, u64)>> = fresh
                .into_iter()
                .map(|(v, m)| (v, m.into_iter().collect()))
                .collect();
            active += state.values().map(Vec::len).sum::<usize>();
            if active > cap {
                return Err(Error::ResourceLimit { active, cap });
            }
            window.push_back((time, state));
        }
        start = end;
    }

    Ok(PathCollection {
        vertices: Arc::clone(graph.vertices()),
        by_length: counts.into_iter().map(|m| m.into_iter().collect()).collect(),
        delta: Some(delta),
    })
}

/// Counts every contiguous sub-path (up to `max_length` edges) of each
/// observed trajectory, weighted by the trajectory's frequency.
pub fn window_trajectories<S: AsRef<str>>(
    trajectories: &[(Vec<S>, u64)],
    max_length: usize,
) -> Result<PathCollection> {
    let mut table = VertexTable::new();
    let mut encoded = Vec::with_capacity(trajectories.len());
    for (nodes, freq) in trajectories {
        if nodes.len() < 2 {
            return Err(Error::InvalidData(
                "trajectory must contain at least two nodes".into(),
            ));
        }
        let ids: Vec<VertexId> = nodes.iter().map(|n| table.intern(n.as_ref())).collect();
        encoded.push((ids, *freq));
    }
    window_encoded(Arc::new(table), &encoded, max_length)
}

/// Windowing over trajectories already expressed in the ids of `vertices`.
pub fn window_encoded(
    vertices: Arc<VertexTable>,
    trajectories: &[(PathNodes, u64)],
    max_length: usize,
) -> Result<PathCollection> {
    let mut pc = PathCollection::empty(vertices, max_length, None)?;
    for (nodes, freq) in trajectories {
        if nodes.len() < 2 {
            return Err(Error::InvalidData(
                "trajectory must contain at least two nodes".into(),
            ));
        }
        if *freq == 0 {
            continue;
        }
        let longest = (nodes.len() - 1).min(max_length);
        for len in 1..=longest {
            for window in nodes.windows(len + 1) {
                *pc.by_length[len - 1].entry(window.to_vec()).or_insert(0) += freq;
            }
        }
    }
    Ok(pc)
}

/// Splits path occurrences into a training and a test collection.
///
/// Every occurrence independently lands in the training part with
/// probability `train_fraction`; for a path with count `c` this is a single
/// binomial draw.
pub fn split(
    pc: &PathCollection,
    train_fraction: f64,
    seed: u64,
) -> Result<(PathCollection, PathCollection)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::invalid(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    if pc.is_empty() {
        return Err(Error::invalid("cannot split an empty path collection"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = PathCollection::empty(Arc::clone(&pc.vertices), pc.max_length(), pc.delta)?;
    let mut test = train.clone();
    for (i, paths) in pc.by_length.iter().enumerate() {
        for (nodes, &count) in paths {
            let k = Binomial::new(count, train_fraction)
                .expect("fraction checked above")
                .sample(&mut rng);
            if k > 0 {
                train.by_length[i].insert(nodes.clone(), k);
            }
            if count > k {
                test.by_length[i].insert(nodes.clone(), count - k);
            }
        }
    }
    Ok((train, test))
}
