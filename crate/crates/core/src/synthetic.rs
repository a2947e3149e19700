//! Temporal networks with planted clusters in their causal topology.
//!
//! The static topology is a random regular graph, so clusters are invisible
//! in the aggregate. Two-edge sequences `(v0,v1;t), (v1,v2;t+1)` are emitted
//! at well separated base times, and timestamps are then swapped between
//! sequences sharing a middle vertex so that length-two causal paths
//! preferentially start and end in the middle vertex's cluster.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::graph::{TemporalGraph, TemporalGraphBuilder, VertexId};
use crate::layout::Layout;
use crate::paths::PathCollection;

const MAX_PAIRING_ATTEMPTS: usize = 10_000;
pub const CLUSTER_COUNT: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterModelParams {
    pub n: usize,
    pub degree: usize,
    pub num_sequences: usize,
    pub seed: u64,
    /// Swap attempts; one per sequence when unset.
    pub swap_attempts: Option<usize>,
    /// Fraction of sequences forced to start or end at their cluster's hub.
    /// Zero disables hubs.
    pub hub_fraction: f64,
}

impl ClusterModelParams {
    pub fn new(n: usize, degree: usize, num_sequences: usize, seed: u64) -> Self {
        Self {
            n,
            degree,
            num_sequences,
            seed,
            swap_attempts: None,
            hub_fraction: 0.0,
        }
    }

    pub fn with_hubs(mut self, fraction: f64) -> Self {
        self.hub_fraction = fraction;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n < 6 || !self.n.is_multiple_of(CLUSTER_COUNT) {
            return Err(Error::invalid("n must be at least 6 and divisible by 3"));
        }
        if self.degree < 2 {
            return Err(Error::invalid("degree must be at least 2"));
        }
        if self.num_sequences < 1 {
            return Err(Error::invalid("at least one sequence is required"));
        }
        if !(0.0..=1.0).contains(&self.hub_fraction) {
            return Err(Error::invalid("hub fraction must lie in [0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ClusterGraph {
    pub graph: TemporalGraph,
    /// Cluster index in `0..3` per vertex name.
    pub clusters: BTreeMap<String, u8>,
    /// One designated hub per cluster (only meaningful when hubs are enabled).
    pub hubs: Vec<String>,
    pub swaps_performed: usize,
    pub swaps_skipped: usize,
}

/// Random simple `degree`-regular graph on `n` vertices via the pairing
/// model, rejecting pairings with loops or multi-edges.
pub fn random_regular_graph<R: Rng>(n: usize, degree: usize, rng: &mut R) -> Result<Vec<Vec<usize>>> {
    if degree >= n || !(n * degree).is_multiple_of(2) {
        return Err(Error::Generation(format!(
            "no simple {degree}-regular graph on {n} vertices exists"
        )));
    }
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
    'attempt: for _ in 0..MAX_PAIRING_ATTEMPTS {
        stubs.shuffle(rng);
        let mut adjacency = vec![Vec::with_capacity(degree); n];
        let mut seen = BTreeSet::new();
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || !seen.insert((a, b)) {
                continue 'attempt;
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        return Ok(adjacency);
    }
    Err(Error::Generation(format!(
        "no simple pairing found after {MAX_PAIRING_ATTEMPTS} attempts"
    )))
}

struct Sequence {
    first: usize,
    second: usize,
}

pub fn generate_cluster_graph(params: &ClusterModelParams) -> Result<ClusterGraph> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.n;
    let adjacency = random_regular_graph(n, params.degree, &mut rng)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let size = n / CLUSTER_COUNT;
    let mut cluster = vec![0u8; n];
    for (rank, &v) in order.iter().enumerate() {
        cluster[v] = (rank / size) as u8;
    }
    let hubs: Vec<usize> = (0..CLUSTER_COUNT).map(|c| order[c * size]).collect();

    // (source, target, time) with vertex indices
    let mut edges: Vec<(usize, usize, u64)> = Vec::with_capacity(2 * params.num_sequences);
    let mut sequences = Vec::with_capacity(params.num_sequences);
    for i in 0..params.num_sequences {
        let t = 3 * i as u64;
        let (v0, v1, v2) = if params.hub_fraction > 0.0 && rng.gen_bool(params.hub_fraction) {
            let hub = hubs[rng.gen_range(0..CLUSTER_COUNT)];
            let mid = *adjacency[hub].choose(&mut rng).expect("regular graph has edges");
            let other = pick_other(&adjacency[mid], hub, &mut rng);
            if rng.gen_bool(0.5) {
                (hub, mid, other)
            } else {
                (other, mid, hub)
            }
        } else {
            let v1 = rng.gen_range(0..n);
            let v0 = *adjacency[v1].choose(&mut rng).expect("regular graph has edges");
            (v0, v1, pick_other(&adjacency[v1], v0, &mut rng))
        };
        sequences.push(Sequence {
            first: edges.len(),
            second: edges.len() + 1,
        });
        edges.push((v0, v1, t));
        edges.push((v1, v2, t + 1));
    }

    let mut by_middle: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, s) in sequences.iter().enumerate() {
        by_middle.entry(edges[s.first].1).or_default().push(i);
    }
    let attempts = params.swap_attempts.unwrap_or(params.num_sequences);
    let mut performed = 0;
    for a in 0..attempts {
        let s = &sequences[a % sequences.len()];
        let mid = edges[s.first].1;
        let c = cluster[mid];
        // A: in-cluster source, out-of-cluster target; B: the reverse
        let mut kind_a = Vec::new();
        let mut kind_b = Vec::new();
        for &j in &by_middle[&mid] {
            let src = cluster[edges[sequences[j].first].0];
            let dst = cluster[edges[sequences[j].second].1];
            if src == c && dst != c {
                kind_a.push(j);
            } else if src != c && dst == c {
                kind_b.push(j);
            }
        }
        let (Some(&ja), Some(&jb)) = (kind_a.choose(&mut rng), kind_b.choose(&mut rng)) else {
            continue;
        };
        let (ea, eb) = (sequences[ja].second, sequences[jb].second);
        let (ta, tb) = (edges[ea].2, edges[eb].2);
        edges[ea].2 = tb;
        edges[eb].2 = ta;
        sequences[ja].second = eb;
        sequences[jb].second = ea;
        performed += 1;
    }
    if attempts > 0 && performed == 0 {
        return Err(Error::Generation(format!(
            "none of {attempts} swap attempts found a suitable pair of sequences"
        )));
    }

    let names: Vec<String> = (0..n).map(|v| v.to_string()).collect();
    let mut builder = TemporalGraphBuilder::new();
    for name in &names {
        builder.add_vertex(name);
    }
    for &(s, t, time) in &edges {
        builder.add_edge(&names[s], &names[t], time);
    }
    Ok(ClusterGraph {
        graph: builder.build(),
        clusters: names.iter().cloned().zip(cluster).collect(),
        hubs: hubs.iter().map(|&h| names[h].clone()).collect(),
        swaps_performed: performed,
        swaps_skipped: attempts - performed,
    })
}

fn pick_other<R: Rng>(neighbours: &[usize], avoid: usize, rng: &mut R) -> usize {
    let candidates: Vec<usize> = neighbours.iter().copied().filter(|&v| v != avoid).collect();
    *candidates.choose(rng).expect("degree >= 2 leaves another neighbour")
}

/// Mean pairwise distance within clusters divided by the mean pairwise
/// distance across clusters.
pub fn intra_inter_distance_ratio(layout: &Layout, clusters: &BTreeMap<String, u8>) -> Result<f64> {
    let distinct: BTreeSet<u8> = clusters.values().copied().collect();
    if distinct.len() < 2 {
        return Err(Error::invalid("at least two clusters are required"));
    }
    let members: Vec<(Point, u8)> = clusters
        .iter()
        .map(|(v, &c)| {
            layout
                .position(v)
                .map(|p| (p, c))
                .ok_or_else(|| Error::UnknownVertex(v.clone()))
        })
        .collect::<Result<_>>()?;
    let (mut intra, mut n_intra, mut inter, mut n_inter) = (0.0, 0usize, 0.0, 0usize);
    for (i, &(p, c)) in members.iter().enumerate() {
        for &(q, d) in &members[i + 1..] {
            if c == d {
                intra += p.distance(q);
                n_intra += 1;
            } else {
                inter += p.distance(q);
                n_inter += 1;
            }
        }
    }
    if n_intra == 0 {
        return Err(Error::invalid("no cluster has two members"));
    }
    let inter = inter / n_inter as f64;
    if inter == 0.0 {
        return Err(Error::DegenerateLayout("clusters coincide".into()));
    }
    Ok(intra / n_intra as f64 / inter)
}

/// Length-two causal paths classified by whether they start and end in the
/// same cluster, together with the numbers expected if the in- and out-edges
/// at each middle vertex were paired at random in proportion to the
/// aggregate edge weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterPathStats {
    pub within: u64,
    pub cross: u64,
    pub expected_within: f64,
    pub expected_cross: f64,
}

impl ClusterPathStats {
    /// Observed within-to-cross ratio.
    pub fn ratio(&self) -> f64 {
        self.within as f64 / self.cross as f64
    }

    /// Observed ratio relative to the ratio expected from the aggregate.
    pub fn normalized_ratio(&self) -> f64 {
        self.ratio() / (self.expected_within / self.expected_cross)
    }
}

pub fn cluster_path_stats(pc: &PathCollection, clusters: &BTreeMap<String, u8>) -> Result<ClusterPathStats> {
    let table = pc.vertices();
    let cluster_of: Vec<Option<u8>> = table.names().iter().map(|n| clusters.get(n).copied()).collect();
    let get = |v: VertexId| {
        cluster_of[v as usize].ok_or_else(|| Error::UnknownVertex(table.name(v).to_string()))
    };

    let mut incoming: HashMap<VertexId, Vec<(VertexId, u64)>> = HashMap::new();
    let mut outgoing: HashMap<VertexId, Vec<(VertexId, u64)>> = HashMap::new();
    for (p, w) in pc.of_length(1) {
        outgoing.entry(p[0]).or_default().push((p[1], w));
        incoming.entry(p[1]).or_default().push((p[0], w));
    }
    let mut same_prob: HashMap<VertexId, f64> = HashMap::new();

    let mut stats = ClusterPathStats {
        within: 0,
        cross: 0,
        expected_within: 0.0,
        expected_cross: 0.0,
    };
    for (p, count) in pc.of_length(2) {
        if get(p[0])? == get(p[2])? {
            stats.within += count;
        } else {
            stats.cross += count;
        }
        let q = match same_prob.get(&p[1]) {
            Some(&q) => q,
            None => {
                let ins = incoming.get(&p[1]).map(Vec::as_slice).unwrap_or(&[]);
                let outs = outgoing.get(&p[1]).map(Vec::as_slice).unwrap_or(&[]);
                let mut same = 0.0;
                let mut total = 0.0;
                for &(a, wa) in ins {
                    for &(c, wc) in outs {
                        let w = (wa * wc) as f64;
                        total += w;
                        if get(a)? == get(c)? {
                            same += w;
                        }
                    }
                }
                let q = if total > 0.0 { same / total } else { 0.0 };
                same_prob.insert(p[1], q);
                q
            }
        };
        stats.expected_within += count as f64 * q;
        stats.expected_cross += count as f64 * (1.0 - q);
    }
    Ok(stats)
}
