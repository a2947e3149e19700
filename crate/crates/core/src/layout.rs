//! Time-aware force-directed layout.
//!
//! Attractive coefficients from the orders `1..=K` of the De Bruijn models
//! are superimposed into a single [`ForceMap`]; every order-`k` edge standing
//! for the path `v0 ... vk` pulls `v0` and `vk` together with strength
//! `alpha_k * w`. The coefficients then drive a Fruchterman–Reingold
//! many-body simulation: repulsion `c^2 / d` between all vertex pairs,
//! attraction `A * d^2 / c` along coefficient pairs, displacement capped by a
//! linearly cooling temperature.
//!
//! Every attraction entry acts on both endpoints with opposite signs, and the
//! displacements of one iteration are all computed from the positions of the
//! previous iteration. Results are bit-reproducible for fixed inputs and seed
//! on any platform with IEEE-754 double arithmetic (no fused multiply-add is
//! used, and all reductions run in a fixed order).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::graph::{AggregateGraph, VertexId, VertexTable};
use crate::higher_order::{default_alphas, HigherOrderGraph};
use crate::paths::PathCollection;

/// Pairs closer than this are treated as coincident.
pub const MIN_SEPARATION: f64 = 1e-9;

/// Superimposed attraction coefficients `A[v0, vk]` between base vertices.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ForceMap {
    attraction: BTreeMap<(VertexId, VertexId), f64>,
}

impl ForceMap {
    pub fn get(&self, source: VertexId, target: VertexId) -> f64 {
        self.attraction.get(&(source, target)).copied().unwrap_or(0.0)
    }

    pub fn entries(&self) -> &BTreeMap<(VertexId, VertexId), f64> {
        &self.attraction
    }

    pub fn len(&self) -> usize {
        self.attraction.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attraction.is_empty()
    }

    fn add(&mut self, source: VertexId, target: VertexId, amount: f64) {
        *self.attraction.entry((source, target)).or_insert(0.0) += amount;
    }

    /// First-order coefficients taken straight from an aggregate graph.
    pub fn from_aggregate(graph: &AggregateGraph, uniform_weights: bool) -> Self {
        let mut forces = ForceMap::default();
        for (&(s, t), &w) in graph.weights() {
            forces.add(s, t, if uniform_weights { 1.0 } else { w as f64 });
        }
        forces
    }

    /// Collapses directed entries onto unordered pairs, dropping self pairs.
    fn symmetric_pairs(&self) -> Vec<(usize, usize, f64)> {
        let mut merged: BTreeMap<(VertexId, VertexId), f64> = BTreeMap::new();
        for (&(s, t), &a) in &self.attraction {
            if s != t {
                *merged.entry((s.min(t), s.max(t))).or_insert(0.0) += a;
            }
        }
        merged
            .into_iter()
            .map(|((i, j), a)| (i as usize, j as usize, a))
            .collect()
    }
}

/// Superimposes attraction coefficients of orders `1..=max_order`.
///
/// `alphas` supplies `alpha_k` for `k >= 2`; the first order always enters
/// with coefficient 1, and orders without an entry contribute nothing. With
/// `uniform_weights` every distinct path contributes weight 1 instead of its
/// count.
pub fn superimpose_forces(
    pc: &PathCollection,
    max_order: usize,
    alphas: &BTreeMap<usize, f64>,
    uniform_weights: bool,
) -> Result<ForceMap> {
    let mut forces = ForceMap::default();
    for k in 1..=max_order {
        let alpha = if k == 1 {
            1.0
        } else {
            alphas.get(&k).copied().unwrap_or(0.0)
        };
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::invalid(format!("alpha_{k} must be finite and non-negative")));
        }
        let model = HigherOrderGraph::build(pc, k)?;
        if alpha == 0.0 {
            continue;
        }
        for ((source, target), &w) in model.edges() {
            let (v0, vk) = HigherOrderGraph::endpoints(source, target);
            let w = if uniform_weights { 1.0 } else { w as f64 };
            forces.add(v0, vk, alpha * w);
        }
    }
    Ok(forces)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutConfig {
    pub max_order: usize,
    pub iterations: usize,
    /// Explicit `alpha_k` overrides; orders not listed use `1 / m_k`.
    #[serde(default)]
    pub alphas: BTreeMap<usize, f64>,
    /// Ideal edge length; `sqrt(1 / |V|)` when unset.
    pub ideal_length: Option<f64>,
    pub initial_temperature: f64,
    pub seed: u64,
    pub uniform_path_weights: bool,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        Self {
            max_order: 1,
            iterations: 1000,
            alphas: BTreeMap::new(),
            ideal_length: None,
            initial_temperature: 0.1,
            seed: 0,
            uniform_path_weights: true,
        }
    }
}

impl LayoutConfig {
    pub fn with_max_order(mut self, k: usize) -> Self {
        self.max_order = k;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn with_alpha(mut self, k: usize, alpha: f64) -> Self {
        self.alphas.insert(k, alpha);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.max_order < 1 {
            return Err(Error::invalid("maximum order must be at least 1"));
        }
        if self.iterations < 1 {
            return Err(Error::invalid("iterations must be at least 1"));
        }
        if let Some(c) = self.ideal_length {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::invalid("ideal length must be positive"));
            }
        }
        if !(self.initial_temperature.is_finite() && self.initial_temperature > 0.0) {
            return Err(Error::invalid("initial temperature must be positive"));
        }
        if let Some((k, _)) = self.alphas.iter().find(|(_, a)| !(a.is_finite() && **a >= 0.0)) {
            return Err(Error::invalid(format!("alpha_{k} must be finite and non-negative")));
        }
        Ok(())
    }

    /// Concrete coefficients for `k = 2..=max_order`.
    pub fn resolve_alphas(&self, pc: &PathCollection) -> Result<BTreeMap<usize, f64>> {
        let mut alphas = default_alphas(pc, self.max_order)?;
        for (k, a) in &self.alphas {
            if (2..=self.max_order).contains(k) {
                alphas.insert(*k, *a);
            }
        }
        Ok(alphas)
    }
}

/// The configuration that produced a layout, with every default resolved,
/// plus a digest of the input data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config: LayoutConfig,
    pub fingerprint: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Layout {
    positions: BTreeMap<String, Point>,
    provenance: Option<Provenance>,
}

impl Layout {
    pub fn new(positions: BTreeMap<String, Point>, provenance: Option<Provenance>) -> Self {
        Self {
            positions,
            provenance,
        }
    }

    pub fn from_points(vertices: &VertexTable, points: &[Point], provenance: Option<Provenance>) -> Self {
        let positions = vertices
            .names()
            .iter()
            .cloned()
            .zip(points.iter().copied())
            .collect();
        Self::new(positions, provenance)
    }

    pub fn positions(&self) -> &BTreeMap<String, Point> {
        &self.positions
    }

    pub fn position(&self, vertex: &str) -> Option<Point> {
        self.positions.get(vertex).copied()
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Positions indexed by the ids of `vertices`; fails on a missing vertex.
    pub fn resolve(&self, vertices: &VertexTable) -> Result<Vec<Point>> {
        vertices
            .names()
            .iter()
            .map(|n| {
                self.positions
                    .get(n)
                    .copied()
                    .ok_or_else(|| Error::UnknownVertex(n.clone()))
            })
            .collect()
    }
}

/// Runs the full time-aware layout over all vertices of `pc`.
pub fn compute_layout(pc: &PathCollection, cfg: &LayoutConfig) -> Result<Layout> {
    cfg.validate()?;
    if cfg.max_order > pc.max_length() {
        return Err(Error::invalid(format!(
            "maximum order {} exceeds path length {} of the collection",
            cfg.max_order,
            pc.max_length()
        )));
    }
    let alphas = cfg.resolve_alphas(pc)?;
    let forces = superimpose_forces(pc, cfg.max_order, &alphas, cfg.uniform_path_weights)?;
    let resolved = LayoutConfig {
        alphas,
        ..cfg.clone()
    };
    layout_with_forces(pc.vertices(), &forces, resolved, fingerprint_paths(pc))
}

/// Plain first-order Fruchterman–Reingold layout of an aggregate graph.
pub fn first_order_layout(graph: &AggregateGraph, cfg: &LayoutConfig) -> Result<Layout> {
    cfg.validate()?;
    let forces = ForceMap::from_aggregate(graph, cfg.uniform_path_weights);
    let resolved = LayoutConfig {
        max_order: 1,
        alphas: BTreeMap::new(),
        ..cfg.clone()
    };
    layout_with_forces(graph.vertices(), &forces, resolved, fingerprint_aggregate(graph))
}

fn layout_with_forces(
    vertices: &VertexTable,
    forces: &ForceMap,
    mut cfg: LayoutConfig,
    fingerprint: String,
) -> Result<Layout> {
    if vertices.is_empty() {
        return Err(Error::invalid("cannot lay out an empty vertex set"));
    }
    let ideal = cfg
        .ideal_length
        .unwrap_or_else(|| (1.0 / vertices.len() as f64).sqrt());
    cfg.ideal_length = Some(ideal);
    let points = simulate(vertices, forces, &cfg, ideal)?;
    Ok(Layout::from_points(
        vertices,
        &points,
        Some(Provenance {
            config: cfg,
            fingerprint,
        }),
    ))
}

/// Uniform random positions in the unit square.
pub fn initial_positions(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let x = rng.gen::<f64>();
            let y = rng.gen::<f64>();
            Point::new(x, y)
        })
        .collect()
}

/// Temperature (displacement cap) applied during iteration `i` of `n`.
pub fn temperature(initial: f64, i: usize, n: usize) -> f64 {
    initial * (1.0 - i as f64 / n as f64)
}

fn simulate(vertices: &VertexTable, forces: &ForceMap, cfg: &LayoutConfig, ideal: f64) -> Result<Vec<Point>> {
    let n = vertices.len();
    let pairs = forces.symmetric_pairs();
    let mut pos = initial_positions(n, cfg.seed);
    let mut disp = vec![Point::ZERO; n];

    for iteration in 0..cfg.iterations {
        let temp = temperature(cfg.initial_temperature, iteration, cfg.iterations);
        accumulate_repulsion(&pos, ideal, cfg.seed, &mut disp);
        for &(i, j, a) in &pairs {
            let (unit, dist) = separation(&pos, i, j, cfg.seed);
            let f = unit * (a * dist * dist / ideal);
            disp[i] += f;
            disp[j] -= f;
        }
        for (v, (p, d)) in pos.iter_mut().zip(disp.iter_mut()).enumerate() {
            let len = d.norm();
            if len > 0.0 {
                *p += *d / len * len.min(temp);
            }
            if !p.is_finite() {
                return Err(Error::NonFinite {
                    iteration,
                    vertex: vertices.name(v as VertexId).to_string(),
                });
            }
            *d = Point::ZERO;
        }
    }
    Ok(pos)
}

/// Repulsive displacement acting on each vertex for the given positions.
pub fn repulsive_displacements(positions: &[Point], ideal_length: f64, seed: u64) -> Vec<Point> {
    let mut disp = vec![Point::ZERO; positions.len()];
    accumulate_repulsion(positions, ideal_length, seed, &mut disp);
    disp
}

fn accumulate_repulsion(pos: &[Point], ideal: f64, seed: u64, disp: &mut [Point]) {
    let k2 = ideal * ideal;
    for i in 0..pos.len() {
        for j in i + 1..pos.len() {
            let (unit, dist) = separation(pos, i, j, seed);
            let f = unit * (k2 / dist);
            disp[i] -= f;
            disp[j] += f;
        }
    }
}

/// Unit vector from `i` towards `j` and their distance. Coincident pairs get
/// a pseudo-random direction fixed by `(i, j, seed)`.
fn separation(pos: &[Point], i: usize, j: usize, seed: u64) -> (Point, f64) {
    let delta = pos[j] - pos[i];
    let dist = delta.norm();
    if dist < MIN_SEPARATION {
        (pair_direction(i, j, seed), MIN_SEPARATION)
    } else {
        (delta / dist, dist)
    }
}

fn pair_direction(i: usize, j: usize, seed: u64) -> Point {
    let mut h = seed ^ ((i as u64) << 32 | j as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    // splitmix64 finaliser
    h = (h ^ (h >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    h ^= h >> 31;
    let angle = (h >> 11) as f64 / (1u64 << 53) as f64 * std::f64::consts::TAU;
    Point::new(angle.cos(), angle.sin())
}

fn hex_digest(hasher: Sha256) -> String {
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// SHA-256 over the vertex names and all path counts of `pc`.
pub fn fingerprint_paths(pc: &PathCollection) -> String {
    let mut h = Sha256::new();
    for name in pc.vertices().names() {
        h.update(name.as_bytes());
        h.update([0]);
    }
    for (path, count) in pc.iter() {
        h.update([1]);
        for v in path {
            h.update(v.to_le_bytes());
        }
        h.update(count.to_le_bytes());
    }
    hex_digest(h)
}

pub fn fingerprint_aggregate(graph: &AggregateGraph) -> String {
    let mut h = Sha256::new();
    for name in graph.vertices().names() {
        h.update(name.as_bytes());
        h.update([0]);
    }
    for (&(s, t), &w) in graph.weights() {
        h.update([1]);
        h.update(s.to_le_bytes());
        h.update(t.to_le_bytes());
        h.update(w.to_le_bytes());
    }
    hex_digest(h)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::TemporalGraph;
    use crate::paths::{extract_causal_paths, window_trajectories};

    fn toy_paths() -> PathCollection {
        let tg = TemporalGraph::from_edges([("b", "c", 1), ("c", "d", 2), ("a", "c", 3), ("c", "e", 4)]);
        extract_causal_paths(&tg, 1, 2).unwrap()
    }

    fn id(pc: &PathCollection, n: &str) -> VertexId {
        pc.vertices().id(n).unwrap()
    }

    #[test]
    fn second_order_adds_endpoint_forces() {
        let pc = toy_paths();
        let alphas = BTreeMap::from([(2, 0.5)]);
        let first = superimpose_forces(&pc, 1, &alphas, true).unwrap();
        let both = superimpose_forces(&pc, 2, &alphas, true).unwrap();
        assert_eq!(first.len(), 4);
        assert_eq!(both.len(), 6);
        assert_eq!(both.get(id(&pc, "b"), id(&pc, "d")), 0.5);
        assert_eq!(both.get(id(&pc, "a"), id(&pc, "e")), 0.5);
        for (&(s, t), &a) in first.entries() {
            assert_eq!(both.get(s, t), a);
        }
    }

    #[test]
    fn first_order_only_equals_edge_weights() {
        let tg = TemporalGraph::from_edges([("a", "b", 1), ("a", "b", 2), ("b", "c", 3)]);
        let pc = extract_causal_paths(&tg, 1, 2).unwrap();
        let f = superimpose_forces(&pc, 1, &BTreeMap::new(), false).unwrap();
        assert_eq!(f, ForceMap::from_aggregate(&tg.aggregate(), false));
        let zero = superimpose_forces(&pc, 2, &BTreeMap::from([(2, 0.0)]), false).unwrap();
        assert_eq!(zero, f);
    }

    #[test]
    fn raw_weights_accumulate() {
        let pc = window_trajectories(&[(vec!["a", "b", "c"], 2)], 2).unwrap();
        let f = superimpose_forces(&pc, 2, &BTreeMap::from([(2, 1.0)]), false).unwrap();
        assert_eq!(f.get(id(&pc, "a"), id(&pc, "c")), 2.0);
        assert_eq!(f.get(id(&pc, "a"), id(&pc, "b")), 2.0);
    }

    #[test]
    fn negative_alpha_is_rejected() {
        let pc = toy_paths();
        assert!(superimpose_forces(&pc, 2, &BTreeMap::from([(2, -1.0)]), true).is_err());
        let cfg = LayoutConfig::default().with_max_order(2).with_alpha(2, f64::NAN);
        assert!(compute_layout(&pc, &cfg).is_err());
    }

    #[test]
    fn two_vertices_settle_at_ideal_length() {
        let pc = window_trajectories(&[(vec!["a", "b"], 1)], 1).unwrap();
        let cfg = LayoutConfig::default().with_seed(11);
        let layout = compute_layout(&pc, &cfg).unwrap();
        let d = layout.position("a").unwrap().distance(layout.position("b").unwrap());
        let c = (0.5f64).sqrt();
        assert!((d - c).abs() / c < 0.05, "distance {d} vs ideal {c}");
    }

    #[test]
    fn isolated_vertex_stays_put() {
        let table = Arc::new(VertexTable::from_names(["solo"]).unwrap());
        let pc = PathCollection::empty(table, 1, None).unwrap();
        let layout = compute_layout(&pc, &LayoutConfig::default().with_seed(5)).unwrap();
        assert_eq!(layout.position("solo").unwrap(), initial_positions(1, 5)[0]);
    }

    #[test]
    fn coincident_vertices_separate() {
        let pc = window_trajectories(&[(vec!["a", "b"], 1)], 1).unwrap();
        let pos = vec![Point::new(0.3, 0.3); 2];
        let r = repulsive_displacements(&pos, 0.5, 1);
        assert!(r[0].norm() > 0.0);
        assert_eq!(r[0], -r[1]);
        // a full run from any seed stays finite
        for seed in 0..5 {
            assert!(compute_layout(&pc, &LayoutConfig::default().with_seed(seed)).is_ok());
        }
    }

    #[test]
    fn empty_vertex_set_is_rejected() {
        let pc = PathCollection::empty(Arc::new(VertexTable::new()), 1, None).unwrap();
        assert!(compute_layout(&pc, &LayoutConfig::default()).is_err());
    }

    #[test]
    fn order_above_collection_length_is_rejected() {
        let pc = toy_paths();
        assert!(compute_layout(&pc, &LayoutConfig::default().with_max_order(3)).is_err());
    }

    #[test]
    fn cooling_is_monotone() {
        let temps: Vec<f64> = (0..100).map(|i| temperature(0.1, i, 100)).collect();
        assert!(temps.windows(2).all(|w| w[1] <= w[0]));
        assert!(temps.iter().all(|&t| t > 0.0));
    }

    #[test]
    fn provenance_records_resolved_defaults() {
        let pc = toy_paths();
        let layout = compute_layout(&pc, &LayoutConfig::default().with_max_order(2)).unwrap();
        let p = layout.provenance().unwrap();
        assert_eq!(p.config.alphas[&2], 0.5);
        assert_eq!(p.config.ideal_length, Some((1.0f64 / 5.0).sqrt()));
        assert_eq!(p.fingerprint.len(), 64);
    }
}
