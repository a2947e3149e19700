//! Layout quality measures: edge crossings, causal path dispersion, temporal
//! closeness centrality and closeness eccentricity.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::graph::VertexId;
use crate::layout::Layout;
use crate::paths::PathCollection;

/// Coordinates are snapped to multiples of `2^-GRID_BITS` before exact
/// orientation tests.
pub const GRID_BITS: i32 = 30;
const GRID_LIMIT: f64 = (1u64 << 62) as f64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub edge_crossings: u64,
    pub dispersion: f64,
    /// Keyed by the percentile `gamma`.
    pub eccentricity: BTreeMap<String, f64>,
    pub closeness: BTreeMap<String, f64>,
}

/// Arithmetic mean of a multiset of points.
pub fn barycentre(points: &[Point]) -> Result<Point> {
    if points.is_empty() {
        return Err(Error::invalid("barycentre of an empty point set"));
    }
    let sum = points.iter().fold(Point::ZERO, |acc, &p| acc + p);
    Ok(sum / points.len() as f64)
}

/// A point on the integer grid used by the exact predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
}

impl GridPoint {
    pub fn snap(p: Point) -> Result<Self> {
        let scale = (2.0f64).powi(GRID_BITS);
        let x = (p.x * scale).round();
        let y = (p.y * scale).round();
        if !(x.abs() < GRID_LIMIT && y.abs() < GRID_LIMIT) {
            return Err(Error::DegenerateLayout(format!(
                "coordinate ({}, {}) outside the exact-arithmetic range",
                p.x, p.y
            )));
        }
        Ok(Self {
            x: x as i64,
            y: y as i64,
        })
    }
}

/// Sign of the orientation of `(a, b, c)`: positive for a left turn.
pub fn orientation(a: GridPoint, b: GridPoint, c: GridPoint) -> i32 {
    let abx = (b.x - a.x) as i128;
    let aby = (b.y - a.y) as i128;
    let acx = (c.x - a.x) as i128;
    let acy = (c.y - a.y) as i128;
    match (abx * acy - aby * acx).signum() {
        1 => 1,
        -1 => -1,
        _ => 0,
    }
}

/// Whether segments `p1p2` and `q1q2` cross: their interiors meet in a
/// single point, or they are collinear and overlap in a stretch of positive
/// length.
pub fn segments_cross(p1: GridPoint, p2: GridPoint, q1: GridPoint, q2: GridPoint) -> bool {
    let o1 = orientation(p1, p2, q1);
    let o2 = orientation(p1, p2, q2);
    let o3 = orientation(q1, q2, p1);
    let o4 = orientation(q1, q2, p2);
    if (o1 == 0 && o2 == 0) || (o3 == 0 && o4 == 0) {
        return collinear_overlap(p1, p2, q1, q2);
    }
    o1 * o2 < 0 && o3 * o4 < 0
}

fn collinear_overlap(p1: GridPoint, p2: GridPoint, q1: GridPoint, q2: GridPoint) -> bool {
    // zero-length segments have empty interiors
    if p1 == p2 || q1 == q2 {
        return false;
    }
    let axis_x = (p2.x - p1.x).abs() >= (p2.y - p1.y).abs();
    let key = |g: GridPoint| if axis_x { g.x } else { g.y };
    let (a0, a1) = (key(p1).min(key(p2)), key(p1).max(key(p2)));
    let (b0, b1) = (key(q1).min(key(q2)), key(q1).max(key(q2)));
    a0.max(b0) < a1.min(b1)
}

/// Number of unordered edge pairs whose drawn segments cross.
///
/// Self-loops are ignored, as are pairs sharing an endpoint vertex. The two
/// orientations of an edge denote the same segment and are counted once.
pub fn edge_crossing<S: AsRef<str>>(layout: &Layout, edges: &[(S, S)]) -> Result<u64> {
    let mut segments: BTreeMap<(&str, &str), (GridPoint, GridPoint)> = BTreeMap::new();
    for (s, t) in edges {
        let (s, t) = (s.as_ref(), t.as_ref());
        if s == t {
            continue;
        }
        let key = if s < t { (s, t) } else { (t, s) };
        if segments.contains_key(&key) {
            continue;
        }
        let ps = layout.position(s).ok_or_else(|| Error::UnknownVertex(s.to_string()))?;
        let pt = layout.position(t).ok_or_else(|| Error::UnknownVertex(t.to_string()))?;
        segments.insert(key, (GridPoint::snap(ps)?, GridPoint::snap(pt)?));
    }
    let segs: Vec<_> = segments.into_iter().collect();
    let mut crossings = 0u64;
    for (i, ((a, b), (p1, p2))) in segs.iter().enumerate() {
        for ((c, d), (q1, q2)) in &segs[i + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            if segments_cross(*p1, *p2, *q1, *q2) {
                crossings += 1;
            }
        }
    }
    Ok(crossings)
}

/// Mean distance of `points` to their barycentre.
fn mean_spread(points: &[Point]) -> Result<f64> {
    let b = barycentre(points)?;
    let total: f64 = points.iter().map(|p| p.distance(b)).sum();
    Ok(total / points.len() as f64)
}

/// Causal path dispersion.
///
/// For each path occurrence, the mean distance of its traversed vertices to
/// the path's barycentre; averaged over all occurrences (weighted by
/// frequency) and divided by the mean distance of all layout vertices to
/// their barycentre. Values below 1 mean that paths are drawn more compactly
/// than the layout as a whole.
pub fn causal_path_dispersion(layout: &Layout, pc: &PathCollection) -> Result<f64> {
    if pc.is_empty() {
        return Err(Error::invalid("dispersion of an empty path collection"));
    }
    let all: Vec<Point> = layout.positions().values().copied().collect();
    let spread = mean_spread(&all)?;
    if spread == 0.0 {
        return Err(Error::DegenerateLayout("all vertices coincide".into()));
    }
    let lookup = positions_for(layout, pc)?;
    let mut weighted = 0.0;
    let mut total = 0u64;
    let mut buf = Vec::new();
    for (path, count) in pc.iter() {
        buf.clear();
        for &v in path {
            buf.push(lookup[v as usize].ok_or_else(|| {
                Error::UnknownVertex(pc.vertices().name(v).to_string())
            })?);
        }
        weighted += count as f64 * mean_spread(&buf)?;
        total += count;
    }
    Ok(weighted / total as f64 / spread)
}

fn positions_for(layout: &Layout, pc: &PathCollection) -> Result<Vec<Option<Point>>> {
    Ok(pc
        .vertices()
        .names()
        .iter()
        .map(|n| layout.position(n))
        .collect())
}

/// Temporal closeness centrality of every vertex of `pc`.
///
/// `CC(v) = sum over w != v of  n(v, w) / d(v, w)` where `n` counts path
/// occurrences containing both vertices and `d` sums, over those same
/// occurrences, the distance between the first positions of `v` and `w` along
/// the path. Vertices on no path score 0.
pub fn temporal_closeness(pc: &PathCollection) -> BTreeMap<String, f64> {
    let scores = closeness_by_id(pc);
    pc.vertices()
        .names()
        .iter()
        .cloned()
        .zip(scores)
        .collect()
}

pub(crate) fn closeness_by_id(pc: &PathCollection) -> Vec<f64> {
    let mut pairs: HashMap<(VertexId, VertexId), (u64, u64)> = HashMap::new();
    let mut first: Vec<(VertexId, usize)> = Vec::new();
    for (path, count) in pc.iter() {
        first.clear();
        for (i, &v) in path.iter().enumerate() {
            if !first.iter().any(|&(u, _)| u == v) {
                first.push((v, i));
            }
        }
        for (a, &(v, iv)) in first.iter().enumerate() {
            for &(w, iw) in &first[a + 1..] {
                let key = (v.min(w), v.max(w));
                let e = pairs.entry(key).or_insert((0, 0));
                e.0 += count;
                e.1 += count * iv.abs_diff(iw) as u64;
            }
        }
    }
    let mut sorted: Vec<_> = pairs.into_iter().collect();
    sorted.sort_unstable_by_key(|&(k, _)| k);
    let mut scores = vec![0.0; pc.vertices().len()];
    for ((v, w), (num, den)) in sorted {
        if den > 0 {
            let r = num as f64 / den as f64;
            scores[v as usize] += r;
            scores[w as usize] += r;
        }
    }
    scores
}

/// Size of the top-`gamma` percentile of `n` items: `ceil(gamma * n / 100)`.
pub fn percentile_count(gamma: f64, n: usize) -> usize {
    ((gamma * n as f64 / 100.0).ceil() as usize).min(n)
}

/// The `ceil(gamma |V| / 100)` vertices with the highest scores; ties go to
/// the lexicographically smaller name. Missing scores count as 0.
pub fn top_percentile<'a>(
    vertices: impl IntoIterator<Item = &'a str>,
    scores: &BTreeMap<String, f64>,
    gamma: f64,
) -> Vec<&'a str> {
    let mut ranked: Vec<(&str, f64)> = vertices
        .into_iter()
        .map(|v| (v, scores.get(v).copied().unwrap_or(0.0)))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let n = percentile_count(gamma, ranked.len());
    ranked.into_iter().take(n).map(|(v, _)| v).collect()
}

/// Mean barycentre distance of the top-`gamma` closeness vertices relative
/// to the mean over all vertices.
pub fn closeness_eccentricity(
    layout: &Layout,
    closeness: &BTreeMap<String, f64>,
    gamma: f64,
) -> Result<f64> {
    if !(gamma > 0.0 && gamma <= 100.0) {
        return Err(Error::invalid(format!("gamma must lie in (0, 100], got {gamma}")));
    }
    if layout.is_empty() {
        return Err(Error::invalid("eccentricity of an empty layout"));
    }
    let points: Vec<Point> = layout.positions().values().copied().collect();
    let centre = barycentre(&points)?;
    let top: std::collections::BTreeSet<&str> =
        top_percentile(layout.positions().keys().map(String::as_str), closeness, gamma)
            .into_iter()
            .collect();

    // both sums run in layout order so that gamma = 100 gives exactly 1
    let mut all = 0.0;
    let mut selected = 0.0;
    for (name, p) in layout.positions() {
        let d = p.distance(centre);
        all += d;
        if top.contains(name.as_str()) {
            selected += d;
        }
    }
    if all == 0.0 {
        return Err(Error::DegenerateLayout("all vertices coincide".into()));
    }
    let n = layout.len() as f64;
    Ok(selected * n / (top.len() as f64 * all))
}

/// Evaluates all measures for one layout.
pub fn metric_report(layout: &Layout, pc: &PathCollection, gammas: &[f64]) -> Result<MetricReport> {
    let edges: Vec<(&str, &str)> = pc
        .of_length(1)
        .map(|(p, _)| (pc.vertices().name(p[0]), pc.vertices().name(p[1])))
        .collect();
    let closeness = temporal_closeness(pc);
    let mut eccentricity = BTreeMap::new();
    for &g in gammas {
        eccentricity.insert(format_gamma(g), closeness_eccentricity(layout, &closeness, g)?);
    }
    Ok(MetricReport {
        edge_crossings: edge_crossing(layout, &edges)?,
        dispersion: causal_path_dispersion(layout, pc)?,
        eccentricity,
        closeness,
    })
}

fn format_gamma(g: f64) -> String {
    if g.fract() == 0.0 {
        format!("{}", g as i64)
    } else {
        format!("{g}")
    }
}
