//! Text formats: edge lists, trajectories, path collections, layouts and
//! vertex maps.
//!
//! All readers report the offending line for malformed rows. Writers are
//! deterministic and pair with a reader that reproduces the value exactly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::marker::PhantomData;
use std::sync::Arc;

use serde::de::{Deserializer, MapAccess, Visitor};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::graph::{TemporalGraph, VertexTable};
use crate::layout::{Layout, Provenance};
use crate::paths::{PathCollection, PathNodes};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Delimiter {
    Tab,
    Comma,
    Whitespace,
}

impl Delimiter {
    fn detect(line: &str) -> Self {
        if line.contains('\t') {
            Delimiter::Tab
        } else if line.contains(',') {
            Delimiter::Comma
        } else {
            Delimiter::Whitespace
        }
    }

    fn split(self, line: &str) -> Vec<&str> {
        match self {
            Delimiter::Tab => line.split('\t').map(str::trim).collect(),
            Delimiter::Comma => line.split(',').map(str::trim).collect(),
            Delimiter::Whitespace => line.split_whitespace().collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeListOptions {
    /// When false every line also yields the reversed edge.
    pub directed: bool,
    /// Detected from the first data line when unset.
    pub delimiter: Option<Delimiter>,
}

impl Default for EdgeListOptions {
    fn default() -> Self {
        Self {
            directed: true,
            delimiter: None,
        }
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

/// Parses `source target time` rows.
pub fn parse_temporal_edges(text: &str, options: EdgeListOptions) -> Result<TemporalGraph> {
    let mut builder = TemporalGraph::builder();
    let mut delimiter = options.delimiter;
    for (no, line) in data_lines(text) {
        let d = *delimiter.get_or_insert_with(|| Delimiter::detect(line));
        let fields = d.split(line);
        if fields.len() != 3 {
            return Err(Error::parse(no, line, format!("expected 3 fields, found {}", fields.len())));
        }
        if fields[0].is_empty() || fields[1].is_empty() {
            return Err(Error::parse(no, line, "empty vertex name"));
        }
        let time: u64 = fields[2]
            .parse()
            .map_err(|_| Error::parse(no, line, "timestamp is not a non-negative integer"))?;
        builder.add_edge(fields[0], fields[1], time);
        if !options.directed {
            builder.add_edge(fields[1], fields[0], time);
        }
    }
    Ok(builder.build())
}

/// Writes `source,target,time` rows in edge order.
pub fn write_temporal_edges(graph: &TemporalGraph) -> Result<String> {
    let names = graph.vertices();
    for n in names.names() {
        check_name(n)?;
    }
    let mut out = String::new();
    for e in graph.edges() {
        out.push_str(&format!("{},{},{}\n", names.name(e.source), names.name(e.target), e.time));
    }
    Ok(out)
}

/// Parses one trajectory per line: comma-separated vertices, optionally
/// followed by a tab and a positive frequency.
pub fn parse_paths(text: &str) -> Result<Vec<(Vec<String>, u64)>> {
    let mut out = Vec::new();
    for (no, line) in data_lines(text) {
        let (nodes, freq) = match line.split_once('\t') {
            Some((nodes, f)) => {
                let f: i128 = f
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(no, line, "frequency is not an integer"))?;
                if f <= 0 {
                    return Err(Error::parse(no, line, "frequency must be positive"));
                }
                let f = u64::try_from(f).map_err(|_| Error::parse(no, line, "frequency too large"))?;
                (nodes, f)
            }
            None => (line, 1),
        };
        let nodes: Vec<String> = nodes.split(',').map(|n| n.trim().to_string()).collect();
        if nodes.len() < 2 {
            return Err(Error::parse(no, line, "a path needs at least two vertices"));
        }
        if nodes.iter().any(String::is_empty) {
            return Err(Error::parse(no, line, "empty vertex name"));
        }
        out.push((nodes, freq));
    }
    Ok(out)
}

fn check_name(name: &str) -> Result<()> {
    if name.is_empty() || name.contains([',', '\n', '\r', '\t']) {
        return Err(Error::InvalidData(format!(
            "vertex name {name:?} is empty or contains a delimiter"
        )));
    }
    Ok(())
}

/// Map that fails to deserialize when a key repeats.
struct UniqueMap<K, V>(BTreeMap<K, V>);

impl<'de, K, V> Deserialize<'de> for UniqueMap<K, V>
where
    K: Deserialize<'de> + Ord + fmt::Debug,
    V: Deserialize<'de>,
{
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct UniqueVisitor<K, V>(PhantomData<(K, V)>);

        impl<'de, K, V> Visitor<'de> for UniqueVisitor<K, V>
        where
            K: Deserialize<'de> + Ord + fmt::Debug,
            V: Deserialize<'de>,
        {
            type Value = UniqueMap<K, V>;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map without duplicate keys")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> std::result::Result<Self::Value, A::Error> {
                let mut map = BTreeMap::new();
                while let Some((k, v)) = access.next_entry::<K, V>()? {
                    if map.contains_key(&k) {
                        return Err(serde::de::Error::custom(format!("duplicate key {k:?}")));
                    }
                    map.insert(k, v);
                }
                Ok(UniqueMap(map))
            }
        }

        deserializer.deserialize_map(UniqueVisitor(PhantomData))
    }
}

#[derive(Serialize)]
struct PathFileOut<'a> {
    vertices: &'a [String],
    delta: Option<u64>,
    max_length: usize,
    paths: BTreeMap<usize, BTreeMap<String, u64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PathFileIn {
    vertices: Vec<String>,
    delta: Option<u64>,
    max_length: usize,
    paths: UniqueMap<usize, UniqueMap<String, u64>>,
}

/// Serializes a path collection, keyed by length and comma-joined vertices.
pub fn write_path_collection(pc: &PathCollection) -> Result<String> {
    for n in pc.vertices().names() {
        check_name(n)?;
    }
    let paths = (1..=pc.max_length())
        .map(|l| {
            let counts = pc
                .of_length(l)
                .map(|(p, c)| (pc.path_names(p).join(","), c))
                .collect();
            (l, counts)
        })
        .collect();
    let file = PathFileOut {
        vertices: pc.vertices().names(),
        delta: pc.delta(),
        max_length: pc.max_length(),
        paths,
    };
    Ok(serde_json::to_string_pretty(&file)? + "\n")
}

pub fn read_path_collection(text: &str) -> Result<PathCollection> {
    let file: PathFileIn = serde_json::from_str(text)?;
    let table = Arc::new(VertexTable::from_names(&file.vertices)?);
    let mut counts: Vec<(PathNodes, u64)> = Vec::new();
    for (length, group) in file.paths.0 {
        for (key, count) in group.0 {
            let nodes = key
                .split(',')
                .map(|n| table.id(n).ok_or_else(|| Error::UnknownVertex(n.to_string())))
                .collect::<Result<PathNodes>>()?;
            if nodes.len() != length + 1 {
                return Err(Error::InvalidData(format!(
                    "path {key:?} listed under length {length}"
                )));
            }
            counts.push((nodes, count));
        }
    }
    PathCollection::from_counts(table, file.max_length, file.delta, counts)
}

#[derive(Serialize)]
struct LayoutFileOut<'a> {
    positions: BTreeMap<&'a str, [f64; 2]>,
    provenance: Option<&'a Provenance>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LayoutFileIn {
    positions: UniqueMap<String, [f64; 2]>,
    #[serde(default)]
    provenance: Option<Provenance>,
}

fn check_finite(layout: &Layout) -> Result<()> {
    match layout.positions().iter().find(|(_, p)| !p.is_finite()) {
        Some((v, _)) => Err(Error::InvalidData(format!("position of {v:?} is not finite"))),
        None => Ok(()),
    }
}

/// JSON layout. Floats use the shortest representation that parses back to
/// the same value.
pub fn write_layout_json(layout: &Layout) -> Result<String> {
    check_finite(layout)?;
    let file = LayoutFileOut {
        positions: layout
            .positions()
            .iter()
            .map(|(v, p)| (v.as_str(), [p.x, p.y]))
            .collect(),
        provenance: layout.provenance(),
    };
    Ok(serde_json::to_string_pretty(&file)? + "\n")
}

pub fn read_layout_json(text: &str) -> Result<Layout> {
    let file: LayoutFileIn = serde_json::from_str(text)?;
    let positions = file
        .positions
        .0
        .into_iter()
        .map(|(v, [x, y])| (v, Point::new(x, y)))
        .collect();
    Ok(Layout::new(positions, file.provenance))
}

const LAYOUT_CSV_HEADER: &str = "vertex,x,y";

/// CSV layout with 17 significant digits per coordinate. Provenance is not
/// stored.
pub fn write_layout_csv(layout: &Layout) -> Result<String> {
    check_finite(layout)?;
    let mut out = format!("{LAYOUT_CSV_HEADER}\n");
    for (v, p) in layout.positions() {
        check_name(v)?;
        out.push_str(&format!("{v},{:.16e},{:.16e}\n", p.x, p.y));
    }
    Ok(out)
}

pub fn read_layout_csv(text: &str) -> Result<Layout> {
    let mut lines = data_lines(text);
    match lines.next() {
        Some((_, h)) if h.trim() == LAYOUT_CSV_HEADER => {}
        Some((no, h)) => return Err(Error::parse(no, h, "expected header vertex,x,y")),
        None => return Err(Error::InvalidData("empty layout file".into())),
    }
    let mut positions = BTreeMap::new();
    for (no, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::parse(no, line, format!("expected 3 fields, found {}", fields.len())));
        }
        let coord = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::parse(no, line, "coordinate is not a finite number"))
        };
        let p = Point::new(coord(fields[1])?, coord(fields[2])?);
        if positions.insert(fields[0].to_string(), p).is_some() {
            return Err(Error::parse(no, line, "duplicate vertex"));
        }
    }
    Ok(Layout::new(positions, None))
}

/// Two-column `vertex,value` CSV with a header row.
pub fn write_vertex_map<V: fmt::Display>(header: &str, map: &BTreeMap<String, V>) -> Result<String> {
    let mut out = format!("vertex,{header}\n");
    for (v, value) in map {
        check_name(v)?;
        out.push_str(&format!("{v},{value}\n"));
    }
    Ok(out)
}

pub fn read_vertex_map(text: &str) -> Result<BTreeMap<String, String>> {
    let mut lines = data_lines(text);
    if lines.next().is_none() {
        return Ok(BTreeMap::new());
    }
    let mut map = BTreeMap::new();
    for (no, line) in lines {
        let Some((v, value)) = line.split_once(',') else {
            return Err(Error::parse(no, line, "expected vertex,value"));
        };
        let (v, value) = (v.trim(), value.trim());
        if v.is_empty() || value.is_empty() {
            return Err(Error::parse(no, line, "empty field"));
        }
        if map.insert(v.to_string(), value.to_string()).is_some() {
            return Err(Error::parse(no, line, "duplicate vertex"));
        }
    }
    Ok(map)
}

/// One vertex name per line.
pub fn read_vertex_set(text: &str) -> BTreeSet<String> {
    data_lines(text).map(|(_, l)| l.trim().to_string()).collect()
}
