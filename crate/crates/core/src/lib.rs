//! Static, time-aware layouts of temporal networks.
//!
//! Causal paths are extracted from time-stamped edges ([`paths`]), summarised
//! by De Bruijn graph models of increasing order ([`higher_order`]) and turned
//! into superimposed attractive forces for a force-directed layout
//! ([`layout`]). [`metrics`] and [`eval`] measure how well a layout reflects
//! the causal topology; [`synthetic`] generates networks with known temporal
//! clusters; [`io`] and [`svg`] handle files and rendering.

pub mod error;
pub mod eval;
pub mod geometry;
pub mod graph;
pub mod higher_order;
pub mod io;
pub mod layout;
pub mod metrics;
pub mod paths;
pub mod svg;
pub mod synthetic;

pub use error::{Error, Result};
pub use geometry::Point;
pub use graph::{AggregateGraph, TemporalGraph, VertexId, VertexTable};
pub use higher_order::HigherOrderGraph;
pub use layout::{compute_layout, Layout, LayoutConfig};
pub use paths::{extract_causal_paths, PathCollection};
