//! Static SVG node-link drawings of a layout.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::layout::Layout;
use crate::metrics::{barycentre, percentile_count};

/// Margin on each side, as a fraction of the canvas.
const MARGIN: f64 = 0.05;
const NODE_COLOR: &str = "#4c72b0";
const HIGHLIGHT_COLOR: &str = "#d62728";
const EDGE_COLOR: &str = "#a0a0a0";

#[derive(Debug, Clone, PartialEq)]
pub struct RenderStyle {
    pub node_radius: f64,
    pub edge_width: f64,
    /// CSS colours per vertex; unlisted vertices use the default colour.
    pub color_map: Option<BTreeMap<String, String>>,
    /// Vertices drawn in the highlight colour, overriding `color_map`.
    pub highlight_set: Option<BTreeSet<String>>,
    pub width: f64,
    pub height: f64,
    /// Draws a circle around the barycentre enclosing the `gamma` percent of
    /// vertices closest to it.
    pub barycentre_circle: Option<f64>,
}

impl Default for RenderStyle {
    fn default() -> Self {
        Self {
            node_radius: 4.0,
            edge_width: 1.0,
            color_map: None,
            highlight_set: None,
            width: 800.0,
            height: 800.0,
            barycentre_circle: None,
        }
    }
}

/// Normalises a CSS colour literal to `#rrggbb` or `#rrggbbaa`.
pub fn css_color(literal: &str) -> Result<String> {
    csscolorparser::parse(literal)
        .map(|c| c.to_css_hex().to_string())
        .map_err(|e| Error::InvalidData(format!("invalid colour {literal:?}: {e}")))
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

struct Canvas {
    origin: Point,
    centre: Point,
    scale: f64,
    height: f64,
}

impl Canvas {
    fn fit(points: &[Point], width: f64, height: f64) -> Self {
        let (mut lo, mut hi) = (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in points {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let span = hi - lo;
        let usable = (width * (1.0 - 2.0 * MARGIN), height * (1.0 - 2.0 * MARGIN));
        let scale = match (span.x > 0.0, span.y > 0.0) {
            (true, true) => (usable.0 / span.x).min(usable.1 / span.y),
            (true, false) => usable.0 / span.x,
            (false, true) => usable.1 / span.y,
            (false, false) => 0.0,
        };
        let origin = if points.is_empty() { Point::ZERO } else { (lo + hi) / 2.0 };
        Self {
            origin,
            centre: Point::new(width / 2.0, height / 2.0),
            scale,
            height,
        }
    }

    /// Canvas coordinates; y grows upwards in layout space.
    fn map(&self, p: Point) -> Point {
        let d = (p - self.origin) * self.scale;
        Point::new(self.centre.x + d.x, self.height - (self.centre.y + d.y))
    }
}

/// Renders edges as lines beneath vertex circles. Output depends only on
/// the inputs.
pub fn render_svg<S: AsRef<str>>(layout: &Layout, edges: &[(S, S)], style: &RenderStyle) -> Result<String> {
    if !(style.width > 0.0 && style.height > 0.0 && style.width.is_finite() && style.height.is_finite()) {
        return Err(Error::invalid("canvas dimensions must be positive"));
    }
    if !(style.node_radius >= 0.0 && style.edge_width >= 0.0) {
        return Err(Error::invalid("node radius and edge width must be non-negative"));
    }
    if let Some((v, _)) = layout.positions().iter().find(|(_, p)| !p.is_finite()) {
        return Err(Error::InvalidData(format!("position of {v:?} is not finite")));
    }
    let colors: BTreeMap<&str, String> = match &style.color_map {
        Some(m) => m
            .iter()
            .map(|(v, c)| Ok((v.as_str(), css_color(c)?)))
            .collect::<Result<_>>()?,
        None => BTreeMap::new(),
    };

    let points: Vec<Point> = layout.positions().values().copied().collect();
    let canvas = Canvas::fit(&points, style.width, style.height);

    let mut pairs = BTreeSet::new();
    for (a, b) in edges {
        let (a, b) = (a.as_ref(), b.as_ref());
        for v in [a, b] {
            if layout.position(v).is_none() {
                return Err(Error::UnknownVertex(v.to_string()));
            }
        }
        if a != b {
            pairs.insert(if a < b { (a, b) } else { (b, a) });
        }
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = style.width,
        h = style.height
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(
        out,
        r#"<g stroke="{EDGE_COLOR}" stroke-width="{}" stroke-linecap="round">"#,
        style.edge_width
    );
    for (a, b) in &pairs {
        let p = canvas.map(layout.position(a).expect("checked"));
        let q = canvas.map(layout.position(b).expect("checked"));
        let _ = writeln!(
            out,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
            p.x, p.y, q.x, q.y
        );
    }
    out.push_str("</g>\n");

    if let (Some(gamma), false) = (style.barycentre_circle, layout.is_empty()) {
        if !(gamma > 0.0 && gamma <= 100.0) {
            return Err(Error::invalid(format!("gamma must lie in (0, 100], got {gamma}")));
        }
        let centre = barycentre(&points)?;
        let mut dist: Vec<f64> = points.iter().map(|p| p.distance(centre)).collect();
        dist.sort_by(f64::total_cmp);
        let radius = dist[percentile_count(gamma, dist.len()).max(1) - 1] * canvas.scale;
        let c = canvas.map(centre);
        let _ = writeln!(
            out,
            r##"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="#000000" stroke-width="1.5"/>"##,
            c.x, c.y, radius
        );
    }

    out.push_str("<g stroke=\"#ffffff\" stroke-width=\"0.5\">\n");
    for (v, p) in layout.positions() {
        let highlighted = style.highlight_set.as_ref().is_some_and(|h| h.contains(v));
        let fill = if highlighted {
            HIGHLIGHT_COLOR
        } else {
            colors.get(v.as_str()).map_or(NODE_COLOR, String::as_str)
        };
        let c = canvas.map(*p);
        let _ = writeln!(
            out,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{}" fill="{fill}"><title>{}</title></circle>"#,
            c.x,
            c.y,
            style.node_radius,
            escape(v)
        );
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}
