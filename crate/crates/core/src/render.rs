//! Static SVG drawings in the Poincaré disk.

use std::fmt::Write as _;

use thiserror::Error;

use crate::geometry::{EuclideanPoint, PoincarePoint};
use crate::graph::Graph;
use crate::layout::{Coords, Layout, Region};
use crate::projection::{display_point, DEFAULT_CLAMP};

/// Below this triangle area `(0, p, q)` a geodesic is drawn as a diameter.
const COLLINEAR_AREA: f64 = 1e-9;
/// Margin around the disk, in pixels.
const MARGIN_PX: f64 = 10.0;
/// Node radius at the center of the disk, before zoom.
const NODE_PX: f64 = 6.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    Style { name: &'static str, value: f64, lo: f64, hi: f64 },
    #[error("a geodesic needs two distinct endpoints")]
    SamePoint,
    #[error("layout has {layout} nodes but the graph has {graph}")]
    SizeMismatch { layout: usize, graph: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderStyle {
    pub edge_opacity: f64,
    pub label_base_px: f64,
    pub zoom: f64,
    pub clamp: f64,
    pub disk_px: u32,
}

impl Default for RenderStyle {
    fn default() -> Self {
        Self { edge_opacity: 1.0, label_base_px: 15.0, zoom: 1.0, clamp: DEFAULT_CLAMP, disk_px: 400 }
    }
}

impl RenderStyle {
    pub fn validate(&self) -> Result<(), RenderError> {
        let check = |name, value: f64, lo, hi| {
            if (lo..=hi).contains(&value) {
                Ok(())
            } else {
                Err(RenderError::Style { name, value, lo, hi })
            }
        };
        check("edge opacity", self.edge_opacity, 0.0, 1.0)?;
        check("label size", self.label_base_px, 0.0, 40.0)?;
        check("zoom", self.zoom, 0.5, 1.5)?;
        check("clamp", self.clamp, 0.0, 1.0 - f64::EPSILON)?;
        check("disk radius", self.disk_px as f64, 1.0, 1e5)
    }
}

/// Hyperbolic line segment between two disk points, in disk coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeodesicArc {
    /// Straight segment along a diameter.
    Segment { from: EuclideanPoint, to: EuclideanPoint },
    /// Arc of a circle orthogonal to the unit circle, from angle `start` to
    /// angle `end` about `center`, the short way round.
    Arc { center: EuclideanPoint, radius: f64, start: f64, end: f64 },
}

impl GeodesicArc {
    pub fn is_segment(&self) -> bool {
        matches!(self, GeodesicArc::Segment { .. })
    }
}

/// The geodesic from `p` to `q`.
pub fn geodesic_arc(p: PoincarePoint, q: PoincarePoint) -> Result<GeodesicArc, RenderError> {
    if p == q {
        return Err(RenderError::SamePoint);
    }
    let (p, q) = (p.z(), q.z());
    let cross = p.re * q.im - p.im * q.re;
    if 0.5 * cross.abs() < COLLINEAR_AREA {
        return Ok(GeodesicArc::Segment {
            from: EuclideanPoint::new(p.re, p.im),
            to: EuclideanPoint::new(q.re, q.im),
        });
    }
    // The circle through p and q orthogonal to the unit circle has center c
    // with 2 c·p = 1 + |p|² and 2 c·q = 1 + |q|².
    let bp = 0.5 * (1.0 + p.norm_sqr());
    let bq = 0.5 * (1.0 + q.norm_sqr());
    let cx = (bp * q.im - bq * p.im) / cross;
    let cy = (p.re * bq - q.re * bp) / cross;
    let radius = (cx * cx + cy * cy - 1.0).sqrt();
    Ok(GeodesicArc::Arc {
        center: EuclideanPoint::new(cx, cy),
        radius,
        start: (p.im - cy).atan2(p.re - cx),
        end: (q.im - cy).atan2(q.re - cx),
    })
}

/// Label font size at disk position `z`: `base (1 - |z|²)`.
pub fn label_size(style: &RenderStyle, z: PoincarePoint) -> f64 {
    style.label_base_px * focus_factor(z)
}

fn focus_factor(z: PoincarePoint) -> f64 {
    let r = z.norm();
    (1.0 - r) * (1.0 + r)
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Maps disk coordinates to pixels, y axis pointing down.
struct Frame {
    mid: f64,
    scale: f64,
}

impl Frame {
    fn px(&self, p: EuclideanPoint) -> (f64, f64) {
        (self.mid + self.scale * p.x, self.mid - self.scale * p.y)
    }

    /// Path commands drawing `arc`, starting with a move when `start` is set.
    fn geodesic(&self, arc: &GeodesicArc, from: EuclideanPoint, to: EuclideanPoint, start: bool, out: &mut String) {
        let (x0, y0) = self.px(from);
        let (x1, y1) = self.px(to);
        if start {
            let _ = write!(out, "M {x0} {y0} ");
        }
        match *arc {
            GeodesicArc::Segment { .. } => {
                let _ = write!(out, "L {x1} {y1}");
            }
            GeodesicArc::Arc { center, radius, .. } => {
                // The y flip keeps the picture's orientation, so a
                // counter-clockwise arc is SVG's negative-angle direction.
                let turn = (from.x - center.x) * (to.y - center.y) - (from.y - center.y) * (to.x - center.x);
                let sweep = u8::from(turn < 0.0);
                let r = self.scale * radius;
                let _ = write!(out, "A {r} {r} 0 0 {sweep} {x1} {y1}");
            }
        }
    }
}

fn node_color(cluster: Option<u32>) -> &'static str {
    match cluster {
        Some(c) => PALETTE[c as usize % PALETTE.len()],
        None => PALETTE[0],
    }
}

/// Display position of each node and polygon vertex, and whether edges are
/// hyperbolic geodesics.
fn display(l: &Layout, clamp: f64) -> (Vec<PoincarePoint>, Vec<Vec<PoincarePoint>>, bool) {
    fn to_disk(c: &Coords, clamp: f64, far: f64) -> Vec<PoincarePoint> {
        let pull = |x: f64, y: f64| {
            PoincarePoint::from_xy(x, y).unwrap_or(PoincarePoint::ORIGIN).clamped(clamp)
        };
        match c {
            Coords::Hyperbolic(p) => p.iter().map(|&q| display_point(q, clamp)).collect(),
            // Scaled to fit the disk.
            Coords::Euclidean(p) => p.iter().map(|q| pull(0.95 * q.x / far, 0.95 * q.y / far)).collect(),
            // Azimuthal equidistant view from the north pole.
            Coords::Spherical(p) => p
                .iter()
                .map(|q| {
                    let [x, y, z] = q.coords();
                    let polar = (x * x + y * y).sqrt().atan2(z);
                    let azimuth = y.atan2(x);
                    let r = polar / std::f64::consts::PI;
                    pull(r * azimuth.cos(), r * azimuth.sin())
                })
                .collect(),
        }
    }
    let far = match l.coords() {
        Coords::Euclidean(p) => {
            let m = p.iter().map(|q| q.norm()).fold(0.0, f64::max);
            let m = l
                .polygons()
                .iter()
                .filter_map(|r| match &r.vertices {
                    Coords::Euclidean(v) => Some(v.iter().map(|q| q.norm()).fold(0.0, f64::max)),
                    _ => None,
                })
                .fold(m, f64::max);
            if m > 0.0 { m } else { 1.0 }
        }
        _ => 1.0,
    };
    let nodes = to_disk(l.coords(), clamp, far);
    let polygons = l.polygons().iter().map(|r: &Region| to_disk(&r.vertices, clamp, far)).collect();
    (nodes, polygons, l.coords().geometry() == crate::layout::Geometry::Hyperbolic)
}

/// SVG drawing of `l`. Hyperbolic layouts are shown in the Poincaré disk with
/// geodesic edges; Euclidean layouts are scaled into the disk and spherical
/// ones shown in azimuthal equidistant projection, both with straight edges.
pub fn render_svg(l: &Layout, g: &Graph, style: &RenderStyle) -> Result<String, RenderError> {
    style.validate()?;
    if l.len() != g.len() {
        return Err(RenderError::SizeMismatch { layout: l.len(), graph: g.len() });
    }
    let (nodes, polygons, curved) = display(l, style.clamp);
    let size = 2.0 * (style.disk_px as f64 + MARGIN_PX);
    let frame = Frame { mid: 0.5 * size, scale: style.disk_px as f64 * style.zoom };
    let segment = |p: PoincarePoint, q: PoincarePoint| -> Option<GeodesicArc> {
        if curved {
            geodesic_arc(p, q).ok()
        } else if p != q {
            Some(GeodesicArc::Segment { from: xy(p), to: xy(q) })
        } else {
            None
        }
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(
        out,
        r##"<circle class="disk" cx="{m}" cy="{m}" r="{r}" fill="#ffffff" stroke="#000000" stroke-width="1"/>"##,
        m = frame.mid,
        r = frame.scale
    );

    for (region, verts) in l.polygons().iter().zip(&polygons) {
        if verts.len() < 2 {
            continue;
        }
        let mut d = String::new();
        for k in 0..verts.len() {
            let (a, b) = (verts[k], verts[(k + 1) % verts.len()]);
            if let Some(arc) = segment(a, b) {
                frame.geodesic(&arc, xy(a), xy(b), d.is_empty(), &mut d);
                d.push(' ');
            }
        }
        if d.is_empty() {
            continue;
        }
        d.push('Z');
        let _ = writeln!(
            out,
            r#"<path class="polygon" data-cluster="{}" d="{d}" fill="{}" fill-opacity="0.3" stroke="{}" stroke-width="1"/>"#,
            region.cluster,
            escape(&region.color),
            escape(&region.color)
        );
    }

    for e in g.edges() {
        let (p, q) = (nodes[e.u], nodes[e.v]);
        let Some(arc) = segment(p, q) else { continue };
        let mut d = String::new();
        frame.geodesic(&arc, xy(p), xy(q), true, &mut d);
        let _ = writeln!(
            out,
            r##"<path class="edge" d="{d}" fill="none" stroke="#555555" stroke-width="1" stroke-opacity="{}"/>"##,
            style.edge_opacity
        );
    }

    for (node, &z) in g.nodes().iter().zip(&nodes) {
        let (x, y) = frame.px(xy(z));
        let shrink = if curved { focus_factor(z) } else { 1.0 };
        let r = NODE_PX * style.zoom * shrink;
        let _ = writeln!(
            out,
            r#"<circle class="node" cx="{x}" cy="{y}" r="{r}" fill="{}"/>"#,
            node_color(node.cluster)
        );
    }

    if style.label_base_px > 0.0 {
        for (node, &z) in g.nodes().iter().zip(&nodes) {
            let (x, y) = frame.px(xy(z));
            let px = if curved { label_size(style, z) } else { style.label_base_px } * style.zoom;
            let _ = writeln!(
                out,
                r#"<text x="{x}" y="{y}" font-family="Arial" font-size="{px}" text-anchor="middle" dy="-0.6em">{}</text>"#,
                escape(&node.label)
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn xy(p: PoincarePoint) -> EuclideanPoint {
    EuclideanPoint::new(p.z().re, p.z().im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::LobachevskyPoint;

    fn pp(x: f64, y: f64) -> PoincarePoint {
        PoincarePoint::from_xy(x, y).unwrap()
    }

    #[test]
    fn arc_examples() {
        assert!(geodesic_arc(pp(0.5, 0.0), pp(-0.5, 0.0)).unwrap().is_segment());
        assert!(geodesic_arc(pp(0.0, 0.0), pp(0.0, 0.3)).unwrap().is_segment());
        let GeodesicArc::Arc { center, radius, .. } = geodesic_arc(pp(0.5, 0.0), pp(0.0, 0.5)).unwrap() else {
            panic!("expected an arc")
        };
        assert!((center.x - 1.25).abs() < 1e-12 && (center.y - 1.25).abs() < 1e-12);
        assert!((radius - 2.125f64.sqrt()).abs() < 1e-12);
        assert_eq!(geodesic_arc(pp(0.1, 0.1), pp(0.1, 0.1)), Err(RenderError::SamePoint));
    }

    #[test]
    fn arc_endpoints_lie_on_the_circle() {
        let (p, q) = (pp(-0.7, 0.2), pp(0.3, 0.6));
        let GeodesicArc::Arc { center, radius, start, end } = geodesic_arc(p, q).unwrap() else { panic!() };
        assert!((center.x.powi(2) + center.y.powi(2) - radius * radius - 1.0).abs() < 1e-9);
        for (z, angle) in [(p, start), (q, end)] {
            assert!((EuclideanPoint::new(z.z().re, z.z().im).distance(center) - radius).abs() < 1e-9);
            assert!((center.x + radius * angle.cos() - z.z().re).abs() < 1e-9);
        }
    }

    #[test]
    fn label_sizes() {
        let style = RenderStyle::default();
        assert_eq!(label_size(&style, PoincarePoint::ORIGIN), 15.0);
        assert!((label_size(&style, pp(0.5, 0.0)) - 11.25).abs() < 1e-12);
        assert!(label_size(&style, pp(0.0, 0.9999)) < 0.01);
    }

    #[test]
    fn style_ranges() {
        assert!(RenderStyle { zoom: 2.0, ..RenderStyle::default() }.validate().is_err());
        assert!(RenderStyle { label_base_px: 41.0, ..RenderStyle::default() }.validate().is_err());
        assert!(RenderStyle { edge_opacity: -0.1, ..RenderStyle::default() }.validate().is_err());
        assert!(RenderStyle::default().validate().is_ok());
    }

    #[test]
    fn straight_edge_through_the_center() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let l = Layout::new(
            Coords::Hyperbolic(vec![LobachevskyPoint::new(-1.0, 0.0), LobachevskyPoint::new(1.0, 0.0)]),
            1.0,
            "t",
        )
        .unwrap();
        let svg = render_svg(&l, &g, &RenderStyle::default()).unwrap();
        let edges: Vec<&str> = svg.lines().filter(|s| s.contains(r#"class="edge""#)).collect();
        assert_eq!(edges.len(), 1);
        assert!(edges[0].contains(" L ") && !edges[0].contains(" A "));
        let none = render_svg(&l, &g, &RenderStyle { label_base_px: 0.0, ..RenderStyle::default() }).unwrap();
        assert!(!none.contains("<text"));
        let clear = render_svg(&l, &g, &RenderStyle { edge_opacity: 0.0, ..RenderStyle::default() }).unwrap();
        assert!(clear.contains(r#"stroke-opacity="0""#));
    }
}
