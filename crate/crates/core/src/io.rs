//! Input parsing, report serialization, and SVG rendering.
//!
//! One JSON document per pipeline stage: the input document describes
//! sites and parameters, the graph document is the serialized
//! [`ScenicGraph`], and the report document carries routes plus their
//! metrics. SVG output draws sites, curves, intersection nodes, and
//! routes with a fixed palette.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geometry::{Arc, Point2, TAU};
use crate::graph::{
    BoxSpec, Color, ColoredPoint, Config, CurveGeometry, EdgeGeometry, Mode, NodeKind, Rect,
    ScenicGraph, DEFAULT_MAX_CURVES,
};
use crate::lattice::{ColoredPointD, PointD};
use crate::routing::{Route, RouteMetrics, RouteStep};
use crate::{Error, Result};

/// One site in the input document. Either `x`/`y` or a `coords` array
/// must be present; `coords` is required above two dimensions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputPoint {
    pub id: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<f64>>,
    pub color: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

/// The configuration file: sites plus graph and routing parameters.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct InputDocument {
    pub points: Vec<InputPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// Explicit bounding box `[xmin, ymin, xmax, ymax]`; omitted → auto.
    #[serde(rename = "box", default, skip_serializing_if = "Option::is_none")]
    pub box_corners: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expand: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_curves: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top_k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance_bound: Option<f64>,
}

fn parse_color(s: &str, path: &str) -> Result<Color> {
    match s {
        "red" => Ok(Color::Red),
        "blue" => Ok(Color::Blue),
        "landmark" => Ok(Color::Landmark),
        other => Err(Error::Data(format!(
            "{path}: unknown color {other:?}; expected \"red\", \"blue\", or \"landmark\""
        ))),
    }
}

impl InputDocument {
    pub fn from_path(path: &Path) -> Result<InputDocument> {
        let text = std::fs::read_to_string(path)?;
        let doc: InputDocument = serde_json::from_str(&text)
            .map_err(|e| Error::Data(format!("{}: invalid input document: {e}", path.display())))?;
        Ok(doc)
    }

    fn checked_weight(p: &InputPoint, i: usize) -> Result<f64> {
        let w = p.weight.unwrap_or(1.0);
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::Data(format!("/points/{i}/weight: weight must be positive")));
        }
        Ok(w)
    }

    fn check_unique_ids(&self) -> Result<()> {
        let mut seen = std::collections::BTreeMap::new();
        for (i, p) in self.points.iter().enumerate() {
            if let Some(first) = seen.insert(p.id, i) {
                return Err(Error::Data(format!(
                    "/points/{i}/id: duplicate id {} (first used at /points/{first})",
                    p.id
                )));
            }
        }
        Ok(())
    }

    fn point_xy(p: &InputPoint, i: usize) -> Result<Point2> {
        match (p.x, p.y, &p.coords) {
            (Some(x), Some(y), None) => Ok(Point2::new(x, y)),
            (None, None, Some(c)) if c.len() == 2 => Ok(Point2::new(c[0], c[1])),
            (None, None, Some(c)) => Err(Error::Data(format!(
                "/points/{i}/coords: expected 2 coordinates for a planar graph, got {}",
                c.len()
            ))),
            _ => Err(Error::Data(format!(
                "/points/{i}: give either x and y, or a coords array"
            ))),
        }
    }

    /// Build the planar graph configuration.
    pub fn to_config(&self) -> Result<Config> {
        self.check_unique_ids()?;
        let mut points = Vec::with_capacity(self.points.len());
        for (i, p) in self.points.iter().enumerate() {
            points.push(ColoredPoint::new(
                p.id,
                Self::point_xy(p, i)?,
                parse_color(&p.color, &format!("/points/{i}/color"))?,
                Self::checked_weight(p, i)?,
            ));
        }
        let mode = match self.mode.as_deref() {
            None => {
                if points.iter().any(|p| p.color == Color::Landmark) {
                    Mode::AllPairs
                } else {
                    Mode::Bipartite
                }
            }
            Some("bipartite") => Mode::Bipartite,
            Some("all-pairs") => Mode::AllPairs,
            Some(other) => {
                return Err(Error::Data(format!(
                    "/mode: unknown mode {other:?}; expected \"bipartite\" or \"all-pairs\""
                )))
            }
        };
        let box_spec = match self.box_corners {
            Some([xmin, ymin, xmax, ymax]) => {
                if !(xmin < xmax && ymin < ymax) {
                    return Err(Error::Data(
                        "/box: expected [xmin, ymin, xmax, ymax] with min < max".into(),
                    ));
                }
                BoxSpec::Explicit(Rect::new(Point2::new(xmin, ymin), Point2::new(xmax, ymax)))
            }
            None => BoxSpec::Auto {
                expand: self.expand.unwrap_or(1.5),
            },
        };
        let cfg = Config {
            points,
            mode,
            box_spec,
            eps_abs: self.tolerance.unwrap_or(crate::geometry::Tolerance::DEFAULT_EPS),
            max_curves: self.max_curves.unwrap_or(DEFAULT_MAX_CURVES),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Extract the sites as R^d points for the flat lattice; `dim` fixes
    /// the expected ambient dimension.
    pub fn to_points_d(&self, dim: usize) -> Result<Vec<ColoredPointD>> {
        self.check_unique_ids()?;
        let mut out = Vec::with_capacity(self.points.len());
        for (i, p) in self.points.iter().enumerate() {
            let coords: Vec<f64> = match (&p.coords, p.x, p.y) {
                (Some(c), None, None) => c.clone(),
                (None, Some(x), Some(y)) => vec![x, y],
                _ => {
                    return Err(Error::Data(format!(
                        "/points/{i}: give either x and y, or a coords array"
                    )))
                }
            };
            if coords.len() != dim {
                return Err(Error::Data(format!(
                    "/points/{i}/coords: expected {dim} coordinates, got {}",
                    coords.len()
                )));
            }
            Self::checked_weight(p, i)?;
            out.push(ColoredPointD {
                id: p.id,
                coords: PointD::from_vec(coords),
                color: parse_color(&p.color, &format!("/points/{i}/color"))?,
            });
        }
        Ok(out)
    }
}

/// Cardinality summary of a built graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphSummary {
    pub red: usize,
    pub blue: usize,
    pub landmark: usize,
    pub curves: usize,
    pub intersection_nodes: usize,
    pub boundary_nodes: usize,
    pub edges: usize,
}

pub fn graph_summary(g: &ScenicGraph, sites: &[ColoredPoint]) -> GraphSummary {
    GraphSummary {
        red: sites.iter().filter(|p| p.color == Color::Red).count(),
        blue: sites.iter().filter(|p| p.color == Color::Blue).count(),
        landmark: sites.iter().filter(|p| p.color == Color::Landmark).count(),
        curves: g.curves.len(),
        intersection_nodes: g.intersection_nodes().count(),
        boundary_nodes: g
            .nodes
            .iter()
            .filter(|n| n.kind != NodeKind::Intersection)
            .count(),
        edges: g.edges.len(),
    }
}

/// One algorithm's result in the report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportRow {
    pub algorithm: String,
    pub metrics: RouteMetrics,
    pub node_sequence: Vec<usize>,
    pub steps: Vec<RouteStep>,
    pub flags: Vec<String>,
}

/// The routing report: graph summary, one row per algorithm, and the
/// comparator ranking under the chosen requirement order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportDocument {
    pub summary: GraphSummary,
    pub order: String,
    pub rows: Vec<ReportRow>,
    /// Algorithm names, best first under the chosen order.
    pub ranking: Vec<String>,
}

pub fn build_report(
    g: &ScenicGraph,
    sites: &[ColoredPoint],
    results: &[(String, Route)],
    order: &crate::routing::RequirementOrder,
    order_name: &str,
) -> Result<ReportDocument> {
    let mut rows = Vec::new();
    for (name, route) in results {
        let metrics = crate::routing::route_metrics(g, route)?;
        rows.push(ReportRow {
            algorithm: name.clone(),
            metrics,
            node_sequence: route.node_sequence(g),
            steps: route.steps.clone(),
            flags: route.flags.clone(),
        });
    }
    let mut ranking: Vec<usize> = (0..rows.len()).collect();
    ranking.sort_by(|&a, &b| {
        crate::routing::compare_routes(&rows[a].metrics, &rows[b].metrics, order)
            .then_with(|| rows[a].algorithm.cmp(&rows[b].algorithm))
    });
    Ok(ReportDocument {
        summary: graph_summary(g, sites),
        order: order_name.to_string(),
        rows: ranking
            .iter()
            .map(|&i| rows[i].clone())
            .collect::<Vec<_>>()
            .into_iter()
            .collect(),
        ranking: ranking
            .iter()
            .map(|&i| results[i].0.clone())
            .collect(),
    })
}

/// Serialize any document as pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Atomic file write: temp file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp",
            path.file_name().and_then(|n| n.to_str()).unwrap_or("out")
        )),
        None => std::path::PathBuf::from(format!(
            ".{}.tmp",
            path.file_name().and_then(|n| n.to_str()).unwrap_or("out")
        )),
    };
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

const COLOR_RED: &str = "#d62728";
const COLOR_BLUE: &str = "#1f77b4";
const COLOR_LANDMARK: &str = "#9467bd";
const COLOR_CURVE: &str = "#2ca02c";
const COLOR_ROUTE: &str = "#e377c2";
const COLOR_CONNECTOR: &str = "#888888";

fn fmt(v: f64) -> String {
    // normalize negative zero so output is stable across formulations
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.6}")
}

/// SVG y coordinate: flip so the drawing matches mathematical
/// orientation (y up).
fn fy(y: f64) -> f64 {
    -y
}

/// SVG path arc command for a mathematically counter-clockwise arc.
/// After the y flip a CCW arc runs in the negative SVG angle direction,
/// so the sweep flag is 0.
fn arc_path_segment(arc: &Arc, reversed: bool, move_first: bool, out: &mut String) {
    let pieces = if arc.sweep > TAU / 2.0 + 1e-12 { 2 } else { 1 };
    let step = arc.sweep / pieces as f64;
    let mut angles: Vec<f64> = (0..=pieces)
        .map(|i| arc.start_angle + step * i as f64)
        .collect();
    if reversed {
        angles.reverse();
    }
    let sweep_flag = if reversed { 1 } else { 0 };
    let r = arc.circle.radius;
    for (i, pair) in angles.windows(2).enumerate() {
        let from = arc.circle.point_at(pair[0]);
        let to = arc.circle.point_at(pair[1]);
        if i == 0 && move_first {
            let _ = write!(out, "M {} {} ", fmt(from.x), fmt(fy(from.y)));
        }
        let _ = write!(
            out,
            "A {} {} 0 0 {} {} {} ",
            fmt(r),
            fmt(r),
            sweep_flag,
            fmt(to.x),
            fmt(fy(to.y))
        );
    }
}

/// Render the graph, sites, and routes as an SVG document. Output is
/// deterministic for a fixed input.
pub fn render_svg(g: &ScenicGraph, sites: &[ColoredPoint], routes: &[Route]) -> String {
    let b = &g.bounds;
    let w = b.max.x - b.min.x;
    let h = b.max.y - b.min.y;
    let margin = 0.05 * w.max(h).max(1e-9);
    let thin = 0.004 * w.max(h).max(1e-9);
    let thick = 2.5 * thin;
    let node_r = 2.0 * thin;
    let site_r = 3.0 * thin;

    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">\n",
        fmt(b.min.x - margin),
        fmt(fy(b.max.y) - margin),
        fmt(w + 2.0 * margin),
        fmt(h + 2.0 * margin)
    );
    let _ = write!(
        svg,
        "  <rect class=\"box\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"{}\"/>\n",
        fmt(b.min.x),
        fmt(fy(b.max.y)),
        fmt(w),
        fmt(h),
        fmt(thin)
    );

    // curves: one stroke element per scenic curve
    for curve in &g.curves {
        match &curve.geometry {
            CurveGeometry::Line(_) => {
                // the union of this line's edges is one straight span
                let mut pts: Vec<Point2> = Vec::new();
                for e in g.edges.iter().filter(|e| e.curve_id == curve.id) {
                    if let EdgeGeometry::Segment { from, to } = &e.geometry {
                        pts.push(*from);
                        pts.push(*to);
                    }
                }
                if pts.is_empty() {
                    continue;
                }
                let lo = pts
                    .iter()
                    .copied()
                    .min_by(|a, b| a.lex_cmp(*b))
                    .unwrap();
                let hi = pts
                    .iter()
                    .copied()
                    .max_by(|a, b| a.lex_cmp(*b))
                    .unwrap();
                let _ = write!(
                    svg,
                    "  <line class=\"curve\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{COLOR_CURVE}\" stroke-width=\"{}\"/>\n",
                    fmt(lo.x),
                    fmt(fy(lo.y)),
                    fmt(hi.x),
                    fmt(fy(hi.y)),
                    fmt(thin)
                );
            }
            CurveGeometry::Circle(_) => {
                let mut d = String::new();
                for e in g.edges.iter().filter(|e| e.curve_id == curve.id) {
                    if let EdgeGeometry::Arc(arc) = &e.geometry {
                        arc_path_segment(arc, false, true, &mut d);
                    }
                }
                if d.is_empty() {
                    continue;
                }
                let _ = write!(
                    svg,
                    "  <path class=\"curve\" d=\"{}\" fill=\"none\" stroke=\"{COLOR_CURVE}\" stroke-width=\"{}\"/>\n",
                    d.trim_end(),
                    fmt(thin)
                );
            }
        }
    }

    // routes: a thick stroke for scenic steps, dashed paths for connectors
    for route in routes {
        let mut d = String::new();
        let mut cursor: Option<Point2> = None;
        let mut connectors: Vec<(Point2, Point2)> = Vec::new();
        for step in &route.steps {
            match step {
                RouteStep::Edge { edge_id, reversed } => {
                    let e = &g.edges[*edge_id];
                    let (from, to) = {
                        let (a, b) = e.endpoints;
                        let (a, b) = if *reversed { (b, a) } else { (a, b) };
                        (g.nodes[a].coords, g.nodes[b].coords)
                    };
                    let fresh = cursor.map_or(true, |c| c.dist(from) > 1e-9);
                    match &e.geometry {
                        EdgeGeometry::Segment { .. } => {
                            if fresh {
                                let _ = write!(d, "M {} {} ", fmt(from.x), fmt(fy(from.y)));
                            }
                            let _ = write!(d, "L {} {} ", fmt(to.x), fmt(fy(to.y)));
                        }
                        EdgeGeometry::Arc(arc) => {
                            arc_path_segment(arc, *reversed, fresh, &mut d);
                        }
                    }
                    cursor = Some(to);
                }
                RouteStep::Connector { from, to, .. } => {
                    connectors.push((g.nodes[*from].coords, g.nodes[*to].coords));
                    cursor = Some(g.nodes[*to].coords);
                }
            }
        }
        if !d.is_empty() {
            let _ = write!(
                svg,
                "  <path class=\"route\" d=\"{}\" fill=\"none\" stroke=\"{COLOR_ROUTE}\" stroke-width=\"{}\" stroke-linecap=\"round\"/>\n",
                d.trim_end(),
                fmt(thick)
            );
        }
        for (from, to) in connectors {
            let _ = write!(
                svg,
                "  <path class=\"connector\" d=\"M {} {} L {} {}\" fill=\"none\" stroke=\"{COLOR_CONNECTOR}\" stroke-width=\"{}\" stroke-dasharray=\"{} {}\"/>\n",
                fmt(from.x),
                fmt(fy(from.y)),
                fmt(to.x),
                fmt(fy(to.y)),
                fmt(thin),
                fmt(2.0 * thin),
                fmt(2.0 * thin)
            );
        }
    }

    // intersection node markers
    for n in g.nodes.iter().filter(|n| n.kind == NodeKind::Intersection) {
        let _ = write!(
            svg,
            "  <circle class=\"node\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#333333\"/>\n",
            fmt(n.coords.x),
            fmt(fy(n.coords.y)),
            fmt(node_r)
        );
    }

    // sites on top
    for s in sites {
        let fill = match s.color {
            Color::Red => COLOR_RED,
            Color::Blue => COLOR_BLUE,
            Color::Landmark => COLOR_LANDMARK,
        };
        let _ = write!(
            svg,
            "  <circle class=\"site\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\"/>\n",
            fmt(s.coords.x),
            fmt(fy(s.coords.y)),
            fmt(site_r)
        );
    }

    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_curves, build_graph};

    fn figure1_doc() -> InputDocument {
        serde_json::from_str(
            r#"{
              "points": [
                {"id": 0, "x": 0.0, "y": 0.0, "color": "red"},
                {"id": 1, "x": 4.0, "y": 0.0, "color": "blue"},
                {"id": 2, "x": 0.0, "y": 2.0, "color": "blue"},
                {"id": 3, "x": 1.0, "y": 4.0, "color": "blue"}
              ],
              "box": [-1.0, -1.0, 6.0, 5.0]
            }"#,
        )
        .unwrap()
    }

    fn figure1_graph() -> (ScenicGraph, Config) {
        let cfg = figure1_doc().to_config().unwrap();
        let curves = build_curves(&cfg).unwrap();
        (build_graph(&curves, &cfg).unwrap(), cfg)
    }

    #[test]
    fn parse_weighted_landmarks() {
        let doc: InputDocument = serde_json::from_str(
            r#"{
              "points": [
                {"id": 1, "x": 0.0, "y": 0.0, "color": "landmark", "weight": 138.5},
                {"id": 2, "x": -330.0, "y": -370.0, "color": "landmark", "weight": 136.4},
                {"id": 3, "x": -640.0, "y": -780.0, "color": "landmark", "weight": 61.0},
                {"id": 4, "x": 120.0, "y": -500.0, "color": "landmark", "weight": 20.0}
              ]
            }"#,
        )
        .unwrap();
        let cfg = doc.to_config().unwrap();
        assert_eq!(cfg.points.len(), 4);
        assert_eq!(cfg.mode, Mode::AllPairs);
        assert!((cfg.points[0].weight - 138.5).abs() < 1e-12);
        assert!((cfg.points[3].weight - 20.0).abs() < 1e-12);
    }

    #[test]
    fn parse_five_landmarks() {
        let weights = [330.0, 70.0, 20.0, 107.0, 16.0];
        let coords = [
            (0.0, 0.0),
            (-440.0, 380.0),
            (490.0, -420.0),
            (1400.0, -650.0),
            (950.0, -1050.0),
        ];
        let points: Vec<InputPoint> = weights
            .iter()
            .zip(coords)
            .enumerate()
            .map(|(i, (&w, (x, y)))| InputPoint {
                id: i as u32,
                x: Some(x),
                y: Some(y),
                coords: None,
                color: "landmark".into(),
                weight: Some(w),
            })
            .collect();
        let doc = InputDocument {
            points,
            ..Default::default()
        };
        let cfg = doc.to_config().unwrap();
        assert_eq!(cfg.points.len(), 5);
        assert_eq!(cfg.pair_ids().len(), 10);
    }

    #[test]
    fn zero_weight_rejected() {
        let doc: InputDocument = serde_json::from_str(
            r#"{"points": [
                {"id": 0, "x": 0.0, "y": 0.0, "color": "red", "weight": 0.0},
                {"id": 1, "x": 1.0, "y": 0.0, "color": "blue"}
            ]}"#,
        )
        .unwrap();
        let err = doc.to_config().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("/points/0/weight"), "{msg}");
        assert!(msg.contains("weight must be positive"), "{msg}");
    }

    #[test]
    fn duplicate_id_rejected() {
        let doc: InputDocument = serde_json::from_str(
            r#"{"points": [
                {"id": 7, "x": 0.0, "y": 0.0, "color": "red"},
                {"id": 7, "x": 1.0, "y": 0.0, "color": "blue"}
            ]}"#,
        )
        .unwrap();
        let msg = doc.to_config().unwrap_err().to_string();
        assert!(msg.contains("/points/1/id"), "{msg}");
    }

    #[test]
    fn unknown_color_rejected_with_path() {
        let doc: InputDocument = serde_json::from_str(
            r#"{"points": [
                {"id": 0, "x": 0.0, "y": 0.0, "color": "green"},
                {"id": 1, "x": 1.0, "y": 0.0, "color": "blue"}
            ]}"#,
        )
        .unwrap();
        let msg = doc.to_config().unwrap_err().to_string();
        assert!(msg.contains("/points/0/color"), "{msg}");
    }

    #[test]
    fn points_d_dimension_check() {
        let doc: InputDocument = serde_json::from_str(
            r#"{"points": [
                {"id": 0, "coords": [0.0, 0.0, 0.0], "color": "red"},
                {"id": 1, "coords": [1.0, 0.0, 0.0], "color": "blue"}
            ]}"#,
        )
        .unwrap();
        let pts = doc.to_points_d(3).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(doc.to_points_d(4).is_err());
    }

    #[test]
    fn graph_json_roundtrip_byte_identical() {
        let (g, _) = figure1_graph();
        let first = to_json_string(&g).unwrap();
        let parsed: ScenicGraph = serde_json::from_str(&first).unwrap();
        let second = to_json_string(&parsed).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn empty_graph_svg_has_box_only() {
        let g = ScenicGraph {
            curves: vec![],
            nodes: vec![],
            edges: vec![],
            bounds: Rect::new(Point2::new(0.0, 0.0), Point2::new(2.0, 1.0)),
            tolerance: crate::geometry::Tolerance::default(),
            notes: vec![],
        };
        let svg = render_svg(&g, &[], &[]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("class=\"box\"").count(), 1);
        assert_eq!(svg.matches("class=\"curve\"").count(), 0);
        assert_eq!(svg.matches("class=\"node\"").count(), 0);
    }

    #[test]
    fn figure1_svg_element_counts() {
        let (g, cfg) = figure1_graph();
        let apsp = crate::routing::apsp(&g).unwrap();
        let route = crate::routing::route_minmax_hull(
            &g,
            &apsp,
            &crate::routing::RoutingParams {
                site_centroid: Some(cfg.site_centroid()),
                ..Default::default()
            },
        );
        let svg = render_svg(&g, &cfg.points, &[route]);
        assert_eq!(svg.matches("<line class=\"curve\"").count(), 3);
        assert_eq!(svg.matches("class=\"node\"").count(), 3);
        assert_eq!(svg.matches("class=\"route\"").count(), 1);
        assert_eq!(svg.matches("class=\"site\"").count(), 4);
    }

    #[test]
    fn connector_renders_one_dashed_path() {
        let (g, cfg) = figure1_graph();
        let e0 = &g.edges[0];
        let e1 = g
            .edges
            .iter()
            .find(|e| {
                e.id != e0.id
                    && e.endpoints.0 != e0.endpoints.1
                    && e.endpoints.1 != e0.endpoints.1
            })
            .unwrap();
        let route = Route {
            steps: vec![
                RouteStep::Edge {
                    edge_id: e0.id,
                    reversed: false,
                },
                RouteStep::Connector {
                    from: e0.endpoints.1,
                    to: e1.endpoints.0,
                    length: g.nodes[e0.endpoints.1]
                        .coords
                        .dist(g.nodes[e1.endpoints.0].coords),
                },
                RouteStep::Edge {
                    edge_id: e1.id,
                    reversed: false,
                },
            ],
            flags: vec![],
        };
        let svg = render_svg(&g, &cfg.points, &[route]);
        assert_eq!(svg.matches("class=\"connector\"").count(), 1);
        assert_eq!(svg.matches("stroke-dasharray").count(), 1);
    }

    #[test]
    fn svg_arc_matches_geometry() {
        // a circle-bearing graph: one Apollonius circle fully inside the box
        let doc: InputDocument = serde_json::from_str(
            r#"{"points": [
                {"id": 0, "x": 0.0, "y": 0.0, "color": "red", "weight": 2.0},
                {"id": 1, "x": 3.0, "y": 0.0, "color": "blue", "weight": 1.0}
            ], "box": [-8.0, -8.0, 12.0, 8.0]}"#,
        )
        .unwrap();
        let cfg = doc.to_config().unwrap();
        let curves = build_curves(&cfg).unwrap();
        let g = build_graph(&curves, &cfg).unwrap();
        let svg = render_svg(&g, &cfg.points, &[]);
        // full circle splits into two arc commands
        assert_eq!(svg.matches("A ").count(), 2);
        // radius 2 appears in the arc commands
        assert!(svg.contains("A 2.000000 2.000000"));
    }

    #[test]
    fn svg_deterministic() {
        let (g, cfg) = figure1_graph();
        let a = render_svg(&g, &cfg.points, &[]);
        let b = render_svg(&g, &cfg.points, &[]);
        assert_eq!(a, b);
    }

    #[test]
    fn report_rows_and_ranking() {
        let (g, cfg) = figure1_graph();
        let apsp = crate::routing::apsp(&g).unwrap();
        let params = crate::routing::RoutingParams {
            site_centroid: Some(cfg.site_centroid()),
            ..Default::default()
        };
        let results = vec![
            (
                "minmax-hull".to_string(),
                crate::routing::route_minmax_hull(&g, &apsp, &params),
            ),
            (
                "densest-line".to_string(),
                crate::routing::route_densest_line(&g, &apsp, &params).unwrap(),
            ),
            ("acu".to_string(), crate::routing::route_acu(&g, &apsp)),
            ("acch".to_string(), crate::routing::route_acch(&g, &apsp)),
            ("dpe".to_string(), crate::routing::route_dpe(&g, &apsp)),
        ];
        let order = crate::routing::RequirementOrder::sec3();
        let report = build_report(&g, &cfg.points, &results, &order, "sec3").unwrap();
        assert_eq!(report.rows.len(), 5);
        assert_eq!(report.ranking.len(), 5);
        // rows are sorted: best first
        for w in report.rows.windows(2) {
            assert_ne!(
                crate::routing::compare_routes(&w[1].metrics, &w[0].metrics, &order),
                std::cmp::Ordering::Less
            );
        }
        // metrics in the report equal a fresh recomputation exactly
        for row in &report.rows {
            let route = results
                .iter()
                .find(|(n, _)| *n == row.algorithm)
                .map(|(_, r)| r)
                .unwrap();
            let fresh = crate::routing::route_metrics(&g, route).unwrap();
            assert_eq!(serde_json::to_string(&fresh).unwrap(),
                       serde_json::to_string(&row.metrics).unwrap());
        }
    }

    #[test]
    fn atomic_write_creates_file() {
        let dir = std::env::temp_dir().join("scenic-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.json");
        write_atomic(&path, b"{}\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "{}\n");
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
