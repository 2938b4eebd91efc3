//! Scenic curves for a colored-point configuration and the arrangement
//! graph G(I_P, E_P) of their intersections inside a bounding box.
//!
//! Every red-blue pair (or every unordered pair in landmark mode) yields
//! one equidistance locus: a perpendicular bisector for equal weights,
//! an Apollonius circle otherwise. Curves are intersected pairwise,
//! intersection points outside the box are dropped, near-coincident
//! points are merged, and each curve is subdivided at its on-curve nodes
//! into weighted edges labeled with the pairs they view.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::geometry::{
    self, Arc, CircleCurve, CurveIntersection, LineCurve, Point2, Tolerance, TAU,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
    Landmark,
}

/// A site: red/blue/landmark, with coordinates and a positive weight.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ColoredPoint {
    pub id: u32,
    pub coords: Point2,
    pub color: Color,
    pub weight: f64,
}

impl ColoredPoint {
    pub fn new(id: u32, coords: Point2, color: Color, weight: f64) -> Self {
        ColoredPoint {
            id,
            coords,
            color,
            weight,
        }
    }
}

/// An unordered site pair, stored as (red, blue) in bipartite mode and
/// (lower id, higher id) in landmark mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairId {
    pub first: u32,
    pub second: u32,
}

impl PairId {
    pub fn new(first: u32, second: u32) -> Self {
        PairId { first, second }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CurveGeometry {
    Line(LineCurve),
    Circle(CircleCurve),
}

/// The equidistance locus for one or more site pairs (several when the
/// pairs' loci coincide, as in symmetric configurations).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenicCurve {
    pub id: usize,
    pub geometry: CurveGeometry,
    pub pairs: BTreeSet<PairId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point2,
    pub max: Point2,
}

impl Rect {
    pub fn new(min: Point2, max: Point2) -> Self {
        Rect { min, max }
    }

    pub fn contains(&self, p: Point2, slack: f64) -> bool {
        p.x >= self.min.x - slack
            && p.x <= self.max.x + slack
            && p.y >= self.min.y - slack
            && p.y <= self.max.y + slack
    }

    pub fn diagonal(&self) -> f64 {
        self.min.dist(self.max)
    }

    pub fn center(&self) -> Point2 {
        Point2::new(
            (self.min.x + self.max.x) / 2.0,
            (self.min.y + self.max.y) / 2.0,
        )
    }

    pub fn corners(&self) -> [Point2; 4] {
        [
            self.min,
            Point2::new(self.max.x, self.min.y),
            self.max,
            Point2::new(self.min.x, self.max.y),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Bipartite,
    AllPairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoxSpec {
    /// Axis-aligned box of the sites, half-extents multiplied by the
    /// factor (>= 1).
    Auto { expand: f64 },
    Explicit(Rect),
}

impl Default for BoxSpec {
    fn default() -> Self {
        BoxSpec::Auto { expand: 1.5 }
    }
}

pub const DEFAULT_MAX_CURVES: usize = 10_000;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Config {
    pub points: Vec<ColoredPoint>,
    pub mode: Mode,
    pub box_spec: BoxSpec,
    pub eps_abs: f64,
    pub max_curves: usize,
}

impl Config {
    pub fn new(points: Vec<ColoredPoint>, mode: Mode) -> Self {
        Config {
            points,
            mode,
            box_spec: BoxSpec::default(),
            eps_abs: Tolerance::DEFAULT_EPS,
            max_curves: DEFAULT_MAX_CURVES,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for p in &self.points {
            if !seen.insert(p.id) {
                return Err(Error::Data(format!("duplicate point id {}", p.id)));
            }
            if !(p.weight > 0.0 && p.weight.is_finite()) {
                return Err(Error::Data(format!(
                    "point {}: weight must be positive",
                    p.id
                )));
            }
            if !p.coords.is_finite() {
                return Err(Error::Data(format!("point {}: coordinates must be finite", p.id)));
            }
        }
        if self.mode == Mode::Bipartite {
            let reds = self.points.iter().filter(|p| p.color == Color::Red).count();
            let blues = self.points.iter().filter(|p| p.color == Color::Blue).count();
            if reds == 0 || blues == 0 {
                return Err(Error::Data(
                    "bipartite mode needs at least one red and one blue point".into(),
                ));
            }
            if self.points.iter().any(|p| p.color == Color::Landmark) {
                return Err(Error::Data(
                    "landmark points require all-pairs mode".into(),
                ));
            }
        }
        if let BoxSpec::Explicit(rect) = self.box_spec {
            if !(rect.min.x < rect.max.x && rect.min.y < rect.max.y) {
                return Err(Error::Data("box min must be below box max".into()));
            }
            for p in &self.points {
                if !rect.contains(p.coords, 0.0) {
                    return Err(Error::Data(format!(
                        "point {} lies outside the explicit box",
                        p.id
                    )));
                }
            }
        }
        Ok(())
    }

    /// The working bounding box: explicit, or the site box expanded
    /// around its center.
    pub fn resolved_box(&self) -> Rect {
        match self.box_spec {
            BoxSpec::Explicit(rect) => rect,
            BoxSpec::Auto { expand } => auto_box(&self.points, expand),
        }
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance::new(self.eps_abs, self.resolved_box().diagonal())
    }

    /// All viewable pairs under the configured mode, in stable order.
    pub fn pair_ids(&self) -> Vec<(PairId, &ColoredPoint, &ColoredPoint)> {
        let mut out = Vec::new();
        match self.mode {
            Mode::Bipartite => {
                for r in self.points.iter().filter(|p| p.color == Color::Red) {
                    for b in self.points.iter().filter(|p| p.color == Color::Blue) {
                        out.push((PairId::new(r.id, b.id), r, b));
                    }
                }
            }
            Mode::AllPairs => {
                for (i, a) in self.points.iter().enumerate() {
                    for b in self.points.iter().skip(i + 1) {
                        let (lo, hi) = if a.id < b.id { (a, b) } else { (b, a) };
                        out.push((PairId::new(lo.id, hi.id), lo, hi));
                    }
                }
            }
        }
        out
    }

    pub fn site_centroid(&self) -> Point2 {
        let n = self.points.len().max(1) as f64;
        let (sx, sy) = self
            .points
            .iter()
            .fold((0.0, 0.0), |(x, y), p| (x + p.coords.x, y + p.coords.y));
        Point2::new(sx / n, sy / n)
    }
}

fn auto_box(points: &[ColoredPoint], expand: f64) -> Rect {
    let mut min = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        min.x = min.x.min(p.coords.x);
        min.y = min.y.min(p.coords.y);
        max.x = max.x.max(p.coords.x);
        max.y = max.y.max(p.coords.y);
    }
    if points.is_empty() {
        return Rect::new(Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0));
    }
    let center = Point2::new((min.x + max.x) / 2.0, (min.y + max.y) / 2.0);
    let mut hx = (max.x - min.x) / 2.0 * expand;
    let mut hy = (max.y - min.y) / 2.0 * expand;
    // degenerate extents: pad with the larger half-extent, or unit size
    let pad = hx.max(hy).max(1.0);
    if hx <= 0.0 {
        hx = pad;
    }
    if hy <= 0.0 {
        hy = pad;
    }
    Rect::new(
        Point2::new(center.x - hx, center.y - hy),
        Point2::new(center.x + hx, center.y + hy),
    )
}

/// Equidistance locus of one weighted pair: a perpendicular bisector for
/// (near-)equal weights, else the Apollonius circle of ratio w1/w2.
pub fn scenic_curve(r: &ColoredPoint, b: &ColoredPoint, tol: &Tolerance) -> Result<CurveGeometry> {
    let (rp, bp) = (r.coords, b.coords);
    if rp.dist(bp) <= tol.effective() {
        return Err(Error::DegeneratePair(r.id, b.id));
    }
    let (w1, w2) = (r.weight, b.weight);
    if (w1 - w2).abs() <= tol.eps_abs * w1.max(w2) {
        let mid = rp + (bp - rp).scale(0.5);
        return Ok(CurveGeometry::Line(LineCurve::new(mid, (bp - rp).perp())));
    }
    let k = w1 / w2;
    let k2 = k * k;
    // locus of d(P, r)/d(P, b) = k
    let center = Point2::new(
        (rp.x - k2 * bp.x) / (1.0 - k2),
        (rp.y - k2 * bp.y) / (1.0 - k2),
    );
    let radius = k * rp.dist(bp) / (1.0 - k2).abs();
    Ok(CurveGeometry::Circle(CircleCurve::new(center, radius)))
}

fn same_geometry(a: &CurveGeometry, b: &CurveGeometry, tol: &Tolerance) -> bool {
    let eps = tol.effective();
    match (a, b) {
        (CurveGeometry::Line(l1), CurveGeometry::Line(l2)) => {
            l1.direction.cross(l2.direction).abs() <= tol.eps_abs
                && l1.dist_to(l2.anchor) <= eps
        }
        (CurveGeometry::Circle(c1), CurveGeometry::Circle(c2)) => {
            c1.center.dist(c2.center) <= eps && (c1.radius - c2.radius).abs() <= eps
        }
        _ => false,
    }
}

/// Generate one curve per pair and merge geometrically coincident ones.
pub fn build_curves(cfg: &Config) -> Result<Vec<ScenicCurve>> {
    cfg.validate()?;
    let tol = cfg.tolerance();
    let pairs = cfg.pair_ids();
    if pairs.len() > cfg.max_curves {
        return Err(Error::CurveCapExceeded {
            generated: pairs.len(),
            cap: cfg.max_curves,
        });
    }
    let mut curves: Vec<ScenicCurve> = Vec::new();
    for (pair, r, b) in pairs {
        let geom = scenic_curve(r, b, &tol)?;
        match curves.iter_mut().find(|c| same_geometry(&c.geometry, &geom, &tol)) {
            Some(existing) => {
                existing.pairs.insert(pair);
            }
            None => curves.push(ScenicCurve {
                id: curves.len(),
                geometry: geom,
                pairs: BTreeSet::from([pair]),
            }),
        }
    }
    Ok(curves)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    Intersection,
    BoundaryLeaf,
    CircleAnchor,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Node {
    pub coords: Point2,
    pub kind: NodeKind,
    /// Ids of the curves through this node.
    pub curves: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EdgeGeometry {
    Segment { from: Point2, to: Point2 },
    Arc(Arc),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Edge {
    pub id: usize,
    pub endpoints: (usize, usize),
    pub curve_id: usize,
    pub geometry: EdgeGeometry,
    pub length: f64,
    pub pairs: BTreeSet<PairId>,
}

impl Edge {
    pub fn is_self_loop(&self) -> bool {
        self.endpoints.0 == self.endpoints.1
    }

    pub fn other_endpoint(&self, node: usize) -> usize {
        if node == self.endpoints.0 {
            self.endpoints.1
        } else {
            self.endpoints.0
        }
    }

    /// Sample `n` points uniformly along the edge geometry.
    pub fn sample(&self, n: usize) -> Vec<Point2> {
        (0..n)
            .map(|i| {
                let f = (i as f64 + 0.5) / n as f64;
                match &self.geometry {
                    EdgeGeometry::Segment { from, to } => *from + (*to - *from).scale(f),
                    EdgeGeometry::Arc(arc) => arc.point_at_fraction(f),
                }
            })
            .collect()
    }
}

/// The arrangement graph: intersection nodes, boundary leaves, and
/// curve segments/arcs between them. An undirected multigraph; parallel
/// edges occur when two curves bound a lens.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenicGraph {
    pub curves: Vec<ScenicCurve>,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    pub bounds: Rect,
    pub tolerance: Tolerance,
    pub notes: Vec<String>,
}

impl ScenicGraph {
    /// All viewable pairs (union over curves).
    pub fn all_pairs(&self) -> BTreeSet<PairId> {
        self.curves
            .iter()
            .flat_map(|c| c.pairs.iter().copied())
            .collect()
    }

    pub fn intersection_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.kind == NodeKind::Intersection)
            .map(|(i, _)| i)
    }

    pub fn incident_edges(&self, node: usize) -> impl Iterator<Item = &Edge> {
        self.edges
            .iter()
            .filter(move |e| e.endpoints.0 == node || e.endpoints.1 == node)
    }

    /// Node degree counted in endpoint slots (a self-loop contributes 2).
    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .map(|e| {
                (e.endpoints.0 == node) as usize + (e.endpoints.1 == node) as usize
            })
            .sum()
    }

    /// Union of pair labels over a set of edge ids, plus the completeness
    /// ratio against all viewable pairs.
    pub fn pair_coverage<I: IntoIterator<Item = usize>>(&self, edges: I) -> (BTreeSet<PairId>, f64) {
        let mut covered = BTreeSet::new();
        for id in edges {
            if let Some(e) = self.edges.get(id) {
                covered.extend(e.pairs.iter().copied());
            }
        }
        let total = self.all_pairs().len();
        let ratio = if total == 0 {
            0.0
        } else {
            covered.len() as f64 / total as f64
        };
        (covered, ratio)
    }

    /// Connected components over nodes, each sorted ascending.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.nodes.len());
        for e in &self.edges {
            uf.union(e.endpoints.0, e.endpoints.1);
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..self.nodes.len() {
            groups.entry(uf.find(i)).or_default().push(i);
        }
        groups.into_values().collect()
    }
}

/// In-box extent of a curve.
enum Extent {
    Line { t0: f64, t1: f64 },
    FullCircle,
    /// CCW intervals (start angle, sweep) inside the box.
    CircleIntervals(Vec<(f64, f64)>),
    None,
}

struct Candidate {
    p: Point2,
    kind: NodeKind,
    curves: Vec<usize>,
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller root for deterministic clustering
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    pub fn connected(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

/// Clip an infinite line to a rectangle; returns the parameter interval
/// or nothing when the line misses the box.
fn clip_line(line: &LineCurve, rect: &Rect, eps: f64) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let a = line.anchor;
    let d = line.direction;
    for (da, aa, mn, mx) in [
        (d.x, a.x, rect.min.x, rect.max.x),
        (d.y, a.y, rect.min.y, rect.max.y),
    ] {
        if da.abs() > 1e-15 {
            let (t0, t1) = ((mn - aa) / da, (mx - aa) / da);
            let (t0, t1) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
            lo = lo.max(t0);
            hi = hi.min(t1);
        } else if aa < mn - eps || aa > mx + eps {
            return None;
        }
    }
    (hi - lo > eps).then_some((lo, hi))
}

/// Angles at which a circle crosses the rectangle boundary, with the
/// crossing points.
fn circle_box_crossings(c: &CircleCurve, rect: &Rect, tol: &Tolerance) -> Vec<(f64, Point2)> {
    let eps = tol.effective();
    let corners = rect.corners();
    let mut out: Vec<(f64, Point2)> = Vec::new();
    for i in 0..4 {
        let (p0, p1) = (corners[i], corners[(i + 1) % 4]);
        let side = LineCurve::new(p0, p1 - p0);
        for p in geometry::intersect_line_circle(&side, c, tol).points() {
            // keep crossings on the actual side, i.e. inside the rect
            if rect.contains(p, eps) {
                out.push((c.angle_of(p), p));
            }
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    // merge angle duplicates (corner crossings, tangencies)
    let ang_eps = eps / c.radius.max(eps);
    let mut dedup: Vec<(f64, Point2)> = Vec::new();
    for (ang, p) in out {
        match dedup.last() {
            Some((last, _)) if (ang - last).abs() <= ang_eps => {}
            _ => dedup.push((ang, p)),
        }
    }
    if dedup.len() > 1 {
        let (first, last) = (dedup[0].0, dedup[dedup.len() - 1].0);
        if first + TAU - last <= ang_eps {
            dedup.pop();
        }
    }
    dedup
}

/// Build the arrangement graph of `curves` inside the configured box.
pub fn build_graph(curves: &[ScenicCurve], cfg: &Config) -> Result<ScenicGraph> {
    let rect = cfg.resolved_box();
    let tol = cfg.tolerance();
    let eps = tol.effective();

    // (a) pairwise curve intersections, box-filtered
    let mut cands: Vec<Candidate> = Vec::new();
    for i in 0..curves.len() {
        for j in (i + 1)..curves.len() {
            let hit = match (&curves[i].geometry, &curves[j].geometry) {
                (CurveGeometry::Line(a), CurveGeometry::Line(b)) => {
                    geometry::intersect_lines(a, b, &tol)
                }
                (CurveGeometry::Line(a), CurveGeometry::Circle(b)) => {
                    geometry::intersect_line_circle(a, b, &tol)
                }
                (CurveGeometry::Circle(a), CurveGeometry::Line(b)) => {
                    geometry::intersect_line_circle(b, a, &tol)
                }
                (CurveGeometry::Circle(a), CurveGeometry::Circle(b)) => {
                    geometry::intersect_circles(a, b, &tol)
                }
            };
            debug_assert!(hit != CurveIntersection::Coincident, "curves must be merged");
            for p in hit.points() {
                if rect.contains(p, eps) {
                    cands.push(Candidate {
                        p,
                        kind: NodeKind::Intersection,
                        curves: vec![i, j],
                    });
                }
            }
        }
    }

    // (b) per-curve in-box extents; clip points become boundary leaves
    let mut extents: Vec<Extent> = Vec::with_capacity(curves.len());
    for (ci, curve) in curves.iter().enumerate() {
        let extent = match &curve.geometry {
            CurveGeometry::Line(line) => match clip_line(line, &rect, eps) {
                Some((t0, t1)) => {
                    cands.push(Candidate {
                        p: line.point_at(t0),
                        kind: NodeKind::BoundaryLeaf,
                        curves: vec![ci],
                    });
                    cands.push(Candidate {
                        p: line.point_at(t1),
                        kind: NodeKind::BoundaryLeaf,
                        curves: vec![ci],
                    });
                    Extent::Line { t0, t1 }
                }
                None => Extent::None,
            },
            CurveGeometry::Circle(circle) => {
                let crossings = circle_box_crossings(circle, &rect, &tol);
                if crossings.is_empty() {
                    if rect.contains(circle.point_at(0.0), eps) {
                        Extent::FullCircle
                    } else {
                        Extent::None
                    }
                } else {
                    let m = crossings.len();
                    let mut intervals = Vec::new();
                    for k in 0..m {
                        let start = crossings[k].0;
                        let mut end = crossings[(k + 1) % m].0;
                        if end <= start {
                            end += TAU;
                        }
                        if m == 1 {
                            end = start + TAU;
                        }
                        let sweep = end - start;
                        let mid = circle.point_at(start + sweep / 2.0);
                        if rect.contains(mid, eps) && sweep > eps / circle.radius.max(eps) {
                            cands.push(Candidate {
                                p: crossings[k].1,
                                kind: NodeKind::BoundaryLeaf,
                                curves: vec![ci],
                            });
                            cands.push(Candidate {
                                p: crossings[(k + 1) % m].1,
                                kind: NodeKind::BoundaryLeaf,
                                curves: vec![ci],
                            });
                            intervals.push((start, sweep));
                        }
                    }
                    if intervals.is_empty() {
                        Extent::None
                    } else {
                        Extent::CircleIntervals(intervals)
                    }
                }
            }
        };
        extents.push(extent);
    }

    // anchors for circles with no node at all
    for (ci, curve) in curves.iter().enumerate() {
        if let (CurveGeometry::Circle(c), Extent::FullCircle) = (&curve.geometry, &extents[ci]) {
            if !cands.iter().any(|cand| cand.curves.contains(&ci)) {
                cands.push(Candidate {
                    p: c.point_at(0.0),
                    kind: NodeKind::CircleAnchor,
                    curves: vec![ci],
                });
            }
        }
    }

    // (c) cluster near-coincident candidates, snap to centroids
    let mut uf = UnionFind::new(cands.len());
    for i in 0..cands.len() {
        for j in (i + 1)..cands.len() {
            if cands[i].p.dist(cands[j].p) <= eps {
                uf.union(i, j);
            }
        }
    }
    let mut clusters: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..cands.len() {
        clusters.entry(uf.find(i)).or_default().push(i);
    }
    struct Cluster {
        coords: Point2,
        kind: NodeKind,
        curves: BTreeSet<usize>,
        members: Vec<usize>,
    }
    let mut cluster_list: Vec<Cluster> = clusters
        .into_values()
        .map(|members| {
            let n = members.len() as f64;
            let (sx, sy) = members
                .iter()
                .fold((0.0, 0.0), |(x, y), &i| (x + cands[i].p.x, y + cands[i].p.y));
            let kind = members
                .iter()
                .map(|&i| cands[i].kind)
                .min()
                .unwrap_or(NodeKind::CircleAnchor);
            let curve_set = members
                .iter()
                .flat_map(|&i| cands[i].curves.iter().copied())
                .collect();
            Cluster {
                coords: Point2::new(sx / n, sy / n),
                kind,
                curves: curve_set,
                members,
            }
        })
        .collect();
    cluster_list.sort_by(|a, b| a.coords.lex_cmp(b.coords));

    let mut cand_to_node = vec![usize::MAX; cands.len()];
    let nodes: Vec<Node> = cluster_list
        .iter()
        .enumerate()
        .map(|(ni, cl)| {
            for &m in &cl.members {
                cand_to_node[m] = ni;
            }
            Node {
                coords: cl.coords,
                kind: cl.kind,
                curves: cl.curves.clone(),
            }
        })
        .collect();

    // (d) subdivide each curve at its on-curve nodes
    let mut edges: Vec<Edge> = Vec::new();
    let push_edge =
        |edges: &mut Vec<Edge>, a: usize, b: usize, ci: usize, geom: EdgeGeometry, len: f64| {
            if len <= eps {
                return;
            }
            edges.push(Edge {
                id: edges.len(),
                endpoints: (a, b),
                curve_id: ci,
                geometry: geom,
                length: len,
                pairs: curves[ci].pairs.clone(),
            });
        };
    for (ci, curve) in curves.iter().enumerate() {
        let mut on_curve: Vec<usize> = nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.curves.contains(&ci))
            .map(|(i, _)| i)
            .collect();
        on_curve.dedup();
        match (&curve.geometry, &extents[ci]) {
            (CurveGeometry::Line(line), Extent::Line { t0, t1 }) => {
                let mut params: Vec<(f64, usize)> = on_curve
                    .iter()
                    .map(|&n| (line.param_of(nodes[n].coords).clamp(*t0, *t1), n))
                    .collect();
                params.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                for w in params.windows(2) {
                    let (na, nb) = (w[0].1, w[1].1);
                    if na == nb {
                        continue;
                    }
                    let (pa, pb) = (nodes[na].coords, nodes[nb].coords);
                    push_edge(
                        &mut edges,
                        na,
                        nb,
                        ci,
                        EdgeGeometry::Segment { from: pa, to: pb },
                        pa.dist(pb),
                    );
                }
            }
            (CurveGeometry::Circle(circle), Extent::FullCircle) => {
                let mut angles: Vec<(f64, usize)> = on_curve
                    .iter()
                    .map(|&n| (circle.angle_of(nodes[n].coords), n))
                    .collect();
                angles.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                match angles.len() {
                    0 => unreachable!("anchor candidate guarantees a node"),
                    1 => {
                        let (ang, n) = angles[0];
                        push_edge(
                            &mut edges,
                            n,
                            n,
                            ci,
                            EdgeGeometry::Arc(Arc::new(*circle, ang, TAU)),
                            circle.radius * TAU,
                        );
                    }
                    m => {
                        for k in 0..m {
                            let (a0, n0) = angles[k];
                            let (mut a1, n1) = angles[(k + 1) % m];
                            if a1 <= a0 {
                                a1 += TAU;
                            }
                            let sweep = a1 - a0;
                            let arc = Arc::new(*circle, a0, sweep);
                            push_edge(
                                &mut edges,
                                n0,
                                n1,
                                ci,
                                EdgeGeometry::Arc(arc),
                                circle.radius * sweep,
                            );
                        }
                    }
                }
            }
            (CurveGeometry::Circle(circle), Extent::CircleIntervals(intervals)) => {
                let ang_eps = eps / circle.radius.max(eps);
                for &(start, sweep) in intervals {
                    let mut inside: Vec<(f64, usize)> = on_curve
                        .iter()
                        .filter_map(|&n| {
                            let a = circle.angle_of(nodes[n].coords);
                            let mut off = a - start;
                            while off < -ang_eps {
                                off += TAU;
                            }
                            (off <= sweep + ang_eps)
                                .then(|| (off.clamp(0.0, sweep), n))
                        })
                        .collect();
                    inside.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                    inside.dedup_by_key(|e| e.1);
                    for w in inside.windows(2) {
                        let ((o0, n0), (o1, n1)) = (w[0], w[1]);
                        if n0 == n1 || o1 - o0 <= ang_eps {
                            continue;
                        }
                        let arc = Arc::new(*circle, start + o0, o1 - o0);
                        push_edge(
                            &mut edges,
                            n0,
                            n1,
                            ci,
                            EdgeGeometry::Arc(arc),
                            circle.radius * (o1 - o0),
                        );
                    }
                }
            }
            (_, Extent::None) => {}
            _ => unreachable!("extent kind matches geometry kind"),
        }
    }

    let mut notes = Vec::new();
    if !nodes.iter().any(|n| n.kind == NodeKind::Intersection) {
        notes.push("disconnected coverage: no curve-curve intersections inside the box".into());
    }

    Ok(ScenicGraph {
        curves: curves.to_vec(),
        nodes,
        edges,
        bounds: rect,
        tolerance: tol,
        notes,
    })
}

/// Verify that 32 points sampled on every edge satisfy the scenic
/// condition for every pair the edge is labeled with.
pub fn residual_soundness(g: &ScenicGraph, sites: &[ColoredPoint]) -> std::result::Result<(), String> {
    let by_id: std::collections::BTreeMap<u32, &ColoredPoint> =
        sites.iter().map(|p| (p.id, p)).collect();
    let limit = g.tolerance.effective();
    for e in &g.edges {
        for p in e.sample(32) {
            for pair in &e.pairs {
                let (r, b) = (by_id[&pair.first], by_id[&pair.second]);
                let res =
                    geometry::scenic_residual(p, r.coords, b.coords, r.weight, b.weight);
                // residual scales with weight * distance; normalize
                let scale = r.weight.max(b.weight);
                if res.abs() > limit * scale.max(1.0) {
                    return Err(format!(
                        "edge {} sample ({:.6}, {:.6}) residual {:.3e} exceeds {:.3e} for pair ({}, {})",
                        e.id, p.x, p.y, res, limit * scale.max(1.0), pair.first, pair.second
                    ));
                }
            }
        }
    }
    Ok(())
}
