//! All-pairs shortest paths on the scenic graph, the five route
//! generators, and the metrics/comparator implementing the requirement
//! hierarchies.
//!
//! Routes are walks: ordered steps that either traverse a graph edge
//! (scenic) or jump along a straight non-scenic connector. Every
//! algorithm is deterministic; all greedy ties break on the primary
//! criterion first and the lowest id last.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::geometry::{convex_hull_indices, Point2};
use crate::graph::{CurveGeometry, NodeKind, PairId, ScenicGraph};
use crate::{Error, Result};

pub const DEFAULT_NODE_CAP: usize = 2000;

/// Floyd-Warshall distances plus successor table for path
/// reconstruction, and the cheapest edge per adjacent node pair.
#[derive(Debug, Clone)]
pub struct ApspTable {
    n: usize,
    dist: Vec<f64>,
    next: Vec<usize>, // usize::MAX = unreachable
    best_edge: std::collections::BTreeMap<(usize, usize), usize>,
}

impl ApspTable {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// Node sequence of the shortest path, inclusive of both ends.
    pub fn path(&self, i: usize, j: usize) -> Option<Vec<usize>> {
        if i == j {
            return Some(vec![i]);
        }
        if !self.dist(i, j).is_finite() {
            return None;
        }
        let mut seq = vec![i];
        let mut u = i;
        while u != j {
            u = self.next[u * self.n + j];
            seq.push(u);
        }
        Some(seq)
    }

    /// Edge traversals realizing the shortest path: (edge id, reversed).
    pub fn path_edges(&self, i: usize, j: usize) -> Option<Vec<(usize, bool)>> {
        let seq = self.path(i, j)?;
        let mut out = Vec::new();
        for w in seq.windows(2) {
            let key = (w[0].min(w[1]), w[0].max(w[1]));
            let eid = *self.best_edge.get(&key)?;
            out.push((eid, w[0] == key.1 && key.0 != key.1));
        }
        Some(out)
    }
}

/// Floyd-Warshall over the undirected multigraph; parallel edges reduce
/// to the shorter one, self-loops do not shorten anything.
pub fn apsp(g: &ScenicGraph) -> Result<ApspTable> {
    let n = g.nodes.len();
    if n > DEFAULT_NODE_CAP {
        return Err(Error::NodeCapExceeded {
            nodes: n,
            cap: DEFAULT_NODE_CAP,
        });
    }
    let mut dist = vec![f64::INFINITY; n * n];
    let mut next = vec![usize::MAX; n * n];
    let mut best_edge: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for i in 0..n {
        dist[i * n + i] = 0.0;
        next[i * n + i] = i;
    }
    for e in &g.edges {
        if e.is_self_loop() {
            continue;
        }
        let (a, b) = e.endpoints;
        let key = (a.min(b), a.max(b));
        let better = match best_edge.get(&key) {
            Some(&prev) => e.length < g.edges[prev].length,
            None => true,
        };
        if better {
            best_edge.insert(key, e.id);
        }
        if e.length < dist[a * n + b] {
            dist[a * n + b] = e.length;
            dist[b * n + a] = e.length;
            next[a * n + b] = b;
            next[b * n + a] = a;
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = dist[i * n + k];
            if !dik.is_finite() {
                continue;
            }
            for j in 0..n {
                let cand = dik + dist[k * n + j];
                if cand < dist[i * n + j] {
                    dist[i * n + j] = cand;
                    next[i * n + j] = next[i * n + k];
                }
            }
        }
    }
    Ok(ApspTable {
        n,
        dist,
        next,
        best_edge,
    })
}

/// One step of a route: a scenic edge traversal or a straight
/// non-scenic connector between two graph nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "kebab-case")]
pub enum RouteStep {
    Edge { edge_id: usize, reversed: bool },
    Connector { from: usize, to: usize, length: f64 },
}

impl RouteStep {
    pub fn is_scenic(&self) -> bool {
        matches!(self, RouteStep::Edge { .. })
    }
}

/// An ordered walk over the graph.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub steps: Vec<RouteStep>,
    pub flags: Vec<String>,
}

impl Route {
    pub fn scenic_edge_ids(&self) -> Vec<usize> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                RouteStep::Edge { edge_id, .. } => Some(*edge_id),
                _ => None,
            })
            .collect()
    }

    fn step_endpoints(&self, g: &ScenicGraph, step: &RouteStep) -> (usize, usize) {
        match step {
            RouteStep::Edge { edge_id, reversed } => {
                let e = &g.edges[*edge_id];
                if *reversed {
                    (e.endpoints.1, e.endpoints.0)
                } else {
                    e.endpoints
                }
            }
            RouteStep::Connector { from, to, .. } => (*from, *to),
        }
    }

    /// Node sequence visited by the walk.
    pub fn node_sequence(&self, g: &ScenicGraph) -> Vec<usize> {
        let mut out = Vec::new();
        for step in &self.steps {
            let (a, b) = self.step_endpoints(g, step);
            if out.is_empty() {
                out.push(a);
            }
            out.push(b);
        }
        out
    }

    /// Check the walk is contiguous and references valid edges/nodes.
    pub fn check_well_formed(&self, g: &ScenicGraph) -> std::result::Result<(), String> {
        let mut current: Option<usize> = None;
        for (i, step) in self.steps.iter().enumerate() {
            if let RouteStep::Edge { edge_id, .. } = step {
                if *edge_id >= g.edges.len() {
                    return Err(format!("step {i}: unknown edge {edge_id}"));
                }
            }
            if let RouteStep::Connector { from, to, .. } = step {
                if *from >= g.nodes.len() || *to >= g.nodes.len() {
                    return Err(format!("step {i}: connector endpoints not graph nodes"));
                }
            }
            let (a, b) = self.step_endpoints(g, step);
            if let Some(cur) = current {
                if cur != a {
                    return Err(format!(
                        "step {i}: does not share a node with the previous step ({cur} vs {a})"
                    ));
                }
            }
            current = Some(b);
        }
        Ok(())
    }
}

/// Per-route quality metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RouteMetrics {
    pub completeness: f64,
    pub scenic_length: f64,
    pub nonscenic_length: f64,
    pub repeated_length: f64,
    pub edge_count: usize,
    pub direction_changes: usize,
}

/// Compute metrics for a route against its graph.
pub fn route_metrics(g: &ScenicGraph, route: &Route) -> Result<RouteMetrics> {
    let mut scenic_length = 0.0;
    let mut nonscenic_length = 0.0;
    let mut traversals: std::collections::BTreeMap<usize, usize> = Default::default();
    let mut covered: BTreeSet<PairId> = BTreeSet::new();
    let mut edge_count = 0usize;
    let mut direction_changes = 0usize;
    let mut prev_curve: Option<usize> = None;
    for step in &route.steps {
        match step {
            RouteStep::Edge { edge_id, .. } => {
                let e = g.edges.get(*edge_id).ok_or(Error::UnknownEdge(*edge_id))?;
                scenic_length += e.length;
                *traversals.entry(e.id).or_insert(0) += 1;
                covered.extend(e.pairs.iter().copied());
                edge_count += 1;
                if let Some(pc) = prev_curve {
                    if pc != e.curve_id {
                        direction_changes += 1;
                    }
                }
                prev_curve = Some(e.curve_id);
            }
            RouteStep::Connector { length, .. } => {
                nonscenic_length += length;
            }
        }
    }
    let repeated_length = traversals
        .iter()
        .map(|(&eid, &count)| (count.saturating_sub(1)) as f64 * g.edges[eid].length)
        .sum();
    let total = g.all_pairs().len();
    let completeness = if total == 0 {
        0.0
    } else {
        covered.len() as f64 / total as f64
    };
    Ok(RouteMetrics {
        completeness,
        scenic_length,
        nonscenic_length,
        repeated_length,
        edge_count,
        direction_changes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    OnlyScenic,
    Completeness,
    RouteLength,
    RepeatedEdges,
    EdgeCount,
}

/// A priority permutation over the five criteria.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequirementOrder {
    pub priority: [Criterion; 5],
}

impl RequirementOrder {
    /// Only-scenic first, then completeness, then few edges, then few
    /// repeats.
    pub fn sec2() -> Self {
        RequirementOrder {
            priority: [
                Criterion::OnlyScenic,
                Criterion::Completeness,
                Criterion::EdgeCount,
                Criterion::RepeatedEdges,
                Criterion::RouteLength,
            ],
        }
    }

    /// Completeness first, then only-scenic, then route length.
    pub fn sec3() -> Self {
        RequirementOrder {
            priority: [
                Criterion::Completeness,
                Criterion::OnlyScenic,
                Criterion::RouteLength,
                Criterion::RepeatedEdges,
                Criterion::EdgeCount,
            ],
        }
    }
}

/// Lexicographic comparison under `order`; `Less` means `a` is the
/// preferred route.
pub fn compare_routes(a: &RouteMetrics, b: &RouteMetrics, order: &RequirementOrder) -> Ordering {
    // lower is better for every criterion value
    let value = |m: &RouteMetrics, c: Criterion| -> f64 {
        match c {
            Criterion::OnlyScenic => m.nonscenic_length,
            Criterion::Completeness => -m.completeness,
            Criterion::RouteLength => m.scenic_length + m.nonscenic_length,
            Criterion::RepeatedEdges => m.repeated_length,
            Criterion::EdgeCount => m.edge_count as f64,
        }
    };
    for &c in &order.priority {
        let ord = value(a, c).total_cmp(&value(b, c));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

/// Tuning knobs shared by the route generators.
#[derive(Debug, Clone, Default)]
pub struct RoutingParams {
    /// Radius filter for Min-Max Hull; default = box half-diagonal.
    pub distance_bound: Option<f64>,
    /// Centroid the radius filter is measured from; default = box center.
    pub site_centroid: Option<Point2>,
    /// Number of lines the Densest Line algorithm selects.
    pub top_k: Option<usize>,
    /// Alpha for the connecting alpha shape; default = 2 / median
    /// pairwise endpoint distance.
    pub alpha: Option<f64>,
}

struct RouteBuilder<'a> {
    g: &'a ScenicGraph,
    apsp: &'a ApspTable,
    steps: Vec<RouteStep>,
    flags: Vec<String>,
    current: Option<usize>,
}

impl<'a> RouteBuilder<'a> {
    fn new(g: &'a ScenicGraph, apsp: &'a ApspTable) -> Self {
        RouteBuilder {
            g,
            apsp,
            steps: Vec::new(),
            flags: Vec::new(),
            current: None,
        }
    }

    fn current(&self) -> Option<usize> {
        self.current
    }

    fn len(&self) -> usize {
        self.steps.len()
    }

    fn start_at(&mut self, node: usize) {
        debug_assert!(self.current.is_none());
        self.current = Some(node);
    }

    fn traverse_edge(&mut self, edge_id: usize) {
        let e = &self.g.edges[edge_id];
        let cur = self.current.expect("route has no position yet");
        let reversed = if e.endpoints.0 == cur {
            false
        } else {
            debug_assert_eq!(e.endpoints.1, cur, "edge not incident to current node");
            !e.is_self_loop()
        };
        self.steps.push(RouteStep::Edge { edge_id, reversed });
        self.current = Some(e.other_endpoint(cur));
    }

    /// Move to `node` via the shortest scenic path, or a straight
    /// non-scenic connector when the graph does not connect them.
    fn goto(&mut self, node: usize) {
        let cur = match self.current {
            None => {
                self.current = Some(node);
                return;
            }
            Some(c) => c,
        };
        if cur == node {
            return;
        }
        match self.apsp.path_edges(cur, node) {
            Some(traversals) => {
                for (eid, _) in traversals {
                    self.traverse_edge(eid);
                }
            }
            None => {
                let length = self.g.nodes[cur].coords.dist(self.g.nodes[node].coords);
                self.steps.push(RouteStep::Connector {
                    from: cur,
                    to: node,
                    length,
                });
                if !self.flags.iter().any(|f| f == "contains-non-scenic-connector") {
                    self.flags.push("contains-non-scenic-connector".into());
                }
                self.current = Some(node);
            }
        }
        debug_assert_eq!(self.current, Some(node));
    }

    fn flag(&mut self, s: &str) {
        self.flags.push(s.to_string());
    }

    fn finish(self) -> Route {
        Route {
            steps: self.steps,
            flags: self.flags,
        }
    }
}

/// Convex scenic route: hull of the intersection nodes within the
/// distance bound, consecutive hull vertices joined by shortest paths.
pub fn route_minmax_hull(g: &ScenicGraph, apsp: &ApspTable, params: &RoutingParams) -> Route {
    let centroid = params.site_centroid.unwrap_or_else(|| g.bounds.center());
    let bound = params
        .distance_bound
        .unwrap_or_else(|| g.bounds.diagonal() / 2.0);
    let picked: Vec<usize> = g
        .intersection_nodes()
        .filter(|&i| g.nodes[i].coords.dist(centroid) <= bound)
        .collect();
    let mut rb = RouteBuilder::new(g, apsp);
    if picked.len() < 3 {
        // degenerate: a single traversal of the longest edge
        if let Some(e) = g
            .edges
            .iter()
            .max_by(|a, b| a.length.total_cmp(&b.length).then(b.id.cmp(&a.id)))
        {
            rb.start_at(e.endpoints.0);
            rb.traverse_edge(e.id);
        }
        rb.flag("degenerate: fewer than 3 intersection nodes in bound");
        return rb.finish();
    }
    let coords: Vec<Point2> = picked.iter().map(|&i| g.nodes[i].coords).collect();
    let hull: Vec<usize> = convex_hull_indices(&coords)
        .into_iter()
        .map(|i| picked[i])
        .collect();
    rb.start_at(hull[0]);
    if hull.len() < 3 {
        // collinear arrangement: out and back
        for &v in hull.iter().skip(1) {
            rb.goto(v);
        }
        rb.goto(hull[0]);
        rb.flag("degenerate: collinear intersection nodes");
        return rb.finish();
    }
    for &v in hull.iter().skip(1) {
        rb.goto(v);
    }
    rb.goto(hull[0]);
    rb.finish()
}

fn line_density(g: &ScenicGraph, ci: usize) -> (usize, f64) {
    let nodes = g
        .nodes
        .iter()
        .filter(|n| n.kind == NodeKind::Intersection && n.curves.contains(&ci))
        .count();
    let extent: f64 = g
        .edges
        .iter()
        .filter(|e| e.curve_id == ci)
        .map(|e| e.length)
        .sum();
    (nodes, extent)
}

/// Node chain of a line curve inside the box, ordered along the line.
fn line_chain(g: &ScenicGraph, ci: usize) -> Vec<usize> {
    let CurveGeometry::Line(line) = &g.curves[ci].geometry else {
        return vec![];
    };
    let mut chain: Vec<(f64, usize)> = g
        .nodes
        .iter()
        .enumerate()
        .filter(|(_, n)| n.curves.contains(&ci))
        .map(|(i, n)| (line.param_of(n.coords), i))
        .collect();
    chain.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    chain.into_iter().map(|(_, i)| i).collect()
}

fn edge_on_curve_between(g: &ScenicGraph, ci: usize, a: usize, b: usize) -> Option<usize> {
    g.edges
        .iter()
        .find(|e| {
            e.curve_id == ci
                && (e.endpoints == (a, b) || e.endpoints == (b, a))
        })
        .map(|e| e.id)
}

/// Long, straight, uninterrupted scenic stretches: traverse the densest
/// line curves end to end, connected along the alpha-shape boundary of
/// their endpoints.
pub fn route_densest_line(
    g: &ScenicGraph,
    apsp: &ApspTable,
    params: &RoutingParams,
) -> Result<Route> {
    let mut lines: Vec<usize> = (0..g.curves.len())
        .filter(|&ci| {
            matches!(g.curves[ci].geometry, CurveGeometry::Line(_))
                && g.edges.iter().any(|e| e.curve_id == ci)
        })
        .collect();
    if lines.is_empty() {
        return Err(Error::NoLineCurves);
    }
    lines.sort_by(|&a, &b| {
        let (na, xa) = line_density(g, a);
        let (nb, xb) = line_density(g, b);
        nb.cmp(&na).then(xb.total_cmp(&xa)).then(a.cmp(&b))
    });
    let k = params
        .top_k
        .unwrap_or_else(|| (g.curves.len().div_ceil(4)).max(2));
    let all = g.all_pairs();
    let mut selected: Vec<usize> = Vec::new();
    let mut covered: BTreeSet<PairId> = BTreeSet::new();
    for &ci in &lines {
        if selected.len() >= k || covered == all {
            break;
        }
        selected.push(ci);
        covered.extend(g.curves[ci].pairs.iter().copied());
    }

    // alpha shape over the selected lines' endpoints
    let mut endpoint_nodes: Vec<usize> = Vec::new();
    for &ci in &selected {
        let chain = line_chain(g, ci);
        if let (Some(&first), Some(&last)) = (chain.first(), chain.last()) {
            endpoint_nodes.push(first);
            if last != first {
                endpoint_nodes.push(last);
            }
        }
    }
    endpoint_nodes.sort_unstable();
    endpoint_nodes.dedup();
    let coords: Vec<Point2> = endpoint_nodes.iter().map(|&i| g.nodes[i].coords).collect();
    let alpha = params.alpha.unwrap_or_else(|| {
        let mut dists: Vec<f64> = Vec::new();
        for i in 0..coords.len() {
            for j in (i + 1)..coords.len() {
                dists.push(coords[i].dist(coords[j]));
            }
        }
        dists.sort_by(f64::total_cmp);
        match dists.get(dists.len() / 2) {
            Some(&median) if median > 0.0 => 2.0 / median,
            _ => 1.0,
        }
    });
    // boundary adjacency between endpoint nodes
    let mut boundary: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    if coords.len() >= 2 {
        for (i, j) in crate::geometry::alpha_shape(&coords, alpha) {
            boundary
                .entry(endpoint_nodes[i])
                .or_default()
                .push(endpoint_nodes[j]);
            boundary
                .entry(endpoint_nodes[j])
                .or_default()
                .push(endpoint_nodes[i]);
        }
    }

    let mut rb = RouteBuilder::new(g, apsp);
    let mut remaining: Vec<usize> = selected.clone();
    // begin on the densest line, from its lower-id end
    let first = remaining.remove(0);
    let chain = line_chain(g, first);
    let (start, reversed) = if chain[0] <= chain[chain.len() - 1] {
        (chain[0], false)
    } else {
        (chain[chain.len() - 1], true)
    };
    rb.start_at(start);
    traverse_chain(&mut rb, g, first, &chain, reversed);
    while !remaining.is_empty() {
        let cur = rb.current().unwrap();
        // nearest untraversed line by entry-endpoint distance
        let mut best: Option<(bool, f64, usize, usize)> = None; // (unreachable, dist, node, line)
        for &ci in &remaining {
            let chain = line_chain(g, ci);
            for &end in [chain.first(), chain.last()].into_iter().flatten() {
                let d = apsp.dist(cur, end);
                let key = if d.is_finite() {
                    (false, d, end, ci)
                } else {
                    (true, g.nodes[cur].coords.dist(g.nodes[end].coords), end, ci)
                };
                if best.is_none_or(|b| {
                    (key.0, key.1, key.2, key.3) < (b.0, b.1, b.2, b.3)
                }) {
                    best = Some(key);
                }
            }
        }
        let (_, _, entry, ci) = best.unwrap();
        goto_via_boundary(&mut rb, g, &boundary, entry);
        remaining.retain(|&c| c != ci);
        let chain = line_chain(g, ci);
        let reversed = chain[chain.len() - 1] == entry && chain.len() > 1;
        traverse_chain(&mut rb, g, ci, &chain, reversed);
    }
    Ok(rb.finish())
}

fn traverse_chain(rb: &mut RouteBuilder, g: &ScenicGraph, ci: usize, chain: &[usize], reversed: bool) {
    let order: Vec<usize> = if reversed {
        chain.iter().rev().copied().collect()
    } else {
        chain.to_vec()
    };
    for w in order.windows(2) {
        if let Some(eid) = edge_on_curve_between(g, ci, w[0], w[1]) {
            rb.traverse_edge(eid);
        }
    }
}

/// Move along the alpha-shape boundary toward `target` where possible;
/// each boundary hop is realized by a scenic shortest path, or a
/// straight connector when the graph is disconnected there.
fn goto_via_boundary(
    rb: &mut RouteBuilder,
    g: &ScenicGraph,
    boundary: &std::collections::BTreeMap<usize, Vec<usize>>,
    target: usize,
) {
    let cur = match rb.current() {
        Some(c) => c,
        None => {
            rb.start_at(target);
            return;
        }
    };
    if cur == target {
        return;
    }
    // BFS over boundary edges from cur to target
    let mut prev: std::collections::BTreeMap<usize, usize> = Default::default();
    let mut queue = std::collections::VecDeque::from([cur]);
    let mut found = false;
    while let Some(u) = queue.pop_front() {
        if u == target {
            found = true;
            break;
        }
        for &v in boundary.get(&u).map(|v| v.as_slice()).unwrap_or(&[]) {
            if v != cur && !prev.contains_key(&v) {
                prev.insert(v, u);
                queue.push_back(v);
            }
        }
    }
    if found {
        let mut hops = vec![target];
        let mut u = target;
        while let Some(&p) = prev.get(&u) {
            hops.push(p);
            u = p;
            if p == cur {
                break;
            }
        }
        hops.reverse();
        for &hop in hops.iter().skip(1) {
            rb.goto(hop);
        }
    } else {
        rb.goto(target);
    }
    let _ = g;
}

/// Shortest edge of each curve (ties: lowest edge id).
pub fn acu_chosen_edges(g: &ScenicGraph) -> Vec<usize> {
    (0..g.curves.len())
        .filter_map(|ci| {
            g.edges
                .iter()
                .filter(|e| e.curve_id == ci)
                .min_by(|a, b| a.length.total_cmp(&b.length).then(a.id.cmp(&b.id)))
                .map(|e| e.id)
        })
        .collect()
}

/// All Curve Umbrella: chain the shortest edge of every curve in
/// nearest-neighbor order.
pub fn route_acu(g: &ScenicGraph, apsp: &ApspTable) -> Route {
    let chosen = acu_chosen_edges(g);
    let mut rb = RouteBuilder::new(g, apsp);
    let Some(&start_edge) = chosen.iter().min_by_key(|&&eid| {
        let e = &g.edges[eid];
        (e.endpoints.0.min(e.endpoints.1), eid)
    }) else {
        return rb.finish();
    };
    let e0 = &g.edges[start_edge];
    rb.start_at(e0.endpoints.0.min(e0.endpoints.1));
    rb.traverse_edge(start_edge);
    let mut remaining: Vec<usize> = chosen.into_iter().filter(|&e| e != start_edge).collect();
    while !remaining.is_empty() {
        let cur = rb.current().unwrap();
        let mut best: Option<(bool, f64, usize, usize)> = None; // (unreachable, dist, node, edge)
        for &eid in &remaining {
            let e = &g.edges[eid];
            for node in [e.endpoints.0, e.endpoints.1] {
                let d = apsp.dist(cur, node);
                let key = if d.is_finite() {
                    (false, d, node, eid)
                } else {
                    (true, g.nodes[cur].coords.dist(g.nodes[node].coords), node, eid)
                };
                if best.is_none_or(|b| (key.0, key.1, key.2, key.3) < (b.0, b.1, b.2, b.3)) {
                    best = Some(key);
                }
            }
        }
        let (_, _, node, eid) = best.unwrap();
        rb.goto(node);
        rb.traverse_edge(eid);
        remaining.retain(|&e| e != eid);
    }
    rb.finish()
}

/// All Curve Convex Hull: walk the convex hull of the chosen-edge
/// endpoints, connecting consecutive hull vertices by shortest paths
/// and skipping insertions whose endpoints are already connected.
pub fn route_acch(g: &ScenicGraph, apsp: &ApspTable) -> Route {
    let chosen = acu_chosen_edges(g);
    let mut s_nodes: Vec<usize> = chosen
        .iter()
        .flat_map(|&eid| {
            let e = &g.edges[eid];
            [e.endpoints.0, e.endpoints.1]
        })
        .collect();
    s_nodes.sort_unstable();
    s_nodes.dedup();
    let coords: Vec<Point2> = s_nodes.iter().map(|&i| g.nodes[i].coords).collect();
    let hull: Vec<usize> = convex_hull_indices(&coords)
        .into_iter()
        .map(|i| s_nodes[i])
        .collect();
    if hull.len() < 3 {
        let mut route = route_acu(g, apsp);
        route.flags.push("acch-fallback: fewer than 3 hull points".into());
        return route;
    }
    let mut rb = RouteBuilder::new(g, apsp);
    rb.start_at(hull[0]);
    let mut uf = crate::graph::UnionFind::new(g.nodes.len());
    let mut used: BTreeSet<usize> = BTreeSet::new();
    for k in 0..hull.len() {
        let (u, v) = (hull[k], hull[(k + 1) % hull.len()]);
        if uf.connected(u, v) {
            // redundancy check: endpoints already connected by inserted
            // edges; reuse them instead of inserting again
            bridge_within(&mut rb, g, &used, v);
            continue;
        }
        match apsp.path_edges(u, v) {
            Some(traversals) => {
                for (eid, _) in traversals {
                    let e = &g.edges[eid];
                    uf.union(e.endpoints.0, e.endpoints.1);
                    used.insert(eid);
                    rb.traverse_edge(eid);
                }
            }
            None => {
                rb.goto(v); // straight connector
                uf.union(u, v);
            }
        }
    }
    rb.finish()
}

/// Shortest walk from the builder's position to `target` restricted to
/// the already-inserted edge set.
fn bridge_within(rb: &mut RouteBuilder, g: &ScenicGraph, used: &BTreeSet<usize>, target: usize) {
    let cur = rb.current().unwrap();
    if cur == target {
        return;
    }
    // Dijkstra over used edges only
    let n = g.nodes.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev_edge: Vec<Option<usize>> = vec![None; n];
    dist[cur] = 0.0;
    let mut heap: BTreeSet<(u64, usize)> = BTreeSet::from([(0, cur)]);
    let key = |d: f64| d.to_bits();
    while let Some(&(dk, u)) = heap.iter().next() {
        heap.remove(&(dk, u));
        if u == target {
            break;
        }
        for &eid in used {
            let e = &g.edges[eid];
            if e.is_self_loop() {
                continue;
            }
            let v = if e.endpoints.0 == u {
                e.endpoints.1
            } else if e.endpoints.1 == u {
                e.endpoints.0
            } else {
                continue;
            };
            let nd = dist[u] + e.length;
            if nd < dist[v] {
                heap.remove(&(key(dist[v]), v));
                dist[v] = nd;
                prev_edge[v] = Some(eid);
                heap.insert((key(nd), v));
            }
        }
    }
    if !dist[target].is_finite() {
        rb.goto(target);
        return;
    }
    let mut seq = Vec::new();
    let mut u = target;
    while u != cur {
        let eid = prev_edge[u].unwrap();
        seq.push(eid);
        u = g.edges[eid].other_endpoint(u);
    }
    seq.reverse();
    for eid in seq {
        rb.traverse_edge(eid);
    }
}

/// Dense Point Expansion: start at the best-connected node and greedily
/// take the incident edge covering the most unseen pairs, jumping to
/// the nearest useful node when stuck.
pub fn route_dpe(g: &ScenicGraph, apsp: &ApspTable) -> Route {
    let mut rb = RouteBuilder::new(g, apsp);
    if g.nodes.is_empty() {
        return rb.finish();
    }
    let deg: Vec<usize> = (0..g.nodes.len()).map(|i| g.degree(i)).collect();
    let start = (0..g.nodes.len())
        .max_by_key(|&i| (deg[i], usize::MAX - i))
        .unwrap();
    rb.start_at(start);
    let all = g.all_pairs();
    let mut covered: BTreeSet<PairId> = BTreeSet::new();
    let gain_of = |e: &crate::graph::Edge, covered: &BTreeSet<PairId>| {
        e.pairs.iter().filter(|p| !covered.contains(p)).count()
    };
    while covered != all {
        let cur = rb.current().unwrap();
        let mut best: Option<(usize, usize, f64, usize)> = None; // gain, far deg, len, id
        for e in g.incident_edges(cur) {
            let gain = gain_of(e, &covered);
            if gain == 0 {
                continue;
            }
            let far = e.other_endpoint(cur);
            let better = match &best {
                None => true,
                Some((bg, bd, bl, bid)) => {
                    let (bg, bd, bl, bid) = (*bg, *bd, *bl, *bid);
                    (gain, deg[far], std::cmp::Reverse(e.length.to_bits()), std::cmp::Reverse(e.id))
                        > (bg, bd, std::cmp::Reverse(bl.to_bits()), std::cmp::Reverse(bid))
                }
            };
            if better {
                best = Some((gain, deg[far], e.length, e.id));
            }
        }
        if let Some((_, _, _, eid)) = best {
            covered.extend(g.edges[eid].pairs.iter().copied());
            rb.traverse_edge(eid);
            continue;
        }
        // stuck: jump to the nearest node with a useful incident edge
        let mut target: Option<(bool, f64, usize)> = None;
        for i in 0..g.nodes.len() {
            if i == cur {
                continue;
            }
            if !g.incident_edges(i).any(|e| gain_of(e, &covered) > 0) {
                continue;
            }
            let d = apsp.dist(cur, i);
            let key = if d.is_finite() {
                (false, d, i)
            } else {
                (true, g.nodes[cur].coords.dist(g.nodes[i].coords), i)
            };
            if target.is_none_or(|t| (key.0, key.1, key.2) < (t.0, t.1, t.2)) {
                target = Some(key);
            }
        }
        let Some((_, _, node)) = target else {
            break; // no uncovered pair is reachable anywhere
        };
        let before = rb.len();
        rb.goto(node);
        for step in &rb.steps[before..] {
            if let RouteStep::Edge { edge_id, .. } = step {
                covered.extend(g.edges[*edge_id].pairs.iter().copied());
            }
        }
    }
    rb.finish()
}
