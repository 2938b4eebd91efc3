//! R^d generalization: bisecting hyperplanes of red/blue pairs, the
//! lattice of their intersections (affine flats of decreasing
//! dimension), and the densest-flat traversal route.
//!
//! Flats are stored canonically as a least-norm base point plus an
//! orthonormal direction basis; numerical rank decisions use a singular
//! value threshold relative to the largest singular value.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::graph::{Color, PairId};
use crate::{Error, Result};

pub type PointD = DVector<f64>;

/// Relative singular-value cutoff for rank decisions.
const RANK_EPS: f64 = 1e-10;

/// A colored site in R^d.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColoredPointD {
    pub id: u32,
    pub coords: PointD,
    pub color: Color,
}

/// An affine subspace of R^d: least-norm base point, orthonormal
/// direction basis, and the set of pairs whose bisecting hyperplanes all
/// contain it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffineFlat {
    pub base: PointD,
    pub basis: Vec<PointD>,
    pub generators: BTreeSet<PairId>,
}

impl AffineFlat {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    /// Orthogonal projection of `p` onto the flat.
    pub fn project(&self, p: &PointD) -> PointD {
        let mut out = self.base.clone();
        for v in &self.basis {
            out += v * v.dot(&(p - &self.base));
        }
        out
    }

    pub fn contains_point(&self, p: &PointD, tol: f64) -> bool {
        (self.project(p) - p).norm() <= tol
    }

    /// Orthonormal normals of the flat (complement of the basis).
    pub fn constraint_rows(&self) -> Vec<PointD> {
        orthonormal_complement(&self.basis, self.ambient_dim())
    }
}

/// Orthonormal basis of the complement of `span(vs)` in R^d, built by
/// Gram-Schmidt over the identity vectors.
fn orthonormal_complement(vs: &[PointD], d: usize) -> Vec<PointD> {
    let mut out: Vec<PointD> = Vec::new();
    for i in 0..d {
        let mut e = DVector::zeros(d);
        e[i] = 1.0;
        for v in vs.iter().chain(out.iter()) {
            let coeff = v.dot(&e);
            e -= v * coeff;
        }
        let n = e.norm();
        if n > 1e-8 {
            out.push(e / n);
        }
        if out.len() + vs.len() == d {
            break;
        }
    }
    out
}

/// The bisecting hyperplane {x : (b-r)·x = (|b|²-|r|²)/2} as a
/// (d-1)-flat.
pub fn bisecting_hyperplane(r: &ColoredPointD, b: &ColoredPointD) -> Result<AffineFlat> {
    let n = &b.coords - &r.coords;
    let norm = n.norm();
    if norm <= 1e-12 {
        return Err(Error::DegeneratePair(r.id, b.id));
    }
    let unit = n / norm;
    let rhs = (b.coords.norm_squared() - r.coords.norm_squared()) / (2.0 * norm);
    let d = r.coords.len();
    let pair = if r.id < b.id {
        PairId::new(r.id, b.id)
    } else {
        PairId::new(b.id, r.id)
    };
    Ok(AffineFlat {
        base: &unit * rhs,
        basis: orthonormal_complement(std::slice::from_ref(&unit), d),
        generators: BTreeSet::from([pair]),
    })
}

/// Intersect two flats by solving their combined constraint system.
/// Returns the intersection flat with merged generators, `None` when
/// empty. If `f ⊆ h` the result equals `f` (with merged generators).
pub fn intersect_flats(f: &AffineFlat, h: &AffineFlat) -> Option<AffineFlat> {
    let d = f.ambient_dim();
    assert_eq!(d, h.ambient_dim(), "flats must share the ambient space");
    let mut rows: Vec<PointD> = f.constraint_rows();
    rows.extend(h.constraint_rows());
    let mut rhs: Vec<f64> = rows
        .iter()
        .take(d - f.dim())
        .map(|n| n.dot(&f.base))
        .collect();
    rhs.extend(
        rows.iter()
            .skip(d - f.dim())
            .map(|n| n.dot(&h.base)),
    );
    let mut generators = f.generators.clone();
    generators.extend(h.generators.iter().copied());
    solve_constraints(&rows, &rhs, d).map(|(base, basis)| AffineFlat {
        base,
        basis,
        generators,
    })
}

/// Least-norm solution and null-space basis of `rows · x = rhs`, or
/// `None` when the system is inconsistent.
fn solve_constraints(rows: &[PointD], rhs: &[f64], d: usize) -> Option<(PointD, Vec<PointD>)> {
    let m = rows.len().max(d);
    let mut a = DMatrix::zeros(m, d);
    let mut y = DVector::zeros(m);
    for (i, r) in rows.iter().enumerate() {
        a.set_row(i, &r.transpose());
        y[i] = rhs[i];
    }
    let svd = a.clone().svd(true, true);
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return Some((DVector::zeros(d), identity_basis(d)));
    }
    let thresh = RANK_EPS * sigma_max;
    let base = svd.solve(&y, thresh).ok()?;
    // consistency: residual must vanish
    let scale = 1.0 + y.norm() + base.norm();
    if (&a * &base - &y).norm() > 1e-7 * scale {
        return None;
    }
    let v_t = svd.v_t.as_ref().unwrap();
    let mut basis = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= thresh {
            basis.push(v_t.row(i).transpose());
        }
    }
    Some((base, basis))
}

fn identity_basis(d: usize) -> Vec<PointD> {
    (0..d)
        .map(|i| {
            let mut e = DVector::zeros(d);
            e[i] = 1.0;
            e
        })
        .collect()
}

/// An axis-aligned box in R^d.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoxD {
    pub min: PointD,
    pub max: PointD,
}

impl BoxD {
    pub fn contains(&self, p: &PointD, slack: f64) -> bool {
        p.iter()
            .zip(self.min.iter().zip(self.max.iter()))
            .all(|(&x, (&lo, &hi))| x >= lo - slack && x <= hi + slack)
    }

    fn clamp(&self, p: &PointD) -> PointD {
        PointD::from_iterator(
            p.len(),
            p.iter()
                .zip(self.min.iter().zip(self.max.iter()))
                .map(|(&x, (&lo, &hi))| x.clamp(lo, hi)),
        )
    }

    pub fn center(&self) -> PointD {
        (&self.min + &self.max) / 2.0
    }

    pub fn diagonal(&self) -> f64 {
        (&self.max - &self.min).norm()
    }
}

fn auto_box(points: &[ColoredPointD], expand: f64) -> BoxD {
    let d = points[0].coords.len();
    let mut min = DVector::from_element(d, f64::INFINITY);
    let mut max = DVector::from_element(d, f64::NEG_INFINITY);
    for p in points {
        for i in 0..d {
            min[i] = min[i].min(p.coords[i]);
            max[i] = max[i].max(p.coords[i]);
        }
    }
    let center = (&min + &max) / 2.0;
    let mut half: Vec<f64> = (0..d).map(|i| (max[i] - min[i]) / 2.0 * expand).collect();
    let pad = half.iter().cloned().fold(1.0f64, f64::max);
    for h in half.iter_mut() {
        if *h <= 0.0 {
            *h = pad;
        }
    }
    BoxD {
        min: PointD::from_iterator(d, (0..d).map(|i| center[i] - half[i])),
        max: PointD::from_iterator(d, (0..d).map(|i| center[i] + half[i])),
    }
}

/// A representative point of the flat inside the box, found by
/// alternating projections, or `None` when the flat misses the box.
pub fn in_box_representative(flat: &AffineFlat, bx: &BoxD, iters: usize) -> Option<PointD> {
    let mut x = flat.project(&bx.center());
    for _ in 0..iters {
        let y = bx.clamp(&x);
        x = flat.project(&y);
    }
    let slack = 1e-6 * bx.diagonal().max(1.0);
    bx.contains(&x, slack).then_some(x)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub bounds: Option<BoxD>,
    pub expand: f64,
    pub depth_limit: Option<usize>,
    pub max_flats: usize,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        LatticeConfig {
            bounds: None,
            expand: 1.5,
            depth_limit: None,
            max_flats: 10_000,
        }
    }
}

/// The containment lattice of all flats generated by intersecting
/// bisecting hyperplanes. A DAG by dimension: an edge (i, j) records
/// that flat j arose inside flat i.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlatLattice {
    pub flats: Vec<AffineFlat>,
    /// In-box representative point per flat.
    pub representatives: Vec<PointD>,
    pub edges: BTreeSet<(usize, usize)>,
    pub bounds: BoxD,
}

impl FlatLattice {
    pub fn incidence(&self, i: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == i || b == i)
            .count()
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Connected components over lattice edges, each sorted ascending.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = crate::graph::UnionFind::new(self.flats.len());
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..self.flats.len() {
            groups.entry(uf.find(i)).or_default().push(i);
        }
        groups.into_values().collect()
    }
}

fn flats_equal(a: &AffineFlat, b: &AffineFlat, tol: f64) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    if (&a.base - &b.base).norm() > tol {
        return false;
    }
    a.basis.iter().all(|v| {
        let mut residual = v.clone();
        for w in &b.basis {
            let coeff = w.dot(&residual);
            residual -= w * coeff;
        }
        residual.norm() <= tol
    })
}

/// Build the intersection lattice: level 0 holds all |R|·|B| bisecting
/// hyperplanes; each further level intersects the previous level with
/// the level-0 hyperplanes not already containing it.
pub fn build_lattice(points: &[ColoredPointD], cfg: &LatticeConfig) -> Result<FlatLattice> {
    if points.is_empty() {
        return Err(Error::Data("no points given".into()));
    }
    let d = points[0].coords.len();
    if d < 2 {
        return Err(Error::Data("ambient dimension must be at least 2".into()));
    }
    if points.iter().any(|p| p.coords.len() != d) {
        return Err(Error::Data("all points must share one dimension".into()));
    }
    let reds: Vec<&ColoredPointD> = points.iter().filter(|p| p.color == Color::Red).collect();
    let blues: Vec<&ColoredPointD> = points.iter().filter(|p| p.color == Color::Blue).collect();
    if reds.is_empty() || blues.is_empty() {
        return Err(Error::Data(
            "lattice construction needs at least one red and one blue point".into(),
        ));
    }
    let bx = cfg
        .bounds
        .clone()
        .unwrap_or_else(|| auto_box(points, cfg.expand));
    let tol = 1e-7 * bx.diagonal().max(1.0);
    let depth_limit = cfg.depth_limit.unwrap_or(d);

    let mut flats: Vec<AffineFlat> = Vec::new();
    let mut reps: Vec<PointD> = Vec::new();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();

    let insert = |flats: &mut Vec<AffineFlat>,
                      reps: &mut Vec<PointD>,
                      flat: AffineFlat,
                      rep: PointD|
     -> usize {
        for (i, existing) in flats.iter_mut().enumerate() {
            if flats_equal(existing, &flat, tol) {
                existing.generators.extend(flat.generators.iter().copied());
                return i;
            }
        }
        flats.push(flat);
        reps.push(rep);
        flats.len() - 1
    };

    // level 0: bisecting hyperplanes
    let mut level0: Vec<usize> = Vec::new();
    for r in &reds {
        for b in &blues {
            let flat = bisecting_hyperplane(r, b)?;
            let Some(rep) = in_box_representative(&flat, &bx, 200) else {
                continue;
            };
            let idx = insert(&mut flats, &mut reps, flat, rep);
            if !level0.contains(&idx) {
                level0.push(idx);
            }
        }
    }
    if flats.len() > cfg.max_flats {
        return Err(Error::FlatCapExceeded {
            flats: flats.len(),
            cap: cfg.max_flats,
        });
    }

    let mut frontier = level0.clone();
    let mut depth = 1usize;
    while !frontier.is_empty() && depth <= depth_limit {
        let mut next: Vec<usize> = Vec::new();
        for &fi in &frontier {
            if flats[fi].dim() == 0 {
                continue;
            }
            for &hi in &level0 {
                if hi == fi {
                    continue;
                }
                let Some(cut) = intersect_flats(&flats[fi], &flats[hi]) else {
                    continue;
                };
                if cut.dim() == flats[fi].dim() {
                    continue; // hyperplane already contains the flat
                }
                let Some(rep) = in_box_representative(&cut, &bx, 200) else {
                    continue;
                };
                let idx = insert(&mut flats, &mut reps, cut, rep);
                edges.insert((fi, idx));
                edges.insert((hi, idx));
                if flats.len() > cfg.max_flats {
                    return Err(Error::FlatCapExceeded {
                        flats: flats.len(),
                        cap: cfg.max_flats,
                    });
                }
                if idx >= frontier.len() + next.len() || !frontier.contains(&idx) {
                    if !next.contains(&idx) && !frontier.contains(&idx) {
                        next.push(idx);
                    }
                }
            }
        }
        // keep only genuinely new flats in the next frontier
        next.retain(|&i| flats[i].dim() < d - depth.min(d - 1));
        frontier = next;
        depth += 1;
    }

    Ok(FlatLattice {
        flats,
        representatives: reps,
        edges,
        bounds: bx,
    })
}

/// One step of a flat-lattice route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "kebab-case")]
pub enum FlatStep {
    Visit { flat: usize },
    /// Marks a non-scenic jump between disconnected components.
    NonScenicJump,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlatRoute {
    pub steps: Vec<FlatStep>,
    /// Sum of representative-point distances along consecutive visits.
    pub hop_length: f64,
}

impl FlatRoute {
    pub fn visited(&self) -> Vec<usize> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                FlatStep::Visit { flat } => Some(*flat),
                FlatStep::NonScenicJump => None,
            })
            .collect()
    }
}

/// Greedy densest-flat traversal: start at the flat with the most
/// incidences and walk to ever-less-connected neighbors; disconnected
/// components are concatenated with non-scenic markers.
pub fn densest_flat_route(lat: &FlatLattice) -> FlatRoute {
    let inc: Vec<usize> = (0..lat.flats.len()).map(|i| lat.incidence(i)).collect();
    let mut components = lat.components();
    // order components: highest peak incidence first, then lowest id
    components.sort_by_key(|c| {
        let peak = c.iter().map(|&i| inc[i]).max().unwrap_or(0);
        (std::cmp::Reverse(peak), c[0])
    });
    let mut steps: Vec<FlatStep> = Vec::new();
    let mut hop_length = 0.0;
    let mut prev: Option<usize> = None;
    for comp in &components {
        if prev.is_some() {
            steps.push(FlatStep::NonScenicJump);
        }
        let mut visited: BTreeSet<usize> = BTreeSet::new();
        let start = *comp
            .iter()
            .max_by_key(|&&i| (inc[i], std::cmp::Reverse(i)))
            .unwrap();
        let mut current = start;
        loop {
            visited.insert(current);
            if let Some(p) = prev {
                if !matches!(steps.last(), Some(FlatStep::NonScenicJump)) || p != current {
                    hop_length +=
                        (&lat.representatives[p] - &lat.representatives[current]).norm();
                }
            }
            steps.push(FlatStep::Visit { flat: current });
            prev = Some(current);
            let next = lat
                .neighbors(current)
                .into_iter()
                .filter(|n| !visited.contains(n))
                .max_by_key(|&n| (inc[n], std::cmp::Reverse(n)));
            let next = next.or_else(|| {
                comp.iter()
                    .copied()
                    .filter(|n| !visited.contains(n))
                    .max_by_key(|&n| (inc[n], std::cmp::Reverse(n)))
            });
            match next {
                Some(n) => current = n,
                None => break,
            }
        }
    }
    FlatRoute { steps, hop_length }
}
