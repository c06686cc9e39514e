//! Simple islands, the island digraph and its mutual two-cycles.
//!
//! A simple island over a target disk `W` in a source disk `D` is a domain
//! `U ⊂ D` that `f` maps bijectively onto `W`. The detector lifts `∂W`
//! through `f` from each preimage of the target center found in `D` and
//! accepts the lift when it closes after one turn, stays inside `D` with a
//! margin, winds once around the center and encloses no critical point.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{AnalyticMap, Disk};
use crate::function::{Derivative, EntireMap};
use crate::lift::{lift_circle, lift_ray, LiftError, LiftOptions};
use crate::newton::newton_preimages;
use crate::winding::{polygon_winding, winding_degree};
use crate::ComplexVal;

/// Relative containment margin required inside the source disk.
pub const CONTAINMENT_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnivalenceCheck {
    /// Argument-principle degree of `f` over the lifted boundary.
    pub degree: i64,
    pub critical_free: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IslandWitness {
    /// Preimage of the target center inside the island.
    pub core: ComplexVal,
    /// Closed polyline mapped onto the target circle; last vertex = first.
    pub lifted_boundary: Vec<ComplexVal>,
    /// `source.radius − max |v − source.center|` over the boundary.
    pub containment_margin: f64,
    pub univalence: UnivalenceCheck,
    pub source: Disk,
    pub target: Disk,
}

#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub enum WitnessError {
    #[error("boundary vertex {index} maps {defect:.3e} off the target circle")]
    OffTarget { index: usize, defect: f64 },
    #[error("boundary leaves the source disk (margin {margin:.3e})")]
    NotContained { margin: f64 },
    #[error("argument-principle degree {0} is not 1")]
    Degree(i64),
    #[error("boundary is not closed")]
    Open,
    #[error("winding failed: {0}")]
    Winding(String),
}

impl IslandWitness {
    /// Re-checks the witness from its stored data against `f`.
    pub fn verify<F: AnalyticMap + ?Sized>(&self, f: &F) -> Result<(), WitnessError> {
        let b = &self.lifted_boundary;
        if b.len() < 4 || b.first() != b.last() {
            return Err(WitnessError::Open);
        }
        let delta = self.target.radius;
        for (index, v) in b.iter().enumerate() {
            let w = f.eval(*v).map_err(|e| WitnessError::Winding(e.to_string()))?;
            let defect = ((w - self.target.center).norm() - delta).abs();
            if defect > 1e-6 * delta {
                return Err(WitnessError::OffTarget { index, defect });
            }
        }
        let margin = containment_margin(b, &self.source);
        if margin < CONTAINMENT_MARGIN * self.source.radius {
            return Err(WitnessError::NotContained { margin });
        }
        match winding_degree(f, b, self.target.center) {
            Ok(1) => Ok(()),
            Ok(d) => Err(WitnessError::Degree(d)),
            Err(e) => Err(WitnessError::Winding(e.to_string())),
        }
    }

    /// Largest distance from the core to the boundary.
    pub fn radius(&self) -> f64 {
        self.lifted_boundary.iter().map(|v| (v - self.core).norm()).fold(0.0, f64::max)
    }
}

fn containment_margin(boundary: &[ComplexVal], source: &Disk) -> f64 {
    source.radius - boundary.iter().map(|v| (v - source.center).norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RejectReason {
    LiftFailure(LiftError),
    NotSimple { traversals: u32 },
    NotContained { margin: f64 },
    CriticalPoint(ComplexVal),
    Degree(i64),
    Winding(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rejection {
    pub core: ComplexVal,
    pub reason: RejectReason,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IslandSearch {
    pub witnesses: Vec<IslandWitness>,
    pub rejected: Vec<Rejection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IslandOptions {
    /// Seed grid density for core preimages.
    pub grid_density: usize,
    /// Seed grid density for the critical-point search.
    pub critical_grid: usize,
}

impl Default for IslandOptions {
    fn default() -> Self {
        IslandOptions { grid_density: 24, critical_grid: 16 }
    }
}

fn lift_options(source: &Disk, target: &Disk) -> LiftOptions {
    LiftOptions::for_target(target).with_max_gap(source.radius / 20.0).with_max_traversals(3).with_bound(*source)
}

fn lift_rejection(e: LiftError, source: &Disk) -> RejectReason {
    match e {
        LiftError::NoClosure { traversals } => RejectReason::NotSimple { traversals: traversals + 1 },
        LiftError::LeftBound { at } => RejectReason::NotContained { margin: source.radius - (at - source.center).norm() },
        other => RejectReason::LiftFailure(other),
    }
}

fn examine(f: &EntireMap, source: &Disk, target: &Disk, core: ComplexVal, opts: &IslandOptions) -> Result<IslandWitness, RejectReason> {
    let lopts = lift_options(source, target);
    let start = lift_ray(f, core, target, 0.0, &lopts).map_err(|e| lift_rejection(e, source))?;
    let lifted = lift_circle(f, target, start, 0.0, &lopts).map_err(|e| lift_rejection(e, source))?;
    if lifted.traversals != 1 {
        return Err(RejectReason::NotSimple { traversals: lifted.traversals });
    }
    let boundary = lifted.vertices;
    let margin = containment_margin(&boundary, source);
    if margin < CONTAINMENT_MARGIN * source.radius {
        return Err(RejectReason::NotContained { margin });
    }
    let degree = winding_degree(f, &boundary, target.center).map_err(|e| RejectReason::Winding(e.to_string()))?;
    if degree != 1 {
        return Err(RejectReason::Degree(degree));
    }
    // Critical points inside the bounding disk of the boundary.
    let far = boundary.iter().map(|v| (v - core).norm()).fold(0.0, f64::max);
    let crit = newton_preimages(&Derivative(f), ComplexVal::new(0.0, 0.0), Disk::new(core, far * 1.01), opts.critical_grid);
    if let Some(c) = crit.into_iter().find(|c| polygon_winding(&boundary, *c) != 0) {
        return Err(RejectReason::CriticalPoint(c));
    }
    Ok(IslandWitness {
        core,
        lifted_boundary: boundary,
        containment_margin: margin,
        univalence: UnivalenceCheck { degree, critical_free: true },
        source: *source,
        target: *target,
    })
}

fn cores(f: &EntireMap, source: &Disk, target: &Disk, opts: &IslandOptions) -> Vec<ComplexVal> {
    newton_preimages(f, target.center, *source, opts.grid_density)
}

/// All simple islands over `target` in `source` reachable from the seed
/// grid, sorted by core. The detector is sound but not complete; cores
/// whose lift fails are listed in `rejected`.
pub fn find_islands(f: &EntireMap, source: &Disk, target: &Disk) -> IslandSearch {
    find_islands_with(f, source, target, &IslandOptions::default())
}

pub fn find_islands_with(f: &EntireMap, source: &Disk, target: &Disk, opts: &IslandOptions) -> IslandSearch {
    let mut witnesses = Vec::new();
    let mut rejected = Vec::new();
    for core in cores(f, source, target, opts) {
        match examine(f, source, target, core, opts) {
            Ok(w) => {
                // Two cores in the same island would mean degree > 1, which
                // the checks above exclude; guard anyway.
                if witnesses.iter().all(|o: &IslandWitness| polygon_winding(&o.lifted_boundary, core) == 0) {
                    witnesses.push(w);
                }
            }
            Err(reason) => rejected.push(Rejection { core, reason }),
        }
    }
    IslandSearch { witnesses, rejected }
}

/// The first island in core order, if any.
pub fn find_first_island(f: &EntireMap, source: &Disk, target: &Disk, opts: &IslandOptions) -> Option<IslandWitness> {
    cores(f, source, target, opts).into_iter().find_map(|core| examine(f, source, target, core, opts).ok())
}

/// Plain directed graph on `0..n`; self-loops may be stored but never count
/// towards out-degrees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Digraph {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph { n, adj: vec![vec![false; n]; n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Digraph::new(n);
        for (i, j) in edges {
            g.adj[i][j] = true;
        }
        g
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&j| j != v && self.adj[v][j]).count()
    }

    pub fn min_out_degree(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v)).min().unwrap_or(0)
    }

    /// Vertices `p ≠ v` with both `v → p` and `p → v`, ascending.
    pub fn mutual_partners(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&p| p != v && self.adj[v][p] && self.adj[p][v]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoCycleCertificate {
    pub hub: usize,
    pub partners: Vec<usize>,
    pub k: usize,
}

impl TwoCycleCertificate {
    pub fn validate(&self, g: &Digraph) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.partners.len() + 2 * self.k >= g.n
            && self.hub < g.n
            && self.partners.iter().all(|&p| {
                p < g.n && p != self.hub && seen.insert(p) && g.has_edge(self.hub, p) && g.has_edge(p, self.hub)
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum CycleError {
    #[error("two-cycle hypothesis fails: N = {n}, k = {k}, min out-degree {min_out_degree} (need N >= 2k + 1 and min out-degree >= N - k)")]
    HypothesisViolated { n: usize, k: usize, min_out_degree: usize },
}

/// A hub with `N − 2k` mutual partners, for a digraph on `N ≥ 2k + 1`
/// vertices whose loop-free out-degrees are all at least `N − k`. Hubs are
/// tried in index order and the first `N − 2k` partners are returned.
///
/// # Panics
/// If the hypothesis holds but no hub qualifies, which is impossible.
pub fn find_two_cycles(g: &Digraph, k: usize) -> Result<TwoCycleCertificate, CycleError> {
    let n = g.n;
    let min_out_degree = g.min_out_degree();
    if n < 2 * k + 1 || min_out_degree + k < n {
        return Err(CycleError::HypothesisViolated { n, k, min_out_degree });
    }
    let need = n - 2 * k;
    for hub in 0..n {
        let partners = g.mutual_partners(hub);
        if partners.len() >= need {
            return Ok(TwoCycleCertificate { hub, partners: partners[..need].to_vec(), k });
        }
    }
    panic!("no two-cycle hub in a digraph satisfying the hypothesis (N = {n}, k = {k})");
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum GeometryError {
    #[error("need at least one center")]
    NoCenters,
    #[error("radii must satisfy 0 < gamma <= delta (gamma = {gamma}, delta = {delta})")]
    Radii { gamma: String, delta: String },
    #[error("closed target disks around centers {i} and {j} intersect")]
    NotDisjoint { i: usize, j: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IslandEdge {
    pub source: usize,
    pub target: usize,
    pub witness: IslandWitness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IslandDigraph {
    pub centers: Vec<ComplexVal>,
    pub gamma: f64,
    pub delta: f64,
    /// Sorted by `(source, target)`.
    pub edges: Vec<IslandEdge>,
}

impl IslandDigraph {
    pub fn digraph(&self) -> Digraph {
        Digraph::from_edges(self.centers.len(), self.edges.iter().map(|e| (e.source, e.target)))
    }

    pub fn edge(&self, i: usize, j: usize) -> Option<&IslandEdge> {
        self.edges.iter().find(|e| e.source == i && e.target == j)
    }

    pub fn summary(&self) -> DigraphSummary {
        DigraphSummary {
            centers: self.centers.clone(),
            gamma: self.gamma,
            delta: self.delta,
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSummary {
                    source: e.source,
                    target: e.target,
                    core: e.witness.core,
                    margin: e.witness.containment_margin,
                    boundary_points: e.witness.lifted_boundary.len(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeSummary {
    pub source: usize,
    pub target: usize,
    pub core: ComplexVal,
    pub margin: f64,
    pub boundary_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DigraphSummary {
    pub centers: Vec<ComplexVal>,
    pub gamma: f64,
    pub delta: f64,
    pub edges: Vec<EdgeSummary>,
}

pub fn check_geometry(centers: &[ComplexVal], gamma: f64, delta: f64) -> Result<(), GeometryError> {
    if centers.is_empty() {
        return Err(GeometryError::NoCenters);
    }
    if !(gamma > 0.0 && gamma <= delta && delta.is_finite()) {
        return Err(GeometryError::Radii { gamma: gamma.to_string(), delta: delta.to_string() });
    }
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            if (centers[i] - centers[j]).norm() <= 2.0 * delta {
                return Err(GeometryError::NotDisjoint { i, j });
            }
        }
    }
    Ok(())
}

/// Edge `(i, j)` is present when an island over `B(x_j, δ)` in `B(x_i, γ)`
/// is found; it carries the first witness in core order.
pub fn build_digraph(f: &EntireMap, centers: &[ComplexVal], gamma: f64, delta: f64) -> Result<IslandDigraph, GeometryError> {
    build_digraph_with(f, centers, gamma, delta, &IslandOptions::default())
}

pub fn build_digraph_with(
    f: &EntireMap,
    centers: &[ComplexVal],
    gamma: f64,
    delta: f64,
    opts: &IslandOptions,
) -> Result<IslandDigraph, GeometryError> {
    check_geometry(centers, gamma, delta)?;
    let n = centers.len();
    let edges: Vec<IslandEdge> = (0..n * n)
        .into_par_iter()
        .filter_map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let source = Disk::new(centers[i], gamma);
            let target = Disk::new(centers[j], delta);
            find_first_island(f, &source, &target, opts).map(|witness| IslandEdge { source: i, target: j, witness })
        })
        .collect();
    Ok(IslandDigraph { centers: centers.to_vec(), gamma, delta, edges })
}

#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub enum ScanError {
    #[error("no family member up to index budget {k_max} reached the required out-degree")]
    ScanExhausted { k_max: u64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// First member (in list order, at most `k_max` members) whose digraph has
/// loop-free minimum out-degree `≥ min_outdeg`; returns its position.
pub fn scan_family(
    family: &[EntireMap],
    centers: &[ComplexVal],
    gamma: f64,
    delta: f64,
    min_outdeg: usize,
    k_max: usize,
) -> Result<(usize, IslandDigraph), ScanError> {
    check_geometry(centers, gamma, delta)?;
    for (idx, f) in family.iter().enumerate().take(k_max) {
        let g = build_digraph(f, centers, gamma, delta)?;
        if g.digraph().min_out_degree() >= min_outdeg {
            return Ok((idx, g));
        }
    }
    Err(ScanError::ScanExhausted { k_max: k_max as u64 })
}

/// Like [`scan_family`] over `member(k)` for the given indices.
pub fn scan_family_with<M>(
    member: M,
    indices: &[u64],
    centers: &[ComplexVal],
    gamma: f64,
    delta: f64,
    min_outdeg: usize,
    opts: &IslandOptions,
) -> Result<(u64, IslandDigraph), ScanError>
where
    M: Fn(u64) -> EntireMap,
{
    check_geometry(centers, gamma, delta)?;
    for &k in indices {
        let g = build_digraph_with(&member(k), centers, gamma, delta, opts)?;
        if g.digraph().min_out_degree() >= min_outdeg {
            return Ok((k, g));
        }
    }
    Err(ScanError::ScanExhausted { k_max: indices.iter().copied().max().unwrap_or(0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::parse_map;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> ComplexVal {
        ComplexVal::new(re, im)
    }

    fn roots_of_unity(n: usize) -> Vec<ComplexVal> {
        (0..n).map(|k| ComplexVal::from_polar(1.0, TAU * k as f64 / n as f64)).collect()
    }

    #[test]
    fn square_branch_island() {
        let f = parse_map("z^2").unwrap();
        let s = find_islands(&f, &Disk::new(c(1.0, 0.0), 0.4), &Disk::new(c(1.0, 0.0), 0.5));
        assert_eq!(s.witnesses.len(), 1, "{:?}", s.rejected);
        let w = &s.witnesses[0];
        assert!((w.core - 1.0).norm() < 1e-9);
        w.verify(&f).unwrap();
        // Oracle: the principal square root of the target circle.
        for v in &w.lifted_boundary {
            let sq = (v * v).sqrt();
            assert!((sq - v).norm() < 1e-9);
        }
        assert!((w.radius() - (1.0 - 0.5f64.sqrt())).abs() < 1e-3);
    }

    #[test]
    fn critical_point_blocks_islands() {
        let f = parse_map("z^2").unwrap();
        let s = find_islands(&f, &Disk::new(c(0.0, 0.0), 0.4), &Disk::new(c(0.0, 0.0), 0.5));
        assert!(s.witnesses.is_empty());
        assert!(!s.rejected.is_empty());
    }

    #[test]
    fn logarithm_island() {
        let f = parse_map("exp(z)").unwrap();
        let target = Disk::new(c(1.0, 0.0), 0.5);
        // log maps B(1, 0.5) onto a region reaching |log 0.5| ≈ 0.693 from 0.
        assert!(find_islands(&f, &Disk::new(c(0.0, 0.0), 0.6), &target).witnesses.is_empty());
        let s = find_islands(&f, &Disk::new(c(0.0, 0.0), 0.75), &target);
        assert_eq!(s.witnesses.len(), 1);
        assert!(s.witnesses[0].core.norm() < 1e-9);
        s.witnesses[0].verify(&f).unwrap();
    }

    #[test]
    fn translations_have_no_edges() {
        let f = parse_map("z + 5").unwrap();
        let g = build_digraph(&f, &[c(0.0, 0.0), c(5.0, 0.0), c(-5.0, 0.0)], 0.3, 0.4).unwrap();
        assert!(g.edges.is_empty());
    }

    #[test]
    fn power_map_digraph() {
        let f = parse_map("z^8").unwrap();
        let centers = roots_of_unity(8);
        let g = build_digraph(&f, &centers, 0.1, 0.1).unwrap();
        // Each x_i is itself a preimage of x_0 = 1 under z^8.
        for i in 0..8 {
            assert!(g.edge(i, 0).is_some(), "missing edge {i} -> 0");
            let w = &g.edge(i, 0).unwrap().witness;
            // Oracle: the explicit 8th-root branch through x_i contracts by about 1/8.
            assert!((w.radius() - 0.1 / 8.0).abs() < 2e-3, "{}", w.radius());
            w.verify(&f).unwrap();
        }
        assert_eq!(g.edges.len(), 8);
        // The self-loop at 0 does not count towards out-degree.
        let d = g.digraph();
        assert_eq!(d.out_degree(0), 0);
        assert_eq!(d.out_degree(3), 1);
    }

    #[test]
    fn single_center_self_loop() {
        // sqrt maps B(1, 0.5) into B(1, 0.3) ⊂ B(1, 0.5).
        let f = parse_map("z^2").unwrap();
        let g = build_digraph(&f, &[c(1.0, 0.0)], 0.5, 0.5).unwrap();
        assert_eq!(g.edges.len(), 1);
        // Contracting center: 2z has its local inverse z/2 mapping B(1, 0.5)
        // to B(0.5, 0.25), outside B(1, 0.5).
        let h = parse_map("2*z").unwrap();
        assert!(build_digraph(&h, &[c(1.0, 0.0)], 0.5, 0.5).unwrap().edges.is_empty());
    }

    #[test]
    fn geometry_is_checked() {
        let f = parse_map("z").unwrap();
        assert!(matches!(build_digraph(&f, &[c(0.0, 0.0), c(0.5, 0.0)], 0.2, 0.3), Err(GeometryError::NotDisjoint { i: 0, j: 1 })));
        assert!(matches!(build_digraph(&f, &[c(0.0, 0.0)], 0.5, 0.3), Err(GeometryError::Radii { .. })));
    }

    #[test]
    fn shrinking_targets_keeps_edges() {
        let f = parse_map("z^3").unwrap();
        let centers = roots_of_unity(6);
        let big = build_digraph(&f, &centers, 0.3, 0.4).unwrap();
        let small = build_digraph(&f, &centers, 0.3, 0.3).unwrap();
        assert!(small.edges.len() >= big.edges.len());
        for e in &big.edges {
            assert!(small.edge(e.source, e.target).is_some());
        }
    }

    #[test]
    fn summary_round_trips() {
        let f = parse_map("z^2").unwrap();
        let g = build_digraph(&f, &[c(1.0, 0.0), c(-1.0, 0.0)], 0.5, 0.5).unwrap();
        let s = g.summary();
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<DigraphSummary>(&js).unwrap(), s);
        let full = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<IslandDigraph>(&full).unwrap(), g);
    }

    #[test]
    fn two_cycle_examples() {
        let k3 = Digraph::from_edges(3, (0..3).flat_map(|i| (0..3).filter(move |&j| j != i).map(move |j| (i, j))));
        assert_eq!(find_two_cycles(&k3, 1).unwrap(), TwoCycleCertificate { hub: 0, partners: vec![1], k: 1 });

        let cyc = Digraph::from_edges(5, (0..5).flat_map(|i| (1..=3).map(move |s| (i, (i + s) % 5))));
        let cert = find_two_cycles(&cyc, 2).unwrap();
        assert_eq!(cert, TwoCycleCertificate { hub: 0, partners: vec![2], k: 2 });
        assert!(cert.validate(&cyc));

        assert!(matches!(find_two_cycles(&Digraph::new(4), 1), Err(CycleError::HypothesisViolated { .. })));
        assert!(matches!(find_two_cycles(&k3, 2), Err(CycleError::HypothesisViolated { .. })));
    }

    /// Random digraph with loop-free out-degree ≥ n − k everywhere.
    pub(crate) fn random_hypothesis_digraph(rng: &mut impl Rng, n: usize, k: usize) -> Digraph {
        let mut g = Digraph::new(n);
        for v in 0..n {
            let mut others: Vec<usize> = (0..n).filter(|&j| j != v).collect();
            rand::seq::SliceRandom::shuffle(&mut others[..], rng);
            let deg = rng.gen_range(n - k..n);
            for &j in &others[..deg] {
                g.adj[v][j] = true;
            }
            if rng.gen_bool(0.2) {
                g.adj[v][v] = true;
            }
        }
        g
    }

    #[test]
    fn two_cycles_agree_with_brute_force() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..300 {
            let n = rng.gen_range(3..=8);
            let k = rng.gen_range(1..=(n - 1) / 2);
            let g = random_hypothesis_digraph(&mut rng, n, k);
            let cert = find_two_cycles(&g, k).unwrap();
            assert!(cert.validate(&g));
            // Brute force: the first hub (by index) with enough mutual pairs.
            let brute = (0..n)
                .find(|&v| (0..n).filter(|&p| p != v && g.adj[v][p] && g.adj[p][v]).count() >= n - 2 * k)
                .unwrap();
            assert_eq!(cert.hub, brute);
        }
    }

    #[test]
    fn scans() {
        let family: Vec<EntireMap> = (2..=20).map(|k| parse_map(&format!("z^{k}")).unwrap()).collect();
        let centers = roots_of_unity(12);
        let (idx, g) = scan_family(&family, &centers, 0.12, 0.12, 8, family.len()).unwrap();
        assert!(g.digraph().min_out_degree() >= 8, "index {idx}");

        let shifts: Vec<EntireMap> = (1..=5).map(|k| parse_map(&format!("z + {k}")).unwrap()).collect();
        assert_eq!(
            scan_family(&shifts, &centers, 0.12, 0.12, 1, 5).unwrap_err(),
            ScanError::ScanExhausted { k_max: 5 }
        );
    }
}
