//! Certified entropy lower bounds for transcendental maps through the
//! rescaled family `f_n(z) = f(n z)/n`: polynomial-like restrictions around
//! many zeros, or second-iterate horseshoes from island two-cycles.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{AnalyticMap, Disk, EvalError};
use crate::certificate::{
    EntropyCertificate, HorseshoeProvenance, PolylikeProvenance, Provenance, RevalidationError, SymbolLegs, ZeroSearch,
};
use crate::function::EntireMap;
use crate::ifs::{verify_conjugacy, BranchError, BranchSystem, ConjugacyError, ConjugacyReport, InverseBranch, InverseLeg};
use crate::island::{
    build_digraph_with, check_geometry, find_two_cycles, scan_family_with, CycleError, GeometryError,
    IslandDigraph, IslandOptions, ScanError,
};
use crate::polylike::{certify_polylike, PolylikeError, RADIUS_JITTER};
use crate::winding::{circle_winding, WindingError};
use crate::ComplexVal;

/// Range disk radius for the zeros route.
pub const RANGE_RADIUS: f64 = 0.9;
/// Consumers inflate the sampled maximum modulus by this factor.
pub const MODULUS_INFLATION: f64 = 1.1;
/// Two-cycle deficiency used by the islands route.
pub const ISLAND_DEFICIENCY: usize = 4;
const ZERO_COUNT_SAMPLES: usize = 1024;
const MODULUS_SAMPLES: usize = 512;

/// `member(n) = f(n z)/n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RescaleFamily {
    pub base: EntireMap,
}

impl RescaleFamily {
    pub fn member(&self, n: u64) -> EntireMap {
        self.base.rescaled(n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoutePreference {
    #[default]
    Auto,
    Zeros,
    Islands,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budgets {
    /// Zero-search radii are `1.25^j` for `j < zero_steps`.
    pub zero_steps: usize,
    /// Largest rescale index tried by the islands route.
    pub k_max: u64,
    /// Ratio of the geometric index schedule of the islands route.
    pub k_growth: f64,
    pub grid_density: usize,
    pub critical_grid: usize,
    pub depth: usize,
    pub tolerance: f64,
    /// Target radius for the islands route; defaults to 0.45 × the minimum probe distance.
    pub delta: Option<f64>,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            zero_steps: 40,
            k_max: 1_000_000,
            k_growth: 1.25,
            grid_density: 24,
            critical_grid: 16,
            depth: 3,
            tolerance: 1e-9,
            delta: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationRequest {
    pub f: EntireMap,
    pub target_m: u32,
    #[serde(default)]
    pub route: RoutePreference,
    #[serde(default)]
    pub budgets: Budgets,
    /// Replace `f` by `f(z + c) − d` before certifying.
    #[serde(default)]
    pub translate: Option<(ComplexVal, ComplexVal)>,
    #[serde(default)]
    pub probes: Option<Vec<ComplexVal>>,
}

impl CertificationRequest {
    pub fn new(f: EntireMap, target_m: u32) -> Self {
        CertificationRequest { f, target_m, route: RoutePreference::Auto, budgets: Budgets::default(), translate: None, probes: None }
    }

    fn base(&self) -> EntireMap {
        match self.translate {
            Some((c, d)) => self.f.translated(c, d),
            None => self.f.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub enum RescaleError {
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("fewer than {target} zeros within radius {radius} (found {found})")]
    ZeroDeficient { target: u32, radius: f64, found: i64 },
    #[error("zero count failed at radius {radius}: {reason}")]
    ZeroCount { radius: f64, reason: String },
    #[error("polynomial-like restriction of f_{n}: {source}")]
    Polylike { n: u64, source: PolylikeError },
    #[error("restriction of f_{n} has degree {degree} < {target}")]
    InsufficientDegree { n: u64, degree: u32, target: u32 },
    #[error("polynomial of degree {degree} has entropy log {degree} < log {target}")]
    PolynomialCap { degree: u32, target: u32 },
    #[error("probe geometry: {0}")]
    Geometry(GeometryError),
    #[error("family scan: {0}")]
    ScanExhausted(ScanError),
    #[error("two-cycle search on f_{k}: {source}")]
    TwoCycle { k: u64, source: CycleError },
    #[error("{partners} mutual partners: need at least two symbols")]
    TooFewSymbols { partners: usize },
    #[error("branch system for the second iterate of f_{k}: {source}")]
    Branches { k: u64, source: BranchError },
    #[error("conjugacy check could not run: {0}")]
    Conjugacy(ConjugacyError),
    #[error("conjugacy fails: defect {max_defect:.3e} against {threshold:.3e}, gap {injectivity_gap:.3e}")]
    ConjugacyFail { max_defect: f64, threshold: f64, injectivity_gap: f64 },
    #[error("horseshoe bound {bound:.6} is below log {target}")]
    BoundBelowTarget { bound: f64, target: u32 },
    #[error("zeros route: {zeros}; islands route: {islands}")]
    BothRoutesFailed { zeros: Box<RescaleError>, islands: Box<RescaleError> },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl RescaleError {
    /// Pipeline stage that aborted.
    pub fn stage(&self) -> &'static str {
        match self {
            RescaleError::InvalidRequest(_) => "request",
            RescaleError::ZeroDeficient { .. } | RescaleError::ZeroCount { .. } => "zero_search",
            RescaleError::Polylike { .. } | RescaleError::InsufficientDegree { .. } => "polylike",
            RescaleError::PolynomialCap { .. } => "polynomial_cap",
            RescaleError::Geometry(_) => "geometry",
            RescaleError::ScanExhausted(_) => "scan",
            RescaleError::TwoCycle { .. } | RescaleError::TooFewSymbols { .. } => "two_cycle",
            RescaleError::Branches { .. } => "branch_system",
            RescaleError::Conjugacy(_) | RescaleError::ConjugacyFail { .. } => "conjugacy",
            RescaleError::BoundBelowTarget { .. } => "islands_bound",
            RescaleError::BothRoutesFailed { .. } => "auto",
            RescaleError::Eval(_) => "evaluation",
        }
    }
}

/// Zeros of `f` in `B(0, R)` with multiplicity, by the argument principle
/// on `|z| = R`. A zero too close to the circle moves the radius through
/// the factors `1 + s · 1e-4`, `s` in [`RADIUS_JITTER`].
pub fn count_zeros<F: AnalyticMap + ?Sized>(f: &F, radius: f64) -> Result<i64, WindingError> {
    let mut last = None;
    for s in RADIUS_JITTER {
        let disk = Disk::new(ComplexVal::new(0.0, 0.0), radius * (1.0 + s * 1e-4));
        match circle_winding(f, &disk, ComplexVal::new(0.0, 0.0), ZERO_COUNT_SAMPLES) {
            Ok(n) => return Ok(n),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("nonempty jitter schedule"))
}

/// Maximum of `|f|` on `|z| = R`: the best of `samples` equally spaced
/// points, refined by golden-section search on the neighbouring arc.
pub fn max_modulus<F: AnalyticMap + ?Sized>(f: &F, radius: f64, samples: usize) -> Result<f64, EvalError> {
    assert!(samples >= 256, "max_modulus needs at least 256 samples");
    let at = |t: f64| -> Result<f64, EvalError> { Ok(f.eval(ComplexVal::from_polar(radius, t))?.norm()) };
    let step = TAU / samples as f64;
    let mut best = (0.0, f64::NEG_INFINITY);
    for k in 0..samples {
        let t = step * k as f64;
        let v = at(t)?;
        if v > best.1 {
            best = (t, v);
        }
    }
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (best.0 - step, best.0 + step);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (at(x1)?, at(x2)?);
    for _ in 0..80 {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = at(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = at(x2)?;
        }
    }
    Ok(best.1.max(f1).max(f2))
}

fn zero_radius(j: usize) -> f64 {
    1.25f64.powi(j as i32)
}

/// Zeros route: a radius `R` with at least `m` zeros, `M = 1.1 · max |f|`
/// on `|z| = R`, `n = ⌊2M⌋ + 1`, and a polynomial-like restriction of
/// `f_n` over `B(0, 0.9)` through `0` of degree at least `m`. The bound is
/// `log m`.
pub fn certify_via_zeros(req: &CertificationRequest) -> Result<EntropyCertificate, RescaleError> {
    if req.target_m < 2 {
        return Err(RescaleError::InvalidRequest("target_m must be at least 2".into()));
    }
    let base = req.base();
    let m = req.target_m;
    let mut found = (0.0, 0i64);
    let mut hit = None;
    for j in 0..req.budgets.zero_steps {
        let radius = zero_radius(j);
        let zeros = count_zeros(&base, radius).map_err(|e| RescaleError::ZeroCount { radius, reason: e.to_string() })?;
        found = (radius, zeros);
        if zeros >= i64::from(m) {
            hit = Some((radius, zeros));
            break;
        }
    }
    let Some((radius, zeros)) = hit else {
        return Err(RescaleError::ZeroDeficient { target: m, radius: found.0, found: found.1 });
    };
    let max_mod = max_modulus(&base, radius, MODULUS_SAMPLES)?;
    let inflated = MODULUS_INFLATION * max_mod;
    if !(2.0 * inflated < 9.0e15) {
        return Err(RescaleError::InvalidRequest(format!("maximum modulus {max_mod:.3e} too large to rescale")));
    }
    let n = (2.0 * inflated).floor() as u64 + 1;
    let fn_map = base.rescaled(n);
    let range = Disk::new(ComplexVal::new(0.0, 0.0), RANGE_RADIUS);
    let p = certify_polylike(&fn_map, &range, &range, ComplexVal::new(0.0, 0.0))
        .map_err(|source| RescaleError::Polylike { n, source })?;
    if p.degree < m {
        return Err(RescaleError::InsufficientDegree { n, degree: p.degree, target: m });
    }
    let mut prov = PolylikeProvenance::from_restriction(&base, &p, m);
    prov.rescale_index = n;
    prov.zero_search = Some(ZeroSearch { radius, zeros, max_modulus: max_mod, inflated });
    Ok(EntropyCertificate::with_notes(Provenance::Polylike(prov), route_notes(req)))
}

fn route_notes(req: &CertificationRequest) -> Vec<String> {
    let mut notes = Vec::new();
    if req.route == RoutePreference::Auto {
        notes.push("route auto: zeros tried first, islands as fallback; normality of the family is not decided".to_string());
    }
    if let Some((c, d)) = req.translate {
        notes.push(format!("certified map is f(z + {c}) - {d}"));
    }
    notes
}

/// `n` points `i · 2πj/n`, `j = 1..=n`.
pub fn default_probes(n: usize) -> Vec<ComplexVal> {
    (1..=n).map(|j| ComplexVal::new(0.0, TAU * j as f64 / n as f64)).collect()
}

fn min_distance(points: &[ComplexVal]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.min((points[i] - points[j]).norm());
        }
    }
    best
}

/// Rescale indices `⌈g^j⌉` up to `k_max`, deduplicated.
pub fn index_schedule(k_max: u64, growth: f64) -> Vec<u64> {
    assert!(growth > 1.0, "index schedule must grow");
    let mut out: Vec<u64> = Vec::new();
    let mut x = 1.0f64;
    while x.ceil() <= k_max as f64 {
        let k = x.ceil() as u64;
        if out.last() != Some(&k) {
            out.push(k);
        }
        x *= growth;
    }
    out
}

/// Inverse branches of `f_k ∘ f_k` on the hub disk: for each partner, back
/// through the island over the hub disk in the partner disk, then through
/// the island over the partner disk in the hub disk.
fn second_iterate_branches(fk: &EntireMap, centers: &[ComplexVal], delta: f64, hub: usize, symbols: &[SymbolLegs]) -> Vec<InverseBranch> {
    symbols
        .iter()
        .map(|s| InverseBranch::Lifted {
            legs: vec![
                InverseLeg { map: fk.clone(), center: centers[hub], radius: delta, core: s.back_core },
                InverseLeg { map: fk.clone(), center: centers[s.partner], radius: delta, core: s.out_core },
            ],
        })
        .collect()
}

fn symbol_legs(g: &IslandDigraph, hub: usize, partners: &[usize]) -> Vec<SymbolLegs> {
    partners
        .iter()
        .map(|&p| SymbolLegs {
            partner: p,
            out_core: g.edge(hub, p).expect("partner edge").witness.core,
            back_core: g.edge(p, hub).expect("partner edge").witness.core,
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn horseshoe_check(
    fk: &EntireMap,
    k: u64,
    centers: &[ComplexVal],
    delta: f64,
    hub: usize,
    symbols: &[SymbolLegs],
    depth: usize,
    tolerance: f64,
) -> Result<(BranchSystem, ConjugacyReport), RescaleError> {
    let g = fk.compose(fk);
    let branches = second_iterate_branches(fk, centers, delta, hub, symbols);
    let bs = BranchSystem::build(&g, centers[hub], delta, branches).map_err(|source| RescaleError::Branches { k, source })?;
    let report = verify_conjugacy(&bs, &g, depth, tolerance).map_err(RescaleError::Conjugacy)?;
    if !report.pass {
        return Err(RescaleError::ConjugacyFail {
            max_defect: report.max_defect,
            threshold: report.threshold,
            injectivity_gap: report.injectivity_gap,
        });
    }
    Ok((bs, report))
}

/// Islands route: scans `f_k` over a geometric index schedule until every
/// probe disk `B(x_i, γ)` holds islands over at least `n − 4` other probe
/// disks `B(x_j, δ)`, with `γ = δ/648`; takes the first two-cycle hub and
/// all its mutual partners; builds and verifies the inverse-branch system of
/// `f_k ∘ f_k` on the hub disk. The bound is `log(symbols)/2`.
pub fn certify_via_islands(req: &CertificationRequest, probes: &[ComplexVal]) -> Result<EntropyCertificate, RescaleError> {
    let n = probes.len();
    if n < 2 * ISLAND_DEFICIENCY + 1 {
        return Err(RescaleError::InvalidRequest(format!("need at least {} probes, got {n}", 2 * ISLAND_DEFICIENCY + 1)));
    }
    let b = &req.budgets;
    let delta = b.delta.unwrap_or(0.45 * min_distance(probes));
    let gamma = delta / (8.0 * crate::ifs::DISTORTION);
    check_geometry(probes, gamma, delta).map_err(RescaleError::Geometry)?;
    let base = req.base();
    let family = RescaleFamily { base: base.clone() };
    let opts = IslandOptions { grid_density: b.grid_density, critical_grid: b.critical_grid };
    let required = n - ISLAND_DEFICIENCY;
    let schedule = index_schedule(b.k_max, b.k_growth);
    let (k, digraph) = scan_family_with(|k| family.member(k), &schedule, probes, gamma, delta, required, &opts)
        .map_err(RescaleError::ScanExhausted)?;
    let graph = digraph.digraph();
    let two = find_two_cycles(&graph, ISLAND_DEFICIENCY).map_err(|source| RescaleError::TwoCycle { k, source })?;
    let partners = graph.mutual_partners(two.hub);
    if partners.len() < 2 {
        return Err(RescaleError::TooFewSymbols { partners: partners.len() });
    }
    let symbols = symbol_legs(&digraph, two.hub, &partners);
    let fk = family.member(k);
    let (bs, report) = horseshoe_check(&fk, k, probes, delta, two.hub, &symbols, b.depth, b.tolerance)?;
    let prov = HorseshoeProvenance {
        function: base.source().to_string(),
        rescale_index: k,
        centers: probes.to_vec(),
        gamma,
        delta,
        required_out_degree: required,
        min_out_degree: graph.min_out_degree(),
        edge_count: digraph.edges.len(),
        hub: two.hub,
        symbols,
        contraction_bounds: bs.contraction_bounds,
        depth: report.depth,
        tolerance: report.tolerance,
        max_defect: report.max_defect,
        threshold: report.threshold,
        injectivity_gap: report.injectivity_gap,
    };
    Ok(EntropyCertificate::with_notes(Provenance::Horseshoe(prov), route_notes(req)))
}

/// Re-runs the island search, digraph, branch-system and conjugacy checks
/// recorded in a horseshoe provenance.
pub fn revalidate_horseshoe(h: &HorseshoeProvenance) -> Result<(), RevalidationError> {
    let base = EntireMap::parse(&h.function).map_err(|e| RevalidationError::BadFunction(e.to_string()))?;
    let fk = base.rescaled(h.rescale_index);
    let fail = |e: &dyn std::fmt::Display| RevalidationError::CheckFailed(e.to_string());
    if h.gamma != h.delta / (8.0 * crate::ifs::DISTORTION) || h.symbols.len() < 2 {
        return Err(RevalidationError::CheckFailed("recorded geometry is not a valid horseshoe setup".into()));
    }
    let digraph = build_digraph_with(&fk, &h.centers, h.gamma, h.delta, &IslandOptions::default()).map_err(|e| fail(&e))?;
    let graph = digraph.digraph();
    if graph.min_out_degree() < h.required_out_degree || graph.min_out_degree() != h.min_out_degree {
        return Err(RevalidationError::Drift { field: "min_out_degree" });
    }
    let partners: Vec<usize> = h.symbols.iter().map(|s| s.partner).collect();
    if symbol_legs(&digraph, h.hub, &partners) != h.symbols || graph.mutual_partners(h.hub) != partners {
        return Err(RevalidationError::Drift { field: "symbols" });
    }
    let (_, report) = horseshoe_check(&fk, h.rescale_index, &h.centers, h.delta, h.hub, &h.symbols, h.depth, h.tolerance)
        .map_err(|e| fail(&e))?;
    if report.max_defect != h.max_defect || report.injectivity_gap != h.injectivity_gap {
        return Err(RevalidationError::Drift { field: "conjugacy" });
    }
    Ok(())
}

/// Certificate for `h(f) ≥ log m` by the requested route. `Auto` tries
/// zeros first and islands (request probes, else [`default_probes`]) as
/// fallback. An islands certificate whose bound `log(symbols)/2` is below
/// `log m` is rejected.
pub fn certify(req: &CertificationRequest) -> Result<EntropyCertificate, RescaleError> {
    let islands = || {
        let cert = certify_via_islands(req, &probes_for(req))?;
        let target = f64::from(req.target_m).ln();
        if cert.bound < target {
            return Err(RescaleError::BoundBelowTarget { bound: cert.bound, target: req.target_m });
        }
        Ok(cert)
    };
    match req.route {
        RoutePreference::Zeros => certify_via_zeros(req),
        RoutePreference::Islands => islands(),
        RoutePreference::Auto => match certify_via_zeros(req) {
            Ok(c) => Ok(c),
            Err(zeros) => islands().map_err(|islands| RescaleError::BothRoutesFailed { zeros: Box::new(zeros), islands: Box::new(islands) }),
        },
    }
}

fn probes_for(req: &CertificationRequest) -> Vec<ComplexVal> {
    req.probes.clone().unwrap_or_else(|| default_probes(2 * ISLAND_DEFICIENCY + 1))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rung {
    pub target: u32,
    pub result: Result<EntropyCertificate, RescaleError>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderReport {
    pub rungs: Vec<Rung>,
    pub warnings: Vec<String>,
}

impl LadderReport {
    pub fn certificates(&self) -> impl Iterator<Item = &EntropyCertificate> {
        self.rungs.iter().filter_map(|r| r.result.as_ref().ok())
    }
}

/// One certification per target (auto route); failures are kept as rungs.
pub fn entropy_ladder(f: &EntireMap, targets: &[u32]) -> LadderReport {
    entropy_ladder_with(f, targets, &Budgets::default())
}

pub fn entropy_ladder_with(f: &EntireMap, targets: &[u32], budgets: &Budgets) -> LadderReport {
    let mut warnings = Vec::new();
    if !targets.windows(2).all(|w| w[0] <= w[1]) {
        warnings.push("targets are not ascending".to_string());
    }
    let cap = f.polynomial_degree();
    if let Some(d) = cap {
        warnings.push(format!("polynomial of degree {d}: entropy is log {d}, so the ladder stops at log {d}"));
    }
    let rungs = targets
        .iter()
        .map(|&m| {
            let result = match cap {
                Some(d) if m > d.max(1) => Err(RescaleError::PolynomialCap { degree: d, target: m }),
                _ => {
                    let mut req = CertificationRequest::new(f.clone(), m);
                    req.budgets = budgets.clone();
                    if cap.is_some() {
                        req.route = RoutePreference::Zeros;
                    }
                    certify(&req)
                }
            };
            Rung { target: m, result }
        })
        .collect();
    LadderReport { rungs, warnings }
}
