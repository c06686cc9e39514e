//! Contracting inverse-branch systems and their symbolic coding.
//!
//! For a map `g` with islands `D_1..D_n ⊂ B(a, γ)` over `B(a, δ)`, the
//! branches `T_j = (g|_{D_j})⁻¹` restricted to the closed disk
//! `D̄ = B̄(a, δ/2)` form a hyperbolic iterated function system. The address
//! map `Φ(ω) = lim T_{ω_1} ∘ ⋯ ∘ T_{ω_k}(a)` conjugates the one-sided shift
//! to `g` on the attractor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{evaluation_floor, AnalyticMap, Disk};
use crate::function::EntireMap;
use crate::island::IslandWitness;
use crate::lift::{lift_segment, LiftError, LiftOptions};
use crate::shift::SymbolWord;
use crate::winding::polygon_winding;
use crate::ComplexVal;

/// Sharp bound on `|h'(z)| / |h'(w)|` for univalent `h` on the unit disk and
/// `|z|, |w| ≤ r`: `((1 + r) / (1 − r))⁴`.
pub fn koebe_constant(r: f64) -> f64 {
    assert!(r > 0.0 && r < 1.0, "koebe_constant needs 0 < r < 1, got {r}");
    ((1.0 + r) / (1.0 - r)).powi(4)
}

/// Distortion constant for `r = 1/2`.
pub const DISTORTION: f64 = 81.0;

/// Number of random test points per branch.
pub const BRANCH_SAMPLES: usize = 200;
const SAMPLE_SEED: u64 = 0x5eed_b7a1;
const BOUNDARY_POINTS: usize = 256;

/// One inverse step: the branch of `map⁻¹` sending `center` to `core`,
/// continued along straight segments from `center`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseLeg {
    pub map: EntireMap,
    pub center: ComplexVal,
    /// Radius of the disk around `center` the branch is defined on; sets
    /// the continuation tolerance.
    pub radius: f64,
    pub core: ComplexVal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InverseBranch {
    /// `z ↦ scale · z + offset`.
    Affine { scale: ComplexVal, offset: ComplexVal },
    /// Legs applied in order: the output of one leg is the input of the next.
    Lifted { legs: Vec<InverseLeg> },
}

impl InverseBranch {
    /// Single-leg branch through an island of `g` over `B(a, δ)`.
    pub fn from_witness(g: &EntireMap, witness: &IslandWitness) -> Self {
        InverseBranch::Lifted {
            legs: vec![InverseLeg {
                map: g.clone(),
                center: witness.target.center,
                radius: witness.target.radius,
                core: witness.core,
            }],
        }
    }

    /// `(T(w), T'(w))`.
    pub fn eval(&self, w: ComplexVal) -> Result<(ComplexVal, ComplexVal), LiftError> {
        match self {
            InverseBranch::Affine { scale, offset } => Ok((scale * w + offset, *scale)),
            InverseBranch::Lifted { legs } => {
                let mut z = w;
                let mut d = ComplexVal::new(1.0, 0.0);
                for leg in legs {
                    let opts = LiftOptions::for_target(&Disk::new(leg.center, leg.radius));
                    z = lift_segment(&leg.map, leg.core, leg.center, z, &opts)?;
                    d /= leg.map.jet(z)?.deriv;
                }
                Ok((z, d))
            }
        }
    }

    /// Core preimage of the base point (the affine image of 0 for affine branches).
    pub fn core(&self) -> ComplexVal {
        match self {
            InverseBranch::Affine { offset, .. } => *offset,
            InverseBranch::Lifted { legs } => legs.last().map(|l| l.core).unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub enum BranchError {
    #[error("need at least two branches, got {0}")]
    TooFewBranches(usize),
    #[error("branch {j}: |T'({point})| = {value} exceeds 1/2")]
    ContractionViolation { j: usize, point: ComplexVal, value: f64 },
    #[error("branch {j}: g(T({point})) misses by {defect:.3e}")]
    InversionViolation { j: usize, point: ComplexVal, defect: f64 },
    #[error("branch images {i} and {j} are not disjoint")]
    DisjointnessViolation { i: usize, j: usize },
    #[error("island of branch {j} reaches {reach:.3e} from a, beyond gamma = {gamma:.3e}")]
    NotInGammaDisk { j: usize, reach: f64, gamma: f64 },
    #[error("branch {j}: {source}")]
    Lift { j: usize, source: LiftError },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchSystem {
    pub a: ComplexVal,
    pub delta: f64,
    pub gamma: f64,
    pub distortion: f64,
    pub branches: Vec<InverseBranch>,
    /// Largest measured `|T_j'|` over the test points, per branch.
    pub contraction_bounds: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchSystemSummary {
    pub a: ComplexVal,
    pub delta: f64,
    pub gamma: f64,
    pub distortion: f64,
    pub contraction_bounds: Vec<f64>,
    pub cores: Vec<ComplexVal>,
}

/// `n` points uniformly distributed in `D̄ = B̄(a, δ/2)`, fixed seed.
pub fn test_points(a: ComplexVal, delta: f64, n: usize) -> Vec<ComplexVal> {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    (0..n)
        .map(|_| {
            let r = 0.5 * delta * rng.gen::<f64>().sqrt();
            a + ComplexVal::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect()
}

fn circle(center: ComplexVal, r: f64, n: usize) -> Vec<ComplexVal> {
    (0..n).map(|k| center + ComplexVal::from_polar(r, std::f64::consts::TAU * k as f64 / n as f64)).collect()
}

impl BranchSystem {
    /// Verified system for islands of `g` in `B(a, γ)`, `γ = δ / (8 · 81)`.
    pub fn build<G: AnalyticMap + ?Sized>(g: &G, a: ComplexVal, delta: f64, branches: Vec<InverseBranch>) -> Result<Self, BranchError> {
        Self::assemble(g, a, delta, branches, true)
    }

    /// Verified system without the `B(a, γ)` containment requirement, for
    /// explicit (e.g. affine) branches whose images are known in closed form.
    pub fn from_affine<G: AnalyticMap + ?Sized>(g: &G, a: ComplexVal, delta: f64, branches: Vec<InverseBranch>) -> Result<Self, BranchError> {
        Self::assemble(g, a, delta, branches, false)
    }

    fn assemble<G: AnalyticMap + ?Sized>(
        g: &G,
        a: ComplexVal,
        delta: f64,
        branches: Vec<InverseBranch>,
        require_gamma: bool,
    ) -> Result<Self, BranchError> {
        if branches.len() < 2 {
            return Err(BranchError::TooFewBranches(branches.len()));
        }
        let gamma = delta / (8.0 * DISTORTION);
        if require_gamma {
            for (j, b) in branches.iter().enumerate() {
                let mut reach: f64 = 0.0;
                for w in circle(a, delta, BOUNDARY_POINTS) {
                    let (z, _) = b.eval(w).map_err(|source| BranchError::Lift { j, source })?;
                    reach = reach.max((z - a).norm());
                }
                if reach >= gamma {
                    return Err(BranchError::NotInGammaDisk { j, reach, gamma });
                }
            }
        }
        let images: Vec<Vec<ComplexVal>> = branches
            .iter()
            .enumerate()
            .map(|(j, b)| {
                circle(a, 0.5 * delta, BOUNDARY_POINTS)
                    .into_iter()
                    .map(|w| b.eval(w).map(|r| r.0).map_err(|source| BranchError::Lift { j, source }))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                if !polylines_disjoint(&images[i], &images[j]) {
                    return Err(BranchError::DisjointnessViolation { i, j });
                }
            }
        }
        let points = test_points(a, delta, BRANCH_SAMPLES);
        let mut contraction_bounds = Vec::with_capacity(branches.len());
        for (j, b) in branches.iter().enumerate() {
            let mut bound: f64 = 0.0;
            for &p in &points {
                let (z, d) = b.eval(p).map_err(|source| BranchError::Lift { j, source })?;
                let jet = g.jet(z).map_err(|e| BranchError::Lift { j, source: e.into() })?;
                let defect = (jet.value - p).norm();
                if defect > 1e-9 * delta + evaluation_floor(z, &jet) {
                    return Err(BranchError::InversionViolation { j, point: p, defect });
                }
                let value = d.norm();
                if value > 0.5 {
                    return Err(BranchError::ContractionViolation { j, point: p, value });
                }
                bound = bound.max(value);
            }
            contraction_bounds.push(bound);
        }
        Ok(BranchSystem { a, delta, gamma, distortion: DISTORTION, branches, contraction_bounds })
    }

    pub fn n_symbols(&self) -> usize {
        self.branches.len()
    }

    pub fn summary(&self) -> BranchSystemSummary {
        BranchSystemSummary {
            a: self.a,
            delta: self.delta,
            gamma: self.gamma,
            distortion: self.distortion,
            contraction_bounds: self.contraction_bounds.clone(),
            cores: self.branches.iter().map(InverseBranch::core).collect(),
        }
    }
}

/// Two closed polygons bound disjoint closed regions when their edges do
/// not cross and neither polygon encloses a vertex of the other.
fn polylines_disjoint(p: &[ComplexVal], q: &[ComplexVal]) -> bool {
    if polygon_winding(p, q[0]) != 0 || polygon_winding(q, p[0]) != 0 {
        return false;
    }
    let edges = |v: &[ComplexVal]| -> Vec<(ComplexVal, ComplexVal)> { (0..v.len()).map(|k| (v[k], v[(k + 1) % v.len()])).collect() };
    let (ep, eq) = (edges(p), edges(q));
    !ep.iter().any(|a| eq.iter().any(|b| segments_meet(*a, *b)))
}

fn segments_meet((a, b): (ComplexVal, ComplexVal), (c, d): (ComplexVal, ComplexVal)) -> bool {
    let cross = |o: ComplexVal, p: ComplexVal, q: ComplexVal| ((p - o).conj() * (q - o)).im;
    let (d1, d2) = (cross(c, d, a), cross(c, d, b));
    let (d3, d4) = (cross(a, b, c), cross(a, b, d));
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return true;
    }
    let on = |o: ComplexVal, p: ComplexVal, q: ComplexVal, cr: f64| {
        cr == 0.0 && q.re >= o.re.min(p.re) && q.re <= o.re.max(p.re) && q.im >= o.im.min(p.im) && q.im <= o.im.max(p.im)
    };
    on(c, d, a, d1) || on(c, d, b, d2) || on(a, b, c, d3) || on(a, b, d, d4)
}

/// `T_{ω_1} ∘ ⋯ ∘ T_{ω_depth}(a)`.
///
/// # Panics
/// If `depth` exceeds the word length or a symbol is out of range.
pub fn address_point(bs: &BranchSystem, word: &SymbolWord, depth: usize) -> Result<ComplexVal, LiftError> {
    assert!(depth <= word.0.len(), "depth {depth} exceeds word length {}", word.0.len());
    let mut z = bs.a;
    for &s in word.0[..depth].iter().rev() {
        z = bs.branches[s].eval(z)?.0;
    }
    Ok(z)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugacyReport {
    pub depth: usize,
    pub n_symbols: usize,
    pub max_defect: f64,
    pub worst_word: SymbolWord,
    pub injectivity_gap: f64,
    pub tolerance: f64,
    /// Allowed defect: `tolerance + δ · 2^{-depth}`.
    pub threshold: f64,
    pub pass: bool,
}

/// Largest word count [`verify_conjugacy`] will enumerate.
pub const MAX_WORDS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub enum ConjugacyError {
    #[error("{n}^{depth} words exceed the enumeration budget")]
    TooManyWords { n: usize, depth: usize },
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error(transparent)]
    Lift(#[from] LiftError),
}

fn word_of(mut idx: usize, n: usize, len: usize) -> SymbolWord {
    let mut w = vec![0; len];
    for slot in w.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    SymbolWord(w)
}

/// Checks `g(Φ_{d+1}(ω)) = Φ_d(σω)` on every word of length `depth + 1`,
/// where `Φ_d` is the depth-`d` address point, and measures the minimum
/// distance between depth-`depth` address points whose first symbols differ.
pub fn verify_conjugacy<G: AnalyticMap + ?Sized>(
    bs: &BranchSystem,
    g: &G,
    depth: usize,
    tol: f64,
) -> Result<ConjugacyReport, ConjugacyError> {
    let n = bs.n_symbols();
    if depth == 0 {
        return Err(ConjugacyError::ZeroDepth);
    }
    let count = (0..=depth).try_fold(1usize, |acc, _| acc.checked_mul(n).filter(|&c| c <= MAX_WORDS * n));
    let Some(count) = count else {
        return Err(ConjugacyError::TooManyWords { n, depth });
    };
    let defects: Vec<(f64, f64)> = (0..count)
        .into_par_iter()
        .map(|idx| {
            let w = word_of(idx, n, depth + 1);
            let top = address_point(bs, &w, depth + 1)?;
            let jet = g.jet(top).map_err(LiftError::from)?;
            let rhs = address_point(bs, &w.shifted(), depth)?;
            Ok(((jet.value - rhs).norm(), evaluation_floor(top, &jet)))
        })
        .collect::<Result<_, LiftError>>()?;
    let (mut worst, mut max_defect, mut floor) = (0, 0.0, 0.0f64);
    for (i, &(d, fl)) in defects.iter().enumerate() {
        floor = floor.max(fl);
        if d > max_defect {
            max_defect = d;
            worst = i;
        }
    }
    // Depth-`depth` address points, labelled by first symbol.
    let cyl = n.pow(depth as u32);
    let points: Vec<(ComplexVal, usize)> = (0..cyl)
        .into_par_iter()
        .map(|idx| {
            let w = word_of(idx, n, depth);
            address_point(bs, &w, depth).map(|p| (p, w.0[0]))
        })
        .collect::<Result<_, _>>()?;
    let injectivity_gap = labelled_gap(points);
    let threshold = tol + bs.delta * 0.5f64.powi(depth as i32) + floor;
    Ok(ConjugacyReport {
        depth,
        n_symbols: n,
        max_defect,
        worst_word: word_of(worst, n, depth + 1),
        injectivity_gap,
        tolerance: tol,
        threshold,
        pass: max_defect <= threshold && injectivity_gap > 0.0,
    })
}

/// Minimum distance between points with different labels (sweep by `re`).
fn labelled_gap(mut pts: Vec<(ComplexVal, usize)>) -> f64 {
    pts.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[j].0.re - pts[i].0.re >= best {
                break;
            }
            if pts[i].1 != pts[j].1 {
                best = best.min((pts[i].0 - pts[j].0).norm());
            }
        }
    }
    best
}
