//! Polynomial-like restrictions `f: U → V` with `U` a component of
//! `f⁻¹(V)` compactly inside `V`, and their degree.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{AnalyticMap, Disk, EvalError};
use crate::certificate::{EntropyCertificate, PolylikeProvenance, Provenance};
use crate::function::{Derivative, EntireMap};
use crate::lift::{lift_circle, LiftError, LiftOptions};
use crate::newton::{newton_preimages, newton_solve};
use crate::winding::{circle_winding, polygon_winding, winding_degree, WindingError};
use crate::ComplexVal;

/// Boundary margin inside `V`, relative to `V.radius`.
pub const POLYLIKE_MARGIN: f64 = 1e-3;
/// Largest number of turns of `∂V` a trace may need.
pub const MAX_TRAVERSALS: u32 = 256;
/// Radius factors tried when a lift hits a critical value on `∂V`.
pub const RADIUS_JITTER: [f64; 7] = [0.0, 1.0, -1.0, 2.0, -2.0, 3.0, -3.0];
const JITTER_STEP: f64 = 1e-4;
/// Initial ray direction and the turn applied between retries.
const RAY_ANGLE: f64 = 0.413;
const GOLDEN_TURN: f64 = 2.399_963_229_728_653;
const PROBE_DIRECTIONS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracedBoundary {
    /// Closed polyline; the last vertex equals the first.
    pub vertices: Vec<ComplexVal>,
    pub traversals: u32,
}

#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub enum PolylikeError {
    #[error("seed maps outside V")]
    SeedOutside,
    #[error("component is not compactly contained: {0}")]
    NotCompactlyContained(String),
    #[error("degree mismatch: traversals {traversals}, winding {winding}, preimages {preimages}")]
    DegreeMismatch { traversals: u32, winding: i64, preimages: usize },
    #[error("component is not simply connected: {critical_points} critical points for degree {degree}")]
    NotSimplyConnected { critical_points: i64, degree: u32 },
    #[error("lift failed: {0}")]
    LiftFailure(LiftError),
    #[error("winding failed: {0}")]
    Winding(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl From<WindingError> for PolylikeError {
    fn from(e: WindingError) -> Self {
        PolylikeError::Winding(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyLikeRestriction {
    pub u_boundary: TracedBoundary,
    pub d: Disk,
    pub v: Disk,
    pub seed: ComplexVal,
    pub degree: u32,
    pub winding: i64,
    pub preimages: usize,
    pub critical_points: i64,
    /// `V.radius − max |u − V.center|` over the boundary.
    pub containment_margin: f64,
}

/// Where a ray from `seed` first leaves `V`.
enum RayExit {
    Hit(ComplexVal),
    /// The ray left `bound` while its image stayed in `V`.
    Escaped(ComplexVal),
}

fn shoot<F: AnalyticMap + ?Sized>(f: &F, v: &Disk, seed: ComplexVal, phi: f64, bound: &Disk) -> Result<RayExit, EvalError> {
    let dir = ComplexVal::from_polar(1.0, phi);
    let inside = |z: ComplexVal| -> Result<bool, EvalError> { Ok(v.contains(f.eval(z)?)) };
    let cap = bound.radius / 32.0;
    let (mut t, mut h) = (0.0f64, cap);
    let mut fz = f.jet(seed)?;
    loop {
        let z = seed + dir * (t + h);
        if !bound.contains(z) {
            return Ok(RayExit::Escaped(z));
        }
        let jz = f.jet(z)?;
        let small = (jz.value - fz.value).norm() <= 0.25 * v.radius && fz.deriv.norm() * h <= 0.25 * v.radius;
        if !small && h > 1e-14 * cap {
            h *= 0.5;
            continue;
        }
        if !v.contains(jz.value) {
            // Bisect [t, t + h] for the crossing.
            let (mut lo, mut hi) = (t, t + h);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if inside(seed + dir * mid)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(RayExit::Hit(seed + dir * lo));
        }
        t += h;
        fz = jz;
        h = (2.0 * h).min(cap);
    }
}

/// Lifts `∂V` from a boundary point reached by a ray from `seed` until the
/// lift closes. Retries with jittered radii and turned rays on lift failure.
pub fn trace_component(f: &EntireMap, v: &Disk, seed: ComplexVal, min_steps: usize) -> Result<TracedBoundary, PolylikeError> {
    let bound = Disk::new(v.center, 1e3 * v.radius + seed.norm());
    trace_within(f, v, seed, min_steps, &bound).map(|(t, _)| t)
}

/// Like [`trace_component`], but any part of the component outside `bound`
/// is reported as [`PolylikeError::NotCompactlyContained`]. Returns the
/// trace and the (possibly jittered) range disk actually lifted.
fn trace_within(f: &EntireMap, v: &Disk, seed: ComplexVal, min_steps: usize, bound: &Disk) -> Result<(TracedBoundary, Disk), PolylikeError> {
    if !v.contains(f.eval(seed)?) {
        return Err(PolylikeError::SeedOutside);
    }
    let mut last = None;
    for (attempt, s) in RADIUS_JITTER.iter().enumerate() {
        let vj = Disk::new(v.center, v.radius * (1.0 + s * JITTER_STEP));
        let phi = RAY_ANGLE + GOLDEN_TURN * attempt as f64;
        let start = match shoot(f, &vj, seed, phi, bound)? {
            RayExit::Hit(z) => z,
            RayExit::Escaped(z) => {
                return Err(PolylikeError::NotCompactlyContained(format!("ray from seed reaches {z} with image inside V")));
            }
        };
        let theta = (f.eval(start)? - vj.center).arg();
        let opts = LiftOptions { min_points: min_steps.max(16), ..LiftOptions::for_target(&vj) }
            .with_max_traversals(MAX_TRAVERSALS)
            .with_bound(*bound);
        let Some(start) = newton_solve(f, vj.point_at(theta), start, opts.residual_tol) else {
            last = Some(LiftError::Stalled { t: theta, reason: "boundary point did not converge".into() });
            continue;
        };
        match lift_circle(f, &vj, start, theta, &opts) {
            Ok(l) => return Ok((TracedBoundary { vertices: l.vertices, traversals: l.traversals }, vj)),
            Err(LiftError::LeftBound { at }) => {
                return Err(PolylikeError::NotCompactlyContained(format!("boundary lift reaches {at}")));
            }
            Err(e) => last = Some(e),
        }
    }
    Err(PolylikeError::LiftFailure(last.expect("at least one attempt")))
}

/// Counts solutions of `f = w` enclosed by `boundary`, with multiplicity.
fn enclosed_preimages(f: &EntireMap, w: ComplexVal, boundary: &[ComplexVal]) -> Result<usize, PolylikeError> {
    let (c, r) = enclosing_disk(boundary);
    let roots: Vec<ComplexVal> =
        newton_preimages(f, w, Disk::new(c, r), 48).into_iter().filter(|p| polygon_winding(boundary, *p) != 0).collect();
    // Multiplicity from a small circle around each root.
    let mut total = 0usize;
    for (i, p) in roots.iter().enumerate() {
        let gap = roots.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| (p - q).norm()).fold(r, f64::min);
        let edge = boundary.iter().map(|b| (p - b).norm()).fold(f64::INFINITY, f64::min);
        let rho = (0.4 * gap).min(0.5 * edge);
        total += circle_winding(f, &Disk::new(*p, rho), w, 64)?.max(0) as usize;
    }
    Ok(total)
}

fn enclosing_disk(boundary: &[ComplexVal]) -> (ComplexVal, f64) {
    let (x0, x1, y0, y1) = boundary.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), z| (a.min(z.re), b.max(z.re), c.min(z.im), d.max(z.im)),
    );
    let c = ComplexVal::new(0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let r = boundary.iter().map(|z| (z - c).norm()).fold(0.0, f64::max);
    (c, r * 1.01 + f64::MIN_POSITIVE)
}

/// Certifies `f: U → V` as polynomial-like, `U` the component of `f⁻¹(V)`
/// containing `seed`. The boundary of `U` must lie in `D` and inside `V`
/// with margin `1e-3 · V.radius`. The degree is the number of turns of `∂V`
/// the boundary lift needs; it must equal the winding number around
/// `V.center` and the number of enclosed preimages of `V.center` (counted
/// at a regular value of `V` when the center is critical), and `U` must
/// contain `degree − 1` critical points (so it is simply connected).
pub fn certify_polylike(f: &EntireMap, d: &Disk, v: &Disk, seed: ComplexVal) -> Result<PolyLikeRestriction, PolylikeError> {
    if !v.contains(f.eval(seed)?) {
        return Err(PolylikeError::SeedOutside);
    }
    let bound = *d;
    for k in 0..PROBE_DIRECTIONS {
        let phi = TAU * k as f64 / PROBE_DIRECTIONS as f64;
        if let RayExit::Escaped(z) = shoot(f, v, seed, phi, &bound)? {
            return Err(PolylikeError::NotCompactlyContained(format!("ray from seed reaches {z} with image inside V")));
        }
    }
    let (traced, vj) = trace_within(f, v, seed, 720, &bound)?;
    let boundary = &traced.vertices;
    if polygon_winding(boundary, seed) == 0 {
        return Err(PolylikeError::NotCompactlyContained("traced curve does not enclose the seed".into()));
    }
    let reach = boundary.iter().map(|u| (u - v.center).norm()).fold(0.0, f64::max);
    let containment_margin = v.radius - reach;
    if containment_margin < POLYLIKE_MARGIN * v.radius {
        return Err(PolylikeError::NotCompactlyContained(format!("boundary reaches {reach:.6} from the center of V")));
    }
    let winding = winding_degree(f, boundary, vj.center)?;
    // Newton stalls at multiple roots; every value of V has the same count.
    let mut preimages = enclosed_preimages(f, vj.center, boundary)?;
    if preimages != traced.traversals as usize {
        preimages = enclosed_preimages(f, vj.center + ComplexVal::from_polar(0.25 * vj.radius, 0.9), boundary)?;
    }
    if winding != traced.traversals as i64 || preimages != traced.traversals as usize {
        return Err(PolylikeError::DegreeMismatch { traversals: traced.traversals, winding, preimages });
    }
    let critical_points = winding_degree(&Derivative(f), boundary, ComplexVal::new(0.0, 0.0))?;
    if critical_points != traced.traversals as i64 - 1 {
        return Err(PolylikeError::NotSimplyConnected { critical_points, degree: traced.traversals });
    }
    Ok(PolyLikeRestriction {
        degree: traced.traversals,
        u_boundary: traced,
        d: *d,
        v: vj,
        seed,
        winding,
        preimages,
        critical_points,
        containment_margin,
    })
}

/// Certificate `h(f) ≥ log degree`. The invariant set carrying this entropy
/// (the straightened filled Julia set) is not constructed.
pub fn entropy_from_polylike(f: &EntireMap, p: &PolyLikeRestriction) -> EntropyCertificate {
    EntropyCertificate::new(Provenance::Polylike(PolylikeProvenance::from_restriction(f, p, p.degree)))
}
