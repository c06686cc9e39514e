//! Preimage search by damped Newton iteration from a uniform seed grid.

use rayon::prelude::*;

use crate::analytic::{evaluation_floor, AnalyticMap, Disk};
use crate::ComplexVal;

pub const MAX_NEWTON_ITERATIONS: usize = 60;
const MAX_HALVINGS: usize = 40;

/// Residual target for `|f(p) - w|`.
pub fn root_tolerance(w: ComplexVal) -> f64 {
    1e-10 * (1.0 + w.norm())
}

/// Damped Newton for `f(z) = w` from `z0`. The step is halved while the
/// residual fails to decrease; the seed is abandoned after
/// [`MAX_NEWTON_ITERATIONS`] iterations. The accepted residual is
/// `max(tol, evaluation floor)`.
pub fn newton_solve<F: AnalyticMap + ?Sized>(f: &F, w: ComplexVal, z0: ComplexVal, tol: f64) -> Option<ComplexVal> {
    let mut z = z0;
    let mut jet = f.jet(z).ok()?;
    let mut res = (jet.value - w).norm();
    for _ in 0..MAX_NEWTON_ITERATIONS {
        if res <= tol.max(evaluation_floor(z, &jet)) {
            return Some(polish(f, w, z, res));
        }
        let step = (jet.value - w) / jet.deriv;
        if !step.is_finite() {
            return None;
        }
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let cand = z - step * lambda;
            if let Ok(j) = f.jet(cand) {
                let r = (j.value - w).norm();
                if r < res {
                    accepted = Some((cand, j, r));
                    break;
                }
            }
            lambda *= 0.5;
        }
        let (cand, j, r) = accepted?;
        z = cand;
        jet = j;
        res = r;
    }
    (res <= tol.max(evaluation_floor(z, &jet))).then_some(z)
}

/// A few undamped steps past the tolerance, kept only while the residual
/// keeps shrinking.
fn polish<F: AnalyticMap + ?Sized>(f: &F, w: ComplexVal, mut z: ComplexVal, mut res: f64) -> ComplexVal {
    for _ in 0..3 {
        let Ok(j) = f.jet(z) else { break };
        let cand = z - (j.value - w) / j.deriv;
        match f.eval(cand) {
            Ok(v) if cand.is_finite() && (v - w).norm() < res => {
                res = (v - w).norm();
                z = cand;
            }
            _ => break,
        }
    }
    z
}

fn seed_grid(region: &Disk, density: usize) -> Vec<ComplexVal> {
    let g = density as f64;
    let r = region.radius;
    let mut seeds = Vec::with_capacity(density * density);
    for a in 0..density {
        for b in 0..density {
            let x = -r + r * (2.0 * a as f64 + 1.0) / g;
            let y = -r + r * (2.0 * b as f64 + 1.0) / g;
            seeds.push(region.center + ComplexVal::new(x, y));
        }
    }
    seeds
}

fn lex(a: &ComplexVal, b: &ComplexVal) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Lexicographic order on coordinates rounded to multiples of `q`, so that
/// rounding noise below the dedup radius cannot reorder roots.
fn lex_quantized(q: f64) -> impl Fn(&ComplexVal, &ComplexVal) -> std::cmp::Ordering {
    move |a, b| {
        let key = |z: &ComplexVal| ((z.re / q).round(), (z.im / q).round());
        let (ka, kb) = (key(a), key(b));
        ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1)).then_with(|| lex(a, b))
    }
}

/// All solutions of `f(p) = w` inside `region` reachable from a
/// `grid_density × grid_density` seed grid over its bounding square.
///
/// Output is sorted by `(re, im)`, pairwise separated by
/// `1e-7 · region.radius`, and independent of the rayon worker count.
pub fn newton_preimages<F: AnalyticMap + ?Sized>(
    f: &F,
    w: ComplexVal,
    region: Disk,
    grid_density: usize,
) -> Vec<ComplexVal> {
    assert!(grid_density >= 4, "grid_density must be at least 4");
    let tol = root_tolerance(w);
    let dedup = 1e-7 * region.radius;
    let mut found: Vec<ComplexVal> = seed_grid(&region, grid_density)
        .into_par_iter()
        .filter_map(|s| newton_solve(f, w, s, tol))
        .filter(|p| region.contains(*p))
        .collect();
    found.sort_by(lex_quantized(dedup));
    let mut kept: Vec<ComplexVal> = Vec::new();
    for p in found {
        if kept.iter().all(|q| (p - *q).norm() >= dedup) {
            kept.push(p);
        }
    }
    kept
}
