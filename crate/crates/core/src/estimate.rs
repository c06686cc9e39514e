//! Separated-set entropy estimator for maps sampled on a finite point set.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ComplexVal;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimateError {
    #[error("orbit of sample {sample} left the sampled region at step {step}")]
    SampleEscape { sample: usize, step: usize },
    #[error("invalid estimator input: {0}")]
    InvalidInput(&'static str),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub value: f64,
    pub n_max: usize,
    pub epsilon: f64,
    /// `counts[k - 1]` is the size of the `(k, ε)`-separated set.
    pub counts: Vec<usize>,
}

/// Estimates topological entropy from maximal `(k, ε)`-separated subsets of
/// `samples` for `k = 1..=n_max`, under the metric
/// `d_k(x, y) = max_{j<k} |f^j x − f^j y|`.
///
/// Extraction is greedy in sample index order. A `(k − 1, ε)`-separated set
/// is also `(k, ε)`-separated, so the count at horizon `k` is the larger of
/// the fresh greedy set and the count at `k − 1`; counts never decrease. The estimate is the least-squares slope of `log count` over
/// horizons `⌈n_max/2⌉..=n_max`, clamped at zero.
///
/// The sampled region is the smallest disk around the samples' bounding-box
/// center that contains them, inflated by a relative `1e-6`; an orbit
/// leaving it is reported as [`EstimateError::SampleEscape`].
pub fn separated_entropy_estimate<S>(
    step: S,
    samples: &[ComplexVal],
    n_max: usize,
    epsilon: f64,
) -> Result<EntropyEstimate, EstimateError>
where
    S: Fn(ComplexVal) -> ComplexVal,
{
    if samples.is_empty() {
        return Err(EstimateError::InvalidInput("samples must be nonempty"));
    }
    if !(epsilon > 0.0) {
        return Err(EstimateError::InvalidInput("epsilon must be positive"));
    }
    if n_max < 2 {
        return Err(EstimateError::InvalidInput("n_max must be at least 2"));
    }
    let orbits = orbits(&step, samples, n_max)?;
    let mut counts: Vec<usize> = Vec::with_capacity(n_max);
    for k in 1..=n_max {
        let fresh = greedy_separated(&orbits, k, epsilon);
        counts.push(fresh.max(counts.last().copied().unwrap_or(0)));
    }
    let lo = n_max.div_ceil(2);
    let pts: Vec<(f64, f64)> = (lo..=n_max).map(|k| (k as f64, (counts[k - 1] as f64).ln())).collect();
    Ok(EntropyEstimate { value: slope(&pts).max(0.0), n_max, epsilon, counts })
}

fn orbits<S: Fn(ComplexVal) -> ComplexVal>(
    step: &S,
    samples: &[ComplexVal],
    n_max: usize,
) -> Result<Vec<Vec<ComplexVal>>, EstimateError> {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for z in samples {
        if !z.is_finite() {
            return Err(EstimateError::InvalidInput("samples must be finite"));
        }
        x0 = x0.min(z.re);
        x1 = x1.max(z.re);
        y0 = y0.min(z.im);
        y1 = y1.max(z.im);
    }
    let center = ComplexVal::new(0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let r = samples.iter().map(|z| (z - center).norm()).fold(0.0, f64::max);
    let limit = r * (1.0 + 1e-6) + 1e-12;
    samples
        .iter()
        .enumerate()
        .map(|(i, &z0)| {
            let mut orbit = Vec::with_capacity(n_max);
            let mut z = z0;
            for j in 0..n_max {
                if !z.is_finite() || (z - center).norm() > limit {
                    return Err(EstimateError::SampleEscape { sample: i, step: j });
                }
                orbit.push(z);
                z = step(z);
            }
            Ok(orbit)
        })
        .collect()
}

/// Size of the greedy `(k, ε)`-separated subset taken in index order.
fn greedy_separated(orbits: &[Vec<ComplexVal>], k: usize, epsilon: f64) -> usize {
    let mut chosen: Vec<usize> = Vec::new();
    for x in 0..orbits.len() {
        if chosen.iter().all(|&y| dynamical_distance(&orbits[x], &orbits[y], k) >= epsilon) {
            chosen.push(x);
        }
    }
    chosen.len()
}

fn dynamical_distance(a: &[ComplexVal], b: &[ComplexVal], k: usize) -> f64 {
    a[..k].iter().zip(&b[..k]).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// `n` equally spaced points on the unit circle.
pub fn circle_samples(n: usize) -> Vec<ComplexVal> {
    (0..n).map(|k| ComplexVal::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64)).collect()
}

/// `n` points uniform in `B(center, radius)` by rejection from the square, seeded.
pub fn disk_samples(center: ComplexVal, radius: f64, n: usize, seed: u64) -> Vec<ComplexVal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let z = ComplexVal::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm() < 1.0 {
            out.push(center + radius * z);
        }
    }
    out
}
