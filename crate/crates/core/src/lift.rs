//! Analytic continuation of solutions of `f(z) = w(t)` along paths in the
//! target plane, used to lift circles and segments through `f`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{evaluation_floor, AnalyticMap, Disk, EvalError, Jet};
use crate::ComplexVal;

const CORRECTOR_STEPS: usize = 12;
const BRANCH_GUARD: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
pub enum LiftError {
    #[error("continuation stalled at t = {t}: {reason}")]
    Stalled { t: f64, reason: String },
    #[error("lift did not close within {traversals} traversals")]
    NoClosure { traversals: u32 },
    #[error("lifted path left the bounding disk at {at}")]
    LeftBound { at: ComplexVal },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftOptions {
    /// Minimum number of steps per traversal of a circle.
    pub min_points: usize,
    /// Largest allowed distance between consecutive lifted points.
    pub max_gap: f64,
    pub max_traversals: u32,
    /// Corrector residual target for `|f(z) - w|`.
    pub residual_tol: f64,
    /// Lifted points must stay inside this disk.
    pub bound: Option<Disk>,
}

impl LiftOptions {
    /// Defaults for lifting `∂target`: 720 points, residual `1e-10 · δ`.
    pub fn for_target(target: &Disk) -> Self {
        LiftOptions { min_points: 720, max_gap: f64::INFINITY, max_traversals: 1, residual_tol: 1e-10 * target.radius, bound: None }
    }

    pub fn with_max_gap(mut self, gap: f64) -> Self {
        self.max_gap = gap;
        self
    }

    pub fn with_max_traversals(mut self, n: u32) -> Self {
        self.max_traversals = n;
        self
    }

    pub fn with_bound(mut self, bound: Disk) -> Self {
        self.bound = Some(bound);
        self
    }
}

/// Closed lifted curve; the last vertex equals the first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedLoop {
    pub vertices: Vec<ComplexVal>,
    pub traversals: u32,
}

struct Tracker<'a, F: AnalyticMap + ?Sized> {
    f: &'a F,
    opts: LiftOptions,
}

impl<F: AnalyticMap + ?Sized> Tracker<'_, F> {
    fn correct(&self, mut z: ComplexVal, w: ComplexVal) -> Result<Option<(ComplexVal, Jet)>, EvalError> {
        for _ in 0..CORRECTOR_STEPS {
            let j = self.f.jet(z)?;
            if (j.value - w).norm() <= self.opts.residual_tol.max(evaluation_floor(z, &j)) {
                return Ok(Some((z, j)));
            }
            let step = (j.value - w) / j.deriv;
            if !step.is_finite() {
                return Ok(None);
            }
            z -= step;
        }
        Ok(None)
    }

    /// Follows the solution from `(t0, z0)` to `t1`, appending every accepted
    /// point (not `z0`) to `out`.
    fn track(
        &self,
        path: &dyn Fn(f64) -> ComplexVal,
        z0: ComplexVal,
        t0: f64,
        t1: f64,
        h_max: f64,
        out: &mut Vec<ComplexVal>,
    ) -> Result<ComplexVal, LiftError> {
        let h_min = (t1 - t0).abs().max(1.0) * 1e-13;
        let (mut t, mut z, mut h) = (t0, z0, h_max);
        let mut jet = self.f.jet(z)?;
        while t < t1 {
            let tn = if t1 - t <= h * 1.000_001 { t1 } else { t + h };
            let wn = path(tn);
            let pred = z + (wn - jet.value) / jet.deriv;
            let accepted = if pred.is_finite() {
                match self.correct(pred, wn)? {
                    Some((zc, j)) => {
                        let jump = (zc - pred).norm();
                        let guard = BRANCH_GUARD * (pred - z).norm() + 4.0 * evaluation_floor(zc, &j) / j.deriv.norm();
                        (jump <= guard && (zc - z).norm() <= self.opts.max_gap).then_some((zc, j))
                    }
                    None => None,
                }
            } else {
                None
            };
            match accepted {
                Some((zc, j)) => {
                    if self.opts.bound.is_some_and(|b| !b.contains(zc)) {
                        return Err(LiftError::LeftBound { at: zc });
                    }
                    z = zc;
                    jet = j;
                    t = tn;
                    out.push(z);
                    h = (h * 1.5).min(h_max);
                }
                None => {
                    h *= 0.5;
                    if h < h_min {
                        return Err(LiftError::Stalled {
                            t,
                            reason: format!("step size underflow near z = {z} (|f'| = {:.3e})", jet.deriv.norm()),
                        });
                    }
                }
            }
        }
        Ok(z)
    }
}

/// Continues a solution of `f(z) = w0` at `z0` along the segment to `w1`.
pub fn lift_segment<F: AnalyticMap + ?Sized>(
    f: &F,
    z0: ComplexVal,
    w0: ComplexVal,
    w1: ComplexVal,
    opts: &LiftOptions,
) -> Result<ComplexVal, LiftError> {
    let tracker = Tracker { f, opts: *opts };
    let path = move |t: f64| w0 + (w1 - w0) * t;
    let mut sink = Vec::new();
    tracker.track(&path, z0, 0.0, 1.0, 1.0 / 64.0, &mut sink)
}

/// Lifts `∂target`, starting from `z_start` with `f(z_start) = target.point_at(theta0)`,
/// until the lifted path returns to `z_start`. The closing test runs after
/// each full turn with tolerance `1e-6 · δ / |f'(z_start)|`.
pub fn lift_circle<F: AnalyticMap + ?Sized>(
    f: &F,
    target: &Disk,
    z_start: ComplexVal,
    theta0: f64,
    opts: &LiftOptions,
) -> Result<LiftedLoop, LiftError> {
    let tracker = Tracker { f, opts: *opts };
    let start_jet = f.jet(z_start)?;
    let closure_tol = 1e-6 * target.radius / start_jet.deriv.norm() + 64.0 * f64::EPSILON * z_start.norm();
    let path = |t: f64| target.point_at(t);
    let h_max = TAU / opts.min_points.max(8) as f64;
    let mut vertices = vec![z_start];
    let mut z = z_start;
    for k in 1..=opts.max_traversals {
        let t0 = theta0 + TAU * (k - 1) as f64;
        z = tracker.track(&path, z, t0, t0 + TAU, h_max, &mut vertices)?;
        if (z - z_start).norm() <= closure_tol {
            *vertices.last_mut().expect("nonempty") = z_start;
            return Ok(LiftedLoop { vertices, traversals: k });
        }
    }
    Err(LiftError::NoClosure { traversals: opts.max_traversals })
}

/// From `core` with `f(core) = target.center`, continues radially out to
/// the boundary point `target.point_at(theta0)`.
pub fn lift_ray<F: AnalyticMap + ?Sized>(
    f: &F,
    core: ComplexVal,
    target: &Disk,
    theta0: f64,
    opts: &LiftOptions,
) -> Result<ComplexVal, LiftError> {
    lift_segment(f, core, target.center, target.point_at(theta0), opts)
}
