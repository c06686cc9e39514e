//! Argument-principle degree counting along closed curves.
//!
//! Argument increments are accumulated segment by segment; a segment is
//! bisected until its image turns by at most π/8 and both its chord and its
//! first-order length `|f'| · |dz|` are short compared to the distance from
//! the target value, so the image cannot sneak around the target between
//! samples.

use std::f64::consts::PI;

use thiserror::Error;

use crate::analytic::{AnalyticMap, Disk, EvalError};
use crate::ComplexVal;

const MAX_DEPTH: u32 = 48;
const MAX_TURN: f64 = PI / 8.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WindingError {
    #[error("near-singular winding: {0}")]
    NearSingular(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// How close to the target value the curve may pass.
#[derive(Clone, Copy)]
enum Guard {
    /// `|f(z) - w|` must stay above this.
    Value(f64),
    /// The local distance to a solution, `|f(z) - w| / |f'(z)|`, must stay
    /// above this.
    Distance(f64),
}

struct Accumulator<'a, F: AnalyticMap + ?Sized> {
    f: &'a F,
    w: ComplexVal,
    guard: Guard,
}

impl<F: AnalyticMap + ?Sized> Accumulator<'_, F> {
    /// `f(z) - w` and `|f'(z)|`.
    fn value(&self, z: ComplexVal) -> Result<(ComplexVal, f64), WindingError> {
        let jet = self.f.jet(z)?;
        let v = jet.value - self.w;
        let (measure, limit) = match self.guard {
            Guard::Value(m) => (v.norm(), m),
            Guard::Distance(m) => (v.norm() / jet.deriv.norm(), m),
        };
        if measure < limit || v.norm() == 0.0 {
            return Err(WindingError::NearSingular(format!("curve passes within {measure:.3e} of a solution at z = {z}")));
        }
        Ok((v, jet.deriv.norm()))
    }

    /// Total argument change of `f(path(t)) - w` for `t` in `[ta, tb]`;
    /// `speed` bounds `|path'|`.
    #[allow(clippy::too_many_arguments)]
    fn segment(
        &self,
        path: &dyn Fn(f64) -> ComplexVal,
        speed: f64,
        ta: f64,
        (fa, da): (ComplexVal, f64),
        tb: f64,
        (fb, db): (ComplexVal, f64),
        depth: u32,
    ) -> Result<f64, WindingError> {
        let turn = (fb / fa).arg();
        let near = 0.5 * fa.norm().min(fb.norm());
        let reach = da.max(db) * speed * (tb - ta);
        if turn.abs() <= MAX_TURN && (fb - fa).norm() <= near && reach <= near {
            return Ok(turn);
        }
        if depth >= MAX_DEPTH {
            return Err(WindingError::NearSingular(format!("segment refinement exhausted near t = {ta}")));
        }
        let tm = 0.5 * (ta + tb);
        let fm = self.value(path(tm))?;
        Ok(self.segment(path, speed, ta, (fa, da), tm, fm, depth + 1)? + self.segment(path, speed, tm, fm, tb, (fb, db), depth + 1)?)
    }
}

fn nearest_turns(total: f64) -> Result<i64, WindingError> {
    let turns = total / (2.0 * PI);
    let k = turns.round();
    if (turns - k).abs() >= 0.1 {
        return Err(WindingError::NearSingular(format!("accumulated {turns:.4} turns is not near an integer")));
    }
    Ok(k as i64)
}

/// Winding number of `f ∘ boundary` around `w`, where `boundary` is a
/// closed polyline (the closing segment is implied when the last vertex
/// differs from the first). Straight segments are refined adaptively.
pub fn winding_degree<F: AnalyticMap + ?Sized>(
    f: &F,
    boundary: &[ComplexVal],
    w: ComplexVal,
) -> Result<i64, WindingError> {
    if boundary.len() < 3 {
        return Err(WindingError::NearSingular("polyline needs at least three vertices".into()));
    }
    let mut verts: Vec<ComplexVal> = boundary.to_vec();
    if verts.first() != verts.last() {
        verts.push(verts[0]);
    }
    let raw: Vec<ComplexVal> = verts.iter().map(|z| f.eval(*z).map(|v| v - w)).collect::<Result<_, _>>()?;
    let scale = raw.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let acc = Accumulator { f, w, guard: Guard::Value(1e-6 * scale) };
    let values: Vec<(ComplexVal, f64)> = verts.iter().map(|z| acc.value(*z)).collect::<Result<_, _>>()?;
    let mut total = 0.0;
    for k in 0..verts.len() - 1 {
        let (a, b) = (verts[k], verts[k + 1]);
        let path = move |t: f64| a + (b - a) * t;
        total += acc.segment(&path, (b - a).norm(), 0.0, values[k], 1.0, values[k + 1], 0)?;
    }
    nearest_turns(total)
}

/// Winding number of `f` along `∂disk` (positively oriented) around `w`.
/// Fails when a solution of `f = w` lies within `1e-8 · radius` of the
/// circle (estimated by `|f - w| / |f'|`).
pub fn circle_winding<F: AnalyticMap + ?Sized>(f: &F, disk: &Disk, w: ComplexVal, samples: usize) -> Result<i64, WindingError> {
    let n = samples.max(16);
    let theta = |k: usize| 2.0 * PI * k as f64 / n as f64;
    let acc = Accumulator { f, w, guard: Guard::Distance(1e-8 * disk.radius) };
    let values: Vec<(ComplexVal, f64)> = (0..=n).map(|k| acc.value(disk.point_at(theta(k % n)))).collect::<Result<_, _>>()?;
    let path = |t: f64| disk.point_at(t);
    let mut total = 0.0;
    for k in 0..n {
        total += acc.segment(&path, disk.radius, theta(k), values[k], theta(k + 1), values[k + 1], 0)?;
    }
    nearest_turns(total)
}

/// Geometric winding number of a closed polygon around `p`; nonzero means
/// `p` is enclosed.
pub fn polygon_winding(poly: &[ComplexVal], p: ComplexVal) -> i64 {
    let n = poly.len();
    if n < 3 {
        return 0;
    }
    let mut total = 0.0;
    for k in 0..n {
        let a = poly[k] - p;
        let b = poly[(k + 1) % n] - p;
        if a.norm() == 0.0 || b.norm() == 0.0 {
            return 0;
        }
        total += (b / a).arg();
    }
    (total / (2.0 * PI)).round() as i64
}
