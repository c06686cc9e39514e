//! Shared vocabulary for holomorphic maps: jets, disks and the
//! [`AnalyticMap`] trait every numerical routine is generic over.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ComplexVal;

#[derive(Debug, Clone, Copy, PartialEq, Error, Serialize, Deserialize)]
pub enum EvalError {
    #[error("evaluation overflowed at {at}")]
    Overflow { at: ComplexVal },
}

/// Value and first derivative at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jet {
    pub value: ComplexVal,
    pub deriv: ComplexVal,
}

/// Anything that can report `f(z)` and `f'(z)`.
pub trait AnalyticMap: Sync {
    fn jet(&self, z: ComplexVal) -> Result<Jet, EvalError>;

    fn eval(&self, z: ComplexVal) -> Result<ComplexVal, EvalError> {
        Ok(self.jet(z)?.value)
    }
}

impl<T: AnalyticMap + ?Sized> AnalyticMap for &T {
    fn jet(&self, z: ComplexVal) -> Result<Jet, EvalError> {
        (**self).jet(z)
    }
}

/// Adapter for closures returning `(f(z), f'(z))`.
pub struct FnMap<F>(pub F);

impl<F> AnalyticMap for FnMap<F>
where
    F: Fn(ComplexVal) -> (ComplexVal, ComplexVal) + Sync,
{
    fn jet(&self, z: ComplexVal) -> Result<Jet, EvalError> {
        let (value, deriv) = (self.0)(z);
        if value.is_finite() && deriv.is_finite() {
            Ok(Jet { value, deriv })
        } else {
            Err(EvalError::Overflow { at: z })
        }
    }
}

/// `outer ∘ inner` with the chain rule.
pub struct Compose<A, B> {
    pub outer: A,
    pub inner: B,
}

impl<A: AnalyticMap, B: AnalyticMap> AnalyticMap for Compose<A, B> {
    fn jet(&self, z: ComplexVal) -> Result<Jet, EvalError> {
        let i = self.inner.jet(z)?;
        let o = self.outer.jet(i.value)?;
        let deriv = o.deriv * i.deriv;
        if !deriv.is_finite() {
            return Err(EvalError::Overflow { at: z });
        }
        Ok(Jet { value: o.value, deriv })
    }
}

/// Open disk `B(center, radius)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: ComplexVal,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: ComplexVal, radius: f64) -> Self {
        assert!(radius > 0.0 && radius.is_finite(), "disk radius must be positive and finite, got {radius}");
        assert!(center.is_finite(), "disk center must be finite");
        Disk { center, radius }
    }

    pub fn contains(&self, z: ComplexVal) -> bool {
        (z - self.center).norm() < self.radius
    }

    pub fn point_at(&self, theta: f64) -> ComplexVal {
        self.center + ComplexVal::from_polar(self.radius, theta)
    }
}

/// Size of the rounding noise in `f(z)` caused by representing `z` and
/// `f(z)` in double precision. Residual targets below this are unreachable.
pub fn evaluation_floor(z: ComplexVal, jet: &Jet) -> f64 {
    64.0 * f64::EPSILON * (z.norm() * jet.deriv.norm() + jet.value.norm())
}
