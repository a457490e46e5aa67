//! Coordinate-wise range-logit transform between an open box and the plane.
//!
//! Each axis maps `v ∈ (lo, hi)` to `log((v - lo) / (hi - v))`. The map is
//! separable, so the Jacobian is diagonal and its determinant is the product
//! of the per-axis derivatives `1/(v - lo) + 1/(hi - v)`.

use alloc::format;

use serde::{Deserialize, Serialize};

use crate::geometry::{CourtSpec, Point};
use crate::math::{exp, ln, ln_1p};
use crate::{Error, Result};

/// Open box `(lo.x, hi.x) × (lo.y, hi.y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBox", into = "RawBox")]
pub struct BoundedBox {
    lo: Point,
    hi: Point,
}

#[derive(Serialize, Deserialize)]
struct RawBox {
    lo: Point,
    hi: Point,
}

impl TryFrom<RawBox> for BoundedBox {
    type Error = Error;
    fn try_from(r: RawBox) -> Result<Self> {
        BoundedBox::new(r.lo, r.hi)
    }
}

impl From<BoundedBox> for RawBox {
    fn from(b: BoundedBox) -> Self {
        RawBox { lo: b.lo, hi: b.hi }
    }
}

impl From<&CourtSpec> for BoundedBox {
    fn from(c: &CourtSpec) -> Self {
        BoundedBox {
            lo: Point::new(c.x_min, c.y_min),
            hi: Point::new(c.x_max, c.y_max),
        }
    }
}

#[inline]
fn logit_axis(v: f64, lo: f64, hi: f64) -> f64 {
    ln((v - lo) / (hi - v))
}

#[inline]
fn logistic_axis(q: f64, lo: f64, hi: f64) -> f64 {
    let span = hi - lo;
    // Evaluate from whichever end is closer so the distance to that bound
    // keeps full relative precision.
    let v = if q >= 0.0 {
        hi - span / (1.0 + exp(q))
    } else {
        lo + span / (1.0 + exp(-q))
    };
    if v >= hi {
        hi.next_down()
    } else if v <= lo {
        lo.next_up()
    } else {
        v
    }
}

#[inline]
fn ln_deriv_axis(v: f64, lo: f64, hi: f64) -> f64 {
    // 1/(v-lo) + 1/(hi-v) = (hi-lo) / ((v-lo)(hi-v))
    ln(hi - lo) - ln(v - lo) - ln(hi - v)
}

impl BoundedBox {
    pub fn new(lo: Point, hi: Point) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo.x < hi.x && lo.y < hi.y) {
            return Err(Error::usage(format!(
                "invalid box: lo = ({}, {}), hi = ({}, {})",
                lo.x, lo.y, hi.x, hi.y
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> Point {
        self.lo
    }

    pub fn hi(&self) -> Point {
        self.hi
    }

    pub fn area(&self) -> f64 {
        (self.hi.x - self.lo.x) * (self.hi.y - self.lo.y)
    }

    pub fn contains(&self, p: Point) -> bool {
        self.lo.x < p.x && p.x < self.hi.x && self.lo.y < p.y && p.y < self.hi.y
    }

    fn check(&self, p: Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "point ({}, {}) is not strictly inside the box",
                p.x, p.y
            )))
        }
    }

    /// Court coordinates to the transformed plane.
    pub fn forward(&self, p: Point) -> Result<Point> {
        self.check(p)?;
        Ok(self.forward_unchecked(p))
    }

    /// Caller guarantees `self.contains(p)`.
    #[inline]
    pub(crate) fn forward_unchecked(&self, p: Point) -> Point {
        Point::new(
            logit_axis(p.x, self.lo.x, self.hi.x),
            logit_axis(p.y, self.lo.y, self.hi.y),
        )
    }

    /// Transformed plane back to the court. The result is always strictly
    /// inside the box, even when the logistic rounds to a bound.
    pub fn inverse(&self, q: Point) -> Point {
        Point::new(
            logistic_axis(q.x, self.lo.x, self.hi.x),
            logistic_axis(q.y, self.lo.y, self.hi.y),
        )
    }

    /// Log-determinant of the Jacobian of `forward` at `p`.
    pub fn log_jacobian(&self, p: Point) -> Result<f64> {
        self.check(p)?;
        Ok(self.log_jacobian_unchecked(p))
    }

    #[inline]
    pub(crate) fn log_jacobian_unchecked(&self, p: Point) -> f64 {
        ln_deriv_axis(p.x, self.lo.x, self.hi.x) + ln_deriv_axis(p.y, self.lo.y, self.hi.y)
    }

    /// Log-Jacobian of `inverse` at a transformed point, i.e.
    /// `-log_jacobian(inverse(q))`, computed without leaving the plane.
    pub fn log_inverse_jacobian(&self, q: Point) -> f64 {
        // d/dq [lo + span·σ(q)] = span·σ(q)·σ(-q)
        let axis = |q: f64, lo: f64, hi: f64| {
            let a = q.abs();
            ln(hi - lo) - a - 2.0 * ln_1p(exp(-a))
        };
        axis(q.x, self.lo.x, self.hi.x) + axis(q.y, self.lo.y, self.hi.y)
    }
}
