//! 2×2 symmetric matrices, which is all the linear algebra a planar mixture needs.

use serde::{Deserialize, Serialize};

use crate::geometry::Point;
use crate::math::{ln, sqrt};

/// Symmetric 2×2 matrix `[[xx, xy], [xy, yy]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct SymMat2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl SymMat2 {
    pub const fn new(xx: f64, xy: f64, yy: f64) -> Self {
        Self { xx, xy, yy }
    }

    pub const fn identity() -> Self {
        Self::new(1.0, 0.0, 1.0)
    }

    pub const fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn diagonal(xx: f64, yy: f64) -> Self {
        Self::new(xx, 0.0, yy)
    }

    /// Outer product `v vᵀ`.
    pub fn outer(v: Point) -> Self {
        Self::new(v.x * v.x, v.x * v.y, v.y * v.y)
    }

    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.xx * s, self.xy * s, self.yy * s)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.xx + o.xx, self.xy + o.xy, self.yy + o.yy)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let half_tr = 0.5 * self.trace();
        let d = 0.5 * (self.xx - self.yy);
        let r = sqrt(d * d + self.xy * self.xy);
        (half_tr - r, half_tr + r)
    }

    /// Both eigenvalues finite and strictly positive, with a condition number
    /// that a double-precision Cholesky factor can still represent.
    pub fn is_spd(&self) -> bool {
        if !(self.xx.is_finite() && self.xy.is_finite() && self.yy.is_finite()) {
            return false;
        }
        let (lo, hi) = self.eigenvalues();
        lo > 0.0 && hi > 0.0 && lo > hi * 1e-14 && self.det() > 0.0
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if !(det > 0.0) || !det.is_finite() {
            return None;
        }
        Some(Self::new(self.yy / det, -self.xy / det, self.xx / det))
    }

    /// Lower Cholesky factor `(l11, l21, l22)` with `A = L Lᵀ`.
    pub fn cholesky(&self) -> Option<(f64, f64, f64)> {
        if !(self.xx > 0.0) {
            return None;
        }
        let l11 = sqrt(self.xx);
        let l21 = self.xy / l11;
        let rem = self.yy - l21 * l21;
        if !(rem > 0.0) {
            return None;
        }
        Some((l11, l21, sqrt(rem)))
    }

    /// `vᵀ A v`.
    pub fn quad_form(&self, v: Point) -> f64 {
        self.xx * v.x * v.x + 2.0 * self.xy * v.x * v.y + self.yy * v.y * v.y
    }

    /// `tr(A B)` for symmetric A and B.
    pub fn trace_product(&self, o: &Self) -> f64 {
        self.xx * o.xx + 2.0 * self.xy * o.xy + self.yy * o.yy
    }

    pub fn ln_det(&self) -> f64 {
        ln(self.det())
    }

    /// Row-major entries.
    pub fn to_row_major(self) -> [f64; 4] {
        [self.xx, self.xy, self.xy, self.yy]
    }
}

impl From<[f64; 4]> for SymMat2 {
    /// Off-diagonal entries are averaged; a symmetric input round-trips exactly.
    fn from(m: [f64; 4]) -> Self {
        let xy = if m[1] == m[2] { m[1] } else { 0.5 * (m[1] + m[2]) };
        Self::new(m[0], xy, m[3])
    }
}

impl From<SymMat2> for [f64; 4] {
    fn from(m: SymMat2) -> Self {
        m.to_row_major()
    }
}
