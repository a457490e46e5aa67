use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::geometry::Point;
use crate::linalg::SymMat2;
use crate::math::{exp, ln};
use crate::rng;
use crate::transform::BoundedBox;
use crate::{Error, Result};

pub(crate) const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// One Gaussian component on the transformed plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianComponent {
    pub weight: f64,
    pub mean: Point,
    /// Serialized row-major.
    pub covariance: SymMat2,
}

impl GaussianComponent {
    pub fn new(weight: f64, mean: Point, covariance: SymMat2) -> Self {
        Self {
            weight,
            mean,
            covariance,
        }
    }
}

/// Per-component constants for density evaluation and sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Prepared {
    pub mean: Point,
    pub precision: SymMat2,
    /// `ln π - ln 2π - ½ ln|Σ|`
    pub log_coef: f64,
    pub chol: (f64, f64, f64),
}

impl Prepared {
    fn new(c: &GaussianComponent) -> Option<Self> {
        let precision = c.covariance.inverse()?;
        let chol = c.covariance.cholesky()?;
        Some(Self {
            mean: c.mean,
            precision,
            log_coef: ln(c.weight) - LN_2PI - 0.5 * c.covariance.ln_det(),
            chol,
        })
    }

    #[inline]
    pub fn log_term(&self, q: Point) -> f64 {
        self.log_coef - 0.5 * self.precision.quad_form(q - self.mean)
    }
}

/// Gaussian mixture on the transformed plane together with the box that
/// defines the transform. Densities reported by [`MixtureModel::log_density`]
/// are in court coordinates and include the Jacobian factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMixture", into = "RawMixture")]
pub struct MixtureModel {
    components: Vec<GaussianComponent>,
    bbox: BoundedBox,
    prepared: Vec<Prepared>,
}

#[derive(Serialize, Deserialize)]
struct RawMixture {
    #[serde(rename = "box")]
    bbox: BoundedBox,
    components: Vec<GaussianComponent>,
}

impl TryFrom<RawMixture> for MixtureModel {
    type Error = Error;
    fn try_from(r: RawMixture) -> Result<Self> {
        MixtureModel::new(r.components, r.bbox)
    }
}

impl From<MixtureModel> for RawMixture {
    fn from(m: MixtureModel) -> Self {
        RawMixture {
            bbox: m.bbox,
            components: m.components,
        }
    }
}

impl MixtureModel {
    pub fn new(components: Vec<GaussianComponent>, bbox: BoundedBox) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::usage("a mixture needs at least one component"));
        }
        let mut total = 0.0;
        for (g, c) in components.iter().enumerate() {
            if !(c.weight > 0.0 && c.weight <= 1.0) {
                return Err(Error::usage(format!(
                    "component {g}: weight {} outside (0, 1]",
                    c.weight
                )));
            }
            if !c.mean.is_finite() {
                return Err(Error::usage(format!("component {g}: mean is not finite")));
            }
            if !c.covariance.is_spd() {
                return Err(Error::usage(format!(
                    "component {g}: covariance is not positive definite"
                )));
            }
            total += c.weight;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::usage(format!("weights sum to {total}, not 1")));
        }
        let prepared = components
            .iter()
            .map(|c| Prepared::new(c).expect("validated SPD covariance"))
            .collect();
        Ok(Self {
            components,
            bbox,
            prepared,
        })
    }

    pub fn components(&self) -> &[GaussianComponent] {
        &self.components
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn bbox(&self) -> &BoundedBox {
        &self.bbox
    }

    /// Free parameters of an unconstrained bivariate mixture: `6G - 1`.
    pub fn n_params(&self) -> usize {
        n_params(self.n_components())
    }

    /// Log of the mixture density on the transformed plane.
    pub fn log_density_transformed(&self, q: Point) -> f64 {
        // Streaming log-sum-exp; G is small.
        let mut max = f64::NEG_INFINITY;
        let mut sum = 0.0;
        for p in &self.prepared {
            let t = p.log_term(q);
            if t > max {
                sum = sum * exp(max - t) + 1.0;
                max = t;
            } else {
                sum += exp(t - max);
            }
        }
        max + ln(sum)
    }

    /// Log density in court coordinates: mixture density at the transformed
    /// point plus the log-Jacobian of the transform.
    pub fn log_density(&self, p: Point) -> Result<f64> {
        let q = self.bbox.forward(p)?;
        Ok(self.log_density_transformed(q) + self.bbox.log_jacobian_unchecked(p))
    }

    pub fn density(&self, p: Point) -> Result<f64> {
        self.log_density(p).map(exp)
    }

    /// Draws `n` points on the transformed plane.
    pub fn sample_transformed<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<Point> {
        let mut cumulative = Vec::with_capacity(self.components.len());
        let mut acc = 0.0;
        for c in &self.components {
            acc += c.weight;
            cumulative.push(acc);
        }
        (0..n)
            .map(|_| {
                let u: f64 = rng.random::<f64>() * acc;
                let g = cumulative
                    .iter()
                    .position(|&c| u < c)
                    .unwrap_or(cumulative.len() - 1);
                let p = &self.prepared[g];
                let z1: f64 = rng.sample(StandardNormal);
                let z2: f64 = rng.sample(StandardNormal);
                let (l11, l21, l22) = p.chol;
                Point::new(p.mean.x + l11 * z1, p.mean.y + l21 * z1 + l22 * z2)
            })
            .collect()
    }

    /// Draws `n` court points: component by weight, a Gaussian variate, then
    /// the inverse transform. Deterministic for a fixed seed.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<Point> {
        let mut r = rng::stream(seed, &[]);
        self.sample_with(n, &mut r)
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<Point> {
        self.sample_transformed(n, rng)
            .into_iter()
            .map(|q| self.bbox.inverse(q))
            .collect()
    }
}

/// Free parameters of a `g`-component bivariate mixture.
pub fn n_params(g: usize) -> usize {
    6 * g - 1
}

/// Log density of a single bivariate normal.
pub(crate) fn normal_log_pdf(x: Point, mean: Point, cov: &SymMat2) -> f64 {
    let prec = cov.inverse().unwrap_or(SymMat2::new(f64::NAN, f64::NAN, f64::NAN));
    -LN_2PI - 0.5 * cov.ln_det() - 0.5 * prec.quad_form(x - mean)
}
