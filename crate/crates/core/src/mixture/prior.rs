use alloc::format;

use serde::{Deserialize, Serialize};

use super::model::normal_log_pdf;
use crate::geometry::Point;
use crate::linalg::SymMat2;
use crate::math::{ln, lgamma};
use crate::{Error, Result};

const DIM: f64 = 2.0;

/// Conjugate normal-inverse-Wishart prior on each component's mean and
/// covariance: `Σ ~ IW(scale, dof)` and `μ | Σ ~ N(mean, Σ / shrinkage)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorSpec {
    pub mean: Point,
    pub shrinkage: f64,
    pub dof: f64,
    pub scale: SymMat2,
}

impl PriorSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.mean.is_finite() {
            return Err(Error::usage("prior mean must be finite"));
        }
        if !(self.shrinkage > 0.0 && self.shrinkage.is_finite()) {
            return Err(Error::usage("prior shrinkage must be positive"));
        }
        if !(self.dof > DIM + 1.0 && self.dof.is_finite()) {
            return Err(Error::usage(format!(
                "prior degrees of freedom must exceed {}",
                DIM + 1.0
            )));
        }
        if !self.scale.is_spd() {
            return Err(Error::usage("prior scale must be positive definite"));
        }
        Ok(())
    }

    /// Log density of `(mean, cov)` under the prior.
    pub fn log_density(&self, mean: Point, cov: &SymMat2) -> f64 {
        let nu = self.dof;
        let Some(prec) = cov.inverse() else {
            return f64::NEG_INFINITY;
        };
        // ln Γ₂(a) = ½ ln π + ln Γ(a) + ln Γ(a - ½)
        let ln_gamma2 = 0.5 * ln(core::f64::consts::PI) + lgamma(0.5 * nu) + lgamma(0.5 * nu - 0.5);
        let ln_iw = 0.5 * nu * self.scale.ln_det()
            - 0.5 * nu * DIM * core::f64::consts::LN_2
            - ln_gamma2
            - 0.5 * (nu + DIM + 1.0) * cov.ln_det()
            - 0.5 * self.scale.trace_product(&prec);
        let ln_mean = normal_log_pdf(mean, self.mean, &cov.scale(1.0 / self.shrinkage));
        ln_iw + ln_mean
    }
}

/// Default prior for a `g`-component fit: centered on the data mean with
/// shrinkage 0.01, `d + 2` degrees of freedom and scale equal to the sample
/// covariance divided by `g^(2/d)`.
pub fn default_prior(data: &[Point], g: usize) -> Result<PriorSpec> {
    let n = data.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "default prior needs at least 2 points, got {n}"
        )));
    }
    if g == 0 {
        return Err(Error::usage("number of components must be at least 1"));
    }
    let nf = n as f64;
    let mean = Point::new(
        data.iter().map(|p| p.x).sum::<f64>() / nf,
        data.iter().map(|p| p.y).sum::<f64>() / nf,
    );
    let mut s = SymMat2::zero();
    for p in data {
        s = s.add(&SymMat2::outer(*p - mean));
    }
    let cov = s.scale(1.0 / (nf - 1.0));
    if !cov.is_spd() {
        return Err(Error::InsufficientData(
            "sample covariance of the data is singular".into(),
        ));
    }
    // g^(2/d) with d = 2
    let scale = cov.scale(1.0 / g as f64);
    Ok(PriorSpec {
        mean,
        shrinkage: 0.01,
        dof: DIM + 2.0,
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn symmetric_data() -> Vec<Point> {
        [(-1.0, -2.0), (1.0, 2.0), (2.0, -1.0), (-2.0, 1.0), (0.5, 0.0), (-0.5, 0.0)]
            .iter()
            .map(|&(x, y)| Point::new(x, y))
            .collect()
    }

    #[test]
    fn defaults() {
        let data = symmetric_data();
        let p1 = default_prior(&data, 1).unwrap();
        assert_eq!(p1.mean, Point::new(0.0, 0.0));
        assert_eq!(p1.shrinkage, 0.01);
        assert_eq!(p1.dof, 4.0);
        let p4 = default_prior(&data, 4).unwrap();
        assert!((p4.scale.xx - p1.scale.xx / 4.0).abs() < 1e-15);
        assert!((p4.scale.xy - p1.scale.xy / 4.0).abs() < 1e-15);
        assert!((p4.scale.yy - p1.scale.yy / 4.0).abs() < 1e-15);
        // unbiased sample covariance: sum of x² = 10.5 over n - 1 = 5
        assert!((p1.scale.xx - 10.5 / 5.0).abs() < 1e-15);
        p4.validate().unwrap();
    }

    #[test]
    fn single_point_rejected() {
        assert!(matches!(
            default_prior(&[Point::new(1.0, 1.0)], 2),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn log_density_peaks_near_mode() {
        // The joint NIW mode is μ = μ₀, Σ = Λ / (ν + d + 2).
        let p = PriorSpec {
            mean: Point::new(0.5, -0.5),
            shrinkage: 2.0,
            dof: 5.0,
            scale: SymMat2::new(2.0, 0.3, 1.0),
        };
        let mode = p.scale.scale(1.0 / (p.dof + 4.0));
        let at_mode = p.log_density(p.mean, &mode);
        for f in [0.8, 1.2] {
            assert!(p.log_density(p.mean, &mode.scale(f)) < at_mode);
        }
        assert!(p.log_density(Point::new(0.6, -0.5), &mode) < at_mode);
    }

    #[test]
    fn invalid_priors() {
        let mut p = default_prior(&symmetric_data(), 1).unwrap();
        p.dof = 3.0;
        assert!(p.validate().is_err());
        let mut p = default_prior(&symmetric_data(), 1).unwrap();
        p.shrinkage = 0.0;
        assert!(p.validate().is_err());
    }
}
