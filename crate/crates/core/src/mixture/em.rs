//! EM for bivariate Gaussian mixtures, with optional conjugate MAP updates.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::kmeans;
use super::model::{n_params, GaussianComponent, MixtureModel, LN_2PI};
use super::prior::PriorSpec;
use crate::exec::{Executor, Serial};
use crate::geometry::Point;
use crate::linalg::SymMat2;
use crate::math::{exp, ln};
use crate::rng;
use crate::transform::BoundedBox;
use crate::{Error, Result};

/// Components whose total responsibility falls below this are empty.
const EMPTY_COMPONENT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Relative change of the log objective that counts as converged.
    pub tol: f64,
    pub max_iter: usize,
    pub n_restarts: usize,
    pub seed: u64,
    /// Used by model selection to decide whether each candidate gets the
    /// default conjugate prior.
    pub prior_enabled: bool,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 1000,
            n_restarts: 10,
            seed: 0,
            prior_enabled: true,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::usage("tol must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::usage("max_iter must be at least 1"));
        }
        if self.n_restarts == 0 {
            return Err(Error::usage("n_restarts must be at least 1"));
        }
        Ok(())
    }
}

/// Everything about a fit except the fitted model itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitMeta {
    pub n_components: usize,
    pub n_obs: usize,
    /// Log-likelihood (without prior terms) at the final estimates.
    pub loglik_at_map: f64,
    /// Log-likelihood plus log prior density at the final estimates.
    pub log_objective: f64,
    pub log_objective_trace: Vec<f64>,
    pub n_params: usize,
    /// `2·loglik_at_map − n_params·ln(n_obs)`; larger is better.
    pub bic: f64,
    pub n_iter: usize,
    pub converged: bool,
    /// Index of the winning restart.
    pub restart: usize,
    pub prior: Option<PriorSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: MixtureModel,
    pub meta: FitMeta,
}

pub(crate) fn bic(loglik: f64, n_params: usize, n_obs: usize) -> f64 {
    2.0 * loglik - n_params as f64 * ln(n_obs as f64)
}

/// Data split into coordinate columns so the inner loops vectorize.
pub(crate) struct Columns {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl Columns {
    pub(crate) fn new(data: &[Point]) -> Self {
        Self {
            x: data.iter().map(|p| p.x).collect(),
            y: data.iter().map(|p| p.y).collect(),
        }
    }

    fn len(&self) -> usize {
        self.x.len()
    }
}

/// One M-step. Returns `None` when a component empties or loses positive
/// definiteness, which can only happen without a prior.
///
/// `resp` is component-major: `resp[k * n + i]`.
pub(crate) fn m_step(
    data: &Columns,
    resp: &[f64],
    g: usize,
    prior: Option<&PriorSpec>,
) -> Option<Vec<GaussianComponent>> {
    let n = data.len();
    let (xs, ys) = (&data.x[..n], &data.y[..n]);
    let mut comps = Vec::with_capacity(g);
    let mut total = 0.0;
    for k in 0..g {
        let r = &resp[k * n..(k + 1) * n];
        let (mut nk, mut sx, mut sy) = (0.0, 0.0, 0.0);
        for i in 0..n {
            nk += r[i];
            sx += r[i] * xs[i];
            sy += r[i] * ys[i];
        }
        if prior.is_none() && nk < EMPTY_COMPONENT {
            return None;
        }
        let xbar = match prior {
            Some(p) if nk <= 0.0 => p.mean,
            _ => Point::new(sx / nk, sy / nk),
        };
        let (mut wxx, mut wxy, mut wyy) = (0.0, 0.0, 0.0);
        for i in 0..n {
            let (dx, dy) = (xs[i] - xbar.x, ys[i] - xbar.y);
            wxx += r[i] * dx * dx;
            wxy += r[i] * dx * dy;
            wyy += r[i] * dy * dy;
        }
        let scatter = SymMat2::new(wxx, wxy, wyy);
        let (mean, cov) = match prior {
            None => (xbar, scatter.scale(1.0 / nk)),
            Some(p) => {
                let kappa = p.shrinkage;
                let mean = Point::new(
                    (nk * xbar.x + kappa * p.mean.x) / (nk + kappa),
                    (nk * xbar.y + kappa * p.mean.y) / (nk + kappa),
                );
                let shift = SymMat2::outer(xbar - p.mean).scale(kappa * nk / (kappa + nk));
                let cov = p
                    .scale
                    .add(&shift)
                    .add(&scatter)
                    .scale(1.0 / (p.dof + nk + 4.0));
                (mean, cov)
            }
        };
        if !cov.is_spd() || !mean.is_finite() {
            return None;
        }
        total += nk;
        comps.push(GaussianComponent::new(nk, mean, cov));
    }
    for c in &mut comps {
        c.weight = (c.weight / total).max(f64::MIN_POSITIVE);
    }
    Some(comps)
}

/// Per-point buffers reused across E-steps.
struct Scratch {
    max: Vec<f64>,
    sum: Vec<f64>,
}

/// E-step: fills `resp` and returns the log-likelihood.
fn e_step(data: &Columns, comps: &[GaussianComponent], resp: &mut [f64], work: &mut Scratch) -> f64 {
    let n = data.len();
    let (xs, ys) = (&data.x[..n], &data.y[..n]);
    let max = &mut work.max[..n];
    let sum = &mut work.sum[..n];
    max.fill(f64::NEG_INFINITY);
    sum.fill(0.0);

    // Log of weighted component densities, one component row at a time.
    for (k, c) in comps.iter().enumerate() {
        let prec = c.covariance.inverse().expect("SPD after M-step");
        let coef = ln(c.weight) - LN_2PI - 0.5 * c.covariance.ln_det();
        let (a, b, d) = (0.5 * prec.xx, prec.xy, 0.5 * prec.yy);
        let (mx, my) = (c.mean.x, c.mean.y);
        let row = &mut resp[k * n..(k + 1) * n];
        for i in 0..n {
            let (dx, dy) = (xs[i] - mx, ys[i] - my);
            let t = coef - (a * dx * dx + b * dx * dy + d * dy * dy);
            row[i] = t;
            max[i] = max[i].max(t);
        }
    }
    for k in 0..comps.len() {
        let row = &mut resp[k * n..(k + 1) * n];
        for i in 0..n {
            let d = row[i] - max[i];
            // e^-40 is below half an ulp of a sum that is at least 1.
            let e = if d < -40.0 { 0.0 } else { exp(d) };
            row[i] = e;
            sum[i] += e;
        }
    }
    let mut loglik = 0.0;
    for i in 0..n {
        loglik += max[i] + ln(sum[i]);
        sum[i] = 1.0 / sum[i];
    }
    for k in 0..comps.len() {
        let row = &mut resp[k * n..(k + 1) * n];
        for i in 0..n {
            row[i] *= sum[i];
        }
    }
    loglik
}

fn log_prior(comps: &[GaussianComponent], prior: Option<&PriorSpec>) -> f64 {
    match prior {
        None => 0.0,
        Some(p) => comps
            .iter()
            .map(|c| p.log_density(c.mean, &c.covariance))
            .sum(),
    }
}

/// A single EM run from a k-means++ start drawn from stream `(seed, g, restart)`.
pub(crate) fn run_restart(
    data: &[Point],
    g: usize,
    prior: Option<&PriorSpec>,
    bbox: BoundedBox,
    config: &FitConfig,
    restart: usize,
) -> Result<FitResult> {
    let n = data.len();
    let mut rng = rng::stream(config.seed, &[g as u64, restart as u64]);
    let labels = kmeans::init_labels(data, g, &mut rng);
    let mut resp = vec![0.0; n * g];
    for (i, &l) in labels.iter().enumerate() {
        resp[l * n + i] = 1.0;
    }
    let cols = Columns::new(data);
    let mut work = Scratch {
        max: vec![0.0; n],
        sum: vec![0.0; n],
    };

    let mut trace = Vec::new();
    let mut comps = Vec::new();
    let mut loglik = f64::NEG_INFINITY;
    let mut converged = false;
    let singular = || {
        Error::SingularModel(format!(
            "restart {restart} with {g} components degenerated"
        ))
    };
    for _ in 0..config.max_iter {
        comps = m_step(&cols, &resp, g, prior).ok_or_else(singular)?;
        loglik = e_step(&cols, &comps, &mut resp, &mut work);
        let objective = loglik + log_prior(&comps, prior);
        if !objective.is_finite() {
            return Err(singular());
        }
        let prev = trace.last().copied();
        trace.push(objective);
        // With one component the responsibilities never change, so the
        // first M-step is already the fixed point.
        if g == 1 {
            converged = true;
            break;
        }
        if prev.is_some_and(|prev| (objective - prev).abs() <= config.tol * objective.abs()) {
            converged = true;
            break;
        }
    }

    let model = MixtureModel::new(comps, bbox)?;
    let log_objective = *trace.last().expect("at least one iteration");
    let p = n_params(g);
    Ok(FitResult {
        model,
        meta: FitMeta {
            n_components: g,
            n_obs: n,
            loglik_at_map: loglik,
            log_objective,
            n_iter: trace.len(),
            log_objective_trace: trace,
            n_params: p,
            bic: bic(loglik, p, n),
            converged,
            restart,
            prior: prior.copied(),
        },
    })
}

/// Best restart by final objective; ties go to the lower restart index.
pub(crate) fn best_restart(results: impl IntoIterator<Item = Result<FitResult>>) -> Result<FitResult> {
    let mut best: Option<FitResult> = None;
    let mut last_err = None;
    for r in results {
        match r {
            Ok(fit) => {
                let better = best
                    .as_ref()
                    .is_none_or(|b| fit.meta.log_objective > b.meta.log_objective);
                if better {
                    best = Some(fit);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.unwrap_or_else(|| Error::usage("no restarts were run")))
}

pub(crate) fn check_data(data: &[Point], g: usize) -> Result<()> {
    if g == 0 {
        return Err(Error::usage("number of components must be at least 1"));
    }
    if data.len() < g {
        return Err(Error::InsufficientData(format!(
            "{} points cannot support {g} components",
            data.len()
        )));
    }
    if let Some(i) = data.iter().position(|p| !p.is_finite()) {
        return Err(Error::domain(format!("data point {i} is not finite")));
    }
    Ok(())
}

/// Fits a `g`-component mixture to points on the transformed plane.
///
/// Runs `config.n_restarts` EM runs from independent k-means++ starts and
/// keeps the one with the highest final objective. The objective is the
/// log-posterior when `prior` is given and the log-likelihood otherwise;
/// `config.prior_enabled` is not consulted here.
pub fn fit_em(
    data: &[Point],
    g: usize,
    prior: Option<&PriorSpec>,
    bbox: BoundedBox,
    config: &FitConfig,
) -> Result<FitResult> {
    fit_em_with(&Serial, data, g, prior, bbox, config)
}

pub fn fit_em_with<E: Executor>(
    exec: &E,
    data: &[Point],
    g: usize,
    prior: Option<&PriorSpec>,
    bbox: BoundedBox,
    config: &FitConfig,
) -> Result<FitResult> {
    config.validate()?;
    check_data(data, g)?;
    if let Some(p) = prior {
        p.validate()?;
    }
    let results = exec.map_indexed(config.n_restarts, |r| {
        run_restart(data, g, prior, bbox, config, r)
    });
    best_restart(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::nba_court;
    use crate::mixture::prior::default_prior;

    fn plane_box() -> BoundedBox {
        BoundedBox::from(&nba_court())
    }

    fn two_blobs(n: usize, seed: u64) -> Vec<Point> {
        let truth = MixtureModel::new(
            vec![
                GaussianComponent::new(0.4, Point::new(-2.0, 0.0), SymMat2::new(0.5, 0.1, 0.4)),
                GaussianComponent::new(0.6, Point::new(2.0, 1.0), SymMat2::new(0.3, -0.05, 0.6)),
            ],
            plane_box(),
        )
        .unwrap();
        let mut r = rng::stream(seed, &[]);
        truth.sample_transformed(n, &mut r)
    }

    #[test]
    fn m_step_with_vanishing_prior_matches_mle_means() {
        let data = two_blobs(500, 1);
        let n = data.len();
        let mut resp = vec![0.0; 2 * n];
        for (i, p) in data.iter().enumerate() {
            let w = 1.0 / (1.0 + p.x.exp());
            resp[i] = w;
            resp[n + i] = 1.0 - w;
        }
        let mle = m_step(&Columns::new(&data), &resp, 2, None).unwrap();
        let prior = PriorSpec {
            mean: Point::new(0.0, 0.0),
            shrinkage: 1e-8,
            dof: 4.0,
            scale: SymMat2::identity().scale(1e-12),
        };
        let map = m_step(&Columns::new(&data), &resp, 2, Some(&prior)).unwrap();
        for (a, b) in mle.iter().zip(&map) {
            assert!((a.mean.x - b.mean.x).abs() < 1e-8);
            assert!((a.mean.y - b.mean.y).abs() < 1e-8);
            assert_eq!(a.weight, b.weight);
        }
    }

    #[test]
    fn empty_component_without_prior_is_singular() {
        let data = two_blobs(50, 2);
        let n = data.len();
        let mut resp = vec![0.0; 2 * n];
        resp[..n].fill(1.0);
        assert!(m_step(&Columns::new(&data), &resp, 2, None).is_none());
        let prior = default_prior(&data, 2).unwrap();
        let comps = m_step(&Columns::new(&data), &resp, 2, Some(&prior)).unwrap();
        assert!(comps[1].covariance.is_spd());
        assert_eq!(comps[1].mean, prior.mean);
    }

    #[test]
    fn objective_trace_is_monotone() {
        let data = two_blobs(800, 3);
        for prior in [None, Some(default_prior(&data, 3).unwrap())] {
            let fit = fit_em(&data, 3, prior.as_ref(), plane_box(), &FitConfig::default()).unwrap();
            for w in fit.meta.log_objective_trace.windows(2) {
                assert!(w[1] >= w[0] - 1e-8, "{} -> {}", w[0], w[1]);
            }
        }
    }

    #[test]
    fn preconditions() {
        let cfg = FitConfig::default();
        assert!(matches!(
            fit_em(&[Point::new(0.0, 0.0)], 2, None, plane_box(), &cfg),
            Err(Error::InsufficientData(_))
        ));
        assert!(matches!(
            fit_em(&[Point::new(f64::NAN, 0.0)], 1, None, plane_box(), &cfg),
            Err(Error::Domain(_))
        ));
        let bad = FitConfig {
            n_restarts: 0,
            ..cfg
        };
        assert!(matches!(
            fit_em(&two_blobs(10, 1), 1, None, plane_box(), &bad),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn collapsed_data_without_prior_reports_singular() {
        let data = vec![Point::new(1.0, 1.0); 20];
        let r = fit_em(&data, 1, None, plane_box(), &FitConfig::default());
        assert!(matches!(r, Err(Error::SingularModel(_))));
    }
}
