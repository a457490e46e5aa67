use alloc::format;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use super::em::{best_restart, check_data, run_restart, FitConfig, FitResult};
use super::prior::{default_prior, PriorSpec};
use crate::exec::{Executor, Serial};
use crate::geometry::Point;
use crate::transform::BoundedBox;
use crate::{Error, Result};

/// Fits every component count in `g_range` and keeps the one with the
/// largest BIC, computed from the log-likelihood at the (MAP) estimates.
/// Ties go to the smaller count. With `config.prior_enabled` each candidate
/// uses [`default_prior`] for its own `g`.
pub fn select_model(
    data: &[Point],
    g_range: RangeInclusive<usize>,
    bbox: BoundedBox,
    config: &FitConfig,
) -> Result<FitResult> {
    select_model_with(&Serial, data, g_range, bbox, config)
}

pub fn select_model_with<E: Executor>(
    exec: &E,
    data: &[Point],
    g_range: RangeInclusive<usize>,
    bbox: BoundedBox,
    config: &FitConfig,
) -> Result<FitResult> {
    config.validate()?;
    if g_range.is_empty() || *g_range.start() == 0 {
        return Err(Error::usage(format!(
            "component range {}..={} is empty or starts at 0",
            g_range.start(),
            g_range.end()
        )));
    }
    let g_max = *g_range.end();
    if data.len() <= 6 * g_max {
        return Err(Error::InsufficientData(format!(
            "model selection up to {g_max} components needs more than {} points, got {}",
            6 * g_max,
            data.len()
        )));
    }
    check_data(data, g_max)?;

    let gs: Vec<usize> = g_range.collect();
    let priors: Vec<Option<PriorSpec>> = gs
        .iter()
        .map(|&g| config.prior_enabled.then(|| default_prior(data, g)).transpose())
        .collect::<Result<_>>()?;

    let restarts = config.n_restarts;
    let mut runs = exec
        .map_indexed(gs.len() * restarts, |job| {
            let (gi, r) = (job / restarts, job % restarts);
            run_restart(data, gs[gi], priors[gi].as_ref(), bbox, config, r)
        })
        .into_iter();

    let mut best: Option<FitResult> = None;
    let mut last_err = None;
    for _ in &gs {
        match best_restart(runs.by_ref().take(restarts)) {
            Ok(fit) => {
                if best.as_ref().is_none_or(|b| fit.meta.bic > b.meta.bic) {
                    best = Some(fit);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.expect("non-empty range"))
}
