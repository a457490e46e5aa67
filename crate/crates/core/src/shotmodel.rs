//! Made/missed mixtures combined with outcome priors: class densities,
//! success probability, expected points, HDR thresholds and the
//! observed-versus-estimated summary.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use crate::exec::{Executor, Serial};
use crate::geometry::{CourtSpec, Point, ShotValue};
use crate::math::{exp, ln};
use crate::mixture::{select_model_with, FitConfig, FitMeta, MixtureModel};
use crate::rng;
use crate::transform::BoundedBox;
use crate::{Error, Result};

/// Shot outcome `C`: 1 for made, 0 for missed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Missed = 0,
    Made = 1,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Missed => "missed",
            Outcome::Made => "made",
        }
    }

    pub fn other(self) -> Outcome {
        match self {
            Outcome::Missed => Outcome::Made,
            Outcome::Made => Outcome::Missed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotRecord {
    pub x: f64,
    pub y: f64,
    pub made: bool,
}

impl ShotRecord {
    pub fn new(x: f64, y: f64, made: bool) -> Self {
        Self { x, y, made }
    }

    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }

    pub fn outcome(&self) -> Outcome {
        if self.made {
            Outcome::Made
        } else {
            Outcome::Missed
        }
    }
}

/// Validated shot attempts on a court.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotDataset {
    records: Vec<ShotRecord>,
    court: CourtSpec,
    label: String,
}

impl ShotDataset {
    pub fn new(records: Vec<ShotRecord>, court: CourtSpec, label: impl Into<String>) -> Result<Self> {
        court.validate()?;
        if records.is_empty() {
            return Err(Error::InsufficientData("dataset has no shots".into()));
        }
        if let Some(i) = records.iter().position(|r| !court.contains(r.point())) {
            let r = records[i];
            return Err(Error::domain(format!(
                "shot {i} at ({}, {}) is outside the court",
                r.x, r.y
            )));
        }
        Ok(Self {
            records,
            court,
            label: label.into(),
        })
    }

    pub fn records(&self) -> &[ShotRecord] {
        &self.records
    }

    pub fn court(&self) -> &CourtSpec {
        &self.court
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn n_made(&self) -> usize {
        self.records.iter().filter(|r| r.made).count()
    }

    /// Court points of one outcome class.
    pub fn points(&self, outcome: Outcome) -> Vec<Point> {
        self.records
            .iter()
            .filter(|r| r.outcome() == outcome)
            .map(ShotRecord::point)
            .collect()
    }
}

/// Two bounded mixtures (made and missed) with outcome priors `τ₁`, `τ₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotChartModel {
    made_model: MixtureModel,
    missed_model: MixtureModel,
    tau_made: f64,
    tau_missed: f64,
    court: CourtSpec,
    made_fit: Option<FitMeta>,
    missed_fit: Option<FitMeta>,
}

impl ShotChartModel {
    /// Assembles a model from two mixtures defined on the court's box.
    /// `tau_made` may be 0 or 1; fitted models always have both classes.
    pub fn new(
        made_model: MixtureModel,
        missed_model: MixtureModel,
        tau_made: f64,
        court: CourtSpec,
    ) -> Result<Self> {
        court.validate()?;
        if !(0.0..=1.0).contains(&tau_made) {
            return Err(Error::usage(format!("tau_made = {tau_made} is not a probability")));
        }
        let bbox = BoundedBox::from(&court);
        if *made_model.bbox() != bbox || *missed_model.bbox() != bbox {
            return Err(Error::usage("mixture boxes do not match the court bounds"));
        }
        Ok(Self {
            made_model,
            missed_model,
            tau_made,
            tau_missed: 1.0 - tau_made,
            court,
            made_fit: None,
            missed_fit: None,
        })
    }

    pub fn with_fit_meta(mut self, made: Option<FitMeta>, missed: Option<FitMeta>) -> Self {
        self.made_fit = made;
        self.missed_fit = missed;
        self
    }

    pub fn made_model(&self) -> &MixtureModel {
        &self.made_model
    }

    pub fn missed_model(&self) -> &MixtureModel {
        &self.missed_model
    }

    pub fn model(&self, outcome: Outcome) -> &MixtureModel {
        match outcome {
            Outcome::Made => &self.made_model,
            Outcome::Missed => &self.missed_model,
        }
    }

    pub fn tau_made(&self) -> f64 {
        self.tau_made
    }

    pub fn tau_missed(&self) -> f64 {
        self.tau_missed
    }

    pub fn tau(&self, outcome: Outcome) -> f64 {
        match outcome {
            Outcome::Made => self.tau_made,
            Outcome::Missed => self.tau_missed,
        }
    }

    pub fn court(&self) -> &CourtSpec {
        &self.court
    }

    pub fn made_fit(&self) -> Option<&FitMeta> {
        self.made_fit.as_ref()
    }

    pub fn missed_fit(&self) -> Option<&FitMeta> {
        self.missed_fit.as_ref()
    }

    fn check_in_court(&self, p: Point) -> Result<()> {
        if self.court.contains(p) {
            Ok(())
        } else {
            Err(Error::domain(format!("point ({}, {}) is outside the court", p.x, p.y)))
        }
    }

    /// `log f(x, y | C = outcome)`, Jacobian included.
    pub fn log_class_density(&self, p: Point, outcome: Outcome) -> Result<f64> {
        self.check_in_court(p)?;
        self.model(outcome).log_density(p)
    }

    /// `f(x, y | C = outcome)`, Jacobian included.
    pub fn class_density(&self, p: Point, outcome: Outcome) -> Result<f64> {
        self.log_class_density(p, outcome).map(exp)
    }

    /// `Pr(C = outcome | x, y)` by Bayes' rule, evaluated in log space.
    pub fn outcome_probability(&self, p: Point, outcome: Outcome) -> Result<f64> {
        self.check_in_court(p)?;
        // The Jacobian cancels in the ratio, so work on the transformed plane.
        let q = BoundedBox::from(&self.court).forward(p)?;
        let a = ln(self.tau(outcome)) + self.model(outcome).log_density_transformed(q);
        let b = ln(self.tau(outcome.other())) + self.model(outcome.other()).log_density_transformed(q);
        if a.is_nan() || b.is_nan() || (a == f64::NEG_INFINITY && b == f64::NEG_INFINITY) {
            return Err(Error::domain(format!(
                "posterior undefined at ({}, {})",
                p.x, p.y
            )));
        }
        // 1 / (1 + e^(b - a)); e^(+inf) = inf gives 0 and e^(-inf) = 0 gives 1.
        Ok(1.0 / (1.0 + exp(b - a)))
    }

    /// `Pr(C = 1 | x, y)`.
    pub fn success_probability(&self, p: Point) -> Result<f64> {
        self.outcome_probability(p, Outcome::Made)
    }

    /// Shot value at `p` times the success probability.
    pub fn expected_points(&self, p: Point) -> Result<f64> {
        let v = self.court.shot_value(p)?;
        Ok(v.points() * self.success_probability(p)?)
    }

    /// Empirical vs estimated statistics for 2- and 3-point attempts.
    pub fn summarize(&self, data: &ShotDataset) -> Result<SummaryTable> {
        if data.court() != &self.court {
            return Err(Error::usage("dataset court does not match the model court"));
        }
        let mut acc = [(0usize, 0usize, 0.0f64); 2];
        for r in data.records() {
            let p = r.point();
            let slot = match self.court.shot_value(p)? {
                ShotValue::Two => 0,
                ShotValue::Three => 1,
            };
            let a = &mut acc[slot];
            a.0 += 1;
            a.1 += usize::from(r.made);
            a.2 += self.success_probability(p)?;
        }
        let row = |value: ShotValue, (attempts, made, prob_sum): (usize, usize, f64)| {
            if attempts == 0 {
                return SummaryRow {
                    value,
                    attempts,
                    observed_made_fraction: None,
                    estimated_mean_probability: None,
                    observed_points_per_attempt: None,
                    estimated_expected_score: None,
                };
            }
            let n = attempts as f64;
            let observed = made as f64 / n;
            let estimated = prob_sum / n;
            SummaryRow {
                value,
                attempts,
                observed_made_fraction: Some(observed),
                estimated_mean_probability: Some(estimated),
                observed_points_per_attempt: Some(value.points() * observed),
                estimated_expected_score: Some(value.points() * estimated),
            }
        };
        Ok(SummaryTable {
            rows: [row(ShotValue::Two, acc[0]), row(ShotValue::Three, acc[1])],
        })
    }

    /// Density thresholds of highest density regions for `outcome`.
    ///
    /// Draws `n_mc` points from the class mixture and returns, for each
    /// level `p`, the `(1 - p)`-quantile of their densities, so that
    /// `{f ≥ threshold}` holds about `p` of the class mass.
    pub fn hdr_thresholds(
        &self,
        outcome: Outcome,
        levels: &[f64],
        n_mc: usize,
        seed: u64,
    ) -> Result<Vec<f64>> {
        if n_mc < 1000 {
            return Err(Error::usage(format!("n_mc = {n_mc} is below 1000")));
        }
        if levels.iter().any(|l| !(*l > 0.0 && *l <= 1.0)) {
            return Err(Error::usage("HDR levels must lie in (0, 1]"));
        }
        if levels.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::usage("HDR levels must be sorted ascending"));
        }
        let model = self.model(outcome);
        let mut r = rng::stream(seed, &[outcome as u64]);
        let mut dens: Vec<f64> = model
            .sample_with(n_mc, &mut r)
            .into_iter()
            .map(|p| model.density(p))
            .collect::<Result<_>>()?;
        dens.sort_by(f64::total_cmp);
        Ok(levels.iter().map(|l| quantile_sorted(&dens, 1.0 - l)).collect())
    }
}

/// Linear-interpolation quantile of sorted data (R's default definition).
pub(crate) fn quantile_sorted(sorted: &[f64], prob: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * prob.clamp(0.0, 1.0);
    let lo = h as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Fits made and missed mixtures separately with BIC selection over
/// `g_range` and sets `τ₁` to the made proportion.
///
/// Each class needs at least `max(g_range) + 1` shots. Component counts that
/// a class is too small to support (`n ≤ 6g`) are dropped from its range.
pub fn fit_shot_chart(
    data: &ShotDataset,
    g_range: RangeInclusive<usize>,
    config: &FitConfig,
) -> Result<ShotChartModel> {
    fit_shot_chart_with(&Serial, data, g_range, config)
}

pub fn fit_shot_chart_with<E: Executor>(
    exec: &E,
    data: &ShotDataset,
    g_range: RangeInclusive<usize>,
    config: &FitConfig,
) -> Result<ShotChartModel> {
    config.validate()?;
    if g_range.is_empty() || *g_range.start() == 0 {
        return Err(Error::usage("component range is empty or starts at 0"));
    }
    let (g_lo, g_hi) = (*g_range.start(), *g_range.end());
    let court = *data.court();
    let bbox = BoundedBox::from(&court);

    let mut fits = Vec::with_capacity(2);
    for outcome in [Outcome::Made, Outcome::Missed] {
        let pts = data.points(outcome);
        let n = pts.len();
        if n < g_hi + 1 {
            return Err(Error::InsufficientData(format!(
                "{} class has {n} shots; at least {} required",
                outcome.name(),
                g_hi + 1
            )));
        }
        let feasible_hi = g_hi.min((n - 1) / 6);
        if feasible_hi < g_lo {
            return Err(Error::InsufficientData(format!(
                "{} class has {n} shots, too few for {g_lo} components",
                outcome.name()
            )));
        }
        let transformed: Vec<Point> = pts
            .iter()
            .map(|p| bbox.forward(*p))
            .collect::<Result<_>>()?;
        let cfg = FitConfig {
            seed: rng::derive_seed(config.seed, &[outcome as u64]),
            ..*config
        };
        fits.push(select_model_with(exec, &transformed, g_lo..=feasible_hi, bbox, &cfg)?);
    }
    let missed = fits.pop().expect("two fits");
    let made = fits.pop().expect("two fits");
    let tau_made = data.n_made() as f64 / data.len() as f64;
    Ok(ShotChartModel::new(made.model, missed.model, tau_made, court)?
        .with_fit_meta(Some(made.meta), Some(missed.meta)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryRow {
    pub value: ShotValue,
    pub attempts: usize,
    pub observed_made_fraction: Option<f64>,
    pub estimated_mean_probability: Option<f64>,
    pub observed_points_per_attempt: Option<f64>,
    pub estimated_expected_score: Option<f64>,
}

/// One row per shot value, 2-point first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryTable {
    pub rows: [SummaryRow; 2],
}

impl SummaryTable {
    pub fn row(&self, value: ShotValue) -> &SummaryRow {
        match value {
            ShotValue::Two => &self.rows[0],
            ShotValue::Three => &self.rows[1],
        }
    }

    pub fn total_attempts(&self) -> usize {
        self.rows.iter().map(|r| r.attempts).sum()
    }
}
