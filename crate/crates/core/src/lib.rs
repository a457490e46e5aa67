//! Shot-chart estimation on a bounded half-court.
//!
//! Shot locations live in an open rectangle. Each coordinate is mapped to the
//! real line with a range-logit transform, a Gaussian mixture is fitted there
//! by EM (optionally with a conjugate normal-inverse-Wishart prior), and the
//! density is brought back to court coordinates with the Jacobian of the
//! transform. Made and missed shots get separate mixtures; Bayes' rule turns
//! them into success-probability and expected-points surfaces.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, rendering and
//! the command-line tool live in the `shotchart` crate.

#![no_std]
// `!(x > 0.0)` is how NaN gets rejected along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod exec;
pub mod geometry;
pub mod linalg;
mod math;
pub mod mixture;
pub mod rng;
pub mod scenarios;
pub mod shotmodel;
pub mod surface;
pub mod transform;

pub use error::{Error, Result};
pub use exec::{Executor, Serial};
pub use geometry::{CourtSpec, Point, Polyline, ShotValue};
pub use linalg::SymMat2;
pub use mixture::{
    default_prior, fit_em, fit_em_with, select_model, select_model_with, FitConfig, FitMeta, FitResult, GaussianComponent,
    MixtureModel, PriorSpec,
};
pub use scenarios::Scenario;
pub use shotmodel::{
    fit_shot_chart, fit_shot_chart_with, Outcome, ShotChartModel, ShotDataset, ShotRecord,
    SummaryRow, SummaryTable,
};
pub use surface::{evaluate_surface, evaluate_surface_with, GridSpec, Surface, SurfaceKind};
pub use transform::BoundedBox;
