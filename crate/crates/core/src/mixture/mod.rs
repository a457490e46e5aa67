//! Gaussian mixtures on the transformed plane: EM with optional MAP
//! regularization, BIC model selection, density evaluation and sampling.

mod em;
mod kmeans;
mod model;
mod prior;
mod select;

pub use em::{fit_em, fit_em_with, FitConfig, FitMeta, FitResult};
pub use model::{n_params, GaussianComponent, MixtureModel};
pub use prior::{default_prior, PriorSpec};
pub use select::{select_model, select_model_with};
