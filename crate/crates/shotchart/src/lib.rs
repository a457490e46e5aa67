//! File formats, rendering and the command-line tool for bounded
//! Gaussian-mixture shot charts. The numerical work lives in
//! [`shotchart_core`]; this crate adds everything that needs `std`.

pub mod cli;
pub mod colormap;
pub mod error;
pub mod ingest;
pub mod io;
pub mod manifest;
pub mod parallel;
pub mod render;
pub mod report;

pub use error::{Error, Result};
pub use shotchart_core as core;
