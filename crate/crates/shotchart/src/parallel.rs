//! Thread-pool executor for the independent jobs of a fit.

use rayon::prelude::*;
use shotchart_core::{Executor, Serial};

use crate::error::{Error, Result};

/// Runs jobs on the current rayon pool. Results come back in index order, so
/// fits match the serial executor bit for bit.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rayon;

impl Executor for Rayon {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).into_par_iter().map(f).collect()
    }
}

/// Executor chosen from a `--jobs` setting.
pub enum Threads {
    Serial,
    /// The global rayon pool.
    Global,
    Pool(rayon::ThreadPool),
}

impl Threads {
    /// `None` uses the global pool; `Some(1)` runs on the calling thread.
    pub fn new(jobs: Option<usize>) -> Result<Self> {
        match jobs {
            None => Ok(Threads::Global),
            Some(0) => Err(Error::Usage("--jobs must be at least 1".into())),
            Some(1) => Ok(Threads::Serial),
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map(Threads::Pool)
                .map_err(|e| Error::Usage(format!("cannot start {n} threads: {e}"))),
        }
    }
}

impl Executor for Threads {
    fn map_indexed<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Threads::Serial => Serial.map_indexed(n, f),
            Threads::Global => Rayon.map_indexed(n, f),
            Threads::Pool(p) => p.install(|| Rayon.map_indexed(n, f)),
        }
    }
}
