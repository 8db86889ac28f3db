use rayon::prelude::*;

use super::boundary::KnownBoundary;
use super::regime::{classify_regime, RegimeReport};
use crate::integrator::SimError;
use crate::model::{snap, ModelParams};

/// Size of the worker pool used for sweeps.
pub const SWEEP_WORKERS: usize = 8;

/// `alpha_min, alpha_min + step, ...` up to `alpha_max` inclusive, each on
/// the `dt` grid.
pub fn alpha_grid(alpha_min: f64, alpha_max: f64, step: f64, dt: f64) -> Vec<f64> {
    let n = ((alpha_max - alpha_min) / step + 1e-9).floor() as usize;
    (0..=n)
        .map(|i| snap(alpha_min + i as f64 * step, dt))
        .collect()
}

/// Runs `f` over `items` on a pool of [`SWEEP_WORKERS`] threads, keeping order.
pub fn in_pool<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(SWEEP_WORKERS)
        .build()
        .expect("thread pool");
    pool.install(|| items.par_iter().map(&f).collect())
}

/// Classifies the front node at every `alpha`, results in grid order.
pub fn run_sweep(template: &ModelParams, alphas: &[f64]) -> Result<Vec<RegimeReport>, SimError> {
    in_pool(alphas, |&a| classify_regime(&template.clone().at_alpha(a)))
        .into_iter()
        .collect()
}

/// First adjacent grid pair whose labels switch as `known` describes.
pub fn grid_brackets(reports: &[RegimeReport], known: &KnownBoundary) -> Option<(f64, f64)> {
    reports
        .windows(2)
        .find(|w| w[0].label == known.low && w[1].label == known.high)
        .map(|w| (w[0].alpha, w[1].alpha))
}
