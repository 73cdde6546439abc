//! Thread-pool drivers. Each task draws from its own `(seed, index)` stream
//! and results are collected in index order, so outputs do not depend on
//! the thread count.

use rayon::prelude::*;
use slag_core::grassmann::Chart;
use slag_core::hypersurface::{
    chart_tag, run_start, ChartSystem, CoefficientVector, SearchSettings, SmoothnessReport,
    StartOutcome,
};
use slag_core::reallocus::{sample_point, RealLocusPoint};

/// Environment variable selecting the worker count.
pub const THREADS_ENV: &str = "SLAG_THREADS";

/// A pool with `threads` workers, or rayon's default when `None` or 0.
pub fn thread_pool(threads: Option<usize>) -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads.filter(|&n| n > 0) {
        b = b.num_threads(n);
    }
    b.build().expect("thread pool")
}

/// Reads the worker count from [`THREADS_ENV`].
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
}

/// Parallel version of `smoothness_search`, identical output.
pub fn smoothness_search(
    c: &CoefficientVector,
    chart: Chart,
    n_starts: usize,
    seed: u64,
) -> SmoothnessReport {
    let sys = ChartSystem::for_coefficients(c, chart);
    let settings = SearchSettings::default();
    let tag = chart_tag(chart);
    let outcomes: Vec<StartOutcome> = (0..n_starts as u64)
        .into_par_iter()
        .map(|i| run_start(&sys, seed, tag, i, &settings))
        .collect();
    SmoothnessReport::assemble(chart.to_string(), &outcomes, settings.tol)
}

/// Parallel version of `sample_locus`, identical output.
pub fn sample_locus(
    c: &CoefficientVector,
    n: usize,
    seed: u64,
) -> slag_core::Result<Vec<RealLocusPoint>> {
    (0..n as u64)
        .into_par_iter()
        .map(|i| sample_point(c, seed, i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use slag_core::hypersurface::Preset;

    #[test]
    fn matches_sequential_drivers() {
        let c = CoefficientVector::preset(Preset::Eq8);
        let chart = Chart::new(0, 3).unwrap();
        let seq = slag_core::hypersurface::smoothness_search(&c, chart, 16, 4).unwrap();
        for threads in [1, 3] {
            let par = thread_pool(Some(threads)).install(|| smoothness_search(&c, chart, 16, 4));
            assert_eq!(par, seq);
            let pts = thread_pool(Some(threads))
                .install(|| sample_locus(&c, 12, 4))
                .unwrap();
            assert_eq!(pts, slag_core::reallocus::sample_locus(&c, 12, 4).unwrap());
        }
    }
}
