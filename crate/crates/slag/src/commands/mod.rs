//! The five pipelines behind the CLI subcommands.

mod atlas;
mod fibration;
mod sample;
mod smoothness;
mod verify;

use std::time::Instant;

pub use atlas::{atlas_check, AtlasOptions};
pub use fibration::{fibration, fibration_bases};
pub use sample::sample;
pub use smoothness::smoothness;
pub use verify::{verify, VerifyOptions};

/// Runs `f` and records its wall-clock time in seconds.
pub(crate) fn timed<T>(
    timings: &mut std::collections::BTreeMap<String, f64>,
    stage: &str,
    f: impl FnOnce() -> T,
) -> T {
    let start = Instant::now();
    let out = f();
    timings.insert(stage.to_string(), start.elapsed().as_secs_f64());
    out
}
