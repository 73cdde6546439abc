use rayon::prelude::*;
use slag_core::quotient::{
    bundle_projection_consistency, k_closure_residual, line_angle, z4_coset,
};
use slag_core::reallocus::{
    base_projection, canonical_frame, cross, fiber_point, fiber_samples, known_frame, quartic_norm,
};
use slag_core::rng::{normal, stream_id, substream};

use super::timed;
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::export::{write_fibers_csv, FiberRow};
use crate::report::{Check, Report};

const FIBER_TAG: u16 = 0x4600;

/// Base planes `(w, w')` with `|w x w'|_4^4 = 1`; the first is `(e1, e2)`.
pub fn fibration_bases(seed: u64, m: usize) -> Vec<([f64; 3], [f64; 3])> {
    (0..m)
        .map(|i| {
            if i == 0 {
                return ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
            }
            let mut rng = substream(seed, stream_id(FIBER_TAG, i as u64));
            loop {
                let w: [f64; 3] = std::array::from_fn(|_| normal(&mut rng));
                let wp: [f64; 3] = std::array::from_fn(|_| normal(&mut rng));
                let q = quartic_norm(&cross(&w, &wp));
                if q > 1e-6 {
                    return (w, wp.map(|x| x * q.powf(-0.25)));
                }
            }
        })
        .collect()
}

struct FiberMetrics {
    base: [f64; 3],
    closure: f64,
    base_spread: f64,
    z4: f64,
    bundle: f64,
    rows: Vec<FiberRow>,
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn fiber(
    cfg: &RunConfig,
    id: usize,
    w: &[f64; 3],
    wp: &[f64; 3],
) -> slag_core::Result<FiberMetrics> {
    let c = &cfg.coefficients;
    let pts = fiber_samples(w, wp, cfg.fiber)?;
    let step = 2.0 * std::f64::consts::PI / cfg.fiber as f64;
    let base = base_projection(&pts[0])?;
    let mut base_spread = 0.0f64;
    let mut z4 = 0.0f64;
    let mut bundle = 0.0f64;
    let mut canon = Vec::with_capacity(pts.len());
    for p in &pts {
        base_spread = base_spread.max(max_abs_diff(&base_projection(p)?, &base));
        z4 = z4.max(k_closure_residual(&z4_coset(p)?));
        bundle = bundle.max(bundle_projection_consistency(p)?);
        canon.push(canonical_frame(c, p.frame())?.coordinates());
    }
    let end =
        canonical_frame(c, fiber_point(w, wp, 2.0 * std::f64::consts::PI)?.frame())?.coordinates();
    let rows = pts
        .iter()
        .enumerate()
        .map(|(k, p)| FiberRow::new(id, step * k as f64, p))
        .collect();
    Ok(FiberMetrics {
        base,
        closure: max_abs_diff(&end, &canon[0]),
        base_spread,
        z4,
        bundle,
        rows,
    })
}

/// Fiber curves over sampled bases, written to `fibers.csv`.
pub fn fibration(cfg: &RunConfig) -> Result<Report> {
    if !cfg.coefficients.is_standard() {
        return Err(CliError::Config(
            "the fibration command applies to the eq1 coefficients only".into(),
        ));
    }
    let mut report = Report::new("fibration", cfg.echo());
    let mut timings = std::mem::take(&mut report.timings);
    let bases = fibration_bases(cfg.seed, cfg.bases);
    let fibers: Vec<FiberMetrics> = timed(&mut timings, "fibers", || {
        bases
            .par_iter()
            .enumerate()
            .map(|(i, (w, wp))| fiber(cfg, i, w, wp))
            .collect::<slag_core::Result<_>>()
    })?;
    let s = cfg.tol_scale;
    let max = |g: fn(&FiberMetrics) -> f64| fibers.iter().map(g).fold(0.0, f64::max);
    report.push(Check::bound(
        "fibers close up after canonicalization",
        max(|f| f.closure),
        1e-9 * s,
    ));
    report.push(Check::bound(
        "fiber points share their base",
        max(|f| f.base_spread),
        1e-10 * s,
    ));
    let mut separation = f64::INFINITY;
    for i in 0..fibers.len() {
        for j in i + 1..fibers.len() {
            separation = separation.min(line_angle(&fibers[i].base, &fibers[j].base));
        }
    }
    if fibers.len() > 1 {
        report.push(Check::above("distinct bases separate", separation, 1e-6));
    }
    report.push(Check::bound(
        "Z4 coset closed under right multiplication by k",
        max(|f| f.z4),
        1e-10 * s,
    ));
    report.push(Check::bound(
        "RP2 projection routes agree",
        max(|f| f.bundle),
        1e-9 * s,
    ));
    let known = fibers[0].rows[0].theta == 0.0
        && fibers[0].base == [0.0, 0.0, 1.0]
        && fiber_point(&bases[0].0, &bases[0].1, 0.0)?.frame() == &known_frame();
    report.push(Check::flag("base (0,0,1) carries the known point", known));

    let rows: Vec<FiberRow> = fibers.into_iter().flat_map(|f| f.rows).collect();
    timed(&mut timings, "export", || -> Result<()> {
        std::fs::create_dir_all(&cfg.out)?;
        write_fibers_csv(&cfg.out.join("fibers.csv"), &rows)
    })?;
    report.timings = timings;
    Ok(report)
}
