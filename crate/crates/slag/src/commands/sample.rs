use slag_core::hypersurface::eval_f;

use super::timed;
use crate::config::RunConfig;
use crate::error::Result;
use crate::export::{write_locus_csv, write_locus_jsonl};
use crate::parallel;
use crate::report::{Check, Report};

/// Samples the normalized locus and writes `locus.csv` and `locus.jsonl`.
pub fn sample(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::new("sample", cfg.echo());
    let mut timings = std::mem::take(&mut report.timings);
    let points = timed(&mut timings, "sample", || {
        parallel::sample_locus(&cfg.coefficients, cfg.n, cfg.seed)
    })?;
    let p_res: Vec<f64> = points.iter().map(|p| p.p_residual()).collect();
    let n_res: Vec<f64> = points.iter().map(|p| p.n_residual()).collect();
    let hyp: Vec<f64> = points
        .iter()
        .map(|p| eval_f(&cfg.coefficients, p.frame()).map_or(f64::NAN, f64::abs))
        .collect();
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    report.push(Check::flag(
        format!("{} points sampled", cfg.n),
        points.len() == cfg.n,
    ));
    report.push(Check::bound(
        "max |P - 1|",
        max(&p_res),
        1e-10 * cfg.tol_scale,
    ));
    report.push(Check::bound(
        "max |N - 1|",
        max(&n_res),
        1e-10 * cfg.tol_scale,
    ));
    report.push(Check::bound(
        "max |F_c| on samples",
        max(&hyp),
        1e-9 * cfg.tol_scale,
    ));
    report.stat("|P - 1|", &p_res);
    report.stat("|N - 1|", &n_res);
    timed(&mut timings, "export", || -> Result<()> {
        std::fs::create_dir_all(&cfg.out)?;
        write_locus_csv(&cfg.out.join("locus.csv"), &points)?;
        write_locus_jsonl(&cfg.out.join("locus.jsonl"), &points)
    })?;
    report.timings = timings;
    Ok(report)
}
