use serde_json::json;
use slag_core::grassmann::Chart;

use super::timed;
use crate::config::RunConfig;
use crate::parallel;
use crate::report::{Check, Report};

/// Multistart singular-point search in all six charts.
pub fn smoothness(cfg: &RunConfig) -> Report {
    let mut report = Report::new("smoothness", cfg.echo());
    report.label = Some("evidence".into());
    let mut timings = std::mem::take(&mut report.timings);
    let mut residuals = Vec::new();
    let mut charts = Vec::new();
    for chart in Chart::ALL {
        let r = timed(&mut timings, &chart.to_string(), || {
            parallel::smoothness_search(&cfg.coefficients, chart, cfg.starts, cfg.seed)
        });
        report.push(
            Check::flag(format!("no singular witnesses in {chart}"), r.is_clean()).with_detail(
                format!(
                    "{} witnesses, {} distinct, {} starts",
                    r.converged, r.distinct_witnesses, r.n_starts
                ),
            ),
        );
        residuals.push(r.residual_min);
        let shown: Vec<_> = r
            .witnesses
            .iter()
            .take(5)
            .map(|w| {
                json!({
                    "start": w.start,
                    "zeta": w.zeta.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                    "value": w.value,
                    "gradient": w.gradient,
                })
            })
            .collect();
        charts.push(json!({
            "chart": r.chart,
            "n_starts": r.n_starts,
            "converged": r.converged,
            "distinct_witnesses": r.distinct_witnesses,
            "residual_min": r.residual_min,
            "residual_median": r.residual_median,
            "residual_max": r.residual_max,
            "witnesses": shown,
        }));
    }
    report.stat("chart minimum joint residual", &residuals);
    report.details.insert("charts".into(), json!(charts));
    report
        .notes
        .push("multistart Newton search; an empty witness list is evidence, not proof".into());
    report.timings = timings;
    report
}
