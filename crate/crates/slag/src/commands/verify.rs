use num_traits::Zero;
use rayon::prelude::*;
use slag_core::grassmann::{chart_coords, chart_coords_differential, Chart, Frame};
use slag_core::hypersurface::{residue_chart_consistency, CoefficientVector, HypersurfaceChart};
use slag_core::num_complex::Complex64;
use slag_core::quotient::{bundle_projection_consistency, k_closure_residual, z4_coset};
use slag_core::reallocus::{
    base_projection, complexified_control, locus_residuals, phase_spread, submersion_check,
    symplectic_residual, tangent_basis, RealLocusPoint, VolumeFormEvaluator,
};

use super::timed;
use crate::config::RunConfig;
use crate::error::Result;
use crate::parallel;
use crate::report::{Check, Report};

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    /// Push the first sample off the locus before verifying.
    pub inject_perturbed: bool,
}

/// Per-point results; NaN marks a quantity that could not be computed.
#[derive(Clone, Debug)]
struct PointMetrics {
    locus: f64,
    hypersurface: f64,
    regular: bool,
    omega: f64,
    constraint: f64,
    control: f64,
    phase: Option<Complex64>,
    pivot: f64,
    chart_consistency: f64,
    base_defined: bool,
    z4: f64,
    bundle: f64,
    error: Option<String>,
}

impl PointMetrics {
    fn failed(locus: f64, hypersurface: f64, error: String) -> Self {
        PointMetrics {
            locus,
            hypersurface,
            regular: false,
            omega: f64::NAN,
            constraint: f64::NAN,
            control: f64::NAN,
            phase: None,
            pivot: f64::NAN,
            chart_consistency: f64::NAN,
            base_defined: false,
            z4: f64::NAN,
            bundle: f64::NAN,
            error: Some(error),
        }
    }
}

struct Context {
    c: CoefficientVector,
    evaluator: VolumeFormEvaluator,
    charts: Vec<HypersurfaceChart>,
}

/// Largest value, NaN if any entry is NaN.
fn nan_max(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, |m: f64, x| {
        if m.is_nan() || x.is_nan() {
            f64::NAN
        } else {
            m.max(x)
        }
    })
}

fn nan_min(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(f64::INFINITY, |m: f64, x| {
        if m.is_nan() || x.is_nan() {
            f64::NAN
        } else {
            m.min(x)
        }
    })
}

/// Residue-form agreement between the two charts with the largest minors.
fn chart_consistency(
    ctx: &Context,
    p: &RealLocusPoint,
    basis: &[[f64; 8]; 3],
) -> slag_core::Result<f64> {
    let eta = p.eta();
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&a, &b| eta[b].abs().total_cmp(&eta[a].abs()));
    let (a, b) = (order[0], order[1]);
    let (from, to) = (&ctx.charts[a], &ctx.charts[b]);
    let f = p.frame();
    let cplx = |v: [f64; 4]| v.map(|x| Complex64::new(x, 0.0));
    let point = from.project(cplx(chart_coords(f, Chart::ALL[a])?.zeta))?;
    let t = [
        cplx(chart_coords_differential(f, &basis[0], Chart::ALL[a])?),
        cplx(chart_coords_differential(f, &basis[1], Chart::ALL[a])?),
        cplx(chart_coords_differential(f, &basis[2], Chart::ALL[a])?),
    ];
    residue_chart_consistency(from, to, &point, &t)
}

fn evaluate(ctx: &Context, frame: &Frame<f64>) -> PointMetrics {
    let (locus, hypersurface) = match locus_residuals(&ctx.c, frame) {
        Ok((p, n)) => ((p - 1.0).abs().max((n - 1.0).abs()), (p - n).abs()),
        Err(e) => return PointMetrics::failed(f64::NAN, f64::NAN, e.to_string()),
    };
    let p = match RealLocusPoint::new(&ctx.c, frame.clone()) {
        Ok(p) => p,
        Err(e) => return PointMetrics::failed(locus, hypersurface, e.to_string()),
    };
    let regular = submersion_check(&ctx.c, &p).is_submersion();
    let basis = match tangent_basis(&ctx.c, &p) {
        Ok(b) => b,
        Err(e) => {
            return PointMetrics {
                regular,
                ..PointMetrics::failed(locus, hypersurface, e.to_string())
            }
        }
    };
    let mut m = PointMetrics {
        regular,
        error: None,
        ..PointMetrics::failed(locus, hypersurface, String::new())
    };
    let mut errors = Vec::new();
    match symplectic_residual(&ctx.c, &p, &basis) {
        Ok(s) => {
            m.omega = s.max_omega;
            m.constraint = s.constraint_residual;
        }
        Err(e) => errors.push(e.to_string()),
    }
    m.control = complexified_control(&p, &basis);
    match ctx.evaluator.phase(&p, &basis) {
        Ok(v) => {
            m.phase = Some(v.value);
            m.pivot = v.pivot_discrepancy;
        }
        Err(e) => errors.push(e.to_string()),
    }
    match chart_consistency(ctx, &p, &basis) {
        Ok(d) => m.chart_consistency = d,
        Err(e) => errors.push(e.to_string()),
    }
    m.base_defined = base_projection(&p).is_ok();
    match z4_coset(&p) {
        Ok(set) => m.z4 = k_closure_residual(&set),
        Err(e) => errors.push(e.to_string()),
    }
    match bundle_projection_consistency(&p) {
        Ok(d) => m.bundle = d,
        Err(e) => errors.push(e.to_string()),
    }
    if !errors.is_empty() {
        m.error = Some(errors.join("; "));
    }
    m
}

/// Moves `f` off the locus while keeping `P = 1`.
fn perturb(c: &CoefficientVector, f: &Frame<f64>) -> Frame<f64> {
    let mut up = *f.u_prime();
    for (k, x) in up.iter_mut().enumerate() {
        *x += 1e-3 * if k % 2 == 0 { 1.0 } else { -1.0 };
    }
    let g = Frame::new(*f.u(), up).expect("small perturbation keeps the frame regular");
    let (p, _) = locus_residuals(c, &g).expect("regular frame");
    let s = p.powf(-0.125);
    Frame::new(f.u().map(|x| x * s), up.map(|x| x * s)).expect("regular frame")
}

/// Runs every locus-level check on `cfg.n` sampled points.
pub fn verify(cfg: &RunConfig, opts: &VerifyOptions) -> Result<Report> {
    let mut report = Report::new("verify", cfg.echo());
    let mut timings = std::mem::take(&mut report.timings);
    let c = &cfg.coefficients;
    let points = timed(&mut timings, "sample", || {
        parallel::sample_locus(c, cfg.n, cfg.seed)
    })?;
    let mut frames: Vec<Frame<f64>> = points.iter().map(|p| p.frame().clone()).collect();
    if opts.inject_perturbed {
        frames[0] = perturb(c, &frames[0]);
        report
            .notes
            .push("sample 0 deliberately moved off the locus".into());
    }
    let ctx = Context {
        c: c.clone(),
        evaluator: VolumeFormEvaluator::new(c),
        charts: Chart::ALL
            .iter()
            .map(|&ch| HypersurfaceChart::new(c, ch))
            .collect(),
    };
    let metrics: Vec<PointMetrics> = timed(&mut timings, "verify", || {
        frames.par_iter().map(|f| evaluate(&ctx, f)).collect()
    });

    let s = cfg.tol_scale;
    let n = metrics.len();
    let max_of = |g: fn(&PointMetrics) -> f64| nan_max(metrics.iter().map(g));
    report.push(Check::bound(
        "points on the normalized locus",
        max_of(|m| m.locus),
        1e-10 * s,
    ));
    report.push(Check::bound(
        "points on the hypersurface",
        max_of(|m| m.hypersurface),
        1e-9 * s,
    ));
    let regular = metrics.iter().filter(|m| m.regular).count();
    report.push(
        Check::flag("submersion rank 2", regular == n)
            .with_detail(format!("{regular}/{n} regular")),
    );
    report.push(Check::bound(
        "tangent vectors annihilate d psi",
        max_of(|m| m.constraint),
        1e-8 * s,
    ));
    report.push(Check::bound(
        "Lagrangian: Fubini-Study form on tangent triples",
        max_of(|m| m.omega),
        1e-9 * s,
    ));
    report.push(Check::above(
        "complexified-direction control",
        nan_min(metrics.iter().map(|m| m.control)),
        1e-3,
    ));
    let phases: Vec<Complex64> = metrics.iter().filter_map(|m| m.phase).collect();
    let spread = if phases.len() == n {
        phase_spread(&phases)
    } else {
        f64::NAN
    };
    report.push(Check::bound("volume form phase spread", spread, 1e-6 * s));
    report.push(Check::bound(
        "volume form pivot independence",
        max_of(|m| m.pivot),
        1e-8 * s,
    ));
    report.push(Check::bound(
        "residue form chart consistency",
        max_of(|m| m.chart_consistency),
        1e-8 * s,
    ));
    let based = metrics.iter().filter(|m| m.base_defined).count();
    report.push(Check::flag("base projection defined", based == n));

    let bundle_claim = c.is_standard();
    let z4 = Check::bound(
        "Z4 coset closed under right multiplication by k",
        max_of(|m| m.z4),
        1e-10 * s,
    );
    let routes = Check::bound(
        "RP2 projection routes agree",
        max_of(|m| m.bundle),
        1e-9 * s,
    );
    if bundle_claim {
        report.push(z4);
        report.push(routes);
    } else {
        report.push(z4.informational().with_detail("structure differs from eq1"));
        report.push(
            routes
                .informational()
                .with_detail("structure differs from eq1"),
        );
        report
            .notes
            .push("no circle-bundle claim is made for this coefficient vector".into());
    }

    report.stat(
        "locus residual",
        &metrics.iter().map(|m| m.locus).collect::<Vec<_>>(),
    );
    report.stat(
        "symplectic residual",
        &metrics.iter().map(|m| m.omega).collect::<Vec<_>>(),
    );
    report.stat(
        "chart consistency",
        &metrics
            .iter()
            .map(|m| m.chart_consistency)
            .collect::<Vec<_>>(),
    );
    let errors: Vec<String> = metrics
        .iter()
        .enumerate()
        .filter_map(|(i, m)| m.error.as_ref().map(|e| format!("point {i}: {e}")))
        .collect();
    if !errors.is_empty() {
        report
            .details
            .insert("errors".into(), serde_json::json!(errors));
    }
    if phases.iter().any(|z| z.is_zero()) {
        report
            .notes
            .push("vanishing volume form value encountered".into());
    }
    report.timings = timings;
    Ok(report)
}
