//! Multistart Newton search for points with `f = 0` and `grad f = 0`.
//!
//! An empty witness list is evidence of smoothness in the sampled polydisc,
//! not a proof.

use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use super::{ChartSystem, CoefficientVector};
use crate::error::{Error, Result};
use crate::exactpoly::Polynomial;
use crate::grassmann::Chart;
use crate::rng::{complex_in_disc, stream_id, substream};

/// Stream tag of start points; the chart index is added so charts draw independently.
const START_TAG: u16 = 0x5300;
/// Witnesses closer than this are the same point.
const DISTINCT_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchSettings {
    pub radius: f64,
    pub max_iter: usize,
    pub tol: f64,
    pub max_halvings: usize,
}

impl Default for SearchSettings {
    fn default() -> Self {
        SearchSettings {
            radius: 2.0,
            max_iter: 100,
            tol: 1e-10,
            max_halvings: 40,
        }
    }
}

/// Final state of one Newton run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StartOutcome {
    pub index: u64,
    pub zeta: [Complex64; 4],
    pub value: f64,
    pub gradient: f64,
    pub iterations: usize,
}

impl StartOutcome {
    /// `sqrt(|f|^2 + |grad f|^2)`.
    pub fn joint_residual(&self) -> f64 {
        libm::hypot(self.value, self.gradient)
    }

    pub fn is_witness(&self, tol: f64) -> bool {
        self.value < tol && self.gradient < tol && self.joint_residual() < tol
    }
}

/// A critical point of the hypersurface found by the search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Witness {
    pub start: u64,
    pub zeta: [Complex64; 4],
    pub value: f64,
    pub gradient: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmoothnessReport {
    pub chart: String,
    pub n_starts: usize,
    /// Starts that ended on a point of the joint system.
    pub converged: usize,
    pub witnesses: Vec<Witness>,
    /// Witnesses up to [`DISTINCT_TOL`].
    pub distinct_witnesses: usize,
    pub residual_min: f64,
    pub residual_median: f64,
    pub residual_max: f64,
}

impl SmoothnessReport {
    /// Collects per-start outcomes, which must be ordered by start index.
    pub fn assemble(chart: String, outcomes: &[StartOutcome], tol: f64) -> Self {
        let witnesses: Vec<Witness> = outcomes
            .iter()
            .filter(|o| o.is_witness(tol))
            .map(|o| Witness {
                start: o.index,
                zeta: o.zeta,
                value: o.value,
                gradient: o.gradient,
            })
            .collect();
        let mut reps: Vec<[Complex64; 4]> = Vec::new();
        for w in &witnesses {
            if !reps.iter().any(|r| distance(r, &w.zeta) < DISTINCT_TOL) {
                reps.push(w.zeta);
            }
        }
        let mut res: Vec<f64> = outcomes.iter().map(StartOutcome::joint_residual).collect();
        res.sort_by(f64::total_cmp);
        let (lo, med, hi) = match res.len() {
            0 => (f64::NAN, f64::NAN, f64::NAN),
            n => (res[0], res[n / 2], res[n - 1]),
        };
        SmoothnessReport {
            chart,
            n_starts: outcomes.len(),
            converged: witnesses.len(),
            distinct_witnesses: reps.len(),
            witnesses,
            residual_min: lo,
            residual_median: med,
            residual_max: hi,
        }
    }

    pub fn is_clean(&self) -> bool {
        self.witnesses.is_empty()
    }
}

fn distance(a: &[Complex64; 4], b: &[Complex64; 4]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum())
}

/// The start point with the given index, uniform in the polydisc.
pub fn start_point(seed: u64, tag: u16, index: u64, radius: f64) -> [Complex64; 4] {
    let mut rng = substream(seed, stream_id(tag, index));
    core::array::from_fn(|_| complex_in_disc(&mut rng, radius))
}

/// Stream tag used for the starts of `chart`.
pub fn chart_tag(chart: Chart) -> u16 {
    let idx = Chart::ALL.iter().position(|&c| c == chart).unwrap_or(0);
    START_TAG + idx as u16
}

fn merit(sys: &ChartSystem, z: &[Complex64; 4]) -> f64 {
    let (f, g) = sys.value_gradient(z);
    f.norm_sqr() + g.iter().map(|x| x.norm_sqr()).sum::<f64>()
}

/// Gauss-Newton with step halving on the five holomorphic equations
/// `f = 0, grad f = 0`; the complex normal equations are the real
/// least-squares normal equations of the realified system.
pub fn newton_critical(
    sys: &ChartSystem,
    start: [Complex64; 4],
    settings: &SearchSettings,
) -> StartOutcome {
    let mut z = start;
    let mut phi = merit(sys, &z);
    let mut iterations = 0;
    let floor = (settings.tol * 1e-3) * (settings.tol * 1e-3);
    while iterations < settings.max_iter && phi.is_finite() && phi > floor {
        iterations += 1;
        let jet = sys.jet(&z);
        // Rows: grad f, then the Hessian.
        let mut a = Matrix4::<Complex64>::zeros();
        let mut b = Vector4::<Complex64>::zeros();
        for i in 0..4 {
            for j in 0..4 {
                let mut s = jet.gradient[i].conj() * jet.gradient[j];
                for k in 0..4 {
                    s += jet.hessian[k][i].conj() * jet.hessian[k][j];
                }
                a[(i, j)] = s;
            }
            let mut s = jet.gradient[i].conj() * jet.value;
            for k in 0..4 {
                s += jet.hessian[k][i].conj() * jet.gradient[k];
            }
            b[i] = -s;
        }
        let Some(delta) = solve(a, b) else { break };
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=settings.max_halvings {
            let trial: [Complex64; 4] = core::array::from_fn(|i| z[i] + delta[i] * t);
            let p = merit(sys, &trial);
            if p < phi {
                z = trial;
                phi = p;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted || distance(&z, &[Complex64::new(0.0, 0.0); 4]) > 1e6 {
            break;
        }
    }
    let (f, g) = sys.value_gradient(&z);
    StartOutcome {
        index: 0,
        zeta: z,
        value: f.norm(),
        gradient: libm::sqrt(g.iter().map(|x| x.norm_sqr()).sum()),
        iterations,
    }
}

fn solve(a: Matrix4<Complex64>, b: Vector4<Complex64>) -> Option<Vector4<Complex64>> {
    let finite = |v: &Vector4<Complex64>| v.iter().all(|x| x.re.is_finite() && x.im.is_finite());
    if let Some(x) = a.lu().solve(&b).filter(finite) {
        return Some(x);
    }
    let trace: f64 = (0..4).map(|i| a[(i, i)].re).sum();
    let mu = Complex64::new(1e-12 * trace.max(1e-300), 0.0);
    let damped = a + Matrix4::from_diagonal_element(mu);
    damped.lu().solve(&b).filter(finite)
}

/// Runs start `index` of a search.
pub fn run_start(
    sys: &ChartSystem,
    seed: u64,
    tag: u16,
    index: u64,
    settings: &SearchSettings,
) -> StartOutcome {
    let start = start_point(seed, tag, index, settings.radius);
    StartOutcome {
        index,
        ..newton_critical(sys, start, settings)
    }
}

/// Sequential multistart search for singular points of `f_c` in `chart`.
pub fn smoothness_search(
    c: &CoefficientVector,
    chart: Chart,
    n_starts: usize,
    seed: u64,
) -> Result<SmoothnessReport> {
    if n_starts == 0 {
        return Err(Error::InvalidArgument("n_starts must be at least 1"));
    }
    let sys = ChartSystem::for_coefficients(c, chart);
    Ok(search_system(
        &sys,
        alloc::format!("{chart}"),
        chart_tag(chart),
        n_starts,
        seed,
        &SearchSettings::default(),
    ))
}

/// The same search for an arbitrary polynomial in four variables.
pub fn smoothness_search_polynomial(
    g: &Polynomial,
    n_starts: usize,
    seed: u64,
) -> Result<SmoothnessReport> {
    if n_starts == 0 {
        return Err(Error::InvalidArgument("n_starts must be at least 1"));
    }
    let sys = ChartSystem::new(g)?;
    Ok(search_system(
        &sys,
        alloc::format!("{g}"),
        START_TAG - 1,
        n_starts,
        seed,
        &SearchSettings::default(),
    ))
}

fn search_system(
    sys: &ChartSystem,
    label: String,
    tag: u16,
    n_starts: usize,
    seed: u64,
    settings: &SearchSettings,
) -> SmoothnessReport {
    let outcomes: Vec<StartOutcome> = (0..n_starts as u64)
        .map(|i| run_start(sys, seed, tag, i, settings))
        .collect();
    SmoothnessReport::assemble(label, &outcomes, settings.tol)
}
