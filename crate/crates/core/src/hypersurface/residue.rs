//! The holomorphic 3-form on the hypersurface, as the residue of
//! `dz1 ^ dz2 ^ dz3 ^ dz4 / f`.

use num_complex::Complex64;
use rand::Rng;

use super::{ChartSystem, CoefficientVector};
use crate::error::{Error, Result};
use crate::grassmann::{transition, transition_differential, Chart, ChartPoint};
use crate::rng::complex_in_disc;

/// Below this every partial counts as zero.
pub const PIVOT_TOL: f64 = 1e-8;
/// Relative bound on `df(t)` for a tangent vector `t`.
pub const TANGENT_TOL: f64 = 1e-8;

type C = Complex64;

fn vnorm(v: &[C; 4]) -> f64 {
    libm::sqrt(v.iter().map(|x| x.norm_sqr()).sum())
}

/// A point of the hypersurface in one chart, with its cached residual.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HypersurfacePoint {
    chart: Chart,
    zeta: [C; 4],
    residual: f64,
}

impl HypersurfacePoint {
    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn zeta(&self) -> &[C; 4] {
        &self.zeta
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }
}

/// `1e-10 (1 + |zeta|^4 max|c|)`.
fn residual_bound(c: &CoefficientVector, zeta: &[C; 4]) -> f64 {
    let n2 = zeta.iter().map(|x| x.norm_sqr()).sum::<f64>();
    1e-10 * (1.0 + n2 * n2 * c.max_abs())
}

/// The hypersurface `f_c = 0` seen in one chart.
#[derive(Clone, Debug)]
pub struct HypersurfaceChart {
    coefficients: CoefficientVector,
    chart: Chart,
    system: ChartSystem,
}

impl HypersurfaceChart {
    pub fn new(c: &CoefficientVector, chart: Chart) -> Self {
        HypersurfaceChart {
            coefficients: c.clone(),
            chart,
            system: ChartSystem::for_coefficients(c, chart),
        }
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn system(&self) -> &ChartSystem {
        &self.system
    }

    /// Validates that `zeta` lies on the hypersurface.
    pub fn point(&self, zeta: [C; 4]) -> Result<HypersurfacePoint> {
        let residual = self.system.value(&zeta).norm();
        let bound = residual_bound(&self.coefficients, &zeta);
        if !(residual <= bound) {
            return Err(Error::OffHypersurface { residual, bound });
        }
        Ok(HypersurfacePoint {
            chart: self.chart,
            zeta,
            residual,
        })
    }

    /// Newton projection along the conjugate gradient onto `f = 0`.
    pub fn project(&self, start: [C; 4]) -> Result<HypersurfacePoint> {
        let mut z = start;
        for _ in 0..60 {
            let (f, g) = self.system.value_gradient(&z);
            if f.norm() <= 1e-3 * residual_bound(&self.coefficients, &z) {
                break;
            }
            let g2: f64 = g.iter().map(|x| x.norm_sqr()).sum();
            if !(g2 > 0.0) || !g2.is_finite() {
                return Err(Error::NoConvergence(0));
            }
            let s = f / g2;
            for i in 0..4 {
                z[i] -= s * g[i].conj();
            }
        }
        self.point(z).map_err(|_| Error::NoConvergence(60))
    }

    /// A random point from a start uniform in the polydisc of radius `radius`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, radius: f64) -> Result<HypersurfacePoint> {
        for _ in 0..20 {
            let start: [C; 4] = core::array::from_fn(|_| complex_in_disc(rng, radius));
            if let Ok(p) = self.project(start) {
                return Ok(p);
            }
        }
        Err(Error::NoConvergence(20))
    }

    pub fn gradient(&self, p: &HypersurfacePoint) -> [C; 4] {
        self.system.gradient(&p.zeta)
    }

    /// Three tangent vectors spanning the holomorphic tangent space at `p`.
    pub fn tangent_basis(&self, p: &HypersurfacePoint) -> Result<[[C; 4]; 3]> {
        let g = self.gradient(p);
        let piv = pivot(&g)?;
        let others: alloc::vec::Vec<usize> = (0..4).filter(|&k| k != piv).collect();
        Ok(core::array::from_fn(|n| {
            let k = others[n];
            let mut t = [C::new(0.0, 0.0); 4];
            t[k] = C::new(1.0, 0.0);
            t[piv] = -g[k] / g[piv];
            t
        }))
    }

    /// `gamma(t1, t2, t3)` pivoting on the largest partial.
    pub fn residue_form(&self, p: &HypersurfacePoint, t: &[[C; 4]; 3]) -> Result<C> {
        self.check_chart(p)?;
        residue_form(&self.gradient(p), t, None)
    }

    /// `gamma(t1, t2, t3)` with the given pivot variable.
    pub fn residue_form_with_pivot(
        &self,
        p: &HypersurfacePoint,
        t: &[[C; 4]; 3],
        pivot: usize,
    ) -> Result<C> {
        self.check_chart(p)?;
        residue_form(&self.gradient(p), t, Some(pivot))
    }

    fn check_chart(&self, p: &HypersurfacePoint) -> Result<()> {
        if p.chart != self.chart {
            let (i, j) = p.chart.rows();
            return Err(Error::NotInChart(i as u8, j as u8));
        }
        Ok(())
    }
}

fn pivot(g: &[C; 4]) -> Result<usize> {
    let (p, m) = g
        .iter()
        .map(|x| x.norm())
        .enumerate()
        .fold(
            (0, -1.0),
            |best, (i, m)| if m > best.1 { (i, m) } else { best },
        );
    if !(m >= PIVOT_TOL) {
        return Err(Error::SingularPoint(m));
    }
    Ok(p)
}

/// Determinant of four column vectors.
fn det4(cols: [&[C; 4]; 4]) -> C {
    let m = |r: usize, c: usize| cols[c][r];
    let mut det = C::new(0.0, 0.0);
    for c0 in 0..4 {
        let minor = |r: usize, c: usize| {
            let cc = if c < c0 { c } else { c + 1 };
            m(r + 1, cc)
        };
        let d3 = minor(0, 0) * (minor(1, 1) * minor(2, 2) - minor(1, 2) * minor(2, 1))
            - minor(0, 1) * (minor(1, 0) * minor(2, 2) - minor(1, 2) * minor(2, 0))
            + minor(0, 2) * (minor(1, 0) * minor(2, 1) - minor(1, 1) * minor(2, 0));
        let term = m(0, c0) * d3;
        det += if c0 % 2 == 0 { term } else { -term };
    }
    det
}

/// `gamma_p(t1, t2, t3) = det[t1, t2, t3, e_p] / (df/dz_p)` for the gradient `g`.
///
/// Satisfies `gamma ^ df = dz1 ^ dz2 ^ dz3 ^ dz4`; on tangent vectors the value
/// does not depend on the pivot `p`, which defaults to the largest partial.
pub fn residue_form(g: &[C; 4], t: &[[C; 4]; 3], pivot_var: Option<usize>) -> Result<C> {
    let p = pivot(g)?;
    let p = match pivot_var {
        None => p,
        Some(q) if q < 4 => q,
        Some(_) => return Err(Error::InvalidArgument("pivot variable out of range")),
    };
    if g[p].norm() < PIVOT_TOL {
        return Err(Error::SingularPoint(g[p].norm()));
    }
    let gn = vnorm(g);
    for (index, ti) in t.iter().enumerate() {
        let value = g.iter().zip(ti).map(|(a, b)| a * b).sum::<C>().norm()
            / (gn * vnorm(ti)).max(f64::MIN_POSITIVE);
        if !(value <= TANGENT_TOL) {
            return Err(Error::NotTangent { index, value });
        }
    }
    let mut e = [C::new(0.0, 0.0); 4];
    e[p] = C::new(1.0, 0.0);
    Ok(det4([&t[0], &t[1], &t[2], &e]) / g[p])
}

/// Relative discrepancy `|gamma_from - gamma_to| / |gamma_from|` after moving
/// `p` and its tangent triple into the chart of `to`.
pub fn residue_chart_consistency(
    from: &HypersurfaceChart,
    to: &HypersurfaceChart,
    p: &HypersurfacePoint,
    t: &[[C; 4]; 3],
) -> Result<f64> {
    let g0 = from.residue_form(p, t)?;
    let cp = ChartPoint::new(p.chart, p.zeta);
    let q = transition(&cp, to.chart)?;
    let tq: [[C; 4]; 3] = [
        transition_differential(&cp, to.chart, &t[0])?,
        transition_differential(&cp, to.chart, &t[1])?,
        transition_differential(&cp, to.chart, &t[2])?,
    ];
    let q = to.point(q.zeta)?;
    let g1 = to.residue_form(&q, &tq)?;
    Ok((g0 - g1).norm() / g0.norm())
}
