use alloc::vec::Vec;

use nalgebra::SMatrix;
use num_complex::Complex64;

use super::RealLocusPoint;
use crate::error::{Error, Result};
use crate::grassmann::{
    chart_coords, chart_coords_differential, pluecker, pluecker_differential, Chart, Frame, PAIRS,
};
use crate::hypersurface::{CoefficientVector, HypersurfaceChart};

type C = Complex64;

/// Relative threshold on the second singular value of `d psi`.
const RANK_TOL: f64 = 1e-8;

fn unit(k: usize) -> [f64; 8] {
    let mut e = [0.0; 8];
    e[k] = 1.0;
    e
}

/// Rows `d N` and `d P` with respect to the eight frame coordinates.
pub(crate) fn psi_jacobian(c: &CoefficientVector, f: &Frame<f64>) -> [[f64; 8]; 2] {
    let eta: [f64; 6] = core::array::from_fn(|a| f.minor(PAIRS[a].0, PAIRS[a].1));
    let cf = c.to_f64();
    let mut j = [[0.0; 8]; 2];
    for k in 0..8 {
        let d = pluecker_differential(f, &unit(k));
        for a in 0..6 {
            let row = if cf[a] > 0.0 { 1 } else { 0 };
            j[row][k] += 4.0 * cf[a].abs() * eta[a] * eta[a] * eta[a] * d[a];
        }
    }
    j
}

/// Rank of `d psi` at a frame, `psi = (N, P)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubmersionReport {
    pub frame: Frame<f64>,
    pub jacobian: [[f64; 8]; 2],
    /// Descending.
    pub singular_values: [f64; 2],
    pub rank: usize,
}

impl SubmersionReport {
    pub fn is_submersion(&self) -> bool {
        self.rank == 2
    }
}

pub fn submersion_check_frame(c: &CoefficientVector, f: &Frame<f64>) -> SubmersionReport {
    let j = psi_jacobian(c, f);
    let dot = |a: &[f64; 8], b: &[f64; 8]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let (a, b, d) = (dot(&j[0], &j[0]), dot(&j[0], &j[1]), dot(&j[1], &j[1]));
    // Eigenvalues of the 2x2 Gram matrix.
    let mean = 0.5 * (a + d);
    let rad = libm::hypot(0.5 * (a - d), b);
    let s1 = libm::sqrt(mean + rad);
    let s2 = libm::sqrt((a * d - b * b).max(0.0) / (mean + rad).max(f64::MIN_POSITIVE));
    let rank = if s1 == 0.0 {
        0
    } else if s2 > RANK_TOL * s1 {
        2
    } else {
        1
    };
    SubmersionReport {
        frame: f.clone(),
        jacobian: j,
        singular_values: [s1, s2],
        rank,
    }
}

pub fn submersion_check(c: &CoefficientVector, p: &RealLocusPoint) -> SubmersionReport {
    submersion_check_frame(c, p.frame())
}

/// Orthonormal basis of the directions in `ker d psi` orthogonal to the
/// unimodular orbit directions `(u, -u')`, `(0, u)` and `(u', 0)`.
pub fn tangent_basis(c: &CoefficientVector, p: &RealLocusPoint) -> Result<[[f64; 8]; 3]> {
    let f = p.frame();
    let j = psi_jacobian(c, f);
    let (u, up) = (f.u(), f.u_prime());
    let orbit: [[f64; 8]; 3] = [
        core::array::from_fn(|k| if k < 4 { u[k] } else { -up[k - 4] }),
        core::array::from_fn(|k| if k < 4 { 0.0 } else { u[k - 4] }),
        core::array::from_fn(|k| if k < 4 { up[k] } else { 0.0 }),
    ];
    let mut m = SMatrix::<f64, 8, 8>::zeros();
    for (r, row) in j.iter().chain(orbit.iter()).enumerate() {
        let n = libm::sqrt(row.iter().map(|x| x * x).sum());
        if !(n > 0.0) {
            return Err(Error::RankDeficient {
                expected: 5,
                found: r,
            });
        }
        for k in 0..8 {
            m[(r, k)] = row[k] / n;
        }
    }
    let svd = m.svd(false, true);
    let vt = svd.v_t.ok_or(Error::RankDeficient {
        expected: 5,
        found: 0,
    })?;
    let mut order: Vec<usize> = (0..8).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let s = |i: usize| svd.singular_values[order[i]];
    let rank = (0..8).filter(|&i| s(i) > RANK_TOL * s(0)).count();
    if rank != 5 {
        return Err(Error::RankDeficient {
            expected: 5,
            found: rank,
        });
    }
    Ok(core::array::from_fn(|n| {
        core::array::from_fn(|k| vt[(order[5 + n], k)])
    }))
}

/// Lagrangian test data at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticCheck {
    pub max_omega: f64,
    /// Largest `|d psi(t)|` relative to `|d psi|`.
    pub constraint_residual: f64,
}

/// Fubini-Study form of P^5 at `eta` on two tangent vectors.
fn fubini_study(eta: &[C; 6], x: &[C; 6], y: &[C; 6]) -> f64 {
    let herm = |a: &[C; 6], b: &[C; 6]| a.iter().zip(b).map(|(p, q)| p * q.conj()).sum::<C>();
    let n2 = herm(eta, eta).re;
    let h = (herm(x, y) * n2 - herm(x, eta) * herm(eta, y)) / (n2 * n2);
    -h.im
}

/// Largest `|omega(x_i, x_j)|` over pairs of Pluecker-space vectors at `eta`.
pub fn symplectic_residual_complex(eta: &[C; 6], vectors: &[[C; 6]]) -> f64 {
    let mut m = 0.0f64;
    for i in 0..vectors.len() {
        for j in i..vectors.len() {
            m = m.max(fubini_study(eta, &vectors[i], &vectors[j]).abs());
        }
    }
    m
}

fn to_complex<const N: usize>(v: &[f64; N]) -> [C; N] {
    v.map(|x| C::new(x, 0.0))
}

pub fn symplectic_residual(
    c: &CoefficientVector,
    p: &RealLocusPoint,
    basis: &[[f64; 8]; 3],
) -> Result<SymplecticCheck> {
    let f = p.frame();
    let j = psi_jacobian(c, f);
    let jn = libm::sqrt(j.iter().flatten().map(|x| x * x).sum());
    let mut constraint_residual = 0.0f64;
    let mut images = Vec::with_capacity(3);
    for t in basis {
        let tn = libm::sqrt(t.iter().map(|x| x * x).sum());
        if !(tn > 0.0) {
            return Err(Error::ZeroVector);
        }
        for row in &j {
            let v: f64 = row.iter().zip(t).map(|(a, b)| a * b).sum();
            constraint_residual = constraint_residual.max(v.abs() / (jn * tn));
        }
        images.push(to_complex(&pluecker_differential(f, t)));
    }
    let eta = to_complex(p.eta());
    Ok(SymplecticCheck {
        max_omega: symplectic_residual_complex(&eta, &images),
        constraint_residual,
    })
}

/// The same residual after replacing the second tangent image by `i d eta(t1)`.
pub fn complexified_control(p: &RealLocusPoint, basis: &[[f64; 8]; 3]) -> f64 {
    let f = p.frame();
    let d0 = to_complex(&pluecker_differential(f, &basis[0]));
    let d2 = to_complex(&pluecker_differential(f, &basis[2]));
    let rotated = d0.map(|x| x * C::i());
    symplectic_residual_complex(&to_complex(p.eta()), &[d0, rotated, d2])
}

/// The restricted holomorphic volume form on one tangent triple.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumePhase {
    pub chart: Chart,
    pub value: C,
    /// `|Im z| / |z|`.
    pub deviation: f64,
    /// Relative change of the value when pivoting on the second largest partial.
    pub pivot_discrepancy: f64,
}

/// Residue-form evaluation on all six charts of one hypersurface.
#[derive(Clone, Debug)]
pub struct VolumeFormEvaluator {
    coefficients: CoefficientVector,
    charts: Vec<HypersurfaceChart>,
}

impl VolumeFormEvaluator {
    pub fn new(c: &CoefficientVector) -> Self {
        VolumeFormEvaluator {
            coefficients: c.clone(),
            charts: Chart::ALL
                .iter()
                .map(|&ch| HypersurfaceChart::new(c, ch))
                .collect(),
        }
    }

    pub fn coefficients(&self) -> &CoefficientVector {
        &self.coefficients
    }

    pub fn phase(&self, p: &RealLocusPoint, basis: &[[f64; 8]; 3]) -> Result<VolumePhase> {
        let eta = pluecker(p.frame())?;
        let a = (0..6).fold(0, |b, i| {
            if eta.eta()[i].abs() > eta.eta()[b].abs() {
                i
            } else {
                b
            }
        });
        let chart = Chart::ALL[a];
        let hc = &self.charts[a];
        let f = p.frame();
        let zeta = chart_coords(f, chart)?.zeta;
        let point = hc.project(to_complex(&zeta))?;
        let t: [[C; 4]; 3] = [
            to_complex(&chart_coords_differential(f, &basis[0], chart)?),
            to_complex(&chart_coords_differential(f, &basis[1], chart)?),
            to_complex(&chart_coords_differential(f, &basis[2], chart)?),
        ];
        let value = hc.residue_form(&point, &t)?;
        let g = hc.gradient(&point);
        let mut idx = [0usize, 1, 2, 3];
        idx.sort_by(|&x, &y| g[y].norm().total_cmp(&g[x].norm()));
        let other = hc.residue_form_with_pivot(&point, &t, idx[1])?;
        Ok(VolumePhase {
            chart,
            value,
            deviation: value.im.abs() / value.norm(),
            pivot_discrepancy: (other - value).norm() / value.norm(),
        })
    }
}

/// Convenience wrapper building the evaluator for a single call.
pub fn volume_form_phase(
    c: &CoefficientVector,
    p: &RealLocusPoint,
    basis: &[[f64; 8]; 3],
) -> Result<VolumePhase> {
    VolumeFormEvaluator::new(c).phase(p, basis)
}

/// Largest deviation of the lines `R z` from their median line, in radians.
pub fn phase_spread(values: &[C]) -> f64 {
    let pi = core::f64::consts::PI;
    let Some(first) = values.first() else {
        return 0.0;
    };
    let reference = first.arg();
    let wrap = |x: f64| {
        let mut y = libm::fmod(x, pi);
        if y > 0.5 * pi {
            y -= pi;
        } else if y <= -0.5 * pi {
            y += pi;
        }
        y
    };
    let mut offsets: Vec<f64> = values.iter().map(|z| wrap(z.arg() - reference)).collect();
    offsets.sort_by(f64::total_cmp);
    let median = offsets[offsets.len() / 2];
    offsets
        .iter()
        .fold(0.0, |m, &o| m.max(wrap(o - median).abs()))
}
