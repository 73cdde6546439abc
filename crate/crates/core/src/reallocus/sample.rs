use alloc::vec::Vec;

use super::{locus_residuals, tangent::psi_jacobian, RealLocusPoint, LOCUS_TOL};
use crate::error::{Error, Result};
use crate::grassmann::{pluecker, Frame};
use crate::hypersurface::CoefficientVector;
use crate::rng::{normal, stream_id, substream, StreamRng};

/// Stream tag of locus samples.
pub const LOCUS_TAG: u16 = 0x4c00;
const MAX_ITER: usize = 100;
const REDRAWS: usize = 10;

fn scale_frame(x: &[f64; 8], s: f64) -> [f64; 8] {
    x.map(|v| v * s)
}

fn residual(c: &CoefficientVector, x: &[f64; 8]) -> Option<[f64; 2]> {
    let f = Frame::from_coordinates(x).ok()?;
    let (p, n) = locus_residuals(c, &f).ok()?;
    Some([p - 1.0, n - 1.0])
}

fn rnorm(r: &[f64; 2]) -> f64 {
    libm::hypot(r[0], r[1])
}

/// Least-norm Newton on `(P - 1, N - 1)` from `x`.
fn project(c: &CoefficientVector, mut x: [f64; 8]) -> Option<[f64; 8]> {
    let mut r = residual(c, &x)?;
    for _ in 0..MAX_ITER {
        if r[0].abs() <= 1e-3 * LOCUS_TOL && r[1].abs() <= 1e-3 * LOCUS_TOL {
            return Some(x);
        }
        let f = Frame::from_coordinates(&x).ok()?;
        // Rows of psi_jacobian are (N, P).
        let [jn, jp] = psi_jacobian(c, &f);
        let j = [jp, jn];
        let dot = |a: &[f64; 8], b: &[f64; 8]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let (a, b, d) = (dot(&j[0], &j[0]), dot(&j[0], &j[1]), dot(&j[1], &j[1]));
        let det = a * d - b * b;
        if !(det.abs() > 1e-14 * (a * d).max(f64::MIN_POSITIVE)) {
            return None;
        }
        let y = [(d * r[0] - b * r[1]) / det, (a * r[1] - b * r[0]) / det];
        let delta: [f64; 8] = core::array::from_fn(|k| -(j[0][k] * y[0] + j[1][k] * y[1]));
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial: [f64; 8] = core::array::from_fn(|k| x[k] + t * delta[k]);
            if let Some(rt) = residual(c, &trial) {
                if rnorm(&rt) < rnorm(&r) {
                    x = trial;
                    r = rt;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (r[0].abs() <= LOCUS_TOL && r[1].abs() <= LOCUS_TOL).then_some(x)
}

fn draw(c: &CoefficientVector, rng: &mut StreamRng) -> Option<RealLocusPoint> {
    let x: [f64; 8] = core::array::from_fn(|_| normal(rng));
    let f = Frame::from_coordinates(&x).ok()?;
    let (p, _) = locus_residuals(c, &f).ok()?;
    if !(p > 0.0) {
        return None;
    }
    let x = project(c, scale_frame(&x, libm::pow(p, -0.125)))?;
    RealLocusPoint::new(c, Frame::from_coordinates(&x).ok()?).ok()
}

/// Locus sample number `index`; depends only on `(c, seed, index)`.
pub fn sample_point(c: &CoefficientVector, seed: u64, index: u64) -> Result<RealLocusPoint> {
    let mut rng = substream(seed, stream_id(LOCUS_TAG, index));
    (0..REDRAWS)
        .find_map(|_| draw(c, &mut rng))
        .ok_or(Error::NoConvergence(REDRAWS))
}

pub fn sample_locus(c: &CoefficientVector, n: usize, seed: u64) -> Result<Vec<RealLocusPoint>> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1"));
    }
    (0..n as u64).map(|i| sample_point(c, seed, i)).collect()
}

/// The canonical frame of the plane of `f`: orthonormal, `u` along the
/// projection of the coordinate axis closest to the plane, the Pluecker
/// vector's first nonzero entry positive, scaled to `P = 1`.
pub fn canonical_frame(c: &CoefficientVector, f: &Frame<f64>) -> Result<Frame<f64>> {
    let norm = |v: &[f64; 4]| libm::sqrt(v.iter().map(|x| x * x).sum());
    let n0 = norm(f.u());
    if !(n0 > 0.0) {
        return Err(Error::DegenerateFrame);
    }
    let e1 = f.u().map(|x| x / n0);
    let proj: f64 = e1.iter().zip(f.u_prime()).map(|(a, b)| a * b).sum();
    let r: [f64; 4] = core::array::from_fn(|k| f.u_prime()[k] - proj * e1[k]);
    let n1 = norm(&r);
    if !(n1 > 1e-12 * norm(f.u_prime())) {
        return Err(Error::DegenerateFrame);
    }
    let e2 = r.map(|x| x / n1);
    let diag: [f64; 4] = core::array::from_fn(|k| e1[k] * e1[k] + e2[k] * e2[k]);
    let k = (0..4).fold(0, |best, i| if diag[i] > diag[best] { i } else { best });
    let s = libm::sqrt(diag[k]);
    let (a, b) = (e1[k] / s, e2[k] / s);
    let u: [f64; 4] = core::array::from_fn(|i| a * e1[i] + b * e2[i]);
    let mut up: [f64; 4] = core::array::from_fn(|i| -b * e1[i] + a * e2[i]);
    let eta = pluecker(&Frame::new(u, up)?)?;
    let max = eta.eta().iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let lead = eta
        .eta()
        .iter()
        .find(|x| x.abs() > 1e-8 * max)
        .copied()
        .unwrap_or(1.0);
    if lead < 0.0 {
        up = up.map(|x| -x);
    }
    let g = Frame::new(u, up)?;
    let (p, _) = locus_residuals(c, &g)?;
    if !(p > 0.0) {
        return Err(Error::InvalidArgument(
            "positive part vanishes on this plane",
        ));
    }
    let t = libm::pow(p, -0.125);
    Frame::new(u.map(|x| x * t), up.map(|x| x * t))
}

/// The canonical representative of the class of `p`.
pub fn canonicalize(c: &CoefficientVector, p: &RealLocusPoint) -> Result<RealLocusPoint> {
    RealLocusPoint::new(c, canonical_frame(c, p.frame())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::frame_action;
    use crate::hypersurface::{eval_f, Preset};
    use crate::reallocus::known_frame;
    use rand::Rng;

    fn max_diff(a: &Frame<f64>, b: &Frame<f64>) -> f64 {
        a.coordinates()
            .iter()
            .zip(b.coordinates())
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn samples_lie_on_locus_and_hypersurface() {
        for preset in Preset::ALL {
            let c = CoefficientVector::preset(preset);
            let pts = sample_locus(&c, 30, 5).unwrap();
            assert_eq!(pts.len(), 30);
            for p in &pts {
                assert!(p.max_residual() < 1e-10);
                assert!(eval_f(&c, p.frame()).unwrap().abs() < 1e-9);
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let c = CoefficientVector::standard();
        assert_eq!(
            sample_locus(&c, 5, 9).unwrap(),
            sample_locus(&c, 5, 9).unwrap()
        );
        assert_eq!(
            sample_point(&c, 9, 3).unwrap(),
            sample_locus(&c, 5, 9).unwrap()[3]
        );
    }

    #[test]
    fn canonicalization_is_orbit_invariant() {
        let c = CoefficientVector::standard();
        let mut rng = substream(41, 0);
        for p in sample_locus(&c, 40, 2).unwrap() {
            let base = canonical_frame(&c, p.frame()).unwrap();
            let m: [f64; 4] = core::array::from_fn(|_| rng.random_range(-2.0..2.0));
            let Ok(g) = frame_action(p.frame(), &m[0], &m[1], &m[2], &m[3]) else {
                continue;
            };
            assert!(max_diff(&canonical_frame(&c, &g).unwrap(), &base) < 1e-9);
        }
    }

    #[test]
    fn swap_and_idempotence() {
        let c = CoefficientVector::standard();
        let p = RealLocusPoint::new(&c, known_frame()).unwrap();
        let q = canonicalize(&c, &p).unwrap();
        let swapped =
            RealLocusPoint::new(&c, frame_action(p.frame(), &0.0, &1.0, &1.0, &0.0).unwrap())
                .unwrap();
        assert!(max_diff(canonicalize(&c, &swapped).unwrap().frame(), q.frame()) < 1e-12);
        assert!(max_diff(canonicalize(&c, &q).unwrap().frame(), q.frame()) < 1e-12);
        assert!(q.eta().iter().find(|x| x.abs() > 1e-9).unwrap() > &0.0);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(sample_locus(&CoefficientVector::standard(), 0, 1).is_err());
    }
}
