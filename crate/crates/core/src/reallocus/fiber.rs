use alloc::vec::Vec;

use super::{cross, quartic_norm, RealLocusPoint};
use crate::error::{Error, Result};
use crate::grassmann::Frame;
use crate::hypersurface::CoefficientVector;

fn tails(f: &Frame<f64>) -> ([f64; 3], [f64; 3]) {
    let (u, up) = (f.u(), f.u_prime());
    ([u[1], u[2], u[3]], [up[1], up[2], up[3]])
}

/// Unit vector with its first nonzero entry positive.
pub(crate) fn sign_normalize(v: [f64; 3]) -> Result<[f64; 3]> {
    let n = libm::sqrt(v.iter().map(|x| x * x).sum());
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::ZeroVector);
    }
    let v = v.map(|x| x / n);
    let lead = v.iter().find(|x| x.abs() > 1e-12).copied().unwrap_or(1.0);
    Ok(if lead < 0.0 { v.map(|x| -x) } else { v })
}

/// Class of `u0 x u0'` in RP^2, as a sign-normalized unit vector.
pub fn base_projection_frame(f: &Frame<f64>) -> Result<[f64; 3]> {
    let (a, b) = tails(f);
    sign_normalize(cross(&a, &b))
}

pub fn base_projection(p: &RealLocusPoint) -> Result<[f64; 3]> {
    base_projection_frame(p.frame())
}

/// The fiber point at angle `theta` over the base plane spanned by `w, w'`.
pub fn fiber_point(w: &[f64; 3], w_prime: &[f64; 3], theta: f64) -> Result<RealLocusPoint> {
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    let dir: [f64; 3] = core::array::from_fn(|i| c * w[i] - s * w_prime[i]);
    let q = quartic_norm(&dir);
    if !(q > 0.0) {
        return Err(Error::ZeroVector);
    }
    // r^4 q = 1
    let r = libm::pow(q, -0.25);
    let (alpha, alpha_prime) = (r * s, r * c);
    let frame = Frame::new(
        [alpha, w[0], w[1], w[2]],
        [alpha_prime, w_prime[0], w_prime[1], w_prime[2]],
    )?;
    RealLocusPoint::new(&CoefficientVector::standard(), frame)
}

/// `m` points of the standard locus over the base `[w x w']`, at equally
/// spaced angles in `[0, 2 pi)`.
pub fn fiber_samples(w: &[f64; 3], w_prime: &[f64; 3], m: usize) -> Result<Vec<RealLocusPoint>> {
    if m < 3 {
        return Err(Error::InvalidArgument("a fiber needs at least 3 samples"));
    }
    let e2 = quartic_norm(&cross(w, w_prime));
    if !((e2 - 1.0).abs() <= super::LOCUS_TOL) {
        return Err(Error::InvalidArgument(
            "base is not normalized: |w x w'|_4^4 != 1",
        ));
    }
    let step = 2.0 * core::f64::consts::PI / m as f64;
    (0..m)
        .map(|k| fiber_point(w, w_prime, step * k as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reallocus::{canonical_frame, known_frame};

    #[test]
    fn known_base() {
        assert_eq!(
            base_projection_frame(&known_frame()).unwrap(),
            [0.0, 0.0, 1.0]
        );
        let f = Frame::new([0.0, 1.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]);
        assert!(f.is_err() || base_projection_frame(&f.unwrap()).is_err());
    }

    #[test]
    fn theta_zero_is_known_point() {
        let p = fiber_point(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], 0.0).unwrap();
        assert_eq!(p.frame(), &known_frame());
    }

    #[test]
    fn fiber_shares_base_and_closes() {
        let s = libm::pow(2.0, -0.25);
        let (w, wp) = ([1.0, 1.0, 0.0], [0.0, s, 0.0]);
        let wp = {
            // rescale so that |w x w'|_4^4 = 1
            let q = quartic_norm(&cross(&w, &wp));
            wp.map(|x| x * libm::pow(q, -0.25))
        };
        let pts = fiber_samples(&w, &wp, 16).unwrap();
        let b0 = base_projection(&pts[0]).unwrap();
        for p in &pts {
            let b = base_projection(p).unwrap();
            assert!(b.iter().zip(&b0).all(|(x, y)| (x - y).abs() < 1e-10));
        }
        let c = CoefficientVector::standard();
        let end = fiber_point(&w, &wp, 2.0 * core::f64::consts::PI).unwrap();
        let a = canonical_frame(&c, pts[0].frame()).unwrap().coordinates();
        let b = canonical_frame(&c, end.frame()).unwrap().coordinates();
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-9));
    }

    #[test]
    fn unnormalized_base_rejected() {
        assert!(fiber_samples(&[2.0, 0.0, 0.0], &[0.0, 1.0, 0.0], 8).is_err());
        assert!(fiber_samples(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], 2).is_err());
    }
}
