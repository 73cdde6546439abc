//! The real locus: normalized real planes with `P = N = 1`, where `P` and `N`
//! collect the positive and negative terms of `sum_a c_a eta_a^4`.

mod fiber;
mod sample;
mod tangent;

pub use fiber::{base_projection, base_projection_frame, fiber_point, fiber_samples};
pub use sample::{canonical_frame, canonicalize, sample_locus, sample_point, LOCUS_TAG};
pub use tangent::{
    complexified_control, phase_spread, submersion_check, submersion_check_frame,
    symplectic_residual, symplectic_residual_complex, tangent_basis, volume_form_phase,
    SubmersionReport, SymplecticCheck, VolumeFormEvaluator, VolumePhase,
};

use crate::error::{Error, Result};
use crate::grassmann::{pluecker, Frame, PlueckerPoint};
use crate::hypersurface::CoefficientVector;
use crate::scalar::Scalar;

/// Bound on `|P - 1|` and `|N - 1|` for points of the locus.
pub const LOCUS_TOL: f64 = 1e-10;

/// `v1^4 + v2^4 + v3^4`.
pub fn quartic_norm<T: Scalar>(v: &[T; 3]) -> T {
    v.iter().fold(T::zero(), |acc, x| {
        let x2 = x.clone() * x.clone();
        acc + x2.clone() * x2
    })
}

pub fn cross<T: Scalar>(a: &[T; 3], b: &[T; 3]) -> [T; 3] {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

/// `(|u0 x u0'|_4^4, |alpha' u0 - alpha u0'|_4^4)`.
pub fn psi<T: Scalar>(alpha: &T, u0: &[T; 3], alpha_prime: &T, u0_prime: &[T; 3]) -> (T, T) {
    let diff: [T; 3] = core::array::from_fn(|i| {
        alpha_prime.clone() * u0[i].clone() - alpha.clone() * u0_prime[i].clone()
    });
    (quartic_norm(&cross(u0, u0_prime)), quartic_norm(&diff))
}

/// `psi` on a frame, splitting each vector as `(alpha, u0)`.
pub fn psi_frame<T: Scalar>(f: &Frame<T>) -> (T, T) {
    let (u, up) = (f.u(), f.u_prime());
    let tail = |v: &[T; 4]| [v[1].clone(), v[2].clone(), v[3].clone()];
    psi(&u[0], &tail(u), &up[0], &tail(up))
}

/// `(P, N)` from raw Pluecker coordinates.
pub fn split_quartic<T: Scalar>(c: &CoefficientVector, eta: &[T; 6]) -> (T, T) {
    let mut p = T::zero();
    let mut n = T::zero();
    for (a, e) in eta.iter().enumerate() {
        let e2 = e.clone() * e.clone();
        let q = e2.clone() * e2;
        let ca = T::from_rational(&c.values()[a]);
        if c.is_positive(a) {
            p = p + ca * q;
        } else {
            n = n - ca * q;
        }
    }
    (p, n)
}

/// `(P, N)` at the Pluecker point of `f`.
pub fn locus_residuals<T: Scalar>(c: &CoefficientVector, f: &Frame<T>) -> Result<(T, T)> {
    Ok(split_quartic(c, pluecker(f)?.eta()))
}

/// A real frame on the normalized locus `P = N = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealLocusPoint {
    frame: Frame<f64>,
    eta: PlueckerPoint<f64>,
    p_residual: f64,
    n_residual: f64,
}

impl RealLocusPoint {
    pub fn new(c: &CoefficientVector, frame: Frame<f64>) -> Result<Self> {
        let eta = pluecker(&frame)?;
        let (p, n) = split_quartic(c, eta.eta());
        let (p_residual, n_residual) = ((p - 1.0).abs(), (n - 1.0).abs());
        if !(p_residual <= LOCUS_TOL && n_residual <= LOCUS_TOL) {
            return Err(Error::OffLocus {
                p: p_residual,
                n: n_residual,
            });
        }
        Ok(RealLocusPoint {
            frame,
            eta,
            p_residual,
            n_residual,
        })
    }

    pub fn frame(&self) -> &Frame<f64> {
        &self.frame
    }

    pub fn eta(&self) -> &[f64; 6] {
        self.eta.eta()
    }

    /// `|P - 1|`.
    pub fn p_residual(&self) -> f64 {
        self.p_residual
    }

    /// `|N - 1|`.
    pub fn n_residual(&self) -> f64 {
        self.n_residual
    }

    pub fn max_residual(&self) -> f64 {
        self.p_residual.max(self.n_residual)
    }
}

/// The frame `(0,1,0,0), (1,0,1,0)` with `eta = (-1,0,0,1,0,0)`.
pub fn known_frame() -> Frame<f64> {
    Frame::new([0.0, 1.0, 0.0, 0.0], [1.0, 0.0, 1.0, 0.0]).expect("independent vectors")
}
