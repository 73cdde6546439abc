use core::fmt::Debug;
use core::ops::Neg;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

/// Relative threshold below which floating minors count as zero.
pub const FLOAT_ZERO_TOL: f64 = 1e-12;

/// Scalar kinds a frame can carry: exact rationals, reals and complex doubles.
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> {
    /// Exact scalars decide zero-ness exactly; floating ones use a tolerance.
    const EXACT: bool;

    fn modulus(&self) -> f64;

    fn from_rational(q: &BigRational) -> Self;

    /// Zero test relative to `scale` (ignored for exact scalars).
    fn is_negligible(&self, scale: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.modulus() <= FLOAT_ZERO_TOL * scale
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn modulus(&self) -> f64 {
        self.to_f64().map(libm::fabs).unwrap_or(f64::INFINITY)
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn modulus(&self) -> f64 {
        libm::fabs(*self)
    }

    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn modulus(&self) -> f64 {
        libm::hypot(self.re, self.im)
    }

    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

/// Euclidean norm of a slice of scalars, in double precision.
pub fn norm<T: Scalar>(v: &[T]) -> f64 {
    libm::sqrt(v.iter().map(|x| x.modulus() * x.modulus()).sum())
}
