use core::fmt;
use core::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactpoly::int;

/// Coefficients `(c_0, .., c_5)` of `sum_a c_a eta_a^4`, ordered as the
/// Pluecker coordinates. All nonzero, with both signs present so that the
/// real locus can be nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientVector([BigRational; 6]);

/// Named coefficient vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `(1, 1, 1, -1, -1, -1)`
    Eq1,
    /// `(1, -1, -1, -1, -1, -2)`
    Eq7,
    /// `(1, 1, -1, -2, -2, -2)`
    Eq8,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Eq1, Preset::Eq7, Preset::Eq8];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Eq1 => "eq1",
            Preset::Eq7 => "eq7",
            Preset::Eq8 => "eq8",
        }
    }

    fn values(self) -> [i64; 6] {
        match self {
            Preset::Eq1 => [1, 1, 1, -1, -1, -1],
            Preset::Eq7 => [1, -1, -1, -1, -1, -2],
            Preset::Eq8 => [1, 1, -1, -2, -2, -2],
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or(Error::InvalidArgument(
                "unknown preset (expected eq1, eq7 or eq8)",
            ))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl CoefficientVector {
    pub fn new(c: [BigRational; 6]) -> Result<Self> {
        if c.iter().any(Zero::is_zero) {
            return Err(Error::InvalidCoefficients(
                "all coefficients must be nonzero",
            ));
        }
        if !c.iter().any(Signed::is_positive) || !c.iter().any(Signed::is_negative) {
            return Err(Error::InvalidCoefficients(
                "need at least one positive and one negative coefficient",
            ));
        }
        Ok(CoefficientVector(c))
    }

    pub fn preset(p: Preset) -> Self {
        CoefficientVector(p.values().map(int))
    }

    pub fn standard() -> Self {
        Self::preset(Preset::Eq1)
    }

    pub fn values(&self) -> &[BigRational; 6] {
        &self.0
    }

    pub fn to_f64(&self) -> [f64; 6] {
        core::array::from_fn(|a| self.0[a].to_f64().unwrap_or(f64::NAN))
    }

    pub fn max_abs(&self) -> f64 {
        self.to_f64().iter().fold(0.0, |m, c| m.max(libm::fabs(*c)))
    }

    /// `true` for coordinates entering the positive part `P`.
    pub fn is_positive(&self, a: usize) -> bool {
        self.0[a].is_positive()
    }

    pub fn is_standard(&self) -> bool {
        *self == Self::standard()
    }
}

impl fmt::Display for CoefficientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(
                f,
                "{}",
                crate::exactpoly::Polynomial::constant(crate::exactpoly::variables(&[]), c.clone())
            )?;
        }
        write!(f, ")")
    }
}
