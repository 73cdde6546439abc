use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::polynomial::{index_of, Polynomial, Variables};
use crate::error::{Error, Result};

/// Quotient of two polynomials over the same variables.
///
/// No GCD reduction is performed. Equality is decided by cross-multiplication,
/// so two representations of the same function always compare equal.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if num.vars() != den.vars() {
            return Err(Error::VariableMismatch);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFunction { num, den }.normalized())
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        let den = Polynomial::one(p.vars().clone());
        RationalFunction { num: p, den }
    }

    /// Folds constant denominators into the numerator.
    fn normalized(self) -> Self {
        if self.num.is_zero() {
            let one = Polynomial::one(self.num.vars().clone());
            return RationalFunction {
                num: self.num,
                den: one,
            };
        }
        match self.den.constant_value() {
            Some(k) if !k.is_one() => {
                let inv = k.recip();
                RationalFunction {
                    num: self.num.scale(&inv),
                    den: Polynomial::one(self.den.vars().clone()),
                }
            }
            _ => self,
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn vars(&self) -> &Variables {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Returns the numerator when the denominator is the constant one.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn recip(&self) -> Result<Self> {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RationalFunction) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, exp: u32) -> Self {
        RationalFunction {
            num: self.num.pow(exp),
            den: self.den.pow(exp),
        }
    }

    /// Quotient rule; constant denominators are kept unsquared.
    pub fn derivative(&self, index: usize) -> Self {
        let dn = self.num.derivative(index);
        if self.den.constant_value().is_some() {
            return RationalFunction {
                num: dn,
                den: self.den.clone(),
            }
            .normalized();
        }
        let dd = self.den.derivative(index);
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        RationalFunction {
            num,
            den: self.den.pow(2),
        }
        .normalized()
    }

    pub fn differentiate(&self, variable: &str) -> Result<Self> {
        Ok(self.derivative(index_of(self.vars(), variable)?))
    }

    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational> {
        let d = self.den.evaluate(point)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.evaluate(point)? / d)
    }

    pub fn compose(&self, subs: &[RationalFunction]) -> Result<Self> {
        let n = self.num.compose(subs)?;
        let d = self.den.compose(subs)?;
        n.checked_div(&d)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.vars() == other.vars() && &self.num * &other.den == &other.num * &self.den
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            }
            .normalized();
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction {
            num,
            den: &self.den * &rhs.den,
        }
        .normalized()
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
        .normalized()
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Exact determinant of the Jacobian matrix `d map_r / d x_c`.
///
/// Each row is brought over the product of its distinct denominators, the
/// polynomial determinant is expanded by cofactors, and the row denominators
/// are divided back out.
pub fn jacobian_determinant(
    map: &[RationalFunction],
    variables: &[&str],
) -> Result<RationalFunction> {
    if map.len() != variables.len() {
        return Err(Error::DimensionMismatch {
            expected: variables.len(),
            found: map.len(),
        });
    }
    let vars = match map.first() {
        Some(r) => r.vars().clone(),
        None => {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            })
        }
    };
    if map.iter().any(|r| r.vars() != &vars) {
        return Err(Error::VariableMismatch);
    }
    let cols: Vec<usize> = variables
        .iter()
        .map(|v| index_of(&vars, v))
        .collect::<Result<_>>()?;

    let mut rows: Vec<Vec<Polynomial>> = Vec::with_capacity(map.len());
    let mut den_total = Polynomial::one(vars.clone());
    for comp in map {
        let partials: Vec<RationalFunction> = cols.iter().map(|&c| comp.derivative(c)).collect();
        let mut dens: Vec<&Polynomial> = Vec::new();
        for p in &partials {
            if !p.den.is_one() && !dens.iter().any(|d| **d == p.den) {
                dens.push(&p.den);
            }
        }
        let row: Vec<Polynomial> = partials
            .iter()
            .map(|p| {
                dens.iter()
                    .filter(|d| ***d != p.den)
                    .fold(p.num.clone(), |acc, d| &acc * *d)
            })
            .collect();
        for d in &dens {
            den_total = &den_total * *d;
        }
        rows.push(row);
    }
    let det = polynomial_determinant(&rows, &vars);
    RationalFunction::new(det, den_total)
}

fn polynomial_determinant(rows: &[Vec<Polynomial>], vars: &Variables) -> Polynomial {
    fn rec(
        rows: &[Vec<Polynomial>],
        r: usize,
        used: &mut Vec<bool>,
        vars: &Variables,
    ) -> Polynomial {
        let n = rows.len();
        if r == n {
            return Polynomial::one(vars.clone());
        }
        let mut acc = Polynomial::zero(vars.clone());
        let mut sign_positive = true;
        for c in 0..n {
            if used[c] {
                continue;
            }
            let entry = &rows[r][c];
            if !entry.is_zero() {
                used[c] = true;
                let minor = rec(rows, r + 1, used, vars);
                used[c] = false;
                let term = entry * &minor;
                acc = if sign_positive {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
            sign_positive = !sign_positive;
        }
        acc
    }
    let mut used = alloc::vec![false; rows.len()];
    rec(rows, 0, &mut used, vars)
}

impl RationalFunction {
    /// `true` when the value is the constant `k`.
    pub fn is_constant(&self, k: &BigRational) -> bool {
        let kp = Polynomial::constant(self.vars().clone(), k.clone());
        self.num == &kp * &self.den
    }

    pub fn zero(vars: Variables) -> Self {
        RationalFunction::from_polynomial(Polynomial::zero(vars))
    }

    pub fn one(vars: Variables) -> Self {
        RationalFunction::from_polynomial(Polynomial::one(vars))
    }

    pub fn is_one(&self) -> bool {
        self.is_constant(&BigRational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{parse_expression, variables};

    const Z: [&str; 4] = ["z1", "z2", "z3", "z4"];

    fn rf(num: &str, den: &str) -> RationalFunction {
        RationalFunction::new(
            parse_expression(num, &Z).unwrap(),
            parse_expression(den, &Z).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn identity_map_has_unit_determinant() {
        let vars = variables(&Z);
        let map: Vec<_> = (0..4)
            .map(|i| RationalFunction::from_polynomial(Polynomial::var(vars.clone(), i)))
            .collect();
        let det = jacobian_determinant(&map, &Z).unwrap();
        assert!(det.is_one());
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let map = [rf("z1", "1"), rf("z2", "1")];
        assert!(matches!(
            jacobian_determinant(&map, &Z),
            Err(Error::DimensionMismatch {
                expected: 4,
                found: 2
            })
        ));
        assert!(matches!(
            jacobian_determinant(&map, &["z1", "q"]),
            Err(Error::UnknownVariable(_))
        ));
    }

    #[test]
    fn cross_multiplication_equality() {
        assert_eq!(rf("z1*z2", "z1^2"), rf("z2", "z1"));
        assert_ne!(rf("z2", "z1"), rf("z1", "z2"));
        assert!(rf("2*z1", "4*z1").is_constant(&BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn zero_denominator_rejected() {
        let vars = variables(&Z);
        assert_eq!(
            RationalFunction::new(Polynomial::one(vars.clone()), Polynomial::zero(vars))
                .unwrap_err(),
            Error::DivisionByZero
        );
        let r = rf("1", "z1^4");
        let at = |v: i64| BigRational::from_integer(v.into());
        assert_eq!(
            r.evaluate(&[at(2), at(0), at(0), at(0)]).unwrap(),
            BigRational::new(1.into(), 16.into())
        );
        assert_eq!(
            r.evaluate(&[at(0), at(1), at(1), at(1)]),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn quotient_rule() {
        let r = rf("z2", "z1");
        assert_eq!(r.differentiate("z1").unwrap(), rf("-z2", "z1^2"));
        assert_eq!(r.differentiate("z2").unwrap(), rf("1", "z1"));
    }
}
