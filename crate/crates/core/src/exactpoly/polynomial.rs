use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

use super::RationalFunction;
use crate::error::{Error, Result};

/// Shared, ordered list of variable names.
pub type Variables = Arc<[String]>;

/// Builds a shared variable list from names.
pub fn variables(names: &[&str]) -> Variables {
    names
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .into()
}

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with big-rational coefficients.
///
/// Zero coefficients are never stored. Binary operators require both operands
/// to share the same variable list and panic otherwise; mixing variable sets is
/// a programming error, not a data error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    vars: Variables,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(vars: Variables) -> Self {
        Polynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Variables, value: BigRational) -> Self {
        let mut p = Polynomial::zero(vars);
        if !value.is_zero() {
            let n = p.vars.len();
            p.terms.insert(Monomial::one(n), value);
        }
        p
    }

    pub fn from_int(vars: Variables, value: i64) -> Self {
        Polynomial::constant(vars, BigRational::from_integer(BigInt::from(value)))
    }

    pub fn one(vars: Variables) -> Self {
        Polynomial::from_int(vars, 1)
    }

    /// The polynomial `x_index`.
    pub fn var(vars: Variables, index: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[index] = 1;
        let mut p = Polynomial::zero(vars);
        p.terms.insert(Monomial(e), BigRational::one());
        p
    }

    pub fn variable(vars: Variables, name: &str) -> Result<Self> {
        let idx = index_of(&vars, name)?;
        Ok(Polynomial::var(vars, idx))
    }

    /// Collects terms, merging repeated monomials and dropping zeros.
    pub fn from_terms<I>(vars: Variables, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let mut p = Polynomial::zero(vars);
        for (e, c) in terms {
            if e.len() != p.vars.len() {
                return Err(Error::DimensionMismatch {
                    expected: p.vars.len(),
                    found: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn vars(&self) -> &Variables {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Returns the value if the polynomial is constant.
    pub fn constant_value(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigRational {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Polynomial::zero(self.vars.clone());
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Polynomial::one(self.vars.clone());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact partial derivative with respect to the variable at `index`.
    pub fn derivative(&self, index: usize) -> Self {
        let mut out = Polynomial::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut m2 = m.0.clone();
            m2[index] -= 1;
            out.add_term(Monomial(m2), c * BigRational::from_integer(BigInt::from(e)));
        }
        out
    }

    pub fn differentiate(&self, variable: &str) -> Result<Self> {
        Ok(self.derivative(index_of(&self.vars, variable)?))
    }

    /// Exact value at a rational point.
    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational> {
        self.check_len(point.len())?;
        Ok(self.eval_with(point, |c| c.clone()))
    }

    /// Evaluates in any commutative ring `T`, converting coefficients with `coeff`.
    pub fn eval_with<T, F>(&self, point: &[T], coeff: F) -> T
    where
        T: Clone + Num,
        F: Fn(&BigRational) -> T,
    {
        let max_exp = self.max_exponents();
        let powers: Vec<Vec<T>> = point
            .iter()
            .zip(&max_exp)
            .map(|(x, &e)| {
                let mut v = Vec::with_capacity(e as usize + 1);
                v.push(T::one());
                for k in 1..=e as usize {
                    let next = v[k - 1].clone() * x.clone();
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut t = coeff(c);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t * powers[i][e as usize].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    fn max_exponents(&self) -> Vec<u32> {
        let mut out = vec![0; self.vars.len()];
        for m in self.terms.keys() {
            for (o, &e) in out.iter_mut().zip(&m.0) {
                *o = (*o).max(e);
            }
        }
        out
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.vars.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vars.len(),
                found: n,
            });
        }
        Ok(())
    }

    /// Substitutes a rational function for every variable.
    ///
    /// The result lives over the variables of the substituted functions and is
    /// assembled over the common denominator `prod_i den_i^{max exponent of x_i}`.
    pub fn compose(&self, subs: &[RationalFunction]) -> Result<RationalFunction> {
        self.check_len(subs.len())?;
        let target = match subs.first() {
            Some(r) => r.vars().clone(),
            None => {
                return Err(Error::DimensionMismatch {
                    expected: 0,
                    found: 0,
                })
            }
        };
        if subs.iter().any(|r| r.vars() != &target) {
            return Err(Error::VariableMismatch);
        }
        let max_exp = self.max_exponents();
        let pow_table = |p: &Polynomial, e: u32| -> Vec<Polynomial> {
            let mut v = vec![Polynomial::one(target.clone())];
            for k in 1..=e as usize {
                let next = &v[k - 1] * p;
                v.push(next);
            }
            v
        };
        let num_pows: Vec<Vec<Polynomial>> = subs
            .iter()
            .zip(&max_exp)
            .map(|(r, &e)| pow_table(r.numerator(), e))
            .collect();
        let den_pows: Vec<Vec<Polynomial>> = subs
            .iter()
            .zip(&max_exp)
            .map(|(r, &e)| pow_table(r.denominator(), e))
            .collect();

        let mut total = Polynomial::zero(target.clone());
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target.clone(), c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                let top = max_exp[i];
                if top == 0 {
                    continue;
                }
                t = &t * &num_pows[i][e as usize];
                t = &t * &den_pows[i][(top - e) as usize];
            }
            total = &total + &t;
        }
        let mut den = Polynomial::one(target.clone());
        for (i, &e) in max_exp.iter().enumerate() {
            den = &den * &den_pows[i][e as usize];
        }
        RationalFunction::new(total, den)
    }

    fn assert_same_vars(&self, other: &Polynomial) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomial operands over different variable lists"
        );
    }
}

pub(crate) fn index_of(vars: &[String], name: &str) -> Result<usize> {
    vars.iter()
        .position(|v| v == name)
        .ok_or_else(|| Error::UnknownVariable(name.to_string()))
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same_vars(rhs);
        let mut out = Polynomial::zero(self.vars.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

pub(crate) fn fmt_rational(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        alloc::format!("{}/{}", c.numer(), c.denom())
    }
}

/// Deterministic text form: descending graded-lex order, explicit rational
/// coefficients, `*` between factors and `^` for powers. Re-parses to the same
/// polynomial.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if m.degree() == 0 || !abs.is_one() {
                factors.push(fmt_rational(&abs));
            }
            for (name, &e) in self.vars.iter().zip(&m.0) {
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(alloc::format!("{}^{}", name, e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::parse_expression;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn grlex_orders_by_degree_then_lex() {
        let a = Monomial::new(vec![0, 2]);
        let b = Monomial::new(vec![1, 0]);
        let c = Monomial::new(vec![2, 0]);
        assert!(b < a);
        assert!(a < c);
    }

    #[test]
    fn derivative_of_quartic() {
        let p = parse_expression("x^4", &["x"]).unwrap();
        let d = p.differentiate("x").unwrap();
        assert_eq!(d, parse_expression("4*x^3", &["x"]).unwrap());
        let k = parse_expression("7/3", &["x"]).unwrap();
        assert!(k.differentiate("x").unwrap().is_zero());
        assert_eq!(
            p.differentiate("y"),
            Err(Error::UnknownVariable("y".into()))
        );
    }

    #[test]
    fn evaluates_exactly() {
        let p = parse_expression("1 + x^4", &["x"]).unwrap();
        assert_eq!(p.evaluate(&[q(2, 1)]).unwrap(), q(17, 1));
        assert!(matches!(
            p.evaluate(&[]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn display_is_sorted_and_reparses() {
        let vars = ["z1", "z2"];
        let p = parse_expression("3 - z2 + 1/2*z1*z2 + z1^2 - z2^2", &vars).unwrap();
        let s = p.to_string();
        assert_eq!(s, "z1^2 + 1/2*z1*z2 - z2^2 - z2 + 3");
        assert_eq!(parse_expression(&s, &vars).unwrap(), p);
        assert_eq!(Polynomial::zero(variables(&vars)).to_string(), "0");
    }

    #[test]
    fn compose_substitutes_rational_functions() {
        // x -> 1/y, y -> y applied to x*y + x^2 gives (y^2 + 1)/y^2 ... times y / y
        let vx = variables(&["x", "y"]);
        let p = parse_expression("x*y + x^2", &["x", "y"]).unwrap();
        let y = Polynomial::var(vx.clone(), 1);
        let inv_y = RationalFunction::new(Polynomial::one(vx.clone()), y.clone()).unwrap();
        let same_y = RationalFunction::from_polynomial(y.clone());
        let r = p.compose(&[inv_y, same_y]).unwrap();
        let expected = RationalFunction::new(
            parse_expression("y^2 + 1", &["x", "y"]).unwrap(),
            parse_expression("y^2", &["x", "y"]).unwrap(),
        )
        .unwrap();
        assert_eq!(r, expected);
    }
}
