use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::{chart_expression, CoefficientVector};
use crate::error::{Error, Result};
use crate::exactpoly::Polynomial;
use crate::grassmann::Chart;

const MAX_EXP: usize = 8;

/// Powers `z_i^0 .. z_i^8` of a point, shared by every polynomial of a system.
struct Powers([[Complex64; MAX_EXP + 1]; 4]);

impl Powers {
    fn new(z: &[Complex64; 4]) -> Self {
        let mut p = [[Complex64::new(1.0, 0.0); MAX_EXP + 1]; 4];
        for i in 0..4 {
            for e in 1..=MAX_EXP {
                p[i][e] = p[i][e - 1] * z[i];
            }
        }
        Powers(p)
    }
}

/// A polynomial in four variables with coefficients rounded to `f64`.
#[derive(Clone, Debug)]
pub struct CompiledPolynomial {
    terms: Vec<(f64, [u8; 4])>,
}

impl CompiledPolynomial {
    pub fn new(p: &Polynomial) -> Result<Self> {
        if p.nvars() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: p.nvars(),
            });
        }
        let mut terms = Vec::with_capacity(p.num_terms());
        for (m, c) in p.terms() {
            let e = m.exponents();
            if e.iter().any(|&x| x as usize > MAX_EXP) {
                return Err(Error::InvalidArgument("partial degree above 8"));
            }
            terms.push((
                c.to_f64().unwrap_or(f64::NAN),
                [e[0] as u8, e[1] as u8, e[2] as u8, e[3] as u8],
            ));
        }
        Ok(CompiledPolynomial { terms })
    }

    fn eval_powers(&self, pw: &Powers) -> Complex64 {
        let mut acc = Complex64::zero();
        for (c, e) in &self.terms {
            let m = pw.0[0][e[0] as usize]
                * pw.0[1][e[1] as usize]
                * pw.0[2][e[2] as usize]
                * pw.0[3][e[3] as usize];
            acc += m * *c;
        }
        acc
    }

    pub fn eval(&self, z: &[Complex64; 4]) -> Complex64 {
        self.eval_powers(&Powers::new(z))
    }
}

/// Value, gradient and Hessian of one chart-local polynomial, compiled once.
#[derive(Clone, Debug)]
pub struct ChartSystem {
    f: CompiledPolynomial,
    grad: [CompiledPolynomial; 4],
    /// Upper triangle, row-major.
    hess: [CompiledPolynomial; 10],
}

/// Value, gradient and Hessian at one point.
#[derive(Clone, Copy, Debug)]
pub struct Jet {
    pub value: Complex64,
    pub gradient: [Complex64; 4],
    pub hessian: [[Complex64; 4]; 4],
}

impl ChartSystem {
    pub fn new(f: &Polynomial) -> Result<Self> {
        let g: [Polynomial; 4] = core::array::from_fn(|i| f.derivative(i));
        let mut hess = Vec::with_capacity(10);
        for i in 0..4 {
            for j in i..4 {
                hess.push(CompiledPolynomial::new(&g[i].derivative(j))?);
            }
        }
        let grad = [
            CompiledPolynomial::new(&g[0])?,
            CompiledPolynomial::new(&g[1])?,
            CompiledPolynomial::new(&g[2])?,
            CompiledPolynomial::new(&g[3])?,
        ];
        Ok(ChartSystem {
            f: CompiledPolynomial::new(f)?,
            grad,
            hess: hess.try_into().expect("ten entries"),
        })
    }

    pub fn for_coefficients(c: &CoefficientVector, chart: Chart) -> Self {
        Self::new(&chart_expression(c, chart))
            .expect("chart expressions are octic in four variables")
    }

    pub fn value(&self, z: &[Complex64; 4]) -> Complex64 {
        self.f.eval(z)
    }

    pub fn gradient(&self, z: &[Complex64; 4]) -> [Complex64; 4] {
        let pw = Powers::new(z);
        core::array::from_fn(|i| self.grad[i].eval_powers(&pw))
    }

    /// Value and gradient together.
    pub fn value_gradient(&self, z: &[Complex64; 4]) -> (Complex64, [Complex64; 4]) {
        let pw = Powers::new(z);
        (
            self.f.eval_powers(&pw),
            core::array::from_fn(|i| self.grad[i].eval_powers(&pw)),
        )
    }

    pub fn jet(&self, z: &[Complex64; 4]) -> Jet {
        let pw = Powers::new(z);
        let mut hessian = [[Complex64::zero(); 4]; 4];
        let mut k = 0;
        for i in 0..4 {
            for j in i..4 {
                let h = self.hess[k].eval_powers(&pw);
                hessian[i][j] = h;
                hessian[j][i] = h;
                k += 1;
            }
        }
        Jet {
            value: self.f.eval_powers(&pw),
            gradient: core::array::from_fn(|i| self.grad[i].eval_powers(&pw)),
            hessian,
        }
    }
}
