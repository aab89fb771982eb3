//! Univariate polynomials in the fiber coordinate `x` with coefficients in
//! the rational function field of the parameters.

use std::ops::{Add, Mul, Neg, Sub};

use super::poly::{MultiPoly, Var};
use super::ratfunc::RationalFunction;

/// `coeffs[k]` multiplies `x^k`. No trailing zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct XPoly {
    coeffs: Vec<RationalFunction>,
}

impl XPoly {
    pub fn zero() -> Self {
        XPoly { coeffs: Vec::new() }
    }

    pub fn new(mut coeffs: Vec<RationalFunction>) -> Self {
        while coeffs.last().is_some_and(RationalFunction::is_zero) {
            coeffs.pop();
        }
        XPoly { coeffs }
    }

    pub fn constant(c: RationalFunction) -> Self {
        XPoly::new(vec![c])
    }

    /// `x^k`.
    pub fn x_pow(k: usize) -> Self {
        let mut c = vec![RationalFunction::zero(); k + 1];
        c[k] = RationalFunction::one();
        XPoly { coeffs: c }
    }

    /// Splits a polynomial containing `x` into its `x`-coefficients.
    pub fn from_multi(p: &MultiPoly) -> Self {
        XPoly::new(
            p.coefficients_in(Var::X)
                .into_iter()
                .map(RationalFunction::from_poly)
                .collect(),
        )
    }

    /// Reassembles a polynomial in `x`; `None` if some coefficient has a
    /// nonconstant denominator.
    pub fn to_multi(&self) -> Option<MultiPoly> {
        let mut out = MultiPoly::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !c.den().is_constant() {
                return None;
            }
            let scale = c.den().constant_value().unwrap().recip();
            let term = &c.num().scale(&scale) * &MultiPoly::var(Var::X).pow(k as u32);
            out += &term;
        }
        Some(out)
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> RationalFunction {
        self.coeffs.get(k).cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> RationalFunction {
        self.coeffs.last().cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn derivative(&self) -> XPoly {
        XPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| &RationalFunction::int(k as i64) * c)
                .collect(),
        )
    }

    pub fn scale(&self, f: &RationalFunction) -> XPoly {
        XPoly::new(self.coeffs.iter().map(|c| c * f).collect())
    }

    /// `self(x + c)`.
    pub fn shift(&self, c: &RationalFunction) -> XPoly {
        // Horner in the shifted variable.
        let mut acc = XPoly::zero();
        let lin = XPoly::new(vec![c.clone(), RationalFunction::one()]);
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &XPoly::constant(a.clone());
        }
        acc
    }

    /// Parameter-space derivative applied to every coefficient.
    pub fn param_derivative(&self, v: Var) -> XPoly {
        XPoly::new(self.coeffs.iter().map(|c| c.derivative(v)).collect())
    }
}

impl<'a> Add<&'a XPoly> for &'a XPoly {
    type Output = XPoly;
    fn add(self, rhs: &XPoly) -> XPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        XPoly::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a XPoly> for &'a XPoly {
    type Output = XPoly;
    fn sub(self, rhs: &XPoly) -> XPoly {
        self + &(-rhs)
    }
}

impl Neg for &XPoly {
    type Output = XPoly;
    fn neg(self) -> XPoly {
        XPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl<'a> Mul<&'a XPoly> for &'a XPoly {
    type Output = XPoly;
    fn mul(self, rhs: &XPoly) -> XPoly {
        if self.is_zero() || rhs.is_zero() {
            return XPoly::zero();
        }
        let mut out = vec![RationalFunction::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        XPoly::new(out)
    }
}
