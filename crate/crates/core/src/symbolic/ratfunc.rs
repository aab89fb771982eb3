use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::poly::{MultiPoly, Rational, Var, NVARS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("denominator vanishes at the evaluation point (|den| = {modulus:e})")]
    Pole { modulus: f64 },
}

/// Relative threshold under which a denominator value counts as zero.
pub const POLE_THRESHOLD: f64 = 1e-12;

/// Reduced quotient of two polynomials.
///
/// Canonical form: `gcd(num, den) = 1`, and `den` has coprime integer
/// coefficients with a positive graded-lex leading coefficient. Two rational
/// functions are equal iff their stored numerators and denominators are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    /// Builds and normalizes `num / den`. Panics if `den` is zero.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RationalFunction::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        RationalFunction::rescaled(num, den)
    }

    /// Normalizes only the scalar factor; `num` and `den` must be coprime.
    fn rescaled(num: MultiPoly, den: MultiPoly) -> Self {
        let mut c = den.content();
        if den.leading_coeff().is_negative() {
            c = -c;
        }
        if c.is_one() {
            return RationalFunction { num, den };
        }
        let inv = c.recip();
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: MultiPoly::zero(),
            den: MultiPoly::one(),
        }
    }

    pub fn one() -> Self {
        RationalFunction::from_poly(MultiPoly::one())
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RationalFunction {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        RationalFunction::from_poly(MultiPoly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        RationalFunction::from_poly(MultiPoly::int(n))
    }

    pub fn var(v: Var) -> Self {
        RationalFunction::from_poly(MultiPoly::var(v))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&MultiPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn recip(&self) -> Option<RationalFunction> {
        if self.is_zero() {
            return None;
        }
        Some(RationalFunction::rescaled(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, c: &Rational) -> RationalFunction {
        if c.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> RationalFunction {
        RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    pub fn derivative(&self, v: Var) -> RationalFunction {
        if self.den.is_constant() {
            return RationalFunction::rescaled(self.num.derivative(v), self.den.clone());
        }
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return RationalFunction::new(dn, self.den.clone());
        }
        // With g = gcd(d, d'), d = g d1: f' = (n' d1 - n d'/g) / (g d1^2), and
        // a common factor of that fraction can only divide g.
        let g = self.den.gcd(&dd);
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let top = &(&dn * &d1) - &(&self.num * &dd.div_exact(&g).expect("gcd divides"));
        if top.is_zero() {
            return RationalFunction::zero();
        }
        let h = top.gcd(&g);
        let (top, g) = if h.is_constant() {
            (top, g)
        } else {
            (top.div_exact(&h).unwrap(), g.div_exact(&h).unwrap())
        };
        RationalFunction::rescaled(top, &g * &(&d1 * &d1))
    }

    pub fn substitute(&self, v: Var, value: &MultiPoly) -> RationalFunction {
        RationalFunction::new(self.num.substitute(v, value), self.den.substitute(v, value))
    }

    /// Complex value at `point` (indexed by [`Var::index`]). Fails when the
    /// denominator is below [`POLE_THRESHOLD`] relative to its term scale.
    pub fn evaluate(&self, point: &[Complex64; NVARS]) -> Result<Complex64, EvalError> {
        let (d, scale) = self.den.eval_with_scale(point);
        if d.norm() <= POLE_THRESHOLD * scale.max(f64::MIN_POSITIVE) {
            return Err(EvalError::Pole { modulus: d.norm() });
        }
        Ok(self.num.eval(point) / d)
    }
}

impl From<MultiPoly> for RationalFunction {
    fn from(p: MultiPoly) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        let (l, r) = if g.is_constant() {
            (self.den.clone(), rhs.den.clone())
        } else {
            (
                self.den.div_exact(&g).unwrap(),
                rhs.den.div_exact(&g).unwrap(),
            )
        };
        let num = &(&self.num * &r) + &(&rhs.num * &l);
        let den = &l * &rhs.den;
        if num.is_zero() {
            return RationalFunction::zero();
        }
        // A common factor of num and l*r*g divides g and neither l nor r,
        // so one gcd against g removes all of it.
        if g.is_constant() {
            return RationalFunction::rescaled(num, den);
        }
        let h = num.gcd(&g);
        if h.is_constant() {
            RationalFunction::rescaled(num, den)
        } else {
            RationalFunction::rescaled(num.div_exact(&h).unwrap(), den.div_exact(&h).unwrap())
        }
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        let cancel = |n: &MultiPoly, d: &MultiPoly| -> (MultiPoly, MultiPoly) {
            if d.is_constant() || n.is_constant() {
                return (n.clone(), d.clone());
            }
            let g = n.gcd(d);
            if g.is_constant() {
                (n.clone(), d.clone())
            } else {
                (n.div_exact(&g).unwrap(), d.div_exact(&g).unwrap())
            }
        };
        let (n1, d2) = cancel(&self.num, &rhs.den);
        let (n2, d1) = cancel(&rhs.num, &self.den);
        RationalFunction::rescaled(&n1 * &n2, &d1 * &d2)
    }
}

impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self * &rhs.recip().expect("division by the zero rational function")
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

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<RationalFunction> for &'a RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                self.$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn t(i: usize) -> MultiPoly {
        MultiPoly::var(Var::from_index(i))
    }

    #[test]
    fn canonical_form_cancels_and_normalizes_sign() {
        let f = &t(1) - &t(2);
        let a = RationalFunction::new(&f * &t(3), &f * &MultiPoly::int(-4));
        let b = RationalFunction::new(t(3).scale(&Rational::new(BigInt::from(-1), BigInt::from(4))), MultiPoly::one());
        assert_eq!(a, b);
        assert!(a.is_polynomial());
    }

    #[test]
    fn add_then_subtract_roundtrips() {
        let a = RationalFunction::new(t(1), &t(2) + &t(3));
        let b = RationalFunction::new(t(2), &t(1) - &t(3));
        let c = &(&a + &b) - &b;
        assert_eq!(c, a);
    }

    #[test]
    fn pole_is_reported() {
        let f = RationalFunction::new(MultiPoly::one(), &t(1) - &t(2));
        let mut pt = [Complex64::new(0.0, 0.0); NVARS];
        pt[1] = Complex64::new(2.0, 1.0);
        pt[2] = Complex64::new(2.0, 1.0);
        assert!(matches!(f.evaluate(&pt), Err(EvalError::Pole { .. })));
    }
}
