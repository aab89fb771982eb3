//! Differential forms on parameter space with basis `dt0, .., dt3`.
//!
//! The formal parameter `s` and the fiber coordinate `x` are treated as
//! constants by [`exterior_derivative`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::poly::Var;
use super::ratfunc::RationalFunction;

/// Number of basis covectors.
pub const NDIFF: usize = 4;
/// Number of basis bivectors `dti^dtj` with `i < j`.
pub const NPAIRS: usize = 6;

/// Index pairs `(i, j)` of the 2-form slots, in storage order.
pub const PAIRS: [(usize, usize); NPAIRS] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn pair_index(i: usize, j: usize) -> usize {
    assert!(i < j && j < NDIFF, "pair ({i},{j}) is not strictly increasing");
    PAIRS.iter().position(|&p| p == (i, j)).unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DifferentialForm1 {
    coeffs: [RationalFunction; NDIFF],
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DifferentialForm2 {
    coeffs: [RationalFunction; NPAIRS],
}

impl DifferentialForm1 {
    pub fn zero() -> Self {
        DifferentialForm1 {
            coeffs: std::array::from_fn(|_| RationalFunction::zero()),
        }
    }

    pub fn new(coeffs: [RationalFunction; NDIFF]) -> Self {
        DifferentialForm1 { coeffs }
    }

    /// The covector `dti`.
    pub fn basis(i: usize) -> Self {
        let mut f = DifferentialForm1::zero();
        f.coeffs[i] = RationalFunction::one();
        f
    }

    pub fn coeff(&self, i: usize) -> &RationalFunction {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[RationalFunction; NDIFF] {
        &self.coeffs
    }

    pub fn set(&mut self, i: usize, f: RationalFunction) {
        self.coeffs[i] = f;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RationalFunction::is_zero)
    }

    pub fn scale(&self, f: &RationalFunction) -> DifferentialForm1 {
        DifferentialForm1 {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] * f),
        }
    }

    /// Exterior derivative of a 1-form.
    pub fn d(&self) -> DifferentialForm2 {
        let mut out = DifferentialForm2::zero();
        for (k, &(i, j)) in PAIRS.iter().enumerate() {
            let a = self.coeffs[j].derivative(Var::from_index(i));
            let b = self.coeffs[i].derivative(Var::from_index(j));
            out.coeffs[k] = &a - &b;
        }
        out
    }
}

impl DifferentialForm2 {
    pub fn zero() -> Self {
        DifferentialForm2 {
            coeffs: std::array::from_fn(|_| RationalFunction::zero()),
        }
    }

    pub fn coeff(&self, i: usize, j: usize) -> &RationalFunction {
        &self.coeffs[pair_index(i, j)]
    }

    pub fn coeffs(&self) -> &[RationalFunction; NPAIRS] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RationalFunction::is_zero)
    }

    /// Slots `(i, j)` with nonzero coefficient.
    pub fn support(&self) -> Vec<(usize, usize)> {
        PAIRS
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, _)| *p)
            .collect()
    }
}

pub fn exterior_derivative(f: &RationalFunction) -> DifferentialForm1 {
    DifferentialForm1 {
        coeffs: std::array::from_fn(|i| f.derivative(Var::from_index(i))),
    }
}

pub fn wedge(a: &DifferentialForm1, b: &DifferentialForm1) -> DifferentialForm2 {
    let mut out = DifferentialForm2::zero();
    for (k, &(i, j)) in PAIRS.iter().enumerate() {
        if (a.coeffs[i].is_zero() || b.coeffs[j].is_zero())
            && (a.coeffs[j].is_zero() || b.coeffs[i].is_zero())
        {
            continue;
        }
        out.coeffs[k] = &(&a.coeffs[i] * &b.coeffs[j]) - &(&a.coeffs[j] * &b.coeffs[i]);
    }
    out
}

macro_rules! form_ops {
    ($ty:ident, $n:expr) => {
        impl<'a> Add<&'a $ty> for &'a $ty {
            type Output = $ty;
            fn add(self, rhs: &$ty) -> $ty {
                $ty {
                    coeffs: std::array::from_fn(|i| &self.coeffs[i] + &rhs.coeffs[i]),
                }
            }
        }
        impl<'a> Sub<&'a $ty> for &'a $ty {
            type Output = $ty;
            fn sub(self, rhs: &$ty) -> $ty {
                $ty {
                    coeffs: std::array::from_fn(|i| &self.coeffs[i] - &rhs.coeffs[i]),
                }
            }
        }
        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty {
                    coeffs: std::array::from_fn(|i| -&self.coeffs[i]),
                }
            }
        }
        impl<'a> Mul<&'a $ty> for &'a RationalFunction {
            type Output = $ty;
            fn mul(self, rhs: &$ty) -> $ty {
                $ty {
                    coeffs: std::array::from_fn(|i| self * &rhs.coeffs[i]),
                }
            }
        }
    };
}
form_ops!(DifferentialForm1, NDIFF);
form_ops!(DifferentialForm2, NPAIRS);

impl fmt::Display for DifferentialForm1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})*dt{i}"))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl fmt::Display for DifferentialForm2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = PAIRS
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, j), c)| format!("({c})*dt{i}^dt{j}"))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::MultiPoly;

    fn t(i: usize) -> RationalFunction {
        RationalFunction::var(Var::from_index(i))
    }

    #[test]
    fn d_of_discriminant() {
        let delta = &(&RationalFunction::int(27) * &t(3).pow(2)) - &t(2).pow(3);
        let d = exterior_derivative(&delta);
        assert!(d.coeff(0).is_zero() && d.coeff(1).is_zero());
        assert_eq!(d.coeff(2), &(&RationalFunction::int(-3) * &t(2).pow(2)));
        assert_eq!(d.coeff(3), &(&RationalFunction::int(54) * &t(3)));
    }

    #[test]
    fn basis_wedges() {
        let a = DifferentialForm1::basis(1);
        assert!(wedge(&a, &a).is_zero());
        let w = wedge(&a, &DifferentialForm1::basis(2));
        assert_eq!(w.support(), vec![(1, 2)]);
        assert_eq!(w.coeff(1, 2), &RationalFunction::one());
    }

    #[test]
    fn d_of_exact_is_zero() {
        let f = RationalFunction::new(
            &MultiPoly::var(Var::T1) * &MultiPoly::var(Var::T2),
            &MultiPoly::var(Var::T3) + &MultiPoly::var(Var::T0),
        );
        assert!(exterior_derivative(&f).d().is_zero());
    }
}
