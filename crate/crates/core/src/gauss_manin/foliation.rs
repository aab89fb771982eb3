use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::connection::{derive_connection, BasisLabel, ConnectionMatrix};
use super::family::FamilySpec;
use super::GmError;
use crate::symbolic::{
    exterior_derivative, parse_expression, MultiPoly, ParseError, Rational, RationalFunction, Var,
    NVARS,
};

/// Variables allowed in user-supplied form coefficients.
pub const FORM_VARIABLES: [&str; 5] = ["t0", "t1", "t2", "t3", "s"];

/// The class `p1 dx/y + p2 x dx/y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSpec {
    pub p1: RationalFunction,
    pub p2: RationalFunction,
}

impl FormSpec {
    pub fn new(p1: RationalFunction, p2: RationalFunction) -> Result<Self, GmError> {
        if p1.is_zero() && p2.is_zero() {
            return Err(GmError::ZeroForm);
        }
        Ok(FormSpec { p1, p2 })
    }

    pub fn parse(p1: &str, p2: &str) -> Result<Self, ParseError> {
        let a = parse_expression(p1, &FORM_VARIABLES)?;
        let b = parse_expression(p2, &FORM_VARIABLES)?;
        Ok(FormSpec {
            p1: a.into(),
            p2: b.into(),
        })
    }
}

/// Polynomial vector field `X1 d/dt1 + X2 d/dt2 + X3 d/dt3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorField {
    pub components: [MultiPoly; 3],
}

impl VectorField {
    pub fn new(components: [MultiPoly; 3]) -> Self {
        VectorField { components }
    }

    /// `(t1^2 - t2/12, 4 t1 t2 - 6 t3, 6 t1 t3 - t2^2/3)`.
    pub fn ramanujan() -> Self {
        let p = |s| crate::symbolic::parse_poly(s).unwrap();
        VectorField::new([
            p("t1^2 - 1/12*t2"),
            p("4*t1*t2 - 6*t3"),
            p("6*t1*t3 - 1/3*t2^2"),
        ])
    }

    /// `d/dt1`.
    pub fn translation() -> Self {
        VectorField::new([MultiPoly::one(), MultiPoly::zero(), MultiPoly::zero()])
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(MultiPoly::is_zero)
    }

    /// Lie derivative `dV(X)` of a function.
    pub fn apply(&self, v: &MultiPoly) -> MultiPoly {
        let mut acc = MultiPoly::zero();
        for (k, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc += &(&v.derivative(Var::from_index(k + 1)) * c);
        }
        acc
    }

    /// Evaluates at `(t1, t2, t3)` with `t0 = 1` and the formal parameter
    /// `s` set to `s`.
    pub fn eval(&self, t: &[Complex64; 3], s: Complex64) -> [Complex64; 3] {
        let mut pt = [Complex64::new(0.0, 0.0); NVARS];
        pt[0] = Complex64::new(1.0, 0.0);
        pt[1..4].copy_from_slice(t);
        pt[Var::S.index()] = s;
        std::array::from_fn(|k| self.components[k].eval(&pt))
    }

    /// `self x other == 0` exactly.
    pub fn is_parallel(&self, other: &VectorField) -> bool {
        let a = &self.components;
        let b = &other.components;
        (0..3).all(|i| {
            let j = (i + 1) % 3;
            let k = (i + 2) % 3;
            (&a[j] * &b[k]) == (&a[k] * &b[j])
        })
    }

    /// Content-and-sign normal form.
    pub fn normalized(&self) -> FoliationField {
        FoliationField::normalize(self.components.clone())
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            self.components[0], self.components[1], self.components[2]
        )
    }
}

/// A vector field in `t1, t2, t3` normalized so that the components have no
/// common polynomial factor, their integer coefficients are jointly coprime,
/// and the leading coefficient of the first nonzero component is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FoliationField {
    field: VectorField,
}

impl FoliationField {
    fn normalize(mut comps: [MultiPoly; 3]) -> FoliationField {
        let mut g = MultiPoly::zero();
        for c in &comps {
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_zero() && !g.is_constant() {
            for c in comps.iter_mut() {
                *c = c.div_exact(&g).expect("gcd divides");
            }
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in &comps {
            if c.is_zero() {
                continue;
            }
            let k = c.content();
            num = num.gcd(k.numer());
            den = den.lcm(k.denom());
        }
        if !num.is_zero() {
            let mut k = Rational::new(num, den);
            if let Some(first) = comps.iter().find(|c| !c.is_zero()) {
                if first.leading_coeff().is_negative() {
                    k = -k;
                }
            }
            let inv = k.recip();
            for c in comps.iter_mut() {
                *c = c.scale(&inv);
            }
        }
        FoliationField {
            field: VectorField::new(comps),
        }
    }

    pub fn field(&self) -> &VectorField {
        &self.field
    }

    pub fn components(&self) -> &[MultiPoly; 3] {
        &self.field.components
    }

    pub fn into_field(self) -> VectorField {
        self.field
    }
}

impl fmt::Display for FoliationField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.field.fmt(f)
    }
}

/// Connection of the Weierstrass family in the basis `(dx/y, x dx/y)` on
/// the slice `t0 = 1`, derived once.
pub fn weierstrass_slice_connection() -> &'static ConnectionMatrix {
    static CELL: OnceLock<ConnectionMatrix> = OnceLock::new();
    CELL.get_or_init(|| {
        derive_connection(&FamilySpec::weierstrass(), BasisLabel::Omega)
            .expect("Weierstrass connection")
            .restrict_t0_one()
    })
}

/// The foliation `dp1 + p1 w11 + p2 w21 = 0, dp2 + p1 w12 + p2 w22 = 0` on
/// the slice `t0 = 1`.
pub fn foliation_from_form(form: &FormSpec) -> Result<FoliationField, GmError> {
    if form.p1.is_zero() && form.p2.is_zero() {
        return Err(GmError::ZeroForm);
    }
    let one = MultiPoly::one();
    let p1 = form.p1.substitute(Var::T0, &one);
    let p2 = form.p2.substitute(Var::T0, &one);
    let w = weierstrass_slice_connection();
    let dp1 = exterior_derivative(&p1);
    let dp2 = exterior_derivative(&p2);
    let theta = |dp: &crate::symbolic::DifferentialForm1, col: usize| -> [RationalFunction; 3] {
        std::array::from_fn(|k| {
            let i = k + 1;
            &(dp.coeff(i) + &(&p1 * w.entries[0][col].coeff(i))) + &(&p2 * w.entries[1][col].coeff(i))
        })
    };
    let a = theta(&dp1, 0);
    let b = theta(&dp2, 1);
    let cross: [RationalFunction; 3] = std::array::from_fn(|i| {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        &(&a[j] * &b[k]) - &(&a[k] * &b[j])
    });
    if cross.iter().all(RationalFunction::is_zero) {
        return Err(GmError::DegenerateForm);
    }
    let mut l = MultiPoly::one();
    for c in &cross {
        if c.den().is_constant() {
            continue;
        }
        let g = l.gcd(c.den());
        l = &l * &c.den().div_exact(&g).unwrap();
    }
    let lrf = RationalFunction::from_poly(l);
    let comps: [MultiPoly; 3] = std::array::from_fn(|i| {
        (&cross[i] * &lrf)
            .as_polynomial()
            .cloned()
            .expect("common denominator clears")
    });
    Ok(FoliationField::normalize(comps))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cofactor {
    /// `dV(X) = c V`.
    Invariant(MultiPoly),
    /// `V` does not divide `dV(X)`; carries the division remainder.
    NotInvariant { remainder: MultiPoly },
}

impl Cofactor {
    pub fn cofactor(&self) -> Option<&MultiPoly> {
        match self {
            Cofactor::Invariant(c) => Some(c),
            Cofactor::NotInvariant { .. } => None,
        }
    }
}

pub fn invariant_cofactor(v: &MultiPoly, x: &VectorField) -> Result<Cofactor, GmError> {
    if v.is_zero() {
        return Err(GmError::ZeroPolynomial);
    }
    let dv = x.apply(v);
    let (q, r) = dv.div_rem(v);
    if r.is_zero() {
        Ok(Cofactor::Invariant(q))
    } else {
        Ok(Cofactor::NotInvariant { remainder: r })
    }
}
