use std::fmt;

use serde::{Deserialize, Serialize};

use crate::symbolic::{parse_poly, MultiPoly, RationalFunction, Var, XPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyLabel {
    /// `y^2 = 4 t0 (x-t1)^3 - t2 (x-t1) - t3`
    W,
    /// `y^2 = 4 t0 (x-t1)(x-t2)(x-t3)`
    L,
}

impl fmt::Display for FamilyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyLabel::W => "W",
            FamilyLabel::L => "L",
        })
    }
}

/// A one-parameter-space family of plane cubics `y^2 = p(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub label: FamilyLabel,
    /// `p` as a polynomial in `x` and the parameters.
    pub p: MultiPoly,
    pub discriminant: MultiPoly,
}

impl FamilySpec {
    pub fn weierstrass() -> Self {
        FamilySpec {
            label: FamilyLabel::W,
            p: parse_poly("4*t0*(x-t1)^3 - t2*(x-t1) - t3").unwrap(),
            discriminant: parse_poly("t0*(27*t0*t3^2 - t2^3)").unwrap(),
        }
    }

    pub fn roots() -> Self {
        FamilySpec {
            label: FamilyLabel::L,
            p: parse_poly("4*t0*(x-t1)*(x-t2)*(x-t3)").unwrap(),
            discriminant: parse_poly("-16/27*(t0*(t1-t2)*(t2-t3)*(t3-t1))^2").unwrap(),
        }
    }

    pub fn from_label(label: FamilyLabel) -> Self {
        match label {
            FamilyLabel::W => FamilySpec::weierstrass(),
            FamilyLabel::L => FamilySpec::roots(),
        }
    }

    pub fn p_x(&self) -> XPoly {
        XPoly::from_multi(&self.p)
    }

    /// `dp/dti` as a polynomial in `x`.
    pub fn p_param_derivative(&self, v: Var) -> XPoly {
        XPoly::from_multi(&self.p.derivative(v))
    }

    pub fn discriminant_rf(&self) -> RationalFunction {
        RationalFunction::from_poly(self.discriminant.clone())
    }
}
