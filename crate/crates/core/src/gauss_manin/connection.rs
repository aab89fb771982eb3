use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::family::{FamilyLabel, FamilySpec};
use super::GmError;
use crate::symbolic::{
    bezout_decompose_x, wedge, DifferentialForm1, DifferentialForm2, EvalError, MultiPoly,
    RationalFunction, Var, XPoly, NDIFF, NVARS, PAIRS,
};

/// 2x2 matrix over the rational function field.
pub type Mat2 = [[RationalFunction; 2]; 2];

pub fn mat2_identity() -> Mat2 {
    [
        [RationalFunction::one(), RationalFunction::zero()],
        [RationalFunction::zero(), RationalFunction::one()],
    ]
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]))
    })
}

pub fn mat2_det(a: &Mat2) -> RationalFunction {
    &(&a[0][0] * &a[1][1]) - &(&a[0][1] * &a[1][0])
}

pub fn mat2_inverse(a: &Mat2) -> Option<Mat2> {
    let inv = mat2_det(a).recip()?;
    Some([
        [&a[1][1] * &inv, -&(&a[0][1] * &inv)],
        [-&(&a[1][0] * &inv), &a[0][0] * &inv],
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisLabel {
    /// `(dx/y, x dx/y)`
    Omega,
    /// `(eta1, eta2)`
    Eta,
    /// Anything produced by an explicit [`change_basis`].
    Custom,
}

/// `nabla v = B v` for the column of basis forms `v`; entry `(r, c)` is the
/// 1-form multiplying basis form `c` in the derivative of basis form `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionMatrix {
    pub entries: [[DifferentialForm1; 2]; 2],
    pub basis: BasisLabel,
}

impl ConnectionMatrix {
    pub fn zero(basis: BasisLabel) -> Self {
        ConnectionMatrix {
            entries: std::array::from_fn(|_| std::array::from_fn(|_| DifferentialForm1::zero())),
            basis,
        }
    }

    /// Builds `(1/delta) * sum_i A_i dt_i`.
    pub fn from_components(
        a: &[[[MultiPoly; 2]; 2]; NDIFF],
        delta: &MultiPoly,
        basis: BasisLabel,
    ) -> Self {
        let mut out = ConnectionMatrix::zero(basis);
        for (i, ai) in a.iter().enumerate() {
            for r in 0..2 {
                for c in 0..2 {
                    out.entries[r][c].set(i, RationalFunction::new(ai[r][c].clone(), delta.clone()));
                }
            }
        }
        out
    }

    pub fn entry(&self, r: usize, c: usize) -> &DifferentialForm1 {
        &self.entries[r][c]
    }

    /// Coefficient matrix of `dt_i`.
    pub fn component(&self, i: usize) -> Mat2 {
        std::array::from_fn(|r| std::array::from_fn(|c| self.entries[r][c].coeff(i).clone()))
    }

    /// `delta * component(i)`, which is polynomial for the connections of
    /// this crate; `None` otherwise.
    pub fn scaled_component(&self, i: usize, delta: &MultiPoly) -> Option<[[MultiPoly; 2]; 2]> {
        let d = RationalFunction::from_poly(delta.clone());
        let m = self.component(i);
        let mut out: [[MultiPoly; 2]; 2] = Default::default();
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = (&m[r][c] * &d).as_polynomial()?.clone();
            }
        }
        Some(out)
    }

    /// Substitute `t0 = 1` and drop the `dt0` column.
    pub fn restrict_t0_one(&self) -> ConnectionMatrix {
        let one = MultiPoly::one();
        let mut out = ConnectionMatrix::zero(self.basis);
        for r in 0..2 {
            for c in 0..2 {
                for i in 1..NDIFF {
                    out.entries[r][c].set(i, self.entries[r][c].coeff(i).substitute(Var::T0, &one));
                }
            }
        }
        out
    }

    /// Numerical value of `component(i)` at a point.
    pub fn eval_component(
        &self,
        i: usize,
        point: &[Complex64; NVARS],
    ) -> Result<[[Complex64; 2]; 2], EvalError> {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = self.entries[r][c].coeff(i).evaluate(point)?;
            }
        }
        Ok(out)
    }

    /// `nabla_{d/dt_i}` applied to the section with coordinates `v` in the
    /// basis: `dv/dt_i + v * B_i`.
    pub fn covariant_derivative(&self, i: usize, v: &[RationalFunction; 2]) -> [RationalFunction; 2] {
        let b = self.component(i);
        let var = Var::from_index(i);
        std::array::from_fn(|c| {
            let mut s = v[c].derivative(var);
            for (k, vk) in v.iter().enumerate() {
                s = &s + &(vk * &b[k][c]);
            }
            s
        })
    }
}

impl fmt::Display for ConnectionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..2 {
            for c in 0..2 {
                writeln!(f, "[{},{}] {}", r + 1, c + 1, self.entries[r][c])?;
            }
        }
        Ok(())
    }
}

/// Reduction of `q dx/y^k` to the basis `(dx/y, x dx/y)` for one family.
/// Keeps the Bezout cofactors so repeated reductions do not re-solve.
pub struct Reducer {
    p: XPoly,
    dp: XPoly,
    delta: RationalFunction,
    a1: XPoly,
    a2: XPoly,
}

impl Reducer {
    pub fn new(family: &FamilySpec) -> Result<Self, GmError> {
        let p = family.p_x();
        let dp = p.derivative();
        let target = XPoly::from_multi(&family.discriminant);
        let (a1, a2) = bezout_decompose_x(&target, &p, &dp)?;
        Ok(Reducer {
            p,
            dp,
            delta: family.discriminant_rf(),
            a1,
            a2,
        })
    }

    pub fn cofactors(&self) -> (&XPoly, &XPoly) {
        (&self.a1, &self.a2)
    }

    /// `q dx/y` modulo `d(x^m y)`, using
    /// `d(x^m y) = (x^m p'/2 + m x^(m-1) p) dx/y`.
    pub fn reduce_pole1(&self, q: &XPoly) -> (RationalFunction, RationalFunction) {
        let mut q = q.clone();
        while let Some(d) = q.degree() {
            if d < 2 {
                break;
            }
            let m = d - 2;
            let mut r = self.dp.scale(&RationalFunction::constant(crate::symbolic::Rational::new(
                1.into(),
                2.into(),
            )));
            r = &r * &XPoly::x_pow(m);
            if m > 0 {
                r = &r + &(&self.p * &XPoly::x_pow(m - 1)).scale(&RationalFunction::int(m as i64));
            }
            let factor = &q.leading() / &r.leading();
            q = &q - &r.scale(&factor);
            debug_assert!(q.degree().is_none_or(|e| e < d));
        }
        (q.coeff(0), q.coeff(1))
    }

    /// `q dx/y^3`: with `delta = -p' a1 + p a2` and
    /// `r p' dx/y^3 = 2 r' dx/y` modulo exact forms,
    /// `q dx/y^3 = (q a2 - 2 (q a1)') / delta * dx/y`.
    pub fn reduce_pole3(&self, q: &XPoly) -> (RationalFunction, RationalFunction) {
        let qa1 = q * &self.a1;
        let num = &(q * &self.a2) - &qa1.derivative().scale(&RationalFunction::int(2));
        let (c1, c2) = self.reduce_pole1(&num);
        let inv = self.delta.recip().expect("nonzero discriminant");
        (&c1 * &inv, &c2 * &inv)
    }

    pub fn reduce(&self, q: &XPoly, pole_power: u32) -> Result<(RationalFunction, RationalFunction), GmError> {
        match pole_power {
            1 => Ok(self.reduce_pole1(q)),
            3 => Ok(self.reduce_pole3(q)),
            k => Err(GmError::PolePower(k)),
        }
    }
}

/// Writes `numerator * dx / y^pole_power` as `c1 dx/y + c2 x dx/y` modulo
/// relatively exact forms.
pub fn reduce_second_kind(
    numerator: &XPoly,
    pole_power: u32,
    family: &FamilySpec,
) -> Result<(RationalFunction, RationalFunction), GmError> {
    if pole_power != 1 && pole_power != 3 {
        return Err(GmError::PolePower(pole_power));
    }
    Reducer::new(family)?.reduce(numerator, pole_power)
}

/// The eta basis of the Weierstrass family in terms of `(dx/y, x dx/y)`.
pub fn eta_basis_matrix() -> Mat2 {
    super::fixtures::w_eta().s
}

/// Gauss-Manin connection of a family in the given basis, derived by
/// differentiating the basis integrands and reducing.
pub fn derive_connection(family: &FamilySpec, basis: BasisLabel) -> Result<ConnectionMatrix, GmError> {
    match basis {
        BasisLabel::Omega => derive_omega(family),
        BasisLabel::Eta if family.label == FamilyLabel::W => {
            let b = derive_omega(family)?;
            let mut out = change_basis(&b, &eta_basis_matrix())?;
            out.basis = BasisLabel::Eta;
            Ok(out)
        }
        _ => Err(GmError::UnsupportedBasis(family.label, basis)),
    }
}

fn derive_omega(family: &FamilySpec) -> Result<ConnectionMatrix, GmError> {
    let reducer = Reducer::new(family)?;
    let mut out = ConnectionMatrix::zero(BasisLabel::Omega);
    let half = RationalFunction::constant(crate::symbolic::Rational::new((-1).into(), 2.into()));
    for i in 0..NDIFF {
        // d/dti (x^k dx / y) = -x^k p_ti / 2 * dx / y^3
        let pt = family.p_param_derivative(Var::from_index(i)).scale(&half);
        if pt.is_zero() {
            continue;
        }
        for k in 0..2 {
            let q = &pt * &XPoly::x_pow(k);
            let (c1, c2) = reducer.reduce_pole3(&q);
            out.entries[k][0].set(i, c1);
            out.entries[k][1].set(i, c2);
        }
    }
    Ok(out)
}

/// One nonzero slot of `dB - B^B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// 1-based matrix entry.
    pub entry: (usize, usize),
    /// Basis bivector `dt_i ^ dt_j`.
    pub slot: (usize, usize),
    pub value: RationalFunction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrabilityReport {
    pub curvature: [[DifferentialForm2; 2]; 2],
    pub counterexamples: Vec<Counterexample>,
}

impl IntegrabilityReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Computes `dB - B^B` entry by entry.
pub fn check_integrability(b: &ConnectionMatrix) -> IntegrabilityReport {
    let mut curvature: [[DifferentialForm2; 2]; 2] =
        std::array::from_fn(|_| std::array::from_fn(|_| DifferentialForm2::zero()));
    let mut counterexamples = Vec::new();
    for r in 0..2 {
        for c in 0..2 {
            let mut v = b.entries[r][c].d();
            for k in 0..2 {
                v = &v - &wedge(&b.entries[r][k], &b.entries[k][c]);
            }
            for (slot, val) in PAIRS.iter().zip(v.coeffs()) {
                if !val.is_zero() {
                    counterexamples.push(Counterexample {
                        entry: (r + 1, c + 1),
                        slot: *slot,
                        value: val.clone(),
                    });
                }
            }
            curvature[r][c] = v;
        }
    }
    IntegrabilityReport {
        curvature,
        counterexamples,
    }
}

/// Connection in the basis `S * (old basis)`: `(dS + S B) S^{-1}`.
pub fn change_basis(b: &ConnectionMatrix, s: &Mat2) -> Result<ConnectionMatrix, GmError> {
    let s_inv = mat2_inverse(s).ok_or(GmError::SingularBasisChange)?;
    let mut out = ConnectionMatrix::zero(BasisLabel::Custom);
    for i in 0..NDIFF {
        let var = Var::from_index(i);
        let bi = b.component(i);
        let ds: Mat2 = std::array::from_fn(|r| std::array::from_fn(|c| s[r][c].derivative(var)));
        let sb = mat2_mul(s, &bi);
        let sum: Mat2 = std::array::from_fn(|r| std::array::from_fn(|c| &ds[r][c] + &sb[r][c]));
        let ni = mat2_mul(&sum, &s_inv);
        for r in 0..2 {
            for c in 0..2 {
                out.entries[r][c].set(i, ni[r][c].clone());
            }
        }
    }
    Ok(out)
}

/// Determinant of the 4x4 matrix whose row `i` is
/// `(A_i[1,1], A_i[1,2], A_i[2,1], A_i[2,2])`, `A_i = delta * B_i`.
pub fn stacked_determinant(b: &ConnectionMatrix, delta: &MultiPoly) -> Option<MultiPoly> {
    let mut m: Vec<Vec<MultiPoly>> = Vec::with_capacity(NDIFF);
    for i in 0..NDIFF {
        let a = b.scaled_component(i, delta)?;
        m.push(vec![
            a[0][0].clone(),
            a[0][1].clone(),
            a[1][0].clone(),
            a[1][1].clone(),
        ]);
    }
    Some(det_poly(&m))
}

/// Laplace expansion along the first row; fine for the 4x4 case.
fn det_poly(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = MultiPoly::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * &det_poly(&minor);
        if j % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    acc
}
