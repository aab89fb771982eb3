//! Gauss-Manin connections of the cubic families, basis changes and the
//! modular foliations they induce on parameter space.

mod connection;
mod family;
pub mod fixtures;
mod foliation;
pub mod monodromy;

use thiserror::Error;

use crate::symbolic::BezoutError;

pub use connection::{
    change_basis, check_integrability, derive_connection, eta_basis_matrix, mat2_det,
    mat2_identity, mat2_inverse, mat2_mul, reduce_second_kind, stacked_determinant, BasisLabel,
    ConnectionMatrix, Counterexample, IntegrabilityReport, Mat2, Reducer,
};
pub use family::{FamilyLabel, FamilySpec};
pub use foliation::{
    foliation_from_form, invariant_cofactor, weierstrass_slice_connection, Cofactor,
    FoliationField, FormSpec, VectorField, FORM_VARIABLES,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GmError {
    #[error("pole power {0} not supported (expected 1 or 3)")]
    PolePower(u32),
    #[error(transparent)]
    Bezout(#[from] BezoutError),
    #[error("basis {1:?} is not available for family {0}")]
    UnsupportedBasis(FamilyLabel, BasisLabel),
    #[error("basis change matrix is singular")]
    SingularBasisChange,
    #[error("form is zero")]
    ZeroForm,
    #[error("the two defining 1-forms are linearly dependent")]
    DegenerateForm,
    #[error("invariance test against the zero polynomial")]
    ZeroPolynomial,
    #[error("fixture line {line}: {msg}")]
    Fixture { line: usize, msg: String },
}
