//! Exact algebra over the rationals: polynomials, rational functions,
//! differential forms and a small expression parser.

mod bezout;
mod forms;
mod gcd;
mod parser;
mod poly;
mod ratfunc;
mod xpoly;

pub use bezout::{bezout_combination, bezout_decompose, bezout_decompose_x, BezoutError};
pub use forms::{
    exterior_derivative, pair_index, wedge, DifferentialForm1, DifferentialForm2, NDIFF, NPAIRS,
    PAIRS,
};
pub use parser::{parse_expression, parse_poly, ParseError};
pub use poly::{Monomial, MultiPoly, Rational, Var, NVARS};
pub use ratfunc::{EvalError, RationalFunction, POLE_THRESHOLD};
pub use xpoly::XPoly;
