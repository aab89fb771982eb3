//! Modular foliations of elliptic curve families.
//!
//! The crate is split into an exact kernel ([`symbolic`]) for polynomial and
//! rational-function algebra over the rationals, the Gauss-Manin connection
//! machinery built on it ([`gauss_manin`]), and a floating-point side
//! ([`eisenstein`], [`periods`], [`flows`]) that evaluates the analytic
//! objects the connection describes. [`suite`] ties both sides together into
//! reproducible verification reports.

pub mod eisenstein;
pub mod flows;
pub mod gauss_manin;
pub mod periods;
pub mod suite;
pub mod symbolic;

pub use num_complex::Complex64;
