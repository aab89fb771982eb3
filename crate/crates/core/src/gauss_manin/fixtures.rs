//! Reference connection matrices, stored as text in the expression grammar.
//!
//! Each non-comment line is `key = expr` or `key = expr // expr`, the latter
//! denoting a quotient.

use std::collections::BTreeMap;

use super::connection::{BasisLabel, ConnectionMatrix, Mat2};
use super::GmError;
use crate::symbolic::{parse_poly, MultiPoly, RationalFunction, NDIFF};

pub const W_OMEGA: &str = include_str!("../../fixtures/w_omega.txt");
pub const W_ETA: &str = include_str!("../../fixtures/w_eta.txt");
pub const L_OMEGA: &str = include_str!("../../fixtures/l_omega.txt");

pub fn parse_fixture(text: &str) -> Result<BTreeMap<String, RationalFunction>, GmError> {
    let mut out = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: String| GmError::Fixture {
            line: lineno + 1,
            msg,
        };
        let (key, rhs) = line
            .split_once('=')
            .ok_or_else(|| bad("missing `=`".into()))?;
        let (num, den) = match rhs.split_once("//") {
            Some((n, d)) => (n, d),
            None => (rhs, "1"),
        };
        let num = parse_poly(num).map_err(|e| bad(e.to_string()))?;
        let den = parse_poly(den).map_err(|e| bad(e.to_string()))?;
        if den.is_zero() {
            return Err(bad("zero denominator".into()));
        }
        out.insert(key.trim().to_string(), RationalFunction::new(num, den));
    }
    Ok(out)
}

/// A connection displayed as `(1/delta) sum A_i dt_i`.
#[derive(Clone, Debug)]
pub struct PolyConnectionFixture {
    pub delta: MultiPoly,
    pub a: [[[MultiPoly; 2]; 2]; NDIFF],
    /// Basis change matrix, identity when the file has none.
    pub s: Mat2,
}

impl PolyConnectionFixture {
    pub fn connection(&self, basis: BasisLabel) -> ConnectionMatrix {
        ConnectionMatrix::from_components(&self.a, &self.delta, basis)
    }
}

fn poly_entry(map: &BTreeMap<String, RationalFunction>, key: &str) -> MultiPoly {
    map.get(key)
        .and_then(|f| f.as_polynomial().cloned())
        .unwrap_or_else(|| panic!("fixture entry {key} missing or not polynomial"))
}

fn load_poly_fixture(text: &str) -> PolyConnectionFixture {
    let map = parse_fixture(text).expect("bundled fixture parses");
    let delta = poly_entry(&map, "delta");
    let a = std::array::from_fn(|i| {
        std::array::from_fn(|r| {
            std::array::from_fn(|c| poly_entry(&map, &format!("A{i}[{},{}]", r + 1, c + 1)))
        })
    });
    let s = std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            map.get(&format!("S[{},{}]", r + 1, c + 1))
                .cloned()
                .unwrap_or_else(|| {
                    if r == c {
                        RationalFunction::one()
                    } else {
                        RationalFunction::zero()
                    }
                })
        })
    });
    PolyConnectionFixture { delta, a, s }
}

pub fn w_omega() -> PolyConnectionFixture {
    load_poly_fixture(W_OMEGA)
}

pub fn w_eta() -> PolyConnectionFixture {
    load_poly_fixture(W_ETA)
}

/// The root family on the slice `t0 = 1`; no `dt0` column.
pub fn l_omega() -> ConnectionMatrix {
    let map = parse_fixture(L_OMEGA).expect("bundled fixture parses");
    let mut out = ConnectionMatrix::zero(BasisLabel::Omega);
    for i in 1..NDIFF {
        for r in 0..2 {
            for c in 0..2 {
                let key = format!("B{i}[{},{}]", r + 1, c + 1);
                out.entries[r][c].set(i, map[&key].clone());
            }
        }
    }
    out
}
