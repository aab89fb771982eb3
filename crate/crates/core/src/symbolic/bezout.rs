use thiserror::Error;

use super::poly::{MultiPoly, Var};
use super::ratfunc::RationalFunction;
use super::xpoly::XPoly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BezoutError {
    #[error("target is not in the ideal <p, p'> within the degree caps")]
    Infeasible,
    #[error("p must be a cubic in x")]
    NotCubic,
    #[error("decomposition needs non-polynomial coefficients")]
    NonPolynomial,
}

/// Degree caps for `a1` and `a2`.
pub const A1_DEGREE: usize = 4;
pub const A2_DEGREE: usize = 3;

/// Finds `a1, a2` with `-p' a1 + p a2 = target`, `deg_x a1 <= 4`,
/// `deg_x a2 <= 3`.
///
/// The solutions form an affine space along `(p h, p' h)` with `deg h <= 1`.
/// The representative returned is the one whose `a1`, written in the
/// centered coordinate `u = x + p2/(3 p3)`, has no `u^3` and no `u^1` term
/// (when the centered constant term of `p` vanishes, only the `u^3` term is
/// removed).
pub fn bezout_decompose(
    target: &MultiPoly,
    p: &MultiPoly,
    p_prime: &MultiPoly,
) -> Result<(MultiPoly, MultiPoly), BezoutError> {
    let (a1, a2) = bezout_decompose_x(
        &XPoly::from_multi(target),
        &XPoly::from_multi(p),
        &XPoly::from_multi(p_prime),
    )?;
    match (a1.to_multi(), a2.to_multi()) {
        (Some(a1), Some(a2)) => Ok((a1, a2)),
        _ => Err(BezoutError::NonPolynomial),
    }
}

/// [`bezout_decompose`] on polynomials already split by powers of `x`.
pub fn bezout_decompose_x(
    target: &XPoly,
    p: &XPoly,
    p_prime: &XPoly,
) -> Result<(XPoly, XPoly), BezoutError> {
    if p.degree() != Some(3) {
        return Err(BezoutError::NotCubic);
    }
    let neqs = 7;
    if target.degree().is_some_and(|d| d >= neqs) {
        return Err(BezoutError::Infeasible);
    }
    // Clear denominators so the elimination runs over polynomials.
    let common = common_denominator(p.coeffs().iter().chain(p_prime.coeffs()).chain(target.coeffs()));
    let lift = |f: &RationalFunction| -> MultiPoly {
        let g = f * &RationalFunction::from_poly(common.clone());
        g.as_polynomial().cloned().expect("common denominator clears")
    };
    let nu = A1_DEGREE + 1;
    let nv = A2_DEGREE + 1;
    let mut rows = vec![vec![MultiPoly::zero(); nu + nv]; neqs];
    let mut rhs = vec![MultiPoly::zero(); neqs];
    for (m, row) in rows.iter_mut().enumerate() {
        for k in 0..nu {
            if m >= k {
                row[k] = -lift(&p_prime.coeff(m - k));
            }
        }
        for k in 0..nv {
            if m >= k {
                row[nu + k] = lift(&p.coeff(m - k));
            }
        }
        rhs[m] = lift(&target.coeff(m));
    }
    let sol = solve_fraction_free(rows, rhs).ok_or(BezoutError::Infeasible)?;
    let mut a1 = XPoly::new(sol[..nu].to_vec());
    let mut a2 = XPoly::new(sol[nu..].to_vec());

    // Normalize along the kernel direction.
    let c = -&(&p.coeff(2) / &(&RationalFunction::int(3) * &p.coeff(3)));
    let pu = p.shift(&c);
    let big_a = pu.coeff(3);
    let big_c = pu.coeff(0);
    let dp = p.derivative();
    let beta = -&(&a1.shift(&c).coeff(3) / &big_a);
    if !beta.is_zero() {
        a1 = &a1 + &p.scale(&beta);
        a2 = &a2 + &dp.scale(&beta);
    }
    if !big_c.is_zero() {
        let alpha = -&(&a1.shift(&c).coeff(1) / &big_c);
        if !alpha.is_zero() {
            let h = XPoly::new(vec![-&(&alpha * &c), alpha]);
            a1 = &a1 + &(p * &h);
            a2 = &a2 + &(&dp * &h);
        }
    }
    Ok((a1, a2))
}

fn common_denominator<'a>(fs: impl Iterator<Item = &'a RationalFunction>) -> MultiPoly {
    let mut acc = MultiPoly::one();
    for f in fs {
        if f.den().is_constant() {
            continue;
        }
        let g = acc.gcd(f.den());
        acc = &acc * &f.den().div_exact(&g).unwrap();
    }
    acc
}

/// Fraction-free row echelon solve of `rows * v = rhs` over the parameter
/// polynomials. Free unknowns are set to zero. `None` if inconsistent.
pub(crate) fn solve_fraction_free(
    mut rows: Vec<Vec<MultiPoly>>,
    mut rhs: Vec<MultiPoly>,
) -> Option<Vec<RationalFunction>> {
    let n = rows.first().map_or(0, Vec::len);
    let m = rows.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        let pick = (r..m)
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| (rows[i][col].num_terms(), rows[i][col].total_degree()));
        let Some(pr) = pick else { continue };
        rows.swap(r, pr);
        rhs.swap(r, pr);
        let piv = rows[r][col].clone();
        for i in 0..m {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            for j in 0..n {
                let v = &(&rows[i][j] * &piv) - &(&rows[r][j] * &f);
                rows[i][j] = v;
            }
            rhs[i] = &(&rhs[i] * &piv) - &(&rhs[r] * &f);
            remove_row_content(&mut rows[i], &mut rhs[i]);
        }
        pivots.push((r, col));
        r += 1;
    }
    for i in r..m {
        if !rhs[i].is_zero() {
            return None;
        }
    }
    let mut sol = vec![RationalFunction::zero(); n];
    // Reduced echelon form: each pivot row has a single nonzero pivot column
    // among pivot columns; free columns are zero.
    for &(i, col) in &pivots {
        sol[col] = RationalFunction::new(rhs[i].clone(), rows[i][col].clone());
    }
    Some(sol)
}

fn remove_row_content(row: &mut [MultiPoly], rhs: &mut MultiPoly) {
    let mut g = MultiPoly::zero();
    for e in row.iter().chain(std::iter::once(&*rhs)) {
        if e.is_zero() {
            continue;
        }
        g = g.gcd(e);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for e in row.iter_mut() {
        *e = e.div_exact(&g).unwrap();
    }
    *rhs = rhs.div_exact(&g).unwrap();
}

/// `-p' a1 + p a2`.
pub fn bezout_combination(a1: &MultiPoly, a2: &MultiPoly, p: &MultiPoly) -> MultiPoly {
    let dp = p.derivative(Var::X);
    &(p * a2) - &(&dp * a1)
}
