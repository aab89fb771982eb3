//! Multivariate GCD. The heuristic evaluation/interpolation method handles
//! almost every input; recursive content / primitive-part pseudo-remainder
//! sequences are the fallback.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{Monomial, MultiPoly, Rational, Var};

pub(crate) fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    let a = a.primitive();
    let b = b.primitive();
    if a == b {
        return a;
    }
    // Cheap exits for the common case of one argument dividing the other.
    if a.num_terms() <= b.num_terms() {
        if b.div_exact(&a).is_some() {
            return a;
        }
    } else if a.div_exact(&b).is_some() {
        return b;
    }

    if let Some(g) = heu_gcd(&a, &b) {
        return g.primitive();
    }

    let va = a.vars();
    let vb = b.vars();
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        return gcd(&content_in(&a, v), &b);
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        return gcd(&a, &content_in(&b, v));
    }

    let v = *va
        .iter()
        .min_by_key(|&&v| (a.degree_in(v).max(b.degree_in(v)), a.degree_in(v).min(b.degree_in(v))))
        .expect("non-constant polynomial has a variable");

    let ca = content_in(&a, v);
    let cb = content_in(&b, v);
    let g = gcd(&ca, &cb);
    let mut f1 = a.div_exact(&ca).expect("content divides");
    let mut f2 = b.div_exact(&cb).expect("content divides");
    if f1.degree_in(v) < f2.degree_in(v) {
        std::mem::swap(&mut f1, &mut f2);
    }
    if coprime_by_specialization(&f1, &f2, v) {
        return g.primitive();
    }
    loop {
        let r = pseudo_rem(&f1, &f2, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            f2 = MultiPoly::one();
            break;
        }
        f1 = f2;
        f2 = primitive_in(&r, v);
    }
    (&g * &primitive_in(&f2, v)).primitive()
}

/// GCD over the integers of two nonzero integer polynomials, found by
/// evaluating one variable at a large integer `xi`, recursing, and reading
/// the coefficients back as symmetric base-`xi` digits. A candidate is only
/// accepted after trial division. `None` if every evaluation point fails.
fn heu_gcd(a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
    let ca = int_content(a);
    let cb = int_content(b);
    let c = ca.gcd(&cb);
    if a.is_constant() || b.is_constant() {
        return Some(MultiPoly::constant(Rational::from_integer(c)));
    }
    let a = a.scale(&Rational::from_integer(ca).recip());
    let b = b.scale(&Rational::from_integer(cb).recip());
    let x = a.vars()[0];
    let mut xi: BigInt = BigInt::from(2) * max_norm(&a).min(max_norm(&b)) + 29;
    for _ in 0..6 {
        let at = MultiPoly::constant(Rational::from_integer(xi.clone()));
        let ea = a.substitute(x, &at);
        let eb = b.substitute(x, &at);
        if !ea.is_zero() && !eb.is_zero() {
            if let Some(gamma) = heu_gcd(&ea, &eb) {
                let g = interpolate(gamma, x, &xi).primitive();
                if !g.is_zero() && a.div_exact(&g).is_some() && b.div_exact(&g).is_some() {
                    return Some(g.scale(&Rational::from_integer(c)));
                }
            }
        }
        xi = xi * 73794u32 / 27011u32;
    }
    None
}

fn int_content(p: &MultiPoly) -> BigInt {
    p.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(c.numer()))
}

fn max_norm(p: &MultiPoly) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

fn interpolate(mut gamma: MultiPoly, x: Var, xi: &BigInt) -> MultiPoly {
    let half = xi / 2;
    let inv = Rational::from_integer(xi.clone()).recip();
    let mut out = MultiPoly::zero();
    let mut k = 0u16;
    while !gamma.is_zero() {
        let digit = MultiPoly::from_terms(gamma.terms().filter_map(|(m, c)| {
            let mut r = c.numer().mod_floor(xi);
            if r > half {
                r -= xi;
            }
            (!r.is_zero()).then(|| (*m, Rational::from_integer(r)))
        }));
        out = &out + &(&digit * &MultiPoly::monomial(Monomial::var(x, k), Rational::one()));
        gamma = (&gamma - &digit).scale(&inv);
        k += 1;
    }
    out
}

/// Sends every variable other than `v` to a small integer that keeps both
/// leading coefficients in `v` nonzero. If the images are coprime, so are
/// the primitive parts `a`, `b`: a common factor would survive with its
/// degree in `v`. `false` means "unknown".
fn coprime_by_specialization(a: &MultiPoly, b: &MultiPoly, v: Var) -> bool {
    const POINTS: [i64; 3] = [2, 3, -5];
    let others: Vec<Var> = a
        .vars()
        .into_iter()
        .chain(b.vars())
        .filter(|&w| w != v)
        .collect();
    let la = a.coeff_in_var(v, a.degree_in(v));
    let lb = b.coeff_in_var(v, b.degree_in(v));
    'attempt: for shift in 0..3i64 {
        let (mut sa, mut sb, mut la_s, mut lb_s) = (a.clone(), b.clone(), la.clone(), lb.clone());
        for (k, &w) in others.iter().enumerate() {
            let c = MultiPoly::int(POINTS[(k + shift as usize) % POINTS.len()] + 7 * shift);
            sa = sa.substitute(w, &c);
            sb = sb.substitute(w, &c);
            la_s = la_s.substitute(w, &c);
            lb_s = lb_s.substitute(w, &c);
        }
        if la_s.is_zero() || lb_s.is_zero() {
            continue 'attempt;
        }
        return univariate_gcd_is_constant(sa, sb, v);
    }
    false
}

fn univariate_gcd_is_constant(mut f1: MultiPoly, mut f2: MultiPoly, v: Var) -> bool {
    if f1.degree_in(v) < f2.degree_in(v) {
        std::mem::swap(&mut f1, &mut f2);
    }
    loop {
        if f2.is_zero() {
            return f1.degree_in(v) == 0;
        }
        if f2.degree_in(v) == 0 {
            return true;
        }
        let r = pseudo_rem(&f1, &f2, v).primitive();
        f1 = f2;
        f2 = r;
    }
}

/// GCD of the coefficients of `p` viewed as a polynomial in `v`.
pub(crate) fn content_in(p: &MultiPoly, v: Var) -> MultiPoly {
    let mut coeffs: Vec<MultiPoly> = p
        .coefficients_in(v)
        .into_iter()
        .filter(|c| !c.is_zero())
        .collect();
    coeffs.sort_by_key(|c| (c.num_terms(), c.total_degree()));
    let mut g = MultiPoly::zero();
    for c in &coeffs {
        g = gcd(&g, c);
        if g.is_constant() {
            return MultiPoly::one();
        }
    }
    g
}

fn primitive_in(p: &MultiPoly, v: Var) -> MultiPoly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").primitive()
}

/// A pseudo-remainder of `a` by `b` in `v`: `lc(b)^k a = q b + r` with
/// `deg_v r < deg_v b`.
fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, v: Var) -> MultiPoly {
    let db = b.degree_in(v);
    let lb = b.coeff_in_var(v, db);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.coeff_in_var(v, dr);
        let shift = MultiPoly::var(v).pow((dr - db) as u32);
        r = &(&r * &lb) - &(&(&lr * &shift) * b);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: usize) -> MultiPoly {
        MultiPoly::var(Var::from_index(i))
    }

    #[test]
    fn gcd_finds_common_factor() {
        let f = &t(1) - &t(2);
        let g = &t(2) * &t(3) + MultiPoly::int(1);
        let h = t(0).pow(2) + t(3);
        let a = &(&f * &g) * &f;
        let b = &(&f * &h) * &MultiPoly::int(6);
        assert_eq!(gcd(&a, &b), f.primitive());
    }

    #[test]
    fn gcd_of_discriminant_powers() {
        let d = &t(0) * &(&(&MultiPoly::int(27) * &t(0)) * &t(3).pow(2) - t(2).pow(3));
        let a = d.pow(2);
        let b = &d * &(&t(1) + &t(3));
        assert_eq!(gcd(&a, &b), d.primitive());
    }

    #[test]
    fn coprime_gives_one() {
        let a = t(1).pow(2) + t(2);
        let b = t(1) + t(3);
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn gcd_of_high_powers() {
        let p = &(&t(1) * &t(3)) - &(&t(2).pow(2) * &MultiPoly::int(3)) + MultiPoly::int(5);
        let q = &t(1) + &(&t(2) * &t(3));
        let r = &t(3).pow(2) - &t(1);
        let a = &p.pow(4) * &q.pow(2);
        let b = &p.pow(3) * &(&q * &r);
        assert_eq!(gcd(&a, &b), (&p.pow(3) * &q).primitive());
        assert_eq!(heu_gcd(&a.primitive(), &b.primitive()).map(|g| g.primitive()), Some((&p.pow(3) * &q).primitive()));
    }
}
