//! Eisenstein series `g1, g2, g3` normalized so that `g` solves the
//! Ramanujan system, their q-expansions with explicit tail bounds, and the
//! root triple `theta`.

use std::f64::consts::PI;

use nalgebra::Matrix3;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::symbolic::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EisensteinError {
    #[error("Bernoulli index {0} outside 1..=8")]
    BernoulliRange(u32),
    #[error("weight index {0} outside 1..=3")]
    WeightRange(u32),
    #[error("z = {0} is not in the upper half plane")]
    NotUpperHalfPlane(Complex64),
    #[error("tolerance {tol:e} unreachable at |q| = {q_abs}")]
    Unreachable { tol: f64, q_abs: f64 },
    #[error("cubic root finding did not converge")]
    RootFinding,
    #[error("roots closer than {separation:e} at z = {z}; labels unreliable")]
    NearCollision { z: Complex64, separation: f64 },
}

/// Largest truncation order tried before giving up.
pub const MAX_ORDER: usize = 200_000;
/// Minimal root separation for trusted theta labels.
pub const COLLISION_SEPARATION: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Bernoulli numbers in the convention `B1 = 1/6, B2 = 1/30, B3 = 1/42, ..`
/// (absolute values of `B_{2k}`).
pub fn bernoulli(k: u32) -> Result<Rational, EisensteinError> {
    let (n, d) = match k {
        1 => (1, 6),
        2 => (1, 30),
        3 => (1, 42),
        4 => (1, 30),
        5 => (5, 66),
        6 => (691, 2730),
        7 => (7, 6),
        8 => (3617, 510),
        _ => return Err(EisensteinError::BernoulliRange(k)),
    };
    Ok(Rational::new(BigInt::from(n), BigInt::from(d)))
}

pub fn sigma_divisor(power: u32, n: u64) -> BigInt {
    assert!(n >= 1, "sigma of zero");
    let mut acc = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            acc += BigInt::from(d).pow(power);
            let e = n / d;
            if e != d {
                acc += BigInt::from(e).pow(power);
            }
        }
        d += 1;
    }
    acc
}

/// Same as [`sigma_divisor`] in floating point.
fn sigma_f64(power: u32, n: u64) -> f64 {
    let mut acc = 0.0;
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            acc += (d as f64).powi(power as i32);
            let e = n / d;
            if e != d {
                acc += (e as f64).powi(power as i32);
            }
        }
        d += 1;
    }
    acc
}

/// Constant terms `(a1, a2, a3) = (2 pi i/12, 12 (2 pi i/12)^2, 8 (2 pi i/12)^3)`.
pub fn p_infinity() -> [Complex64; 3] {
    let a = I * (2.0 * PI / 12.0);
    [a, 12.0 * a * a, 8.0 * a * a * a]
}

/// Truncated power series in `q` with a coefficient growth model
/// `|c_n| <= growth_c * n^growth_e` valid for every `n >= 1`, used to bound
/// the omitted tail.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries {
    pub coeffs: Vec<Complex64>,
    pub growth_c: f64,
    pub growth_e: f64,
}

impl QSeries {
    /// Truncation order `N` (index of the last stored coefficient).
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Upper bound for `|sum_{n > N} c_n q^n|` when `|q| = r`; infinite when
    /// the geometric majorant does not converge.
    pub fn tail_bound(&self, r: f64) -> f64 {
        tail_bound(self.growth_c, self.growth_e, self.order(), r)
    }

    /// Value and tail bound at `q`.
    pub fn eval(&self, q: Complex64) -> (Complex64, f64) {
        let mut acc = Complex64::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + c;
        }
        (acc, self.tail_bound(q.norm()))
    }
}

fn tail_bound(c: f64, e: f64, n: usize, r: f64) -> f64 {
    if c == 0.0 {
        return 0.0;
    }
    if r >= 1.0 {
        return f64::INFINITY;
    }
    let n1 = (n + 1) as f64;
    // n^e r^n is eventually decreasing with ratio at most rho after N+1.
    let rho = ((n1 + 1.0) / n1).powf(e) * r;
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    c * n1.powf(e) * r.powf(n1) / (1.0 - rho)
}

fn weight_check(k: u32) -> Result<(), EisensteinError> {
    if (1..=3).contains(&k) {
        Ok(())
    } else {
        Err(EisensteinError::WeightRange(k))
    }
}

/// `g_k = a_k (1 + (-1)^k (4k / B_k) sum sigma_{2k-1}(n) q^n)` truncated at
/// `q^N`.
pub fn eisenstein_series(k: u32, order: usize) -> Result<QSeries, EisensteinError> {
    weight_check(k)?;
    let a = p_infinity()[k as usize - 1];
    let b = bernoulli(k)?.to_f64().unwrap();
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let factor = a * (sign * 4.0 * k as f64 / b);
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(a);
    for n in 1..=order as u64 {
        coeffs.push(factor * sigma_f64(2 * k - 1, n));
    }
    Ok(QSeries {
        coeffs,
        growth_c: factor.norm(),
        // sigma_{2k-1}(n) <= n^{2k}
        growth_e: 2.0 * k as f64,
    })
}

/// `d/dz = 2 pi i q d/dq`.
pub fn q_derivative(series: &QSeries) -> QSeries {
    let coeffs = series
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| c * (I * (2.0 * PI * n as f64)))
        .collect();
    QSeries {
        coeffs,
        growth_c: series.growth_c * 2.0 * PI,
        growth_e: series.growth_e + 1.0,
    }
}

pub fn q_of(z: Complex64) -> Complex64 {
    (I * (2.0 * PI) * z).exp()
}

/// Smallest order whose tail bound at `|q| = r` is below `tol`.
fn choose_order(k: u32, derivative: bool, r: f64, tol: f64) -> Result<usize, EisensteinError> {
    let s = eisenstein_series(k, 0)?;
    let (c, e) = if derivative {
        (s.growth_c * 2.0 * PI, s.growth_e + 1.0)
    } else {
        (s.growth_c, s.growth_e)
    };
    if r >= 1.0 {
        return Err(EisensteinError::Unreachable { tol, q_abs: r });
    }
    let mut n = 0usize;
    while tail_bound(c, e, n, r) >= tol {
        n = if n < 16 { n + 1 } else { n + n / 8 };
        if n > MAX_ORDER {
            return Err(EisensteinError::Unreachable { tol, q_abs: r });
        }
    }
    // back off to the minimal order
    while n > 0 && tail_bound(c, e, n - 1, r) < tol {
        n -= 1;
    }
    Ok(n)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EisensteinTriple {
    pub z: Complex64,
    pub g: [Complex64; 3],
    /// Bound on the truncation error of each component.
    pub error_bound: f64,
}

fn check_z(z: Complex64) -> Result<(), EisensteinError> {
    if z.im > 0.0 && z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(EisensteinError::NotUpperHalfPlane(z))
    }
}

fn eval_triple(z: Complex64, tol: f64, derivative: bool) -> Result<EisensteinTriple, EisensteinError> {
    check_z(z)?;
    let q = q_of(z);
    let mut g = [Complex64::zero(); 3];
    let mut bound: f64 = 0.0;
    for k in 1..=3u32 {
        let n = choose_order(k, derivative, q.norm(), tol)?;
        let mut s = eisenstein_series(k, n)?;
        if derivative {
            s = q_derivative(&s);
        }
        let (v, b) = s.eval(q);
        g[k as usize - 1] = v;
        bound = bound.max(b);
    }
    Ok(EisensteinTriple {
        z,
        g,
        error_bound: bound,
    })
}

/// `(g1, g2, g3)(z)` with each component within `tol` of the full series.
pub fn eisenstein_eval(z: Complex64, tol: f64) -> Result<EisensteinTriple, EisensteinError> {
    eval_triple(z, tol, false)
}

/// `d/dz (g1, g2, g3)(z)` from the differentiated series.
pub fn eisenstein_derivative_eval(z: Complex64, tol: f64) -> Result<EisensteinTriple, EisensteinError> {
    eval_triple(z, tol, true)
}

/// Roots of `4u^3 - g2 u - g3` by companion-matrix eigenvalues and two
/// Newton steps.
pub fn weierstrass_roots(g2: Complex64, g3: Complex64) -> Result<[Complex64; 3], EisensteinError> {
    cubic_roots([-g3 / 4.0, -g2 / 4.0, Complex64::zero()])
}

/// Roots of the monic cubic `u^3 + c[2] u^2 + c[1] u + c[0]`.
pub fn cubic_roots(c: [Complex64; 3]) -> Result<[Complex64; 3], EisensteinError> {
    let zero = Complex64::zero();
    let one = Complex64::one();
    let m = Matrix3::new(zero, zero, -c[0], one, zero, -c[1], zero, one, -c[2]);
    let eig = m
        .schur()
        .eigenvalues()
        .ok_or(EisensteinError::RootFinding)?;
    let f = |u: Complex64| ((u + c[2]) * u + c[1]) * u + c[0];
    let df = |u: Complex64| (3.0 * u + 2.0 * c[2]) * u + c[1];
    let mut roots = [eig[0], eig[1], eig[2]];
    for r in roots.iter_mut() {
        for _ in 0..2 {
            let d = df(*r);
            if d.norm() > 0.0 {
                let step = f(*r) / d;
                if step.is_finite() {
                    *r -= step;
                }
            }
        }
        if !r.is_finite() {
            return Err(EisensteinError::RootFinding);
        }
    }
    Ok(roots)
}

/// Straight path from `base` along which theta labels are continued.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathWitness {
    pub base: Complex64,
    pub steps: usize,
}

impl PathWitness {
    /// Path from `i` with step length at most `0.05`.
    pub fn from_i(z: Complex64) -> Self {
        let base = I;
        let steps = ((z - base).norm() / 0.05).ceil().max(1.0) as usize;
        PathWitness { base, steps }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaTriple {
    pub z: Complex64,
    pub theta: [Complex64; 3],
    pub g: EisensteinTriple,
    pub witness: PathWitness,
    /// Smallest root separation seen along the path.
    pub min_separation: f64,
}

fn min_separation(r: &[Complex64; 3]) -> f64 {
    (r[0] - r[1]).norm().min((r[1] - r[2]).norm()).min((r[0] - r[2]).norm())
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Reorders `next` to be closest to `prev`.
pub(crate) fn match_labels(prev: &[Complex64; 3], next: &[Complex64; 3]) -> [Complex64; 3] {
    let best = PERMUTATIONS
        .iter()
        .min_by(|a, b| {
            let da: f64 = (0..3).map(|i| (prev[i] - next[a[i]]).norm()).sum();
            let db: f64 = (0..3).map(|i| (prev[i] - next[b[i]]).norm()).sum();
            da.total_cmp(&db)
        })
        .unwrap();
    [next[best[0]], next[best[1]], next[best[2]]]
}

fn roots_at(z: Complex64, tol: f64) -> Result<([Complex64; 3], EisensteinTriple), EisensteinError> {
    let g = eisenstein_eval(z, tol)?;
    let r = weierstrass_roots(g.g[1], g.g[2])?;
    let sep = min_separation(&r);
    if sep < COLLISION_SEPARATION {
        return Err(EisensteinError::NearCollision { z, separation: sep });
    }
    Ok((r, g))
}

/// `theta_i = g1(z) + e_i` with `e_i` the roots of `4u^3 - g2 u - g3`,
/// labeled lexicographically at the base point and by continuity along the
/// witness path.
pub fn theta_eval(z: Complex64, tol: f64, witness: &PathWitness) -> Result<ThetaTriple, EisensteinError> {
    check_z(z)?;
    check_z(witness.base)?;
    let (mut roots, mut g) = roots_at(witness.base, tol)?;
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut sep = min_separation(&roots);
    let steps = witness.steps.max(1);
    for j in 1..=steps {
        let w = witness.base + (z - witness.base) * (j as f64 / steps as f64);
        let (r, gw) = roots_at(w, tol)?;
        sep = sep.min(min_separation(&r));
        roots = match_labels(&roots, &r);
        g = gw;
    }
    let theta = roots.map(|e| g.g[0] + e);
    Ok(ThetaTriple {
        z,
        theta,
        g,
        witness: *witness,
        min_separation: sep,
    })
}

/// The symmetric quadratic system
/// `t1' = t1 (t2 + t3) - t2 t3` and cyclic permutations.
pub fn darboux_halphen(t: &[Complex64; 3]) -> [Complex64; 3] {
    [
        t[0] * (t[1] + t[2]) - t[1] * t[2],
        t[1] * (t[0] + t[2]) - t[0] * t[2],
        t[2] * (t[0] + t[1]) - t[0] * t[1],
    ]
}

/// `(t1^2 - t2/12, 4 t1 t2 - 6 t3, 6 t1 t3 - t2^2/3)`.
pub fn ramanujan(t: &[Complex64; 3]) -> [Complex64; 3] {
    [
        t[0] * t[0] - t[1] / 12.0,
        4.0 * t[0] * t[1] - 6.0 * t[2],
        6.0 * t[0] * t[2] - t[1] * t[1] / 3.0,
    ]
}
