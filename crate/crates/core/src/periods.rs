//! Periods of `dx/y` and `x dx/y` over the Weierstrass curves
//! `y^2 = 4 (x - t1)^3 - t2 (x - t1) - t3`, their inverse through the
//! Eisenstein series, and the real invariants of the leaves of Ra.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::eisenstein::{self, eisenstein_eval, EisensteinError};
use crate::gauss_manin::monodromy::{imat_det, imat_mul, IMat2, IDENTITY};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PeriodError {
    #[error("discriminant too small: |delta| = {delta:e} at scale {scale:e}")]
    Singular { delta: f64, scale: f64 },
    #[error("third root within {ratio:e} of the integration segment")]
    IllConditioned { ratio: f64 },
    #[error("root finding did not converge")]
    RootFinding,
    #[error("quadrature did not reach tolerance {tol:e} with {nodes} nodes")]
    Quadrature { tol: f64, nodes: usize },
    #[error("SL(2,Z) reduction did not terminate")]
    ReductionGuard,
    #[error("matrix has determinant {0}, expected 1")]
    NotUnimodular(i64),
    #[error(transparent)]
    Eisenstein(#[from] EisensteinError),
}

/// Relative size of `delta` below which a fiber counts as singular.
pub const SINGULAR_THRESHOLD: f64 = 1e-8;
/// Distance of the third root to a segment, relative to the root span,
/// below which a pairing is rejected.
pub const PATH_EPSILON: f64 = 1e-6;
const COMFORTABLE_CLEARANCE: f64 = 0.1;
/// Node cap for the quadrature.
pub const MAX_NODES: usize = 1 << 18;
pub const REDUCTION_GUARD: usize = 10_000;

const I: Complex64 = Complex64::new(0.0, 1.0);

pub type Point3 = [Complex64; 3];

/// `delta = 27 t3^2 - t2^3` and its term scale.
pub fn discriminant(t: &Point3) -> (Complex64, f64) {
    let a = 27.0 * t[2] * t[2];
    let b = t[1] * t[1] * t[1];
    (a - b, a.norm() + b.norm())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicRoots {
    pub roots: [Complex64; 3],
    /// Set when the discriminant is negligible (double root).
    pub double_root: bool,
}

/// Roots of `4 t0 (x - t1)^3 - t2 (x - t1) - t3`.
pub fn cubic_roots(t: &Point3, t0: Complex64) -> Result<CubicRoots, PeriodError> {
    let c = [-t[2] / (4.0 * t0), -t[1] / (4.0 * t0), Complex64::new(0.0, 0.0)];
    let u = eisenstein::cubic_roots(c).map_err(|_| PeriodError::RootFinding)?;
    let roots = u.map(|u| u + t[0]);
    let p = |x: Complex64| {
        let v = x - t[0];
        4.0 * t0 * v * v * v - t[1] * v - t[2]
    };
    for r in &roots {
        let v = *r - t[0];
        let scale = (4.0 * t0 * v * v * v).norm() + (t[1] * v).norm() + t[2].norm();
        if p(*r).norm() > 1e-12 * scale.max(1.0) {
            return Err(PeriodError::RootFinding);
        }
    }
    let delta = t0 * (27.0 * t0 * t[2] * t[2] - t[1] * t[1] * t[1]);
    let scale = t0.norm() * (27.0 * t0.norm() * t[2].norm_sqr() + t[1].norm().powi(3));
    Ok(CubicRoots {
        roots,
        double_root: delta.norm() <= 1e-10 * scale.max(f64::MIN_POSITIVE),
    })
}

/// Rows are cycles `delta1, delta2`; columns are the forms `dx/y, x dx/y`:
/// `[[x1, x2], [x3, x4]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodMatrix {
    pub x: [Complex64; 4],
    /// `true` once divided by the normalization constant [`lambda0`].
    pub normalized: bool,
}

impl PeriodMatrix {
    pub fn new(x: [Complex64; 4], normalized: bool) -> Self {
        PeriodMatrix { x, normalized }
    }

    /// `[[z, -1], [1, 0]]`.
    pub fn standard(z: Complex64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        PeriodMatrix::new([z, -one, one, Complex64::new(0.0, 0.0)], true)
    }

    pub fn det(&self) -> Complex64 {
        self.x[0] * self.x[3] - self.x[1] * self.x[2]
    }

    pub fn tau(&self) -> Complex64 {
        self.x[0] / self.x[2]
    }

    /// `Im(x1 conj(x3))`.
    pub fn b_dxy(&self) -> f64 {
        (self.x[0] * self.x[2].conj()).im
    }

    /// `Im(x2 conj(x4))`.
    pub fn b_xdxy(&self) -> f64 {
        (self.x[1] * self.x[3].conj()).im
    }

    /// `x1 conj(x4) - x2 conj(x3)`. Depends on the cycle basis.
    pub fn b_mixed(&self) -> Complex64 {
        self.x[0] * self.x[3].conj() - self.x[1] * self.x[2].conj()
    }

    /// `A * self`.
    pub fn left_mul(&self, a: &IMat2) -> PeriodMatrix {
        let f = |v: i64| v as f64;
        let x = &self.x;
        PeriodMatrix::new(
            [
                x[0] * f(a[0][0]) + x[2] * f(a[0][1]),
                x[1] * f(a[0][0]) + x[3] * f(a[0][1]),
                x[0] * f(a[1][0]) + x[2] * f(a[1][1]),
                x[1] * f(a[1][0]) + x[3] * f(a[1][1]),
            ],
            self.normalized,
        )
    }

    /// `self * g` for a complex 2x2 matrix.
    pub fn right_mul(&self, g: &[[Complex64; 2]; 2]) -> PeriodMatrix {
        let x = &self.x;
        PeriodMatrix::new(
            [
                x[0] * g[0][0] + x[1] * g[1][0],
                x[0] * g[0][1] + x[1] * g[1][1],
                x[2] * g[0][0] + x[3] * g[1][0],
                x[2] * g[0][1] + x[3] * g[1][1],
            ],
            self.normalized,
        )
    }

    pub fn max_abs_diff(&self, other: &PeriodMatrix) -> f64 {
        (0..4).map(|i| (self.x[i] - other.x[i]).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.x.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

impl fmt::Display for PeriodMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.x[0], self.x[1], self.x[2], self.x[3]
        )
    }
}

/// Normalization constant: the square root of `-2 pi i`,
/// `sqrt(2 pi) e^{-i pi/4}`. With it the normalized determinant is `1`
/// and `per(g(z))` is `[[z, -1], [1, 0]]` up to SL(2,Z).
pub fn lambda0() -> Complex64 {
    Complex64::from_polar((2.0 * PI).sqrt(), -PI / 4.0)
}

/// Closed cycle over the segment between two roots, as indices into the
/// sorted roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleSpec {
    pub a: usize,
    pub b: usize,
    pub sign: i8,
}

fn sort_roots(mut r: [Complex64; 3]) -> [Complex64; 3] {
    r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    r
}

/// Distance from `c` to the segment `[a, b]`.
fn segment_distance(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    let d = b - a;
    let s = ((c - a) * d.conj()).re / d.norm_sqr();
    let s = s.clamp(0.0, 1.0);
    (a + d * s - c).norm()
}

/// `(int x^0 dx/y, int x^1 dx/y)` over the double cover of `[a, b]` with
/// `x = m + h cos(theta)`, which turns the integral into
/// `2i int_0^pi x^k / sqrt(4 t0 (x - c)) dtheta`, evaluated with
/// Gauss-Chebyshev nodes and doubled until the change is below `tol`
/// relative to the size of the integrals.
fn segment_integrals(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    tol: f64,
) -> Result<[Complex64; 2], PeriodError> {
    let m = (a + b) * 0.5;
    let h = (b - a) * 0.5;
    let w_ref = (4.0 * (m - c)).sqrt();
    // Returns the two sums and the sum of absolute values, which bounds
    // the roundoff of the summation.
    let sum = |n: usize| -> ([Complex64; 2], f64) {
        let mut s = [Complex64::new(0.0, 0.0); 2];
        let mut abs = 0.0;
        for j in 1..=n {
            let theta = (2 * j - 1) as f64 * PI / (2 * n) as f64;
            let x = m + h * theta.cos();
            let mut w = (4.0 * (x - c)).sqrt();
            if (w * w_ref.conj()).re < 0.0 {
                w = -w;
            }
            let f = 1.0 / w;
            s[0] += f;
            s[1] += x * f;
            abs += f.norm() * (1.0 + x.norm());
        }
        let wgt = 2.0 * PI / n as f64;
        ([s[0] * I * wgt, s[1] * I * wgt], abs * wgt)
    };
    let mut n = 16;
    let (mut prev, _) = sum(n);
    loop {
        n *= 2;
        let (next, abs) = sum(n);
        let diff = (next[0] - prev[0]).norm().max((next[1] - prev[1]).norm());
        let scale = next[0].norm().max(next[1].norm()).max(1.0);
        if diff < tol / 4.0 * scale + 1e-14 * abs {
            return Ok(next);
        }
        if n >= MAX_NODES {
            return Err(PeriodError::Quadrature { tol, nodes: n });
        }
        prev = next;
    }
}

fn check_smooth(t: &Point3) -> Result<(), PeriodError> {
    let (d, scale) = discriminant(t);
    if d.norm() <= SINGULAR_THRESHOLD * scale.max(f64::MIN_POSITIVE) {
        return Err(PeriodError::Singular {
            delta: d.norm(),
            scale,
        });
    }
    Ok(())
}

/// Period integrals without the normalization factor, oriented so that
/// `Im(x1 conj(x3)) > 0`. Returns the matrix and the cycles used.
pub fn raw_period_matrix(t: &Point3, tol: f64) -> Result<(PeriodMatrix, [CycleSpec; 2]), PeriodError> {
    check_smooth(t)?;
    let roots = sort_roots(cubic_roots(t, Complex64::new(1.0, 0.0))?.roots);
    let span = (roots[0] - roots[1])
        .norm()
        .max((roots[1] - roots[2]).norm())
        .max((roots[0] - roots[2]).norm());
    // Shared vertex 1 first, then the other two choices; the first pairing
    // with comfortable clearance wins, otherwise the one with most clearance.
    let choices = [(0, 1, 2), (1, 0, 2), (0, 2, 1)];
    let clearance = |&(p, v, q): &(usize, usize, usize)| {
        let r1 = segment_distance(roots[p], roots[v], roots[q]) / span;
        let r2 = segment_distance(roots[v], roots[q], roots[p]) / span;
        r1.min(r2)
    };
    let best = choices
        .iter()
        .find(|c| clearance(c) >= COMFORTABLE_CLEARANCE)
        .or_else(|| choices.iter().max_by(|a, b| clearance(a).total_cmp(&clearance(b))))
        .expect("nonempty");
    let ratio = clearance(best);
    if ratio >= PATH_EPSILON {
        let (p, v, q) = *best;
        let i1 = segment_integrals(roots[p], roots[v], roots[q], tol)?;
        let i2 = segment_integrals(roots[v], roots[q], roots[p], tol)?;
        let mut pm = PeriodMatrix::new([i1[0], i1[1], i2[0], i2[1]], false);
        let mut sign = 1;
        if pm.b_dxy() < 0.0 {
            pm = pm.left_mul(&[[1, 0], [0, -1]]);
            sign = -1;
        }
        return Ok((
            pm,
            [
                CycleSpec { a: p, b: v, sign: 1 },
                CycleSpec { a: v, b: q, sign },
            ],
        ));
    }
    Err(PeriodError::IllConditioned { ratio })
}

/// Normalized period matrix `raw / lambda0`.
pub fn period_matrix(t: &Point3, tol: f64) -> Result<PeriodMatrix, PeriodError> {
    let (raw, _) = raw_period_matrix(t, tol * (2.0 * PI).sqrt())?;
    Ok(normalize(&raw))
}

pub fn normalize(raw: &PeriodMatrix) -> PeriodMatrix {
    if raw.normalized {
        return *raw;
    }
    let l = lambda0();
    PeriodMatrix::new(raw.x.map(|v| v / l), true)
}

/// `A * P` for `A` in SL(2,Z).
pub fn monodromy_apply(p: &PeriodMatrix, a: &IMat2) -> Result<PeriodMatrix, PeriodError> {
    let d = imat_det(a);
    if d != 1 {
        return Err(PeriodError::NotUnimodular(d));
    }
    Ok(p.left_mul(a))
}

/// Finds `A` in SL(2,Z) with `tau(A P)` in the standard fundamental domain.
pub fn sl2z_reduce(p: &PeriodMatrix) -> Result<(IMat2, PeriodMatrix), PeriodError> {
    let mut a = IDENTITY;
    let mut cur = *p;
    const EPS: f64 = 1e-12;
    for _ in 0..REDUCTION_GUARD {
        let tau = cur.tau();
        let n = tau.re.round();
        if n != 0.0 && tau.re.abs() > 0.5 + EPS {
            let step = [[1, -(n as i64)], [0, 1]];
            a = imat_mul(&step, &a);
            cur = cur.left_mul(&step);
            continue;
        }
        if tau.norm() < 1.0 - EPS {
            let step = [[0, -1], [1, 0]];
            a = imat_mul(&step, &a);
            cur = cur.left_mul(&step);
            continue;
        }
        return Ok((a, cur));
    }
    Err(PeriodError::ReductionGuard)
}

/// The group action `t . g = (t1 k^-2 + k' k^-1, t2 k^-4, t3 k^-6)` of
/// `g = [[k, k'], [0, 1/k]]`.
pub fn act(t: &Point3, k: Complex64, kp: Complex64) -> Point3 {
    let k2 = k * k;
    [t[0] / k2 + kp / k, t[1] / (k2 * k2), t[2] / (k2 * k2 * k2)]
}

/// Parameter point with the given normalized period matrix (modulo
/// SL(2,Z)): `t = g(tau) . g0`.
pub fn inverse_period(p: &PeriodMatrix, tol: f64) -> Result<Point3, PeriodError> {
    let p = normalize(p);
    let (_, r) = sl2z_reduce(&p)?;
    let tau = r.tau();
    let g = eisenstein_eval(tau, tol)?;
    Ok(act(&g.g, r.x[2], r.x[3]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeafClass {
    Disk,
    PuncturedDisk,
    BoundaryM0,
}

impl LeafClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            LeafClass::Disk => "disk",
            LeafClass::PuncturedDisk => "punctured_disk",
            LeafClass::BoundaryM0 => "boundary_M0",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeafInfo {
    pub t: Point3,
    pub b_dxy: f64,
    pub b_xdxy: f64,
    /// Computed in the reduced cycle basis.
    pub b_mixed: Complex64,
    /// Periods of `x dx/y` in the reduced basis.
    pub c2: Complex64,
    pub c4: Complex64,
    pub tau: Complex64,
    pub classification: LeafClass,
}

/// Real invariants of the normalized period matrix, with the mixed pairing
/// and `c2, c4` taken in the SL(2,Z)-reduced basis.
pub fn invariants_of(p: &PeriodMatrix, t: &Point3, tol: f64) -> Result<LeafInfo, PeriodError> {
    let p = normalize(p);
    let (_, r) = sl2z_reduce(&p)?;
    let b_xdxy = r.b_xdxy();
    let classification = if b_xdxy > tol {
        LeafClass::PuncturedDisk
    } else if b_xdxy < -tol {
        LeafClass::Disk
    } else {
        LeafClass::BoundaryM0
    };
    Ok(LeafInfo {
        t: *t,
        b_dxy: r.b_dxy(),
        b_xdxy,
        b_mixed: r.b_mixed(),
        c2: r.x[1],
        c4: r.x[3],
        tau: r.tau(),
        classification,
    })
}

pub fn b_invariants(t: &Point3, tol: f64) -> Result<LeafInfo, PeriodError> {
    let p = period_matrix(t, tol)?;
    invariants_of(&p, t, tol)
}

/// Same as [`b_invariants`]; the classification uses `tol` as the
/// threshold on `B_xdxy`.
pub fn leaf_classify(t: &Point3, tol: f64) -> Result<LeafInfo, PeriodError> {
    b_invariants(t, tol)
}

/// `K` membership diagnostic: the reduced `x dx/y` period `c4` is below
/// `tol`. Never a certificate.
pub fn looks_like_k(info: &LeafInfo, tol: f64) -> bool {
    info.c4.norm() < tol
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn singular_roots_flagged() {
        let r = cubic_roots(&[c(1.0, 0.0), c(12.0, 0.0), c(8.0, 0.0)], c(1.0, 0.0)).unwrap();
        assert!(r.double_root);
        let mut xs = r.roots.map(|z| z.re);
        xs.sort_by(f64::total_cmp);
        assert!(xs[0].abs() < 1e-6 && xs[1].abs() < 1e-6 && (xs[2] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn cube_roots_of_minus_one() {
        let r = cubic_roots(&[c(0.0, 0.0), c(0.0, 0.0), c(-4.0, 0.0)], c(1.0, 0.0)).unwrap();
        for z in r.roots {
            assert!((z * z * z + 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn reduce_translation() {
        let p = PeriodMatrix::standard(c(5.0, 1.0));
        let (a, r) = sl2z_reduce(&p).unwrap();
        assert_eq!(a, [[1, -5], [0, 1]]);
        assert!((r.tau() - c(0.0, 1.0)).norm() < 1e-14);
        let (a, _) = sl2z_reduce(&PeriodMatrix::standard(c(0.0, 1.0))).unwrap();
        assert_eq!(a, IDENTITY);
    }
}
