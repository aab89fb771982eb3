//! Complex-time integration of the modular vector fields and numerical
//! checks of tangency, conservation and the period Jacobian.

use std::collections::BTreeMap;
use std::io::{self, Write};

use num_complex::Complex64;
use thiserror::Error;

use crate::eisenstein::{
    self, darboux_halphen, eisenstein_derivative_eval, eisenstein_eval, theta_eval,
    EisensteinError, PathWitness,
};
use crate::gauss_manin::{weierstrass_slice_connection, VectorField};
use crate::periods::{b_invariants, discriminant, period_matrix, PeriodError, PeriodMatrix, Point3};
use crate::symbolic::{EvalError, NVARS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("step size underflow at s = {s}")]
    StepUnderflow { s: f64 },
    #[error("trajectory left the bounding box at s = {s}")]
    OutOfBounds { s: f64 },
    #[error("step limit reached at s = {s}")]
    StepLimit { s: f64 },
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("start point is not on the discriminant (|delta| = {0:e})")]
    OffDiscriminant(f64),
    #[error("vector field vanishes along the curve at z = {0}")]
    Degenerate(Complex64),
    #[error("non-finite value at s = {s}")]
    NonFinite { s: f64 },
    #[error(transparent)]
    Period(#[from] PeriodError),
    #[error(transparent)]
    Eisenstein(#[from] EisensteinError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Vector fields the integrator knows about.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldHandle {
    Ra,
    Dh,
    /// Ra restricted to `delta = 0`, parameterized by `(t1, 3t^2, t^3)`:
    /// `t' = 2 t1 t - t^2`, `t1' = t1^2 - t^2/4`.
    RestrictedDelta0,
    /// Polynomial field with the formal parameter `s` fixed to `param`.
    Custom { field: VectorField, param: Complex64 },
}

impl FieldHandle {
    pub fn name(&self) -> &'static str {
        match self {
            FieldHandle::Ra => "ra",
            FieldHandle::Dh => "dh",
            FieldHandle::RestrictedDelta0 => "restricted_delta0",
            FieldHandle::Custom { .. } => "custom",
        }
    }

    /// Value of the field at a point of `C^3`.
    pub fn eval(&self, t: &Point3) -> Point3 {
        match self {
            FieldHandle::Ra => eisenstein::ramanujan(t),
            FieldHandle::Dh => darboux_halphen(t),
            FieldHandle::RestrictedDelta0 => {
                let tt = restricted_parameter(t);
                let dt = 2.0 * t[0] * tt - tt * tt;
                [t[0] * t[0] - tt * tt / 4.0, 6.0 * tt * dt, 3.0 * tt * tt * dt]
            }
            FieldHandle::Custom { field, param } => field.eval(t, *param),
        }
    }

    /// State the integrator advances.
    fn to_state(&self, t: &Point3) -> Point3 {
        match self {
            FieldHandle::RestrictedDelta0 => [t[0], restricted_parameter(t), Complex64::new(0.0, 0.0)],
            _ => *t,
        }
    }

    fn from_state(&self, y: &Point3) -> Point3 {
        match self {
            FieldHandle::RestrictedDelta0 => [y[0], 3.0 * y[1] * y[1], y[1] * y[1] * y[1]],
            _ => *y,
        }
    }

    fn rhs(&self, y: &Point3) -> Point3 {
        match self {
            FieldHandle::RestrictedDelta0 => {
                let (t1, t) = (y[0], y[1]);
                [t1 * t1 - t * t / 4.0, 2.0 * t1 * t - t * t, Complex64::new(0.0, 0.0)]
            }
            _ => self.eval(y),
        }
    }
}

/// `t` with `(t2, t3) = (3t^2, t^3)`.
pub fn restricted_parameter(t: &Point3) -> Complex64 {
    if t[1].norm() == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        3.0 * t[2] / t[1]
    }
}

/// `t1^2/t - t1 + t/4`.
pub fn delta0_first_integral(t: &Point3) -> Complex64 {
    let tt = restricted_parameter(t);
    t[0] * t[0] / tt - t[0] + tt / 4.0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowOptions {
    pub tol: f64,
    /// Largest allowed `|t_i|`.
    pub bound: f64,
    pub max_steps: usize,
}

impl FlowOptions {
    pub fn new(tol: f64) -> Self {
        FlowOptions {
            tol,
            bound: 1e8,
            max_steps: 200_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowTrajectory {
    pub field: FieldHandle,
    /// `(s, t(s))`, one per accepted step including the start.
    pub samples: Vec<(f64, Point3)>,
    pub phase: Complex64,
    pub stats: StepStats,
    /// Per-sample values of monitored quantities, keyed by name.
    pub conserved: BTreeMap<String, Vec<f64>>,
}

impl FlowTrajectory {
    pub fn start(&self) -> &Point3 {
        &self.samples[0].1
    }

    pub fn end(&self) -> &Point3 {
        &self.samples.last().expect("nonempty").1
    }

    /// Writes `s,re_t1,im_t1,...` followed by one column per monitored
    /// quantity.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        write!(w, "s,re_t1,im_t1,re_t2,im_t2,re_t3,im_t3")?;
        for k in self.conserved.keys() {
            write!(w, ",conserved_{k}")?;
        }
        writeln!(w)?;
        for (i, (s, t)) in self.samples.iter().enumerate() {
            write!(w, "{s}")?;
            for v in t {
                write!(w, ",{},{}", v.re, v.im)?;
            }
            for vals in self.conserved.values() {
                write!(w, ",{}", vals[i])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn axpy(y: &Point3, h: f64, ks: &[Point3], coef: &[f64]) -> Point3 {
    let mut out = *y;
    for (k, &a) in ks.iter().zip(coef) {
        if a != 0.0 {
            for i in 0..3 {
                out[i] += k[i] * (h * a);
            }
        }
    }
    out
}

/// Solves `dt/ds = phase X(t)` for `s` in `[0, length]` with Dormand-Prince
/// steps; the local error per step is below `tol` in the mixed
/// absolute/relative norm.
pub fn integrate_field(
    field: &FieldHandle,
    start: &Point3,
    phase: Complex64,
    length: f64,
    opts: &FlowOptions,
) -> Result<FlowTrajectory, FlowError> {
    let tol = opts.tol;
    if !(tol > 0.0) {
        return Err(FlowError::BadTolerance);
    }
    if *field == FieldHandle::RestrictedDelta0 {
        let (d, scale) = discriminant(start);
        if d.norm() > 1e-8 * scale.max(1.0) {
            return Err(FlowError::OffDiscriminant(d.norm()));
        }
    }
    let phase = phase / phase.norm();
    let f = |y: &Point3| -> Point3 { field.rhs(y).map(|v| v * phase) };
    let mut stats = StepStats::default();
    let mut y = field.to_state(start);
    let mut s = 0.0;
    let mut samples = vec![(0.0, *start)];
    let h_max = length / 20.0;
    let mut h = (length / 100.0).min(h_max);
    let mut k1 = f(&y);
    stats.evaluations += 1;
    while s < length {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(FlowError::StepLimit { s });
        }
        if s + h > length {
            h = length - s;
        }
        let mut ks = [k1; 7];
        for stage in 1..7 {
            let yi = axpy(&y, h, &ks[..stage], &A[stage][..stage]);
            ks[stage] = f(&yi);
        }
        stats.evaluations += 6;
        let y5 = axpy(&y, h, &ks, &B5);
        let y4 = axpy(&y, h, &ks, &B4);
        let mut err: f64 = 0.0;
        for i in 0..3 {
            let sc = tol + tol * y[i].norm().max(y5[i].norm());
            err = err.max((y5[i] - y4[i]).norm() / sc);
        }
        if !err.is_finite() {
            return Err(FlowError::NonFinite { s });
        }
        if err <= 1.0 {
            s += h;
            if length - s < 1e-14 * length {
                s = length;
            }
            y = y5;
            k1 = ks[6];
            stats.accepted += 1;
            let t = field.from_state(&y);
            if t.iter().any(|v| v.norm() > opts.bound) {
                return Err(FlowError::OutOfBounds { s });
            }
            samples.push((s, t));
        } else {
            stats.rejected += 1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = (h * factor).min(h_max);
        if s < length && h < 1e-14 * length.max(s) {
            return Err(FlowError::StepUnderflow { s });
        }
    }
    Ok(FlowTrajectory {
        field: field.clone(),
        samples,
        phase,
        stats,
        conserved: BTreeMap::new(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Quantity {
    BXdxy,
    BMixedAbs,
    Delta0FirstIntegral,
}

impl Quantity {
    pub fn name(&self) -> &'static str {
        match self {
            Quantity::BXdxy => "B_xdxy",
            Quantity::BMixedAbs => "B_mixed_abs",
            Quantity::Delta0FirstIntegral => "delta0_first_integral",
        }
    }

    /// Real value at a point; the first integral on `delta = 0` reports its
    /// modulus.
    pub fn value(&self, t: &Point3, tol: f64) -> Result<f64, FlowError> {
        Ok(match self {
            Quantity::BXdxy => b_invariants(t, tol)?.b_xdxy,
            Quantity::BMixedAbs => b_invariants(t, tol)?.b_mixed.norm(),
            Quantity::Delta0FirstIntegral => delta0_first_integral(t).norm(),
        })
    }
}

/// Evaluates `q` at every sample, stores the values on the trajectory and
/// returns the largest deviation from the first. The first integral on
/// `delta = 0` is compared as a complex number.
pub fn conservation_monitor(traj: &mut FlowTrajectory, q: Quantity, tol: f64) -> Result<f64, FlowError> {
    let mut vals = Vec::with_capacity(traj.samples.len());
    let mut drift: f64 = 0.0;
    let first = traj.start();
    let f0 = delta0_first_integral(first);
    let v0 = q.value(first, tol)?;
    for (_, t) in &traj.samples {
        let v = q.value(t, tol)?;
        let d = match q {
            Quantity::Delta0FirstIntegral => (delta0_first_integral(t) - f0).norm(),
            _ => (v - v0).abs(),
        };
        drift = drift.max(d);
        vals.push(v);
    }
    traj.conserved.insert(q.name().to_string(), vals);
    Ok(drift)
}

/// A holomorphic map `z -> C^3`.
pub trait Curve {
    fn value(&self, z: Complex64) -> Result<Point3, FlowError>;

    /// Five-point centered difference with step `1e-3`.
    fn derivative(&self, z: Complex64) -> Result<Point3, FlowError> {
        let h = 1e-3;
        let p1 = self.value(z + h)?;
        let m1 = self.value(z - h)?;
        let p2 = self.value(z + 2.0 * h)?;
        let m2 = self.value(z - 2.0 * h)?;
        Ok(std::array::from_fn(|i| (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h)))
    }
}

/// `z -> (g1, g2, g3)(z)` with the differentiated series as derivative.
pub struct EisensteinCurve {
    pub tol: f64,
}

impl Curve for EisensteinCurve {
    fn value(&self, z: Complex64) -> Result<Point3, FlowError> {
        Ok(eisenstein_eval(z, self.tol)?.g)
    }

    fn derivative(&self, z: Complex64) -> Result<Point3, FlowError> {
        Ok(eisenstein_derivative_eval(z, self.tol)?.g)
    }
}

/// `z -> (g1 w^2 + c4 w, g2 w^4, g3 w^6)` with `w = c4 z - c2`: the image
/// of `g(z)` under the group action with `k = 1/w`, `k' = c4`.
pub struct UniformizationCurve {
    pub c2: Complex64,
    pub c4: Complex64,
    pub tol: f64,
}

impl Curve for UniformizationCurve {
    fn value(&self, z: Complex64) -> Result<Point3, FlowError> {
        let g = eisenstein_eval(z, self.tol)?.g;
        let w = self.c4 * z - self.c2;
        let w2 = w * w;
        Ok([g[0] * w2 + self.c4 * w, g[1] * w2 * w2, g[2] * w2 * w2 * w2])
    }
}

impl<F: Fn(Complex64) -> Result<Point3, FlowError>> Curve for F {
    fn value(&self, z: Complex64) -> Result<Point3, FlowError> {
        self(z)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TangencyMode {
    /// `|c'(z) - X(c(z))| / |X(c(z))|`.
    Exact,
    /// Normalized cross product of `c'(z)` and `X(c(z))`.
    Projective,
}

fn norm3(v: &Point3) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest residual of the curve against the field over `grid`.
pub fn tangency_check<C: Curve + ?Sized>(
    curve: &C,
    grid: &[Complex64],
    field: &FieldHandle,
    mode: TangencyMode,
) -> Result<f64, FlowError> {
    let mut worst: f64 = 0.0;
    for &z in grid {
        let c = curve.value(z)?;
        let x = field.eval(&c);
        let nx = norm3(&x);
        if nx < 1e-12 * (1.0 + norm3(&c)) {
            return Err(FlowError::Degenerate(z));
        }
        let dc = curve.derivative(z)?;
        let r = match mode {
            TangencyMode::Exact => {
                let d: Point3 = std::array::from_fn(|i| dc[i] - x[i]);
                norm3(&d) / nx
            }
            TangencyMode::Projective => {
                let ndc = norm3(&dc);
                if ndc == 0.0 {
                    return Err(FlowError::Degenerate(z));
                }
                let cross: Point3 = std::array::from_fn(|i| {
                    let j = (i + 1) % 3;
                    let k = (i + 2) % 3;
                    dc[j] * x[k] - dc[k] * x[j]
                });
                norm3(&cross) / (ndc * nx)
            }
        };
        worst = worst.max(r);
    }
    Ok(worst)
}

fn theta_at(z: Complex64, tol: f64) -> Result<Point3, FlowError> {
    Ok(theta_eval(z, tol, &PathWitness::from_i(z))?.theta)
}

/// Residual of `d theta/dz` against the symmetric Darboux-Halphen system,
/// relative to the size of the right-hand side. Neighbouring values are
/// relabeled by continuity with the center.
pub fn dh_flow_check(grid: &[Complex64], tol: f64) -> Result<f64, FlowError> {
    let h = 1e-3;
    let mut worst: f64 = 0.0;
    for &z in grid {
        let th = theta_at(z, tol)?;
        let nb = |w: Complex64| -> Result<Point3, FlowError> {
            Ok(eisenstein::match_labels(&th, &theta_at(w, tol)?))
        };
        let p1 = nb(z + h)?;
        let m1 = nb(z - h)?;
        let p2 = nb(z + 2.0 * h)?;
        let m2 = nb(z - 2.0 * h)?;
        let d: Point3 = std::array::from_fn(|i| (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h));
        let rhs = darboux_halphen(&th);
        let diff: Point3 = std::array::from_fn(|i| d[i] - rhs[i]);
        worst = worst.max(norm3(&diff) / norm3(&rhs).max(1.0));
    }
    Ok(worst)
}

/// `max |theta1 + theta2 + theta3 - 3 g1|` over the grid.
pub fn theta_sum_residual(grid: &[Complex64], tol: f64) -> Result<f64, FlowError> {
    let mut worst: f64 = 0.0;
    for &z in grid {
        let t = theta_eval(z, tol, &PathWitness::from_i(z))?;
        worst = worst.max((t.theta[0] + t.theta[1] + t.theta[2] - 3.0 * t.g.g[0]).norm());
    }
    Ok(worst)
}

/// Expected derivative `per(t) * B_i^T` in direction `t_i` on `t0 = 1`.
pub fn period_derivative(p: &PeriodMatrix, t: &Point3, i: usize) -> Result<PeriodMatrix, FlowError> {
    let mut pt = [Complex64::new(0.0, 0.0); NVARS];
    pt[0] = Complex64::new(1.0, 0.0);
    pt[1..4].copy_from_slice(t);
    let b = weierstrass_slice_connection().eval_component(i, &pt)?;
    let bt = [[b[0][0], b[1][0]], [b[0][1], b[1][1]]];
    Ok(p.right_mul(&bt))
}

/// Aligns each row of `q` with the matching row of `base` up to sign.
fn align_rows(q: &PeriodMatrix, base: &PeriodMatrix) -> PeriodMatrix {
    let mut x = q.x;
    for r in 0..2 {
        let same = (x[2 * r] - base.x[2 * r]).norm() + (x[2 * r + 1] - base.x[2 * r + 1]).norm();
        let flip = (x[2 * r] + base.x[2 * r]).norm() + (x[2 * r + 1] + base.x[2 * r + 1]).norm();
        if flip < same {
            x[2 * r] = -x[2 * r];
            x[2 * r + 1] = -x[2 * r + 1];
        }
    }
    PeriodMatrix::new(x, q.normalized)
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobianReport {
    /// Relative error in each direction `t1, t2, t3`.
    pub per_direction: [f64; 3],
    pub max_rel_error: f64,
}

/// Centered differences of the normalized period matrix against
/// `per(t) * B_i^T`.
pub fn period_jacobian_check(t: &Point3, h: f64, tol: f64) -> Result<JacobianReport, FlowError> {
    let base = period_matrix(t, tol)?;
    let mut per_direction = [0.0; 3];
    for i in 1..=3 {
        let mut tp = *t;
        let mut tm = *t;
        tp[i - 1] += h;
        tm[i - 1] -= h;
        let pp = align_rows(&period_matrix(&tp, tol)?, &base);
        let pm = align_rows(&period_matrix(&tm, tol)?, &base);
        let fd = PeriodMatrix::new(std::array::from_fn(|k| (pp.x[k] - pm.x[k]) / (2.0 * h)), true);
        let expected = period_derivative(&base, t, i)?;
        let scale = expected.max_abs().max(base.max_abs());
        per_direction[i - 1] = fd.max_abs_diff(&expected) / scale;
    }
    let max_rel_error = per_direction.iter().copied().fold(0.0, f64::max);
    Ok(JacobianReport {
        per_direction,
        max_rel_error,
    })
}

/// Ratio of the Jacobian errors at `h` and `h/2`; close to `4` for a
/// second-order difference.
pub fn jacobian_order_ratio(t: &Point3, h: f64, tol: f64) -> Result<f64, FlowError> {
    let a = period_jacobian_check(t, h, tol)?.max_rel_error;
    let b = period_jacobian_check(t, h / 2.0, tol)?.max_rel_error;
    Ok(a / b)
}
