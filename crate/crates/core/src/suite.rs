//! Verification suites: every exact identity and numerical law the crate
//! implements, run as named cases and collected into a report.

use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::eisenstein::eisenstein_eval;
use crate::flows::{
    conservation_monitor, dh_flow_check, integrate_field, jacobian_order_ratio, period_jacobian_check,
    tangency_check, theta_sum_residual, EisensteinCurve, FieldHandle, FlowOptions, Quantity,
    TangencyMode, UniformizationCurve,
};
use crate::gauss_manin::{
    check_integrability, derive_connection, eta_basis_matrix, fixtures, foliation_from_form,
    invariant_cofactor, mat2_det, stacked_determinant, BasisLabel, Cofactor, FamilySpec, FormSpec,
    VectorField,
};
use crate::periods::{
    discriminant, inverse_period, period_matrix, raw_period_matrix, sl2z_reduce, PeriodMatrix, Point3,
};
use crate::symbolic::{parse_poly, MultiPoly, RationalFunction, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteKind {
    Symbolic,
    Numeric,
    All,
}

impl SuiteKind {
    pub fn name(&self) -> &'static str {
        match self {
            SuiteKind::Symbolic => "symbolic",
            SuiteKind::Numeric => "numeric",
            SuiteKind::All => "all",
        }
    }

    pub fn parse(s: &str) -> Option<SuiteKind> {
        match s {
            "symbolic" => Some(SuiteKind::Symbolic),
            "numeric" => Some(SuiteKind::Numeric),
            "all" => Some(SuiteKind::All),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// Residual of a case: an exact identity either holds or it does not.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Residual {
    Exact(ExactMarker),
    Value(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExactMarker {
    #[serde(rename = "exact-zero")]
    Zero,
    #[serde(rename = "exact-nonzero")]
    Nonzero,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub name: String,
    pub status: Status,
    pub residual: Option<Residual>,
    pub tolerance: Option<f64>,
    /// Short tag of the identity checked, or `plumbing`.
    pub reference: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub status: Status,
    pub seed: u64,
    pub tolerance: f64,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

type Outcome = Result<(Residual, Option<f64>, Status), String>;

fn exact(ok: bool) -> Outcome {
    let (r, s) = if ok {
        (ExactMarker::Zero, Status::Pass)
    } else {
        (ExactMarker::Nonzero, Status::Fail)
    };
    Ok((Residual::Exact(r), None, s))
}

fn numeric(residual: f64, tol: f64) -> Outcome {
    let status = if residual < tol { Status::Pass } else { Status::Fail };
    Ok((Residual::Value(residual), Some(tol), status))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

struct Runner {
    cases: Vec<CaseResult>,
}

impl Runner {
    fn run(&mut self, name: &str, reference: &str, f: impl FnOnce() -> Outcome) {
        let case = match f() {
            Ok((residual, tolerance, status)) => CaseResult {
                name: name.to_string(),
                status,
                residual: Some(residual),
                tolerance,
                reference: reference.to_string(),
                message: None,
            },
            Err(msg) => CaseResult {
                name: name.to_string(),
                status: Status::Error,
                residual: None,
                tolerance: None,
                reference: reference.to_string(),
                message: Some(msg),
            },
        };
        self.cases.push(case);
    }
}

fn rf(s: &str) -> RationalFunction {
    parse_poly(s).expect("literal parses").into()
}

fn symbolic_cases(r: &mut Runner) {
    let w = FamilySpec::weierstrass();
    r.run("sym.connection_w_omega", "gauss-manin connection", || {
        exact(derive_connection(&w, BasisLabel::Omega).map_err(err)? == fixtures::w_omega().connection(BasisLabel::Omega))
    });
    r.run("sym.connection_w_eta", "eta basis connection", || {
        exact(derive_connection(&w, BasisLabel::Eta).map_err(err)? == fixtures::w_eta().connection(BasisLabel::Eta))
    });
    r.run("sym.connection_l_slice", "root family connection", || {
        exact(derive_connection(&FamilySpec::roots(), BasisLabel::Omega).map_err(err)?.restrict_t0_one() == fixtures::l_omega())
    });
    for (name, fam, basis) in [
        ("sym.integrability_w_omega", FamilySpec::weierstrass(), BasisLabel::Omega),
        ("sym.integrability_w_eta", FamilySpec::weierstrass(), BasisLabel::Eta),
        ("sym.integrability_l", FamilySpec::roots(), BasisLabel::Omega),
    ] {
        r.run(name, "integrability dB = B^B", || {
            exact(check_integrability(&derive_connection(&fam, basis).map_err(err)?).passed())
        });
    }
    r.run("sym.stacked_determinant", "det of stacked components", || {
        let b = derive_connection(&w, BasisLabel::Omega).map_err(err)?;
        let det = stacked_determinant(&b, &w.discriminant).ok_or("components not polynomial")?;
        exact(det == &parse_poly("3/4*t0").unwrap() * &w.discriminant.pow(3))
    });
    r.run("sym.eta_basis_determinant_slice", "eta basis change", || {
        let one = MultiPoly::one();
        let det = mat2_det(&eta_basis_matrix()).substitute(Var::T0, &one);
        exact(det == rf("4/105*(27*t3^2 - t2^3)"))
    });
    r.run("sym.cofactor_delta_ra", "invariance of the discriminant", || {
        let c = invariant_cofactor(&parse_poly("27*t3^2 - t2^3").unwrap(), &VectorField::ramanujan()).map_err(err)?;
        exact(c == Cofactor::Invariant(parse_poly("12*t1").unwrap()))
    });
    let fol = |p1: &str, p2: &str, expected: [&str; 3]| -> Outcome {
        let f = foliation_from_form(&FormSpec::new(rf(p1), rf(p2)).map_err(err)?).map_err(err)?;
        let e = VectorField::new(expected.map(|s| parse_poly(s).unwrap()));
        exact(f.field().is_parallel(&e))
    };
    r.run("sym.foliation_ra", "modular foliation", || {
        fol("0", "1", ["t1^2 - 1/12*t2", "4*t1*t2 - 6*t3", "6*t1*t3 - 1/3*t2^2"])
    });
    r.run("sym.foliation_example1", "modular foliation", || {
        fol("s", "1", ["t1^2 + 2*t1*s - 1/12*t2 + s^2", "4*t1*t2 + 4*t2*s - 6*t3", "6*t1*t3 - 1/3*t2^2 + 6*t3*s"])
    });
    r.run("sym.foliation_example2", "modular foliation", || {
        fol(
            "-t1^2 + 1/12*t2",
            "2*t1",
            [
                "-48*t1^4 + 24*t1^2*t2 - 48*t1*t3 + t2^2",
                "-384*t1^3*t2 + 1728*t1^2*t3 - 96*t1*t2^2 + 48*t2*t3",
                "-576*t1^3*t3 + 96*t1^2*t2^2 - 144*t1*t2*t3 - 8*t2^3 + 288*t3^2",
            ],
        )
    });
    let eta_row = |i: usize| {
        let s = eta_basis_matrix();
        let one = MultiPoly::one();
        (s[i][0].substitute(Var::T0, &one), s[i][1].substitute(Var::T0, &one))
    };
    r.run("sym.foliation_eta1", "eta foliations", || {
        let (a, b) = eta_row(0);
        let f = foliation_from_form(&FormSpec::new(a, b).map_err(err)?).map_err(err)?;
        exact(f.field().is_parallel(&VectorField::translation()))
    });
    r.run("sym.foliation_eta2", "eta foliations", || {
        let (a, b) = eta_row(1);
        let f = foliation_from_form(&FormSpec::new(a, b).map_err(err)?).map_err(err)?;
        let e = VectorField::new(["-60*t1^2 + 5*t2", "48*t1*t2 - 72*t3", "72*t1*t3 - 4*t2^2"].map(|s| parse_poly(s).unwrap()));
        exact(f.field().is_parallel(&e))
    });
    r.run("sym.nabla_squared", "second covariant derivative", || {
        let b = derive_connection(&w, BasisLabel::Omega).map_err(err)?;
        let v = [RationalFunction::zero(), RationalFunction::one()];
        let twice = b.covariant_derivative(1, &b.covariant_derivative(1, &v));
        exact(twice.iter().all(RationalFunction::is_zero))
    });
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Random smooth parameter points with `|delta|` at least `0.05` of its
/// term scale.
pub fn random_smooth_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point3> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let t: Point3 = std::array::from_fn(|_| c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)));
        let (d, scale) = discriminant(&t);
        if d.norm() >= 0.05 * scale {
            out.push(t);
        }
    }
    out
}

/// Points `z` in the standard fundamental domain, away from its boundary.
pub fn fundamental_domain_grid(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let x = -0.45 + 0.9 * (k % 5) as f64 / 4.0;
            let y = 1.05 + 0.2 * (k / 5) as f64;
            c(x, y.max((1.0 - x * x).sqrt() + 0.05))
        })
        .collect()
}

fn rel_close(a: &Point3, b: &Point3) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).norm() / (1.0 + b[i].norm())).fold(0.0, f64::max)
}

fn numeric_cases(r: &mut Runner, tol: f64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let smooth = random_smooth_points(&mut rng, 50);
    let two_pi = 2.0 * std::f64::consts::PI;
    r.run("num.legendre_raw_determinant", "legendre relation", || {
        let mut worst: f64 = 0.0;
        for t in &smooth {
            let (p, _) = raw_period_matrix(t, 1e-13).map_err(err)?;
            worst = worst.max((p.det() - c(0.0, -two_pi)).norm() / two_pi);
        }
        numeric(worst, 1e-8)
    });
    r.run("num.period_standard_form", "period map of the eisenstein triple", || {
        let mut worst: f64 = 0.0;
        for z in [c(0.0, 1.1), c(0.3, 1.2), c(-0.4, 2.0)] {
            let g = eisenstein_eval(z, 1e-15).map_err(err)?.g;
            let (_, red) = sl2z_reduce(&period_matrix(&g, 1e-13).map_err(err)?).map_err(err)?;
            let std = PeriodMatrix::standard(z);
            let d = red.max_abs_diff(&std).min(red.left_mul(&[[-1, 0], [0, -1]]).max_abs_diff(&std));
            worst = worst.max(d);
        }
        numeric(worst, tol)
    });
    r.run("num.period_round_trip", "inverse period map", || {
        let mut worst: f64 = 0.0;
        for t in smooth.iter().take(10) {
            let back = inverse_period(&period_matrix(t, 1e-13).map_err(err)?, 1e-15).map_err(err)?;
            worst = worst.max(rel_close(&back, t));
        }
        numeric(worst, tol)
    });
    r.run("num.ramanujan_tangency", "ramanujan relations", || {
        let grid = fundamental_domain_grid(20);
        numeric(
            tangency_check(&EisensteinCurve { tol: 1e-15 }, &grid, &FieldHandle::Ra, TangencyMode::Exact).map_err(err)?,
            1e-8,
        )
    });
    r.run("num.uniformization_tangency", "uniformization of the leaves", || {
        let grid = fundamental_domain_grid(20);
        let mut worst: f64 = 0.0;
        for (c2, c4) in [(c(1.0, 0.0), c(0.5, 0.0)), (c(0.3, -0.2), c(1.0, 0.5))] {
            let u = UniformizationCurve { c2, c4, tol: 1e-15 };
            worst = worst.max(tangency_check(&u, &grid, &FieldHandle::Ra, TangencyMode::Projective).map_err(err)?);
        }
        numeric(worst, 1e-7)
    });
    let dh_grid: Vec<_> = (0..10).map(|k| c(-0.1 + 0.02 * k as f64, 1.5)).collect();
    r.run("num.darboux_halphen", "theta system", || {
        numeric(dh_flow_check(&dh_grid, 1e-15).map_err(err)?, tol)
    });
    r.run("num.theta_sum", "theta system", || {
        numeric(theta_sum_residual(&dh_grid, 1e-15).map_err(err)?, 1e-10)
    });
    let t0: Point3 = [c(0.0, 0.0), c(4.0, 0.0), c(1.0, 0.0)];
    r.run("num.jacobian_law", "derivative of the period map", || {
        numeric(period_jacobian_check(&t0, 1e-4, 1e-14).map_err(err)?.max_rel_error, 1e-5)
    });
    r.run("num.jacobian_order", "derivative of the period map", || {
        let ratio = jacobian_order_ratio(&t0, 1e-2, 1e-14).map_err(err)?;
        let status = if (3.5..=4.5).contains(&ratio) { Status::Pass } else { Status::Fail };
        Ok((Residual::Value((ratio - 4.0).abs()), Some(0.5), status))
    });
    r.run("num.conservation_b_xdxy", "real first integral", || {
        let mut worst: f64 = 0.0;
        for t in smooth.iter().skip(10).take(10) {
            let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
            let mut tr = integrate_field(&FieldHandle::Ra, t, phase, 1.0, &FlowOptions::new(1e-13)).map_err(err)?;
            let scale = Quantity::BXdxy.value(t, 1e-13).map_err(err)?.abs().max(1.0);
            worst = worst.max(conservation_monitor(&mut tr, Quantity::BXdxy, 1e-13).map_err(err)? / scale);
        }
        numeric(worst, tol)
    });
    r.run("num.conservation_b_mixed_m0", "real first integral", || {
        let start = eisenstein_eval(c(0.05, 1.4), 1e-15).map_err(err)?.g;
        let mut tr = integrate_field(&FieldHandle::Ra, &start, c(0.0, 1.0), 0.3, &FlowOptions::new(1e-11)).map_err(err)?;
        conservation_monitor(&mut tr, Quantity::BMixedAbs, 1e-13).map_err(err)?;
        let worst = tr.conserved[Quantity::BMixedAbs.name()].iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        numeric(worst, tol)
    });
    r.run("num.conservation_delta0", "first integral on the discriminant", || {
        let mut worst: f64 = 0.0;
        for (t1, t) in [(c(0.3, -0.1), c(0.7, 0.2)), (c(-0.5, 0.4), c(1.1, -0.3))] {
            let start = [t1, 3.0 * t * t, t * t * t];
            let mut tr =
                integrate_field(&FieldHandle::RestrictedDelta0, &start, c(1.0, 0.0), 1.0, &FlowOptions::new(1e-12)).map_err(err)?;
            worst = worst.max(conservation_monitor(&mut tr, Quantity::Delta0FirstIntegral, 1e-12).map_err(err)?);
        }
        numeric(worst, 1e-8)
    });
}

/// Runs the selected suite. `tol` is the threshold of the cases whose
/// default tolerance is `1e-6`; the others have fixed thresholds.
pub fn run_suite(which: SuiteKind, tol: f64, seed: u64) -> SuiteReport {
    let mut r = Runner { cases: Vec::new() };
    if matches!(which, SuiteKind::Symbolic | SuiteKind::All) {
        symbolic_cases(&mut r);
    }
    if matches!(which, SuiteKind::Numeric | SuiteKind::All) {
        numeric_cases(&mut r, tol, seed);
    }
    let mut cases = r.cases;
    cases.sort_by(|a, b| a.name.cmp(&b.name));
    let status = cases.iter().map(|c| c.status).max().unwrap_or(Status::Pass);
    SuiteReport {
        suite: which.name().to_string(),
        status,
        seed,
        tolerance: tol,
        cases,
    }
}

pub fn report_json(report: &SuiteReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

pub fn emit_report<W: Write>(report: &SuiteReport, mut w: W) -> std::io::Result<()> {
    w.write_all(report_json(report).as_bytes())?;
    w.write_all(b"\n")
}
