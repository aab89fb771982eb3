//! One test per acceptance criterion. Each prints a single
//! `[PASS]`/`[FAIL]` line with the measured value and the pinned threshold.

use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use modfol::eisenstein::eisenstein_eval;
use modfol::flows::{
    conservation_monitor, dh_flow_check, integrate_field, jacobian_order_ratio, period_jacobian_check,
    tangency_check, theta_sum_residual, EisensteinCurve, FieldHandle, FlowOptions, Quantity,
    TangencyMode, UniformizationCurve,
};
use modfol::gauss_manin::{
    check_integrability, derive_connection, eta_basis_matrix, fixtures, foliation_from_form,
    invariant_cofactor, mat2_det, stacked_determinant, BasisLabel, Cofactor, FamilySpec, FormSpec,
    VectorField,
};
use modfol::periods::{inverse_period, period_matrix, raw_period_matrix, sl2z_reduce, PeriodMatrix, Point3};
use modfol::suite::{fundamental_domain_grid, random_smooth_points};
use modfol::symbolic::{parse_poly, MultiPoly, RationalFunction};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn report(id: u32, title: &str, ok: bool, detail: String) {
    println!("[{}] {id:02} {title}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} failed: {detail}");
}

fn rf(s: &str) -> RationalFunction {
    parse_poly(s).unwrap().into()
}

fn field(s: [&str; 3]) -> VectorField {
    VectorField::new(s.map(|p| parse_poly(p).unwrap()))
}

const SEED: u64 = 20240601;

#[test]
fn criterion_01_connection_fixtures() {
    let start = Instant::now();
    let b = derive_connection(&FamilySpec::weierstrass(), BasisLabel::Omega).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let same = b == fixtures::w_omega().connection(BasisLabel::Omega);
    report(1, "connection fixtures", same && secs < 10.0, format!("equal = {same}, {secs:.2} s (< 10 s)"));
}

#[test]
fn criterion_02_integrability() {
    let start = Instant::now();
    let mut all = true;
    for (fam, basis) in [
        (FamilySpec::weierstrass(), BasisLabel::Omega),
        (FamilySpec::weierstrass(), BasisLabel::Eta),
        (FamilySpec::roots(), BasisLabel::Omega),
    ] {
        all &= check_integrability(&derive_connection(&fam, basis).unwrap()).passed();
    }
    let secs = start.elapsed().as_secs_f64();
    report(2, "integrability", all && secs < 30.0, format!("dB - B^B = 0: {all}, {secs:.2} s (< 30 s)"));
}

#[test]
fn criterion_03_determinant_identities() {
    let w = FamilySpec::weierstrass();
    let b = derive_connection(&w, BasisLabel::Omega).unwrap();
    let stacked = stacked_determinant(&b, &w.discriminant).unwrap() == &parse_poly("3/4*t0").unwrap() * &w.discriminant.pow(3);
    // literal target 4 delta / (105 t0) in four variables
    let target = RationalFunction::new(&MultiPoly::int(4) * &w.discriminant, parse_poly("105*t0").unwrap());
    let det = mat2_det(&eta_basis_matrix());
    let basis = det == target;
    report(
        3,
        "determinant identities",
        stacked && basis,
        format!("stacked = 3/4 t0 delta^3: {stacked}; det S = 4 delta/(105 t0): {basis} (computed {det})"),
    );
}

#[test]
fn criterion_04_cofactor() {
    let delta = parse_poly("27*t3^2 - t2^3").unwrap();
    let c = invariant_cofactor(&delta, &VectorField::ramanujan()).unwrap();
    let ok = c == Cofactor::Invariant(parse_poly("12*t1").unwrap());
    report(4, "cofactor of delta under Ra", ok, format!("{c:?}"));
}

#[test]
fn criterion_05_foliation_examples() {
    let cases: [(&str, &str, [&str; 3]); 3] = [
        ("0", "1", ["t1^2 - 1/12*t2", "4*t1*t2 - 6*t3", "6*t1*t3 - 1/3*t2^2"]),
        ("s", "1", ["t1^2 + 2*t1*s - 1/12*t2 + s^2", "4*t1*t2 + 4*t2*s - 6*t3", "6*t1*t3 - 1/3*t2^2 + 6*t3*s"]),
        (
            "-t1^2 + 1/12*t2",
            "2*t1",
            [
                "-48*t1^4 + 24*t1^2*t2 - 48*t1*t3 + t2^2",
                "-384*t1^3*t2 + 1728*t1^2*t3 - 96*t1*t2^2 + 48*t2*t3",
                "-576*t1^3*t3 + 96*t1^2*t2^2 - 144*t1*t2*t3 - 8*t2^3 + 288*t3^2",
            ],
        ),
    ];
    let mut ok = true;
    for (p1, p2, e) in cases {
        let f = foliation_from_form(&FormSpec::new(rf(p1), rf(p2)).unwrap()).unwrap();
        ok &= f.field().is_parallel(&field(e));
    }
    let s = eta_basis_matrix();
    let one = MultiPoly::one();
    let t0 = modfol::symbolic::Var::T0;
    let eta2 = FormSpec::new(s[1][0].substitute(t0, &one), s[1][1].substitute(t0, &one)).unwrap();
    let f = foliation_from_form(&eta2).unwrap();
    ok &= f.field().is_parallel(&field(["-60*t1^2 + 5*t2", "48*t1*t2 - 72*t3", "72*t1*t3 - 4*t2^2"]));
    report(5, "foliation examples", ok, format!("Ra, two examples and F_eta2 parallel: {ok}"));
}

#[test]
fn criterion_06_nabla_squared() {
    let b = derive_connection(&FamilySpec::weierstrass(), BasisLabel::Omega).unwrap();
    let v = [RationalFunction::zero(), RationalFunction::one()];
    let twice = b.covariant_derivative(1, &b.covariant_derivative(1, &v));
    let ok = twice.iter().all(RationalFunction::is_zero);
    report(6, "second covariant derivative of x dx/y", ok, format!("zero: {ok}"));
}

#[test]
fn criterion_07_legendre() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let two_pi_i = c(0.0, 2.0 * std::f64::consts::PI);
    let mut worst: f64 = 0.0;
    let mut worst_conj: f64 = 0.0;
    for t in random_smooth_points(&mut rng, 50) {
        let (p, _) = raw_period_matrix(&t, 1e-13).unwrap();
        worst = worst.max((p.det() - two_pi_i).norm() / two_pi_i.norm());
        worst_conj = worst_conj.max((p.det() + two_pi_i).norm() / two_pi_i.norm());
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        7,
        "raw determinant = 2 pi i",
        worst < 1e-8 && secs < 60.0,
        format!("max rel error {worst:e} (< 1e-8); against -2 pi i: {worst_conj:e}; {secs:.2} s"),
    );
}

#[test]
fn criterion_08_ramanujan_tangency() {
    let grid = fundamental_domain_grid(20);
    let r = tangency_check(&EisensteinCurve { tol: 1e-15 }, &grid, &FieldHandle::Ra, TangencyMode::Exact).unwrap();
    report(8, "Eisenstein-Ramanujan tangency", r < 1e-8, format!("residual {r:e} (< 1e-8)"));
}

#[test]
fn criterion_09_period_round_trip() {
    let mut worst_std: f64 = 0.0;
    for z in [c(0.0, 1.1), c(0.3, 1.2), c(-0.4, 2.0)] {
        let g = eisenstein_eval(z, 1e-15).unwrap().g;
        let (_, r) = sl2z_reduce(&period_matrix(&g, 1e-13).unwrap()).unwrap();
        let s = PeriodMatrix::standard(z);
        worst_std = worst_std.max(r.max_abs_diff(&s).min(r.left_mul(&[[-1, 0], [0, -1]]).max_abs_diff(&s)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut worst_rt: f64 = 0.0;
    for t in random_smooth_points(&mut rng, 10) {
        let back = inverse_period(&period_matrix(&t, 1e-13).unwrap(), 1e-15).unwrap();
        for i in 0..3 {
            worst_rt = worst_rt.max((back[i] - t[i]).norm() / (1.0 + t[i].norm()));
        }
    }
    report(
        9,
        "period round trip",
        worst_std < 1e-6 && worst_rt < 1e-6,
        format!("standard form {worst_std:e}, inverse round trip {worst_rt:e} (< 1e-6)"),
    );
}

#[test]
fn criterion_10_jacobian_law() {
    let t: Point3 = [c(0.0, 0.0), c(4.0, 0.0), c(1.0, 0.0)];
    let e = period_jacobian_check(&t, 1e-4, 1e-14).unwrap().max_rel_error;
    let ratio = jacobian_order_ratio(&t, 1e-2, 1e-14).unwrap();
    report(
        10,
        "Jacobian law",
        e < 1e-5 && (3.5..=4.5).contains(&ratio),
        format!("rel error {e:e} (< 1e-5), step-halving ratio {ratio:.4} (in [3.5, 4.5])"),
    );
}

#[test]
fn criterion_11_first_integrals() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let starts = random_smooth_points(&mut rng, 10);
    let mut worst: f64 = 0.0;
    for t in &starts {
        let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        let mut tr = integrate_field(&FieldHandle::Ra, t, phase, 1.0, &FlowOptions::new(1e-13)).unwrap();
        let scale = Quantity::BXdxy.value(t, 1e-13).unwrap().abs().max(1.0);
        worst = worst.max(conservation_monitor(&mut tr, Quantity::BXdxy, 1e-13).unwrap() / scale);
    }
    let start = eisenstein_eval(c(0.05, 1.4), 1e-15).unwrap().g;
    let mut tr = integrate_field(&FieldHandle::Ra, &start, c(0.0, 1.0), 0.3, &FlowOptions::new(1e-11)).unwrap();
    conservation_monitor(&mut tr, Quantity::BMixedAbs, 1e-13).unwrap();
    let mixed = tr.conserved["B_mixed_abs"].iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    report(
        11,
        "first-integral conservation",
        worst < 1e-6 && mixed < 1e-6,
        format!("B_xdxy drift {worst:e}, |B_mixed| - 1 on M0 start {mixed:e} (< 1e-6)"),
    );
}

#[test]
fn criterion_12_uniformization() {
    let grid = fundamental_domain_grid(20);
    let mut worst: f64 = 0.0;
    for (c2, c4) in [(c(1.0, 0.0), c(0.5, 0.0)), (c(0.3, -0.2), c(1.0, 0.5))] {
        let u = UniformizationCurve { c2, c4, tol: 1e-15 };
        worst = worst.max(tangency_check(&u, &grid, &FieldHandle::Ra, TangencyMode::Projective).unwrap());
    }
    report(12, "uniformization tangency", worst < 1e-7, format!("projective residual {worst:e} (< 1e-7)"));
}

#[test]
fn criterion_13_darboux_halphen() {
    let grid: Vec<_> = (0..10).map(|k| c(-0.1 + 0.02 * k as f64, 1.5)).collect();
    let r = dh_flow_check(&grid, 1e-15).unwrap();
    let s = theta_sum_residual(&grid, 1e-15).unwrap();
    report(
        13,
        "Darboux-Halphen residual",
        r < 1e-6 && s < 1e-10,
        format!("residual {r:e} (< 1e-6), theta sum {s:e} (< 1e-10)"),
    );
}

#[test]
fn criterion_14_restricted_first_integral() {
    let mut worst: f64 = 0.0;
    for (t1, t) in [(c(0.3, -0.1), c(0.7, 0.2)), (c(-0.5, 0.4), c(1.1, -0.3)), (c(1.0, 0.0), c(0.5, 0.5))] {
        let start = [t1, 3.0 * t * t, t * t * t];
        let mut tr = integrate_field(&FieldHandle::RestrictedDelta0, &start, c(1.0, 0.0), 1.0, &FlowOptions::new(1e-12)).unwrap();
        worst = worst.max(conservation_monitor(&mut tr, Quantity::Delta0FirstIntegral, 1e-12).unwrap());
    }
    report(14, "restricted first integral", worst < 1e-8, format!("drift {worst:e} (< 1e-8)"));
}

#[test]
fn criterion_15_determinism() {
    let start = Instant::now();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_modfol"))
            .args(["verify", "--suite", "all", "--seed", "42"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    let secs = start.elapsed().as_secs_f64();
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    report(
        15,
        "determinism",
        same && secs < 600.0 && a.status.code() == Some(0),
        format!("identical: {same}, exit {:?}, {secs:.2} s for two runs (< 5 min each)", a.status.code()),
    );
}
