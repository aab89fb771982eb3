use modfol::eisenstein::{
    eisenstein_derivative_eval, eisenstein_eval, p_infinity, ramanujan, sigma_divisor, theta_eval,
    weierstrass_roots, EisensteinError, PathWitness,
};
use modfol::Complex64;
use num_bigint::BigInt;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

#[test]
fn value_at_cusp() {
    let e = eisenstein_eval(c(0.0, 50.0), 1e-15).unwrap();
    let p = p_infinity();
    for k in 0..3 {
        assert!((e.g[k] - p[k]).norm() < 1e-30);
    }
}

#[test]
fn sigma_by_divisor_enumeration() {
    for n in 1..60u64 {
        let brute: u64 = (1..=n).filter(|d| n % d == 0).map(|d| d.pow(3)).sum();
        assert_eq!(sigma_divisor(3, n), BigInt::from(brute));
    }
}

#[test]
fn modularity() {
    let z = c(0.0, 2.0);
    let g = eisenstein_eval(z, 1e-15).unwrap().g;
    let h = eisenstein_eval(-1.0 / z, 1e-15).unwrap().g;
    assert!(close(h[1], z.powi(4) * g[1], 1e-10));
    assert!(close(h[2], z.powi(6) * g[2], 1e-10));
    // g1 is only quasi-modular
    assert!(close(h[0], z * z * g[0] + z, 1e-10));
    let z = c(0.2, 0.9);
    let g = eisenstein_eval(z, 1e-15).unwrap().g;
    let h = eisenstein_eval(-1.0 / z, 1e-15).unwrap().g;
    assert!(close(h[0], z * z * g[0] + z, 1e-9));
}

#[test]
fn periodicity() {
    let a = eisenstein_eval(c(0.1, 1.3), 1e-15).unwrap().g;
    let b = eisenstein_eval(c(1.1, 1.3), 1e-15).unwrap().g;
    for k in 0..3 {
        assert!(close(a[k], b[k], 1e-13));
    }
}

#[test]
fn derivative_matches_finite_differences() {
    let z = c(1.0, 1.0);
    let d = eisenstein_derivative_eval(z, 1e-15).unwrap().g;
    let h = 1e-4;
    let p = eisenstein_eval(z + h, 1e-15).unwrap().g;
    let m = eisenstein_eval(z - h, 1e-15).unwrap().g;
    for k in 0..3 {
        assert!(close((p[k] - m[k]) / (2.0 * h), d[k], 1e-7));
    }
}

#[test]
fn ramanujan_relations_hold() {
    for z in [c(0.0, 1.0), c(0.4, 1.1), c(-0.3, 2.5)] {
        let g = eisenstein_eval(z, 1e-15).unwrap().g;
        let d = eisenstein_derivative_eval(z, 1e-15).unwrap().g;
        let r = ramanujan(&g);
        for k in 0..3 {
            assert!(close(d[k], r[k], 1e-10), "z = {z}, k = {k}");
        }
    }
}

#[test]
fn theta_relations() {
    let z = c(0.1, 1.2);
    let t = theta_eval(z, 1e-15, &PathWitness::from_i(z)).unwrap();
    let g = t.g.g;
    let e = t.theta.map(|th| th - g[0]);
    assert!(close(e[0] + e[1] + e[2], c(0.0, 0.0), 1e-12));
    assert!(close(-4.0 * (e[0] * e[1] + e[0] * e[2] + e[1] * e[2]), g[1], 1e-12));
    assert!(close(4.0 * e[0] * e[1] * e[2], g[2], 1e-12));
    // labels at the base point are lexicographic
    let base = theta_eval(c(0.0, 1.0), 1e-15, &PathWitness::from_i(c(0.0, 1.0))).unwrap();
    let th = base.theta;
    let key = |a: &Complex64| (a.re, a.im);
    assert!(key(&th[0]) <= key(&th[1]) && key(&th[1]) <= key(&th[2]));
}

#[test]
fn weierstrass_roots_of_square_lattice() {
    let r = weierstrass_roots(c(4.0, 0.0), c(0.0, 0.0)).unwrap();
    let mut re: Vec<f64> = r.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    assert!((re[0] + 1.0).abs() < 1e-14 && re[1].abs() < 1e-14 && (re[2] - 1.0).abs() < 1e-14);
}

#[test]
fn errors() {
    assert!(matches!(eisenstein_eval(c(0.0, -1.0), 1e-10), Err(EisensteinError::NotUpperHalfPlane(_))));
    assert!(matches!(eisenstein_eval(c(0.0, 1e-6), 1e-15), Err(EisensteinError::Unreachable { .. })));
}
