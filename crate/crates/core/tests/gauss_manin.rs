use std::time::Instant;

use modfol::gauss_manin::{
    change_basis, check_integrability, derive_connection, eta_basis_matrix, fixtures,
    foliation_from_form, invariant_cofactor, mat2_det, mat2_identity, mat2_inverse,
    reduce_second_kind, stacked_determinant, BasisLabel, Cofactor, FamilySpec, FormSpec,
    VectorField,
};
use modfol::symbolic::{parse_poly, MultiPoly, RationalFunction, Var, XPoly};

fn rf(s: &str) -> RationalFunction {
    parse_poly(s).unwrap().into()
}

fn field(a: &str, b: &str, c: &str) -> VectorField {
    VectorField::new([parse_poly(a).unwrap(), parse_poly(b).unwrap(), parse_poly(c).unwrap()])
}

#[test]
fn weierstrass_connection_matches_fixture() {
    let start = Instant::now();
    let b = derive_connection(&FamilySpec::weierstrass(), BasisLabel::Omega).unwrap();
    assert!(start.elapsed().as_secs() < 10);
    assert_eq!(b, fixtures::w_omega().connection(BasisLabel::Omega));
}

#[test]
fn a3_first_row_entries() {
    let fam = FamilySpec::weierstrass();
    let b = derive_connection(&fam, BasisLabel::Omega).unwrap();
    let a3 = b.scaled_component(3, &fam.discriminant).unwrap();
    assert_eq!(a3[0][0], parse_poly("3*t0^2*t1*t2 - 9/2*t0^2*t3").unwrap());
    assert_eq!(a3[0][1], parse_poly("-3*t0^2*t2").unwrap());
    let a1 = b.scaled_component(1, &fam.discriminant).unwrap();
    assert_eq!(a1[1][0], parse_poly("27*t0^2*t3^2 - t0*t2^3").unwrap());
    assert!(a1[0][0].is_zero() && a1[0][1].is_zero() && a1[1][1].is_zero());
}

#[test]
fn eta_connection_matches_fixture() {
    let b = derive_connection(&FamilySpec::weierstrass(), BasisLabel::Eta).unwrap();
    let expected = fixtures::w_eta().connection(BasisLabel::Eta);
    assert_eq!(b, expected);
}

#[test]
fn roots_family_matches_slice_fixture() {
    let b = derive_connection(&FamilySpec::roots(), BasisLabel::Omega).unwrap();
    assert_eq!(b.restrict_t0_one(), fixtures::l_omega());
}

#[test]
fn integrability_of_all_connections() {
    let start = Instant::now();
    let w = derive_connection(&FamilySpec::weierstrass(), BasisLabel::Omega).unwrap();
    assert!(check_integrability(&w).passed());
    let eta = derive_connection(&FamilySpec::weierstrass(), BasisLabel::Eta).unwrap();
    assert!(check_integrability(&eta).passed());
    let l = derive_connection(&FamilySpec::roots(), BasisLabel::Omega).unwrap();
    assert!(check_integrability(&l).passed());
    assert!(check_integrability(&l.restrict_t0_one()).passed());
    assert!(start.elapsed().as_secs() < 30);
}

#[test]
fn perturbed_connection_fails_in_expected_slot() {
    let fam = FamilySpec::weierstrass();
    let mut fx = fixtures::w_omega();
    fx.a[1][1][0] = &fx.a[1][1][0] + &MultiPoly::one();
    let b = fx.connection(BasisLabel::Omega);
    let report = check_integrability(&b);
    assert!(!report.passed());
    assert!(report
        .counterexamples
        .iter()
        .any(|c| c.entry == (2, 1) && c.slot == (1, 2)));
    let _ = fam;
}

#[test]
fn wedge_identity_for_omega11() {
    let w = derive_connection(&FamilySpec::weierstrass(), BasisLabel::Omega).unwrap();
    // the diagonal terms cancel in the (1,1) entry of B^B
    let lhs = w.entry(0, 0).d();
    let rhs = modfol::symbolic::wedge(w.entry(0, 1), w.entry(1, 0));
    assert_eq!(lhs, rhs);
}

#[test]
fn stacked_determinant_identity() {
    let fam = FamilySpec::weierstrass();
    let b = derive_connection(&fam, BasisLabel::Omega).unwrap();
    let det = stacked_determinant(&b, &fam.discriminant).unwrap();
    let expected = &parse_poly("3/4*t0").unwrap() * &fam.discriminant.pow(3);
    assert_eq!(det, expected);
}

#[test]
fn eta_basis_determinant() {
    let det = mat2_det(&eta_basis_matrix());
    let delta = FamilySpec::weierstrass().discriminant;
    // exact value in four variables
    let four_var = RationalFunction::new(&MultiPoly::int(4) * &delta, parse_poly("105*t0^2").unwrap());
    assert_eq!(det, four_var);
    // on t0 = 1 both normalizations agree
    let one = MultiPoly::one();
    let displayed = RationalFunction::new(&MultiPoly::int(4) * &delta, parse_poly("105*t0").unwrap());
    assert_eq!(det.substitute(Var::T0, &one), displayed.substitute(Var::T0, &one));
}

#[test]
fn change_basis_round_trip() {
    let b = derive_connection(&FamilySpec::weierstrass(), BasisLabel::Omega).unwrap();
    let s = eta_basis_matrix();
    let there = change_basis(&b, &s).unwrap();
    let back = change_basis(&there, &mat2_inverse(&s).unwrap()).unwrap();
    assert_eq!(back.entries, b.entries);
    let same = change_basis(&b, &mat2_identity()).unwrap();
    assert_eq!(same.entries, b.entries);
}

#[test]
fn reduce_x_squared() {
    let fam = FamilySpec::weierstrass();
    let q = XPoly::x_pow(2);
    let (c1, c2) = reduce_second_kind(&q, 1, &fam).unwrap();
    let one = MultiPoly::one();
    assert_eq!(c1.substitute(Var::T0, &one), rf("-t1^2 + 1/12*t2"));
    assert_eq!(c2.substitute(Var::T0, &one), rf("2*t1"));
    let (d1, d2) = reduce_second_kind(&XPoly::x_pow(0), 1, &fam).unwrap();
    assert_eq!((d1, d2), (RationalFunction::one(), RationalFunction::zero()));
    assert!(reduce_second_kind(&q, 2, &fam).is_err());
}

#[test]
fn nabla_squared_vanishes() {
    let b = derive_connection(&FamilySpec::weierstrass(), BasisLabel::Omega).unwrap();
    let v = [RationalFunction::zero(), RationalFunction::one()];
    let once = b.covariant_derivative(1, &v);
    assert_eq!(once, [RationalFunction::one(), RationalFunction::zero()]);
    let twice = b.covariant_derivative(1, &once);
    assert!(twice.iter().all(RationalFunction::is_zero));
}

#[test]
fn foliation_examples() {
    let ra = foliation_from_form(&FormSpec::new(rf("0"), rf("1")).unwrap()).unwrap();
    assert!(ra.field().is_parallel(&VectorField::ramanujan()));

    let ex1 = foliation_from_form(&FormSpec::new(rf("s"), rf("1")).unwrap()).unwrap();
    let ex1_expected = field(
        "t1^2 + 2*t1*s - 1/12*t2 + s^2",
        "4*t1*t2 + 4*t2*s - 6*t3",
        "6*t1*t3 - 1/3*t2^2 + 6*t3*s",
    );
    assert!(ex1.field().is_parallel(&ex1_expected));
    assert_eq!(ex1, ex1_expected.normalized());

    let ex2 = foliation_from_form(&FormSpec::new(rf("-t1^2 + 1/12*t2"), rf("2*t1")).unwrap()).unwrap();
    let ex2_expected = field(
        "-48*t1^4 + 24*t1^2*t2 - 48*t1*t3 + t2^2",
        "-384*t1^3*t2 + 1728*t1^2*t3 - 96*t1*t2^2 + 48*t2*t3",
        "-576*t1^3*t3 + 96*t1^2*t2^2 - 144*t1*t2*t3 - 8*t2^3 + 288*t3^2",
    );
    assert!(ex2.field().is_parallel(&ex2_expected));
    assert_eq!(ex2, ex2_expected.normalized());

    let s = eta_basis_matrix();
    let one = MultiPoly::one();
    let eta1 = FormSpec::new(s[0][0].substitute(Var::T0, &one), s[0][1].substitute(Var::T0, &one)).unwrap();
    let f1 = foliation_from_form(&eta1).unwrap();
    assert_eq!(f1.field(), &VectorField::translation());
    let eta2 = FormSpec::new(s[1][0].substitute(Var::T0, &one), s[1][1].substitute(Var::T0, &one)).unwrap();
    let f2 = foliation_from_form(&eta2).unwrap();
    let f2_expected = field("-60*t1^2 + 5*t2", "48*t1*t2 - 72*t3", "72*t1*t3 - 4*t2^2");
    assert!(f2.field().is_parallel(&f2_expected));
}

#[test]
fn degenerate_and_zero_forms() {
    assert!(FormSpec::new(rf("0"), rf("0")).is_err());
}

#[test]
fn cofactors() {
    let delta = parse_poly("27*t3^2 - t2^3").unwrap();
    let c = invariant_cofactor(&delta, &VectorField::ramanujan()).unwrap();
    assert_eq!(c, Cofactor::Invariant(parse_poly("12*t1").unwrap()));

    let c = invariant_cofactor(&parse_poly("t2").unwrap(), &VectorField::translation()).unwrap();
    assert_eq!(c, Cofactor::Invariant(MultiPoly::zero()));

    let ex1 = field(
        "t1^2 + 2*t1*s - 1/12*t2 + s^2",
        "4*t1*t2 + 4*t2*s - 6*t3",
        "6*t1*t3 - 1/3*t2^2 + 6*t3*s",
    );
    let c = invariant_cofactor(&delta, &ex1).unwrap();
    assert_eq!(c, Cofactor::Invariant(parse_poly("12*t1 + 12*s").unwrap()));

    // the four-variable discriminant is not invariant under Ra
    let delta4 = FamilySpec::weierstrass().discriminant;
    let c = invariant_cofactor(&delta4, &VectorField::ramanujan()).unwrap();
    assert!(matches!(c, Cofactor::NotInvariant { .. }));
}

#[test]
fn discriminant_invariant_for_sample_forms() {
    let delta = parse_poly("27*t3^2 - t2^3").unwrap();
    for (p1, p2) in [("0", "1"), ("s", "1"), ("t1", "t2"), ("t2^2 - t3", "t1 + 3")] {
        let f = foliation_from_form(&FormSpec::new(rf(p1), rf(p2)).unwrap()).unwrap();
        let c = invariant_cofactor(&delta, f.field()).unwrap();
        assert!(c.cofactor().is_some(), "form ({p1}, {p2})");
    }
}

#[test]
fn ramanujan_vanishes_on_singular_curve() {
    let ra = VectorField::ramanujan();
    let t2 = parse_poly("12*t1^2").unwrap();
    let t3 = parse_poly("8*t1^3").unwrap();
    for c in &ra.components {
        assert!(c.substitute(Var::T2, &t2).substitute(Var::T3, &t3).is_zero());
    }
}
