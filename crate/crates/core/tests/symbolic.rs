use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use modfol::symbolic::{
    exterior_derivative, parse_expression, parse_poly, wedge, DifferentialForm1, Monomial, MultiPoly,
    ParseError, Rational, RationalFunction, Var, NVARS,
};

fn poly_strategy(max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0u16..3, 0u16..3, 0u16..3), -6i64..=6, 1i64..=4), 0..max_terms).prop_map(|terms| {
        MultiPoly::from_terms(terms.into_iter().map(|((a, b, c), n, d)| {
            let m = Monomial::var(Var::T1, a).mul(&Monomial::var(Var::T2, b)).mul(&Monomial::var(Var::T3, c));
            (m, Rational::new(BigInt::from(n), BigInt::from(d)))
        }))
    })
}

fn nonzero_poly() -> impl Strategy<Value = MultiPoly> {
    poly_strategy(4).prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RationalFunction> {
    (poly_strategy(4), nonzero_poly()).prop_map(|(n, d)| RationalFunction::new(n, d))
}

fn form1() -> impl Strategy<Value = DifferentialForm1> {
    prop::array::uniform3(poly_strategy(3)).prop_map(|[a, b, c]| {
        DifferentialForm1::new([RationalFunction::zero(), a.into(), b.into(), c.into()])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_form_is_unique(n in poly_strategy(4), d in nonzero_poly(), c in nonzero_poly()) {
        let a = RationalFunction::new(n.clone(), d.clone());
        let b = RationalFunction::new(&n * &c, &d * &c);
        prop_assert_eq!(&a, &b);
        prop_assert!(a.den().leading_coeff() > Rational::from_integer(0.into()));
    }

    #[test]
    fn d_squared_vanishes(f in ratfunc()) {
        prop_assert!(exterior_derivative(&f).d().is_zero());
    }

    #[test]
    fn product_rule(f in ratfunc(), g in ratfunc()) {
        let lhs = exterior_derivative(&(&f * &g));
        let rhs = &(&f * &exterior_derivative(&g)) + &(&g * &exterior_derivative(&f));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz_for_one_forms(f in ratfunc(), a in form1()) {
        let lhs = (&f * &a).d();
        let rhs = &wedge(&exterior_derivative(&f), &a) + &(&f * &a.d());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_is_antisymmetric(a in form1(), b in form1()) {
        prop_assert_eq!(wedge(&a, &b), -&wedge(&b, &a));
        prop_assert!(wedge(&a, &a).is_zero());
    }

    #[test]
    fn print_then_parse(p in poly_strategy(6)) {
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn gcd_divides_common_factor(a in nonzero_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let g = (&a * &c).gcd(&(&b * &c));
        prop_assert!(g.div_exact(&c.primitive()).is_some() || c.is_constant());
    }

    #[test]
    fn evaluate_matches_exact_rational_value(f in ratfunc(), pt in prop::array::uniform3((-5i64..=5, 1i64..=3))) {
        // exact oracle: substitute rational values and divide
        let mut num = f.num().clone();
        let mut den = f.den().clone();
        let mut point = [Complex64::new(0.0, 0.0); NVARS];
        for (k, &(n, d)) in pt.iter().enumerate() {
            let v = Var::from_index(k + 1);
            let r = MultiPoly::ratio(n, d);
            num = num.substitute(v, &r);
            den = den.substitute(v, &r);
            point[k + 1] = Complex64::new(n as f64 / d as f64, 0.0);
        }
        let dv = den.constant_value().unwrap();
        prop_assume!(dv != Rational::from_integer(0.into()));
        let exact = (num.constant_value().unwrap() / dv).to_f64().unwrap();
        match f.evaluate(&point) {
            Ok(v) => prop_assert!((v.re - exact).abs() <= 1e-9 * (1.0 + exact.abs()), "{} vs {}", v, exact),
            Err(_) => {}
        }
    }
}

#[test]
fn parser_examples() {
    let p = parse_poly("t1^2 - 1/12*t2").unwrap();
    assert_eq!(p.num_terms(), 2);
    assert_eq!(p.coeff(&Monomial::var(Var::T1, 2)), Rational::from_integer(1.into()));
    assert_eq!(p.coeff(&Monomial::var(Var::T2, 1)), Rational::new((-1).into(), 12.into()));
    assert!(parse_poly("0").unwrap().is_zero());
    let a = &MultiPoly::var(Var::T1) + &MultiPoly::var(Var::T2);
    assert_eq!(parse_poly("(t1+t2)^3").unwrap(), &(&a * &a) * &a);
}

#[test]
fn parser_errors() {
    assert!(matches!(parse_poly("t1 t2"), Err(ParseError::Syntax { .. })));
    assert!(matches!(parse_poly("2t1"), Err(ParseError::Syntax { .. })));
    assert!(matches!(parse_poly("t1 +"), Err(ParseError::Syntax { .. })));
    assert!(matches!(parse_expression("t1 + y", &["t1"]), Err(ParseError::UnknownVariable { .. })));
}

#[test]
fn exterior_derivative_examples() {
    let d = exterior_derivative(&parse_poly("27*t3^2 - t2^3").unwrap().into());
    assert_eq!(d.coeff(3), &parse_poly("54*t3").unwrap().into());
    assert_eq!(d.coeff(2), &parse_poly("-3*t2^2").unwrap().into());
    assert!(d.coeff(0).is_zero() && d.coeff(1).is_zero());
    assert!(exterior_derivative(&RationalFunction::int(5)).is_zero());
    let w = wedge(&DifferentialForm1::basis(1), &DifferentialForm1::basis(2));
    assert_eq!(w.support(), vec![(1, 2)]);
    assert_eq!(w.coeff(1, 2), &RationalFunction::one());
}

#[test]
fn evaluate_examples() {
    let delta: RationalFunction = parse_poly("27*t3^2 - t2^3").unwrap().into();
    let mut pt = [Complex64::new(0.0, 0.0); NVARS];
    pt[2] = Complex64::new(12.0, 0.0);
    pt[3] = Complex64::new(8.0, 0.0);
    assert_eq!(delta.evaluate(&pt).unwrap(), Complex64::new(0.0, 0.0));
    let f = RationalFunction::new(parse_poly("t1 + 3").unwrap(), parse_poly("2").unwrap());
    assert_eq!(f.evaluate(&[Complex64::new(0.0, 0.0); NVARS]).unwrap(), Complex64::new(1.5, 0.0));
    let g = RationalFunction::new(MultiPoly::one(), parse_poly("t1").unwrap());
    assert!(g.evaluate(&[Complex64::new(0.0, 0.0); NVARS]).is_err());
}
