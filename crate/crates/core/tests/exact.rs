use num_traits::{One, Zero};
use proptest::prelude::*;
use wallcross::exact::{parse_ratfunc, series_expand, Coordinates, Exp, Laurent, Monomial, Var};
use wallcross::{LaurentPoly, Rational, Scalar};

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn poly(terms: &[(i64, i64, i64)]) -> LaurentPoly {
    Laurent::from_terms(terms.iter().map(|&(c, a, b)| (Monomial::int(a, b), r(c))))
}

fn s(terms: &[(i64, i64, i64)]) -> Scalar {
    Scalar::from_poly(poly(terms))
}

/// Evaluates at `q = x, t = y` by direct substitution (integer exponents).
fn eval_poly(p: &LaurentPoly, x: &Rational, y: &Rational) -> Rational {
    let pw = |b: &Rational, e: i64| -> Rational {
        let mut acc = r(1);
        let base = if e < 0 { b.recip() } else { b.clone() };
        for _ in 0..e.abs() {
            acc *= base.clone();
        }
        acc
    };
    p.terms().map(|(m, c)| c.clone() * pw(x, m.q.to_integer()) * pw(y, m.t.to_integer())).fold(r(0), |a, b| a + b)
}

fn eval(v: &Scalar, x: &Rational, y: &Rational) -> Rational {
    eval_poly(v.numer(), x, y) / eval_poly(v.denom(), x, y)
}

#[test]
fn additive_identity() {
    let x = s(&[(3, 1, -2), (-1, 0, 1)]);
    assert_eq!(&Scalar::zero() + &x, x);
}

#[test]
fn geometric_factorization() {
    let q1 = Scalar::q1();
    let lhs = &(&Scalar::one() - &q1.pow(2)) / &(&Scalar::one() - &q1);
    assert_eq!(lhs, &Scalar::one() + &q1);
}

#[test]
fn distributivity_example() {
    let (q1, q2) = (Scalar::q1(), Scalar::q2());
    let lhs = &(&q2 - &q1.inv().unwrap()) * &q1;
    assert_eq!(lhs, &(&q1 * &q2) - &Scalar::one());
}

#[test]
fn division_by_zero_is_an_error() {
    assert!(Scalar::q().checked_div(&Scalar::zero()).is_err());
    assert!(Scalar::new(poly(&[(1, 0, 0)]), LaurentPoly::zero()).is_err());
}

#[test]
fn coordinate_change_examples() {
    // q2 - 1/q1 written in the variables (q1, q2), i.e. X = q1, Y = q2.
    let x = s(&[(1, 0, 1), (-1, -1, 0)]);
    let qt = x.change_coordinates(Coordinates::Q1Q2ToQT);
    let expected = &(&Scalar::q() - &Scalar::q().inv().unwrap()) * &Scalar::t().inv().unwrap();
    assert_eq!(qt, expected);

    let q1q2 = s(&[(1, 1, 1)]).change_coordinates(Coordinates::Q1Q2ToQT);
    assert_eq!(q1q2, Scalar::q().pow(2));

    let half = Exp::new(1, 2);
    let q = Scalar::q().change_coordinates(Coordinates::QTToQ1Q2);
    assert_eq!(q, Scalar::mono(Monomial::new(half, half)));
}

#[test]
fn t_degree_range_example() {
    let p = &poly(&[(1, 0, 0), (-1, 2, 2)]) * &poly(&[(1, 0, 0), (-1, 1, 1)]);
    assert_eq!(p.t_degree_range().unwrap(), (Exp::from_integer(0), Exp::from_integer(3)));
    assert!(LaurentPoly::zero().t_degree_range().is_err());
}

#[test]
fn bar_substitute_example() {
    let p = poly(&[(1, 1, 0), (-1, -1, 0)]);
    assert_eq!(p.bar_substitute(Var::Q), poly(&[(1, -1, 0), (-1, 1, 0)]));
}

#[test]
fn series_example() {
    let x = Scalar::new(LaurentPoly::one(), poly(&[(1, 0, 0), (-1, 2, -2)])).unwrap();
    let got = series_expand(&x, Exp::from_integer(4)).unwrap();
    assert_eq!(got, poly(&[(1, 0, 0), (1, 2, -2), (1, 4, -4)]));
}

#[test]
fn series_rejects_binomial_lowest_part() {
    let x = Scalar::new(LaurentPoly::one(), poly(&[(1, 1, 0), (1, 1, 1)])).unwrap();
    assert!(series_expand(&x, Exp::from_integer(3)).is_err());
}

#[test]
fn serialization_example() {
    let x = &Scalar::q1() - &Scalar::one();
    assert_eq!(x.to_string(), "1*q^(1)*t^(1) - 1*q^(0)*t^(0)");
    let y = Scalar::new(poly(&[(1, 0, 0)]), poly(&[(1, 0, 2), (-1, 2, 0)])).unwrap();
    assert_eq!(y.to_string(), "(-1*q^(0)*t^(0))/(1*q^(2)*t^(0) - 1*q^(0)*t^(2))");
    assert_eq!(parse_ratfunc::<Rational>(&y.to_string()).unwrap(), y);
}

#[test]
fn half_integer_exponents_reduce() {
    let half = Exp::new(1, 2);
    let sq = Scalar::mono(Monomial::new(half, Exp::zero()));
    let num = &Scalar::one() - &Scalar::q();
    let den = &Scalar::one() - &sq;
    assert_eq!(&num / &den, &Scalar::one() + &sq);
}

fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i64..=3, -2i64..=2, -2i64..=2), 1..4).prop_map(|v| poly(&v))
}

fn arb_scalar() -> impl Strategy<Value = Scalar> {
    (arb_poly(), arb_poly()).prop_filter_map("nonzero denominator", |(n, d)| Scalar::new(n, d).ok())
}

fn points() -> Vec<(Rational, Rational)> {
    vec![
        (Rational::new(2.into(), 3.into()), Rational::new(5.into(), 7.into())),
        (r(3), Rational::new((-4).into(), 11.into())),
    ]
}

fn agree(a: &Scalar, b: &Scalar) -> bool {
    points().iter().all(|(x, y)| {
        let (da, db) = (eval_poly(a.denom(), x, y), eval_poly(b.denom(), x, y));
        da.is_zero() || db.is_zero() || eval(a, x, y) == eval(b, x, y)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn arithmetic_agrees_with_evaluation(a in arb_scalar(), b in arb_scalar()) {
        for (x, y) in points() {
            let ok = |v: &Scalar| !eval_poly(v.denom(), &x, &y).is_zero();
            if ok(&a) && ok(&b) {
                let sum = &a + &b;
                let prod = &a * &b;
                if ok(&sum) { prop_assert_eq!(eval(&sum, &x, &y), eval(&a, &x, &y) + eval(&b, &x, &y)); }
                if ok(&prod) { prop_assert_eq!(eval(&prod, &x, &y), eval(&a, &x, &y) * eval(&b, &x, &y)); }
            }
        }
    }

    #[test]
    fn canonical_form(a in arb_scalar(), b in arb_scalar()) {
        prop_assume!(!b.is_zero());
        let back = &(&a * &b) / &b;
        prop_assert_eq!(back.to_string(), a.to_string());
        prop_assert!(agree(&back, &a));
    }

    #[test]
    fn coordinate_change_is_a_ring_isomorphism(a in arb_scalar(), b in arb_scalar()) {
        let f = |v: &Scalar| v.change_coordinates(Coordinates::Q1Q2ToQT);
        prop_assert_eq!(f(&(&a * &b)), &f(&a) * &f(&b));
        prop_assert_eq!(f(&(&a + &b)), &f(&a) + &f(&b));
        prop_assert_eq!(f(&a).change_coordinates(Coordinates::QTToQ1Q2), a);
    }

    #[test]
    fn t_degree_range_is_additive(p in arb_poly(), q in arb_poly()) {
        prop_assume!(!p.is_zero() && !q.is_zero());
        let (a0, a1) = p.t_degree_range().unwrap();
        let (b0, b1) = q.t_degree_range().unwrap();
        prop_assert_eq!((&p * &q).t_degree_range().unwrap(), (a0 + b0, a1 + b1));
    }

    #[test]
    fn gcd_divides_and_cofactors_are_coprime(p in arb_poly(), q in arb_poly(), g in arb_poly()) {
        prop_assume!(!p.is_zero() && !q.is_zero() && !g.is_zero());
        let (a, b) = (&p * &g, &q * &g);
        let d = a.gcd(&b);
        let (ca, cb) = (a.div_exact(&d).unwrap(), b.div_exact(&d).unwrap());
        prop_assert!(d.div_exact(&g).is_some());
        prop_assert!(ca.gcd(&cb).as_monomial().is_some());
    }

    #[test]
    fn serialization_round_trips(a in arb_scalar()) {
        prop_assert_eq!(parse_ratfunc::<Rational>(&a.to_string()).unwrap(), a);
    }
}
