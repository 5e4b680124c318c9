use std::sync::OnceLock;

use num_traits::{One, Zero};
use wallcross::exact::{Exp, Monomial};
use wallcross::stable::{candidate_walls, SlopePoint, Stable};
use wallcross::symfunc::{Basis, SymFunc};
use wallcross::verify::{
    appendix_check, character_normalization, cherednik_character, conjecture_check, conjecture_sweep,
    positivity_report, schur_expansions, verma_character, Status,
};
use wallcross::{Partition, Rational, Scalar};

fn st() -> &'static Stable<Rational> {
    static S: OnceLock<Stable<Rational>> = OnceLock::new();
    S.get_or_init(Stable::new)
}

fn p(v: &[usize]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

fn e(a: i64, b: i64) -> Exp {
    Exp::new(a, b)
}

fn m(a: i64, b: i64) -> Scalar {
    Scalar::mono(Monomial::from_q1q2(a.into(), b.into()))
}

#[test]
fn golden_tables_reproduce_exactly() {
    let reports = appendix_check(st()).unwrap();
    assert_eq!(reports.len(), 18);
    for r in &reports {
        assert_eq!(r.status, Status::Match, "{}", r.to_json());
    }
}

#[test]
fn conjecture_for_two_and_three_points() {
    for n in 2..=3 {
        for r in conjecture_sweep(st(), n).unwrap() {
            assert_eq!(r.status, Status::Match, "{}", r.to_json());
        }
    }
    let r = conjecture_check(st(), 2, e(3, 2)).unwrap();
    assert_eq!(r.status, Status::Match);
    assert_eq!(r.params["wall"], true);
}

#[test]
fn conjecture_for_four_points() {
    let reports = conjecture_sweep(st(), 4).unwrap();
    let walls: Vec<_> = reports.iter().filter(|r| r.params["wall"] == true).map(|r| r.params["m"].clone()).collect();
    assert_eq!(walls, ["1/4", "1/3", "1/2", "2/3", "3/4"]);
    for r in reports {
        assert_eq!(r.status, Status::Match, "{}", r.to_json());
    }
}

#[test]
fn renormalized_crossing_depends_only_on_the_denominator() {
    for n in 2..=3 {
        for w in candidate_walls(n, Exp::zero(), Exp::one()) {
            let t = st().transition_matrix(n, SlopePoint::minus(w), SlopePoint::plus(w), true).unwrap();
            let first = e(1, *w.denom());
            let t1 = st().transition_matrix(n, SlopePoint::minus(first), SlopePoint::plus(first), true).unwrap();
            assert_eq!(t, t1, "n={n} w={w}");
        }
    }
}

#[test]
fn report_json_shape() {
    let r = conjecture_check(st(), 3, e(1, 2)).unwrap();
    assert_eq!(r.status, Status::Match);
    let j = r.to_json();
    assert!(j.get("witness").is_none());
    assert_eq!(j["check"], "conjecture");
    assert!(j["millis"].is_u64());
}

#[test]
fn slope_zero_normalization_is_uniform() {
    for n in 1..=3 {
        let k = character_normalization(st(), n).unwrap();
        assert!(!k.is_zero());
    }
}

#[test]
fn two_point_expansions_at_slope_zero() {
    let ex = schur_expansions(st(), 2, SlopePoint::plus(Exp::zero())).unwrap();
    let d = (&Scalar::one() - &m(0, 2)).inv().unwrap();
    let (two, eleven) = (p(&[2]), p(&[1, 1]));
    let f = &ex.iter().find(|(l, _)| *l == two).unwrap().1;
    assert_eq!(f.coeff(&two), d);
    assert_eq!(f.coeff(&eleven), &m(0, 1) * &d);
}

#[test]
fn characters_of_finite_dimensional_modules() {
    let (two, eleven) = (p(&[2]), p(&[1, 1]));
    let half = cherednik_character(st(), e(1, 2)).unwrap();
    let want = SymFunc::from_coeffs(2, Basis::Schur, [(two.clone(), Scalar::one())]).unwrap();
    assert_eq!(half.normalized.unwrap(), want);
    let three = cherednik_character(st(), e(3, 2)).unwrap();
    let want = SymFunc::from_coeffs(2, Basis::Schur, [(two, &m(1, 0) + &m(0, 1)), (eleven, Scalar::one())]).unwrap();
    assert_eq!(three.normalized.unwrap(), want);
    assert!(!three.raw.is_zero());
}

#[test]
fn verma_character_of_one_box() {
    let f = verma_character(st(), &p(&[1]), e(1, 2));
    let want = SymFunc::basis_element(Basis::Schur, &p(&[1]));
    assert_eq!(f, want);
}

#[test]
fn verma_character_is_a_series_in_t() {
    // (1 - t) s_2[X/(1 - t)] = s_2 + t s_11 + t^2 s_2 + ... has s_2
    // coefficient 1/(1 - t^2) after the prefactor.
    let f = verma_character(st(), &p(&[2]), Exp::zero());
    let t = |k: i64| Scalar::mono(Monomial::int(0, k));
    let d = (&Scalar::one() - &t(2)).inv().unwrap();
    assert_eq!(f.coeff(&p(&[2])), d);
    assert_eq!(f.coeff(&p(&[1, 1])), &t(1) * &d);
}

#[test]
fn positivity_reports() {
    let r = positivity_report(st(), 1, SlopePoint::plus(e(1, 2)), 6).unwrap();
    assert_eq!(r.status, Status::Match);
    let r = positivity_report(st(), 2, SlopePoint::plus(e(1, 2)), 8).unwrap();
    assert_eq!(r.status, Status::Match, "{}", r.to_json());
    let r = positivity_report(st(), 3, SlopePoint::plus(e(1, 3)), 8).unwrap();
    assert_ne!(r.status, Status::Mismatch, "{}", r.to_json());
    if r.status == Status::Skipped {
        assert!(r.witness.is_some());
    }
}

#[test]
fn schur_expansions_have_the_right_degree() {
    for (l, f) in schur_expansions(st(), 3, SlopePoint::plus(e(2, 3))).unwrap() {
        assert_eq!(f.degree(), 3, "{l}");
        assert!(f.coeffs().all(|(_, c)| !c.is_zero()));
    }
}
