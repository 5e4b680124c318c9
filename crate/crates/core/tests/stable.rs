use std::sync::OnceLock;

use num_traits::{One, Zero};
use proptest::prelude::*;
use wallcross::combin::{b_core, dominance_leq, enumerate_partitions};
use wallcross::exact::{Exp, Monomial};
use wallcross::fock::bar_matrix;
use wallcross::stable::{
    candidate_walls, cross_wall, degree_window, nabla_shift, renorm_factor, renormalize, Path, SlopePoint, Stable,
    StableBasisTable, StableError, WallCrossMatrix,
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

/// `c q1^a q2^b`.
fn m(c: i64, a: i64, b: i64) -> Scalar {
    Scalar::mono(Monomial::from_q1q2(a.into(), b.into())).scale(&Rational::from_integer(c.into()))
}

/// `c q^a` with `q` the Fock variable.
fn fq(c: i64, a: i64) -> Scalar {
    Scalar::mono(Monomial::int(a, 0)).scale(&Rational::from_integer(c.into()))
}

fn walls01(n: usize) -> Vec<Exp> {
    candidate_walls(n, Exp::zero(), Exp::one())
}

// Product over the cells of (q2^leg - q1^(arm+1)), computed from the
// diagram directly rather than through the library's diagonal_factor.
fn diagonal(lambda: &Partition) -> Scalar {
    let parts = lambda.parts();
    let mut out = Scalar::one();
    for (row, &len) in parts.iter().enumerate() {
        for col in 0..len {
            let arm = (len - col - 1) as i64;
            let leg = parts.iter().skip(row + 1).filter(|&&l| l > col).count() as i64;
            out = &out * &(&m(1, 0, leg) - &m(1, arm + 1, 0));
        }
    }
    out
}

#[test]
fn seeds_satisfy_the_axioms_on_both_sides_of_zero() {
    for n in 1..=4 {
        let seed = st().seed(n).unwrap();
        seed.check().unwrap();
        for lambda in seed.order() {
            assert_eq!(seed.get(lambda, lambda), diagonal(lambda), "{lambda}");
        }
        st().stable_basis(n, SlopePoint::minus(Exp::zero())).unwrap().check().unwrap();
    }
}

#[test]
fn one_point_seed() {
    let seed = st().seed(1).unwrap();
    assert_eq!(seed.order(), &[p(&[1])]);
    assert_eq!(seed.get(&p(&[1]), &p(&[1])), &Scalar::one() - &m(1, 1, 0));
}

#[test]
fn two_point_seed_is_lower_triangular() {
    let seed = st().seed(2).unwrap();
    assert!(seed.get(&p(&[1, 1]), &p(&[2])).is_zero());
    assert!(!seed.get(&p(&[2]), &p(&[1, 1])).is_zero());
}

#[test]
fn diagonal_window() {
    let s = SlopePoint::plus(e(1, 2));
    assert_eq!(degree_window(&p(&[2]), &p(&[2]), s), (0, 3));
    assert_eq!(degree_window(&p(&[1, 1]), &p(&[1, 1]), s), (-1, 2));
}

#[test]
fn off_diagonal_window_at_the_wall() {
    // mu = (1,1): t-range of the diagonal is [-1, 2]; the content gap is -2,
    // so the shift at m = 1/2 is -1 and the raw window is [-2, 1]. On the
    // plus side the upper end is excluded, on the minus side the lower end.
    let (l, mu) = (p(&[2]), p(&[1, 1]));
    assert_eq!(degree_window(&l, &mu, SlopePoint::plus(e(1, 2))), (-2, 0));
    assert_eq!(degree_window(&l, &mu, SlopePoint::minus(e(1, 2))), (-1, 1));
    // Off a wall both sides agree.
    assert_eq!(degree_window(&l, &mu, SlopePoint::plus(e(1, 3))), (-1, 1));
    assert_eq!(degree_window(&l, &mu, SlopePoint::minus(e(1, 3))), (-1, 1));
}

#[test]
fn candidate_wall_examples() {
    assert_eq!(walls01(2), vec![e(1, 2)]);
    let w3 = walls01(3);
    for w in [e(1, 3), e(1, 2), e(2, 3)] {
        assert!(w3.contains(&w));
    }
    assert!(candidate_walls(1, e(-5, 1), e(5, 1)).is_empty());
    assert!(candidate_walls(4, e(-2, 1), e(2, 1)).iter().all(|w| !w.is_integer()));
    assert_eq!(candidate_walls(2, e(0, 1), e(2, 1)), vec![e(1, 2), e(3, 2)]);
}

#[test]
fn two_and_three_point_wall_factors() {
    let (two, eleven) = (p(&[2]), p(&[1, 1]));
    let w = st().wall_matrix(2, e(1, 2)).unwrap();
    assert_eq!(w.matrix().get(&two, &eleven), &m(1, 0, 1) - &m(1, -1, 0));
    assert!(w.matrix().get(&eleven, &two).is_zero());
    let w = st().wall_matrix(2, e(3, 2)).unwrap();
    assert_eq!(w.matrix().get(&two, &eleven), &m(1, -1, 2) - &m(1, -2, 1));

    let (three, mid, col) = (p(&[3]), p(&[2, 1]), p(&[1, 1, 1]));
    let w = st().wall_matrix(3, e(1, 2)).unwrap();
    assert_eq!(w.matrix().get(&three, &col), &m(1, -1, 2) - &m(1, -2, 1));
    assert!(w.matrix().get(&three, &mid).is_zero());
    assert!(w.matrix().get(&mid, &col).is_zero());
}

#[test]
fn crossing_down_undoes_crossing_up() {
    let w = e(1, 2);
    let below = st().stable_basis(2, SlopePoint::minus(w)).unwrap();
    let (above, up) = cross_wall(&below, w).unwrap();
    let (back, down) = cross_wall(&above, w).unwrap();
    assert_eq!(back, below);
    assert_eq!(up, down);
}

#[test]
fn crossing_needs_an_adjacent_table() {
    let seed = st().seed(2).unwrap();
    assert!(matches!(cross_wall(&seed, e(1, 2)), Err(StableError::NotAdjacent(_))));
}

#[test]
fn nabla_periodicity_of_wall_matrices() {
    for n in 2..=3 {
        for w in walls01(n) {
            let low = st().wall_matrix(n, w).unwrap();
            let high = st().wall_matrix(n, w + Exp::one()).unwrap();
            for lambda in low.matrix().order() {
                for mu in low.matrix().order() {
                    let chi = mu.weight() * lambda.weight().inv();
                    assert_eq!(
                        high.matrix().get(lambda, mu),
                        low.matrix().get(lambda, mu).mul_monomial(chi),
                        "n={n} w={w} {lambda}|{mu}"
                    );
                }
            }
        }
    }
}

#[test]
fn nabla_shift_round_trip() {
    for n in 1..=3 {
        let t = st().stable_basis(n, SlopePoint::plus(e(1, 3))).unwrap();
        let up = nabla_shift(&t, 1);
        assert_eq!(up.slope, SlopePoint::plus(e(4, 3)));
        for l in t.order() {
            assert_eq!(up.get(l, l), t.get(l, l));
        }
        up.check().unwrap();
        assert_eq!(nabla_shift(&up, -1), t);
    }
}

#[test]
fn path_independence() {
    let slopes = [
        SlopePoint::plus(e(1, 2)),
        SlopePoint::minus(e(1, 1)),
        SlopePoint::plus(e(3, 2)),
        SlopePoint::minus(e(5, 3)),
        SlopePoint::plus(e(7, 4)),
        SlopePoint::plus(e(-1, 2)),
        SlopePoint::minus(e(-2, 3)),
    ];
    for n in 1..=4 {
        for s in slopes {
            st().check_path_independence(n, s).unwrap_or_else(|err| panic!("n={n} {s}: {err}"));
            st().stable_basis_via(n, s, Path::WallByWall).unwrap().check().unwrap();
        }
    }
}

#[test]
fn large_denominators_are_not_walls() {
    for n in 1..=4 {
        for w in walls01(n) {
            let b = *w.denom() as usize;
            let crossing = st().wall_matrix(n, w).unwrap();
            if b > n {
                assert!(crossing.is_identity(), "n={n} w={w}");
            }
        }
    }
}

#[test]
fn wall_support_is_block_triangular() {
    let mut coarser = Vec::new();
    for n in 1..=4 {
        for w in walls01(n) {
            let b = *w.denom() as usize;
            let crossing = st().wall_matrix(n, w).unwrap();
            for (l, mu, v) in crossing.matrix().entries() {
                if l == mu {
                    assert!(v.is_one());
                    continue;
                }
                if v.is_zero() {
                    continue;
                }
                assert!(dominance_leq(mu, l), "n={n} w={w} {l}|{mu}");
                assert!((w * Exp::from_integer(l.content() - mu.content())).is_integer());
                assert!(v.as_laurent().is_some());
                if b_core(l, b).unwrap() != b_core(mu, b).unwrap() {
                    coarser.push(format!("n={n} w={w} {l}|{mu}"));
                }
            }
        }
    }
    // The refinement by b-cores is reported, not required.
    if !coarser.is_empty() {
        eprintln!("entries joining different b-cores: {coarser:?}");
    }
}

#[test]
fn renormalized_crossings_are_t_free() {
    for n in 2..=4 {
        for w in walls01(n) {
            let t = st().transition_matrix(n, SlopePoint::minus(w), SlopePoint::plus(w), true).unwrap();
            for (l, mu, v) in t.entries() {
                let free = v.numer().terms().chain(v.denom().terms()).all(|(x, _)| x.t.is_zero());
                assert!(free, "n={n} w={w} {l}|{mu}: {v}");
            }
        }
    }
}

#[test]
fn renormalized_crossing_for_two_points() {
    let t = st().transition_matrix(2, SlopePoint::minus(e(1, 2)), SlopePoint::plus(e(1, 2)), true).unwrap();
    assert_eq!(t.get(&p(&[2]), &p(&[1, 1])), &fq(1, 1) - &fq(1, -1));
    assert!(t.get(&p(&[1, 1]), &p(&[2])).is_zero());
    assert!(t.get(&p(&[2]), &p(&[2])).is_one());
    let a = bar_matrix::<Rational>(2, 2).unwrap();
    assert_eq!(&t, &a.matrix);
    // The 3/2 crossing renormalizes to the same matrix.
    let t3 = st().transition_matrix(2, SlopePoint::minus(e(3, 2)), SlopePoint::plus(e(3, 2)), true).unwrap();
    assert_eq!(t3, t);
}

#[test]
fn transition_to_itself_is_the_identity() {
    for n in 1..=3 {
        let s = SlopePoint::plus(e(2, 5));
        assert!(st().transition_matrix(n, s, s, false).unwrap().matrix().is_identity());
    }
}

#[test]
fn renormalization_needs_a_shared_slope() {
    let r = st().transition_matrix(2, SlopePoint::plus(Exp::zero()), SlopePoint::plus(e(1, 2)), true);
    assert!(matches!(r, Err(StableError::NoSharedSlope(..))));
}

#[test]
fn transitions_compose() {
    let (a, b, c) = (SlopePoint::plus(Exp::zero()), SlopePoint::plus(e(1, 2)), SlopePoint::plus(e(5, 4)));
    let ab = st().transition_matrix(3, a, b, false).unwrap();
    let bc = st().transition_matrix(3, b, c, false).unwrap();
    let ac = st().transition_matrix(3, a, c, false).unwrap();
    // Row-vector convention: s^a = T_ab s^b, so T_ac = T_ab T_bc, and in the
    // column-stored dense layout that is bc * ab.
    assert_eq!(&bc.matrix().clone() * &ab.matrix().clone(), ac.matrix().clone());
}

#[test]
fn renormalization_factor_examples() {
    let half = e(1, 2);
    let qh = Monomial::new(half, Exp::zero());
    let r = renorm_factor(&p(&[2]), half).unwrap();
    assert_eq!(r.value, Monomial::from_q1q2(half, Exp::zero()) * qh);
    let r = renorm_factor(&p(&[1, 1]), half).unwrap();
    assert_eq!(r.value, Monomial::from_q1q2(Exp::zero(), half) * qh);
    // The ratio is t, turning q2 - 1/q1 = (q - 1/q)/t into q - 1/q.
    let ratio = renorm_factor(&p(&[2]), half).unwrap().value * renorm_factor(&p(&[1, 1]), half).unwrap().value.inv();
    assert_eq!(ratio, Monomial::int(0, 1));
    // A 2-core carries only chi^m.
    let core = p(&[2, 1]);
    assert_eq!(renorm_factor(&core, e(3, 2)).unwrap().value, core.weight().pow(e(3, 2)));
    // Integer slopes have no ribbon part.
    assert_eq!(renorm_factor(&p(&[3]), e(2, 1)).unwrap().value, p(&[3]).weight().pow(e(2, 1)));
}

#[test]
fn renormalize_scales_rows() {
    let t = st().stable_basis(2, SlopePoint::plus(e(1, 2))).unwrap();
    let r = renormalize(&t).unwrap();
    assert!(r.renormalized);
    for l in t.order() {
        let f = renorm_factor(l, e(1, 2)).unwrap().value;
        for mu in t.order() {
            assert_eq!(r.get(l, mu), t.get(l, mu).mul_monomial(f));
        }
    }
    assert!(r.check().is_err());
}

#[test]
fn check_rejects_tampered_tables() {
    let t = st().stable_basis(2, SlopePoint::plus(e(1, 2))).unwrap();
    let mut g = t.gamma().clone();
    g.set(&p(&[2]), &p(&[1, 1]), m(1, 0, 5));
    assert!(StableBasisTable::new(2, t.slope, g).check().is_err());
    let mut g = t.gamma().clone();
    g.set(&p(&[1, 1]), &p(&[2]), Scalar::one());
    assert!(StableBasisTable::new(2, t.slope, g).check().is_err());
    let mut g = t.gamma().clone();
    g.set(&p(&[2]), &p(&[2]), Scalar::one());
    assert!(StableBasisTable::new(2, t.slope, g).check().is_err());
}

#[test]
fn json_round_trips() {
    let t = st().stable_basis(3, SlopePoint::minus(e(2, 3))).unwrap();
    assert_eq!(StableBasisTable::from_json(&t.to_json()).unwrap(), t);
    let r = renormalize(&t).unwrap();
    assert_eq!(StableBasisTable::from_json(&r.to_json()).unwrap(), r);
    let w = st().wall_matrix(3, e(1, 3)).unwrap();
    assert_eq!(WallCrossMatrix::from_json(&w.to_json()).unwrap(), *w);
    let s = SlopePoint::minus(e(-3, 4));
    assert_eq!(SlopePoint::from_json(&s.to_json()).unwrap(), s);
    let j = t.to_json();
    assert_eq!(j["slope"]["side"], -1);
    assert!(j["gamma"].get("[3]|[1,1,1]").is_some());
}

#[test]
fn inserted_chambers_are_used() {
    let fresh: Stable<Rational> = Stable::new();
    let t = st().stable_basis(3, SlopePoint::plus(e(1, 2))).unwrap();
    fresh.insert_chamber(t.clone()).unwrap();
    assert_eq!(fresh.stable_basis(3, SlopePoint::plus(e(1, 2))).unwrap(), t);
    let bad = StableBasisTable::new(3, t.slope, t.gamma().map(|x| x.mul_monomial(Monomial::int(0, 9))));
    assert!(fresh.insert_chamber(bad).is_err());
}

fn arb_pair() -> impl Strategy<Value = (Partition, Partition)> {
    (2usize..=6).prop_flat_map(|n| {
        let ps = enumerate_partitions(n);
        let k = ps.len();
        (0..k, 0..k).prop_map(move |(i, j)| (ps[i].clone(), ps[j].clone()))
    })
}

fn arb_slope() -> impl Strategy<Value = SlopePoint> {
    (-12i64..=12, 1i64..=6, any::<bool>()).prop_map(|(a, b, plus)| {
        let w = e(a, b);
        if plus {
            SlopePoint::plus(w)
        } else {
            SlopePoint::minus(w)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn windows_have_as_many_slots_as_the_diagonal((l, mu) in arb_pair(), s in arb_slope()) {
        prop_assume!(l != mu && dominance_leq(&mu, &l));
        let (lo, hi) = degree_window(&l, &mu, s);
        let (d0, d1) = degree_window(&mu, &mu, s);
        prop_assert_eq!(hi - lo, d1 - d0 - 1);
        let flipped = degree_window(&l, &mu, SlopePoint::new(s.m, s.side.flip()));
        let shift = s.m * Exp::from_integer(mu.content() - l.content());
        if shift.is_integer() {
            prop_assert_ne!(flipped, (lo, hi));
        } else {
            prop_assert_eq!(flipped, (lo, hi));
        }
    }

    #[test]
    fn every_chamber_satisfies_the_axioms(n in 1usize..=3, s in arb_slope()) {
        let t = st().stable_basis(n, s).unwrap();
        prop_assert!(t.check().is_ok());
        prop_assert_eq!(t.slope, s);
    }

    #[test]
    fn nabla_shift_is_invertible(n in 1usize..=3, s in arb_slope(), k in 1usize..=3) {
        let t = st().stable_basis(n, s).unwrap();
        let mut u = t.clone();
        for _ in 0..k { u = nabla_shift(&u, 1); }
        prop_assert!(u.check().is_ok());
        for _ in 0..k { u = nabla_shift(&u, -1); }
        prop_assert_eq!(u, t);
    }
}
