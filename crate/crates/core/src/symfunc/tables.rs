//! Rational change-of-basis tables for one degree, all expressed against the
//! power sums.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::combin::{enumerate_partitions, ribbon_height, Partition};
use crate::linalg::Matrix;
use crate::Rational;

pub(crate) struct Tables {
    pub order: Vec<Partition>,
    pub index: HashMap<Partition, usize>,
    pub z: Vec<Rational>,
    /// Row `rho`: `p_rho` in the monomial basis.
    pub p_in_m: Matrix<Rational>,
    /// Row `mu`: `m_mu` in the power sums.
    pub m_in_p: Matrix<Rational>,
    pub s_in_p: Matrix<Rational>,
    pub e_in_p: Matrix<Rational>,
    pub p_in_s: Matrix<Rational>,
    pub p_in_e: Matrix<Rational>,
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub(crate) fn z(rho: &Partition) -> Rational {
    let mut counts: BTreeMap<usize, i64> = BTreeMap::new();
    for &k in rho.parts() {
        *counts.entry(k).or_default() += 1;
    }
    let mut acc = r(1);
    for (k, c) in counts {
        for i in 1..=c {
            acc *= r(k as i64 * i);
        }
    }
    acc
}

/// Number of ways to drop the parts of `rho` into the labelled blocks of `mu`
/// so that block `j` sums to `mu[j]`.
fn p_in_m_entry(rho: &[usize], room: &mut [usize]) -> i64 {
    let Some((&k, rest)) = rho.split_first() else {
        return if room.iter().all(|&x| x == 0) { 1 } else { 0 };
    };
    let mut total = 0;
    for j in 0..room.len() {
        if room[j] >= k {
            room[j] -= k;
            total += p_in_m_entry(rest, room);
            room[j] += k;
        }
    }
    total
}

/// Irreducible character `chi^lambda` at cycle type `rho` by the
/// Murnaghan-Nakayama rule.
pub(crate) fn character(lambda: &Partition, rho: &[usize], memo: &mut HashMap<(Partition, Vec<usize>), i64>) -> i64 {
    let Some((&k, rest)) = rho.split_first() else {
        return if lambda.is_empty() { 1 } else { 0 };
    };
    let key = (lambda.clone(), rho.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut s = 0;
    for (small, cells) in lambda.removable_ribbons(k) {
        let sign = if ribbon_height(&cells) % 2 == 0 { 1 } else { -1 };
        s += sign * character(&small, rest, memo);
    }
    memo.insert(key, s);
    s
}

fn build(n: usize) -> Tables {
    let order = enumerate_partitions(n);
    let index: HashMap<Partition, usize> = order.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let len = order.len();
    let z: Vec<Rational> = order.iter().map(z).collect();
    let p_in_m = Matrix::from_fn(len, len, |i, j| {
        let mut room = order[j].parts().to_vec();
        r(p_in_m_entry(order[i].parts(), &mut room))
    });
    let m_in_p = p_in_m.inverse().expect("power sums form a basis");
    let mut memo = HashMap::new();
    let s_in_p = Matrix::from_fn(len, len, |i, j| r(character(&order[i], order[j].parts(), &mut memo)) / z[j].clone());
    // e_k = sum over rho of sign(rho) p_rho / z_rho, multiplied out.
    let mut e_in_p = Matrix::zeros(len, len);
    for (i, lambda) in order.iter().enumerate() {
        let mut acc: BTreeMap<Vec<usize>, Rational> = BTreeMap::from([(Vec::new(), Rational::one())]);
        for &k in lambda.parts() {
            let mut next: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
            for rho in enumerate_partitions(k) {
                let sign = if (k - rho.len()) % 2 == 0 { r(1) } else { r(-1) };
                let c = sign / self::z(&rho);
                for (sigma, v) in &acc {
                    let mut parts = sigma.clone();
                    parts.extend_from_slice(rho.parts());
                    parts.sort_unstable_by(|a, b| b.cmp(a));
                    *next.entry(parts).or_insert_with(Rational::zero) += v.clone() * c.clone();
                }
            }
            acc = next;
        }
        for (parts, v) in acc {
            let j = index[&Partition::new(parts).expect("sorted")];
            e_in_p[(i, j)] = v;
        }
    }
    let p_in_s = s_in_p.inverse().expect("Schur functions form a basis");
    let p_in_e = e_in_p.inverse().expect("elementary functions form a basis");
    Tables { order, index, z, p_in_m, m_in_p, s_in_p, e_in_p, p_in_s, p_in_e }
}

pub(crate) fn tables(n: usize) -> Arc<Tables> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Tables>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("table cache").get(&n) {
        return t.clone();
    }
    let t = Arc::new(build(n));
    cache.lock().expect("table cache").entry(n).or_insert(t).clone()
}
