//! The level-one `q`-Fock space of `U_q(gl_b^)`: the standard action of the
//! Chevalley and Heisenberg generators, its costandard twin, the bar
//! involution and the canonical bases.
//!
//! Scalars are Laurent polynomials in `q` alone, stored in the `q` slot of
//! [`Laurent`].

mod bar;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::combin::{enumerate_partitions, horizontal_strips, node_balance, node_counts, Partition};
use crate::exact::{Coeff, Laurent, Monomial};
use crate::Rational;

pub use bar::{
    bar_matrix, bar_matrix_from, canonical_basis, creation_candidates, lt_property_check, BarMatrix, CanonicalMatrix,
    FockError, LtReport, Sign,
};

/// `q^e`.
pub fn qpow<C: Coeff>(e: i64) -> Laurent<C> {
    Laurent::mono(Monomial::int(e, 0))
}

/// `(-q)^e`.
pub fn neg_qpow<C: Coeff>(e: i64) -> Laurent<C> {
    let p = qpow(e);
    if e % 2 == 0 {
        p
    } else {
        -p
    }
}

/// `q -> 1/q`.
pub fn bar_scalar<C: Coeff>(x: &Laurent<C>) -> Laurent<C> {
    x.map_exponents(|m| Monomial::new(-m.q, m.t))
}

/// `[b]_x = 1 + x + ... + x^(b-1)` at `x = q^e`.
pub fn quantum_integer<C: Coeff>(b: usize, e: i64) -> Laurent<C> {
    (0..b as i64).fold(Laurent::zero(), |acc, j| &acc + &qpow(e * j))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    E(usize),
    F(usize),
    /// `q^(h_i)`.
    K(usize),
    /// `q^D`, taken literally: eigenvalue `q^(-N_0)`.
    D,
}

/// Finite combination of the vectors `|lambda>`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FockVector<C: Coeff> {
    coeffs: BTreeMap<Partition, Laurent<C>>,
}

impl<C: Coeff> FockVector<C> {
    pub fn zero() -> Self {
        FockVector { coeffs: BTreeMap::new() }
    }

    pub fn vacuum() -> Self {
        Self::basis(Partition::empty())
    }

    pub fn basis(lambda: Partition) -> Self {
        FockVector { coeffs: BTreeMap::from([(lambda, Laurent::one())]) }
    }

    pub fn from_terms<I: IntoIterator<Item = (Partition, Laurent<C>)>>(it: I) -> Self {
        let mut v = Self::zero();
        for (p, c) in it {
            v.add_term(p, &c);
        }
        v
    }

    pub fn add_term(&mut self, p: Partition, c: &Laurent<C>) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(p.clone()).or_insert_with(Laurent::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&p);
        }
    }

    pub fn coeff(&self, p: &Partition) -> Laurent<C> {
        self.coeffs.get(p).cloned().unwrap_or_else(Laurent::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Laurent<C>)> + '_ {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Size of the partitions in the support, if that is a single number.
    pub fn degree(&self) -> Option<usize> {
        let mut sizes = self.coeffs.keys().map(|p| p.size());
        let first = sizes.next()?;
        sizes.all(|s| s == first).then_some(first)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.coeffs {
            out.add_term(p.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Laurent::one()))
    }

    pub fn scale(&self, c: &Laurent<C>) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(p, v)| (p.clone(), v * c)))
    }

    /// `q -> 1/q` on every coefficient.
    pub fn bar_coefficients(&self) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(p, v)| (p.clone(), bar_scalar(v))))
    }
}

impl<C: Coeff> fmt::Display for FockVector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.coeffs.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})|{p}>")?;
        }
        Ok(())
    }
}

/// Coefficients of the standard action, or their `q -> 1/q` images.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    Standard,
    Costandard,
}

impl Action {
    fn twist<C: Coeff>(self, x: Laurent<C>) -> Laurent<C> {
        match self {
            Action::Standard => x,
            Action::Costandard => bar_scalar(&x),
        }
    }
}

fn apply_action<C: Coeff>(gen: Generator, v: &FockVector<C>, b: usize, action: Action) -> FockVector<C> {
    assert!(b >= 1, "b must be positive");
    let mut out = FockVector::zero();
    for (mu, c) in v.terms() {
        match gen {
            Generator::F(i) => {
                assert!(i < b, "residue {i} out of range for b = {b}");
                for cell in mu.addable() {
                    if cell.residue(b) != i {
                        continue;
                    }
                    let lambda = mu.add_cell(cell);
                    let n = node_counts(mu, &lambda, b).expect("single box").right;
                    out.add_term(lambda, &(c * &action.twist(qpow(n))));
                }
            }
            Generator::E(i) => {
                assert!(i < b, "residue {i} out of range for b = {b}");
                for cell in mu.removable() {
                    if cell.residue(b) != i {
                        continue;
                    }
                    let smaller = mu.remove_cell(cell);
                    // The exponent is -N^l: with +N^l neither [e_i, f_i] nor
                    // [V_k, e_i] come out right.
                    let n = node_counts(&smaller, mu, b).expect("single box").left;
                    out.add_term(smaller, &(c * &action.twist(qpow(-n))));
                }
            }
            Generator::K(i) => {
                assert!(i < b, "residue {i} out of range for b = {b}");
                out.add_term(mu.clone(), &(c * &action.twist(qpow(node_balance(mu, i, b)))));
            }
            Generator::D => {
                out.add_term(mu.clone(), &(c * &action.twist(qpow(-node_balance(mu, 0, b)))));
            }
        }
    }
    out
}

pub fn apply_standard<C: Coeff>(gen: Generator, v: &FockVector<C>, b: usize) -> FockVector<C> {
    apply_action(gen, v, b, Action::Standard)
}

/// The same sums with `q -> 1/q` coefficients: the matrices of the creation
/// operators in the costandard basis.
pub fn apply_costandard<C: Coeff>(gen: Generator, v: &FockVector<C>, b: usize) -> FockVector<C> {
    apply_action(gen, v, b, Action::Costandard)
}

type StripList = Arc<Vec<(Partition, usize)>>;

/// Outer shapes and spins of the horizontal `k`-strips over `mu`.
fn strips_up(mu: &Partition, k: usize, b: usize) -> StripList {
    static CACHE: OnceLock<Mutex<HashMap<(Partition, usize, usize), StripList>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (mu.clone(), k, b);
    if let Some(s) = cache.lock().expect("strip cache").get(&key) {
        return s.clone();
    }
    let s: StripList = Arc::new(horizontal_strips(mu, k, b).into_iter().map(|r| (r.outer, r.spin)).collect());
    cache.lock().expect("strip cache").entry(key).or_insert(s).clone()
}

/// Inner shapes and spins of the horizontal `k`-strips under `lambda`.
fn strips_down(lambda: &Partition, k: usize, b: usize) -> StripList {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, usize), Arc<HashMap<Partition, StripList>>>>> = OnceLock::new();
    let n = lambda.size();
    if n < k * b {
        return Arc::new(Vec::new());
    }
    let cache = CACHE.get_or_init(Default::default);
    let key = (n, k, b);
    let found = cache.lock().expect("strip cache").get(&key).cloned();
    let table = match found {
        Some(t) => t,
        None => {
            let mut down: HashMap<Partition, Vec<(Partition, usize)>> = HashMap::new();
            for mu in enumerate_partitions(n - k * b) {
                for (outer, spin) in strips_up(&mu, k, b).iter() {
                    down.entry(outer.clone()).or_default().push((mu.clone(), *spin));
                }
            }
            let t: Arc<HashMap<Partition, StripList>> =
                Arc::new(down.into_iter().map(|(p, v)| (p, Arc::new(v))).collect());
            cache.lock().expect("strip cache").entry(key).or_insert(t).clone()
        }
    };
    table.get(lambda).cloned().unwrap_or_default()
}

fn apply_v_action<C: Coeff>(k: i64, v: &FockVector<C>, b: usize, action: Action) -> FockVector<C> {
    assert!(k != 0, "V_0 is the identity and not a generator");
    assert!(b >= 1, "b must be positive");
    let size = k.unsigned_abs() as usize;
    let mut out = FockVector::zero();
    for (p, c) in v.terms() {
        let list = if k > 0 { strips_up(p, size, b) } else { strips_down(p, size, b) };
        for (q, spin) in list.iter() {
            out.add_term(q.clone(), &(c * &action.twist(neg_qpow(-(*spin as i64)))));
        }
    }
    out
}

/// `V_k` adds (`k > 0`) or removes (`k < 0`) horizontal `|k|`-strips of
/// `b`-ribbons with coefficient `(-q)^(-spin)`.
pub fn apply_v<C: Coeff>(k: i64, v: &FockVector<C>, b: usize) -> FockVector<C> {
    apply_v_action(k, v, b, Action::Standard)
}

/// `V_k` with coefficient `(-q)^spin`.
pub fn apply_v_costandard<C: Coeff>(k: i64, v: &FockVector<C>, b: usize) -> FockVector<C> {
    apply_v_action(k, v, b, Action::Costandard)
}

/// Heisenberg generator `B_k`. With `V(z) = sum V_j z^j = exp(sum B_(-j) z^j / j)`
/// the Newton identity `B_(-j) = j V_j - sum_(i<j) B_(-i) V_(j-i)` gives the
/// creation operators, and the mirror identity the annihilation ones.
pub fn apply_b<C: Coeff>(k: i64, v: &FockVector<C>, b: usize) -> FockVector<C> {
    assert!(k != 0, "B_0 is not a generator");
    let sign = if k < 0 { 1 } else { -1 };
    let j = k.abs();
    let mut out = apply_v(sign * j, v, b).scale(&Laurent::constant(C::from_big(Rational::from_integer(j.into()))));
    for i in 1..j {
        let inner = apply_v(sign * (j - i), v, b);
        out = out.sub(&apply_b(-sign * i, &inner, b));
    }
    out
}
