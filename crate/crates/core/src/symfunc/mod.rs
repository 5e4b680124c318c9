//! Symmetric functions of fixed degree over `Q(q, t)`: the classical bases,
//! Macdonald `P`, the integral and modified forms, three bilinear forms,
//! plethysm, `nabla` and fixed-point restrictions.
//!
//! Everything is routed through the power sums, where plethysm is diagonal and
//! the pairings are diagonal.

mod tables;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::combin::{bracket, dominance_leq, enumerate_partitions, tangent_character, Partition};
use crate::exact::{parse_ratfunc, Coeff, ExactError, Laurent, Monomial, RatFunc};
use crate::linalg::Matrix;
use crate::Rational;

use tables::{tables, Tables};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    Monomial,
    Elementary,
    Power,
    Schur,
    MacdonaldP,
    HTilde,
}

impl Basis {
    pub fn label(&self) -> &'static str {
        match self {
            Basis::Monomial => "m",
            Basis::Elementary => "e",
            Basis::Power => "p",
            Basis::Schur => "s",
            Basis::MacdonaldP => "P",
            Basis::HTilde => "Htilde",
        }
    }

    pub fn from_label(s: &str) -> Option<Basis> {
        Some(match s {
            "m" => Basis::Monomial,
            "e" => Basis::Elementary,
            "p" => Basis::Power,
            "s" => Basis::Schur,
            "P" => Basis::MacdonaldP,
            "Htilde" => Basis::HTilde,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("{0} is not a partition of {1}")]
    WrongSize(Partition, usize),
    #[error("malformed symmetric function JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Homogeneous symmetric function stored in a single basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymFunc<C: Coeff> {
    degree: usize,
    basis: Basis,
    coeffs: BTreeMap<Partition, RatFunc<C>>,
}

impl<C: Coeff> SymFunc<C> {
    pub fn zero(degree: usize, basis: Basis) -> Self {
        SymFunc { degree, basis, coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs<I>(degree: usize, basis: Basis, it: I) -> Result<Self, SymError>
    where
        I: IntoIterator<Item = (Partition, RatFunc<C>)>,
    {
        let mut f = Self::zero(degree, basis);
        for (p, c) in it {
            if p.size() != degree {
                return Err(SymError::WrongSize(p, degree));
            }
            f.add_term(p, &c);
        }
        Ok(f)
    }

    pub fn basis_element(basis: Basis, lambda: &Partition) -> Self {
        let mut f = Self::zero(lambda.size(), basis);
        f.add_term(lambda.clone(), &RatFunc::one());
        f
    }

    fn add_term(&mut self, p: Partition, c: &RatFunc<C>) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(p.clone()).or_insert_with(RatFunc::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&p);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeff(&self, p: &Partition) -> RatFunc<C> {
        self.coeffs.get(p).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Partition, &RatFunc<C>)> + '_ {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &RatFunc<C>) -> Self {
        let mut out = Self::zero(self.degree, self.basis);
        for (p, v) in &self.coeffs {
            out.add_term(p.clone(), &(v * c));
        }
        out
    }

    /// Sum of two functions stored in the same basis.
    pub fn add(&self, other: &Self) -> Result<Self, SymError> {
        if self.degree != other.degree {
            return Err(SymError::DegreeMismatch(self.degree, other.degree));
        }
        assert_eq!(self.basis, other.basis, "add needs a common basis");
        let mut out = self.clone();
        for (p, v) in &other.coeffs {
            out.add_term(p.clone(), v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SymError> {
        self.add(&other.scale(&-RatFunc::one()))
    }

    pub fn to_json(&self) -> Value {
        let coeffs: serde_json::Map<String, Value> =
            self.coeffs.iter().rev().map(|(p, v)| (p.to_string(), Value::String(v.to_string()))).collect();
        json!({ "degree": self.degree, "basis": self.basis.label(), "coeffs": coeffs })
    }

    pub fn from_json(v: &Value) -> Result<Self, SymError> {
        let bad = |s: &str| SymError::Json(s.to_string());
        let degree = v["degree"].as_u64().ok_or_else(|| bad("degree"))? as usize;
        let basis = v["basis"].as_str().and_then(Basis::from_label).ok_or_else(|| bad("basis"))?;
        let coeffs = v["coeffs"].as_object().ok_or_else(|| bad("coeffs"))?;
        let mut terms = Vec::new();
        for (k, c) in coeffs {
            let p: Partition = serde_json::from_str(k).map_err(|e| SymError::Json(e.to_string()))?;
            let s = c.as_str().ok_or_else(|| bad("coefficient"))?;
            terms.push((p, parse_ratfunc(s)?));
        }
        Self::from_coeffs(degree, basis, terms)
    }
}

impl<C: Coeff> fmt::Display for SymFunc<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, v)) in self.coeffs.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({v})*{}{p}", self.basis.label())?;
        }
        Ok(())
    }
}

/// Values `f|_mu` at the fixed points, indexed by partitions of `degree`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Restrictions<C: Coeff> {
    pub degree: usize,
    pub values: BTreeMap<Partition, RatFunc<C>>,
}

fn big<C: Coeff>(r: &Rational) -> C {
    C::from_big(r.clone())
}

fn one_minus<C: Coeff>(m: Monomial) -> RatFunc<C> {
    RatFunc::from_poly(&Laurent::one() - &Laurent::mono(m))
}

fn q1k(k: i64) -> Monomial {
    Monomial::from_q1q2(k.into(), 0.into())
}

fn q2k(k: i64) -> Monomial {
    Monomial::from_q1q2(0.into(), k.into())
}

/// `prod over boxes of (q2^(l+1) - q1^a)`.
pub fn integral_factor<C: Coeff>(lambda: &Partition) -> RatFunc<C> {
    let mut acc = Laurent::<C>::one();
    for c in lambda.cells() {
        let (a, l) = (lambda.arm(c) as i64, lambda.leg(c) as i64);
        acc = &acc * &(&Laurent::mono(q2k(l + 1)) - &Laurent::mono(q1k(a)));
    }
    RatFunc::from_poly(acc)
}

/// `prod over boxes of (q2^l - q1^(a+1))`, the diagonal stable-basis restriction.
pub fn diagonal_factor<C: Coeff>(lambda: &Partition) -> RatFunc<C> {
    let mut acc = Laurent::<C>::one();
    for c in lambda.cells() {
        let (a, l) = (lambda.arm(c) as i64, lambda.leg(c) as i64);
        acc = &acc * &(&Laurent::mono(q2k(l)) - &Laurent::mono(q1k(a + 1)));
    }
    RatFunc::from_poly(acc)
}

/// `[T_lambda]`, the bracket of the tangent character.
pub fn tangent_bracket<C: Coeff>(lambda: &Partition) -> RatFunc<C> {
    bracket(&tangent_character(lambda)).expect("tangent weights are nontrivial")
}

/// `prod over parts k of rho of w(k)`, for every `rho` in canonical order.
fn rho_products<C: Coeff>(t: &Tables, w: impl Fn(i64) -> RatFunc<C>) -> Vec<RatFunc<C>> {
    let n = t.order.first().map_or(0, |p| p.size());
    let per: Vec<RatFunc<C>> = (0..=n as i64).map(|k| if k == 0 { RatFunc::one() } else { w(k) }).collect();
    t.order.iter().map(|rho| rho.parts().iter().fold(RatFunc::one(), |acc, &k| &acc * &per[k])).collect()
}

/// `<p_rho, p_rho>` for the pairing whose value on `p_k` is `k w(k)`.
fn weights<C: Coeff>(t: &Tables, w: impl Fn(i64) -> RatFunc<C>) -> Vec<RatFunc<C>> {
    rho_products(t, w).into_iter().zip(&t.z).map(|(x, z)| x.scale(&big(z))).collect()
}

/// Macdonald data for one degree, all in the power-sum basis.
struct Degree<C: Coeff> {
    t: Arc<Tables>,
    w0: Vec<RatFunc<C>>,
    wmod: Vec<RatFunc<C>>,
    mac_p: Vec<Vec<RatFunc<C>>>,
    mac_p_norm: Vec<RatFunc<C>>,
    htilde: Vec<Vec<RatFunc<C>>>,
    htilde_norm: Vec<RatFunc<C>>,
    tangent: Vec<RatFunc<C>>,
}

fn pair<C: Coeff>(w: &[RatFunc<C>], a: &[RatFunc<C>], b: &[RatFunc<C>]) -> RatFunc<C> {
    let mut acc = RatFunc::zero();
    for ((x, y), z) in a.iter().zip(b).zip(w) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(&(x * y) * z);
        }
    }
    acc
}

fn axpy<C: Coeff>(y: &mut [RatFunc<C>], c: &RatFunc<C>, x: &[RatFunc<C>]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += &(c * xi);
        }
    }
}

impl<C: Coeff> Degree<C> {
    fn build(n: usize) -> Self {
        let t = tables(n);
        let w0 = weights(&t, |k| &one_minus(q1k(k)) / &one_minus(q2k(-k)));
        let wmod = weights(&t, |k| {
            let s = &one_minus(q1k(k)) * &one_minus(q2k(k));
            if k % 2 == 0 {
                -s
            } else {
                s
            }
        });
        let len = t.order.len();
        let row = |m: &Matrix<Rational>, i: usize| -> Vec<RatFunc<C>> {
            (0..len).map(|j| RatFunc::from_coeff(big(&m[(i, j)]))).collect()
        };
        // Gram-Schmidt from the bottom of the dominance order upwards.
        let mut mac_p: Vec<Option<Vec<RatFunc<C>>>> = vec![None; len];
        let mut mac_p_norm: Vec<Option<RatFunc<C>>> = vec![None; len];
        for i in (0..len).rev() {
            let m = row(&t.m_in_p, i);
            let below: Vec<usize> = (i + 1..len).filter(|&j| dominance_leq(&t.order[j], &t.order[i])).collect();
            let coeffs: Vec<RatFunc<C>> = below
                .par_iter()
                .map(|&j| {
                    let pj = mac_p[j].as_ref().expect("computed");
                    -&(&pair(&w0, &m, pj) / mac_p_norm[j].as_ref().expect("computed"))
                })
                .collect();
            let mut f = m;
            for (&j, c) in below.iter().zip(&coeffs) {
                axpy(&mut f, c, mac_p[j].as_ref().expect("computed"));
            }
            mac_p_norm[i] = Some(pair(&w0, &f, &f));
            mac_p[i] = Some(f);
        }
        let mac_p: Vec<Vec<RatFunc<C>>> = mac_p.into_iter().map(|v| v.expect("computed")).collect();
        let mac_p_norm: Vec<RatFunc<C>> = mac_p_norm.into_iter().map(|v| v.expect("computed")).collect();
        let pleth: Vec<RatFunc<C>> = rho_products(&t, |k| one_minus::<C>(q2k(-k)).inv().expect("nonzero"));
        let htilde: Vec<Vec<RatFunc<C>>> = (0..len)
            .into_par_iter()
            .map(|i| {
                let lambda = &t.order[i];
                let c = &integral_factor::<C>(lambda).mul_monomial(q2k(-(n as i64)));
                mac_p[i].iter().zip(&pleth).map(|(v, w)| &(v * c) * w).collect()
            })
            .collect();
        let htilde_norm: Vec<RatFunc<C>> = htilde.par_iter().map(|h| pair(&wmod, h, h)).collect();
        let tangent = t.order.iter().map(tangent_bracket).collect();
        Degree { t, w0, wmod, mac_p, mac_p_norm, htilde, htilde_norm, tangent }
    }
}

/// Cached Macdonald machinery. Each degree is built once, on first use, and
/// shared between threads.
pub struct Symmetric<C: Coeff> {
    degrees: Mutex<HashMap<usize, Arc<OnceLock<Arc<Degree<C>>>>>>,
}

impl<C: Coeff> Default for Symmetric<C> {
    fn default() -> Self {
        Symmetric { degrees: Mutex::new(HashMap::new()) }
    }
}

impl<C: Coeff> Symmetric<C> {
    pub fn new() -> Self {
        Self::default()
    }

    fn degree(&self, n: usize) -> Arc<Degree<C>> {
        let cell = self.degrees.lock().expect("degree cache").entry(n).or_default().clone();
        cell.get_or_init(|| Arc::new(Degree::build(n))).clone()
    }

    /// Partitions of `n` in canonical order.
    pub fn order(&self, n: usize) -> Vec<Partition> {
        enumerate_partitions(n)
    }

    fn to_p_vec(&self, f: &SymFunc<C>) -> Vec<RatFunc<C>> {
        let n = f.degree;
        let t = tables(n);
        let len = t.order.len();
        let mut out = vec![RatFunc::zero(); len];
        let rational = |m: &Matrix<Rational>, out: &mut Vec<RatFunc<C>>| {
            for (p, v) in &f.coeffs {
                let i = t.index[p];
                for (j, o) in out.iter_mut().enumerate() {
                    let c = &m[(i, j)];
                    if !c.is_zero() {
                        *o += &v.scale(&big(c));
                    }
                }
            }
        };
        match f.basis {
            Basis::Power => {
                for (p, v) in &f.coeffs {
                    out[t.index[p]] = v.clone();
                }
            }
            Basis::Monomial => rational(&t.m_in_p, &mut out),
            Basis::Schur => rational(&t.s_in_p, &mut out),
            Basis::Elementary => rational(&t.e_in_p, &mut out),
            Basis::MacdonaldP | Basis::HTilde => {
                let d = self.degree(n);
                let rows = if f.basis == Basis::MacdonaldP { &d.mac_p } else { &d.htilde };
                for (p, v) in &f.coeffs {
                    axpy(&mut out, v, &rows[t.index[p]]);
                }
            }
        }
        out
    }

    fn from_p_vec(&self, n: usize, v: &[RatFunc<C>], basis: Basis) -> SymFunc<C> {
        let t = tables(n);
        let len = t.order.len();
        let rational = |m: &Matrix<Rational>| -> Vec<RatFunc<C>> {
            let mut out = vec![RatFunc::zero(); len];
            for (i, x) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                for (j, o) in out.iter_mut().enumerate() {
                    let c = &m[(i, j)];
                    if !c.is_zero() {
                        *o += &x.scale(&big(c));
                    }
                }
            }
            out
        };
        let coeffs: Vec<RatFunc<C>> = match basis {
            Basis::Power => v.to_vec(),
            Basis::Monomial => rational(&t.p_in_m),
            Basis::Schur => rational(&t.p_in_s),
            Basis::Elementary => rational(&t.p_in_e),
            Basis::MacdonaldP => {
                let d = self.degree(n);
                (0..len).into_par_iter().map(|i| &pair(&d.w0, v, &d.mac_p[i]) / &d.mac_p_norm[i]).collect()
            }
            Basis::HTilde => {
                let d = self.degree(n);
                (0..len).into_par_iter().map(|i| &pair(&d.wmod, v, &d.htilde[i]) / &d.htilde_norm[i]).collect()
            }
        };
        SymFunc::from_coeffs(n, basis, t.order.iter().cloned().zip(coeffs)).expect("sizes agree")
    }

    pub fn convert(&self, f: &SymFunc<C>, target: Basis) -> SymFunc<C> {
        if f.basis == target {
            return f.clone();
        }
        self.from_p_vec(f.degree, &self.to_p_vec(f), target)
    }

    /// Equality as symmetric functions, regardless of basis.
    pub fn equal(&self, f: &SymFunc<C>, g: &SymFunc<C>) -> bool {
        f.degree == g.degree && self.to_p_vec(f) == self.to_p_vec(g)
    }

    fn check(f: &SymFunc<C>, g: &SymFunc<C>) -> Result<(), SymError> {
        if f.degree != g.degree {
            return Err(SymError::DegreeMismatch(f.degree, g.degree));
        }
        Ok(())
    }

    /// The Macdonald pairing, `<p_k, p_k>_0 = k (1 - q1^k) / (1 - q2^-k)`.
    pub fn inner0(&self, f: &SymFunc<C>, g: &SymFunc<C>) -> Result<RatFunc<C>, SymError> {
        Self::check(f, g)?;
        let d = self.degree(f.degree);
        Ok(pair(&d.w0, &self.to_p_vec(f), &self.to_p_vec(g)))
    }

    /// The modified pairing, `<p_k, p_k> = (-1)^(k-1) k (1 - q1^k)(1 - q2^k)`.
    pub fn inner_mod(&self, f: &SymFunc<C>, g: &SymFunc<C>) -> Result<RatFunc<C>, SymError> {
        Self::check(f, g)?;
        let d = self.degree(f.degree);
        Ok(pair(&d.wmod, &self.to_p_vec(f), &self.to_p_vec(g)))
    }

    /// `sum over lambda of f|_lambda g|_lambda / [T_lambda]`.
    pub fn euler_form(&self, f: &SymFunc<C>, g: &SymFunc<C>) -> Result<RatFunc<C>, SymError> {
        Self::check(f, g)?;
        let d = self.degree(f.degree);
        let (a, b) = (self.restrictions(f), self.restrictions(g));
        let mut acc = RatFunc::zero();
        for (i, p) in d.t.order.iter().enumerate() {
            acc += &(&(&a.values[p] * &b.values[p]) / &d.tangent[i]);
        }
        Ok(acc)
    }

    /// The algebra map `p_k -> mult(k) p_k`. The result is in the power sums.
    pub fn plethysm<M: Fn(usize) -> RatFunc<C>>(&self, f: &SymFunc<C>, mult: M) -> SymFunc<C> {
        let t = tables(f.degree);
        let per: Vec<RatFunc<C>> = (0..=f.degree).map(|k| if k == 0 { RatFunc::one() } else { mult(k) }).collect();
        let v = self.to_p_vec(f);
        let coeffs = t.order.iter().zip(v).map(|(rho, x)| {
            let mut c = x;
            for &k in rho.parts() {
                if c.is_zero() {
                    break;
                }
                c = &c * &per[k];
            }
            (rho.clone(), c)
        });
        SymFunc::from_coeffs(f.degree, Basis::Power, coeffs).expect("sizes agree")
    }

    /// `P_lambda` in the monomial basis.
    pub fn macdonald_p(&self, lambda: &Partition) -> SymFunc<C> {
        let n = lambda.size();
        let d = self.degree(n);
        let p =
            SymFunc::from_coeffs(n, Basis::Power, d.t.order.iter().cloned().zip(d.mac_p[d.t.index[lambda]].clone()))
                .expect("sizes agree");
        self.convert(&p, Basis::Monomial)
    }

    /// `(J~_lambda, H~_lambda)`, both in the power sums.
    pub fn integral_forms(&self, lambda: &Partition) -> (SymFunc<C>, SymFunc<C>) {
        let n = lambda.size();
        let d = self.degree(n);
        let i = d.t.index[lambda];
        let c = integral_factor::<C>(lambda).mul_monomial(q2k(-(n as i64)));
        let j = d.t.order.iter().cloned().zip(d.mac_p[i].iter().map(|v| v * &c));
        let h = d.t.order.iter().cloned().zip(d.htilde[i].clone());
        (
            SymFunc::from_coeffs(n, Basis::Power, j).expect("sizes agree"),
            SymFunc::from_coeffs(n, Basis::Power, h).expect("sizes agree"),
        )
    }

    /// `H~_lambda -> chi_lambda H~_lambda`, returned in the basis of `f`.
    pub fn nabla(&self, f: &SymFunc<C>) -> SymFunc<C> {
        let h = self.convert(f, Basis::HTilde);
        let coeffs = h.coeffs.iter().map(|(p, v)| (p.clone(), v.mul_monomial(p.weight())));
        let out = SymFunc::from_coeffs(f.degree, Basis::HTilde, coeffs).expect("sizes agree");
        self.convert(&out, f.basis)
    }

    /// `[T_mu] <f, H~_mu> / <H~_mu, H~_mu>`.
    pub fn restrict(&self, f: &SymFunc<C>, mu: &Partition) -> Result<RatFunc<C>, SymError> {
        if mu.size() != f.degree {
            return Err(SymError::WrongSize(mu.clone(), f.degree));
        }
        let d = self.degree(f.degree);
        let i = d.t.index[mu];
        if f.basis == Basis::HTilde {
            return Ok(&f.coeff(mu) * &d.tangent[i]);
        }
        let v = self.to_p_vec(f);
        Ok(&(&pair(&d.wmod, &v, &d.htilde[i]) / &d.htilde_norm[i]) * &d.tangent[i])
    }

    pub fn restrictions(&self, f: &SymFunc<C>) -> Restrictions<C> {
        let d = self.degree(f.degree);
        let h = self.convert(f, Basis::HTilde);
        let values = d.t.order.iter().enumerate().map(|(i, p)| (p.clone(), &h.coeff(p) * &d.tangent[i])).collect();
        Restrictions { degree: f.degree, values }
    }

    /// `f = sum f|_lambda H~_lambda / [T_lambda]`, in the `H~` basis.
    pub fn from_restrictions(&self, v: &Restrictions<C>) -> SymFunc<C> {
        let d = self.degree(v.degree);
        let coeffs = d.t.order.iter().enumerate().map(|(i, p)| {
            let x = v.values.get(p).cloned().unwrap_or_else(RatFunc::zero);
            (p.clone(), &x / &d.tangent[i])
        });
        SymFunc::from_coeffs(v.degree, Basis::HTilde, coeffs).expect("sizes agree")
    }

    /// `<H~_lambda, H~_lambda>` under the modified pairing.
    pub fn htilde_norm(&self, lambda: &Partition) -> RatFunc<C> {
        let d = self.degree(lambda.size());
        d.htilde_norm[d.t.index[lambda]].clone()
    }

    /// `<P_lambda, P_lambda>_0`.
    pub fn macdonald_norm(&self, lambda: &Partition) -> RatFunc<C> {
        let d = self.degree(lambda.size());
        d.mac_p_norm[d.t.index[lambda]].clone()
    }
}
