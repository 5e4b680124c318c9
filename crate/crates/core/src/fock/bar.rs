//! The bar involution `A_b(q)` and the canonical bases `G^+` and `G^-`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use super::{apply_standard, apply_v, bar_scalar, FockVector, Generator};
use crate::combin::{b_core, dominance_leq, enumerate_partitions, Partition};
use crate::exact::{Coeff, Laurent, Monomial, RatFunc};
use crate::keyed::{order_from_json, order_json, KeyError, KeyedMatrix};
use crate::linalg::Matrix;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FockError {
    #[error("creation operators reach rank {rank} of {needed} in degree {degree}")]
    Spanning { degree: usize, rank: usize, needed: usize },
    #[error("bar matrix entry at {0} is not a Laurent polynomial in q")]
    NotLaurent(String),
    #[error("bar matrix violates the Leclerc-Thibon properties: {0}")]
    Properties(String),
    #[error("canonical basis recursion failed at {0}")]
    Recursion(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Key(#[from] KeyError),
}

/// The sample point where ranks are computed. A rank reached there is a lower
/// bound for the rank over `Q(q)`.
fn sample<C: Coeff>() -> C {
    C::from_big(Rational::new(3.into(), 7.into()))
}

fn eval<C: Coeff>(x: &Laurent<C>) -> Rational {
    x.eval_q(&sample()).expect("one-variable Laurent polynomial").to_big()
}

/// Incremental row echelon form over `Q` of the specialized vectors.
struct Echelon {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    fn insert(&mut self, mut v: Vec<Rational>) -> bool {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone() / row[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= f.clone() * y.clone();
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, v));
                true
            }
            None => false,
        }
    }
}

fn independent_subset<C: Coeff>(
    order: &[Partition],
    candidates: Vec<FockVector<C>>,
    degree: usize,
) -> Result<Vec<FockVector<C>>, FockError> {
    let mut ech = Echelon { rows: Vec::new() };
    let mut chosen = Vec::new();
    for c in candidates {
        if chosen.len() == order.len() {
            break;
        }
        if ech.insert(order.iter().map(|p| eval(&c.coeff(p))).collect()) {
            chosen.push(c);
        }
    }
    if chosen.len() < order.len() {
        return Err(FockError::Spanning { degree, rank: chosen.len(), needed: order.len() });
    }
    Ok(chosen)
}

fn level_candidates<C: Coeff>(levels: &[Vec<FockVector<C>>], d: usize, b: usize) -> Vec<FockVector<C>> {
    let mut jobs: Vec<(Option<usize>, i64, &FockVector<C>)> = Vec::new();
    // For b = 1 there is no sl_1 part and the Heisenberg operators alone act.
    for i in (0..b).filter(|_| b > 1) {
        jobs.extend(levels[d - 1].iter().map(|v| (Some(i), 0, v)));
    }
    for k in 1..=d / b {
        jobs.extend(levels[d - k * b].iter().map(|v| (None, k as i64, v)));
    }
    jobs.par_iter()
        .map(|&(i, k, v)| match i {
            Some(i) => apply_standard(Generator::F(i), v, b),
            None => apply_v(k, v, b),
        })
        .filter(|v| !v.is_zero())
        .collect()
}

/// Bar-invariant vectors of degree `n`: every `f_i` and `V_k` applied to
/// maximal independent sets of such vectors in lower degrees, breadth first
/// from the vacuum.
pub fn creation_candidates<C: Coeff>(n: usize, b: usize) -> Result<Vec<FockVector<C>>, FockError> {
    assert!(b >= 1, "b must be positive");
    let mut levels: Vec<Vec<FockVector<C>>> = vec![vec![FockVector::vacuum()]];
    for d in 1..=n {
        let cands = level_candidates(&levels, d, b);
        if d == n {
            return Ok(cands);
        }
        let chosen = independent_subset(&enumerate_partitions(d), cands, d)?;
        levels.push(chosen);
    }
    Ok(levels.pop().expect("degree zero"))
}

/// `A_b(q)` in degree `n`. Entry `(lambda, mu)` is `a_lambda^mu`, the
/// coefficient of `|mu>` in the bar image of `|lambda>`.
#[derive(Clone, Debug, PartialEq)]
pub struct BarMatrix<C: Coeff> {
    pub n: usize,
    pub b: usize,
    pub matrix: KeyedMatrix<C>,
}

impl<C: Coeff> BarMatrix<C> {
    pub fn a(&self, lambda: &Partition, mu: &Partition) -> RatFunc<C> {
        self.matrix.get(lambda, mu)
    }

    pub fn order(&self) -> &[Partition] {
        self.matrix.order()
    }

    pub fn to_json(&self) -> Value {
        json!({ "n": self.n, "b": self.b, "order": order_json(self.order()), "entries": self.matrix.entries_json() })
    }

    pub fn from_json(v: &Value) -> Result<Self, FockError> {
        let (n, b, matrix) = parse_header(v)?;
        Ok(BarMatrix { n, b, matrix })
    }

    /// Bar image of a vector of this degree.
    pub fn bar(&self, v: &FockVector<C>) -> Result<FockVector<C>, FockError> {
        let mut out = FockVector::zero();
        for (lambda, c) in v.terms() {
            let c = bar_scalar(c);
            for mu in self.order() {
                let a = self.a(lambda, mu);
                if a.is_zero() {
                    continue;
                }
                let a = a.as_laurent().ok_or_else(|| FockError::NotLaurent(format!("{lambda}|{mu}")))?;
                out.add_term(mu.clone(), &(&c * a));
            }
        }
        Ok(out)
    }
}

fn parse_header<C: Coeff>(v: &Value) -> Result<(usize, usize, KeyedMatrix<C>), FockError> {
    let bad = |s: &str| FockError::Json(s.to_string());
    let n = v["n"].as_u64().ok_or_else(|| bad("n"))? as usize;
    let b = v["b"].as_u64().ok_or_else(|| bad("b"))? as usize;
    let order = order_from_json(&v["order"]).ok_or_else(|| bad("order"))?;
    if order.iter().any(|p| p.size() != n) {
        return Err(bad("order"));
    }
    Ok((n, b, KeyedMatrix::from_entries_json(order, &v["entries"])?))
}

/// `A_b(q) = T(q) T(1/q)^(-1)` from any list of bar-invariant vectors of
/// degree `n` that spans. The result is checked against the Leclerc-Thibon
/// properties.
pub fn bar_matrix_from<C: Coeff>(n: usize, b: usize, vectors: Vec<FockVector<C>>) -> Result<BarMatrix<C>, FockError> {
    let order = enumerate_partitions(n);
    let chosen = independent_subset(&order, vectors, n)?;
    let t = Matrix::from_fn(order.len(), order.len(), |i, j| RatFunc::from_poly(chosen[j].coeff(&order[i])));
    let tbar = t.map(|x| x.bar_substitute(crate::exact::Var::Q));
    let inv = tbar.inverse().expect("rank was verified at a sample point");
    let a = &t * &inv;
    let bar = BarMatrix { n, b, matrix: KeyedMatrix::from_matrix(order, a) };
    let report = lt_property_check(&bar);
    if !report.passes() {
        return Err(FockError::Properties(report.to_string()));
    }
    Ok(bar)
}

pub fn bar_matrix<C: Coeff>(n: usize, b: usize) -> Result<BarMatrix<C>, FockError> {
    bar_matrix_from(n, b, creation_candidates(n, b)?)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LtReport {
    pub laurent_integral: bool,
    pub block_support: bool,
    pub unit_diagonal: bool,
    pub conjugate_symmetry: bool,
    pub involution: bool,
    pub violations: Vec<String>,
}

impl LtReport {
    pub fn passes(&self) -> bool {
        self.laurent_integral && self.block_support && self.unit_diagonal && self.conjugate_symmetry && self.involution
    }
}

impl fmt::Display for LtReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "ok")
        } else {
            write!(f, "{}", self.violations.join("; "))
        }
    }
}

fn is_integral_in_q<C: Coeff>(x: &RatFunc<C>) -> bool {
    x.as_laurent().is_some_and(|p| p.terms().all(|(m, c)| m.t.is_zero() && m.q.is_integer() && c.to_big().is_integer()))
}

/// Properties (a)-(d) of the Leclerc-Thibon theorem, plus `A(q) A(1/q) = Id`.
pub fn lt_property_check<C: Coeff>(a: &BarMatrix<C>) -> LtReport {
    let order = a.order();
    let mut r = LtReport {
        laurent_integral: true,
        block_support: true,
        unit_diagonal: true,
        conjugate_symmetry: true,
        involution: true,
        violations: Vec::new(),
    };
    let cores: Vec<Partition> = order.iter().map(|p| b_core(p, a.b).expect("b >= 1")).collect();
    for (j, lambda) in order.iter().enumerate() {
        for (i, mu) in order.iter().enumerate() {
            let x = a.a(lambda, mu);
            if !is_integral_in_q(&x) {
                r.laurent_integral = false;
                r.violations.push(format!("(a) at {lambda}|{mu}"));
            }
            if !x.is_zero() && !(dominance_leq(mu, lambda) && cores[i] == cores[j]) {
                r.block_support = false;
                r.violations.push(format!("(b) at {lambda}|{mu}"));
            }
            if i == j && !x.is_one() {
                r.unit_diagonal = false;
                r.violations.push(format!("(c) at {lambda}"));
            }
            if x != a.a(&mu.conjugate(), &lambda.conjugate()) {
                r.conjugate_symmetry = false;
                r.violations.push(format!("(d) at {lambda}|{mu}"));
            }
        }
    }
    let m = a.matrix.matrix();
    if !(m * &m.map(|x| x.bar_substitute(crate::exact::Var::Q))).is_identity() {
        r.involution = false;
        r.violations.push("A(q) A(1/q) != Id".to_string());
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn label(&self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// `D^(+-)`: entry `(lambda, mu)` is `d_lambda^mu`, the coefficient of `|mu>`
/// in `G^(+-)(lambda)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalMatrix<C: Coeff> {
    pub n: usize,
    pub b: usize,
    pub sign: Sign,
    pub matrix: KeyedMatrix<C>,
}

impl<C: Coeff> CanonicalMatrix<C> {
    pub fn d(&self, lambda: &Partition, mu: &Partition) -> RatFunc<C> {
        self.matrix.get(lambda, mu)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "b": self.b,
            "sign": self.sign.label(),
            "order": order_json(self.matrix.order()),
            "entries": self.matrix.entries_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, FockError> {
        let (n, b, matrix) = parse_header(v)?;
        let sign = match v["sign"].as_str() {
            Some("+") => Sign::Plus,
            Some("-") => Sign::Minus,
            _ => return Err(FockError::Json("sign".to_string())),
        };
        Ok(CanonicalMatrix { n, b, sign, matrix })
    }

    /// `G(lambda)` as a vector.
    pub fn column(&self, lambda: &Partition) -> FockVector<C> {
        FockVector::from_terms(self.matrix.order().iter().filter_map(|mu| {
            let d = self.d(lambda, mu);
            d.as_laurent().map(|p| (mu.clone(), p.clone()))
        }))
    }
}

/// Solves `d - bar(d) = r` for `d` in `q Z[q]` (or `q^-1 Z[q^-1]`). Needs `r`
/// antisymmetric under `q -> 1/q`.
fn split<C: Coeff>(r: &Laurent<C>, sign: Sign) -> Option<Laurent<C>> {
    if &bar_scalar(r) != &-r.clone() {
        return None;
    }
    let keep = |m: &Monomial| match sign {
        Sign::Plus => m.q.is_positive(),
        Sign::Minus => m.q.is_negative(),
    };
    Some(Laurent::from_terms(r.terms().filter(|(m, _)| keep(m)).map(|(m, c)| (*m, c.clone()))))
}

/// The unique unitriangular `D` with bar-invariant columns and off-diagonal
/// entries in `q^(+-1) Z[q^(+-1)]`, by the usual triangular recursion down the
/// dominance order.
pub fn canonical_basis<C: Coeff>(a: &BarMatrix<C>, sign: Sign) -> Result<CanonicalMatrix<C>, FockError> {
    let order = a.order().to_vec();
    let len = order.len();
    let entry = |j: usize, i: usize| -> Result<Laurent<C>, FockError> {
        let x = a.a(&order[j], &order[i]);
        x.as_laurent().cloned().ok_or_else(|| FockError::NotLaurent(format!("{}|{}", order[j], order[i])))
    };
    for i in 0..len {
        for j in 0..i {
            if !a.a(&order[i], &order[j]).is_zero() {
                return Err(FockError::Recursion(format!("bar matrix is not triangular at {}|{}", order[i], order[j])));
            }
        }
    }
    let mut d = Matrix::<RatFunc<C>>::zeros(len, len);
    for lam in 0..len {
        let mut col: Vec<Laurent<C>> = vec![Laurent::zero(); len];
        col[lam] = Laurent::one();
        for nu in lam + 1..len {
            let mut r = Laurent::zero();
            for mu in lam..nu {
                if !col[mu].is_zero() {
                    r += &(&entry(mu, nu)? * &bar_scalar(&col[mu]));
                }
            }
            col[nu] = split(&r, sign).ok_or_else(|| FockError::Recursion(format!("{}|{}", order[lam], order[nu])))?;
        }
        for (i, c) in col.into_iter().enumerate() {
            d[(i, lam)] = RatFunc::from_poly(c);
        }
    }
    Ok(CanonicalMatrix { n: a.n, b: a.b, sign, matrix: KeyedMatrix::from_matrix(order, d) })
}
