//! Stable bases of the K-theory of `Hilb_n` at the slope points `m ± ε`.
//!
//! A table stores the restrictions `gamma_lambda^mu` of `s^m_lambda` to the
//! fixed points. The slope-zero seed is computed from plethystically
//! transformed Schur functions; every other chamber is reached by integer
//! `∇`-shifts and wall crossings.

mod renorm;
mod solve;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::combin::{dominance_leq, enumerate_partitions, Partition};
use crate::exact::{Coeff, ExactError, Exp, Laurent, Monomial, RatFunc};
use crate::keyed::{order_from_json, order_json, KeyError, KeyedMatrix};
use crate::linalg::Matrix;
use crate::symfunc::{diagonal_factor, Basis, SymError, SymFunc, Symmetric};

pub use renorm::{renorm_factor, RenormFactor};
pub use solve::cross_wall;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StableError {
    #[error("seed check failed: {0}")]
    Seed(String),
    #[error("axioms unsatisfiable at wall {wall} for {lambda} -> {mu}")]
    AxiomsUnsatisfiable { wall: Exp, lambda: Partition, mu: Partition },
    #[error("uniqueness failure at wall {wall} for {lambda} -> {mu}: coefficient of {witness} is free")]
    Uniqueness { wall: Exp, lambda: Partition, mu: Partition, witness: Monomial },
    #[error("linear solver and division algorithm disagree at wall {wall} for {lambda} -> {mu}")]
    SolverMismatch { wall: Exp, lambda: Partition, mu: Partition },
    #[error("wall {wall}: entry {lambda} -> {mu} lies outside the block w(c_lambda - c_mu) in Z")]
    BlockSupport { wall: Exp, lambda: Partition, mu: Partition },
    #[error("table at {slope}: {0}", slope = .1)]
    Invalid(String, SlopePoint),
    #[error("table is not adjacent to wall {0}")]
    NotAdjacent(Exp),
    #[error("renormalization of {lambda} at m = {m} depends on the ribbon decomposition")]
    RibbonDependence { lambda: Partition, m: Exp },
    #[error("renormalized transition needs a shared slope, got {0} and {1}")]
    NoSharedSlope(Exp, Exp),
    #[error("entry {0} is not a Laurent polynomial")]
    NotLaurent(String),
    #[error("path dependence at {0}")]
    PathDependence(SlopePoint),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Key(#[from] KeyError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn sign(self) -> i64 {
        match self {
            Side::Minus => -1,
            Side::Plus => 1,
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Minus => Side::Plus,
            Side::Plus => Side::Minus,
        }
    }

    pub fn from_sign(s: i64) -> Option<Side> {
        match s {
            1 => Some(Side::Plus),
            -1 => Some(Side::Minus),
            _ => None,
        }
    }
}

/// `m + side·ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SlopePoint {
    pub m: Exp,
    pub side: Side,
}

impl SlopePoint {
    pub fn new(m: Exp, side: Side) -> Self {
        SlopePoint { m, side }
    }

    pub fn plus(m: Exp) -> Self {
        Self::new(m, Side::Plus)
    }

    pub fn minus(m: Exp) -> Self {
        Self::new(m, Side::Minus)
    }

    pub fn to_json(&self) -> Value {
        json!({"num": self.m.numer(), "den": self.m.denom(), "side": self.side.sign()})
    }

    pub fn from_json(v: &Value) -> Result<Self, StableError> {
        let bad = || StableError::Json(format!("bad slope {v}"));
        let num = v.get("num").and_then(Value::as_i64).ok_or_else(bad)?;
        let den = v.get("den").and_then(Value::as_i64).filter(|&d| d > 0).ok_or_else(bad)?;
        let side = v.get("side").and_then(Value::as_i64).and_then(Side::from_sign).ok_or_else(bad)?;
        Ok(SlopePoint::new(Exp::new(num, den), side))
    }
}

impl fmt::Display for SlopePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.side == Side::Plus { '+' } else { '-' };
        write!(f, "{}{}eps", self.m, s)
    }
}

/// Dense restriction rows: `rows[i][j] = gamma_(order[i])^(order[j])`.
pub(crate) type Rows<C> = Vec<Vec<Laurent<C>>>;

#[derive(Clone, Debug, PartialEq)]
pub struct StableBasisTable<C: Coeff> {
    pub n: usize,
    pub slope: SlopePoint,
    /// Rows multiplied by the renormalization factors.
    pub renormalized: bool,
    gamma: KeyedMatrix<C>,
}

impl<C: Coeff> StableBasisTable<C> {
    pub fn new(n: usize, slope: SlopePoint, gamma: KeyedMatrix<C>) -> Self {
        StableBasisTable { n, slope, renormalized: false, gamma }
    }

    pub(crate) fn from_rows(n: usize, slope: SlopePoint, order: Vec<Partition>, rows: &Rows<C>) -> Self {
        let p = order.len();
        let m = Matrix::from_fn(p, p, |i, j| RatFunc::from_poly(rows[j][i].clone()));
        Self::new(n, slope, KeyedMatrix::from_matrix(order, m))
    }

    pub fn order(&self) -> &[Partition] {
        self.gamma.order()
    }

    /// Entry `(lambda, mu)` is `gamma_lambda^mu`.
    pub fn gamma(&self) -> &KeyedMatrix<C> {
        &self.gamma
    }

    pub fn get(&self, lambda: &Partition, mu: &Partition) -> RatFunc<C> {
        self.gamma.get(lambda, mu)
    }

    pub(crate) fn rows(&self) -> Result<Rows<C>, StableError> {
        let p = self.order().len();
        let m = self.gamma.matrix();
        (0..p)
            .map(|i| {
                (0..p)
                    .map(|j| {
                        m[(j, i)].as_laurent().cloned().ok_or_else(|| StableError::NotLaurent(m[(j, i)].to_string()))
                    })
                    .collect()
            })
            .collect()
    }

    fn with_slope(&self, slope: SlopePoint) -> Self {
        StableBasisTable { slope, ..self.clone() }
    }

    /// Triangularity, the diagonal, Laurent entries and the degree windows.
    pub fn check(&self) -> Result<(), StableError> {
        let fail = |msg: String| Err(StableError::Invalid(msg, self.slope));
        if self.renormalized {
            return fail("renormalized tables carry no windows".into());
        }
        for lambda in self.order() {
            for mu in self.order() {
                let v = self.get(lambda, mu);
                if mu == lambda {
                    if v != diagonal_factor(lambda) {
                        return fail(format!("diagonal at {lambda} is {v}"));
                    }
                    continue;
                }
                if v.is_zero() {
                    continue;
                }
                if !dominance_leq(mu, lambda) {
                    return fail(format!("entry {lambda} -> {mu} breaks triangularity"));
                }
                let Some(p) = v.as_laurent() else {
                    return fail(format!("entry {lambda} -> {mu} is not Laurent: {v}"));
                };
                let (lo, hi) = degree_window(lambda, mu, self.slope);
                let (a, b) = p.t_degree_range()?;
                if a < Exp::from_integer(lo) || b > Exp::from_integer(hi) {
                    return fail(format!("entry {lambda} -> {mu} has t-degrees [{a}, {b}] outside [{lo}, {hi}]"));
                }
            }
        }
        Ok(())
    }

    /// The symmetric function of each row, in the Schur basis.
    ///
    /// Restrictions here are taken in the frame `q -> 1/q, t -> 1/t` of
    /// [`Symmetric::restrict`], so a row is sent back through that frame.
    pub fn symmetric_functions(&self, sym: &Symmetric<C>) -> Vec<(Partition, SymFunc<C>)> {
        self.order()
            .iter()
            .map(|lambda| {
                let values = self.order().iter().map(|mu| (mu.clone(), self.get(lambda, mu).invert_all())).collect();
                let r = crate::symfunc::Restrictions { degree: self.n, values };
                let f = sym.convert(&sym.from_restrictions(&r), Basis::Schur);
                let coeffs: Vec<_> = f.coeffs().map(|(p, c)| (p.clone(), c.invert_all())).collect();
                (lambda.clone(), SymFunc::from_coeffs(self.n, Basis::Schur, coeffs).expect("sizes agree"))
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "n": self.n,
            "slope": self.slope.to_json(),
            "order": order_json(self.order()),
            "gamma": self.gamma.entries_json(),
        });
        if self.renormalized {
            v["renormalized"] = Value::Bool(true);
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Self, StableError> {
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| StableError::Json("missing n".into()))? as usize;
        let slope = SlopePoint::from_json(v.get("slope").unwrap_or(&Value::Null))?;
        let order = v.get("order").and_then(order_from_json).ok_or_else(|| StableError::Json("bad order".into()))?;
        if order.iter().any(|p| p.size() != n) {
            return Err(StableError::Json("order is not a set of partitions of n".into()));
        }
        let gamma = KeyedMatrix::from_entries_json(order, v.get("gamma").unwrap_or(&Value::Null))?;
        let renormalized = v.get("renormalized").and_then(Value::as_bool).unwrap_or(false);
        Ok(StableBasisTable { n, slope, renormalized, gamma })
    }
}

/// Transition across one wall. Entry `(lambda, mu)` is the coefficient of
/// `s^(w+ε)_mu` in `s^(w-ε)_lambda`, whichever way the wall was crossed, so
/// the dense matrix has column `lambda` expanding `lambda`.
#[derive(Clone, Debug, PartialEq)]
pub struct WallCrossMatrix<C: Coeff> {
    pub n: usize,
    pub wall: Exp,
    matrix: KeyedMatrix<C>,
}

impl<C: Coeff> WallCrossMatrix<C> {
    pub fn matrix(&self) -> &KeyedMatrix<C> {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.matrix().is_identity()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "wall": {"num": self.wall.numer(), "den": self.wall.denom()},
            "orientation": "minus-in-plus",
            "order": order_json(self.matrix.order()),
            "entries": self.matrix.entries_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, StableError> {
        let bad = |what: &str| StableError::Json(format!("bad {what}"));
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("n"))? as usize;
        let w = v.get("wall").ok_or_else(|| bad("wall"))?;
        let num = w.get("num").and_then(Value::as_i64).ok_or_else(|| bad("wall"))?;
        let den = w.get("den").and_then(Value::as_i64).filter(|&d| d > 0).ok_or_else(|| bad("wall"))?;
        if v.get("orientation").and_then(Value::as_str) != Some("minus-in-plus") {
            return Err(bad("orientation"));
        }
        let order = v.get("order").and_then(order_from_json).ok_or_else(|| bad("order"))?;
        let matrix = KeyedMatrix::from_entries_json(order, v.get("entries").unwrap_or(&Value::Null))?;
        Ok(WallCrossMatrix { n, wall: Exp::new(num, den), matrix })
    }
}

fn floor(x: Exp) -> i64 {
    x.floor().to_integer()
}

fn ceil(x: Exp) -> i64 {
    x.ceil().to_integer()
}

/// Extreme `t`-degrees of `gamma_mu^mu = prod (q2^l - q1^(a+1))`.
pub(crate) fn diagonal_t_range(mu: &Partition) -> (i64, i64) {
    mu.cells().fold((0, 0), |(lo, hi), c| (lo - mu.leg(c) as i64, hi + mu.arm(c) as i64 + 1))
}

/// Allowed `t`-degrees of `gamma_lambda^mu` at `slope`: the `t`-range of
/// `gamma_mu^mu` shifted by `m (c_mu - c_lambda)`, with the endpoint on the
/// far side of the wall excluded when it is an integer.
pub fn degree_window(lambda: &Partition, mu: &Partition, slope: SlopePoint) -> (i64, i64) {
    let (d0, d1) = diagonal_t_range(mu);
    let dc = mu.content() - lambda.content();
    let shift = slope.m * Exp::from_integer(dc);
    let (l, u) = (shift + d0, shift + d1);
    let s = slope.side.sign() * dc;
    let lo = if l.is_integer() { l.to_integer() + i64::from(s > 0) } else { ceil(l) };
    let hi = if u.is_integer() { u.to_integer() - i64::from(s < 0) } else { floor(u) };
    (lo, hi)
}

/// Content differences realized by pairs of partitions of `n`.
fn content_gaps(n: usize) -> BTreeSet<i64> {
    let cs: BTreeSet<i64> = enumerate_partitions(n).iter().map(Partition::content).collect();
    cs.iter().flat_map(|a| cs.iter().map(move |b| (a - b).abs())).filter(|d| *d > 0).collect()
}

/// Non-integer `a/b` in the open interval with `b <= n(n-1)` and `b`
/// dividing some content difference, in increasing order.
pub fn candidate_walls(n: usize, lo: Exp, hi: Exp) -> Vec<Exp> {
    let gaps = content_gaps(n);
    let bmax = (n * n.saturating_sub(1)) as i64;
    let mut out = BTreeSet::new();
    for b in 2..=bmax {
        if !gaps.iter().any(|d| d % b == 0) {
            continue;
        }
        for a in (floor(lo * b))..=(ceil(hi * b)) {
            let w = Exp::new(a, b);
            if a.gcd(&b) == 1 && w > lo && w < hi {
                out.insert(w);
            }
        }
    }
    out.into_iter().collect()
}

/// `gamma_lambda^mu -> gamma_lambda^mu chi_mu / chi_lambda` (`direction` +1)
/// or its inverse, moving the slope by `direction`.
pub fn nabla_shift<C: Coeff>(table: &StableBasisTable<C>, direction: i64) -> StableBasisTable<C> {
    assert!(direction == 1 || direction == -1, "direction must be +1 or -1");
    let e = Exp::from_integer(direction);
    let order = table.order();
    let p = order.len();
    let weights: Vec<Monomial> = order.iter().map(|l| l.weight().pow(e)).collect();
    let m = table.gamma.matrix();
    let shifted = Matrix::from_fn(p, p, |i, j| m[(i, j)].mul_monomial(weights[i] * weights[j].inv()));
    StableBasisTable {
        n: table.n,
        slope: SlopePoint::new(table.slope.m + e, table.slope.side),
        renormalized: table.renormalized,
        gamma: KeyedMatrix::from_matrix(order.to_vec(), shifted),
    }
}

fn one_over_one_minus<C: Coeff>(m: Monomial) -> RatFunc<C> {
    (&RatFunc::one() - &RatFunc::mono(m)).inv().expect("nonconstant")
}

/// The table at `0 + ε` (equal to `0 - ε`): `s_lambda[X/(1 - q2^-1)]`,
/// restricted in the inverted frame and scaled to the diagonal.
pub fn seed_slope0<C: Coeff>(sym: &Symmetric<C>, n: usize) -> Result<StableBasisTable<C>, StableError> {
    let order = enumerate_partitions(n);
    let rows: Result<Rows<C>, StableError> = order
        .par_iter()
        .map(|lambda| {
            let s = SymFunc::basis_element(Basis::Schur, lambda);
            let g =
                sym.plethysm(&s, |k| one_over_one_minus(Monomial::from_q1q2(0.into(), Exp::from_integer(-(k as i64)))));
            let r = sym.restrictions(&g);
            let r: Vec<RatFunc<C>> = order.iter().map(|mu| r.values[mu].invert_all()).collect();
            let i = order.iter().position(|mu| mu == lambda).expect("in order");
            let c = diagonal_factor::<C>(lambda)
                .checked_div(&r[i])
                .map_err(|_| StableError::Seed(format!("restriction of the seed at {lambda} vanishes")))?;
            r.iter()
                .zip(&order)
                .map(|(v, mu)| {
                    let x = &c * v;
                    x.as_laurent()
                        .cloned()
                        .ok_or_else(|| StableError::Seed(format!("entry {lambda} -> {mu} is not Laurent: {x}")))
                })
                .collect()
        })
        .collect();
    let table = StableBasisTable::from_rows(n, SlopePoint::plus(Exp::zero()), order, &rows?);
    for side in [Side::Plus, Side::Minus] {
        table.with_slope(SlopePoint::new(Exp::zero(), side)).check().map_err(|e| StableError::Seed(e.to_string()))?;
    }
    Ok(table)
}

/// Candidate walls in `(lo, hi]`.
fn walls_through(n: usize, lo: Exp, hi: Exp) -> Vec<Exp> {
    // Below the gap between any two fractions with denominators <= n(n-1).
    let b = (n * n.saturating_sub(1)) as i64;
    let eps = Exp::new(1, 2 * b * b + 2);
    candidate_walls(n, lo, hi + eps).into_iter().filter(|&w| w <= hi).collect()
}

/// Walls in `(lo, hi]` and integers, the endpoints of the chambers.
fn chamber_points(n: usize, lo: Exp, hi: Exp) -> Vec<Exp> {
    let mut pts: BTreeSet<Exp> = walls_through(n, lo, hi).into_iter().collect();
    for k in ceil(lo)..=floor(hi) {
        pts.insert(Exp::from_integer(k));
    }
    pts.into_iter().collect()
}

/// Left endpoint of the chamber containing `slope`.
fn chamber_left(n: usize, slope: SlopePoint) -> Exp {
    let m = slope.m;
    let pts = chamber_points(n, Exp::from_integer(floor(m) - 1), m);
    let found = match slope.side {
        Side::Plus => pts.iter().rev().find(|&&p| p <= m),
        Side::Minus => pts.iter().rev().find(|&&p| p < m),
    };
    *found.expect("an integer lies below")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Path {
    /// `∇`-shift the seed to the integer below, then cross walls upward.
    ShiftFirst,
    /// Cross every wall between 0 and the target.
    WallByWall,
}

type ChamberKey = (usize, Exp, Path);

/// Symmetric-function context plus a write-once cache of chamber tables.
pub struct Stable<C: Coeff> {
    sym: Symmetric<C>,
    chambers: Mutex<HashMap<ChamberKey, Arc<StableBasisTable<C>>>>,
    walls: Mutex<HashMap<(usize, Exp), Arc<WallCrossMatrix<C>>>>,
}

impl<C: Coeff> Default for Stable<C> {
    fn default() -> Self {
        Stable { sym: Symmetric::new(), chambers: Mutex::default(), walls: Mutex::default() }
    }
}

impl<C: Coeff> Stable<C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn symmetric(&self) -> &Symmetric<C> {
        &self.sym
    }

    fn cached(&self, key: &ChamberKey) -> Option<Arc<StableBasisTable<C>>> {
        self.chambers.lock().expect("chamber cache").get(key).cloned()
    }

    fn store(&self, key: ChamberKey, t: StableBasisTable<C>) -> Arc<StableBasisTable<C>> {
        self.chambers.lock().expect("chamber cache").entry(key).or_insert_with(|| Arc::new(t)).clone()
    }

    /// Seeds a precomputed chamber, e.g. one loaded from disk.
    pub fn insert_chamber(&self, table: StableBasisTable<C>) -> Result<(), StableError> {
        table.check()?;
        let left = chamber_left(table.n, table.slope);
        self.store((table.n, left, Path::ShiftFirst), table);
        Ok(())
    }

    pub fn seed(&self, n: usize) -> Result<Arc<StableBasisTable<C>>, StableError> {
        let key = (n, Exp::zero(), Path::ShiftFirst);
        if let Some(t) = self.cached(&key) {
            return Ok(t);
        }
        let t = seed_slope0(&self.sym, n)?;
        self.chambers.lock().expect("chamber cache").insert((n, Exp::zero(), Path::WallByWall), Arc::new(t.clone()));
        Ok(self.store(key, t))
    }

    fn cross(&self, table: &StableBasisTable<C>, w: Exp) -> Result<StableBasisTable<C>, StableError> {
        let (next, matrix) = cross_wall(table, w)?;
        self.walls.lock().expect("wall cache").entry((table.n, w)).or_insert_with(|| Arc::new(matrix));
        Ok(next)
    }

    pub fn stable_basis(&self, n: usize, slope: SlopePoint) -> Result<StableBasisTable<C>, StableError> {
        self.stable_basis_via(n, slope, Path::ShiftFirst)
    }

    pub fn stable_basis_via(
        &self,
        n: usize,
        slope: SlopePoint,
        path: Path,
    ) -> Result<StableBasisTable<C>, StableError> {
        let target = chamber_left(n, slope);
        let key = (n, target, path);
        if let Some(t) = self.cached(&key) {
            return Ok(t.with_slope(slope));
        }
        let seed = self.seed(n)?;
        let t = match path {
            Path::ShiftFirst => {
                let k = floor(target);
                let base = Exp::from_integer(k);
                // Resume from the furthest cached chamber in [k, target].
                let start = {
                    let cache = self.chambers.lock().expect("chamber cache");
                    cache
                        .iter()
                        .filter(|((m, l, p), _)| *m == n && *p == path && *l >= base && *l <= target)
                        .max_by_key(|((_, l, _), _)| *l)
                        .map(|((_, l, _), t)| (*l, t.clone()))
                };
                let (mut at, mut cur) = match start {
                    Some((l, t)) => (l, (*t).clone()),
                    None => {
                        let mut t = (*seed).clone();
                        for _ in 0..k.unsigned_abs() {
                            t = nabla_shift(&t, k.signum());
                        }
                        let t = t.with_slope(SlopePoint::plus(base));
                        self.store((n, base, path), t.clone());
                        (base, t)
                    }
                };
                for w in walls_through(n, at, target) {
                    cur = self.cross(&cur.with_slope(SlopePoint::minus(w)), w)?;
                    at = w;
                    self.store((n, at, path), cur.clone());
                }
                cur
            }
            Path::WallByWall => {
                let mut cur = (*seed).clone();
                if target >= Exp::zero() {
                    for w in walls_through(n, Exp::zero(), target) {
                        cur = self.cross(&cur.with_slope(SlopePoint::minus(w)), w)?;
                        self.store((n, w, path), cur.clone());
                    }
                } else {
                    for w in candidate_walls(n, target, Exp::zero()).into_iter().rev() {
                        cur = self.cross(&cur.with_slope(SlopePoint::plus(w)), w)?;
                    }
                }
                cur
            }
        };
        Ok(self.store(key, t).with_slope(slope))
    }

    /// Computes the table along both paths and compares.
    pub fn check_path_independence(&self, n: usize, slope: SlopePoint) -> Result<(), StableError> {
        let a = self.stable_basis_via(n, slope, Path::ShiftFirst)?;
        let b = self.stable_basis_via(n, slope, Path::WallByWall)?;
        if a != b {
            return Err(StableError::PathDependence(slope));
        }
        Ok(())
    }

    /// The crossing at `w`, computed from the chamber below it.
    pub fn wall_matrix(&self, n: usize, w: Exp) -> Result<Arc<WallCrossMatrix<C>>, StableError> {
        if let Some(m) = self.walls.lock().expect("wall cache").get(&(n, w)) {
            return Ok(m.clone());
        }
        let below = self.stable_basis(n, SlopePoint::minus(w))?;
        let (_, matrix) = cross_wall(&below, w)?;
        Ok(self.walls.lock().expect("wall cache").entry((n, w)).or_insert_with(|| Arc::new(matrix)).clone())
    }

    /// Entry `(lambda, mu)` is the coefficient of `s^(slope2)_mu` in
    /// `s^(slope1)_lambda`; renormalized bases need `slope1.m == slope2.m`.
    pub fn transition_matrix(
        &self,
        n: usize,
        slope1: SlopePoint,
        slope2: SlopePoint,
        renormalized: bool,
    ) -> Result<KeyedMatrix<C>, StableError> {
        if renormalized && slope1.m != slope2.m {
            return Err(StableError::NoSharedSlope(slope1.m, slope2.m));
        }
        let t1 = self.stable_basis(n, slope1)?;
        let t2 = self.stable_basis(n, slope2)?;
        let order = t1.order().to_vec();
        let p = order.len();
        let (g1, g2) = (t1.gamma.matrix(), t2.gamma.matrix());
        // Row lambda of G1 = T G2, solved top down since G2 is triangular.
        let rows: Vec<Vec<RatFunc<C>>> = (0..p)
            .into_par_iter()
            .map(|l| {
                let mut rem: Vec<RatFunc<C>> = (0..p).map(|j| g1[(j, l)].clone()).collect();
                let mut out = vec![RatFunc::zero(); p];
                for mu in l..p {
                    if rem[mu].is_zero() {
                        continue;
                    }
                    let c = exact_div(&rem[mu], &g2[(mu, mu)]);
                    for j in mu..p {
                        if !g2[(j, mu)].is_zero() {
                            rem[j] -= &(&c * &g2[(j, mu)]);
                        }
                    }
                    out[mu] = c;
                }
                out
            })
            .collect();
        let mut m = Matrix::from_fn(p, p, |i, j| rows[j][i].clone());
        if renormalized {
            let r: Vec<Monomial> =
                order.iter().map(|l| renorm_factor(l, slope1.m).map(|f| f.value)).collect::<Result<_, _>>()?;
            m = Matrix::from_fn(p, p, |i, j| m[(i, j)].mul_monomial(r[j] * r[i].inv()));
        }
        Ok(KeyedMatrix::from_matrix(order, m))
    }
}

/// `a / b`, by exact Laurent division when it exists.
fn exact_div<C: Coeff>(a: &RatFunc<C>, b: &RatFunc<C>) -> RatFunc<C> {
    if let (Some(x), Some(y)) = (a.as_laurent(), b.as_laurent()) {
        if let Some(z) = x.div_exact(y) {
            return RatFunc::from_poly(z);
        }
    }
    a / b
}

/// `gamma_lambda^mu -> r_lambda gamma_lambda^mu`.
pub fn renormalize<C: Coeff>(table: &StableBasisTable<C>) -> Result<StableBasisTable<C>, StableError> {
    if table.renormalized {
        return Ok(table.clone());
    }
    let order = table.order();
    let p = order.len();
    let r: Vec<Monomial> =
        order.iter().map(|l| renorm_factor(l, table.slope.m).map(|f| f.value)).collect::<Result<_, _>>()?;
    let m = table.gamma.matrix();
    let scaled = Matrix::from_fn(p, p, |i, j| m[(i, j)].mul_monomial(r[j]));
    Ok(StableBasisTable {
        n: table.n,
        slope: table.slope,
        renormalized: true,
        gamma: KeyedMatrix::from_matrix(order.to_vec(), scaled),
    })
}
