//! Checks that tie the pieces together: wall crossings against the Fock
//! space bar involution, the golden tables for two and three points,
//! Schur positivity and the characters of finite-dimensional modules.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::combin::{enumerate_partitions, Partition};
use crate::exact::{parse_ratfunc, series_expand, Coeff, Coordinates, Exp, Monomial, RatFunc};
use crate::fock::{bar_matrix, FockError};
use crate::keyed::{parse_pair_key, KeyedMatrix};
use crate::linalg::Matrix;
use crate::stable::{candidate_walls, renorm_factor, SlopePoint, Stable, StableError};
use crate::symfunc::{Basis, SymFunc};

const GOLDEN: &str = include_str!("../golden/small_n.json");

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Stable(#[from] StableError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("normalization of the slope-zero basis is not uniform: {0}")]
    Normalization(String),
    #[error("golden data: {0}")]
    Golden(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Match,
    Mismatch,
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Match => "match",
            Status::Mismatch => "mismatch",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub check: String,
    pub params: Value,
    pub status: Status,
    /// First differing entry, or the reason for skipping.
    pub witness: Option<String>,
    pub millis: u64,
}

impl Report {
    fn new(check: &str, params: Value, start: Instant, witness: Option<String>) -> Self {
        let status = if witness.is_some() { Status::Mismatch } else { Status::Match };
        Report { check: check.into(), params, status, witness, millis: start.elapsed().as_millis() as u64 }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "check": self.check,
            "params": self.params,
            "status": self.status.label(),
            "millis": self.millis,
        });
        if let Some(w) = &self.witness {
            v["witness"] = Value::String(w.clone());
        }
        v
    }
}

fn first_difference<C: Coeff>(got: &KeyedMatrix<C>, want: &KeyedMatrix<C>) -> Option<String> {
    for lambda in want.order() {
        for mu in want.order() {
            let (g, w) = (got.get(lambda, mu), want.get(lambda, mu));
            if g != w {
                return Some(format!("{lambda}|{mu}: got {g}, expected {w}"));
            }
        }
    }
    None
}

/// Renormalized crossing at `w` against `A_b(q)`, `b` the denominator of `w`.
pub fn conjecture_check<C: Coeff>(stable: &Stable<C>, n: usize, w: Exp) -> Result<Report, VerifyError> {
    let start = Instant::now();
    let b = *w.denom() as usize;
    let t = stable.transition_matrix(n, SlopePoint::minus(w), SlopePoint::plus(w), true)?;
    let is_wall = !t.matrix().is_identity();
    let params = json!({"n": n, "b": b, "m": w.to_string(), "wall": is_wall});
    let a = bar_matrix::<C>(n, b)?;
    let witness = t
        .entries()
        .find(|(_, _, v)| v.numer().terms().chain(v.denom().terms()).any(|(m, _)| !m.t.is_zero()))
        .map(|(l, m, v)| format!("{l}|{m} depends on t: {v}"))
        .or_else(|| first_difference(&t, &a.matrix));
    Ok(Report::new("conjecture", params, start, witness))
}

/// [`conjecture_check`] at every candidate wall in `(0, 1)`.
pub fn conjecture_sweep<C: Coeff>(stable: &Stable<C>, n: usize) -> Result<Vec<Report>, VerifyError> {
    candidate_walls(n, Exp::zero(), Exp::one()).into_iter().map(|w| conjecture_check(stable, n, w)).collect()
}

/// The scalar `kappa_n` with `kappa_n · (row of the seed) = (1 - q2) s_lambda[X/(1 - q2)]`
/// for every `lambda`, the normalization of the golden tables.
pub fn character_normalization<C: Coeff>(stable: &Stable<C>, n: usize) -> Result<RatFunc<C>, VerifyError> {
    let sym = stable.symmetric();
    let seed = stable.seed(n)?;
    let q2 = RatFunc::<C>::q2();
    let one_minus_q2 = &RatFunc::one() - &q2;
    let mut kappa: Option<RatFunc<C>> = None;
    for (lambda, f) in seed.symmetric_functions(sym) {
        let s = SymFunc::basis_element(Basis::Schur, &lambda);
        let target = sym.plethysm(&s, |k| {
            (&RatFunc::one() - &RatFunc::mono(Monomial::from_q1q2(0.into(), Exp::from_integer(k as i64))))
                .inv()
                .expect("nonconstant")
        });
        let target = sym.convert(&target, Basis::Schur).scale(&one_minus_q2);
        for (mu, c) in f.coeffs() {
            let want = target.coeff(mu);
            if c.is_zero() {
                continue;
            }
            let k = &want / c;
            match &kappa {
                None => kappa = Some(k),
                Some(k0) if *k0 == k => {}
                Some(k0) => return Err(VerifyError::Normalization(format!("{k0} vs {k} at {lambda}, {mu}"))),
            }
        }
    }
    kappa.ok_or_else(|| VerifyError::Normalization("empty degree".into()))
}

/// Schur expansions of `s^slope_lambda` in the normalization of the golden
/// tables, where `s^0_lambda = (1 - q2) s_lambda[X/(1 - q2)]`.
pub fn schur_expansions<C: Coeff>(
    stable: &Stable<C>,
    n: usize,
    slope: SlopePoint,
) -> Result<Vec<(Partition, SymFunc<C>)>, VerifyError> {
    let kappa = character_normalization(stable, n)?;
    let table = stable.stable_basis(n, slope)?;
    Ok(table.symmetric_functions(stable.symmetric()).into_iter().map(|(l, f)| (l, f.scale(&kappa))).collect())
}

fn golden_scalar<C: Coeff>(v: &Value) -> Result<RatFunc<C>, VerifyError> {
    let s = v.as_str().ok_or_else(|| VerifyError::Golden(format!("expected a string, got {v}")))?;
    let x: RatFunc<C> = parse_ratfunc(s).map_err(|e| VerifyError::Golden(e.to_string()))?;
    Ok(x.change_coordinates(Coordinates::Q1Q2ToQT))
}

fn golden_partition(v: &Value) -> Result<Partition, VerifyError> {
    serde_json::from_value(v.clone()).map_err(|e| VerifyError::Golden(e.to_string()))
}

fn golden_terms<C: Coeff>(v: &Value) -> Result<BTreeMap<Partition, RatFunc<C>>, VerifyError> {
    let obj = v.as_object().ok_or_else(|| VerifyError::Golden("expected an object".into()))?;
    obj.iter()
        .map(|(k, s)| {
            let p: Partition = serde_json::from_str(k).map_err(|e| VerifyError::Golden(e.to_string()))?;
            Ok((p, golden_scalar(s)?))
        })
        .collect()
}

fn golden_matrix<C: Coeff>(v: &Value) -> Result<KeyedMatrix<C>, VerifyError> {
    let order: Vec<Partition> =
        serde_json::from_value(v["order"].clone()).map_err(|e| VerifyError::Golden(e.to_string()))?;
    let mut m = KeyedMatrix::from_matrix(order.clone(), Matrix::zeros(order.len(), order.len()));
    for (k, s) in v["entries"].as_object().ok_or_else(|| VerifyError::Golden("entries".into()))? {
        let (l, mu) = parse_pair_key(k).map_err(|e| VerifyError::Golden(e.to_string()))?;
        m.set(&l, &mu, golden_scalar(s)?);
    }
    Ok(m)
}

fn golden_slope(v: &Value) -> Result<SlopePoint, VerifyError> {
    SlopePoint::from_json(v).map_err(|e| VerifyError::Golden(e.to_string()))
}

fn compare_sym<C: Coeff>(got: &SymFunc<C>, want: &BTreeMap<Partition, RatFunc<C>>) -> Option<String> {
    let n = got.degree();
    enumerate_partitions(n).into_iter().find_map(|p| {
        let (g, w) = (got.coeff(&p), want.get(&p).cloned().unwrap_or_else(RatFunc::zero));
        (g != w).then(|| format!("coefficient of s{p}: got {g}, expected {w}"))
    })
}

/// Every golden matrix, factorization, Schur expansion and character
/// identity for two and three points, one report each.
pub fn appendix_check<C: Coeff>(stable: &Stable<C>) -> Result<Vec<Report>, VerifyError> {
    let golden: Value = serde_json::from_str(GOLDEN).map_err(|e| VerifyError::Golden(e.to_string()))?;
    let mut out = Vec::new();
    let mut expected: BTreeMap<String, KeyedMatrix<C>> = BTreeMap::new();
    for item in golden["matrices"].as_array().into_iter().flatten() {
        expected.insert(item["name"].as_str().unwrap_or_default().to_string(), golden_matrix(item)?);
    }
    for item in golden["matrices"].as_array().into_iter().flatten() {
        let start = Instant::now();
        let name = item["name"].as_str().unwrap_or_default();
        let n = item["n"].as_u64().ok_or_else(|| VerifyError::Golden("n".into()))? as usize;
        let m = &item["m"];
        let w = Exp::new(m[0].as_i64().unwrap_or(0), m[1].as_i64().unwrap_or(1));
        let want = &expected[name];
        let got = match item["kind"].as_str() {
            Some("wall") => stable.wall_matrix(n, w)?.matrix().clone(),
            _ => stable.transition_matrix(n, SlopePoint::plus(Exp::zero()), SlopePoint::plus(w), false)?,
        };
        let mut witness = first_difference(&got, want);
        if let (None, Some(factors)) = (&witness, item["factors"].as_array()) {
            let mut prod = Matrix::identity(want.order().len());
            for f in factors {
                let f = expected
                    .get(f.as_str().unwrap_or_default())
                    .ok_or_else(|| VerifyError::Golden(format!("unknown factor {f}")))?;
                prod = &prod * f.matrix();
            }
            let prod = KeyedMatrix::from_matrix(want.order().to_vec(), prod);
            witness = first_difference(&prod, want).map(|d| format!("factorization: {d}"));
        }
        out.push(Report::new("appendix", json!({"item": name}), start, witness));
    }
    for item in golden["expansions"].as_array().into_iter().flatten() {
        let start = Instant::now();
        let name = item["name"].as_str().unwrap_or_default();
        let n = item["n"].as_u64().unwrap_or(0) as usize;
        let slope = golden_slope(&item["slope"])?;
        let lambda = golden_partition(&item["lambda"])?;
        let want = golden_terms(&item["schur"])?;
        let got = schur_expansions(stable, n, slope)?;
        let f = &got.iter().find(|(l, _)| *l == lambda).ok_or_else(|| VerifyError::Golden(name.into()))?.1;
        out.push(Report::new("appendix", json!({"item": name}), start, compare_sym(f, &want)));
    }
    for item in golden["characters"].as_array().into_iter().flatten() {
        let start = Instant::now();
        let name = item["name"].as_str().unwrap_or_default();
        let n = item["n"].as_u64().unwrap_or(0) as usize;
        let want = golden_terms(&item["schur"])?;
        let mut witness = None;
        for comb in item["combinations"].as_array().into_iter().flatten() {
            let slope = golden_slope(&comb["slope"])?;
            let basis = schur_expansions(stable, n, slope)?;
            let mut total = SymFunc::zero(n, Basis::Schur);
            for (lambda, c) in golden_terms::<C>(&comb["terms"])? {
                let f = &basis.iter().find(|(l, _)| *l == lambda).ok_or_else(|| VerifyError::Golden(name.into()))?.1;
                total = total.add(&f.scale(&c)).map_err(|e| VerifyError::Golden(e.to_string()))?;
            }
            if let Some(d) = compare_sym(&total, &want) {
                witness = Some(format!("at {slope}: {d}"));
                break;
            }
        }
        out.push(Report::new("appendix", json!({"item": name}), start, witness));
    }
    Ok(out)
}

/// Expands the coefficients of every renormalized `s~^slope_lambda` in the
/// Schur basis as series in `q` and reports negative coefficients.
pub fn positivity_report<C: Coeff>(
    stable: &Stable<C>,
    n: usize,
    slope: SlopePoint,
    order: i64,
) -> Result<Report, VerifyError> {
    let start = Instant::now();
    let params = json!({"n": n, "slope": slope.to_string(), "order": order});
    for (lambda, f) in schur_expansions(stable, n, slope)? {
        let r = RatFunc::mono(renorm_factor(&lambda, slope.m)?.value);
        for (mu, c) in f.coeffs() {
            let s = match series_expand(&(&r * c), Exp::from_integer(order)) {
                Ok(s) => s,
                Err(e) => {
                    let mut rep = Report::new("positivity", params, start, Some(format!("{lambda}, s{mu}: {e}")));
                    rep.status = Status::Skipped;
                    return Ok(rep);
                }
            };
            let negative = s.terms().find(|(_, k)| k.is_negative()).map(|(m, k)| format!("{k}*{m}"));
            if let Some(term) = negative {
                let w = format!("s~{lambda}, coefficient of s{mu}: term {term}");
                return Ok(Report::new("positivity", params, start, Some(w)));
            }
        }
    }
    Ok(Report::new("positivity", params, start, None))
}

/// `ch_t M_m(lambda) = t^(-m c_lambda) (1 - t) s_lambda[X/(1 - t)]`, with the
/// grading variable in the `t` slot, in the Schur basis.
pub fn verma_character<C: Coeff>(stable: &Stable<C>, lambda: &Partition, m: Exp) -> SymFunc<C> {
    let sym = stable.symmetric();
    let t = |k: i64| Monomial::new(Exp::zero(), Exp::from_integer(k));
    let s = SymFunc::basis_element(Basis::Schur, lambda);
    let f = sym.plethysm(&s, |k| (&RatFunc::one() - &RatFunc::mono(t(k as i64))).inv().expect("nonconstant"));
    let shift = Monomial::new(Exp::zero(), -m * Exp::from_integer(lambda.content()));
    let c = (&RatFunc::one() - &RatFunc::mono(t(1))).mul_monomial(shift);
    sym.convert(&f, Basis::Schur).scale(&c)
}

/// The class of the finite-dimensional module at slope `m = a/b`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterClass<C: Coeff> {
    pub m: Exp,
    /// `sum over b-hooks lambda of (-q)^(-height) s~^(m+ε)_lambda`.
    pub raw: SymFunc<C>,
    /// `raw` divided by the coefficient of its dominance-smallest Schur
    /// function, when that coefficient is a monomial.
    pub normalized: Option<SymFunc<C>>,
}

pub fn cherednik_character<C: Coeff>(stable: &Stable<C>, m: Exp) -> Result<CharacterClass<C>, VerifyError> {
    let b = *m.denom() as usize;
    let basis = schur_expansions(stable, b, SlopePoint::plus(m))?;
    let mut raw = SymFunc::zero(b, Basis::Schur);
    for (lambda, f) in &basis {
        if lambda.len() + lambda.parts()[0] != b + 1 {
            continue;
        }
        let h = lambda.len() as i64 - 1;
        let sign = if h % 2 == 0 { 1 } else { -1 };
        let c = RatFunc::mono(Monomial::int(-h, 0)).scale(&C::from_big(crate::Rational::from_integer(sign.into())));
        let r = renorm_factor(lambda, m)?.value;
        raw = raw.add(&f.scale(&c.mul_monomial(r))).expect("same degree");
    }
    let lowest = enumerate_partitions(b).into_iter().rev().map(|p| raw.coeff(&p)).find(|c| !c.is_zero());
    let normalized = lowest.and_then(|c| {
        let (mono, k) = c.as_laurent()?.as_monomial()?;
        let inv = RatFunc::mono(mono.inv()).scale(&(C::one() / k.clone()));
        Some(raw.scale(&inv))
    });
    Ok(CharacterClass { m, raw, normalized })
}
