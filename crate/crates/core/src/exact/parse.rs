//! Reader for the canonical serialization written by `Display`.

use super::monomial::{Exp, Monomial};
use super::{Coeff, ExactError, Laurent, RatFunc};

fn err(s: &str) -> ExactError {
    ExactError::Parse(s.to_string())
}

fn parse_exp(s: &str) -> Result<Exp, ExactError> {
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.parse().map_err(|_| err(s))?;
            let b: i64 = b.parse().map_err(|_| err(s))?;
            if b == 0 {
                return Err(err(s));
            }
            Ok(Exp::new(a, b))
        }
        None => Ok(Exp::from_integer(s.parse().map_err(|_| err(s))?)),
    }
}

fn parse_term<C: Coeff>(s: &str) -> Result<(Monomial, C), ExactError> {
    let (c, rest) = s.split_once("*q^(").ok_or_else(|| err(s))?;
    let (qe, rest) = rest.split_once(")*t^(").ok_or_else(|| err(s))?;
    let te = rest.strip_suffix(')').ok_or_else(|| err(s))?;
    let c = C::from_str(c).map_err(|_| err(c))?;
    Ok((Monomial::new(parse_exp(qe)?, parse_exp(te)?), c))
}

pub fn parse_laurent<C: Coeff>(s: &str) -> Result<Laurent<C>, ExactError> {
    let s = s.trim();
    if s == "0" {
        return Ok(Laurent::zero());
    }
    let mut terms = Vec::new();
    let (mut neg, mut rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s),
    };
    loop {
        let plus = rest.find(" + ");
        let minus = rest.find(" - ");
        let cut = match (plus, minus) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let (head, next) = match cut {
            Some(i) => (&rest[..i], Some((&rest[i + 3..], &rest[i + 1..i + 2] == "-"))),
            None => (rest, None),
        };
        let (m, c): (Monomial, C) = parse_term(head)?;
        if c.is_negative() {
            return Err(err(head));
        }
        terms.push((m, if neg { -c } else { c }));
        match next {
            Some((r, n)) => {
                rest = r;
                neg = n;
            }
            None => break,
        }
    }
    let p = Laurent::from_terms(terms.iter().cloned());
    if p.len() != terms.len() {
        return Err(err(s));
    }
    Ok(p)
}

pub fn parse_ratfunc<C: Coeff>(s: &str) -> Result<RatFunc<C>, ExactError> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('(') {
        let (n, d) = inner.split_once(")/(").ok_or_else(|| err(s))?;
        let d = d.strip_suffix(')').ok_or_else(|| err(s))?;
        return RatFunc::new(parse_laurent(n)?, parse_laurent(d)?);
    }
    Ok(RatFunc::from_poly(parse_laurent(s)?))
}
