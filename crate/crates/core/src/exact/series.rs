use super::monomial::{Exp, Monomial};
use super::{Coeff, ExactError, Laurent, RatFunc};

fn truncate<C: Coeff>(p: &Laurent<C>, order: Exp) -> Laurent<C> {
    Laurent::from_terms(p.terms().filter(|(m, _)| m.q <= order).map(|(m, c)| (*m, c.clone())))
}

/// Power series expansion in `q` (with `t` a bystander), keeping every
/// monomial of `q`-degree at most `order`.
///
/// The lowest `q`-degree part of the denominator must be a single term.
pub fn series_expand<C: Coeff>(x: &RatFunc<C>, order: Exp) -> Result<Laurent<C>, ExactError> {
    if x.is_laurent() {
        return Ok(truncate(x.numer(), order));
    }
    let den = x.denom();
    let (qmin, _) = den.q_degree_range()?;
    let low: Vec<(Monomial, C)> = den.terms().filter(|(m, _)| m.q == qmin).map(|(m, c)| (*m, c.clone())).collect();
    if low.len() != 1 {
        return Err(ExactError::NotExpandable(Laurent::from_terms(low).to_string()));
    }
    let (m0, c0) = low[0].clone();
    let c0inv = C::one() / c0;
    let u = den.mul_monomial(m0.inv()).scale(&c0inv);
    let minus_s = &Laurent::one() - &u;
    let n = x.numer().mul_monomial(m0.inv()).scale(&c0inv);
    if n.is_zero() {
        return Ok(n);
    }
    let (nmin, _) = n.q_degree_range()?;
    let (delta, _) = minus_s.q_degree_range()?;
    let budget = order - nmin;
    let mut out = Laurent::zero();
    let mut power = Laurent::one();
    let mut k = 0i64;
    while Exp::from_integer(k) * delta <= budget {
        out += &truncate(&(&n * &power), order);
        power = truncate(&(&power * &minus_s), budget);
        if power.is_zero() {
            break;
        }
        k += 1;
    }
    Ok(out)
}
