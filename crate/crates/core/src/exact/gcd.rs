//! Bivariate gcd and exact division. Laurent inputs are mapped to ordinary
//! polynomials in `Q = q^(1/dq)`, `T = t^(1/dt)` and handled as polynomials in
//! `T` over `K[Q]`. The heuristic integer gcd is tried first; a primitive
//! pseudo-remainder sequence is the fallback.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::heugcd::{self, IntBi};
use super::monomial::{Exp, Monomial};
use super::{Coeff, Laurent};

type Uni<C> = Vec<C>;
type Bi<C> = Vec<Uni<C>>;

fn u_trim<C: Coeff>(mut a: Uni<C>) -> Uni<C> {
    while a.last().map_or(false, |c| c.is_zero()) {
        a.pop();
    }
    a
}

fn u_scale<C: Coeff>(a: &[C], c: &C) -> Uni<C> {
    u_trim(a.iter().map(|x| x.clone() * c.clone()).collect())
}

fn u_mul<C: Coeff>(a: &[C], b: &[C]) -> Uni<C> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    u_trim(out)
}

fn u_sub<C: Coeff>(a: &[C], b: &[C]) -> Uni<C> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(C::zero);
            let y = b.get(i).cloned().unwrap_or_else(C::zero);
            x - y
        })
        .collect();
    u_trim(out)
}

fn u_divrem<C: Coeff>(a: &[C], b: &[C]) -> (Uni<C>, Uni<C>) {
    let mut r: Uni<C> = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut quo = vec![C::zero(); r.len() - db];
    while r.len() >= b.len() {
        let k = r.len() - 1 - db;
        let c = r[r.len() - 1].clone() / lb.clone();
        for (i, y) in b.iter().enumerate() {
            r[k + i] = r[k + i].clone() - c.clone() * y.clone();
        }
        quo[k] = c;
        r.pop();
        r = u_trim(r);
    }
    (u_trim(quo), r)
}

fn u_monic<C: Coeff>(a: Uni<C>) -> Uni<C> {
    match a.last() {
        Some(l) if !l.is_one() => {
            let inv = C::one() / l.clone();
            u_scale(&a, &inv)
        }
        _ => a,
    }
}

fn u_gcd<C: Coeff>(a: &[C], b: &[C]) -> Uni<C> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        if y.len() == 1 {
            return vec![C::one()];
        }
        let (_, r) = u_divrem(&x, &y);
        x = y;
        y = r;
    }
    u_monic(x)
}

fn u_div_exact<C: Coeff>(a: &[C], b: &[C]) -> Option<Uni<C>> {
    let (q, r) = u_divrem(a, b);
    if r.is_empty() {
        Some(q)
    } else {
        None
    }
}

fn b_trim<C: Coeff>(mut a: Bi<C>) -> Bi<C> {
    while a.last().map_or(false, |c| c.is_empty()) {
        a.pop();
    }
    a
}

fn b_content<C: Coeff>(a: &Bi<C>) -> Uni<C> {
    let mut g: Uni<C> = Vec::new();
    for c in a.iter().filter(|c| !c.is_empty()) {
        g = if g.is_empty() { u_monic(c.clone()) } else { u_gcd(&g, c) };
        if g.len() == 1 {
            break;
        }
    }
    g
}

/// Divides out the content and makes the leading scalar 1.
fn b_primitive<C: Coeff>(a: Bi<C>) -> Bi<C> {
    let cont = b_content(&a);
    let mut out: Bi<C> = if cont.len() > 1 {
        a.iter()
            .map(|c| if c.is_empty() { Vec::new() } else { u_div_exact(c, &cont).expect("content divides") })
            .collect()
    } else {
        a
    };
    if let Some(lc) = out.last().and_then(|c| c.last()).cloned() {
        if !lc.is_one() {
            let inv = C::one() / lc;
            out = out.iter().map(|c| u_scale(c, &inv)).collect();
        }
    }
    out
}

fn b_prem<C: Coeff>(a: &Bi<C>, b: &Bi<C>) -> Bi<C> {
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r = a.clone();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let lr = r[r.len() - 1].clone();
        let mut next: Bi<C> = r.iter().map(|c| u_mul(c, &lb)).collect();
        for (i, y) in b.iter().enumerate() {
            let s = u_mul(&lr, y);
            next[k + i] = u_sub(&next[k + i], &s);
        }
        r = b_trim(next);
    }
    r
}

fn b_gcd<C: Coeff>(a: &Bi<C>, b: &Bi<C>) -> Bi<C> {
    let ca = b_content(a);
    let cb = b_content(b);
    let c = u_gcd(&ca, &cb);
    let mut x = b_primitive(a.clone());
    let mut y = b_primitive(b.clone());
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        if y.len() == 1 {
            x = vec![vec![C::one()]];
            break;
        }
        let r = b_prem(&x, &y);
        x = y;
        y = if r.is_empty() { r } else { b_primitive(r) };
    }
    b_trim(x.iter().map(|u| u_mul(u, &c)).collect())
}

pub(crate) fn bi_div_exact<C: Coeff>(a: &Bi<C>, d: &Bi<C>) -> Option<Bi<C>> {
    let dd = d.len() - 1;
    let ld = &d[dd];
    let mut r = a.clone();
    if r.len() < d.len() {
        return if r.is_empty() { Some(Vec::new()) } else { None };
    }
    let mut quo: Bi<C> = vec![Vec::new(); r.len() - dd];
    while !r.is_empty() && r.len() > dd {
        let k = r.len() - 1 - dd;
        let c = u_div_exact(&r[r.len() - 1], ld)?;
        for (i, y) in d.iter().enumerate() {
            let s = u_mul(&c, y);
            r[k + i] = u_sub(&r[k + i], &s);
        }
        quo[k] = c;
        r = b_trim(r);
    }
    if r.is_empty() {
        Some(b_trim(quo))
    } else {
        None
    }
}

fn denominators<C: Coeff>(ps: &[&Laurent<C>]) -> (i64, i64) {
    let mut dq = 1i64;
    let mut dt = 1i64;
    for p in ps {
        for (m, _) in p.terms() {
            dq = dq.lcm(m.q.denom());
            dt = dt.lcm(m.t.denom());
        }
    }
    (dq, dt)
}

fn to_dense<C: Coeff>(p: &Laurent<C>, dq: i64, dt: i64) -> (Bi<C>, Monomial) {
    let lo = p.min_exponents().unwrap_or_default();
    let mut out: Bi<C> = Vec::new();
    for (m, c) in p.terms() {
        let i = ((m.q - lo.q) * dq).to_integer() as usize;
        let j = ((m.t - lo.t) * dt).to_integer() as usize;
        if out.len() <= j {
            out.resize(j + 1, Vec::new());
        }
        if out[j].len() <= i {
            out[j].resize(i + 1, C::zero());
        }
        out[j][i] = c.clone();
    }
    (out, lo)
}

fn from_dense<C: Coeff>(b: &Bi<C>, dq: i64, dt: i64, shift: Monomial) -> Laurent<C> {
    let mut terms = Vec::new();
    for (j, u) in b.iter().enumerate() {
        for (i, c) in u.iter().enumerate() {
            if !c.is_zero() {
                let m = Monomial::new(Exp::new(i as i64, dq), Exp::new(j as i64, dt)) * shift;
                terms.push((m, c.clone()));
            }
        }
    }
    Laurent::from_terms(terms)
}

/// Clears denominators and divides out the integer content.
fn to_int<C: Coeff>(a: &Bi<C>) -> IntBi {
    let big: Vec<Vec<BigRational>> = a.iter().map(|u| u.iter().map(|c| c.to_big()).collect()).collect();
    let l = big.iter().flatten().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: IntBi = big.iter().map(|u| u.iter().map(|c| (c * &l).to_integer()).collect()).collect();
    let g = ints.iter().flatten().fold(BigInt::zero(), |g, c| g.gcd(c));
    ints.into_iter().map(|u| u.into_iter().map(|c| c / &g).collect()).collect()
}

/// A gcd, defined up to a unit (nonzero scalar times monomial).
pub(crate) fn gcd<C: Coeff>(a: &Laurent<C>, b: &Laurent<C>) -> Laurent<C> {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() || a.as_monomial().is_some() || b.as_monomial().is_some() {
        return if b.is_zero() { a.clone() } else { Laurent::one() };
    }
    let (dq, dt) = denominators(&[a, b]);
    let (x, _) = to_dense(a, dq, dt);
    let (y, _) = to_dense(b, dq, dt);
    if let Some(g) = heugcd::gcd_bi(&to_int(&x), &to_int(&y)) {
        let g: Bi<C> =
            g.into_iter().map(|u| u.into_iter().map(|c| C::from_big(BigRational::from_integer(c))).collect()).collect();
        return from_dense(&g, dq, dt, Monomial::one());
    }
    from_dense(&b_gcd(&x, &y), dq, dt, Monomial::one())
}

pub(crate) fn div_exact<C: Coeff>(a: &Laurent<C>, d: &Laurent<C>) -> Option<Laurent<C>> {
    if a.is_zero() {
        return Some(Laurent::zero());
    }
    let (dq, dt) = denominators(&[a, d]);
    let (x, lx) = to_dense(a, dq, dt);
    let (y, ly) = to_dense(d, dq, dt);
    let quo = bi_div_exact(&x, &y)?;
    Some(from_dense(&quo, dq, dt, lx * ly.inv()))
}
