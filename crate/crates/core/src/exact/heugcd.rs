//! Heuristic gcd over `Z[q, t]` (Char, Geddes, Gonnet): evaluate `q` at a
//! large integer, take the univariate gcd the same way, and read the answer
//! back from its balanced `xi`-adic digits. A candidate is accepted only if it
//! divides both inputs, which makes the result exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub(crate) type IntUni = Vec<BigInt>;
pub(crate) type IntBi = Vec<IntUni>;

const ATTEMPTS: usize = 6;

fn trim(mut a: IntUni) -> IntUni {
    while a.last().map_or(false, |c| c.is_zero()) {
        a.pop();
    }
    a
}

fn max_abs(a: &[BigInt]) -> BigInt {
    a.iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
}

fn horner(a: &[BigInt], x: &BigInt) -> BigInt {
    a.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn balanced_digits(h: &BigInt, xi: &BigInt) -> IntUni {
    let half = xi / 2;
    let mut h = h.clone();
    let mut out = Vec::new();
    while !h.is_zero() {
        let mut c = h.mod_floor(xi);
        if c > half {
            c -= xi;
        }
        h = (h - &c) / xi;
        out.push(c);
    }
    out
}

fn first_xi(na: &BigInt, nb: &BigInt) -> BigInt {
    BigInt::from(2) * na.min(nb) + 29
}

fn grow(xi: &BigInt) -> BigInt {
    xi * 73794 / 27011
}

fn uni_primitive(a: IntUni) -> IntUni {
    let g = content(&a);
    if g.is_zero() {
        return a;
    }
    let neg = a.last().map_or(false, |c| c.is_negative());
    a.into_iter().map(|c| if neg { -(c / &g) } else { c / &g }).collect()
}

/// Exact division test over `Q`; by Gauss's lemma this agrees with `Z` for a
/// primitive divisor.
fn uni_divides(a: &[BigInt], d: &[BigInt]) -> bool {
    let mut r: Vec<BigRational> = a.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let ld = BigRational::from_integer(d[d.len() - 1].clone());
    while r.len() >= d.len() {
        let k = r.len() - d.len();
        let c = r[r.len() - 1].clone() / ld.clone();
        for (i, y) in d.iter().enumerate() {
            r[k + i] = r[k + i].clone() - c.clone() * BigRational::from_integer(y.clone());
        }
        r.pop();
        while r.last().map_or(false, |c| c.is_zero()) {
            r.pop();
        }
    }
    r.is_empty()
}

fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Full gcd in `Z[x]`, integer content included.
fn gcd_uni(a: &[BigInt], b: &[BigInt]) -> Option<IntUni> {
    let (ca, cb) = (content(a), content(b));
    let c = ca.gcd(&cb);
    if a.len() == 1 || b.len() == 1 {
        return Some(vec![c]);
    }
    let pa: IntUni = a.iter().map(|x| x / &ca).collect();
    let pb: IntUni = b.iter().map(|x| x / &cb).collect();
    let mut xi = first_xi(&max_abs(&pa), &max_abs(&pb));
    for _ in 0..ATTEMPTS {
        let h = horner(&pa, &xi).gcd(&horner(&pb, &xi));
        if !h.is_zero() {
            let g = uni_primitive(trim(balanced_digits(&h, &xi)));
            if !g.is_empty() && uni_divides(&pa, &g) && uni_divides(&pb, &g) {
                return Some(g.into_iter().map(|x| x * &c).collect());
            }
        }
        xi = grow(&xi);
    }
    None
}

fn bi_max_abs(a: &IntBi) -> BigInt {
    a.iter().map(|u| max_abs(u)).max().unwrap_or_else(BigInt::zero)
}

fn bi_primitive(a: IntBi) -> IntBi {
    let g = a.iter().flatten().fold(BigInt::zero(), |g, c| g.gcd(c));
    let neg = a.last().and_then(|u| u.last()).map_or(false, |c| c.is_negative());
    a.into_iter().map(|u| u.into_iter().map(|c| if neg { -(c / &g) } else { c / &g }).collect()).collect()
}

fn bi_divides(a: &IntBi, d: &IntBi) -> bool {
    let to_q = |p: &IntBi| -> Vec<Vec<BigRational>> {
        p.iter().map(|u| u.iter().map(|c| BigRational::from_integer(c.clone())).collect()).collect()
    };
    super::gcd::bi_div_exact(&to_q(a), &to_q(d)).is_some()
}

/// Gcd of two primitive polynomials given as `[t-power][q-power]` integer
/// coefficient arrays with no monomial content. `None` if the heuristic gave up.
pub(crate) fn gcd_bi(a: &IntBi, b: &IntBi) -> Option<IntBi> {
    if a.len() == 1 && b.len() == 1 {
        return gcd_uni(&a[0], &b[0]).map(|g| vec![g]);
    }
    let mut xi = first_xi(&bi_max_abs(a), &bi_max_abs(b));
    for _ in 0..ATTEMPTS {
        let ea: IntUni = trim(a.iter().map(|u| horner(u, &xi)).collect());
        let eb: IntUni = trim(b.iter().map(|u| horner(u, &xi)).collect());
        if !ea.is_empty() && !eb.is_empty() {
            if let Some(h) = gcd_uni(&ea, &eb) {
                let g: IntBi = h.iter().map(|c| trim(balanced_digits(c, &xi))).collect();
                let g = bi_primitive(g);
                if bi_divides(a, &g) && bi_divides(b, &g) {
                    return Some(g);
                }
            }
        }
        xi = grow(&xi);
    }
    None
}
