use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use super::gcd;
use super::monomial::{Exp, Monomial};
use super::{Coeff, ExactError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    Q,
    T,
}

/// Sparse Laurent polynomial in `q, t` with rational exponents. Zero
/// coefficients are never stored; terms print in decreasing lexicographic
/// order of `(q, t)` exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Laurent<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Laurent<C> {
    pub fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Laurent { terms }
    }

    pub fn mono(m: Monomial) -> Self {
        Self::term(m, C::one())
    }

    pub fn q() -> Self {
        Self::mono(Monomial::int(1, 0))
    }

    pub fn t() -> Self {
        Self::mono(Monomial::int(0, 1))
    }

    pub fn q1() -> Self {
        Self::mono(Monomial::int(1, 1))
    }

    pub fn q2() -> Self {
        Self::mono(Monomial::int(1, -1))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_monomial().map_or(false, |(m, c)| m.is_one() && c.is_one())
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// The single term, if there is exactly one.
    pub fn as_monomial(&self) -> Option<(Monomial, &C)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (*m, c))
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<C> {
        if self.is_zero() {
            return Some(C::zero());
        }
        match self.as_monomial() {
            Some((m, c)) if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// Lexicographically largest term, printed first.
    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Laurent { terms: self.terms.iter().map(|(m, v)| (*m, v.clone() * c.clone())).collect() }
    }

    pub fn mul_monomial(&self, m: Monomial) -> Self {
        Laurent { terms: self.terms.iter().map(|(k, v)| (*k * m, v.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Applies `f` to every exponent pair. `f` must be injective.
    pub fn map_exponents<F: Fn(Monomial) -> Monomial>(&self, f: F) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (f(*m), c.clone())))
    }

    pub fn bar_substitute(&self, var: Var) -> Self {
        self.map_exponents(|m| match var {
            Var::Q => Monomial::new(-m.q, m.t),
            Var::T => Monomial::new(m.q, -m.t),
        })
    }

    /// `q -> 1/q, t -> 1/t`.
    pub fn invert_all(&self) -> Self {
        self.map_exponents(|m| m.inv())
    }

    fn degree_range(&self, var: Var) -> Result<(Exp, Exp), ExactError> {
        let mut it = self.terms.keys().map(|m| match var {
            Var::Q => m.q,
            Var::T => m.t,
        });
        let first = it.next().ok_or(ExactError::ZeroPolynomial)?;
        Ok(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    pub fn t_degree_range(&self) -> Result<(Exp, Exp), ExactError> {
        self.degree_range(Var::T)
    }

    pub fn q_degree_range(&self) -> Result<(Exp, Exp), ExactError> {
        self.degree_range(Var::Q)
    }

    /// Coefficients of the powers of `t`, each a polynomial in `q` alone.
    pub fn t_coefficients(&self) -> BTreeMap<Exp, Laurent<C>> {
        let mut out: BTreeMap<Exp, Laurent<C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.t).or_insert_with(Self::zero).add_term(Monomial::new(m.q, Exp::zero()), c.clone());
        }
        out
    }

    pub fn has_integral_exponents(&self) -> bool {
        self.terms.keys().all(|m| m.is_integral())
    }

    pub fn min_exponents(&self) -> Option<Monomial> {
        let q = self.terms.keys().map(|m| m.q).min()?;
        let t = self.terms.keys().map(|m| m.t).min()?;
        Some(Monomial::new(q, t))
    }

    /// Evaluates a polynomial in `q` alone (integral exponents) at `x`.
    pub fn eval_q(&self, x: &C) -> Result<C, ExactError> {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            if !m.q.is_integer() || !m.t.is_zero() {
                return Err(ExactError::NonIntegralExponent(m.to_string()));
            }
            let e = *m.q.numer();
            if e < 0 && x.is_zero() {
                return Err(ExactError::DivisionByZero);
            }
            let base = if e < 0 { C::one() / x.clone() } else { x.clone() };
            let mut p = C::one();
            for _ in 0..e.unsigned_abs() {
                p = p * base.clone();
            }
            acc = acc + c.clone() * p;
        }
        Ok(acc)
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if let Some((m, c)) = d.as_monomial() {
            let ci = C::one() / c.clone();
            return Some(self.mul_monomial(m.inv()).scale(&ci));
        }
        gcd::div_exact(self, d)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        gcd::gcd(self, other)
    }
}

impl<C: Coeff> Zero for Laurent<C> {
    fn zero() -> Self {
        Laurent::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coeff> One for Laurent<C> {
    fn one() -> Self {
        Laurent::one()
    }
}

impl<C: Coeff> Default for Laurent<C> {
    fn default() -> Self {
        Laurent::zero()
    }
}

impl<'a, C: Coeff> Add<&'a Laurent<C>> for &'a Laurent<C> {
    type Output = Laurent<C>;
    fn add(self, rhs: &Laurent<C>) -> Laurent<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a, C: Coeff> AddAssign<&'a Laurent<C>> for Laurent<C> {
    fn add_assign(&mut self, rhs: &Laurent<C>) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl<'a, C: Coeff> SubAssign<&'a Laurent<C>> for Laurent<C> {
    fn sub_assign(&mut self, rhs: &Laurent<C>) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl<'a, C: Coeff> Sub<&'a Laurent<C>> for &'a Laurent<C> {
    type Output = Laurent<C>;
    fn sub(self, rhs: &Laurent<C>) -> Laurent<C> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a, C: Coeff> Mul<&'a Laurent<C>> for &'a Laurent<C> {
    type Output = Laurent<C>;
    fn mul(self, rhs: &Laurent<C>) -> Laurent<C> {
        let mut out = Laurent::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(*ma * *mb, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<'a, C: Coeff> Neg for &'a Laurent<C> {
    type Output = Laurent<C>;
    fn neg(self) -> Laurent<C> {
        Laurent { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl<C: Coeff> $tr<Laurent<C>> for Laurent<C> {
            type Output = Laurent<C>;
            fn $f(self, rhs: Laurent<C>) -> Laurent<C> {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coeff> Neg for Laurent<C> {
    type Output = Laurent<C>;
    fn neg(self) -> Laurent<C> {
        -&self
    }
}

impl<C: Coeff> fmt::Display for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{}*{}", c.abs(), m)?;
        }
        Ok(())
    }
}
