use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use super::laurent::{Laurent, Var};
use super::monomial::{Exp, Monomial};
use super::{Coeff, ExactError};

/// Element of the fraction field of [`Laurent`].
///
/// Canonical form: `gcd(num, den) = 1`, the denominator has minimal exponent
/// 0 in both `q` and `t`, and its leading term has coefficient 1. Equal values have identical representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc<C> {
    num: Laurent<C>,
    den: Laurent<C>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coordinates {
    /// Read the variables as `(q1, q2)` and rewrite in `(q, t)`.
    Q1Q2ToQT,
    /// Read the variables as `(q, t)` and rewrite in `(q1, q2)`.
    QTToQ1Q2,
}

impl<C: Coeff> RatFunc<C> {
    pub fn new(num: Laurent<C>, den: Laurent<C>) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    pub fn from_poly(p: Laurent<C>) -> Self {
        RatFunc { num: p, den: Laurent::one() }
    }

    pub fn from_coeff(c: C) -> Self {
        Self::from_poly(Laurent::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        let mut c = C::zero();
        let one = C::one();
        for _ in 0..n.unsigned_abs() {
            c = c + one.clone();
        }
        Self::from_coeff(if n < 0 { -c } else { c })
    }

    pub fn mono(m: Monomial) -> Self {
        Self::from_poly(Laurent::mono(m))
    }

    pub fn q() -> Self {
        Self::from_poly(Laurent::q())
    }

    pub fn t() -> Self {
        Self::from_poly(Laurent::t())
    }

    pub fn q1() -> Self {
        Self::from_poly(Laurent::q1())
    }

    pub fn q2() -> Self {
        Self::from_poly(Laurent::q2())
    }

    pub fn numer(&self) -> &Laurent<C> {
        &self.num
    }

    pub fn denom(&self) -> &Laurent<C> {
        &self.den
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_laurent(&self) -> Option<&Laurent<C>> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    fn normalize(mut num: Laurent<C>, mut den: Laurent<C>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some((m, c)) = den.as_monomial() {
            let ci = C::one() / c.clone();
            let num = num.mul_monomial(m.inv()).scale(&ci);
            return RatFunc { num, den: Laurent::one() };
        }
        if num.as_monomial().is_none() {
            let g = num.gcd(&den);
            if g.as_monomial().is_none() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        let shift = den.min_exponents().expect("nonzero denominator").inv();
        num = num.mul_monomial(shift);
        den = den.mul_monomial(shift);
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if !lc.is_one() {
            let inv = C::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ExactError> {
        if rhs.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: i32) -> Self {
        let base = if e < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_monomial(&self, m: Monomial) -> Self {
        RatFunc { num: self.num.mul_monomial(m), den: self.den.clone() }
    }

    /// Applies an injective monoid map on exponents to numerator and
    /// denominator (a ring automorphism of the Puiseux-Laurent ring).
    pub fn map_exponents<F: Fn(Monomial) -> Monomial + Copy>(&self, f: F) -> Self {
        Self::normalize(self.num.map_exponents(f), self.den.map_exponents(f))
    }

    pub fn change_coordinates(&self, dir: Coordinates) -> Self {
        match dir {
            Coordinates::Q1Q2ToQT => self.map_exponents(|m| Monomial::from_q1q2(m.q, m.t)),
            Coordinates::QTToQ1Q2 => self.map_exponents(|m| {
                let (a, b) = m.to_q1q2();
                Monomial::new(a, b)
            }),
        }
    }

    pub fn bar_substitute(&self, var: Var) -> Self {
        Self::normalize(self.num.bar_substitute(var), self.den.bar_substitute(var))
    }

    /// `q -> 1/q, t -> 1/t`, equivalently `q1 -> 1/q1, q2 -> 1/q2`.
    pub fn invert_all(&self) -> Self {
        Self::normalize(self.num.invert_all(), self.den.invert_all())
    }

    /// Substitutes `q -> q^k, t -> t^k` (the Adams operation on scalars).
    pub fn adams(&self, k: i64) -> Self {
        let e = Exp::from_integer(k);
        self.map_exponents(move |m| m.pow(e))
    }
}

impl<C: Coeff> Zero for RatFunc<C> {
    fn zero() -> Self {
        RatFunc { num: Laurent::zero(), den: Laurent::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<C: Coeff> One for RatFunc<C> {
    fn one() -> Self {
        RatFunc { num: Laurent::one(), den: Laurent::one() }
    }
}

impl<C: Coeff> Default for RatFunc<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> From<Laurent<C>> for RatFunc<C> {
    fn from(p: Laurent<C>) -> Self {
        Self::from_poly(p)
    }
}

impl<'a, C: Coeff> Add<&'a RatFunc<C>> for &'a RatFunc<C> {
    type Output = RatFunc<C>;
    fn add(self, rhs: &RatFunc<C>) -> RatFunc<C> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return RatFunc::from_poly(&self.num + &rhs.num);
            }
            return RatFunc::normalize(&self.num + &rhs.num, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        let (a, b) = if g.as_monomial().is_some() {
            (rhs.den.clone(), self.den.clone())
        } else {
            (rhs.den.div_exact(&g).expect("gcd"), self.den.div_exact(&g).expect("gcd"))
        };
        let num = &(&self.num * &a) + &(&rhs.num * &b);
        RatFunc::normalize(num, &self.den * &a)
    }
}

impl<'a, C: Coeff> Neg for &'a RatFunc<C> {
    type Output = RatFunc<C>;
    fn neg(self) -> RatFunc<C> {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl<'a, C: Coeff> Sub<&'a RatFunc<C>> for &'a RatFunc<C> {
    type Output = RatFunc<C>;
    fn sub(self, rhs: &RatFunc<C>) -> RatFunc<C> {
        self + &(-rhs)
    }
}

impl<'a, C: Coeff> Mul<&'a RatFunc<C>> for &'a RatFunc<C> {
    type Output = RatFunc<C>;
    fn mul(self, rhs: &RatFunc<C>) -> RatFunc<C> {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        let cross = |n: &Laurent<C>, d: &Laurent<C>| -> (Laurent<C>, Laurent<C>) {
            if d.is_one() || n.as_monomial().is_some() {
                return (n.clone(), d.clone());
            }
            let g = n.gcd(d);
            if g.as_monomial().is_some() {
                (n.clone(), d.clone())
            } else {
                (n.div_exact(&g).expect("gcd"), d.div_exact(&g).expect("gcd"))
            }
        };
        let (a, d) = cross(&self.num, &rhs.den);
        let (c, b) = cross(&rhs.num, &self.den);
        let num = &a * &c;
        let den = &b * &d;
        // Already coprime; only the unit normalization is left.
        let shift = den.min_exponents().expect("nonzero").inv();
        let (num, den) = (num.mul_monomial(shift), den.mul_monomial(shift));
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero");
        if lc.is_one() {
            if let Some((m, c)) = den.as_monomial() {
                return RatFunc { num: num.mul_monomial(m.inv()).scale(&(C::one() / c.clone())), den: Laurent::one() };
            }
            RatFunc { num, den }
        } else {
            let inv = C::one() / lc;
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }
}

/// Panics on division by zero; use [`RatFunc::checked_div`] for a `Result`.
impl<'a, C: Coeff> Div<&'a RatFunc<C>> for &'a RatFunc<C> {
    type Output = RatFunc<C>;
    fn div(self, rhs: &RatFunc<C>) -> RatFunc<C> {
        self.checked_div(rhs).expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl<C: Coeff> $tr<RatFunc<C>> for RatFunc<C> {
            type Output = RatFunc<C>;
            fn $f(self, rhs: RatFunc<C>) -> RatFunc<C> {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<C: Coeff> Neg for RatFunc<C> {
    type Output = RatFunc<C>;
    fn neg(self) -> RatFunc<C> {
        -&self
    }
}

impl<'a, C: Coeff> AddAssign<&'a RatFunc<C>> for RatFunc<C> {
    fn add_assign(&mut self, rhs: &RatFunc<C>) {
        *self = &*self + rhs;
    }
}

impl<'a, C: Coeff> SubAssign<&'a RatFunc<C>> for RatFunc<C> {
    fn sub_assign(&mut self, rhs: &RatFunc<C>) {
        *self = &*self - rhs;
    }
}

impl<'a, C: Coeff> MulAssign<&'a RatFunc<C>> for RatFunc<C> {
    fn mul_assign(&mut self, rhs: &RatFunc<C>) {
        *self = &*self * rhs;
    }
}

impl<C: Coeff> fmt::Display for RatFunc<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
