use std::fmt;
use std::ops::Mul;

use num_traits::Zero;

/// Exponents are rationals so that half-integer powers of `q` and `t` are exact.
pub type Exp = num_rational::Rational64;

/// `q^q * t^t`. Ordered lexicographically on `(q, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub q: Exp,
    pub t: Exp,
}

impl Monomial {
    pub fn new(q: Exp, t: Exp) -> Self {
        Monomial { q, t }
    }

    pub fn int(q: i64, t: i64) -> Self {
        Monomial::new(Exp::from_integer(q), Exp::from_integer(t))
    }

    pub fn one() -> Self {
        Monomial::int(0, 0)
    }

    pub fn is_one(&self) -> bool {
        self.q.is_zero() && self.t.is_zero()
    }

    /// `q1^a * q2^b = q^(a+b) * t^(a-b)`.
    pub fn from_q1q2(a: Exp, b: Exp) -> Self {
        Monomial::new(a + b, a - b)
    }

    /// Inverse of [`Monomial::from_q1q2`].
    pub fn to_q1q2(&self) -> (Exp, Exp) {
        let two = Exp::from_integer(2);
        ((self.q + self.t) / two, (self.q - self.t) / two)
    }

    pub fn inv(&self) -> Self {
        Monomial::new(-self.q, -self.t)
    }

    pub fn pow(&self, e: Exp) -> Self {
        Monomial::new(self.q * e, self.t * e)
    }

    pub fn is_integral(&self) -> bool {
        self.q.is_integer() && self.t.is_integer()
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial::new(self.q + rhs.q, self.t + rhs.t)
    }
}

impl Default for Monomial {
    fn default() -> Self {
        Monomial::one()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^({})*t^({})", self.q, self.t)
    }
}
