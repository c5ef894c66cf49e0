//! Numbers and rational functions extended by the square root of a prime.
//!
//! Half-integral powers of `p` appear in intermediate steps of several
//! closed forms. [`Surd`] is `a + b*sqrt(p)` over the rationals and
//! [`SurdFn`] is `f + g*sqrt(p)` over rational functions; both form fields
//! since `sqrt(p)` is irrational.

use crate::error::{Error, Result};
use crate::exact::{pow_p, ri, Rat};
use crate::laurent::LaurentRat;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `a + b*sqrt(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub p: u64,
    pub a: Rat,
    pub b: Rat,
}

impl Surd {
    pub fn new(p: u64, a: Rat, b: Rat) -> Self {
        Surd { p, a, b }
    }

    pub fn rational(p: u64, a: Rat) -> Self {
        Surd::new(p, a, Rat::zero())
    }

    /// `p^(e/2)` for any integer `e`.
    pub fn sqrt_pow(p: u64, e: i64) -> Self {
        let half = e.div_euclid(2);
        if e.rem_euclid(2) == 0 {
            Surd::rational(p, pow_p(p, half))
        } else {
            Surd::new(p, Rat::zero(), pow_p(p, half))
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The rational value, or an error naming the irrational part.
    pub fn to_rat(&self) -> Result<Rat> {
        if self.is_rational() {
            Ok(self.a.clone())
        } else {
            Err(Error::Inconsistent(format!(
                "value has a nonzero sqrt({}) component {}",
                self.p, self.b
            )))
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let n = &self.a * &self.a - &self.b * &self.b * ri(self.p as i64);
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Surd::new(self.p, &self.a / &n, -&self.b / &n))
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, o: &Surd) -> Surd {
        debug_assert_eq!(self.p, o.p);
        Surd::new(self.p, &self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, o: &Surd) -> Surd {
        Surd::new(self.p, &self.a - &o.a, &self.b - &o.b)
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, o: &Surd) -> Surd {
        debug_assert_eq!(self.p, o.p);
        let p = ri(self.p as i64);
        Surd::new(
            self.p,
            &self.a * &o.a + &self.b * &o.b * p,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(self.p, -&self.a, -&self.b)
    }
}

/// `f + g*sqrt(p)` with rational functions `f`, `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdFn {
    pub p: u64,
    pub f: LaurentRat,
    pub g: LaurentRat,
}

impl SurdFn {
    pub fn new(p: u64, f: LaurentRat, g: LaurentRat) -> Self {
        SurdFn { p, f, g }
    }

    pub fn rational(p: u64, f: LaurentRat) -> Self {
        SurdFn::new(p, f, LaurentRat::zero())
    }

    pub fn one(p: u64) -> Self {
        SurdFn::rational(p, LaurentRat::one())
    }

    /// Constant `c` times the rational function `f`.
    pub fn from_surd(c: &Surd, f: &LaurentRat) -> Self {
        SurdFn::new(c.p, f.scale(&c.a), f.scale(&c.b))
    }

    /// `p^(e/2)` as a constant function.
    pub fn sqrt_pow(p: u64, e: i64) -> Self {
        SurdFn::from_surd(&Surd::sqrt_pow(p, e), &LaurentRat::one())
    }

    pub fn is_rational(&self) -> bool {
        self.g.is_zero()
    }

    /// The rational-function value, failing if a `sqrt(p)` part remains.
    pub fn to_rational(&self) -> Result<LaurentRat> {
        if self.is_rational() {
            Ok(self.f.clone())
        } else {
            Err(Error::Inconsistent(format!(
                "function has a nonzero sqrt({}) component {}",
                self.p, self.g
            )))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.g.is_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        let n = &(&self.f * &self.f) - &(&self.g * &self.g).scale(&ri(self.p as i64));
        let ni = n.inv()?;
        Ok(SurdFn::new(self.p, &self.f * &ni, -&(&self.g * &ni)))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = SurdFn::one(self.p);
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Applies the same substitution to both components.
    pub fn map(&self, h: impl Fn(&LaurentRat) -> LaurentRat) -> Self {
        SurdFn::new(self.p, h(&self.f), h(&self.g))
    }

    /// Value at `X = x`.
    pub fn eval(&self, x: &Rat) -> Result<Surd> {
        Ok(Surd::new(self.p, self.f.eval(x)?, self.g.eval(x)?))
    }

    pub fn div(&self, o: &SurdFn) -> Result<Self> {
        Ok(self * &o.inv()?)
    }

    /// Derivative in the variable.
    pub fn deriv(&self) -> Self {
        self.map(|h| h.deriv_x())
    }

    /// `h(p^(-1/2) / Y)`: the reflection `s -> 1 - s` in the variable
    /// `Y = p^(-s/2)`.
    pub fn reflect_half(&self) -> Result<Self> {
        let c = pow_p(self.p, -1);
        let half = Rat::new(1.into(), 2.into());
        // h(Y) = A(Y^2) + Y B(Y^2), returns A(c/Y^2) and B(c/Y^2)
        let split = |h: &LaurentRat| -> Result<(LaurentRat, LaurentRat)> {
            let neg = h.subst_scale(&-Rat::one());
            let even = (h + &neg).scale(&half);
            let odd = (h - &neg).scale(&half).mul_xpow(-1);
            let back = |a: LaurentRat| a.subst_recip(&c).subst_power(2);
            Ok((back(even.unsquare()?), back(odd.unsquare()?)))
        };
        let (af, bf) = split(&self.f)?;
        let (ag, bg) = split(&self.g)?;
        // sqrt(p) c / Y = 1/(sqrt(p) Y)
        let f = &af + &bg.mul_xpow(-1);
        let g = &ag + &bf.mul_xpow(-1).scale(&c);
        Ok(SurdFn::new(self.p, f, g))
    }

    /// Value and logarithmic derivative `T h'(T)/h(T)` at `T = 1`; the
    /// latter must be rational.
    pub fn value_and_dlog_at_one(&self) -> Result<(Surd, Rat)> {
        let one = Rat::one();
        let v = self.eval(&one)?;
        let d = self.deriv().eval(&one)?;
        let r = (&d * &v.inv()?).to_rat()?;
        Ok((v, r))
    }
}

impl Add for &SurdFn {
    type Output = SurdFn;
    fn add(self, o: &SurdFn) -> SurdFn {
        debug_assert_eq!(self.p, o.p);
        SurdFn::new(self.p, &self.f + &o.f, &self.g + &o.g)
    }
}

impl Sub for &SurdFn {
    type Output = SurdFn;
    fn sub(self, o: &SurdFn) -> SurdFn {
        SurdFn::new(self.p, &self.f - &o.f, &self.g - &o.g)
    }
}

impl Mul for &SurdFn {
    type Output = SurdFn;
    fn mul(self, o: &SurdFn) -> SurdFn {
        debug_assert_eq!(self.p, o.p);
        let p = ri(self.p as i64);
        SurdFn::new(
            self.p,
            &(&self.f * &o.f) + &(&self.g * &o.g).scale(&p),
            &(&self.f * &o.g) + &(&self.g * &o.f),
        )
    }
}

impl Neg for &SurdFn {
    type Output = SurdFn;
    fn neg(self) -> SurdFn {
        SurdFn::new(self.p, -&self.f, -&self.g)
    }
}

impl fmt::Display for SurdFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.g.is_zero() {
            write!(f, "{}", self.f)
        } else if self.f.is_zero() {
            write!(f, "sqrt({})*({})", self.p, self.g)
        } else {
            write!(f, "{} + sqrt({})*({})", self.f, self.p, self.g)
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.p)
        }
    }
}

impl Surd {
    pub fn one(p: u64) -> Self {
        Surd::rational(p, Rat::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn sqrt_powers_multiply() {
        let a = Surd::sqrt_pow(3, 1);
        let b = Surd::sqrt_pow(3, -3);
        assert_eq!((&a * &b).to_rat().unwrap(), rat(1, 3));
        let c = &Surd::new(5, ri(1), ri(1)) * &Surd::new(5, ri(1), ri(1)).inv().unwrap();
        assert_eq!(c, Surd::one(5));
    }

    #[test]
    fn function_inverse() {
        let f = SurdFn::new(3, LaurentRat::from_ints(&[1, -1]), LaurentRat::x());
        let g = &f * &f.inv().unwrap();
        assert_eq!(g, SurdFn::one(3));
    }
}
