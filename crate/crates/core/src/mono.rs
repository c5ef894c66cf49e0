//! Exact monomials `c * pi^(h/2) * prod sqrt(p)^e` used for global values.

use crate::error::{Error, Result};
use crate::exact::{pow_p, Rat};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

/// `coef * pi^(pi_half/2) * prod_p p^(e_p/2)` with every `e_p` in `{0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mono {
    pub coef: Rat,
    pub pi_half: i64,
    pub sqrt: BTreeMap<u64, i64>,
}

impl Mono {
    pub fn rational(c: Rat) -> Self {
        Mono {
            coef: c,
            pi_half: 0,
            sqrt: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Mono::rational(Rat::one())
    }

    /// `pi^(h/2)`.
    pub fn pi_pow_half(h: i64) -> Self {
        Mono {
            coef: Rat::one(),
            pi_half: h,
            sqrt: BTreeMap::new(),
        }
    }

    /// `p^(e/2)` for a prime `p`.
    pub fn prime_pow_half(p: u64, e: i64) -> Self {
        let mut m = Mono::rational(pow_p(p, e.div_euclid(2)));
        if e.rem_euclid(2) == 1 {
            m.sqrt.insert(p, 1);
        }
        m
    }

    /// `|n|^(e/2)` for a nonzero integer `n`.
    pub fn int_pow_half(n: i64, e: i64) -> Self {
        let mut acc = Mono::one();
        for (p, k) in crate::exact::factor(n.unsigned_abs()) {
            acc = &acc * &Mono::prime_pow_half(p, e * k as i64);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.pi_half == 0 && self.sqrt.is_empty()
    }

    pub fn to_rat(&self) -> Result<Rat> {
        if self.is_rational() || self.coef.is_zero() {
            Ok(self.coef.clone())
        } else {
            Err(Error::Inconsistent(format!("value {self} is not rational")))
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.coef.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut coef = self.coef.recip();
        for p in self.sqrt.keys() {
            coef /= Rat::from_integer((*p).into());
        }
        Ok(Mono {
            coef,
            pi_half: -self.pi_half,
            sqrt: self.sqrt.clone(),
        })
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut m = self.clone();
        m.coef *= c;
        m
    }
}

impl Mul for &Mono {
    type Output = Mono;
    fn mul(self, o: &Mono) -> Mono {
        let mut coef = &self.coef * &o.coef;
        let mut sqrt = self.sqrt.clone();
        for p in o.sqrt.keys() {
            if sqrt.remove(p).is_some() {
                coef *= Rat::from_integer((*p).into());
            } else {
                sqrt.insert(*p, 1);
            }
        }
        Mono {
            coef,
            pi_half: self.pi_half + o.pi_half,
            sqrt,
        }
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coef)?;
        match self.pi_half {
            0 => {}
            2 => write!(f, "*pi")?,
            h if h % 2 == 0 => write!(f, "*pi^{}", h / 2)?,
            h => write!(f, "*pi^({h}/2)")?,
        }
        for p in self.sqrt.keys() {
            write!(f, "*sqrt({p})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ri};

    #[test]
    fn square_roots_pair_up() {
        let a = Mono::prime_pow_half(3, 1);
        let b = Mono::prime_pow_half(3, 3);
        assert_eq!((&a * &b).to_rat().unwrap(), ri(9));
        let c = &Mono::int_pow_half(12, 1) * &Mono::int_pow_half(3, 1);
        assert_eq!(c.to_rat().unwrap(), ri(6));
        let d = &a * &a.inv().unwrap();
        assert_eq!(d, Mono::one());
        assert_eq!(Mono::pi_pow_half(2).inv().unwrap().pi_half, -2);
        assert_eq!(Mono::rational(rat(1, 2)).inv().unwrap().coef, ri(2));
    }
}
