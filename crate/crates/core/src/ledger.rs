//! Exact rational combinations of transcendental constants.
//!
//! Derivatives of global volumes are collected as `sum c_i * sym_i` over a
//! fixed symbol basis. Nothing is evaluated numerically here; see
//! [`crate::numeric`] for the floating shadow used in tests.

use crate::error::{Error, Result};
use crate::exact::{fmt_rat, parse_rat, Rat};
use num_traits::Zero;
use serde_json::{Map, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Basis symbol of a [`ConstLedger`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// The rational unit.
    One,
    /// Euler's constant.
    Gamma,
    Log2,
    LogPi,
    /// `log p` for an odd prime `p` (`log 2` is [`Symbol::Log2`]).
    LogP(u64),
    /// `zeta'(-k)/zeta(-k)`.
    DZeta(i64),
    /// `L'(chi_d, -k)/L(chi_d, -k)` for the Kronecker character of `d`.
    DL(i64, i64),
    /// Opaque constant carried through the expansions.
    C,
}

impl Symbol {
    /// `log p`, mapping `p = 2` to [`Symbol::Log2`].
    pub fn log_prime(p: u64) -> Symbol {
        if p == 2 {
            Symbol::Log2
        } else {
            Symbol::LogP(p)
        }
    }

    pub fn name(&self) -> String {
        match self {
            Symbol::One => "ONE".into(),
            Symbol::Gamma => "GAMMA".into(),
            Symbol::Log2 => "LOG2".into(),
            Symbol::LogPi => "LOGPI".into(),
            Symbol::LogP(p) => format!("LOGP:{p}"),
            Symbol::DZeta(k) => format!("DZETA:{k}"),
            Symbol::DL(d, k) => format!("DL:{d}:{k}"),
            Symbol::C => "C".into(),
        }
    }

    pub fn parse(s: &str) -> Result<Symbol> {
        let bad = || Error::Parse(format!("unknown ledger symbol '{s}'"));
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.parse::<i64>().map_err(|_| bad());
        Ok(match parts.as_slice() {
            ["ONE"] => Symbol::One,
            ["GAMMA"] => Symbol::Gamma,
            ["LOG2"] => Symbol::Log2,
            ["LOGPI"] => Symbol::LogPi,
            ["C"] => Symbol::C,
            ["LOGP", p] => Symbol::log_prime(num(p)? as u64),
            ["DZETA", k] => Symbol::DZeta(num(k)?),
            ["DL", d, k] => Symbol::DL(num(d)?, num(k)?),
            _ => return Err(bad()),
        })
    }
}

/// Finitely supported map from [`Symbol`] to rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstLedger {
    coeffs: BTreeMap<Symbol, Rat>,
}

impl ConstLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// `c * sym`.
    pub fn term(sym: Symbol, c: Rat) -> Self {
        let mut l = Self::new();
        l.add_term(sym, c);
        l
    }

    pub fn add_term(&mut self, sym: Symbol, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(sym.clone()).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&sym);
        }
    }

    pub fn get(&self, sym: &Symbol) -> Rat {
        self.coeffs.get(sym).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Rat)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::new();
        for (s, v) in &self.coeffs {
            out.add_term(s.clone(), v * c);
        }
        out
    }

    /// Copy with the coefficients of the given symbols removed.
    pub fn without(&self, drop: impl Fn(&Symbol) -> bool) -> Self {
        ConstLedger {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(s, _)| !drop(s))
                .map(|(s, v)| (s.clone(), v.clone()))
                .collect(),
        }
    }

    /// Copy with `log p` removed for every `p` in `primes`.
    pub fn without_logs(&self, primes: &[u64]) -> Self {
        self.without(|s| primes.iter().any(|p| *s == Symbol::log_prime(*p)))
    }

    /// Primes whose logarithm has a nonzero coefficient.
    pub fn log_primes(&self) -> Vec<u64> {
        self.coeffs
            .keys()
            .filter_map(|s| match s {
                Symbol::LogP(p) => Some(*p),
                Symbol::Log2 => Some(2),
                _ => None,
            })
            .collect()
    }

    /// JSON object `{"SYMBOL": "n/d", ..}`.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (s, v) in &self.coeffs {
            m.insert(s.name(), Value::String(fmt_rat(v)));
        }
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("ledger must be a JSON object".into()))?;
        let mut l = Self::new();
        for (k, c) in obj {
            let c = match c {
                Value::String(s) => parse_rat(s)?,
                Value::Number(n) if n.is_i64() => Rat::from_integer(n.as_i64().unwrap().into()),
                _ => return Err(Error::Parse(format!("bad coefficient for {k}"))),
            };
            l.add_term(Symbol::parse(k)?, c);
        }
        Ok(l)
    }
}

impl Add for &ConstLedger {
    type Output = ConstLedger;
    fn add(self, o: &ConstLedger) -> ConstLedger {
        let mut out = self.clone();
        for (s, v) in &o.coeffs {
            out.add_term(s.clone(), v.clone());
        }
        out
    }
}

impl Sub for &ConstLedger {
    type Output = ConstLedger;
    fn sub(self, o: &ConstLedger) -> ConstLedger {
        self + &(-o)
    }
}

impl Neg for &ConstLedger {
    type Output = ConstLedger;
    fn neg(self) -> ConstLedger {
        self.scale(&Rat::from_integer((-1).into()))
    }
}

impl fmt::Display for ConstLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(s, v)| format!("{}*{}", crate::exact::fmt_rat_short(v), s.name()))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ri};

    #[test]
    fn symbols_roundtrip() {
        for s in [
            Symbol::One,
            Symbol::Gamma,
            Symbol::Log2,
            Symbol::LogPi,
            Symbol::LogP(7),
            Symbol::DZeta(1),
            Symbol::DL(-4, 0),
            Symbol::C,
        ] {
            assert_eq!(Symbol::parse(&s.name()).unwrap(), s);
        }
        assert_eq!(Symbol::parse("LOGP:2").unwrap(), Symbol::Log2);
    }

    #[test]
    fn linear_operations() {
        let a = ConstLedger::term(Symbol::Gamma, rat(1, 2));
        let b = ConstLedger::term(Symbol::Gamma, rat(-1, 2));
        assert!((&a + &b).is_zero());
        let c = &a + &ConstLedger::term(Symbol::LogP(3), ri(2));
        assert_eq!(ConstLedger::from_json(&c.to_json()).unwrap(), c);
        assert_eq!(c.without_logs(&[3]), a);
    }
}
