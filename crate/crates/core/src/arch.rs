//! Gamma factors at the real place:
//! `Gamma_{n,m}(s) = prod_{k=m-n+1}^{m} 2 pi^((s+k)/2) / Gamma((s+k)/2)`,
//! with exact values in `Q * pi^(h/2)` and logarithmic derivatives as
//! ledgers over `GAMMA`, `LOG2`, `LOGPI` and rationals.

use crate::error::{Error, Result};
use crate::exact::{factorial, pow_p, ri, rint, Rat};
use crate::ledger::{ConstLedger, Symbol};
use crate::mono::Mono;
use crate::report::Check;
use num_traits::One;
use serde_json::{json, Value};

/// `Gamma(x/2)` for an integer `x = 2 * (argument)`, exactly.
pub fn gamma_half(twice: i64) -> Result<Mono> {
    if twice <= 0 && twice % 2 == 0 {
        return Err(Error::Pole);
    }
    if twice <= 0 {
        // Gamma(x) = Gamma(x + 1) / x
        let g = gamma_half(twice + 2)?;
        return Ok(g.scale(&(ri(2) / ri(twice))));
    }
    if twice % 2 == 0 {
        return Ok(Mono::rational(rint(factorial(twice as u64 / 2 - 1))));
    }
    // Gamma(n + 1/2) = (2n)! / (4^n n!) sqrt(pi)
    let n = (twice - 1) / 2;
    let c = rint(factorial(2 * n as u64)) / (rint(factorial(n as u64)) * pow_p(4, n));
    Ok(&Mono::rational(c) * &Mono::pi_pow_half(1))
}

/// `psi(x/2)` as a ledger, for an integer `x = 2 * (argument)`:
/// `psi(n) = -gamma + H_(n-1)`,
/// `psi(n + 1/2) = -gamma - 2 log 2 + 2 sum_{k<=n} 1/(2k-1)`,
/// and `psi(x) = psi(x + 1) - 1/x` below.
pub fn digamma_half(twice: i64) -> Result<ConstLedger> {
    if twice <= 0 && twice % 2 == 0 {
        return Err(Error::Pole);
    }
    if twice <= 0 {
        let mut l = digamma_half(twice + 2)?;
        l.add_term(Symbol::One, -(ri(2) / ri(twice)));
        return Ok(l);
    }
    let mut l = ConstLedger::term(Symbol::Gamma, -Rat::one());
    if twice % 2 == 0 {
        let n = twice / 2;
        let h: Rat = (1..n).map(|k| Rat::new(1.into(), k.into())).sum();
        l.add_term(Symbol::One, h);
    } else {
        let n = (twice - 1) / 2;
        let h: Rat = (1..=n).map(|k| Rat::new(2.into(), (2 * k - 1).into())).sum();
        l.add_term(Symbol::Log2, ri(-2));
        l.add_term(Symbol::One, h);
    }
    Ok(l)
}

/// An exact Gamma factor with its logarithmic derivative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaFactor {
    pub n: i64,
    pub m: i64,
    pub s: i64,
    pub value: Mono,
    /// `d/ds log Gamma_{n,m}(s)`.
    pub dlog: ConstLedger,
}

impl GammaFactor {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "m": self.m,
            "s": self.s,
            "value": self.value.to_string(),
            "rational_part": crate::exact::fmt_rat(&self.value.coef),
            "pi_power_half": self.value.pi_half,
            "dlog": self.dlog.to_json(),
        })
    }
}

/// `Gamma_{n,m}(s)` at an integer `s`; an empty range (`n = 0`) gives 1.
pub fn gamma_nm(n: i64, m: i64, s: i64) -> Result<GammaFactor> {
    if n < 0 || n > m {
        return Err(Error::Precondition(format!("needs 0 <= n <= m, got n = {n}, m = {m}")));
    }
    let mut value = Mono::one();
    let mut dlog = ConstLedger::new();
    for k in (m - n + 1)..=m {
        let g = gamma_half(s + k)?;
        let f = &Mono::rational(ri(2)) * &Mono::pi_pow_half(s + k);
        value = &value * &(&f * &g.inv()?);
        // d/ds [ (s+k)/2 log pi - log Gamma((s+k)/2) ]
        dlog.add_term(Symbol::LogPi, Rat::new(1.into(), 2.into()));
        dlog = &dlog - &digamma_half(s + k)?.scale(&Rat::new(1.into(), 2.into()));
    }
    Ok(GammaFactor { n, m, s, value, dlog })
}

/// `lambda_inf = Gamma_{m-1,m}(s)` and `mu_inf = Gamma_{n,m}(s)`.
pub fn arch_factors(m: i64, n: i64, s: i64) -> Result<(GammaFactor, GammaFactor)> {
    Ok((gamma_nm(m - 1, m, s)?, gamma_nm(n, m, s)?))
}

/// `mu_inf lambda_inf^-1 = lambda_inf(perp)^-1`, i.e.
/// `Gamma_{n,m}(s) / Gamma_{m-1,m}(s) = 1 / Gamma_{m-n-1,m-n}(s)`, for values
/// and logarithmic derivatives.
pub fn verify_arch_orbit_equation(n: i64, m: i64, s: i64) -> Result<Vec<Check>> {
    let (lam, mu) = arch_factors(m, n, s)?;
    let perp = gamma_nm(m - n - 1, m - n, s)?;
    let lhs = &mu.value * &lam.value.inv()?;
    let rhs = perp.value.inv()?;
    let dl = &mu.dlog - &lam.dlog;
    let dr = -&perp.dlog;
    Ok(vec![
        Check::eq(format!("Gamma_{{{n},{m}}}/Gamma_{{{},{m}}} at s = {s}", m - 1), &lhs, &rhs),
        Check::eq(format!("log-derivative, n = {n}, m = {m}, s = {s}"), &dl, &dr),
    ])
}

/// The range identity behind [`verify_arch_orbit_equation`]:
/// `{m-n+1..m}` equals `{2..m}` minus `{2..m-n}`.
pub fn arch_index_identity(n: i64, m: i64) -> bool {
    let mu: Vec<i64> = ((m - n + 1)..=m).collect();
    let lam: Vec<i64> = (2..=m).collect();
    let perp: Vec<i64> = (2..=(m - n)).collect();
    let mut rest: Vec<i64> = lam.into_iter().filter(|k| !perp.contains(k)).collect();
    rest.sort();
    rest == mu
}

/// Whether a ledger uses only `ONE`, `GAMMA`, `LOG2`, `LOGPI`.
pub fn is_elementary(l: &ConstLedger) -> bool {
    l.iter().all(|(s, _)| matches!(s, Symbol::One | Symbol::Gamma | Symbol::Log2 | Symbol::LogPi))
}

/// `Gamma_{n,m}(s)` value and `d log` for display.
pub fn describe(g: &GammaFactor) -> String {
    format!("Gamma_{{{},{}}}({}) = {}; d/ds log = {}", g.n, g.m, g.s, g.value, g.dlog)
}

/// Zero ledger helper for the identity `psi(x + 1) = psi(x) + 1/x`.
pub fn digamma_recurrence_holds(twice: i64) -> Result<bool> {
    let a = digamma_half(twice + 2)?;
    let mut b = digamma_half(twice)?;
    b.add_term(Symbol::One, ri(2) / ri(twice));
    Ok((&a - &b).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::numeric::{digamma, elementary_symbol, eval_ledger};

    #[test]
    fn small_values() {
        assert_eq!(gamma_nm(1, 1, 0).unwrap().value, Mono::rational(ri(2)));
        let g12 = gamma_nm(1, 2, 0).unwrap().value;
        assert_eq!(g12, &Mono::rational(ri(2)) * &Mono::pi_pow_half(2));
        let g22 = gamma_nm(2, 2, 0).unwrap().value;
        assert_eq!(g22, &Mono::rational(ri(4)) * &Mono::pi_pow_half(2));
        let g23 = gamma_nm(2, 3, 0).unwrap().value;
        assert_eq!(g23, &Mono::rational(ri(8)) * &Mono::pi_pow_half(4));
    }

    #[test]
    fn dlog_of_gamma12() {
        let d = gamma_nm(1, 2, 0).unwrap().dlog;
        let mut e = ConstLedger::term(Symbol::LogPi, rat(1, 2));
        e.add_term(Symbol::Gamma, rat(1, 2));
        assert_eq!(d, e);
    }

    #[test]
    fn orbit_equation_all_ranks() {
        for m in 3..=12 {
            for n in 1..=m - 2 {
                assert!(arch_index_identity(n, m));
                for s in 0..3 {
                    for c in verify_arch_orbit_equation(n, m, s).unwrap() {
                        assert!(c.holds, "{c}");
                    }
                }
            }
        }
    }

    #[test]
    fn composition() {
        for m in 2..8 {
            for a in 0..m {
                for b in 0..=(m - a) {
                    let ab = gamma_nm(a + b, m, 1).unwrap().value;
                    let x = &gamma_nm(a, m, 1).unwrap().value * &gamma_nm(b, m - a, 1).unwrap().value;
                    assert_eq!(ab, x);
                }
            }
        }
    }

    #[test]
    fn digamma_table_matches_numeric() {
        for twice in 1..=12 {
            assert!(digamma_recurrence_holds(twice).unwrap());
            let exact = eval_ledger(&digamma_half(twice).unwrap(), elementary_symbol).unwrap();
            let num = digamma(&rat(twice, 2));
            assert!(exact.close_to(&num, 50), "psi({twice}/2)");
        }
        assert!(digamma_half(0).is_err());
        assert!(gamma_half(-2).is_err());
        assert_eq!(gamma_half(-1).unwrap(), &Mono::rational(ri(-2)) * &Mono::pi_pow_half(1));
    }
}
