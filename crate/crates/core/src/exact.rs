//! Exact rational arithmetic helpers and elementary number theory.
//!
//! Everything here works over `BigRational`/`BigInt`. The small-integer
//! routines (Legendre and Kronecker symbols, modular square roots, factoring)
//! operate on machine integers because every prime in this crate is tiny.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number with a positive denominator in lowest terms.
pub type Rat = BigRational;
/// Arbitrary precision integer.
pub type Int = BigInt;

/// The rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// The integer `n` as a rational.
pub fn ri(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Big integer as a rational.
pub fn rint(n: Int) -> Rat {
    Rat::from_integer(n)
}

/// Formats a rational as `"num/den"`.
pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Formats a rational compactly: integers without a denominator.
pub fn fmt_rat_short(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"a"`, `"a/b"` or a decimal-free signed integer pair.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Int = n.trim().parse().map_err(|_| bad())?;
            let d: Int = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// `p^e` for any integer exponent.
pub fn pow_p(p: u64, e: i64) -> Rat {
    let base = Int::from(p);
    if e >= 0 {
        Rat::from_integer(num_traits::pow(base, e as usize))
    } else {
        Rat::new(Int::one(), num_traits::pow(base, (-e) as usize))
    }
}

/// `r^e` for a rational and any integer exponent.
pub fn pow_rat(r: &Rat, e: i64) -> Rat {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), (-e) as usize)
    }
}

/// p-adic valuation of a nonzero integer.
pub fn val_int(n: &Int, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let pp = Int::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pp);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn val_rat(r: &Rat, p: u64) -> Option<i64> {
    let a = val_int(r.numer(), p)? as i64;
    let b = val_int(r.denom(), p).unwrap_or(0) as i64;
    Some(a - b)
}

/// p-adic valuation of a nonzero machine integer.
pub fn val_i64(n: i64, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut n = n.unsigned_abs();
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    Some(v)
}

/// Residue of `r / p^{v_p(r)}` modulo `m` (requires `gcd(m, p) = p`-power
/// and `r != 0`); the unit part of a rational reduced to an integer.
pub fn unit_residue(r: &Rat, p: u64, m: u64) -> u64 {
    let v = val_rat(r, p).expect("unit_residue of zero");
    let u = r * pow_p(p, -v);
    let mm = Int::from(m);
    let num = u.numer().mod_floor(&mm);
    let den = u.denom().mod_floor(&mm);
    let inv = inv_mod(den.to_u64().unwrap(), m).expect("denominator not invertible");
    (num.to_u64().unwrap() as u128 * inv as u128 % m as u128) as u64
}

/// Integer `n mod m` in `[0, m)`.
pub fn mod_int(n: &Int, m: u64) -> u64 {
    n.mod_floor(&Int::from(m)).to_u64().unwrap()
}

/// Modular exponentiation.
pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u128 % m as u128;
    let mm = m as u128;
    let mut bb = b as u128 % mm;
    while e > 0 {
        if e & 1 == 1 {
            r = r * bb % mm;
        }
        bb = bb * bb % mm;
        e >>= 1;
    }
    r as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

/// Legendre symbol `(a/p)` for an odd prime `p`; zero when `p | a`.
pub fn legendre(a: i64, p: u64) -> i32 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Legendre symbol of the unit part of a nonzero rational.
pub fn legendre_rat(r: &Rat, p: u64) -> i32 {
    legendre(unit_residue(r, p, p) as i64, p)
}

/// Kronecker symbol `(d/n)` for integers, `n >= 1`.
pub fn kronecker(d: i64, n: i64) -> i32 {
    assert!(n >= 1, "kronecker symbol needs a positive lower argument");
    let mut res = 1i32;
    for (p, e) in factor(n as u64) {
        let s = if p == 2 {
            if d % 2 == 0 {
                0
            } else {
                match d.rem_euclid(8) {
                    1 | 7 => 1,
                    _ => -1,
                }
            }
        } else {
            legendre(d, p)
        };
        if e % 2 == 1 {
            res *= s;
        } else if s == 0 {
            res = 0;
        }
    }
    res
}

/// Deterministic primality test for small integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Whether `n` has no repeated prime factor.
pub fn is_squarefree(n: u64) -> bool {
    factor(n).iter().all(|&(_, e)| e == 1)
}

/// Discriminant of the quadratic field (or trivial algebra) `Q(sqrt d)`:
/// `1` for squares, otherwise the fundamental discriminant.
pub fn fundamental_disc(d: i64) -> i64 {
    assert!(d != 0);
    let sign = d.signum();
    let mut core = 1i64;
    for (p, e) in factor(d.unsigned_abs()) {
        if e % 2 == 1 {
            core *= p as i64;
        }
    }
    let core = sign * core;
    if core == 1 {
        return 1;
    }
    if core.rem_euclid(4) == 1 {
        core
    } else {
        4 * core
    }
}

/// Square root of a quadratic residue modulo an odd prime (Tonelli-Shanks).
pub fn sqrt_mod_p(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mul = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul(tt, tt);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mul(b, b);
        }
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    Some(r)
}

/// Square root of a unit modulo `p^k` for odd `p`, by Hensel lifting.
pub fn sqrt_mod_pk(a: u64, p: u64, k: u32) -> Option<u64> {
    let pk = p.pow(k);
    let a = a % pk;
    if a.is_multiple_of(p) {
        return None;
    }
    let mut r = sqrt_mod_p(a % p, p)?;
    let mut m = p;
    for _ in 1..k {
        m *= p;
        // r <- r - (r^2 - a) / (2r) mod m
        let r2 = (r as u128 * r as u128 % m as u128) as i128;
        let diff = (r2 - (a % m) as i128).rem_euclid(m as i128) as u64;
        let inv = inv_mod((2 * r) % m, m)?;
        let corr = (diff as u128 * inv as u128 % m as u128) as u64;
        r = (r + m - corr) % m;
    }
    Some(r)
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> Int {
    (1..=n).fold(Int::one(), |acc, k| acc * Int::from(k))
}

/// Binomial coefficient.
pub fn binomial(n: u64, k: u64) -> Int {
    if k > n {
        return Int::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli_table(n: usize) -> Vec<Rat> {
    let mut b = vec![Rat::zero(); n + 1];
    b[0] = Rat::one();
    for m in 1..=n {
        let mut acc = Rat::zero();
        for k in 0..m {
            acc += rint(binomial(m as u64 + 1, k as u64)) * &b[k];
        }
        b[m] = -acc / ri(m as i64 + 1);
    }
    b
}

/// Bernoulli polynomial `B_k(x)` evaluated at a rational.
pub fn bernoulli_poly(k: usize, x: &Rat, table: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for j in 0..=k {
        acc += rint(binomial(k as u64, j as u64)) * &table[j] * pow_rat(x, (k - j) as i64);
    }
    acc
}

/// Absolute value as u64 for small big integers.
pub fn to_u64(n: &Int) -> u64 {
    n.abs().to_u64().expect("integer too large")
}

/// Sign of a rational as -1, 0, 1.
pub fn sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_matches_euler_criterion_by_enumeration() {
        for p in [3u64, 5, 7, 11, 13] {
            let squares: Vec<u64> = (1..p).map(|x| x * x % p).collect();
            for a in 1..p {
                let expect = if squares.contains(&a) { 1 } else { -1 };
                assert_eq!(legendre(a as i64, p), expect);
            }
        }
    }

    #[test]
    fn kronecker_small_table() {
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(8, 3), -1);
    }

    #[test]
    fn sqrt_lifts() {
        for p in [3u64, 5, 7, 11] {
            for k in 1..5 {
                let pk = p.pow(k);
                for a in 1..pk {
                    if a % p == 0 {
                        continue;
                    }
                    if let Some(r) = sqrt_mod_pk(a, p, k) {
                        assert_eq!(r * r % pk, a);
                    } else {
                        assert_eq!(legendre(a as i64, p), -1);
                    }
                }
            }
        }
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_table(10);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[10], rat(5, 66));
    }

    #[test]
    fn fundamental_discriminants() {
        assert_eq!(fundamental_disc(-3), -3);
        assert_eq!(fundamental_disc(-1), -4);
        assert_eq!(fundamental_disc(-12), -3);
        assert_eq!(fundamental_disc(5), 5);
        assert_eq!(fundamental_disc(18), 8);
        assert_eq!(fundamental_disc(9), 1);
    }

    #[test]
    fn rat_roundtrip() {
        let r = rat(-6, 4);
        assert_eq!(fmt_rat(&r), "-3/2");
        assert_eq!(parse_rat("-3/2").unwrap(), r);
        assert_eq!(parse_rat("7").unwrap(), ri(7));
        assert!(parse_rat("1/0").is_err());
    }
}
