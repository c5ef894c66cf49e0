//! Fixed-point decimal arithmetic used only as an independent numeric
//! shadow of exact results (digamma values, logarithms, `pi`, Euler's
//! constant, Hurwitz zeta values).
//!
//! Values are big integers scaled by `10^DIGITS`; every routine is accurate
//! well beyond the 50 digits compared in tests.

use crate::exact::{bernoulli_table, Int, Rat};
use crate::ledger::{ConstLedger, Symbol};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Working precision in decimal digits.
pub const DIGITS: u32 = 70;

fn scale() -> Int {
    Int::from(10).pow(DIGITS)
}

/// A real number `n / 10^DIGITS`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(pub Int);

impl Fixed {
    pub fn zero() -> Self {
        Fixed(Int::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Fixed(Int::from(n) * scale())
    }

    pub fn from_rat(r: &Rat) -> Self {
        Fixed(div_round(&(r.numer() * scale()), r.denom()))
    }

    /// `|self - o| < 10^(-digits)`.
    pub fn close_to(&self, o: &Fixed, digits: u32) -> bool {
        let tol = Int::from(10).pow(DIGITS - digits);
        (&self.0 - &o.0).abs() < tol
    }

    /// Decimal string with `digits` places after the point (truncated).
    pub fn to_decimal(&self, digits: u32) -> String {
        let neg = self.0.is_negative();
        let a = self.0.abs() / Int::from(10).pow(DIGITS - digits);
        let s = format!("{:0>width$}", a.to_string(), width = digits as usize + 1);
        let (int, frac) = s.split_at(s.len() - digits as usize);
        format!("{}{int}.{frac}", if neg { "-" } else { "" })
    }
}

fn div_round(a: &Int, b: &Int) -> Int {
    let (q, r) = a.div_mod_floor(b);
    if (r * Int::from(2)).abs() >= b.abs() {
        q + Int::one()
    } else {
        q
    }
}

impl Add for &Fixed {
    type Output = Fixed;
    fn add(self, o: &Fixed) -> Fixed {
        Fixed(&self.0 + &o.0)
    }
}

impl Sub for &Fixed {
    type Output = Fixed;
    fn sub(self, o: &Fixed) -> Fixed {
        Fixed(&self.0 - &o.0)
    }
}

impl Mul for &Fixed {
    type Output = Fixed;
    fn mul(self, o: &Fixed) -> Fixed {
        Fixed(div_round(&(&self.0 * &o.0), &scale()))
    }
}

impl Div for &Fixed {
    type Output = Fixed;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &Fixed) -> Fixed {
        Fixed(div_round(&(&self.0 * scale()), &o.0))
    }
}

impl Neg for &Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed(-&self.0)
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(50))
    }
}

/// `atan(1/n)` by its Taylor series.
fn atan_inv(n: i64) -> Fixed {
    let n2 = Int::from(n * n);
    let mut term = scale() / Int::from(n);
    let mut acc = Int::zero();
    let mut k = 0i64;
    while !term.is_zero() {
        let t = &term / Int::from(2 * k + 1);
        if k % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
        term /= &n2;
        k += 1;
    }
    Fixed(acc)
}

/// `pi` by Machin's formula.
pub fn pi() -> Fixed {
    let a = atan_inv(5);
    let b = atan_inv(239);
    Fixed(a.0 * Int::from(16) - b.0 * Int::from(4))
}

/// `2 atanh(z) = log((1 + z)/(1 - z))` for `|z| < 1/2`.
fn two_atanh(z: &Fixed) -> Fixed {
    let z2 = z * z;
    let mut pow = z.clone();
    let mut acc = Fixed::zero();
    let mut k = 0i64;
    while !pow.0.is_zero() {
        acc = &acc + &Fixed(&pow.0 / Int::from(2 * k + 1));
        pow = &pow * &z2;
        k += 1;
    }
    Fixed(acc.0 * Int::from(2))
}

/// `log 2 = 2 atanh(1/3)`.
pub fn ln2() -> Fixed {
    two_atanh(&Fixed::from_rat(&Rat::new(1.into(), 3.into())))
}

/// Natural logarithm of a positive rational.
pub fn ln(r: &Rat) -> Fixed {
    assert!(r.is_positive(), "log of a non-positive number");
    // r = 2^k y with y in [2/3, 4/3)
    let mut y = r.clone();
    let mut k = 0i64;
    let two = Rat::from_integer(2.into());
    let lo = Rat::new(2.into(), 3.into());
    let hi = Rat::new(4.into(), 3.into());
    while y >= hi {
        y /= &two;
        k += 1;
    }
    while y < lo {
        y *= &two;
        k -= 1;
    }
    let z = (&y - Rat::one()) / (&y + Rat::one());
    let base = two_atanh(&Fixed::from_rat(&z));
    &base + &Fixed(ln2().0 * Int::from(k))
}

/// Euler's constant from the Euler-Maclaurin expansion of `H_N - log N`
/// at `N = 64`.
pub fn euler_gamma() -> Fixed {
    let n = 64i64;
    let b = bernoulli_table(100);
    let mut h = Rat::zero();
    for k in 1..=n {
        h += Rat::new(1.into(), k.into());
    }
    let mut corr = -Rat::new(1.into(), (2 * n).into());
    for k in 1..=45usize {
        let d = Int::from(2 * k as i64) * Int::from(n).pow(2 * k as u32);
        corr += &b[2 * k] / Rat::from_integer(d);
    }
    // gamma = H_N - log N - 1/(2N) + sum B_2k / (2k N^2k)
    &Fixed::from_rat(&(h + corr)) - &Fixed(ln2().0 * Int::from(6))
}

/// `psi(x)` for a positive rational `x`: recurrence up to `x + 64`, then the
/// asymptotic series.
pub fn digamma(x: &Rat) -> Fixed {
    assert!(x.is_positive(), "digamma needs a positive argument");
    let shift = 64i64;
    let b = bernoulli_table(100);
    let y = x + Rat::from_integer(shift.into());
    let mut acc = Rat::zero();
    for j in 0..shift {
        acc -= (x + Rat::from_integer(j.into())).recip();
    }
    acc -= (Rat::from_integer(2.into()) * &y).recip();
    let y2 = &y * &y;
    let mut pw = y2.clone();
    for k in 1..=45usize {
        acc -= &b[2 * k] / (Rat::from_integer((2 * k as i64).into()) * &pw);
        pw *= &y2;
    }
    &ln(&y) + &Fixed::from_rat(&acc)
}

/// Numeric value of a ledger, given values for every symbol it uses.
pub fn eval_ledger(l: &ConstLedger, value: impl Fn(&Symbol) -> Option<Fixed>) -> Option<Fixed> {
    let mut acc = Fixed::zero();
    for (sym, c) in l.iter() {
        let v = value(sym)?;
        acc = &acc + &(&v * &Fixed::from_rat(c));
    }
    Some(acc)
}

/// Values of the elementary symbols `ONE`, `GAMMA`, `LOG2`, `LOGPI`, `LOGP:p`.
pub fn elementary_symbol(sym: &Symbol) -> Option<Fixed> {
    match sym {
        Symbol::One => Some(Fixed::from_int(1)),
        Symbol::Gamma => Some(euler_gamma()),
        Symbol::Log2 => Some(ln2()),
        Symbol::LogPi => Some(ln_pi()),
        Symbol::LogP(p) => Some(ln(&Rat::from_integer((*p).into()))),
        _ => None,
    }
}

/// `log pi` by Newton iteration on `exp(y) = pi`.
pub fn ln_pi() -> Fixed {
    let target = pi();
    // log(pi) = log(22/7) + log(pi * 7/22), second argument near 1
    let r = Rat::new(22.into(), 7.into());
    let ratio = &target / &Fixed::from_rat(&r);
    let z = &(&ratio - &Fixed::from_int(1)) / &(&ratio + &Fixed::from_int(1));
    &ln(&r) + &two_atanh(&z)
}

/// `zeta(s, a) = sum_{n >= 0} (n + a)^(-s)` and its derivative in `s`, for
/// an integer `s` and rational `0 < a <= 1`, by Euler-Maclaurin. For
/// `s <= 0` the same formula is the analytic continuation; at `s = 1` the
/// constant and linear Laurent coefficients (pole removed) are returned.
pub fn hurwitz_zeta_and_derivative(s: i64, a: &Rat) -> (Fixed, Fixed) {
    assert!(s > -20, "argument too negative for the fixed expansion");
    let n = 60i64;
    let b = bernoulli_table(100);
    let mut z = Fixed::zero();
    let mut dz = Fixed::zero();
    for k in 0..n {
        let x = a + Rat::from_integer(k.into());
        let t = Fixed::from_rat(&x.pow(-(s as i32)));
        dz = &dz - &(&t * &ln(&x));
        z = &z + &t;
    }
    let x = a + Rat::from_integer(n.into());
    let lx = ln(&x);
    let xs1 = x.pow(1 - s as i32);
    // tail integral x^(1-s)/(s-1), derivative -x^(1-s)(log x/(s-1) + 1/(s-1)^2)
    if s == 1 {
        // x^(1-s)/(s-1) = 1/(s-1) - log x + (s-1) log(x)^2 / 2 + ..; the pole is dropped
        z = &z - &lx;
        dz = &dz + &(&(&lx * &lx) / &Fixed::from_int(2));
    } else {
        let sm1 = Rat::from_integer((s - 1).into());
        let i0 = Fixed::from_rat(&(&xs1 / &sm1));
        z = &z + &i0;
        let inner = &(&lx / &Fixed::from_rat(&sm1)) + &Fixed::from_rat(&(&sm1 * &sm1).recip());
        dz = &dz - &(&Fixed::from_rat(&xs1) * &inner);
    }
    // + f(x)/2
    let fx = Fixed::from_rat(&(x.pow(-(s as i32)) / Rat::from_integer(2.into())));
    z = &z + &fx;
    dz = &dz - &(&fx * &lx);
    // - sum B_2k/(2k)! f^(2k-1)(x), f^(j)(x) = (-1)^j (s)_j x^(-s-j)
    let mut fact = Rat::one();
    for k in 1..=30i64 {
        let j = 2 * k - 1;
        fact *= Rat::from_integer(((2 * k - 1) * (2 * k)).into());
        // rising factorial (s)_j and its derivative in s
        let mut poch = Rat::one();
        let mut dpoch = Rat::zero();
        for i in 0..j {
            let f = Rat::from_integer((s + i).into());
            dpoch = &dpoch * &f + &poch;
            poch *= f;
        }
        let c = &b[2 * k as usize] / &fact;
        let xp = x.pow(-(s + j) as i32);
        // term = -c * (-1)^j (s)_j x^(-s-j) = c (s)_j x^(-s-j)
        z = &z + &Fixed::from_rat(&(&c * &poch * &xp));
        let d = &Fixed::from_rat(&(&c * &dpoch * &xp)) - &(&Fixed::from_rat(&(&c * &poch * &xp)) * &lx);
        dz = &dz + &d;
    }
    (z, dz)
}

/// `L(chi_d, s)` and `L'(chi_d, s)` for the Kronecker character of a
/// fundamental discriminant `d` (`d = 1` gives zeta, then `s != 1`):
/// `L(s) = f^(-s) sum_{r=1}^{f} chi(r) zeta(s, r/f)`.
pub fn dirichlet_l(d: i64, s: i64) -> (Fixed, Fixed) {
    let f = d.abs();
    let mut l = Fixed::zero();
    let mut dl = Fixed::zero();
    for r in 1..=f {
        let c = crate::exact::kronecker(d, r);
        if c == 0 {
            continue;
        }
        let (z, dz) = hurwitz_zeta_and_derivative(s, &Rat::new(r.into(), f.into()));
        let c = Fixed::from_int(c as i64);
        l = &l + &(&c * &z);
        dl = &dl + &(&c * &dz);
    }
    let fs = Fixed::from_rat(&crate::exact::pow_rat(&Rat::from_integer(f.into()), -s));
    let lf = ln(&Rat::from_integer(f.into()));
    let value = &fs * &l;
    let deriv = &(&fs * &dl) - &(&value * &lf);
    (value, deriv)
}

impl Fixed {
    /// Square root of a non-negative value.
    pub fn sqrt(&self) -> Fixed {
        assert!(!self.0.is_negative(), "square root of a negative number");
        Fixed((&self.0 * scale()).sqrt())
    }
}

/// Numeric value of `c pi^(h/2) prod sqrt(p)^e`.
pub fn eval_mono(m: &crate::mono::Mono) -> Fixed {
    let mut acc = Fixed::from_rat(&m.coef);
    let sp = pi().sqrt();
    let base = if m.pi_half >= 0 { sp } else { &Fixed::from_int(1) / &sp };
    for _ in 0..m.pi_half.unsigned_abs() {
        acc = &acc * &base;
    }
    for (p, e) in &m.sqrt {
        let r = Fixed::from_int(*p as i64).sqrt();
        for _ in 0..*e {
            acc = &acc * &r;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    const PI50: &str = "3.14159265358979323846264338327950288419716939937510";
    const LN2_50: &str = "0.69314718055994530941723212145817656807550013436025";
    const GAMMA50: &str = "0.57721566490153286060651209008240243104215933593992";

    #[test]
    fn reference_constants() {
        assert_eq!(pi().to_decimal(50), PI50);
        assert_eq!(ln2().to_decimal(50), LN2_50);
        assert_eq!(euler_gamma().to_decimal(50), GAMMA50);
    }

    #[test]
    fn digamma_special_values() {
        // psi(1) = -gamma, psi(1/2) = -gamma - 2 log 2
        assert!(digamma(&rat(1, 1)).close_to(&-&euler_gamma(), 55));
        let half = &(-&euler_gamma()) - &Fixed(ln2().0 * Int::from(2));
        assert!(digamma(&rat(1, 2)).close_to(&half, 55));
    }

    #[test]
    fn logs_are_additive() {
        let a = &ln(&rat(3, 1)) + &ln(&rat(5, 1));
        assert!(a.close_to(&ln(&rat(15, 1)), 60));
    }

    #[test]
    fn negative_arguments() {
        // zeta(-1) = -1/12 and L(chi_-4, 0) = 1/2
        let (z, _) = hurwitz_zeta_and_derivative(-1, &rat(1, 1));
        assert!(z.close_to(&Fixed::from_rat(&rat(-1, 12)), 55));
        let (l, _) = dirichlet_l(-4, 0);
        assert!(l.close_to(&Fixed::from_rat(&rat(1, 2)), 55));
        // zeta'(0) = -log(2 pi) / 2
        let (_, dz) = hurwitz_zeta_and_derivative(0, &rat(1, 1));
        let expect = &(&ln2() + &ln_pi()) * &Fixed::from_rat(&rat(-1, 2));
        assert!(dz.close_to(&expect, 55));
        assert!(Fixed::from_int(2).sqrt().close_to(&Fixed::from_rat(&rat(141421356237, 100000000000)), 11));
    }

    #[test]
    fn zeta_two() {
        let (z, _) = hurwitz_zeta_and_derivative(2, &rat(1, 1));
        let p = pi();
        let expect = &(&p * &p) / &Fixed::from_int(6);
        assert!(z.close_to(&expect, 55));
    }
}
