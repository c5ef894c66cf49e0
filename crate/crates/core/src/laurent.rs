//! Rational functions in one variable `X` with rational coefficients.
//!
//! A value is stored as `X^shift * num(X) / den(X)` with `num` and `den`
//! coprime, neither divisible by `X`, and `den(0) = 1`. This form is unique,
//! so structural equality is equality of rational functions. Negative
//! powers of `X` are allowed through `shift`.

use crate::error::{Error, Result};
use crate::exact::{fmt_rat, parse_rat, pow_p, pow_rat, ri, Rat};
use crate::poly::Poly;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Canonical rational function `X^shift * num / den`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentRat {
    shift: i64,
    num: Poly,
    den: Poly,
}

impl LaurentRat {
    /// Builds and canonicalizes `X^shift * num / den`.
    pub fn from_parts(shift: i64, num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let ln = num.low_order().unwrap();
        let ld = den.low_order().unwrap();
        let mut num = num.shift_down(ln);
        let mut den = den.shift_down(ld);
        let shift = shift + ln as i64 - ld as i64;
        if den.degree() != Some(0) && num.degree() != Some(0) {
            let g = Poly::gcd(&num, &den);
            if g.degree().unwrap_or(0) > 0 {
                num = num.divrem(&g).0;
                den = den.divrem(&g).0;
            }
        }
        let c = den.coeff(0).recip();
        Ok(LaurentRat {
            shift,
            num: num.scale(&c),
            den: den.scale(&c),
        })
    }

    fn build(shift: i64, num: Poly, den: Poly) -> Self {
        Self::from_parts(shift, num, den).expect("nonzero denominator")
    }

    pub fn zero() -> Self {
        LaurentRat {
            shift: 0,
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::build(0, Poly::constant(c), Poly::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(ri(c))
    }

    /// The variable `X`.
    pub fn x() -> Self {
        Self::monomial(Rat::one(), 1)
    }

    /// `c X^k` for any integer `k`.
    pub fn monomial(c: Rat, k: i64) -> Self {
        Self::build(k, Poly::constant(c), Poly::one())
    }

    /// A polynomial in `X`.
    pub fn from_poly(p: Poly) -> Self {
        Self::build(0, p, Poly::one())
    }

    /// Polynomial from small integer coefficients in increasing degree.
    pub fn from_ints(c: &[i64]) -> Self {
        Self::from_poly(Poly::from_ints(c))
    }

    /// Sum of `c X^e` terms; exponents may be negative.
    pub fn from_terms(terms: &[(i64, Rat)]) -> Self {
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut c = vec![Rat::zero(); (hi - lo + 1) as usize];
        for (e, v) in terms {
            c[(e - lo) as usize] += v;
        }
        Self::build(lo, Poly::new(c), Poly::one())
    }

    /// Quotient of two term lists.
    pub fn from_term_ratio(numer: &[(i64, Rat)], denom: &[(i64, Rat)]) -> Result<Self> {
        let d = Self::from_terms(denom);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(&Self::from_terms(numer) / &d)
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is 1.
    pub fn is_laurent_poly(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// True for a polynomial in `X` (no negative powers, denominator 1).
    pub fn is_polynomial(&self) -> bool {
        self.is_zero() || (self.is_laurent_poly() && self.shift >= 0)
    }

    /// Terms `(exponent, coefficient)` of a Laurent polynomial.
    pub fn terms(&self) -> Option<Vec<(i64, Rat)>> {
        if !self.is_laurent_poly() && !self.is_zero() {
            return None;
        }
        Some(
            self.num
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (self.shift + i as i64, c.clone()))
                .collect(),
        )
    }

    /// Coefficient of `X^e` in a Laurent polynomial (zero otherwise).
    pub fn coeff(&self, e: i64) -> Rat {
        if !self.is_laurent_poly() || e < self.shift {
            return Rat::zero();
        }
        self.num.coeff((e - self.shift) as usize)
    }

    /// Exponent range `(lowest, highest)` of a nonzero Laurent polynomial.
    pub fn exponent_range(&self) -> Option<(i64, i64)> {
        if self.is_zero() || !self.is_laurent_poly() {
            return None;
        }
        Some((self.shift, self.shift + self.num.degree().unwrap() as i64))
    }

    /// Returns the constant if `self` is constant.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.shift == 0 && self.is_laurent_poly() && self.num.degree() == Some(0) {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::from_parts(-self.shift, self.den.clone(), self.num.clone())
    }

    /// Integer power (negative exponents invert).
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::build(self.shift, self.num.scale(c), self.den.clone())
    }

    /// Multiplies by `X^k`.
    pub fn mul_xpow(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentRat {
            shift: self.shift + k,
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    /// Value at `X = x`.
    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        if self.is_zero() {
            return Ok(Rat::zero());
        }
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        if x.is_zero() {
            return match self.shift {
                0 => Ok(self.num.coeff(0)),
                k if k > 0 => Ok(Rat::zero()),
                _ => Err(Error::Pole),
            };
        }
        Ok(pow_rat(x, self.shift) * self.num.eval(x) / d)
    }

    /// Value at `X = p^(-s)`.
    pub fn eval_s(&self, p: u64, s: i64) -> Result<Rat> {
        self.eval(&pow_p(p, -s))
    }

    /// `f(cX)`.
    pub fn subst_scale(&self, c: &Rat) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self::build(
            0,
            self.num.subst_scale(c).scale(&pow_rat(c, self.shift)),
            self.den.subst_scale(c),
        )
        .mul_xpow(self.shift)
    }

    /// `f(X^k)` for `k >= 1`.
    pub fn subst_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        if self.is_zero() {
            return self.clone();
        }
        Self::build(
            self.shift * k as i64,
            self.num.subst_power(k),
            self.den.subst_power(k),
        )
    }

    /// `f(c/X)` for nonzero `c`.
    pub fn subst_recip(&self, c: &Rat) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let rev = |p: &Poly| -> (Poly, i64) {
            let d = p.degree().unwrap();
            let mut out = vec![Rat::zero(); d + 1];
            let mut pw = Rat::one();
            for (i, a) in p.coeffs().iter().enumerate() {
                out[d - i] = a * &pw;
                pw *= c;
            }
            (Poly::new(out), d as i64)
        };
        let (n, dn) = rev(&self.num);
        let (d, dd) = rev(&self.den);
        Self::build(-self.shift + dd - dn, n.scale(&pow_rat(c, self.shift)), d)
    }

    /// For an even function `f(X) = A(X^2)`, returns `A`.
    pub fn unsquare(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let conj = self.den.subst_scale(&-Rat::one());
        let num = &self.num * &conj;
        let den = &self.den * &conj;
        let halve = |p: &Poly, offset: i64| -> Result<Poly> {
            let mut out = Vec::new();
            for (i, a) in p.coeffs().iter().enumerate() {
                let e = i as i64 + offset;
                if e.rem_euclid(2) == 1 {
                    if !a.is_zero() {
                        return Err(Error::Precondition("function is not even".into()));
                    }
                } else {
                    let k = (e / 2) as usize;
                    if out.len() <= k {
                        out.resize(k + 1, Rat::zero());
                    }
                    out[k] = a.clone();
                }
            }
            Ok(Poly::new(out))
        };
        let n = halve(&num, self.shift.rem_euclid(2))?;
        let d = halve(&den, 0)?;
        Self::from_parts(self.shift.div_euclid(2), n, d)
    }

    /// Derivative with respect to `X`.
    pub fn deriv_x(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let k = ri(self.shift);
        let nd = &self.num * &self.den;
        let cross = &(&self.num.deriv() * &self.den) - &(&self.num * &self.den.deriv());
        let top = &nd.scale(&k) + &cross.shift_up(1);
        if top.is_zero() {
            return Self::zero();
        }
        Self::build(self.shift - 1, top, &self.den * &self.den)
    }

    /// First `n` power-series coefficients, starting at `X^shift`.
    pub fn series(&self, n: usize) -> (i64, Vec<Rat>) {
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = self.num.coeff(i);
            for j in 1..=i.min(self.den.degree().unwrap_or(0)) {
                c -= self.den.coeff(j) * &out[i - j];
            }
            out.push(c);
        }
        (self.shift, out)
    }

    /// JSON form `{"numer": [[e, "n/d"], ..], "denom": [..]}`.
    pub fn to_json(&self) -> Value {
        let terms = |p: &Poly, off: i64| -> Vec<Value> {
            p.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| json!([off + i as i64, fmt_rat(c)]))
                .collect()
        };
        json!({ "numer": terms(&self.num, self.shift), "denom": terms(&self.den, 0) })
    }

    /// Parses the JSON form; coefficients may be `"n/d"`, `"n"` or integers.
    pub fn from_json(v: &Value) -> Result<Self> {
        let read = |key: &str| -> Result<Vec<(i64, Rat)>> {
            let arr = v
                .get(key)
                .and_then(|a| a.as_array())
                .ok_or_else(|| Error::Parse(format!("missing array '{key}'")))?;
            arr.iter()
                .map(|t| {
                    let e = t
                        .get(0)
                        .and_then(|e| e.as_i64())
                        .ok_or_else(|| Error::Parse("bad exponent".into()))?;
                    let c = match t.get(1) {
                        Some(Value::String(s)) => parse_rat(s)?,
                        Some(Value::Number(n)) if n.is_i64() => ri(n.as_i64().unwrap()),
                        _ => return Err(Error::Parse("bad coefficient".into())),
                    };
                    Ok((e, c))
                })
                .collect()
        };
        Self::from_term_ratio(&read("numer")?, &read("denom")?)
    }
}

fn fmt_terms(p: &Poly, off: i64) -> String {
    let mut s = String::new();
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = off + i as i64;
        let neg = c.is_negative();
        let a = c.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let coef = if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        };
        match e {
            0 => s.push_str(&coef),
            _ => {
                if !a.is_one() {
                    s.push_str(&coef);
                    s.push('*');
                }
                if e == 1 {
                    s.push('X');
                } else {
                    s.push_str(&format!("X^{e}"));
                }
            }
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

impl fmt::Display for LaurentRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = fmt_terms(&self.num, self.shift);
        if self.is_laurent_poly() {
            write!(f, "{n}")
        } else {
            let multi = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1;
            if multi {
                write!(f, "({n})/({})", fmt_terms(&self.den, 0))
            } else {
                write!(f, "{n}/({})", fmt_terms(&self.den, 0))
            }
        }
    }
}

impl Serialize for LaurentRat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        LaurentRat::from_json(&v).map_err(serde::de::Error::custom)
    }
}

fn add_sub(a: &LaurentRat, b: &LaurentRat, sign: bool) -> LaurentRat {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if sign { b.clone() } else { -b };
    }
    let lo = a.shift.min(b.shift);
    let an = &a.num.shift_up((a.shift - lo) as usize) * &b.den;
    let bn = &b.num.shift_up((b.shift - lo) as usize) * &a.den;
    let n = if sign { &an + &bn } else { &an - &bn };
    if n.is_zero() {
        return LaurentRat::zero();
    }
    LaurentRat::build(lo, n, &a.den * &b.den)
}

impl Add for &LaurentRat {
    type Output = LaurentRat;
    fn add(self, o: &LaurentRat) -> LaurentRat {
        if self.den == o.den && !self.is_zero() && !o.is_zero() {
            let lo = self.shift.min(o.shift);
            let n = &self.num.shift_up((self.shift - lo) as usize)
                + &o.num.shift_up((o.shift - lo) as usize);
            if n.is_zero() {
                return LaurentRat::zero();
            }
            return LaurentRat::build(lo, n, self.den.clone());
        }
        add_sub(self, o, true)
    }
}

impl Sub for &LaurentRat {
    type Output = LaurentRat;
    fn sub(self, o: &LaurentRat) -> LaurentRat {
        self + &(-o)
    }
}

impl Mul for &LaurentRat {
    type Output = LaurentRat;
    fn mul(self, o: &LaurentRat) -> LaurentRat {
        if self.is_zero() || o.is_zero() {
            return LaurentRat::zero();
        }
        LaurentRat::build(self.shift + o.shift, &self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for &LaurentRat {
    type Output = LaurentRat;
    /// Panics on division by zero; use [`LaurentRat::inv`] for a fallible form.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &LaurentRat) -> LaurentRat {
        self * &o.inv().expect("division by the zero function")
    }
}

impl Neg for &LaurentRat {
    type Output = LaurentRat;
    fn neg(self) -> LaurentRat {
        LaurentRat {
            shift: self.shift,
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentRat {
            type Output = LaurentRat;
            fn $m(self, o: LaurentRat) -> LaurentRat {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for LaurentRat {
    type Output = LaurentRat;
    fn neg(self) -> LaurentRat {
        -&self
    }
}

/// Checked binary operation by name: `add`, `sub`, `mul`, `div`.
pub fn lr_arith(a: &LaurentRat, b: &LaurentRat, op: &str) -> Result<LaurentRat> {
    match op {
        "add" => Ok(a + b),
        "sub" => Ok(a - b),
        "mul" => Ok(a * b),
        "div" => Ok(a * &b.inv()?),
        _ => Err(Error::Precondition(format!("unknown operation '{op}'"))),
    }
}

/// Value of `f` at `X = p^(-s)`.
pub fn lr_eval(f: &LaurentRat, p: u64, s: i64) -> Result<Rat> {
    f.eval_s(p, s)
}

/// The unique polynomial in `X = p^(-s)` of degree at most `degree_bound`
/// through the samples `(s, v)`; extra samples must agree with it.
pub fn interpolate_poly(values: &[(i64, Rat)], p: u64, degree_bound: usize) -> Result<LaurentRat> {
    let mut pts: Vec<(Rat, Rat)> = Vec::new();
    for (s, v) in values {
        let x = pow_p(p, -*s);
        match pts.iter().find(|(y, _)| *y == x) {
            Some((_, w)) if w != v => {
                return Err(Error::Inconsistent(format!("two values at s = {s}")))
            }
            Some(_) => {}
            None => pts.push((x, v.clone())),
        }
    }
    if pts.len() < degree_bound + 1 {
        return Err(Error::Precondition(format!(
            "need {} distinct samples, got {}",
            degree_bound + 1,
            pts.len()
        )));
    }
    // Lagrange interpolation on the first degree_bound+1 points.
    let base = &pts[..degree_bound + 1];
    let mut acc = Poly::zero();
    for (i, (xi, yi)) in base.iter().enumerate() {
        let mut term = Poly::constant(yi.clone());
        for (j, (xj, _)) in base.iter().enumerate() {
            if i != j {
                let f = Poly::new(vec![-xj.clone(), Rat::one()]);
                term = (&term * &f).scale(&(xi - xj).recip());
            }
        }
        acc = &acc + &term;
    }
    for (x, y) in &pts[degree_bound + 1..] {
        if &acc.eval(x) != y {
            return Err(Error::Inconsistent(
                "samples do not lie on a polynomial of the given degree".into(),
            ));
        }
    }
    Ok(LaurentRat::from_poly(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn canonical_cancellation() {
        let a = LaurentRat::from_ints(&[1, -1]);
        let b = LaurentRat::from_ints(&[1, 1]);
        assert_eq!(&a * &b, LaurentRat::from_ints(&[1, 0, -1]));
        let f = LaurentRat::from_ints(&[1, 0, -3]);
        assert_eq!(&f / &f, LaurentRat::one());
    }

    #[test]
    fn binary_odd_zeta_simplifies() {
        // (1 - pX^2 - X + X) / ((1 - X)(1 - pX^2)) at p = 3
        let n = LaurentRat::from_ints(&[1, 0, -3]);
        let d = &LaurentRat::from_ints(&[1, -1]) * &LaurentRat::from_ints(&[1, 0, -3]);
        assert_eq!(&n / &d, LaurentRat::from_ints(&[1, -1]).inv().unwrap());
    }

    #[test]
    fn evaluation() {
        let f = LaurentRat::from_ints(&[1, -1]);
        assert_eq!(f.eval_s(3, 1).unwrap(), rat(2, 3));
        assert_eq!(f.eval_s(3, 0).unwrap(), rat(0, 1));
        let g = LaurentRat::from_terms(&[(0, ri(1)), (2, rat(-1, 25))]).inv().unwrap();
        assert_eq!(g.eval_s(5, 0).unwrap(), rat(25, 24));
        let h = LaurentRat::from_ints(&[1, -1]).inv().unwrap();
        assert_eq!(h.eval_s(3, 0), Err(Error::Pole));
    }

    #[test]
    fn interpolation() {
        let f = interpolate_poly(&[(0, ri(0)), (1, rat(2, 3))], 3, 1).unwrap();
        assert_eq!(f, LaurentRat::from_ints(&[1, -1]));
        let c = interpolate_poly(&[(0, ri(5)), (1, ri(5)), (2, ri(5))], 3, 2).unwrap();
        assert_eq!(c, LaurentRat::from_int(5));
        assert!(matches!(
            interpolate_poly(&[(0, ri(0)), (1, ri(1)), (2, ri(0))], 3, 1),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn substitutions_and_derivative() {
        let f = &LaurentRat::from_ints(&[1, 2]) / &LaurentRat::from_ints(&[1, -1]);
        let g = f.mul_xpow(-2);
        assert_eq!(
            LaurentRat::monomial(ri(1), -1).deriv_x(),
            LaurentRat::monomial(ri(-1), -2)
        );
        let u = LaurentRat::from_ints(&[1, -1]).inv().unwrap();
        assert_eq!(u.deriv_x(), u.pow(2).unwrap());
        let prod = (&f * &g).deriv_x();
        assert_eq!(prod, &(&f.deriv_x() * &g) + &(&f * &g.deriv_x()));
        let r = f.subst_recip(&ri(3)).subst_recip(&ri(3));
        assert_eq!(r, f);
        assert_eq!(f.subst_scale(&ri(2)).subst_scale(&rat(1, 2)), f);
    }

    #[test]
    fn json_roundtrip() {
        let f = (&LaurentRat::from_ints(&[1, 2]) / &LaurentRat::from_ints(&[1, -3])).mul_xpow(-1);
        let v = f.to_json();
        assert_eq!(LaurentRat::from_json(&v).unwrap(), f);
        assert_eq!(LaurentRat::from_ints(&[1, -1]).to_string(), "1 - X");
    }
}
