//! Rational generating functions from sequences (Berlekamp-Massey over Q).

use crate::exact::Rat;
use crate::laurent::LaurentRat;
use crate::poly::Poly;
use num_traits::{One, Zero};

/// Shortest linear recurrence `sum_{i=0}^{L} c_i s_{n-i} = 0` (`c_0 = 1`,
/// holding for `n >= L`) satisfied by the whole sequence, as the pair of
/// connection polynomial `C` and length `L`. `deg C < L` when the sequence
/// has a transient prefix.
pub fn berlekamp_massey(s: &[Rat]) -> (Poly, usize) {
    let mut c = vec![Rat::one()];
    let mut b = vec![Rat::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = Rat::one();
    for n in 0..s.len() {
        let mut d = s[n].clone();
        for i in 1..=l.min(c.len() - 1) {
            d += &c[i] * &s[n - i];
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = &d / &bd;
        let t = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, Rat::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + m] -= &coef * bi;
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = t;
            bd = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.truncate(l + 1);
    (Poly::new(c), l)
}

/// Rational function `P/C` whose expansion is `s`, accepted only when the
/// recurrence order `L` leaves at least `margin` terms beyond `2L` as a check.
pub fn guess_rational(s: &[Rat], margin: usize) -> Option<LaurentRat> {
    let (c, l) = berlekamp_massey(s);
    if s.len() < 2 * l + margin {
        return None;
    }
    // The recurrence holds from index l on, so C*S vanishes in degrees
    // l..len and P is its truncation below degree l.
    let prod = &c * &Poly::new(s.to_vec());
    let num: Vec<Rat> = prod.coeffs().iter().take(l).cloned().collect();
    if num.iter().all(|x| x.is_zero()) {
        return s.iter().all(|x| x.is_zero()).then(LaurentRat::zero);
    }
    let f = LaurentRat::from_parts(0, Poly::new(num), c).ok()?;
    if power_series(&f, s.len()).as_slice() == s {
        Some(f)
    } else {
        None
    }
}

/// First `n` coefficients of `f` from `X^0`, for `f` without a pole at 0.
pub fn power_series(f: &LaurentRat, n: usize) -> Vec<Rat> {
    let (sh, ser) = f.series(n);
    assert!(sh >= 0, "power_series of a function with a pole at 0");
    let mut out = vec![Rat::zero(); (sh as usize).min(n)];
    out.extend(ser.into_iter().take(n - out.len()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ri};

    #[test]
    fn recovers_geometric_and_fibonacci() {
        let g: Vec<Rat> = (0..12).map(|n| rat(1, 3i64.pow(n))).collect();
        let f = guess_rational(&g, 4).unwrap();
        assert_eq!(f, LaurentRat::from_terms(&[(0, ri(1)), (1, rat(-1, 3))]).inv().unwrap());
        let mut fib = vec![ri(0), ri(1)];
        for i in 2..16 {
            let x = &fib[i - 1] + &fib[i - 2];
            fib.push(x);
        }
        let f = guess_rational(&fib, 4).unwrap();
        assert_eq!(f, &LaurentRat::x() / &LaurentRat::from_ints(&[1, -1, -1]));
    }

    #[test]
    fn rejects_short_sequences() {
        let s: Vec<Rat> = vec![ri(1), ri(5), ri(2)];
        assert!(guess_rational(&s, 4).is_none());
    }
}
