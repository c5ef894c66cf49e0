//! Normalized local zeta functions `zeta_p(L; s) = (1/E) int |Q(v)|^(s-1) dv`
//! at odd primes, with `E` the volume of `{v : Q(v) a unit}`.
//!
//! The density of representing zero is `1 + (1 - p^-1) delta(X)`, where
//! `delta(X) = sum_{k >= 1, l(k,1) even} v(k) p^(d(k)) X^k` uses the level
//! invariants of [`crate::yang`]. Beyond the largest exponent these rows
//! repeat with period two and `d(k)` grows linearly, so `delta` is rational
//! and the zeta function follows in closed form for any dimension.

use crate::counting::{count_omega_blocks, BlockForm};
use crate::error::{Error, Result};
use crate::exact::{legendre, pow_p, ri, rint, Int, Rat};
use crate::lattice::DiagLattice;
use crate::laurent::LaurentRat;
use crate::series::guess_rational;
use crate::yang::{yang_row, YangRow};
use num_traits::{One, Zero};
use serde_json::{json, Value};

fn check(l: &DiagLattice) -> Result<()> {
    if l.p() == 2 {
        return Err(Error::PrimeTwo("local zeta functions"));
    }
    if l.min_exp() != Some(0) {
        return Err(Error::Precondition(
            "the form must have a unit diagonal entry".into(),
        ));
    }
    Ok(())
}

fn row_weight(p: u64, r: &YangRow) -> Result<Rat> {
    r.weight(p).to_rat()
}

/// Truncated expansion `sum_{1 <= k <= k_max, l(k,1) even} v(k) p^(d(k)) X^k`.
pub fn delta_expansion(l: &DiagLattice, k_max: u32) -> Result<LaurentRat> {
    check(l)?;
    let p = l.p();
    let mut terms = Vec::new();
    for k in 1..=k_max {
        let r = yang_row(l, k);
        if r.l_k1().is_multiple_of(2) {
            terms.push((k as i64, row_weight(p, &r)?));
        }
    }
    Ok(LaurentRat::from_terms(&terms))
}

/// `delta(X)` as an exact rational function.
pub fn delta_closed(l: &DiagLattice) -> Result<LaurentRat> {
    check(l)?;
    let p = l.p();
    let k0 = l.max_exp();
    let head = delta_expansion(l, k0)?;
    // For k > k0 the row at k + 2 is the row at k scaled by p^(2 - m).
    let ratio = pow_p(p, 2 - l.dim() as i64);
    let mut tail_num = Vec::new();
    for k in [k0 + 1, k0 + 2] {
        let r = yang_row(l, k);
        if r.l_k1().is_multiple_of(2) {
            tail_num.push((k as i64, row_weight(p, &r)?));
        }
    }
    let den = LaurentRat::from_terms(&[(0, Rat::one()), (2, -ratio)]);
    Ok(&head + &(&LaurentRat::from_terms(&tail_num) / &den))
}

/// `delta'(0)`: the weight of the row `k = 1` when it contributes.
pub fn delta_prime_zero(l: &DiagLattice) -> Result<Rat> {
    check(l)?;
    let r = yang_row(l, 1);
    if r.l_k1().is_multiple_of(2) {
        row_weight(l.p(), &r)
    } else {
        Ok(Rat::zero())
    }
}

/// `E = (1 - p^-1)(1 - delta'(0) p^-1)`.
pub fn unit_volume(l: &DiagLattice) -> Result<Rat> {
    let p = l.p();
    let pi = pow_p(p, -1);
    Ok((Rat::one() - &pi) * (Rat::one() - delta_prime_zero(l)? * pi))
}

/// `vol{v : Q(v) a unit}` directly from the count mod `p`.
pub fn unit_volume_by_count(l: &DiagLattice) -> Result<Rat> {
    let f = BlockForm::trivial(l);
    let zeros = count_omega_blocks(&f, &Rat::zero(), 1)?;
    Ok(Rat::one() - rint(Int::from(zeros)) * pow_p(l.p(), -(l.dim() as i64)))
}

/// Closed-form zeta function together with its ingredients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaClosed {
    /// Discriminant valuation.
    pub l: u32,
    /// `(-eps/p)` for a binary form `x^2 + eps p^l y^2`; `None` otherwise.
    pub chi: Option<i32>,
    pub value: LaurentRat,
    pub delta: LaurentRat,
    pub e: Rat,
}

impl ZetaClosed {
    pub fn to_json(&self) -> Value {
        json!({
            "l": self.l,
            "chi": self.chi,
            "zeta": self.value.to_json(),
            "display": self.value.to_string(),
            "delta": self.delta.to_json(),
            "E": crate::exact::fmt_rat(&self.e),
        })
    }
}

/// `zeta_p(L; s)` in `X = p^(-s)` for any diagonal form at an odd prime,
/// from `int |Q|^(s-1) = ((1 - X) + beta(X)(pX - 1)) / (pX(1 - X))`.
pub fn zeta_closed(l: &DiagLattice) -> Result<ZetaClosed> {
    check(l)?;
    let p = l.p();
    let delta = delta_closed(l)?;
    let beta = &LaurentRat::one() + &delta.scale(&(Rat::one() - pow_p(p, -1)));
    let x = LaurentRat::x();
    let one = LaurentRat::one();
    let px = x.scale(&ri(p as i64));
    let num = &(&one - &x) + &(&beta * &(&px - &one));
    let den = &px * &(&one - &x);
    let e = unit_volume(l)?;
    let value = (&num / &den).scale(&(Rat::one() / &e));
    let chi = binary_chi(l);
    Ok(ZetaClosed { l: l.disc_valuation(), chi, value, delta, e })
}

fn binary_chi(l: &DiagLattice) -> Option<i32> {
    if l.dim() != 2 {
        return None;
    }
    let e = l.entries();
    Some(legendre(-e[0].unit * e[1].unit, l.p()))
}

/// The three binary cases `l = 0`, `l` odd and `l >= 2` even, written out
/// as sums of geometric pieces.
pub fn zeta2_closed(l: &DiagLattice) -> Result<ZetaClosed> {
    check(l)?;
    if l.dim() != 2 {
        return Err(Error::Precondition("binary form required".into()));
    }
    let p = l.p();
    let lv = l.entries()[1].exp as i64;
    let c = binary_chi(l).unwrap();
    let cr = ri(c as i64);
    let x = LaurentRat::x();
    let one = LaurentRat::one();
    let one_minus_x = &one - &x;
    let one_minus_cx = &one - &x.scale(&cr);
    let px2 = LaurentRat::monomial(ri(p as i64), 2);
    let one_minus_px2 = &one - &px2;
    let pw = |k: i64| px2.pow(k).unwrap();
    // (1 - (pX^2)^a - X + X (pX^2)^(a-1)) / ((1 - X)(1 - pX^2))
    let geometric = |a: i64| {
        let top = &(&(&one - &pw(a)) - &x) + &(&x * &pw(a - 1));
        &top / &(&one_minus_x * &one_minus_px2)
    };
    let value = if lv == 0 {
        &one / &(&one_minus_x * &one_minus_cx)
    } else if lv % 2 == 1 {
        geometric((lv + 1) / 2)
    } else {
        let h = lv / 2;
        let lead = &LaurentRat::monomial(pow_p(p, h), lv)
            - &LaurentRat::monomial(pow_p(p, h - 1), lv - 1);
        &(&lead / &(&one_minus_x * &one_minus_cx)) + &geometric(h)
    };
    Ok(ZetaClosed {
        l: lv as u32,
        chi: Some(c),
        value,
        delta: delta_closed(l)?,
        e: unit_volume(l)?,
    })
}

/// Counting-based zeta function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaCounts {
    /// Number of levels counted.
    pub terms: u32,
    /// `V(i) = Omega(i) / p^(i m)`, the volume of `{Q = 0 mod p^i}`.
    pub volumes: Vec<Rat>,
    /// Rational function in `X` fitted to the volumes, when the recurrence
    /// is confirmed by surplus terms.
    pub fitted: Option<LaurentRat>,
}

/// Volumes `V(0..=terms)` of `{v : Q(v) = 0 mod p^i}` by counting.
pub fn zero_volumes(l: &DiagLattice, terms: u32) -> Result<Vec<Rat>> {
    let f = BlockForm::trivial(l);
    let m = l.dim() as i64;
    (0..=terms)
        .map(|i| {
            let c = count_omega_blocks(&f, &Rat::zero(), i)?;
            Ok(rint(Int::from(c)) * pow_p(l.p(), -(i as i64) * m))
        })
        .collect()
}

/// Zeta function from solution counts: `int |Q|^t = sum (V(i) - V(i+1)) Y^i`
/// with `Y = p^(-t) = pX`, fitted as a rational function of `Y`.
pub fn zeta_from_counts(l: &DiagLattice, terms: u32) -> Result<ZetaCounts> {
    check(l)?;
    let p = l.p();
    let volumes = zero_volumes(l, terms)?;
    let e = &volumes[0] - &volumes[1];
    let fitted = guess_rational(&volumes, 4).map(|g| {
        // sum (V(i) - V(i+1)) Y^i = G - (G - V(0)) / Y
        let y = LaurentRat::x();
        let shifted = &(&g - &LaurentRat::constant(volumes[0].clone())) / &y;
        (&g - &shifted).subst_scale(&ri(p as i64)).scale(&(Rat::one() / &e))
    });
    Ok(ZetaCounts { terms, volumes, fitted })
}

/// `zeta_p(L; s)` at an integer `s >= 1` as a rigorous enclosure
/// `[lower, upper]` from the first `terms` levels; `exact` is filled in when
/// the fitted rational function is available.
pub fn zeta_value_from_counts(l: &DiagLattice, s: i64, terms: u32) -> Result<(Rat, Rat, Option<Rat>)> {
    if s < 1 {
        return Err(Error::Precondition("the tail is summable only for s >= 1".into()));
    }
    let zc = zeta_from_counts(l, terms)?;
    let p = l.p();
    let y = pow_p(p, 1 - s);
    let v = &zc.volumes;
    let e = &v[0] - &v[1];
    let mut partial = Rat::zero();
    let mut yi = Rat::one();
    for i in 0..terms as usize {
        partial += (&v[i] - &v[i + 1]) * &yi;
        yi *= &y;
    }
    // remaining terms are nonnegative and sum to at most Y^terms V(terms)
    let upper = &partial + &yi * &v[terms as usize];
    let exact = match &zc.fitted {
        Some(f) => Some(f.eval_s(p, s)?),
        None => None,
    };
    Ok((partial / &e, upper / &e, exact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn binary(p: u64, eps: i64, l: u32) -> DiagLattice {
        DiagLattice::from_pairs(p, &[(1, 0), (eps, l)]).unwrap()
    }

    #[test]
    fn binary_cases_agree_with_general_closed_form() {
        for p in [3u64, 5, 7] {
            for eps in [1i64, 2, 3] {
                if (eps as u64).is_multiple_of(p) {
                    continue;
                }
                for l in 0..=5 {
                    let lat = binary(p, eps, l);
                    assert_eq!(
                        zeta2_closed(&lat).unwrap().value,
                        zeta_closed(&lat).unwrap().value,
                        "p={p} eps={eps} l={l}"
                    );
                }
            }
        }
    }

    #[test]
    fn odd_discriminant_one_simplifies() {
        let z = zeta2_closed(&binary(3, 1, 1)).unwrap();
        assert_eq!(z.value, LaurentRat::from_ints(&[1, -1]).inv().unwrap());
    }

    #[test]
    fn unit_volume_matches_count() {
        for p in [3u64, 5] {
            for pairs in [vec![(1, 0)], vec![(1, 0), (1, 0)], vec![(1, 0), (2, 0)], vec![(1, 0), (1, 1), (2, 2)]] {
                let l = DiagLattice::from_pairs(p, &pairs).unwrap();
                assert_eq!(unit_volume(&l).unwrap(), unit_volume_by_count(&l).unwrap());
            }
        }
    }

    #[test]
    fn delta_vanishes_at_zero_and_matches_truncation() {
        let l = DiagLattice::from_pairs(5, &[(1, 0), (2, 1), (1, 3)]).unwrap();
        let d = delta_closed(&l).unwrap();
        assert_eq!(d.eval(&Rat::zero()).unwrap(), Rat::zero());
        let t = delta_expansion(&l, 9).unwrap();
        let ser = crate::series::power_series(&d, 10);
        for k in 0..10 {
            assert_eq!(ser[k], t.coeff(k as i64));
        }
    }

    #[test]
    fn counts_reproduce_closed_form() {
        for (p, eps, l) in [(3u64, 1i64, 0u32), (3, 2, 2), (5, 2, 3), (7, 3, 4)] {
            let lat = binary(p, eps, l);
            let zc = zeta_from_counts(&lat, 16).unwrap();
            assert_eq!(zc.fitted.unwrap(), zeta2_closed(&lat).unwrap().value, "p={p} l={l}");
        }
        let one = DiagLattice::from_pairs(3, &[(1, 0)]).unwrap();
        let (lo, hi, exact) = zeta_value_from_counts(&one, 2, 12).unwrap();
        let ex = exact.unwrap();
        assert!(lo <= ex && ex <= hi);
        assert_eq!(ex, zeta_closed(&one).unwrap().value.eval_s(3, 2).unwrap());
        assert!(ex > rat(0, 1));
    }
}
