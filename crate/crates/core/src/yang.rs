//! Closed-form local density of a diagonal lattice representing one number
//! at an odd prime, as a polynomial in `X = p^(-s)`.
//!
//! For `L = sum eps_i p^(l_i) x_i^2` and `k >= 1` let
//! `L(k,1) = {i : l_i < k, l_i - k odd}`, `l(k,1) = #L(k,1)`,
//! `d(k) = k + 1/2 sum_{l_i < k} (l_i - k)` and
//! `v(k) = (-1/p)^floor(l(k,1)/2) prod_{i in L(k,1)} (eps_i/p)`.
//! Half-integral powers of `p` are carried as [`Surd`]s and the final
//! coefficients are checked to be rational.

use crate::error::{Error, Result};
use crate::exact::{legendre, legendre_rat, pow_p, ri, val_rat, Rat};
use crate::lattice::DiagLattice;
use crate::laurent::LaurentRat;
use crate::surd::Surd;
use num_traits::{One, Zero};
use serde_json::{json, Value};

/// Invariants attached to one level `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YangRow {
    pub k: u32,
    /// Indices (in sorted lattice order) forming `L(k,1)`.
    pub odd_set: Vec<usize>,
    /// `2 d(k)`.
    pub d_twice: i64,
    /// `v(k)` in `{1, -1}`.
    pub v: i32,
}

impl YangRow {
    pub fn l_k1(&self) -> usize {
        self.odd_set.len()
    }

    /// `v(k) p^(d(k))`.
    pub fn weight(&self, p: u64) -> Surd {
        let s = Surd::sqrt_pow(p, self.d_twice);
        Surd::new(p, &s.a * ri(self.v as i64), &s.b * ri(self.v as i64))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "L_k1": self.odd_set,
            "l_k1": self.l_k1(),
            "d": crate::exact::fmt_rat(&Rat::new(self.d_twice.into(), 2.into())),
            "v": self.v,
        })
    }
}

fn check_input(l: &DiagLattice) -> Result<()> {
    if l.p() == 2 {
        return Err(Error::PrimeTwo("closed-form density"));
    }
    if l.dim() == 0 {
        return Err(Error::Precondition("empty lattice".into()));
    }
    Ok(())
}

/// The row for a single `k >= 1`.
pub fn yang_row(l: &DiagLattice, k: u32) -> YangRow {
    let p = l.p();
    let mut odd_set = Vec::new();
    let mut d_twice = 2 * k as i64;
    let mut chi = 1i32;
    for (i, e) in l.entries().iter().enumerate() {
        if e.exp < k {
            let diff = e.exp as i64 - k as i64;
            d_twice += diff;
            if diff.rem_euclid(2) == 1 {
                odd_set.push(i);
                chi *= legendre(e.unit, p);
            }
        }
    }
    let half = (odd_set.len() / 2) as u64;
    let v = chi * legendre(-1, p).pow(half as u32);
    YangRow { k, odd_set, d_twice, v }
}

/// Rows for `k = 1..=k_max`.
pub fn yang_invariants(l: &DiagLattice, k_max: u32) -> Result<Vec<YangRow>> {
    check_input(l)?;
    Ok((1..=k_max).map(|k| yang_row(l, k)).collect())
}

/// Result of [`yang_beta`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YangBeta {
    pub poly: LaurentRat,
    /// `v_p(q)`, or `None` for `q = 0`.
    pub a: Option<u32>,
    /// For `q = 0`: the sum was cut after `X^k_max`.
    pub truncated: bool,
    pub k_max: u32,
    pub rows: Vec<YangRow>,
}

impl YangBeta {
    pub fn to_json(&self) -> Value {
        json!({
            "poly": self.poly.to_json(),
            "display": self.poly.to_string(),
            "a": self.a,
            "series_truncated": self.truncated,
            "k_max": self.k_max,
            "rows": self.rows.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Adds `c * X^k` to the coefficient list.
fn push(terms: &mut Vec<(i64, Surd)>, k: u32, c: Surd) {
    terms.push((k as i64, c));
}

fn finish(p: u64, terms: Vec<(i64, Surd)>) -> Result<LaurentRat> {
    let mut rats = vec![(0, Rat::one())];
    for (k, c) in terms {
        let r = c.to_rat().map_err(|_| {
            Error::Inconsistent(format!("coefficient of X^{k} is irrational at p = {p}"))
        })?;
        rats.push((k, r));
    }
    Ok(LaurentRat::from_terms(&rats))
}

/// Density `beta(L, <q>; X)` for `q in Z_p`.
///
/// For `q = 0` the series is infinite and `k_max` selects the cut; for
/// `q != 0` the polynomial is exact and `k_max` is ignored.
pub fn yang_beta(l: &DiagLattice, q: &Rat, k_max: Option<u32>) -> Result<YangBeta> {
    check_input(l)?;
    let p = l.p();
    let one_minus = Surd::rational(p, Rat::one() - pow_p(p, -1));
    let mut terms = Vec::new();
    if q.is_zero() {
        let k_max = k_max.ok_or_else(|| {
            Error::Precondition("q = 0 needs an explicit cut k_max".into())
        })?;
        let rows = yang_invariants(l, k_max)?;
        for r in &rows {
            if r.l_k1() % 2 == 0 {
                push(&mut terms, r.k, &one_minus * &r.weight(p));
            }
        }
        return Ok(YangBeta {
            poly: finish(p, terms)?,
            a: None,
            truncated: true,
            k_max,
            rows,
        });
    }
    let a = val_rat(q, p).unwrap();
    if a < 0 {
        return Err(Error::Precondition("q must be p-integral".into()));
    }
    let a = a as u32;
    let alpha = legendre_rat(q, p);
    let rows = yang_invariants(l, a + 1)?;
    for r in &rows[..a as usize] {
        if r.l_k1() % 2 == 0 {
            push(&mut terms, r.k, &one_minus * &r.weight(p));
        }
    }
    let last = &rows[a as usize];
    let factor = if last.l_k1() % 2 == 0 {
        Surd::rational(p, -pow_p(p, -1))
    } else {
        let s = Surd::sqrt_pow(p, -1);
        Surd::new(p, &s.a * ri(alpha as i64), &s.b * ri(alpha as i64))
    };
    push(&mut terms, last.k, &factor * &last.weight(p));
    Ok(YangBeta {
        poly: finish(p, terms)?,
        a: Some(a),
        truncated: false,
        k_max: a + 1,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::beta_n1_poly;
    use crate::lattice::Coset;

    fn lattices(p: u64) -> Vec<DiagLattice> {
        let n = (2..p as i64).find(|&u| legendre(u, p) == -1).unwrap();
        let shapes: Vec<Vec<(i64, u32)>> = vec![
            vec![(1, 0)],
            vec![(n, 1)],
            vec![(1, 0), (1, 0)],
            vec![(1, 0), (n, 0)],
            vec![(1, 0), (1, 1)],
            vec![(1, 0), (n, 2)],
            vec![(n, 1), (1, 2)],
            vec![(1, 0), (1, 0), (n, 1)],
            vec![(1, 0), (n, 1), (1, 3)],
        ];
        shapes
            .iter()
            .map(|s| DiagLattice::from_pairs(p, s).unwrap())
            .collect()
    }

    #[test]
    fn matches_counting_for_nonzero_targets() {
        for p in [3u64, 5] {
            for l in lattices(p) {
                let kappa = Coset::trivial(&l);
                for q in [1i64, 2, 3, 6, 9, 18, 27, 25, 50] {
                    let q = ri(q);
                    let y = yang_beta(&l, &q, None).unwrap();
                    let c = beta_n1_poly(&l, &kappa, &q, None).unwrap();
                    assert_eq!(y.poly, c.poly, "p={p} L={l} q={q}");
                }
            }
        }
    }

    #[test]
    fn zero_target_matches_truncated_counts() {
        for p in [3u64, 5] {
            for l in lattices(p) {
                let kappa = Coset::trivial(&l);
                let k = 5;
                let y = yang_beta(&l, &Rat::zero(), Some(k)).unwrap();
                let c = beta_n1_poly(&l, &kappa, &Rat::zero(), Some(k + 1)).unwrap();
                for e in 0..=k as i64 {
                    assert_eq!(y.poly.coeff(e), c.poly.coeff(e), "p={p} L={l} X^{e}");
                }
            }
        }
    }

    #[test]
    fn rejects_even_prime_and_missing_cut() {
        let l = DiagLattice::from_pairs(3, &[(1, 0)]).unwrap();
        assert!(yang_beta(&l, &Rat::zero(), None).is_err());
        let l2 = DiagLattice::from_pairs(2, &[(1, 0)]).unwrap();
        assert!(matches!(yang_beta(&l2, &ri(1), None), Err(Error::PrimeTwo(_))));
    }
}
