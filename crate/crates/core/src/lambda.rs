//! Volumes of discriminant kernels and their interpolation
//! `lambda_p(L; s) = vol SO'(L + H^s) / prod_{i=1}^{s} (1 - p^(-2i))`
//! as functions of `X = p^(-s)`.
//!
//! Values may carry a constant `p^(1/2)`, so they are [`SurdFn`]s.

use crate::counting::{beta_gram, beta_n1};
use crate::error::{Error, Result};
use crate::exact::{kronecker, legendre, pow_p, ri, Rat};
use crate::lattice::{Coset, DiagLattice, GramLattice};
use crate::laurent::LaurentRat;
use crate::surd::{Surd, SurdFn};
use num_traits::One;
use serde_json::{json, Value};

/// Which closed form produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaSource {
    /// Unimodular lattice at an odd prime.
    Unimodular,
    /// Cyclic discriminant group at an odd prime.
    Cyclic,
    /// Unit block of size at least two, scaled from a value at `s = 0`.
    UnitBlock,
    /// Even unimodular lattice at `p = 2`.
    EvenUnimodular2,
    /// Unimodular plus one unit line at `p = 2`.
    UnimodularLine2,
    /// Binary diagonal lattice at `p = 2`, value at `s = 0` only.
    Binary2,
}

impl LambdaSource {
    pub fn name(&self) -> &'static str {
        match self {
            LambdaSource::Unimodular => "unimodular",
            LambdaSource::Cyclic => "cyclic-discriminant",
            LambdaSource::UnitBlock => "unit-block-scaling",
            LambdaSource::EvenUnimodular2 => "even-unimodular-2",
            LambdaSource::UnimodularLine2 => "unimodular-plus-line-2",
            LambdaSource::Binary2 => "binary-2",
        }
    }

    /// The closed forms at `p = 2` are taken as stated, without a proof
    /// available to check them against.
    pub fn asserted_only(&self) -> bool {
        matches!(
            self,
            LambdaSource::EvenUnimodular2 | LambdaSource::UnimodularLine2 | LambdaSource::Binary2
        )
    }
}

/// A volume polynomial with its provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaValue {
    pub value: SurdFn,
    pub source: LambdaSource,
}

impl LambdaValue {
    /// Value at `s = 0`, i.e. `vol SO'(L)`.
    pub fn at_zero(&self) -> Result<Surd> {
        self.value.eval(&Rat::one())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lambda": self.value.f.to_json(),
            "lambda_sqrt_p": self.value.g.to_json(),
            "display": self.value.to_string(),
            "source": self.source.name(),
            "asserted_only": self.source.asserted_only(),
        })
    }
}

fn one_minus(c: Rat, k: i64) -> LaurentRat {
    LaurentRat::from_terms(&[(0, Rat::one()), (k, -c)])
}

/// `prod_{i=1}^{n} (1 - p^(-2i) X^2)`.
pub fn even_product(p: u64, n: i64) -> LaurentRat {
    let mut acc = LaurentRat::one();
    for i in 1..=n {
        acc = &acc * &one_minus(pow_p(p, -2 * i), 2);
    }
    acc
}

/// `vol SO(H^s) = (1 - p^-s) prod_{i=1}^{s-1} (1 - p^(-2i))`, `s >= 1`.
pub fn vol_so_hyperbolic(p: u64, s: u32) -> Rat {
    let s = s as i64;
    let mut v = Rat::one() - pow_p(p, -s);
    for i in 1..s {
        v *= Rat::one() - pow_p(p, -2 * i);
    }
    v
}

/// `H^t` as a Gram lattice.
pub fn hyperbolic_power(p: u64, t: usize) -> GramLattice {
    let mut g = GramLattice::hyperbolic(p);
    for _ in 1..t {
        g = g.direct_sum(&GramLattice::hyperbolic(p));
    }
    g
}

/// `vol SO(H^s)` from classical densities: embeddings of `H` into `H^t`
/// form one orbit for `t >= 2` and two `SO`-orbits for `t = 1`, so
/// `vol SO(H^s) = 1/2 prod_{t=1}^{s} beta(H^t, H)`. Works for every `p`,
/// including `p = 2`; `level` is the first enumeration level compared.
pub fn vol_so_hyperbolic_by_counting(p: u64, s: u32, level: u32) -> Result<Rat> {
    let h = GramLattice::hyperbolic(p);
    let mut v = Rat::new(1.into(), 2.into());
    for t in 1..=s as usize {
        let l = hyperbolic_power(p, t).int_form()?;
        v *= beta_gram(&l, &h, None, level)?;
    }
    Ok(v)
}

fn odd_only(l: &DiagLattice) -> Result<()> {
    if l.p() == 2 {
        Err(Error::PrimeTwo("diagonal volume formulas"))
    } else {
        Ok(())
    }
}

/// Unimodular `L` of rank `m` and discriminant `2^m eps`:
/// `prod_{i <= (m-1)/2} (1 - p^(-2i) X^2)`, times
/// `1 - ((-1)^(m/2) eps / p) p^(-m/2) X` for even `m`.
pub fn lambda_unimodular(l: &DiagLattice) -> Result<LambdaValue> {
    odd_only(l)?;
    if !l.is_unimodular() {
        return Err(Error::Precondition("lattice is not unimodular".into()));
    }
    let p = l.p();
    let m = l.dim() as i64;
    let mut f = even_product(p, (m - 1).div_euclid(2));
    if m % 2 == 0 && m > 0 {
        let sign = if (m / 2) % 2 == 0 { 1 } else { -1 };
        let c = legendre(sign * l.unit_product(), p);
        f = &f * &one_minus(ri(c as i64) * pow_p(p, -m / 2), 1);
    }
    Ok(LambdaValue { value: SurdFn::rational(p, f), source: LambdaSource::Unimodular })
}

/// Cyclic discriminant `p^nu`, `L = <eps_1, .., eps_(m-1), eps_m p^nu>`:
/// `p^(-nu (m-1)/2) X^nu prod_{i=1}^{m/2 - 1} (1 - p^(-2i) X^2)`, times
/// `1 - (eps/p) p^(-(m-1)/2) X` for odd `m`. For `m = 1` the interpolation
/// `X^nu / (1 + X)` holds for `s >= 1`.
pub fn lambda_cyclic(l: &DiagLattice) -> Result<LambdaValue> {
    odd_only(l)?;
    let p = l.p();
    let m = l.dim() as i64;
    let e = l.entries();
    let nonunit: Vec<_> = e.iter().filter(|x| x.exp > 0).collect();
    if nonunit.len() != 1 {
        return Err(Error::Precondition("discriminant group is not cyclic".into()));
    }
    let nu = nonunit[0].exp as i64;
    if m == 1 {
        let f = &LaurentRat::monomial(Rat::one(), nu) / &LaurentRat::from_ints(&[1, 1]);
        return Ok(LambdaValue { value: SurdFn::rational(p, f), source: LambdaSource::Cyclic });
    }
    let mut f = even_product(p, m / 2 - 1).mul_xpow(nu);
    if m % 2 == 1 {
        let units: i64 = e.iter().filter(|x| x.exp == 0).map(|x| x.unit).product();
        let sign = if ((m - 1) / 2) % 2 == 0 { 1 } else { -1 };
        let c = legendre(sign * units, p);
        f = &f * &one_minus(ri(c as i64) * pow_p(p, -(m - 1) / 2), 1);
    }
    let value = SurdFn::from_surd(&Surd::sqrt_pow(p, -nu * (m - 1)), &f);
    Ok(LambdaValue { value, source: LambdaSource::Cyclic })
}

/// For a unit block of size `k >= 2` and the value `lambda(L; 0)`:
/// `lambda(L; s) = lambda(L; 0) X^(v_p D) prod_{i <= (k-1)/2} (1 - p^(-2i) X^2)/(1 - p^(-2i))`,
/// times `(1 - (eps/p) p^(-k/2) X) / (1 - (eps/p) p^(-k/2))` for even `k`,
/// `eps = (-1)^(k/2) prod eps_i` over the block.
pub fn lambda_from_value_at_zero(l: &DiagLattice, at_zero: &Surd) -> Result<LambdaValue> {
    odd_only(l)?;
    let p = l.p();
    let block = l.block(0);
    let k = block.len() as i64;
    if k < 2 {
        return Err(Error::Precondition("needs a unit block of size at least 2".into()));
    }
    let mut f = LaurentRat::monomial(Rat::one(), l.disc_valuation() as i64);
    for i in 1..=(k - 1) / 2 {
        let c = pow_p(p, -2 * i);
        f = (&f * &one_minus(c.clone(), 2)).scale(&(Rat::one() / (Rat::one() - c)));
    }
    if k % 2 == 0 {
        let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
        let prod: i64 = block.iter().map(|x| x.unit).product();
        let c = ri(legendre(sign * prod, p) as i64) * pow_p(p, -k / 2);
        f = (&f * &one_minus(c.clone(), 1)).scale(&(Rat::one() / (Rat::one() - c)));
    }
    Ok(LambdaValue {
        value: SurdFn::from_surd(at_zero, &f),
        source: LambdaSource::UnitBlock,
    })
}

/// `lambda(L; s)` at an odd prime for the covered families: unimodular
/// lattices and lattices with cyclic discriminant group.
pub fn lambda_closed(l: &DiagLattice) -> Result<LambdaValue> {
    odd_only(l)?;
    if l.is_unimodular() {
        return lambda_unimodular(l);
    }
    if l.entries().iter().filter(|x| x.exp > 0).count() == 1 {
        return lambda_cyclic(l);
    }
    Err(Error::NotCovered(format!(
        "no closed volume formula for {l}; supply vol SO'(L) and use the unit-block scaling"
    )))
}

/// `lambda(L; s)` at `p = 2` for an even unimodular lattice of even rank `m`
/// and discriminant `eps`.
pub fn lambda2_even_unimodular(m: u32, eps: i64) -> Result<LambdaValue> {
    if m % 2 == 1 || m == 0 || eps % 2 == 0 {
        return Err(Error::Precondition("needs even rank and odd discriminant".into()));
    }
    let m = m as i64;
    let c = kronecker(eps, 2);
    let f = &even_product(2, (m - 1) / 2) * &one_minus(ri(c as i64) * pow_p(2, -m / 2), 1);
    Ok(LambdaValue { value: SurdFn::rational(2, f), source: LambdaSource::EvenUnimodular2 })
}

/// `lambda(L; s) = 2^(-s - (m-1)/2) prod_{i <= (m-1)/2} (1 - 2^(-2i) X^2)` at
/// `p = 2` for a unimodular lattice plus one unit line, total rank `m`.
pub fn lambda2_unimodular_line(m: u32) -> Result<LambdaValue> {
    if m == 0 {
        return Err(Error::Precondition("rank must be positive".into()));
    }
    let m = m as i64;
    let f = even_product(2, (m - 1) / 2).mul_xpow(1);
    let value = SurdFn::from_surd(&Surd::sqrt_pow(2, -(m - 1)), &f);
    Ok(LambdaValue { value, source: LambdaSource::UnimodularLine2 })
}

/// `vol SO'(<eps_1, eps_2>) = 1/2` at `p = 2`.
pub fn lambda2_binary_at_zero() -> Rat {
    Rat::new(1.into(), 2.into())
}

/// `vol SO'(L)` at an odd prime from counting: peel a unit line `<e>`, use
/// `vol SO'(L) = mu(L, <e>) vol SO'(e^perp) / (#orbits)` where unit
/// vectors form one orbit if the unit block has rank at least two and two
/// orbits of equal volume otherwise. Lines have volume one.
pub fn vol_so_prime_by_counting(l: &DiagLattice) -> Result<Surd> {
    odd_only(l)?;
    let p = l.p();
    if l.dim() <= 1 {
        return Ok(Surd::rational(p, Rat::one()));
    }
    let e = l.entries();
    if e[0].exp != 0 {
        return Err(Error::NotCovered(format!("{l} has no unit line to split off")));
    }
    let rest = DiagLattice::new(p, e[1..].to_vec())?;
    let k = l.block(0).len();
    let beta = beta_n1(l, &Coset::trivial(l), &ri(e[0].unit), 0, None)?;
    let mu = &Surd::sqrt_pow(p, -(l.disc_valuation() as i64)) * &Surd::rational(p, beta);
    let orbits = if k >= 2 { 1 } else { 2 };
    let v = &mu * &vol_so_prime_by_counting(&rest)?;
    Ok(&v * &Surd::rational(p, Rat::new(1.into(), orbits.into())))
}

/// `lambda(L; s) / lambda(perp; s)`, the volume of one orbit, which must be
/// a Laurent polynomial in `X`.
pub fn orbit_volume_ratio(l: &LambdaValue, perp: &LambdaValue) -> Result<SurdFn> {
    let r = l.value.div(&perp.value)?;
    if !(r.f.is_laurent_poly() && r.g.is_laurent_poly()) {
        return Err(Error::Inconsistent(format!("orbit volume {r} is not a polynomial")));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn diag(p: u64, pairs: &[(i64, u32)]) -> DiagLattice {
        DiagLattice::from_pairs(p, pairs).unwrap()
    }

    #[test]
    fn hyperbolic_volumes() {
        assert_eq!(vol_so_hyperbolic(3, 1), rat(2, 3));
        assert_eq!(vol_so_hyperbolic(3, 2), rat(64, 81));
        for s in 1..5 {
            let mut prod = Rat::one();
            for i in 1..=s as i64 {
                prod *= Rat::one() - pow_p(5, -2 * i);
            }
            assert_eq!((Rat::one() + pow_p(5, -(s as i64))) * vol_so_hyperbolic(5, s), prod);
        }
    }

    #[test]
    fn hyperbolic_volume_by_counting_odd() {
        assert_eq!(vol_so_hyperbolic_by_counting(3, 1, 1).unwrap(), rat(2, 3));
        assert_eq!(vol_so_hyperbolic_by_counting(3, 2, 1).unwrap(), rat(64, 81));
    }

    #[test]
    fn hyperbolic_volume_by_counting_at_two() {
        for s in 1..=2 {
            assert_eq!(vol_so_hyperbolic_by_counting(2, s, 2).unwrap(), vol_so_hyperbolic(2, s));
        }
    }

    #[test]
    fn unimodular_examples() {
        let l = diag(5, &[(1, 0), (1, 0), (1, 0)]);
        let v = lambda_unimodular(&l).unwrap();
        assert_eq!(v.value.f, one_minus(pow_p(5, -2), 2));
        // H has lambda = 1 - p^-1 X
        let h = diag(3, &[(1, 0), (-1, 0)]);
        assert_eq!(lambda_unimodular(&h).unwrap().value.f, one_minus(rat(1, 3), 1));
    }

    #[test]
    fn cyclic_example_m3() {
        // <e1, e2, e3 p>: lambda = p^-1 X (1 - (eps/p) p^-1 X), eps = -e1 e2
        let l = diag(5, &[(1, 0), (2, 0), (1, 1)]);
        let v = lambda_cyclic(&l).unwrap();
        let c = legendre(-2, 5) as i64;
        let expect = LaurentRat::monomial(rat(1, 5), 1);
        let expect = &expect * &one_minus(ri(c) * rat(1, 5), 1);
        assert!(v.value.is_rational());
        assert_eq!(v.value.f, expect);
    }

    #[test]
    fn counting_volumes_match_closed_forms() {
        for p in [3u64, 5] {
            for pairs in [
                vec![(1, 0), (1, 0)],
                vec![(1, 0), (2, 0)],
                vec![(1, 0), (1, 0), (1, 0)],
                vec![(1, 0), (2, 0), (1, 0), (1, 0)],
                vec![(1, 0), (1, 1)],
                vec![(1, 0), (2, 0), (1, 1)],
                vec![(1, 0), (2, 0), (2, 2)],
                vec![(1, 0), (1, 0), (2, 0), (1, 1)],
            ] {
                let l = diag(p, &pairs);
                let closed = lambda_closed(&l).unwrap().at_zero().unwrap();
                assert_eq!(vol_so_prime_by_counting(&l).unwrap(), closed, "p={p} {l}");
            }
        }
    }

    #[test]
    fn unit_block_scaling_matches_closed_forms() {
        for l in [
            diag(3, &[(1, 0), (1, 0), (1, 0)]),
            diag(5, &[(1, 0), (2, 0), (1, 0), (1, 0)]),
            diag(5, &[(1, 0), (2, 0), (1, 1)]),
            diag(7, &[(1, 0), (3, 0), (1, 0), (2, 3)]),
        ] {
            let c = lambda_closed(&l).unwrap();
            let s = lambda_from_value_at_zero(&l, &c.at_zero().unwrap()).unwrap();
            assert_eq!(s.value, c.value, "{l}");
        }
    }

    #[test]
    fn adding_a_hyperbolic_plane_shifts() {
        for l in [
            diag(3, &[(1, 0)]),
            diag(3, &[(1, 0), (1, 0), (1, 0)]),
            diag(5, &[(1, 0), (2, 0), (1, 1)]),
            diag(5, &[(2, 0), (1, 2)]),
        ] {
            let p = l.p();
            let a = lambda_closed(&l.add_hyperbolic(1).unwrap()).unwrap().value;
            let b = lambda_closed(&l).unwrap().value;
            let shifted = b.map(|f| f.subst_scale(&pow_p(p, -1)));
            let factor = SurdFn::rational(p, one_minus(pow_p(p, -2), 2));
            assert_eq!(a, &factor * &shifted, "{l}");
        }
    }

    #[test]
    fn even_rank_two_adic_forms_agree_with_hyperbolic_volumes() {
        // lambda(H^k; s) at s = 0 is vol SO(H^k)
        for k in 1..4u32 {
            let v = lambda2_even_unimodular(2 * k, if k % 2 == 0 { 1 } else { -1 }).unwrap();
            assert_eq!(v.at_zero().unwrap().to_rat().unwrap(), vol_so_hyperbolic(2, k));
        }
    }
}

