//! Orbits of `SO'(L)` on vectors of a given length, their orthogonal
//! complements and volumes, and exact checks of the orbit equation
//! `lambda(L)^-1 mu(L, <q>) = sum_orbits lambda(perp)^-1` and of Kitaoka's
//! product formula.
//!
//! Two censuses are provided. [`census_unimodular`] lists the
//! `floor(j/2) + 1` orbits on a unimodular lattice directly.
//! [`census_bruteforce`] partitions the solutions of `Q(x) = q mod p^k`
//! under the group generated by products of two reflections in unit-length
//! vectors. That group lies in `SO'`, but need not be all of it, so the
//! brute-force count is an upper bound.

use crate::counting::{beta_gram, beta_gram_level, beta_n1, mu_from_beta, BlockForm, MuData};
use crate::error::{check_guard, Error, Result};
use crate::exact::{
    legendre_rat, pow_p, ri, rint, sqrt_mod_pk, unit_residue, val_i64, val_int, val_rat, Int, Rat,
};
use crate::lambda::{hyperbolic_power, lambda_closed, orbit_volume_ratio};
use crate::lattice::{Coset, DiagLattice, GramLattice, IntForm};
use crate::laurent::LaurentRat;
use crate::report::Check;
use crate::surd::{Surd, SurdFn};
use crate::yang::yang_beta;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

/// How a census was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusMethod {
    /// Orbits listed by saturation on a unimodular lattice.
    ClosedForm,
    /// Closure under reflection pairs on residues mod `p^k` (upper bound).
    BruteForce,
}

/// One orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub representative: Vec<Int>,
    /// Diagonal form of the orthogonal complement, when it could be computed.
    pub perp: Option<DiagLattice>,
    /// Number of solutions mod `p^k` in the orbit (brute force only).
    pub points: Option<u64>,
    /// The orbit's share of `beta(L, <q>)` from the point count (brute force only).
    pub density_at_zero: Option<Rat>,
    /// Orbit volume at `s = 0` from the point count (brute force only).
    pub volume_at_zero: Option<Surd>,
    /// `lambda(L; s) / lambda(perp; s)` where closed forms exist.
    pub volume: Option<SurdFn>,
}

impl Orbit {
    pub fn to_json(&self) -> Value {
        json!({
            "representative": self.representative.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "perp": self.perp.as_ref().map(|l| l.to_json()),
            "points": self.points,
            "density_at_zero": self.density_at_zero.as_ref().map(crate::exact::fmt_rat),
            "volume_at_zero": self.volume_at_zero.as_ref().map(|v| v.to_string()),
            "volume": self.volume.as_ref().map(|v| v.to_string()),
        })
    }
}

/// Orbits of `SO'(L)` on `{x in L : Q(x) = q}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCensus {
    pub p: u64,
    pub q: Rat,
    pub method: CensusMethod,
    pub orbits: Vec<Orbit>,
    /// Level at which the brute-force partition agreed with the next one.
    pub stabilized_at_k: Option<u32>,
}

impl OrbitCensus {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "q": crate::exact::fmt_rat(&self.q),
            "method": match self.method {
                CensusMethod::ClosedForm => "closed-form",
                CensusMethod::BruteForce => "oracle (upper bound)",
            },
            "count": self.orbits.len(),
            "stabilized_at_k": self.stabilized_at_k,
            "orbits": self.orbits.iter().map(|o| o.to_json()).collect::<Vec<_>>(),
        })
    }
}

fn odd_nonzero(l: &DiagLattice, q: &Rat) -> Result<u32> {
    if l.p() == 2 {
        return Err(Error::PrimeTwo("orbit censuses"));
    }
    match val_rat(q, l.p()) {
        None => Err(Error::Precondition("q must be nonzero".into())),
        Some(a) if a < 0 => Err(Error::Precondition("q must be p-integral".into())),
        Some(a) => Ok(a as u32),
    }
}

/// Orthogonal complement of a nonzero vector `v`, diagonalized at `p`.
///
/// With a pivot `j` of minimal valuation in `G v`, the vectors
/// `e_i - (G v)_i / (G v)_j e_j` (`i != j`) form a `Z_p`-basis of the
/// complement.
pub fn perp_of(l: &DiagLattice, v: &[Int]) -> Result<DiagLattice> {
    let p = l.p();
    let e = l.entries();
    let g: Vec<Rat> = e.iter().map(|d| ri(2 * d.unit) * pow_p(p, d.exp as i64)).collect();
    let lv: Vec<Rat> = g.iter().zip(v).map(|(gi, vi)| gi * rint(vi.clone())).collect();
    let piv = (0..lv.len())
        .filter_map(|i| val_rat(&lv[i], p).map(|x| (x, i)))
        .min()
        .ok_or_else(|| Error::Precondition("zero vector has no complement".into()))?
        .1;
    let idx: Vec<usize> = (0..lv.len()).filter(|&i| i != piv).collect();
    let c: Vec<Rat> = idx.iter().map(|&i| &lv[i] / &lv[piv]).collect();
    let n = idx.len();
    let mut gram = vec![vec![Rat::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let mut x = &c[a] * &c[b] * &g[piv];
            if a == b {
                x += &g[idx[a]];
            }
            gram[a][b] = x;
        }
    }
    GramLattice::new(p, gram)?.diagonalize()
}

/// Adjusts one coordinate of a primitive `v` (a unit coordinate on the unit
/// block) so that `Q(v) = q mod p^n`. Returns `None` when no such coordinate
/// exists or the adjustment has no root.
pub fn lift_to_length(l: &DiagLattice, v: &[Int], q: &Rat, n: u32) -> Option<Vec<Int>> {
    let p = l.p();
    let e = l.entries();
    let pi = Int::from(p);
    let j = (0..v.len()).find(|&i| e[i].exp == 0 && !v[i].is_multiple_of(&pi))?;
    let mut rest = Rat::zero();
    for (i, d) in e.iter().enumerate() {
        if i != j {
            rest += ri(d.unit) * pow_p(p, d.exp as i64) * rint(&v[i] * &v[i]);
        }
    }
    let t = (q - rest) / ri(e[j].unit);
    if val_rat(&t, p) != Some(0) || legendre_rat(&t, p) != 1 {
        return None;
    }
    let pn = p.pow(n);
    let r = sqrt_mod_pk(unit_residue(&t, p, pn), p, n)?;
    let want = v[j].mod_floor(&pi).to_u64()?;
    let r = if r % p == want { r } else { pn - r };
    let mut out = v.to_vec();
    out[j] = Int::from(r);
    Some(out)
}

/// A primitive vector of length `q` on a unimodular lattice of rank at least 3.
fn primitive_of_length(l: &DiagLattice, q: &Rat, n: u32) -> Result<Vec<Int>> {
    let p = l.p() as i64;
    let m = l.dim();
    for a in 0..p {
        for b in 0..p {
            let mut v = vec![Int::zero(); m];
            v[0] = Int::one();
            v[1] = Int::from(a);
            v[2] = Int::from(b);
            if let Some(w) = lift_to_length(l, &v, q, n) {
                return Ok(w);
            }
        }
    }
    Err(Error::Inconsistent(format!("no primitive vector of length {q} on {l}")))
}

fn closed_volume(l: &DiagLattice, perp: &DiagLattice) -> Option<SurdFn> {
    let a = lambda_closed(l).ok()?;
    let b = lambda_closed(perp).ok()?;
    orbit_volume_ratio(&a, &b).ok()
}

/// The `floor(j/2) + 1` orbits of vectors of length `q = eps p^j` on a
/// unimodular lattice of rank at least 3: the vectors `p^i v` with `v`
/// primitive of length `q / p^(2i)`.
pub fn census_unimodular(l: &DiagLattice, q: &Rat) -> Result<OrbitCensus> {
    let j = odd_nonzero(l, q)?;
    if !l.is_unimodular() || l.dim() < 3 {
        return Err(Error::Precondition("needs a unimodular lattice of rank at least 3".into()));
    }
    let p = l.p();
    let mut orbits = Vec::new();
    for i in 0..=j / 2 {
        let qi = q * pow_p(p, -2 * i as i64);
        let v = primitive_of_length(l, &qi, j - 2 * i + 3)?;
        let perp = perp_of(l, &v)?;
        let scale = Int::from(p).pow(i);
        orbits.push(Orbit {
            representative: v.iter().map(|x| x * &scale).collect(),
            volume: closed_volume(l, &perp),
            perp: Some(perp),
            points: None,
            density_at_zero: None,
            volume_at_zero: None,
        });
    }
    Ok(OrbitCensus { p, q: q.clone(), method: CensusMethod::ClosedForm, orbits, stabilized_at_k: None })
}

/// A class of residues mod `p^k` with `t = v_p(G x)` constant on it.
struct Class {
    rep: Vec<u64>,
    points: u64,
    depth: u32,
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let parent = self.0[x as usize];
            self.0[x as usize] = self.0[parent as usize];
            x = parent;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi as usize] = lo;
        }
    }
}

fn residue(r: &Rat, m: u64) -> u64 {
    let mm = Int::from(m);
    let num = r.numer().mod_floor(&mm).to_u64().unwrap();
    let den = r.denom().mod_floor(&mm).to_u64().unwrap();
    let inv = crate::exact::inv_mod(den, m).expect("value is not p-integral");
    (num as u128 * inv as u128 % m as u128) as u64
}

/// Reflection-pair generators `tau_w tau_w0` as matrices mod `p^k`, for `w`
/// in `[0, p)^m` with first nonzero entry 1 and `Q(w)` a unit.
fn generators(coef: &[u64], p: u64, pk: u64) -> Vec<Vec<Vec<u64>>> {
    let m = coef.len();
    let mulm = |a: u64, b: u64| (a as u128 * b as u128 % pk as u128) as u64;
    let mut ws = Vec::new();
    let mut w = vec![0u64; m];
    for _ in 0..p.pow(m as u32) {
        if let Some(first) = w.iter().position(|&x| x != 0) {
            let qw = w.iter().zip(coef).fold(0, |s, (&x, &c)| (s + mulm(c, mulm(x, x))) % pk);
            if w[first] == 1 && qw % p != 0 {
                ws.push((w.clone(), crate::exact::inv_mod(qw, pk).unwrap()));
            }
        }
        for c in w.iter_mut() {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
    }
    // tau_w[i][j] = delta_ij - w_i (2 c_j w_j) / Q(w)
    let refl = |w: &[u64], inv: u64| -> Vec<Vec<u64>> {
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let t = mulm(mulm(w[i], mulm(2 * coef[j] % pk, w[j])), inv);
                        ((i == j) as u64 + pk - t) % pk
                    })
                    .collect()
            })
            .collect()
    };
    let matmul = |a: &Vec<Vec<u64>>, b: &Vec<Vec<u64>>| -> Vec<Vec<u64>> {
        (0..m)
            .map(|i| (0..m).map(|j| (0..m).fold(0, |s, k| (s + mulm(a[i][k], b[k][j])) % pk)).collect())
            .collect()
    };
    let Some((w0, inv0)) = ws.first().cloned() else { return Vec::new() };
    let t0 = refl(&w0, inv0);
    ws[1..].iter().map(|(w, inv)| matmul(&refl(w, *inv), &t0)).collect()
}

/// Partition of the solutions mod `p^k` into classes, as `(representative
/// coordinates, size)` sorted by representative.
/// Only residues that reduce from true solutions are kept: with
/// `t = v_p(G x)` (`t < k`), a residue lifts exactly when
/// `Q(x) = q mod p^(k+t)`. Classes are returned with their `t`.
fn partition(l: &DiagLattice, q: &Rat, k: u32) -> Result<Vec<Class>> {
    let p = l.p();
    let m = l.dim();
    let pk = p.checked_pow(k).filter(|x| x.checked_pow(m as u32).is_some()).ok_or_else(|| {
        Error::SizeGuard { work: u128::MAX, limit: crate::error::size_guard() }
    })?;
    let coef: Vec<u64> = l
        .entries()
        .iter()
        .map(|e| residue(&(ri(e.unit) * pow_p(p, e.exp as i64)), pk))
        .collect();
    let gens = generators(&coef, p, pk);
    check_guard((pk as u128).pow(m as u32 - 1) * (gens.len() as u128 + 1))?;
    let mulm = |a: u64, b: u64| (a as u128 * b as u128 % pk as u128) as u64;
    let qr = residue(q, pk);
    // last coordinate by table lookup
    let mut table: Vec<Vec<u64>> = vec![Vec::new(); pk as usize];
    for x in 0..pk {
        table[mulm(coef[m - 1], mulm(x, x)) as usize].push(x);
    }
    let pk2 = pk as u128 * pk as u128;
    let coef2: Vec<u128> = l
        .entries()
        .iter()
        .map(|e| residue(&(ri(e.unit) * pow_p(p, e.exp as i64)), pk2 as u64) as u128)
        .collect();
    let exps: Vec<u32> = l.exps();
    let qr2 = residue(q, pk2 as u64) as u128;
    let depth = |x: &[u64]| -> u32 {
        x.iter()
            .zip(&exps)
            .map(|(&c, &e)| if c == 0 { k } else { e + val_i64(c as i64, p).unwrap() })
            .min()
            .unwrap()
            .min(k)
    };
    let lifts = |x: &[u64], t: u32| -> bool {
        let qx = x.iter().zip(&coef2).fold(0u128, |s, (&c, &a)| (s + a * (c as u128 * c as u128 % pk2)) % pk2);
        (qx + pk2 - qr2).is_multiple_of((p as u128).pow(k + t))
    };
    let mut keys: Vec<(u64, u32)> = Vec::new();
    let mut pre = vec![0u64; m - 1];
    let encode = |x: &[u64]| x.iter().rev().fold(0u64, |s, &c| s * pk + c);
    for _ in 0..pk.pow(m as u32 - 1) {
        let part = pre.iter().zip(&coef).fold(0, |s, (&x, &c)| (s + mulm(c, mulm(x, x))) % pk);
        for &last in &table[((qr + pk - part) % pk) as usize] {
            let mut x = pre.clone();
            x.push(last);
            let t = depth(&x);
            if t < k && lifts(&x, t) {
                keys.push((encode(&x), t));
            }
        }
        for c in pre.iter_mut() {
            *c += 1;
            if *c < pk {
                break;
            }
            *c = 0;
        }
    }
    keys.sort_unstable();
    let decode = |mut key: u64| -> Vec<u64> {
        (0..m)
            .map(|_| {
                let c = key % pk;
                key /= pk;
                c
            })
            .collect()
    };
    let mut uf = UnionFind((0..keys.len() as u32).collect());
    let image = |g: &Vec<Vec<u64>>, key: u64| -> Option<u32> {
        let x = decode(key);
        let y: Vec<u64> =
            (0..m).map(|i| (0..m).fold(0, |s, j| (s + mulm(g[i][j], x[j])) % pk)).collect();
        let key = encode(&y);
        keys.binary_search_by_key(&key, |e| e.0).ok().map(|i| i as u32)
    };
    for g in &gens {
        #[cfg(feature = "parallel")]
        let imgs: Vec<Option<u32>> = {
            use rayon::prelude::*;
            keys.par_iter().map(|&(key, _)| image(g, key)).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let imgs: Vec<Option<u32>> = keys.iter().map(|&(key, _)| image(g, key)).collect();
        for (i, img) in imgs.into_iter().enumerate() {
            let img = img.ok_or_else(|| {
                Error::Inconsistent("a reflection pair moved a solution off the level set".into())
            })?;
            uf.union(i as u32, img);
        }
    }
    let mut sizes = std::collections::BTreeMap::new();
    for i in 0..keys.len() as u32 {
        *sizes.entry(uf.find(i)).or_insert(0u64) += 1;
    }
    // roots are the smallest index of their class, hence the smallest key
    Ok(sizes
        .into_iter()
        .map(|(r, n)| {
            let (key, t) = keys[r as usize];
            Class { rep: decode(key), points: n, depth: t }
        })
        .collect())
}

/// Share of `beta(L, <q>)` carried by a class: each residue stands for a
/// ball whose image under `Q` is `Q(x) + p^(k+t) Z_p`, so it contributes
/// `p^(-km) p^(k+t)`.
fn class_density(l: &DiagLattice, k: u32, c: &Class) -> Rat {
    let m = l.dim() as i64;
    ri(c.points as i64) * pow_p(l.p(), k as i64 * (1 - m) + c.depth as i64)
}

/// `|d(L)|^(1/2) |d(M)|^((2-m)/2) beta` for `M = <q>` with `v_p(q) = a`.
fn line_volume(l: &DiagLattice, a: u32, beta: Rat) -> Surd {
    let p = l.p();
    let m = l.dim() as i64;
    let c = Surd::sqrt_pow(p, -(l.disc_valuation() as i64) + a as i64 * (m - 2));
    &c * &Surd::rational(p, beta)
}

fn orbit_from_class(l: &DiagLattice, q: &Rat, a: u32, k: u32, c: &Class) -> Orbit {
    let p = l.p();
    let rep: Vec<Int> = c.rep.iter().map(|&x| Int::from(x)).collect();
    let i = rep.iter().filter(|x| !x.is_zero()).filter_map(|x| val_int(x, p)).min().unwrap_or(0);
    let scale = Int::from(p).pow(i);
    let prim: Vec<Int> = rep.iter().map(|x| x / &scale).collect();
    let qi = q * pow_p(p, -2 * i as i64);
    let prec = (a - 2 * i) + l.max_exp() + 3;
    let perp = lift_to_length(l, &prim, &qi, prec).and_then(|v| perp_of(l, &v).ok());
    let density = class_density(l, k, c);
    Orbit {
        volume: perp.as_ref().and_then(|pp| closed_volume(l, pp)),
        perp,
        points: Some(c.points),
        volume_at_zero: Some(line_volume(l, a, density.clone())),
        density_at_zero: Some(density),
        representative: rep,
    }
}

/// Census by closure under reflection pairs on the solutions mod `p^k`.
///
/// Starting from `k` (default `v_p(2q) + 1 + max exponent`) the partition is
/// recomputed at `k + 1` until orbit sizes, normalized to volumes, agree;
/// with an explicit `k` only `k` and `k + 1` are compared. Trivial coset only.
pub fn census_bruteforce(l: &DiagLattice, q: &Rat, k: Option<u32>) -> Result<OrbitCensus> {
    let a = odd_nonzero(l, q)?;
    let p = l.p();
    let start = k.unwrap_or(a + 1 + l.max_exp());
    let tries = if k.is_some() { 1 } else { 3 };
    let volumes = |k: u32, cls: &[Class]| {
        let mut v: Vec<String> = cls.iter().map(|c| class_density(l, k, c).to_string()).collect();
        v.sort();
        v
    };
    let mut cur = partition(l, q, start)?;
    for kk in start..start + tries {
        let next = partition(l, q, kk + 1)?;
        if volumes(kk, &cur) == volumes(kk + 1, &next) {
            let orbits = cur.iter().map(|c| orbit_from_class(l, q, a, kk, c)).collect();
            return Ok(OrbitCensus {
                p,
                q: q.clone(),
                method: CensusMethod::BruteForce,
                orbits,
                stabilized_at_k: Some(kk),
            });
        }
        cur = next;
    }
    Err(Error::NotStabilized(format!(
        "orbit partition of {l} at q = {q} changed between levels {start} and {}",
        start + tries
    )))
}

/// `mu(L, <q>; s)` in `X` from the Yang polynomial.
pub fn mu_line(l: &DiagLattice, q: &Rat) -> Result<SurdFn> {
    let beta = yang_beta(l, q, None)?;
    Ok(mu_from_beta(&MuData::for_line(&BlockForm::trivial(l), q)?, &beta.poly))
}

/// `lambda(L; s)^-1 mu(L, <q>; s)` and `sum lambda(perp; s)^-1` over the
/// closed-form census, as functions of `X`, for a unimodular `L`.
pub fn orbit_equation_sides(l: &DiagLattice, q: &Rat) -> Result<(SurdFn, SurdFn, usize)> {
    let census = census_unimodular(l, q)?;
    let lam = lambda_closed(l)?.value;
    let lhs = mu_line(l, q)?.div(&lam)?;
    let mut rhs = SurdFn::rational(l.p(), LaurentRat::zero());
    for o in &census.orbits {
        let perp = o.perp.as_ref().expect("closed census carries perps");
        rhs = &rhs + &lambda_closed(perp)?.value.inv()?;
    }
    Ok((lhs, rhs, census.len()))
}

/// The interpolated orbit equation as an exact identity in `X`.
pub fn verify_orbit_equation(l: &DiagLattice, q: &Rat) -> Result<Check> {
    let (lhs, rhs, n) = orbit_equation_sides(l, q)?;
    Ok(Check::eq(format!("orbit equation {l}, q = {q}, {n} orbits"), &lhs, &rhs))
}

/// The two sides of the orbit equation for a unimodular `L` of odd rank
/// `m >= 3` and `q = eps p^a`, written out as explicit rational functions:
/// for odd `a`
/// `E(X)^-1 X^-a p^(a(m-2)/2) (1 + (1-1/p) sum_{k<=(a-1)/2} p^((2-m)k) X^(2k) - p^((2-m)(a+1)/2-1) X^(a+1))`
/// against `sum_{i<=(a+1)/2} X^-(2i-1) p^((2i-1)(m-2)/2) F(X)^-1`, and for even `a`
/// `E(X)^-1 X^-a p^(a(m-2)/2) (1 + (1-1/p) sum_{k<=a/2} p^((2-m)k) X^(2k) + c p^(((2-m)(a+1)-1)/2) X^(a+1))`
/// against `(1/(1 - c p^(-(m-1)/2) X) + sum_{k<=a/2} X^(-2k) p^(k(m-2))) F(X)^-1`,
/// where `E = prod_{i<=(m-1)/2} (1 - p^(-2i) X^2)`, `F = prod_{j<=(m-3)/2} (1 - p^(-2j) X^2)`
/// and `c = ((-1)^((m-1)/2) eps eps' / p)` with `eps'` the unit product of `L`.
pub fn unimodular_line_displays(l: &DiagLattice, q: &Rat) -> Result<(SurdFn, SurdFn)> {
    let a = odd_nonzero(l, q)? as i64;
    let m = l.dim() as i64;
    if !l.is_unimodular() || m < 3 || m % 2 == 0 {
        return Err(Error::Precondition("needs a unimodular lattice of odd rank at least 3".into()));
    }
    let p = l.p();
    let mono = |c: Rat, k: i64| LaurentRat::monomial(c, k);
    let one_minus = |c: Rat, k: i64| LaurentRat::from_terms(&[(0, Rat::one()), (k, -c)]);
    let e = crate::lambda::even_product(p, (m - 1) / 2);
    let f = crate::lambda::even_product(p, (m - 3) / 2);
    let one_m = Rat::one() - pow_p(p, -1);
    let mut bracket = LaurentRat::one();
    let top = if a % 2 == 1 { (a - 1) / 2 } else { a / 2 };
    for k in 1..=top {
        bracket = &bracket + &mono(&one_m * pow_p(p, (2 - m) * k), 2 * k);
    }
    let eps = q * pow_p(p, -a);
    let sign = if ((m - 1) / 2) % 2 == 0 { 1 } else { -1 };
    let c = legendre_rat(&(eps * ri(sign * l.unit_product())), p) as i64;
    let rhs;
    if a % 2 == 1 {
        bracket = &bracket - &mono(pow_p(p, (2 - m) * (a + 1) / 2 - 1), a + 1);
        let mut sum = SurdFn::rational(p, LaurentRat::zero());
        for i in 1..=(a + 1) / 2 {
            let t = SurdFn::from_surd(&Surd::sqrt_pow(p, (2 * i - 1) * (m - 2)), &mono(Rat::one(), 1 - 2 * i));
            sum = &sum + &t;
        }
        rhs = &sum * &SurdFn::rational(p, f.inv()?);
    } else {
        bracket = &bracket + &mono(ri(c) * pow_p(p, ((2 - m) * (a + 1) - 1) / 2), a + 1);
        let mut sum = one_minus(ri(c) * pow_p(p, -(m - 1) / 2), 1).inv()?;
        for k in 1..=a / 2 {
            sum = &sum + &mono(pow_p(p, k * (m - 2)), -2 * k);
        }
        rhs = SurdFn::rational(p, &sum * &f.inv()?);
    }
    let lhs = SurdFn::from_surd(&Surd::sqrt_pow(p, a * (m - 2)), &(&e.inv()? * &bracket).mul_xpow(-a));
    Ok((lhs, rhs))
}

/// Checks the written-out displays against the census computation and
/// against each other.
pub fn verify_unimodular_line(l: &DiagLattice, q: &Rat) -> Result<Vec<Check>> {
    let (dl, dr) = unimodular_line_displays(l, q)?;
    let (lhs, rhs, _) = orbit_equation_sides(l, q)?;
    Ok(vec![
        Check::eq(format!("{l}, q = {q}: displayed left side"), &dl, &lhs),
        Check::eq(format!("{l}, q = {q}: displayed right side"), &dr, &rhs),
        Check::eq(format!("{l}, q = {q}: displayed identity"), &dl, &dr),
    ])
}

/// The orbit equation at `s = 0` on a brute-force census: for every orbit
/// `vol SO'(perp) * (orbit volume) = vol SO'(L)`, and
/// `vol SO'(L)^-1 mu(L, <q>) = sum vol SO'(perp)^-1` with `mu` counted
/// independently. On unimodular lattices of rank at least 3 the orbit count
/// is also compared with `floor(j/2) + 1`.
pub fn verify_orbit_equation_elementary(l: &DiagLattice, q: &Rat, k: Option<u32>) -> Result<Vec<Check>> {
    let census = census_bruteforce(l, q, k)?;
    let p = l.p();
    let vol_l = lambda_closed(l)?.at_zero()?;
    let mut checks = Vec::new();
    let mut sum = Surd::rational(p, Rat::zero());
    for (i, o) in census.orbits.iter().enumerate() {
        let perp = o.perp.as_ref().ok_or_else(|| {
            Error::NotCovered(format!("complement of orbit {i} could not be computed"))
        })?;
        let vol_perp = lambda_closed(perp)?.at_zero()?;
        let ov = o.volume_at_zero.clone().unwrap();
        checks.push(Check::eq(
            format!("{l}, q = {q}, orbit {i} (perp {perp}): vol(perp) * orbit volume"),
            &(&vol_perp * &ov),
            &vol_l,
        ));
        sum = &sum + &vol_perp.inv()?;
    }
    let a = odd_nonzero(l, q)?;
    let beta = beta_n1(l, &Coset::trivial(l), q, 0, None)?;
    let mu = &Surd::sqrt_pow(p, -(l.disc_valuation() as i64) + a as i64 * (l.dim() as i64 - 2))
        * &Surd::rational(p, beta);
    checks.push(Check::eq(format!("{l}, q = {q}: vol(L)^-1 mu = sum vol(perp)^-1"), &(&mu * &vol_l.inv()?), &sum));
    if l.is_unimodular() && l.dim() >= 3 {
        checks.push(Check::eq(
            format!("{l}, q = {q}: orbit count"),
            &(census.len() as u64),
            &(a as u64 / 2 + 1),
        ));
    }
    Ok(checks)
}

fn diag_gram(p: u64, qs: &[i64]) -> Result<GramLattice> {
    let rows: Vec<Vec<i64>> = (0..qs.len())
        .map(|i| (0..qs.len()).map(|j| if i == j { 2 * qs[i] } else { 0 }).collect())
        .collect();
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    GramLattice::from_ints(p, &refs)
}

/// Kitaoka's formula for `M = <q1> + <q2>` by counting alone:
/// `beta(L, M) = sum_i (d(K_i^perp) / (d(N) d(L)))^(1/2) beta(L, N; K_i) beta(K_i^perp, <q2>)`
/// with `N = <q1>`, the orbits `K_i` and their densities from the
/// brute-force census, and `beta(L, M)` enumerated as pairs at `level`.
pub fn verify_kitaoka_classical(l: &DiagLattice, q1: i64, q2: i64, level: u32) -> Result<Check> {
    let p = l.p();
    let lhs = beta_gram(&IntForm::from(l), &diag_gram(p, &[q1, q2])?, None, level)?;
    let census = census_bruteforce(l, &ri(q1), None)?;
    let vn = val_rat(&ri(2 * q1), p).unwrap();
    let mut rhs = Surd::rational(p, Rat::zero());
    for o in &census.orbits {
        let perp = o.perp.as_ref().ok_or_else(|| Error::NotCovered("orbit complement".into()))?;
        let beta_orbit = o.density_at_zero.clone().unwrap();
        let beta_perp = beta_n1(perp, &Coset::trivial(perp), &ri(q2), 0, None)?;
        let f = Surd::sqrt_pow(p, vn + l.disc_valuation() as i64 - perp.disc_valuation() as i64);
        rhs = &rhs + &(&f * &Surd::rational(p, beta_orbit * beta_perp));
    }
    let lhs = Surd::rational(p, lhs);
    Ok(Check::eq(
        format!("Kitaoka {l}, M = <{q1}, {q2}>, {} orbits", census.len()),
        &lhs,
        &rhs,
    ))
}

/// The interpolated form at an integer `s`:
/// `lambda(L; s)^-1 mu(L, M; s) = sum_i lambda(K_i^perp; s)^-1 mu(K_i^perp, <q2>; s)`
/// for `M = <q1> + <q2>` and a unimodular `L`. The left side is counted on
/// `L + H^s` at the given enumeration level; when `stabilize` is set the next
/// level must agree. The right side uses the closed-form census and closed
/// forms for `lambda` and `mu`.
pub fn verify_kitaoka_interpolated(
    l: &DiagLattice,
    q1: i64,
    q2: i64,
    s: u32,
    level: u32,
    stabilize: bool,
) -> Result<Check> {
    let p = l.p();
    let m = l.dim() as i64 + 2 * s as i64;
    let form = l.to_gram().direct_sum(&hyperbolic_power(p, s as usize));
    let form = if s == 0 { l.to_gram() } else { form };
    let lf = form.int_form()?;
    let mg = diag_gram(p, &[q1, q2])?;
    let beta = if stabilize {
        beta_gram(&lf, &mg, None, level)?
    } else {
        beta_gram_level(&lf, &mg, None, level)?
    };
    // mu = |d(L)| |d(M)|^((3 - m)/2) beta, with d(M) = 4 q1 q2
    let vm = val_rat(&ri(4 * q1 * q2), p).unwrap();
    let pref = Surd::sqrt_pow(p, -2 * l.disc_valuation() as i64 - vm * (3 - m));
    let x = pow_p(p, -(s as i64));
    let lam = lambda_closed(l)?.value.eval(&x)?;
    let lhs = &(&pref * &Surd::rational(p, beta)) * &lam.inv()?;
    let census = census_unimodular(l, &ri(q1))?;
    let mut rhs = Surd::rational(p, Rat::zero());
    for o in &census.orbits {
        let perp = o.perp.as_ref().unwrap();
        let lp = lambda_closed(perp)?.value.eval(&x)?;
        let mu = mu_line(perp, &ri(q2))?.eval(&x)?;
        rhs = &rhs + &(&mu * &lp.inv()?);
    }
    Ok(Check::eq(format!("interpolated Kitaoka {l}, M = <{q1}, {q2}>, s = {s}"), &lhs, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(p: u64, pairs: &[(i64, u32)]) -> DiagLattice {
        DiagLattice::from_pairs(p, pairs).unwrap()
    }

    fn ones(p: u64, m: usize) -> DiagLattice {
        DiagLattice::unimodular(p, &vec![1; m]).unwrap()
    }

    #[test]
    fn complement_shapes() {
        let l = ones(3, 3);
        let perp = perp_of(&l, &[Int::from(1), Int::zero(), Int::zero()]).unwrap();
        assert!(perp.isometric(&ones(3, 2)));
        let l = diag(5, &[(1, 0), (2, 0), (1, 1)]);
        let perp = perp_of(&l, &[Int::zero(), Int::zero(), Int::from(1)]).unwrap();
        assert!(perp.isometric(&diag(5, &[(1, 0), (2, 0)])));
    }

    #[test]
    fn closed_census_counts() {
        for p in [3u64, 5] {
            let l = ones(p, 3);
            for j in 0..6u32 {
                let q = pow_p(p, j as i64) * ri(2);
                let c = census_unimodular(&l, &q).unwrap();
                assert_eq!(c.len() as u32, j / 2 + 1);
                for (i, o) in c.orbits.iter().enumerate() {
                    let perp = o.perp.as_ref().unwrap();
                    assert_eq!(perp.disc_valuation(), j - 2 * i as u32);
                    assert_eq!(l.q_value(&o.representative) % Int::from(p).pow(j + 1),
                        rint_to_int(&q) % Int::from(p).pow(j + 1));
                }
            }
        }
    }

    fn rint_to_int(r: &Rat) -> Int {
        r.to_integer()
    }

    #[test]
    fn bruteforce_examples() {
        let l = ones(3, 3);
        let c = census_bruteforce(&l, &ri(1), None).unwrap();
        assert_eq!(c.len(), 1);
        let c = census_bruteforce(&l, &ri(9), None).unwrap();
        assert_eq!(c.len(), 2);
        let empty = census_bruteforce(&diag(3, &[(1, 0)]), &ri(2), None).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn single_orbit_volume_is_the_density() {
        let l = ones(3, 3);
        let c = census_bruteforce(&l, &ri(1), None).unwrap();
        let beta = beta_n1(&l, &Coset::trivial(&l), &ri(1), 0, None).unwrap();
        assert_eq!(c.orbits[0].volume_at_zero.clone().unwrap(), Surd::rational(3, beta));
    }

    #[test]
    fn orbit_volumes_add_up() {
        let l = ones(3, 3);
        let c = census_bruteforce(&l, &ri(9), None).unwrap();
        let total = c.orbits.iter().fold(Surd::rational(3, Rat::zero()), |s, o| &s + o.volume_at_zero.as_ref().unwrap());
        let beta = beta_n1(&l, &Coset::trivial(&l), &ri(9), 0, None).unwrap();
        let mu = &Surd::sqrt_pow(3, 2) * &Surd::rational(3, beta);
        assert_eq!(total, mu);
    }

    #[test]
    fn displays_match_census() {
        for p in [3u64, 5] {
            for units in [vec![1, 1, 1], vec![1, 2, 1, 1, 1]] {
                let l = DiagLattice::unimodular(p, &units).unwrap();
                for a in 0..=4 {
                    for eps in [1, 2] {
                        let q = ri(eps) * pow_p(p, a);
                        for c in verify_unimodular_line(&l, &q).unwrap() {
                            assert!(c.holds, "{c}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn elementary_equation_small() {
        for q in [1, 2, 3, 6, 9] {
            for c in verify_orbit_equation_elementary(&ones(3, 3), &ri(q), None).unwrap() {
                assert!(c.holds, "{c}");
            }
        }
    }

    #[test]
    fn kitaoka_unit_lines() {
        let l = DiagLattice::unimodular(3, &[1, -1, 1, -1]).unwrap();
        let c = verify_kitaoka_classical(&l, 1, 1, 1).unwrap();
        assert!(c.holds, "{c}");
    }

    #[test]
    fn kitaoka_interpolated_small() {
        let l = DiagLattice::unimodular(3, &[1, -1, 1, -1, 1]).unwrap();
        let c = verify_kitaoka_interpolated(&l, 1, 1, 0, 1, true).unwrap();
        assert!(c.holds, "{c}");
    }
}
