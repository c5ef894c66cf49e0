//! Solution counts of quadratic congruences and classical densities.
//!
//! `count_omega` returns `#{v mod p^j : Q(v + kappa) = q mod p^j}`. The
//! target and coset are scaled by `p^nu` (with `p^nu` the order of the
//! coset) so that every value lives in `Z/p^(j+nu)`.
//!
//! For odd `p` and coordinates with trivial coset component, the value
//! distribution of a sum is constant on the classes
//! `{0} and {p^v r : r unit, (r/p) = chi}` of `Z/p^K`, so it is stored per
//! class and convolved with a closed-form class table. Coordinates with a
//! nontrivial coset component, and everything at `p = 2`, use dense arrays
//! over `Z/p^K`.

use crate::error::{check_guard, Error, Result};
use crate::exact::{legendre, mod_int, pow_p, ri, rint, val_rat, Int, Rat};
use crate::lattice::{Coset, DiagLattice, GramLattice, IntForm};
use crate::laurent::LaurentRat;
use crate::surd::{Surd, SurdFn};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

/// One orthogonal block of a form prepared for counting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    /// `unit * p^exp * (x + num/p^exp)^2`.
    Diag { unit: i64, exp: u32, num: u64 },
    /// `p^exp * x * y` (a scaled hyperbolic plane), trivial coset.
    Hyp { exp: u32 },
}

/// Orthogonal sum of blocks over `Z_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockForm {
    pub p: u64,
    pub blocks: Vec<Block>,
}

impl BlockForm {
    /// Diagonal lattice with a coset.
    pub fn from_diag(l: &DiagLattice, kappa: &Coset) -> Result<Self> {
        if kappa.comps.len() != l.dim() {
            return Err(Error::Precondition("coset dimension mismatch".into()));
        }
        Ok(BlockForm {
            p: l.p(),
            blocks: l
                .entries()
                .iter()
                .zip(&kappa.comps)
                .map(|(e, &(c, _))| Block::Diag {
                    unit: e.unit,
                    exp: e.exp,
                    num: c,
                })
                .collect(),
        })
    }

    /// Diagonal lattice with the trivial coset.
    pub fn trivial(l: &DiagLattice) -> Self {
        Self::from_diag(l, &Coset::trivial(l)).unwrap()
    }

    /// Splits an integral form into diagonal terms and scaled `xy` planes.
    pub fn from_int_form(f: &IntForm) -> Result<Self> {
        let m = f.dim();
        let mut used = vec![false; m];
        let mut blocks = Vec::new();
        for i in 0..m {
            if used[i] {
                continue;
            }
            let partners: Vec<usize> = (0..m)
                .filter(|&j| j != i && (f.a[i.min(j)][i.max(j)] != 0))
                .collect();
            if partners.is_empty() {
                let a = f.a[i][i];
                if a == 0 {
                    return Err(Error::Singular);
                }
                let v = crate::exact::val_i64(a, f.p).unwrap();
                blocks.push(Block::Diag {
                    unit: a / (f.p as i64).pow(v),
                    exp: v,
                    num: 0,
                });
                used[i] = true;
            } else if partners.len() == 1 {
                let j = partners[0];
                let others: Vec<usize> = (0..m)
                    .filter(|&k| k != i && k != j && f.a[j.min(k)][j.max(k)] != 0)
                    .collect();
                if f.a[i][i] != 0 || f.a[j][j] != 0 || !others.is_empty() {
                    return Err(Error::NotCovered(
                        "form is not a sum of diagonal terms and xy planes".into(),
                    ));
                }
                let c = f.a[i.min(j)][i.max(j)];
                // p^v * u * xy is isometric to p^v * xy by rescaling y
                let v = crate::exact::val_i64(c, f.p).unwrap();
                blocks.push(Block::Hyp { exp: v });
                used[i] = true;
                used[j] = true;
            } else {
                return Err(Error::NotCovered(
                    "form is not a sum of diagonal terms and xy planes".into(),
                ));
            }
        }
        Ok(BlockForm { p: f.p, blocks })
    }

    /// Appends `s` planes `xy`.
    pub fn with_hyperbolic(&self, s: usize) -> Self {
        let mut b = self.clone();
        for _ in 0..s {
            b.blocks.push(Block::Hyp { exp: 0 });
        }
        b
    }

    pub fn dim(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| match b {
                Block::Diag { .. } => 1,
                Block::Hyp { .. } => 2,
            })
            .sum()
    }

    /// `log_p` of the coset order.
    pub fn coset_exp(&self) -> u32 {
        self.blocks
            .iter()
            .filter_map(|b| match *b {
                Block::Diag { exp, num, .. } if num != 0 => {
                    Some(exp - crate::exact::val_i64(num as i64, self.p).unwrap())
                }
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Valuation of the Gram determinant `d(L)`.
    pub fn disc_valuation(&self) -> u32 {
        let two = u32::from(self.p == 2);
        self.blocks
            .iter()
            .map(|b| match *b {
                Block::Diag { exp, .. } => exp + two,
                Block::Hyp { exp } => 2 * exp,
            })
            .sum()
    }

    /// `p^nu Q(kappa)` modulo `p^K`, the constant part of the scaled form.
    fn scaled_term(&self, b: &Block, nu: u32, x: u64, k: u32) -> u64 {
        let p = self.p as i128;
        let pk = p.pow(k);
        match *b {
            Block::Diag { unit, exp, num } => {
                let u = (unit as i128).rem_euclid(pk);
                if num == 0 {
                    let x2 = (x as i128 * x as i128).rem_euclid(pk);
                    return (u * p.pow(nu + exp).rem_euclid(pk) % pk * x2 % pk) as u64;
                }
                // reduce num / p^exp to lowest terms c / p^e
                let t = crate::exact::val_i64(num as i64, self.p).unwrap();
                let (c, e) = (num as i128 / p.pow(t), exp - t);
                let y = (p.pow(e) * x as i128 + c).rem_euclid(pk);
                (u * p.pow(nu + exp - 2 * e) % pk * (y * y % pk) % pk) as u64
            }
            Block::Hyp { .. } => unreachable!(),
        }
    }
}

fn phi_pk(p: u64, k: u32) -> u128 {
    if k == 0 {
        1
    } else {
        (p as u128 - 1) * (p as u128).pow(k - 1)
    }
}

/// Class index helpers on `Z/p^K`: 0 is the zero class, `1 + 2v + s` is
/// `p^v * unit` with `s = 0` for residues and `s = 1` for non-residues.
struct Classes {
    p: u64,
    k: u32,
    eps_m1: i32,
}

impl Classes {
    fn new(p: u64, k: u32) -> Self {
        Classes {
            p,
            k,
            eps_m1: legendre(-1, p),
        }
    }

    fn count(&self) -> usize {
        1 + 2 * self.k as usize
    }

    fn idx(v: u32, chi: i32) -> usize {
        1 + 2 * v as usize + usize::from(chi == -1)
    }

    fn parts(i: usize) -> (u32, i32) {
        let j = i - 1;
        ((j / 2) as u32, if j.is_multiple_of(2) { 1 } else { -1 })
    }

    fn size(&self, i: usize) -> u128 {
        if i == 0 {
            1
        } else {
            let (v, _) = Self::parts(i);
            phi_pk(self.p, self.k - v) / 2
        }
    }

    fn class_of(&self, t: u64) -> usize {
        if t == 0 {
            return 0;
        }
        let mut v = 0;
        let mut u = t;
        while u.is_multiple_of(self.p) {
            u /= self.p;
            v += 1;
        }
        Self::idx(v, legendre(u as i64, self.p))
    }

    /// `#{r in F_p^*, r != u : (r/p) = ca, ((u - r)/p) = cb}` for `(u/p) = cu`.
    fn residue_pairs(&self, cu: i32, ca: i32, cb: i32) -> u128 {
        let p = self.p as i64;
        let u = (1..p).find(|&x| legendre(x, self.p) == cu).unwrap();
        (1..p)
            .filter(|&r| r != u)
            .filter(|&r| legendre(r, self.p) == ca && legendre(u - r, self.p) == cb)
            .count() as u128
    }

    /// For a fixed `c` in class `ci`, the list of `(class B, #{a in A : c - a in B})`.
    fn table(&self) -> Vec<Vec<Vec<(usize, u128)>>> {
        let n = self.count();
        let mut pairs = [[[0u128; 2]; 2]; 2];
        for (i, cu) in [1, -1].iter().enumerate() {
            for (j, ca) in [1, -1].iter().enumerate() {
                for (l, cb) in [1, -1].iter().enumerate() {
                    pairs[i][j][l] = self.residue_pairs(*cu, *ca, *cb);
                }
            }
        }
        let ci = |c: i32| usize::from(c == -1);
        let mut t = vec![vec![Vec::new(); n]; n];
        for c in 0..n {
            for a in 0..n {
                let out = &mut t[c][a];
                let sa = self.size(a);
                if a == 0 {
                    out.push((c, 1));
                    continue;
                }
                let (al, xa) = Self::parts(a);
                if c == 0 {
                    out.push((Self::idx(al, self.eps_m1 * xa), sa));
                    continue;
                }
                let (ga, xc) = Self::parts(c);
                if al < ga {
                    out.push((Self::idx(al, self.eps_m1 * xa), sa));
                } else if al > ga {
                    out.push((c, sa));
                } else {
                    let kk = self.k - ga;
                    let lift = (self.p as u128).pow(kk - 1);
                    for xb in [1, -1] {
                        let cnt = lift * pairs[ci(xc)][ci(xa)][ci(xb)];
                        if cnt > 0 {
                            out.push((Self::idx(ga, xb), cnt));
                        }
                    }
                    if xa == xc {
                        for b in 1..kk {
                            let cnt = phi_pk(self.p, kk - b) / 2;
                            out.push((Self::idx(ga + b, 1), cnt));
                            out.push((Self::idx(ga + b, -1), cnt));
                        }
                        out.push((0, 1));
                    }
                }
            }
        }
        t
    }
}

/// Per-element counts of `unit * p^scale * x^2`, `x mod p^j`, over the
/// classes of `Z/p^K`.
fn coord_classes(cl: &Classes, unit: i64, scale: u32, j: u32) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); cl.count()];
    let chi = legendre(unit, cl.p);
    out[0] += 1u32;
    for i in 0..j {
        let v = scale + 2 * i;
        let n = phi_pk(cl.p, j - i);
        if v >= cl.k {
            out[0] += n;
        } else {
            let idx = Classes::idx(v, chi);
            out[idx] += n / cl.size(idx);
        }
    }
    out
}

fn convolve_classes(
    cl: &Classes,
    table: &[Vec<Vec<(usize, u128)>>],
    a: &[BigUint],
    b: &[BigUint],
) -> Vec<BigUint> {
    let n = cl.count();
    let one = |c: usize| -> BigUint {
        let mut acc = BigUint::zero();
        for ai in 0..n {
            if a[ai].is_zero() {
                continue;
            }
            let mut inner = BigUint::zero();
            for &(bi, cnt) in &table[c][ai] {
                if !b[bi].is_zero() {
                    inner += &b[bi] * BigUint::from(cnt);
                }
            }
            acc += &a[ai] * inner;
        }
        acc
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(one).collect()
    }
}

/// Number of `(x, y) mod p^l` with `xy = n mod p^l`.
pub fn hyperbolic_count(p: u64, n: u64, l: u32) -> u128 {
    if l == 0 {
        return 1;
    }
    let pl = (p as u128).pow(l);
    let base = pl - pl / p as u128;
    let n = n as u128 % pl;
    if n == 0 {
        l as u128 * base + pl
    } else {
        let mut v = 0;
        let mut m = n;
        while m.is_multiple_of(p as u128) {
            m /= p as u128;
            v += 1;
        }
        (v + 1) * base
    }
}

/// Dense value distribution of one block over `Z/p^K`, `x mod p^j`.
fn dense_block(f: &BlockForm, b: &Block, nu: u32, j: u32, k: u32) -> Result<Vec<u128>> {
    let p = f.p;
    let pk = p.pow(k) as usize;
    let mut out = vec![0u128; pk];
    match *b {
        Block::Diag { .. } => {
            check_guard(p.pow(j) as u128)?;
            for x in 0..p.pow(j) {
                out[f.scaled_term(b, nu, x, k) as usize] += 1;
            }
        }
        Block::Hyp { exp } => {
            let e = nu + exp;
            for (t, slot) in out.iter_mut().enumerate() {
                let t = t as u64;
                if e >= k {
                    if t == 0 {
                        *slot = (p as u128).pow(2 * j);
                    }
                    continue;
                }
                let pe = p.pow(e);
                if !t.is_multiple_of(pe) {
                    continue;
                }
                let l = k - e;
                let c = hyperbolic_count(p, t / pe, l);
                *slot = c * (p as u128).pow(2 * (j - l));
            }
        }
    }
    Ok(out)
}

fn convolve_dense(a: &[u128], b: &[u128]) -> Result<Vec<u128>> {
    let n = a.len();
    check_guard((n as u128) * (n as u128))?;
    let overflow = || Error::Precondition("count exceeds 128-bit range".into());
    let one = |c: usize| -> Result<u128> {
        let mut acc = 0u128;
        for (x, &ax) in a.iter().enumerate() {
            if ax == 0 {
                continue;
            }
            let y = (c + n - x) % n;
            if b[y] != 0 {
                acc = acc
                    .checked_add(ax.checked_mul(b[y]).ok_or_else(overflow)?)
                    .ok_or_else(overflow)?;
            }
        }
        Ok(acc)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(one).collect()
    }
}

/// `p^nu * q mod p^K`, failing when `p^nu q` is not `p`-integral.
fn scaled_target(p: u64, q: &Rat, nu: u32, k: u32) -> Result<u64> {
    let t = q * pow_p(p, nu as i64);
    if !t.is_zero() && val_rat(&t, p).unwrap() < 0 {
        return Err(Error::Precondition(format!(
            "p^{nu} * q is not integral at p = {p}"
        )));
    }
    let pk = p.pow(k);
    if t.is_zero() {
        return Ok(0);
    }
    let num = mod_int(t.numer(), pk);
    let den = mod_int(t.denom(), pk);
    let inv = crate::exact::inv_mod(den, pk).unwrap_or(1);
    Ok(((num as u128 * inv as u128) % pk as u128) as u64)
}

/// `#{v mod p^j : Q(v + kappa) = q}` for a block form.
pub fn count_omega_blocks(f: &BlockForm, q: &Rat, j: u32) -> Result<BigUint> {
    let p = f.p;
    let nu = f.coset_exp();
    let k = j + nu;
    let t = scaled_target(p, q, nu, k)?;
    let dense_blocks: Vec<&Block> = f
        .blocks
        .iter()
        .filter(|b| p == 2 || !matches!(b, Block::Diag { num: 0, .. }))
        .collect();
    let class_blocks: Vec<&Block> = f
        .blocks
        .iter()
        .filter(|b| p != 2 && matches!(b, Block::Diag { num: 0, .. }))
        .collect();
    if !dense_blocks.is_empty() {
        check_guard((p as u128).pow(k))?;
    }
    // dense part
    let mut dense: Option<Vec<u128>> = None;
    for b in &dense_blocks {
        let d = dense_block(f, b, nu, j, k)?;
        dense = Some(match dense {
            None => d,
            Some(acc) => convolve_dense(&acc, &d)?,
        });
    }
    if p == 2 {
        return Ok(match dense {
            None => BigUint::from(u32::from(t == 0 || k == 0)),
            Some(d) => BigUint::from(d[t as usize]),
        });
    }
    // class part
    let cl = Classes::new(p, k);
    let table = cl.table();
    let mut acc = vec![BigUint::zero(); cl.count()];
    acc[0] = BigUint::one();
    for b in &class_blocks {
        if let Block::Diag { unit, exp, .. } = **b {
            let c = coord_classes(&cl, unit, nu + exp, j);
            acc = convolve_classes(&cl, &table, &acc, &c);
        }
    }
    let pk = p.pow(k);
    Ok(match dense {
        None => acc[cl.class_of(t)].clone(),
        Some(d) => {
            let mut total = BigUint::zero();
            for (a, &cnt) in d.iter().enumerate() {
                if cnt != 0 {
                    let r = (t + pk - a as u64) % pk;
                    total += &acc[cl.class_of(r)] * BigUint::from(cnt);
                }
            }
            total
        }
    })
}

/// `#{v in (Z/p^j)^m : Q(v + kappa) = q in p^(-nu) Z / p^j Z}`.
pub fn count_omega(l: &DiagLattice, kappa: &Coset, q: &Rat, j: u32) -> Result<BigUint> {
    count_omega_blocks(&BlockForm::from_diag(l, kappa)?, q, j)
}

/// `Omega(0..=w)`.
pub fn omega_table(f: &BlockForm, q: &Rat, w: u32) -> Result<Vec<BigUint>> {
    (0..=w).map(|j| count_omega_blocks(f, q, j)).collect()
}

/// Default series length `1 + 2 v_p(2 q ord(kappa))`, `None` for `q = 0`.
pub fn default_w(p: u64, q: &Rat, coset_exp: u32) -> Option<u32> {
    if q.is_zero() {
        return None;
    }
    let v = val_rat(&(q * ri(2)), p).unwrap() + coset_exp as i64;
    Some((1 + 2 * v.max(0)) as u32)
}

/// Density `beta(L + H^s, <q>, kappa)` as a polynomial in `X = p^(-s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaN1 {
    pub poly: LaurentRat,
    /// Series length used.
    pub w: u32,
    /// Length required for exactness (`None` for `q = 0`).
    pub w_default: Option<u32>,
    /// `q = 0`: the series was cut at `w`.
    pub truncated: bool,
    /// `w` is below the length required for exactness.
    pub below_bound: bool,
    pub omega: Vec<BigUint>,
}

impl BetaN1 {
    pub fn to_json(&self) -> Value {
        json!({
            "poly": self.poly.to_json(),
            "display": self.poly.to_string(),
            "w": self.w,
            "w_default": self.w_default,
            "series_truncated": self.truncated,
            "below_bound": self.below_bound,
            "omega": self.omega.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// `Omega(w) p^(w(1-m)) X^w + (1 - X) sum_{j<w} Omega(j) p^(j(1-m)) X^j`.
pub fn beta_n1_poly_blocks(f: &BlockForm, q: &Rat, w: Option<u32>) -> Result<BetaN1> {
    let w_default = default_w(f.p, q, f.coset_exp());
    let w = match (w, w_default) {
        (Some(w), _) => w,
        (None, Some(d)) => d,
        (None, None) => {
            return Err(Error::Precondition(
                "q = 0 needs an explicit series length".into(),
            ))
        }
    };
    let m = f.dim() as i64;
    let omega = omega_table(f, q, w)?;
    let coef = |j: usize| rint(Int::from(omega[j].clone())) * pow_p(f.p, j as i64 * (1 - m));
    let terms: Vec<(i64, Rat)> = (0..w as usize).map(|j| (j as i64, coef(j))).collect();
    let partial = LaurentRat::from_terms(&terms);
    let head = &partial * &LaurentRat::from_ints(&[1, -1]);
    let tail = LaurentRat::monomial(coef(w as usize), w as i64);
    Ok(BetaN1 {
        poly: &head + &tail,
        w,
        w_default,
        truncated: w_default.is_none(),
        below_bound: w_default.is_some_and(|d| w < d),
        omega,
    })
}

/// [`beta_n1_poly_blocks`] for a diagonal lattice and coset.
pub fn beta_n1_poly(l: &DiagLattice, kappa: &Coset, q: &Rat, w: Option<u32>) -> Result<BetaN1> {
    beta_n1_poly_blocks(&BlockForm::from_diag(l, kappa)?, q, w)
}

/// Value of the density at an integer `s >= 0`.
pub fn beta_n1(l: &DiagLattice, kappa: &Coset, q: &Rat, s: i64, w: Option<u32>) -> Result<Rat> {
    beta_n1_poly(l, kappa, q, w)?.poly.eval_s(l.p(), s)
}

/// Classical density `beta(L, M)` at level `l` by direct enumeration of
/// tuples `(d_1..d_n)` mod `p^l` with `Q(d_i) = Q_M(f_i)` and
/// `<d_i, d_k> = <f_i, f_k>` mod `p^l`.
///
/// For `n = 1` a coset of a diagonal lattice may be given; otherwise the
/// coset is trivial.
pub fn beta_gram_level(
    lf: &IntForm,
    m: &GramLattice,
    kappa: Option<&[Rat]>,
    l: u32,
) -> Result<Rat> {
    let p = lf.p;
    let dim = lf.dim();
    let n = m.dim();
    let pl = (p as i128).pow(l);
    check_guard((p as u128).pow(l * dim as u32) * n as u128)?;
    // scale for the coset: y = p^r (x + kappa) is integral
    let (r, kap): (u32, Vec<i128>) = match kappa {
        Some(k) if n == 1 => {
            let r = k
                .iter()
                .filter(|c| !c.is_zero())
                .map(|c| (-val_rat(c, p).unwrap()).max(0) as u32)
                .max()
                .unwrap_or(0);
            let pr = pow_p(p, r as i64);
            let v = k
                .iter()
                .map(|c| {
                    let t = c * &pr;
                    t.numer().to_i128().unwrap() * inv_i128(t.denom(), p, l + 2 * r)
                })
                .collect();
            (r, v)
        }
        Some(k) if k.iter().any(|c| !c.is_zero()) => {
            return Err(Error::Precondition(
                "cosets are supported for one-dimensional M only".into(),
            ))
        }
        _ => (0, vec![0; dim]),
    };
    let modq = pl * (p as i128).pow(2 * r);
    let qm: Vec<i128> = (0..n)
        .map(|i| {
            let v = (&m.gram[i][i] / ri(2)) * pow_p(p, 2 * r as i64);
            rat_mod(&v, p, modq as u128)
        })
        .collect();
    let bm: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| rat_mod(&m.gram[i][k], p, pl as u128))
                .collect()
        })
        .collect();
    let pr = (p as i128).pow(r);
    // enumerate vectors mod p^l, bucket by the diagonal conditions
    let mut buckets: Vec<Vec<Vec<i128>>> = vec![Vec::new(); n];
    let mut x = vec![0i128; dim];
    let total = (pl as u128).pow(dim as u32);
    for _ in 0..total {
        let y: Vec<i128> = x.iter().zip(&kap).map(|(a, c)| pr * a + c).collect();
        let qv = lf.q(&y).rem_euclid(modq);
        for i in 0..n {
            if qv == qm[i] {
                buckets[i].push(x.clone());
            }
        }
        for c in x.iter_mut() {
            *c += 1;
            if *c < pl {
                break;
            }
            *c = 0;
        }
    }
    let count = count_tuples(lf, &buckets, &bm, pl, 0, &mut Vec::new())?;
    let e = l as i64 * (n as i64 * (n as i64 + 1) / 2 - dim as i64 * n as i64);
    Ok(rint(Int::from(count)) * pow_p(p, e))
}

fn count_tuples(
    lf: &IntForm,
    buckets: &[Vec<Vec<i128>>],
    bm: &[Vec<i128>],
    pl: i128,
    i: usize,
    chosen: &mut Vec<Vec<i128>>,
) -> Result<u128> {
    if i == buckets.len() {
        return Ok(1);
    }
    if i == buckets.len() - 1 {
        let mut c = 0u128;
        'outer: for d in &buckets[i] {
            for (k, prev) in chosen.iter().enumerate() {
                if lf.bil(prev, d).rem_euclid(pl) != bm[k][i] {
                    continue 'outer;
                }
            }
            c += 1;
        }
        return Ok(c);
    }
    let mut c = 0u128;
    for d in &buckets[i] {
        let ok = chosen
            .iter()
            .enumerate()
            .all(|(k, prev)| lf.bil(prev, d).rem_euclid(pl) == bm[k][i]);
        if ok {
            chosen.push(d.clone());
            c += count_tuples(lf, buckets, bm, pl, i + 1, chosen)?;
            chosen.pop();
        }
    }
    Ok(c)
}

fn inv_i128(d: &Int, p: u64, k: u32) -> i128 {
    let m = p.pow(k);
    crate::exact::inv_mod(mod_int(d, m), m).unwrap() as i128
}

fn rat_mod(r: &Rat, p: u64, m: u128) -> i128 {
    let m64 = m as u64;
    let num = mod_int(r.numer(), m64);
    let den = mod_int(r.denom(), m64);
    let inv = crate::exact::inv_mod(den, m64).unwrap_or_else(|| {
        panic!("value {r} is not {p}-integral")
    });
    ((num as u128 * inv as u128) % m) as i128
}

/// Stabilized classical density: values at levels `l` and `l + 1` must agree.
pub fn beta_gram(lf: &IntForm, m: &GramLattice, kappa: Option<&[Rat]>, l: u32) -> Result<Rat> {
    let a = beta_gram_level(lf, m, kappa, l)?;
    let b = beta_gram_level(lf, m, kappa, l + 1)?;
    if a != b {
        return Err(Error::NotStabilized(format!(
            "levels {l} and {} give {a} and {b}",
            l + 1
        )));
    }
    Ok(a)
}

/// Discriminant prefactor data for `mu = |d(L)|^(n/2) |d(M)|^(-s + (1+n-m)/2) beta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MuData {
    pub p: u64,
    /// Rank of `L`.
    pub m: usize,
    /// Rank of `M`.
    pub n: usize,
    /// `v_p(d(L))`.
    pub disc_l: u32,
    /// `v_p(d(M))`.
    pub disc_m: u32,
}

impl MuData {
    /// Data for `M = <q>` (so `d(M) = 2q`) and a block form `L`.
    pub fn for_line(f: &BlockForm, q: &Rat) -> Result<Self> {
        let v = val_rat(&(q * ri(2)), f.p)
            .ok_or_else(|| Error::Precondition("q = 0 has no discriminant".into()))?;
        if v < 0 {
            return Err(Error::Precondition("d(M) is not integral".into()));
        }
        Ok(MuData {
            p: f.p,
            m: f.dim(),
            n: 1,
            disc_l: f.disc_valuation(),
            disc_m: v as u32,
        })
    }

    /// The constant `p^(-disc_l n/2 - disc_m (1+n-m)/2)` in `sqrt(p)` form.
    pub fn constant(&self) -> Surd {
        let twice = -(self.disc_l as i64) * self.n as i64
            - self.disc_m as i64 * (1 + self.n as i64 - self.m as i64);
        Surd::sqrt_pow(self.p, twice)
    }
}

/// `mu = |d(L)|^(n/2) |d(M)|^(-s+(1+n-m)/2) beta`; `|d(M)|^(-s) = X^(-disc_m)`.
pub fn mu_from_beta(data: &MuData, beta: &LaurentRat) -> SurdFn {
    SurdFn::from_surd(&data.constant(), &beta.mul_xpow(-(data.disc_m as i64)))
}

/// `mu~ = |2 d(M)|^(s/2) mu` in the variable `Y = X^(1/2)`.
pub fn mu_tilde_y(data: &MuData, mu: &SurdFn) -> SurdFn {
    let b = data.disc_m as i64 + i64::from(data.p == 2);
    mu.map(|f| f.subst_power(2).mul_xpow(b))
}

/// `lambda~ = |D|^(-s/2) lambda` in the variable `Y = X^(1/2)`, with `v_p(D)`.
pub fn lambda_tilde_y(disc_val: u32, lambda: &SurdFn) -> SurdFn {
    lambda.map(|f| f.subst_power(2).mul_xpow(-(disc_val as i64)))
}

/// `int_kappa |Q(v) - q|^s dv = p^s + beta(s+1) (1 - p^s)/(1 - p^(-s-1))`.
pub fn integral_abs(l: &DiagLattice, kappa: &Coset, q: &Rat, s: i64, w: Option<u32>) -> Result<Rat> {
    if l.dim() < 2 {
        return Err(Error::Precondition("needs dimension at least 2".into()));
    }
    if s < 1 {
        return Err(Error::Precondition("needs s >= 1".into()));
    }
    let p = l.p();
    let b = beta_n1(l, kappa, q, s + 1, w)?;
    Ok(pow_p(p, s) + b * (Rat::one() - pow_p(p, s)) / (Rat::one() - pow_p(p, -s - 1)))
}

/// `int |Q(v) - q|^s` summed over the level sets `v_p(Q - q) = l` for
/// `q != 0`, using that `Omega(l) p^(l(1-m))` is constant for `l >= w`.
pub fn integral_abs_series(l: &DiagLattice, kappa: &Coset, q: &Rat, s: i64) -> Result<Rat> {
    let f = BlockForm::from_diag(l, kappa)?;
    let p = l.p();
    let m = l.dim() as i64;
    let w = default_w(p, q, f.coset_exp())
        .ok_or_else(|| Error::Precondition("q must be nonzero".into()))?;
    let om = omega_table(&f, q, w + 1)?;
    let vol = |j: usize| rint(Int::from(om[j].clone())) * pow_p(p, -(j as i64) * m);
    let mut acc = Rat::zero();
    for j in 0..w as usize {
        acc += (vol(j) - vol(j + 1)) * pow_p(p, -(j as i64) * s);
    }
    // tail: vol(j) = c p^(-j) for j >= w
    let c = vol(w as usize) * pow_p(p, w as i64);
    let r = pow_p(p, -1 - s);
    acc += c * (Rat::one() - pow_p(p, -1)) * pow_p(p, -(w as i64) * (1 + s)) / (Rat::one() - r);
    Ok(acc)
}

/// `Omega(j) p^(-jm)`, the volume of `{v in kappa + L : Q(v) = q mod p^j}`.
pub fn level_volume(f: &BlockForm, q: &Rat, j: u32) -> Result<Rat> {
    let c = count_omega_blocks(f, q, j)?;
    Ok(rint(Int::from(c)) * pow_p(f.p, -(j as i64) * f.dim() as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    /// Direct enumeration of `Omega(j)` with rational arithmetic.
    fn omega_brute(l: &DiagLattice, kappa: &Coset, q: &Rat, j: u32) -> u64 {
        let p = l.p();
        let m = l.dim();
        let k = kappa.as_rats();
        let pj = p.pow(j);
        let mut x = vec![0u64; m];
        let mut count = 0;
        for _ in 0..pj.pow(m as u32) {
            let mut v = -q.clone();
            for (i, e) in l.entries().iter().enumerate() {
                let y = ri(x[i] as i64) + &k[i];
                v += ri(e.unit) * pow_p(p, e.exp as i64) * &y * &y;
            }
            if v.is_zero() || val_rat(&v, p).unwrap() >= j as i64 {
                count += 1;
            }
            for c in x.iter_mut() {
                *c += 1;
                if *c < pj {
                    break;
                }
                *c = 0;
            }
        }
        count
    }

    #[test]
    fn class_table_matches_enumeration() {
        for p in [3u64, 5, 7] {
            for k in 1..=3u32 {
                let cl = Classes::new(p, k);
                let t = cl.table();
                let pk = p.pow(k);
                for c in 0..cl.count() {
                    let Some(cv) = (0..pk).find(|&x| cl.class_of(x) == c) else {
                        continue;
                    };
                    for a in 0..cl.count() {
                        let mut brute = vec![0u128; cl.count()];
                        for av in (0..pk).filter(|&x| cl.class_of(x) == a) {
                            brute[cl.class_of((cv + pk - av) % pk)] += 1;
                        }
                        let mut table = vec![0u128; cl.count()];
                        for &(b, n) in &t[c][a] {
                            table[b] += n;
                        }
                        assert_eq!(brute, table, "p={p} k={k} c={c} a={a}");
                    }
                }
            }
        }
    }

    #[test]
    fn omega_matches_enumeration() {
        let cases: Vec<(u64, Vec<(i64, u32)>, &str, Rat)> = vec![
            (3, vec![(1, 0), (1, 0), (1, 0)], "0,0,0", ri(3)),
            (3, vec![(1, 0), (2, 1)], "0,0", ri(9)),
            (5, vec![(2, 0), (1, 1)], "0,2/5", rat(4, 5)),
            (3, vec![(1, 0), (1, 2)], "0,1/3", ri(1)),
            (3, vec![(1, 0), (1, 1)], "0,1/3", rat(1, 3)),
            (5, vec![(1, 2), (2, 0)], "0,1/25", rat(1, 25)),
            (3, vec![(1, 0), (-1, 0), (1, 0), (-1, 0)], "0,0,0,0", ri(1)),
            (3, vec![(1, 1), (2, 1)], "1/3,1/3", ri(0)),
            (2, vec![(1, 0), (3, 1)], "0,0", ri(3)),
            (2, vec![(1, 0), (1, 0), (1, 0)], "0,0,0", ri(2)),
            (7, vec![(3, 0), (1, 0)], "0,0", ri(0)),
        ];
        for (p, pairs, kap, q) in cases {
            let l = DiagLattice::from_pairs(p, &pairs).unwrap();
            let k = Coset::parse(&l, kap).unwrap();
            let jmax = if l.dim() >= 4 { 2 } else { 3 };
            for j in 0..=jmax {
                let fast = count_omega(&l, &k, &q, j).unwrap();
                let slow = omega_brute(&l, &k, &q, j);
                assert_eq!(fast, BigUint::from(slow), "{l} kappa={kap} q={q} j={j}");
            }
        }
    }

    #[test]
    fn hyperbolic_closed_form() {
        for p in [2u64, 3, 5] {
            for l in 1..=3u32 {
                let pl = p.pow(l);
                for n in 0..pl {
                    let brute = (0..pl)
                        .flat_map(|x| (0..pl).map(move |y| (x, y)))
                        .filter(|(x, y)| (x * y) % pl == n)
                        .count() as u128;
                    assert_eq!(hyperbolic_count(p, n, l), brute);
                }
            }
        }
    }

    #[test]
    fn unit_lines_have_density_two() {
        for p in [3u64, 5, 7] {
            let l = DiagLattice::unimodular(p, &[2]).unwrap();
            let m = GramLattice::from_ints(p, &[&[4]]).unwrap();
            let b = beta_gram(&IntForm::from(&l), &m, None, 1).unwrap();
            assert_eq!(b, ri(2));
        }
    }

    #[test]
    fn hyperbolic_density() {
        let h = DiagLattice::unimodular(3, &[1, -1]).unwrap();
        let f = BlockForm::trivial(&h.add_hyperbolic(1).unwrap());
        let b = beta_n1_poly_blocks(&f, &ri(1), None).unwrap();
        assert_eq!(b.poly.eval_s(3, 0).unwrap(), rat(8, 9));
        assert_eq!(
            beta_n1(&h, &Coset::trivial(&h), &ri(1), 1, None).unwrap(),
            rat(8, 9)
        );
    }
}
