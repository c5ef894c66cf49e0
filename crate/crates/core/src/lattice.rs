//! Quadratic lattices over the p-adic integers.
//!
//! [`DiagLattice`] is the diagonal normal form `sum u_i p^(e_i) x_i^2`,
//! [`GramLattice`] a general lattice given by the Gram matrix of its
//! bilinear form `<x, y> = Q(x + y) - Q(x) - Q(y)`, so `Q(x) = x^T G x / 2`.
//! [`Coset`] is an element of the discriminant group `L*/L` of a diagonal
//! lattice.

use crate::error::{Error, Result};
use crate::exact::{
    legendre, parse_rat, pow_p, ri, to_u64, unit_residue, val_i64, val_rat, Int, Rat,
};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::fmt;

/// One diagonal coefficient `unit * p^exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DiagEntry {
    pub unit: i64,
    pub exp: u32,
}

/// Diagonal quadratic form `Q(x) = sum unit_i p^(exp_i) x_i^2` over `Z_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagLattice {
    p: u64,
    entries: Vec<DiagEntry>,
}

impl DiagLattice {
    /// Validates and sorts the entries by exponent (stable).
    pub fn new(p: u64, mut entries: Vec<DiagEntry>) -> Result<Self> {
        if !crate::exact::is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        for e in &entries {
            if e.unit == 0 || e.unit.rem_euclid(p as i64) == 0 {
                return Err(Error::Precondition(format!(
                    "unit {} is not coprime to {p}",
                    e.unit
                )));
            }
        }
        entries.sort_by_key(|e| e.exp);
        Ok(DiagLattice { p, entries })
    }

    /// Lattice from `(unit, exp)` pairs.
    pub fn from_pairs(p: u64, pairs: &[(i64, u32)]) -> Result<Self> {
        Self::new(
            p,
            pairs
                .iter()
                .map(|&(unit, exp)| DiagEntry { unit, exp })
                .collect(),
        )
    }

    /// Unimodular lattice with the given units.
    pub fn unimodular(p: u64, units: &[i64]) -> Result<Self> {
        Self::from_pairs(p, &units.iter().map(|&u| (u, 0)).collect::<Vec<_>>())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn entries(&self) -> &[DiagEntry] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn units(&self) -> Vec<i64> {
        self.entries.iter().map(|e| e.unit).collect()
    }

    pub fn exps(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.exp).collect()
    }

    pub fn min_exp(&self) -> Option<u32> {
        self.entries.first().map(|e| e.exp)
    }

    pub fn max_exp(&self) -> u32 {
        self.entries.last().map(|e| e.exp).unwrap_or(0)
    }

    /// `sum exp_i`, the valuation of the discriminant at odd `p`.
    pub fn disc_valuation(&self) -> u32 {
        self.entries.iter().map(|e| e.exp).sum()
    }

    /// Product of the units.
    pub fn unit_product(&self) -> i64 {
        self.entries.iter().map(|e| e.unit).product()
    }

    /// Legendre symbol of the unit product.
    pub fn unit_legendre(&self) -> i32 {
        self.entries
            .iter()
            .map(|e| legendre(e.unit, self.p))
            .product()
    }

    /// True when every exponent is zero.
    pub fn is_unimodular(&self) -> bool {
        self.entries.iter().all(|e| e.exp == 0)
    }

    /// Entries with the given exponent.
    pub fn block(&self, exp: u32) -> Vec<DiagEntry> {
        self.entries.iter().copied().filter(|e| e.exp == exp).collect()
    }

    /// Jordan blocks as `(exp, dim, Legendre symbol of the unit product)`.
    pub fn jordan(&self) -> Vec<(u32, usize, i32)> {
        let mut out: Vec<(u32, usize, i32)> = Vec::new();
        for e in &self.entries {
            let l = legendre(e.unit, self.p);
            match out.last_mut() {
                Some(b) if b.0 == e.exp => {
                    b.1 += 1;
                    b.2 *= l;
                }
                _ => out.push((e.exp, 1, l)),
            }
        }
        out
    }

    /// Appends `s` hyperbolic planes `<1, -1>`.
    pub fn add_hyperbolic(&self, s: usize) -> Result<Self> {
        if self.p == 2 {
            return Err(Error::PrimeTwo("add_hyperbolic"));
        }
        let mut e = self.entries.clone();
        for _ in 0..s {
            e.push(DiagEntry { unit: 1, exp: 0 });
            e.push(DiagEntry { unit: -1, exp: 0 });
        }
        Self::new(self.p, e)
    }

    /// Orthogonal sum.
    pub fn direct_sum(&self, o: &DiagLattice) -> Result<Self> {
        if self.p != o.p {
            return Err(Error::Precondition("primes differ".into()));
        }
        let mut e = self.entries.clone();
        e.extend_from_slice(&o.entries);
        Self::new(self.p, e)
    }

    /// Value `Q(x)` at an integer vector.
    pub fn q_value(&self, x: &[Int]) -> Int {
        self.entries
            .iter()
            .zip(x)
            .map(|(e, xi)| Int::from(e.unit) * Int::from(self.p).pow(e.exp) * xi * xi)
            .sum()
    }

    /// Gram matrix of the bilinear form (`2 u_i p^(e_i)` on the diagonal).
    pub fn to_gram(&self) -> GramLattice {
        let m = self.dim();
        let mut g = vec![vec![Rat::zero(); m]; m];
        for (i, e) in self.entries.iter().enumerate() {
            g[i][i] = ri(2 * e.unit) * pow_p(self.p, e.exp as i64);
        }
        GramLattice { p: self.p, gram: g }
    }

    /// Genus invariants.
    pub fn invariants(&self) -> Invariants {
        let unimod = self.block(0);
        let hyperbolic_rank = if self.p == 2 {
            None
        } else {
            let k = unimod.len();
            let delta: i32 = unimod.iter().map(|e| legendre(e.unit, self.p)).product();
            Some(if k % 2 == 1 {
                (k - 1) / 2
            } else if k == 0 {
                0
            } else {
                let sign = if (k / 2) % 2 == 1 { legendre(-1, self.p) } else { 1 };
                if sign * delta == 1 {
                    k / 2
                } else {
                    k / 2 - 1
                }
            })
        };
        Invariants {
            p: self.p,
            disc_valuation: self.disc_valuation(),
            disc_unit_legendre: if self.p == 2 { 0 } else { self.unit_legendre() },
            is_unimodular: self.is_unimodular(),
            hyperbolic_rank,
            disc_group: self
                .entries
                .iter()
                .filter(|e| e.exp > 0)
                .map(|e| self.p.pow(e.exp))
                .collect(),
            jordan: if self.p == 2 { Vec::new() } else { self.jordan() },
        }
    }

    /// Jordan data `(exp, dim, Legendre of the block determinant)`, a
    /// complete isometry invariant for odd `p`.
    pub fn class_key(&self) -> Vec<(u32, usize, i32)> {
        self.jordan()
    }

    /// True if the two lattices are isometric over `Z_p` (odd `p`).
    pub fn isometric(&self, o: &DiagLattice) -> bool {
        self.p == o.p && self.class_key() == o.class_key()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "diag": self.entries.iter().map(|e| json!({"unit": e.unit, "exp": e.exp})).collect::<Vec<_>>()
        })
    }
}

impl fmt::Display for DiagLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| match e.exp {
                0 => format!("{}", e.unit),
                1 => format!("{}*{}", e.unit, self.p),
                k => format!("{}*{}^{}", e.unit, self.p, k),
            })
            .collect();
        write!(f, "<{}> (p = {})", parts.join(", "), self.p)
    }
}

/// Invariants of a [`DiagLattice`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub p: u64,
    pub disc_valuation: u32,
    /// Legendre symbol of the product of all units (0 at `p = 2`).
    pub disc_unit_legendre: i32,
    pub is_unimodular: bool,
    /// Number of hyperbolic planes split off by the unimodular block.
    pub hyperbolic_rank: Option<usize>,
    /// Elementary divisors `p^(exp_i)` of `L*/L`.
    pub disc_group: Vec<u64>,
    /// `(exp, dim, Legendre of unit product)` per Jordan block.
    pub jordan: Vec<(u32, usize, i32)>,
}

impl Invariants {
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "disc_valuation": self.disc_valuation,
            "disc_unit_legendre": self.disc_unit_legendre,
            "is_unimodular": self.is_unimodular,
            "hyperbolic_rank": self.hyperbolic_rank,
            "disc_group": self.disc_group,
            "jordan": self.jordan.iter().map(|(e, d, l)| json!({"exp": e, "dim": d, "legendre": l})).collect::<Vec<_>>(),
        })
    }
}

/// Lattice given by the Gram matrix of its bilinear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramLattice {
    pub p: u64,
    pub gram: Vec<Vec<Rat>>,
}

impl GramLattice {
    /// Validates symmetry and nondegeneracy.
    pub fn new(p: u64, gram: Vec<Vec<Rat>>) -> Result<Self> {
        let m = gram.len();
        if gram.iter().any(|r| r.len() != m) {
            return Err(Error::Precondition("Gram matrix is not square".into()));
        }
        for i in 0..m {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Precondition("Gram matrix is not symmetric".into()));
                }
            }
        }
        let g = GramLattice { p, gram };
        if m > 0 && g.det().is_zero() {
            return Err(Error::Singular);
        }
        Ok(g)
    }

    /// Gram matrix from small integers.
    pub fn from_ints(p: u64, g: &[&[i64]]) -> Result<Self> {
        Self::new(
            p,
            g.iter().map(|r| r.iter().map(|&x| ri(x)).collect()).collect(),
        )
    }

    /// The hyperbolic plane `Q = x0 x1`.
    pub fn hyperbolic(p: u64) -> Self {
        Self::from_ints(p, &[&[0, 1], &[1, 0]]).unwrap()
    }

    /// The lattice of symmetric integral 2x2 matrices with `Q = det`,
    /// coordinates `(a, b, c)` for `[[a, b], [b, c]]`.
    pub fn symmetric_det(p: u64) -> Self {
        Self::from_ints(p, &[&[0, 0, 1], &[0, -2, 0], &[1, 0, 0]]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    /// Determinant of the Gram matrix.
    pub fn det(&self) -> Rat {
        det(&self.gram)
    }

    /// Orthogonal sum.
    pub fn direct_sum(&self, o: &GramLattice) -> GramLattice {
        let (a, b) = (self.dim(), o.dim());
        let mut g = vec![vec![Rat::zero(); a + b]; a + b];
        for i in 0..a {
            for j in 0..a {
                g[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..b {
            for j in 0..b {
                g[a + i][a + j] = o.gram[i][j].clone();
            }
        }
        GramLattice { p: self.p, gram: g }
    }

    /// Quadratic coefficients `a_ij` (`i <= j`) with
    /// `Q(x) = sum_i a_ii x_i^2 + sum_{i<j} a_ij x_i x_j`, all integral.
    pub fn int_form(&self) -> Result<IntForm> {
        let m = self.dim();
        let mut a = vec![vec![0i64; m]; m];
        for i in 0..m {
            for j in i..m {
                let v = if i == j {
                    &self.gram[i][i] / ri(2)
                } else {
                    self.gram[i][j].clone()
                };
                if !v.is_integer() {
                    return Err(Error::Precondition(
                        "quadratic form is not integral".into(),
                    ));
                }
                a[i][j] = v
                    .numer()
                    .to_i64()
                    .ok_or_else(|| Error::Precondition("coefficient too large".into()))?;
            }
        }
        Ok(IntForm { p: self.p, a })
    }

    /// Diagonal model over `Z_p` for odd `p`.
    pub fn diagonalize(&self) -> Result<DiagLattice> {
        diagonalize(self)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "gram": self.gram.iter().map(|r| r.iter().map(crate::exact::fmt_rat_short).collect::<Vec<_>>()).collect::<Vec<_>>()
        })
    }
}

/// Integral quadratic form with upper-triangular coefficients, used by the
/// enumeration routines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntForm {
    pub p: u64,
    pub a: Vec<Vec<i64>>,
}

impl IntForm {
    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// `Q(x)` with wrapping-free 128-bit arithmetic.
    pub fn q(&self, x: &[i128]) -> i128 {
        let m = self.dim();
        let mut s = 0i128;
        for i in 0..m {
            if x[i] == 0 {
                continue;
            }
            for j in i..m {
                if self.a[i][j] != 0 {
                    s += self.a[i][j] as i128 * x[i] * x[j];
                }
            }
        }
        s
    }

    /// `<x, y> = Q(x + y) - Q(x) - Q(y)`.
    pub fn bil(&self, x: &[i128], y: &[i128]) -> i128 {
        let m = self.dim();
        let mut s = 0i128;
        for i in 0..m {
            for j in i..m {
                let a = self.a[i][j] as i128;
                if a == 0 {
                    continue;
                }
                if i == j {
                    s += 2 * a * x[i] * y[i];
                } else {
                    s += a * (x[i] * y[j] + x[j] * y[i]);
                }
            }
        }
        s
    }
}

impl From<&DiagLattice> for IntForm {
    fn from(l: &DiagLattice) -> IntForm {
        let m = l.dim();
        let mut a = vec![vec![0i64; m]; m];
        for (i, e) in l.entries.iter().enumerate() {
            a[i][i] = e.unit * (l.p as i64).pow(e.exp);
        }
        IntForm { p: l.p, a }
    }
}

/// Determinant by fraction-free elimination over the rationals.
pub fn det(g: &[Vec<Rat>]) -> Rat {
    let m = g.len();
    let mut a: Vec<Vec<Rat>> = g.to_vec();
    let mut d = Rat::one();
    for c in 0..m {
        let Some(piv) = (c..m).find(|&r| !a[r][c].is_zero()) else {
            return Rat::zero();
        };
        if piv != c {
            a.swap(piv, c);
            d = -d;
        }
        d *= &a[c][c];
        for r in c + 1..m {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &a[c][c];
            for k in c..m {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    d
}

/// Diagonalizes a Gram lattice over `Z_p`, `p` odd.
///
/// Repeatedly picks a basis vector of minimal valuation (creating one from
/// `e_i + e_j` when only an off-diagonal entry attains the minimum) and
/// splits it off.
pub fn diagonalize(g: &GramLattice) -> Result<DiagLattice> {
    let p = g.p;
    if p == 2 {
        return Err(Error::PrimeTwo("diagonalize"));
    }
    if g.dim() > 0 && g.det().is_zero() {
        return Err(Error::Singular);
    }
    let mut a = g.gram.clone();
    let mut n = a.len();
    let mut out = Vec::new();
    let vmin = |a: &Vec<Vec<Rat>>, n: usize| -> (i64, usize, usize) {
        let mut best = (i64::MAX, 0, 0);
        for i in 0..n {
            for j in i..n {
                if let Some(v) = val_rat(&a[i][j], p) {
                    // prefer diagonal entries at equal valuation
                    if v < best.0 || (v == best.0 && i == j && best.1 != best.2) {
                        best = (v, i, j);
                    }
                }
            }
        }
        best
    };
    while n > 0 {
        let (_, i, j) = vmin(&a, n);
        if i != j {
            // e_i <- e_i + e_j
            for k in 0..n {
                let t = a[j][k].clone();
                a[i][k] += t;
            }
            for k in 0..n {
                let t = a[k][j].clone();
                a[k][i] += t;
            }
        }
        let (_, i, _) = vmin(&a, n);
        // move pivot to the end
        a.swap(i, n - 1);
        for row in a.iter_mut() {
            row.swap(i, n - 1);
        }
        let piv = a[n - 1][n - 1].clone();
        for r in 0..n - 1 {
            if a[r][n - 1].is_zero() {
                continue;
            }
            let f = &a[r][n - 1] / &piv;
            for k in 0..n {
                let t = &f * &a[n - 1][k];
                a[r][k] -= t;
            }
            for k in 0..n {
                let t = &f * &a[k][n - 1];
                a[k][r] -= t;
            }
        }
        let qv = &piv / ri(2);
        let v = val_rat(&qv, p).ok_or(Error::Singular)?;
        if v < 0 {
            return Err(Error::Precondition("quadratic form is not integral".into()));
        }
        let u = unit_rep(&qv, p);
        out.push(DiagEntry { unit: u, exp: v as u32 });
        n -= 1;
        a.truncate(n);
        for row in a.iter_mut() {
            row.truncate(n);
        }
    }
    out.reverse();
    DiagLattice::new(p, out)
}

/// Small integer representative of the unit part of `r` (same square class).
pub fn unit_rep(r: &Rat, p: u64) -> i64 {
    let v = val_rat(r, p).unwrap();
    let u = r * pow_p(p, -v);
    if u.is_integer() {
        if let Some(x) = u.numer().to_i64() {
            if x.unsigned_abs() < 1 << 40 {
                return x;
            }
        }
    }
    let res = unit_residue(r, p, p) as i64;
    if res > (p as i64) / 2 {
        res - p as i64
    } else {
        res
    }
}

/// Element of `L*/L` for a diagonal lattice: coordinate `i` is
/// `num_i / p^(exp_i)` with `0 <= num_i < p^(exp_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coset {
    pub p: u64,
    pub comps: Vec<(u64, u32)>,
}

impl Coset {
    /// The zero coset of a lattice.
    pub fn trivial(l: &DiagLattice) -> Self {
        Coset {
            p: l.p,
            comps: l.entries.iter().map(|e| (0, e.exp)).collect(),
        }
    }

    /// Builds a coset from numerators, reducing them modulo `p^(exp_i)`.
    pub fn new(l: &DiagLattice, nums: &[i64]) -> Result<Self> {
        if nums.len() != l.dim() {
            return Err(Error::Precondition("coset dimension mismatch".into()));
        }
        Ok(Coset {
            p: l.p,
            comps: l
                .entries
                .iter()
                .zip(nums)
                .map(|(e, &c)| (c.rem_euclid(l.p.pow(e.exp) as i64) as u64, e.exp))
                .collect(),
        })
    }

    /// Parses `"0,1/3"`: each component must lie in `p^(-exp_i) Z / Z`.
    pub fn parse(l: &DiagLattice, s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(|t| t.trim()).collect();
        if parts.len() != l.dim() {
            return Err(Error::Parse(format!(
                "coset needs {} components, got {}",
                l.dim(),
                parts.len()
            )));
        }
        let mut nums = Vec::new();
        for (t, e) in parts.iter().zip(&l.entries) {
            let r = parse_rat(t)?;
            let scaled = r * pow_p(l.p, e.exp as i64);
            if !scaled.is_integer() {
                return Err(Error::Parse(format!(
                    "component {t} is not in p^-{} Z",
                    e.exp
                )));
            }
            let m = Int::from(l.p.pow(e.exp));
            nums.push(to_u64(&scaled.numer().mod_floor(&m)) as i64);
        }
        Self::new(l, &nums)
    }

    pub fn is_trivial(&self) -> bool {
        self.comps.iter().all(|c| c.0 == 0)
    }

    /// `log_p` of the order of the coset.
    pub fn order_exp(&self) -> u32 {
        self.comps
            .iter()
            .filter(|c| c.0 != 0)
            .map(|&(c, e)| e - val_i64(c as i64, self.p).unwrap())
            .max()
            .unwrap_or(0)
    }

    /// Order of the coset in `L*/L`.
    pub fn order(&self) -> u64 {
        self.p.pow(self.order_exp())
    }

    /// Components as rationals `num_i / p^(exp_i)`.
    pub fn as_rats(&self) -> Vec<Rat> {
        self.comps
            .iter()
            .map(|&(c, e)| ri(c as i64) * pow_p(self.p, -(e as i64)))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.as_rats()
                .iter()
                .map(|r| Value::String(crate::exact::fmt_rat_short(r)))
                .collect(),
        )
    }
}

/// Lattice input: diagonal or Gram form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeSpec {
    Diag(DiagLattice),
    Gram(GramLattice),
}

impl LatticeSpec {
    /// Parses `{"p": 3, "diag": [{"unit": 1, "exp": 0}]}` or
    /// `{"p": 3, "gram": [[2, 0], [0, 2]]}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let p = v
            .get("p")
            .and_then(|p| p.as_u64())
            .ok_or_else(|| Error::Parse("missing prime 'p'".into()))?;
        if let Some(d) = v.get("diag") {
            let arr = d
                .as_array()
                .ok_or_else(|| Error::Parse("'diag' must be an array".into()))?;
            let mut entries = Vec::new();
            for e in arr {
                let unit = e
                    .get("unit")
                    .and_then(|u| u.as_i64())
                    .ok_or_else(|| Error::Parse("diag entry needs integer 'unit'".into()))?;
                let exp = e.get("exp").and_then(|u| u.as_u64()).unwrap_or(0) as u32;
                entries.push(DiagEntry { unit, exp });
            }
            return Ok(LatticeSpec::Diag(DiagLattice::new(p, entries)?));
        }
        if let Some(g) = v.get("gram") {
            let rows = g
                .as_array()
                .ok_or_else(|| Error::Parse("'gram' must be an array".into()))?;
            let mut out = Vec::new();
            for r in rows {
                let r = r
                    .as_array()
                    .ok_or_else(|| Error::Parse("gram rows must be arrays".into()))?;
                let mut row = Vec::new();
                for x in r {
                    row.push(match x {
                        Value::Number(n) if n.is_i64() => ri(n.as_i64().unwrap()),
                        Value::String(s) => parse_rat(s)?,
                        _ => return Err(Error::Parse("bad gram entry".into())),
                    });
                }
                out.push(row);
            }
            return Ok(LatticeSpec::Gram(GramLattice::new(p, out)?));
        }
        Err(Error::Parse("lattice needs 'diag' or 'gram'".into()))
    }

    pub fn p(&self) -> u64 {
        match self {
            LatticeSpec::Diag(d) => d.p(),
            LatticeSpec::Gram(g) => g.p,
        }
    }

    /// Diagonal model (diagonalizing a Gram input when `p` is odd).
    pub fn to_diag(&self) -> Result<DiagLattice> {
        match self {
            LatticeSpec::Diag(d) => Ok(d.clone()),
            LatticeSpec::Gram(g) => g.diagonalize(),
        }
    }

    /// Integral form for enumeration.
    pub fn int_form(&self) -> Result<IntForm> {
        match self {
            LatticeSpec::Diag(d) => Ok(IntForm::from(d)),
            LatticeSpec::Gram(g) => g.int_form(),
        }
    }
}

/// `|d|_p` exponent helper: the p-adic valuation of a nonzero rational as i64.
pub fn valuation(r: &Rat, p: u64) -> i64 {
    val_rat(r, p).expect("valuation of zero")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbolic_plane_diagonalizes() {
        let d = GramLattice::hyperbolic(3).diagonalize().unwrap();
        let h = DiagLattice::unimodular(3, &[1, -1]).unwrap();
        assert!(d.isometric(&h));
    }

    #[test]
    fn symmetric_matrices_diagonalize() {
        let d = GramLattice::symmetric_det(5).diagonalize().unwrap();
        let e = DiagLattice::unimodular(5, &[1, -1, -1]).unwrap();
        assert!(d.isometric(&e));
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let l = DiagLattice::from_pairs(3, &[(2, 1), (1, 0)]).unwrap();
        assert_eq!(l.exps(), vec![0, 1]);
        let back = l.to_gram().diagonalize().unwrap();
        assert!(back.isometric(&l));
    }

    #[test]
    fn invariants_examples() {
        let h = DiagLattice::unimodular(5, &[1, -1]).unwrap().invariants();
        assert_eq!(h.hyperbolic_rank, Some(1));
        assert!(h.is_unimodular);
        let u = DiagLattice::unimodular(3, &[1, 1, 1]).unwrap().invariants();
        assert_eq!(u.hyperbolic_rank, Some(1));
        let c = DiagLattice::from_pairs(3, &[(1, 0), (1, 1)]).unwrap().invariants();
        assert_eq!(c.disc_valuation, 1);
        assert_eq!(c.disc_group, vec![3]);
        assert!(!c.is_unimodular);
    }

    #[test]
    fn coset_order() {
        let l = DiagLattice::from_pairs(3, &[(1, 0), (1, 2)]).unwrap();
        let k = Coset::parse(&l, "0,1/3").unwrap();
        assert_eq!(k.comps, vec![(0, 0), (3, 2)]);
        assert_eq!(k.order(), 3);
        assert!(Coset::parse(&l, "1/3,0").is_err());
    }
}
