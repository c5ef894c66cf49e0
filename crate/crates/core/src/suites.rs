//! Verification suites over fixed parameter grids, shared by the CLI and
//! the acceptance tests. Each suite collects [`Check`]s and ends in one
//! [`Verdict`].

use crate::arch::{digamma_half, gamma_nm, verify_arch_orbit_equation};
use crate::counting::{beta_n1, beta_n1_poly};
use crate::error::{Error, Result};
use crate::exact::{legendre, pow_p, ri, Rat};
use crate::global::{raw_difference, reproduce_examples, verify_global_orbit_eq, Example};
use crate::lambda::{lambda_closed, vol_so_hyperbolic, vol_so_hyperbolic_by_counting, vol_so_prime_by_counting};
use crate::lattice::{Coset, DiagLattice};
use crate::laurent::LaurentRat;
use crate::ledger::{ConstLedger, Symbol};
use crate::mono::Mono;
use crate::modular::{item1, item2, item3, item4, item5, per_orbit_mismatch};
use crate::numeric::{digamma, elementary_symbol, eval_ledger};
use crate::orbits::{verify_kitaoka_classical, verify_kitaoka_interpolated, verify_orbit_equation_elementary, verify_unimodular_line};
use crate::report::Check;
use crate::surd::SurdFn;
use crate::yang::yang_beta;
use crate::zeta::{zeta2_closed, zeta_from_counts};
use num_traits::{One, Zero};
use serde_json::{json, Value};
use std::fmt;
use std::time::Instant;

/// Outcome of a suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
    Skipped(String),
}

impl Verdict {
    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }

    pub fn to_json(&self) -> Value {
        match self {
            Verdict::Pass => json!({ "verdict": "PASS" }),
            Verdict::Fail(r) => json!({ "verdict": "FAIL", "reason": r }),
            Verdict::Skipped(r) => json!({ "verdict": "SKIPPED", "reason": r }),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "PASS"),
            Verdict::Fail(r) => write!(f, "FAIL ({r})"),
            Verdict::Skipped(r) => write!(f, "SKIPPED ({r})"),
        }
    }
}

/// Result of one suite.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: String,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    /// Remarks on readings and quarantined parts.
    pub notes: Vec<String>,
    pub seconds: f64,
}

impl SuiteReport {
    /// Verdict from the checks: PASS when all hold.
    fn from_checks(name: &str, checks: Vec<Check>, notes: Vec<String>, start: Instant) -> Self {
        let failed = checks.iter().filter(|c| !c.holds).count();
        let verdict = if checks.is_empty() {
            Verdict::Skipped("no checks ran".into())
        } else if failed == 0 {
            Verdict::Pass
        } else {
            Verdict::Fail(format!("{failed} of {} checks failed", checks.len()))
        };
        SuiteReport { name: name.into(), verdict, checks, notes, seconds: start.elapsed().as_secs_f64() }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.holds)
    }

    /// One line: name, verdict and the number of checks.
    pub fn line(&self) -> String {
        format!("{}: {} [{} checks, {:.1}s]", self.name, self.verdict, self.checks.len(), self.seconds)
    }

    /// Result part of the JSON report; timing is kept outside so that
    /// identical runs give identical results.
    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.name,
            "verdict": self.verdict.to_json(),
            "checks": self.checks.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }
}

#[cfg(feature = "parallel")]
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}

fn error_check(label: impl Into<String>, e: &Error) -> Check {
    Check::new(label, format!("error: {e}"), "a value", false)
}

fn flatten(results: Vec<Result<Vec<Check>>>, label: &str) -> Vec<Check> {
    results
        .into_iter()
        .flat_map(|r| r.unwrap_or_else(|e| vec![error_check(label, &e)]))
        .collect()
}

fn nonresidue(p: u64) -> i64 {
    (2..p as i64).find(|&n| legendre(n, p) == -1).unwrap()
}

/// Every diagonal lattice of rank `m` over the square classes `{1, n}`
/// with exponents at most `max_exp`, up to reordering.
pub fn diagonal_lattices(p: u64, m: usize, max_exp: u32) -> Vec<DiagLattice> {
    let n = nonresidue(p);
    let kinds: Vec<(i64, u32)> = (0..=max_exp).flat_map(|e| [(1, e), (n, e)]).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; m];
    loop {
        let pairs: Vec<(i64, u32)> = idx.iter().map(|&i| kinds[i]).collect();
        out.push(DiagLattice::from_pairs(p, &pairs).expect("valid entries"));
        // next non-decreasing index tuple
        let mut k = m;
        while k > 0 && idx[k - 1] == kinds.len() - 1 {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        idx[k - 1] += 1;
        for j in k..m {
            idx[j] = idx[k - 1];
        }
    }
    out
}

/// Yang's formula against the counting polynomial on the full grid
/// `p in {3,5,7}`, `m <= 5`, exponents `<= 2`, `q = alpha p^a`, `a <= 3`.
pub fn yang_vs_oracle(primes: &[u64], max_rank: usize) -> SuiteReport {
    let start = Instant::now();
    let mut jobs = Vec::new();
    for &p in primes {
        for m in 1..=max_rank {
            for l in diagonal_lattices(p, m, 2) {
                jobs.push(l);
            }
        }
    }
    let results = par_map(&jobs, |l| -> Result<Vec<Check>> {
        let p = l.p();
        let kappa = Coset::trivial(l);
        let mut checks = Vec::new();
        for alpha in [1, nonresidue(p)] {
            for a in 0..=3 {
                let q = ri(alpha) * pow_p(p, a);
                let y = yang_beta(l, &q, None)?;
                let c = beta_n1_poly(l, &kappa, &q, None)?;
                if y.poly != c.poly {
                    checks.push(Check::eq(format!("yang vs counting, {l}, q = {q}"), &y.poly, &c.poly));
                }
            }
        }
        // one summary check per lattice keeps the report small
        checks.push(Check::new(format!("yang vs counting, {l}, 8 targets"), "agree", "agree", checks.is_empty()));
        Ok(checks)
    });
    let checks = flatten(results, "yang vs counting");
    let notes = vec![format!("{} lattices, 8 targets each", jobs.len())];
    SuiteReport::from_checks("yang-vs-oracle", checks, notes, start)
}

/// `beta(H^k, 1) = 1 - p^-k` and the unimodular densities
/// `beta(L, <e>)` for unit `e`, by Yang's formula and by counting.
pub fn explicit_densities() -> SuiteReport {
    let start = Instant::now();
    let mut checks = Vec::new();
    for p in [3u64, 5, 7] {
        let n = nonresidue(p);
        for k in 1..=3usize {
            let units: Vec<i64> = (0..k).flat_map(|_| [1, -1]).collect();
            let h = DiagLattice::unimodular(p, &units).unwrap();
            // beta(H^k + H^s, 1) = 1 - p^-k X
            let expect = LaurentRat::from_terms(&[(0, Rat::one()), (1, -pow_p(p, -(k as i64)))]);
            match yang_beta(&h, &ri(1), None) {
                Ok(y) => checks.push(Check::eq(format!("Yang: beta(H^{k} + H^s, 1), p = {p}"), &y.poly, &expect)),
                Err(e) => checks.push(error_check("Yang", &e)),
            }
            match beta_n1(&h, &Coset::trivial(&h), &ri(1), 0, None) {
                Ok(v) => checks.push(Check::eq(
                    format!("counting: beta(H^{k}, 1) = 1 - p^-{k}, p = {p}"),
                    &v,
                    &(Rat::one() - pow_p(p, -(k as i64))),
                )),
                Err(e) => checks.push(error_check("counting", &e)),
            }
        }
        for m in 1..=5usize {
            for first in [1, n] {
                let mut units = vec![1i64; m];
                units[0] = first;
                let l = DiagLattice::unimodular(p, &units).unwrap();
                let eps = l.unit_product();
                for e in [1, n] {
                    let mi = m as i64;
                    let expect = if m % 2 == 0 {
                        let sign = if (mi / 2) % 2 == 0 { 1 } else { -1 };
                        let c = legendre(sign * eps, p) as i64;
                        LaurentRat::from_terms(&[(0, Rat::one()), (1, -ri(c) * pow_p(p, -mi / 2))])
                    } else {
                        let sign = if ((mi - 1) / 2) % 2 == 0 { 1 } else { -1 };
                        let c = legendre(sign * eps * e, p) as i64;
                        LaurentRat::from_terms(&[(0, Rat::one()), (1, ri(c) * pow_p(p, -(mi - 1) / 2))])
                    };
                    let q = ri(e);
                    match (yang_beta(&l, &q, None), beta_n1_poly(&l, &Coset::trivial(&l), &q, None)) {
                        (Ok(y), Ok(c)) => {
                            checks.push(Check::eq(format!("Yang: mu({l}, <{e}>)"), &y.poly, &expect));
                            checks.push(Check::eq(format!("counting: mu({l}, <{e}>)"), &c.poly, &expect));
                        }
                        (Err(e), _) | (_, Err(e)) => checks.push(error_check(format!("mu({l})"), &e)),
                    }
                }
            }
        }
    }
    SuiteReport::from_checks("explicit-densities", checks, vec![], start)
}

/// Lattices with a closed volume formula, in a fixed order.
pub fn covered_lattices() -> Vec<DiagLattice> {
    let mut out = Vec::new();
    for p in [3u64, 5, 7] {
        for m in 1..=4 {
            for l in diagonal_lattices(p, m, 3) {
                let k = l.entries().iter().filter(|e| e.exp > 0).count();
                if k <= 1 && lambda_closed(&l).is_ok() {
                    out.push(l);
                }
            }
        }
    }
    out
}

/// Twenty covered lattices spread evenly over [`covered_lattices`].
pub fn sample_covered(count: usize) -> Vec<DiagLattice> {
    let all = covered_lattices();
    let step = (all.len() / count).max(1);
    all.into_iter().step_by(step).take(count).collect()
}

/// Volume formulas: the shift under adding a hyperbolic plane, the closed
/// forms at `s = 0` against counted volumes, and the hyperbolic volumes at
/// `p = 2` by counting. The remaining `p = 2` forms are consumed as stated.
pub fn lambda_identities() -> SuiteReport {
    let start = Instant::now();
    let mut checks = Vec::new();
    for l in sample_covered(20) {
        let p = l.p();
        let r = (|| -> Result<Check> {
            let a = lambda_closed(&l.add_hyperbolic(1)?)?.value;
            let b = lambda_closed(&l)?.value.map(|f| f.subst_scale(&pow_p(p, -1)));
            let f = SurdFn::rational(p, LaurentRat::from_terms(&[(0, Rat::one()), (2, -pow_p(p, -2))]));
            Ok(Check::eq(format!("lambda({l} + H; s) = (1 - p^(-2s-2)) lambda({l}; s+1)"), &a, &(&f * &b)))
        })();
        checks.push(r.unwrap_or_else(|e| error_check(format!("shift {l}"), &e)));
    }
    let families: Vec<DiagLattice> = [3u64, 5]
        .iter()
        .flat_map(|&p| {
            let n = nonresidue(p);
            vec![
                vec![(1, 0), (1, 0)],
                vec![(1, 0), (n, 0)],
                vec![(1, 0), (1, 0), (1, 0)],
                vec![(1, 0), (n, 0), (1, 0), (1, 0)],
                vec![(1, 0), (1, 1)],
                vec![(1, 0), (n, 0), (1, 1)],
                vec![(1, 0), (n, 0), (n, 2)],
                vec![(1, 0), (1, 0), (n, 0), (1, 1)],
            ]
            .into_iter()
            .map(move |s| DiagLattice::from_pairs(p, &s).unwrap())
        })
        .collect();
    let results = par_map(&families, |l| -> Result<Vec<Check>> {
        let closed = lambda_closed(l)?.at_zero()?;
        let counted = vol_so_prime_by_counting(l)?;
        Ok(vec![Check::eq(format!("vol SO'({l}): closed form against counting"), &closed, &counted)])
    });
    checks.extend(flatten(results, "vol SO'"));
    for s in 1..=2 {
        match vol_so_hyperbolic_by_counting(2, s, 2) {
            Ok(v) => checks.push(Check::eq(format!("p = 2: vol SO(H^{s}) by counting"), &v, &vol_so_hyperbolic(2, s))),
            Err(e) => checks.push(error_check("p = 2 hyperbolic", &e)),
        }
    }
    let notes = vec![
        "shift identity on 20 covered lattices taken at a fixed stride through the covered families".into(),
        "p = 2: even unimodular, unimodular plus a line and binary value 1/2 are consumed as stated and flagged asserted".into(),
    ];
    SuiteReport::from_checks("lambda", checks, notes, start)
}

/// The orbit equation as closed displays (`m in {3,5}`, `a <= 6`,
/// `p in {3,5}`) and at `s = 0` on brute-force censuses.
pub fn orbit_equation() -> SuiteReport {
    let start = Instant::now();
    let mut jobs = Vec::new();
    for p in [3u64, 5] {
        for units in [vec![1i64, 1, 1], vec![1, nonresidue(p), 1, 1, 1]] {
            for a in 0..=6 {
                for eps in [1, nonresidue(p)] {
                    jobs.push((DiagLattice::unimodular(p, &units).unwrap(), ri(eps) * pow_p(p, a)));
                }
            }
        }
    }
    let mut checks = flatten(par_map(&jobs, |(l, q)| verify_unimodular_line(l, q)), "displays");
    let mut elem = Vec::new();
    for m in [3usize, 4] {
        let l = DiagLattice::unimodular(3, &vec![1; m]).unwrap();
        for q in [1i64, 2, 3, 6, 9, 18] {
            elem.push((l.clone(), ri(q)));
        }
    }
    checks.extend(flatten(par_map(&elem, |(l, q)| verify_orbit_equation_elementary(l, q, None)), "elementary"));
    SuiteReport::from_checks("orbit-eq", checks, vec![], start)
}

/// Kitaoka's formula by counting on `<1,-1,1,-1>` and its interpolated
/// form at `s in {0,1,2}`.
pub fn kitaoka() -> SuiteReport {
    let start = Instant::now();
    let l = DiagLattice::unimodular(3, &[1, -1, 1, -1]).unwrap();
    let pairs = [(1i64, 1i64), (1, -1), (1, 2), (2, 2)];
    let mut checks = flatten(
        par_map(&pairs, |&(a, b)| verify_kitaoka_classical(&l, a, b, 1).map(|c| vec![c])),
        "Kitaoka",
    );
    let l5 = DiagLattice::unimodular(3, &[1, -1, 1, -1, 1]).unwrap();
    let mut interp: Vec<(&DiagLattice, u32, i64, i64)> = Vec::new();
    for s in 0..=2 {
        interp.extend([(&l, s, 1, 1), (&l, s, 1, 2)]);
    }
    interp.push((&l5, 0, 1, 1));
    checks.extend(flatten(
        par_map(&interp, |&(lat, s, a, b)| verify_kitaoka_interpolated(lat, a, b, s, 1, s == 0).map(|c| vec![c])),
        "interpolated Kitaoka",
    ));
    let notes = vec!["left sides counted at level 1; at s = 0 level 2 is confirmed as well".into()];
    SuiteReport::from_checks("kitaoka", checks, notes, start)
}

/// Closed binary zeta functions against counted ones for `l <= 4`.
pub fn local_zeta() -> SuiteReport {
    let start = Instant::now();
    let mut jobs = Vec::new();
    for p in [3u64, 5, 7] {
        for l in 0..=4u32 {
            for e in [1, nonresidue(p)] {
                jobs.push(DiagLattice::from_pairs(p, &[(1, 0), (e, l)]).unwrap());
            }
        }
    }
    let results = par_map(&jobs, |lat| -> Result<Vec<Check>> {
        let closed = zeta2_closed(lat)?.value;
        let counted = zeta_from_counts(lat, 16)?
            .fitted
            .ok_or_else(|| Error::NotStabilized(format!("no rational fit for {lat}")))?;
        let mut v = vec![Check::eq(format!("zeta({lat}): closed against counted"), &closed, &counted)];
        if lat.entries()[1].exp == 1 {
            let one = LaurentRat::one();
            v.push(Check::eq(format!("zeta({lat}) = 1/(1 - X)"), &closed, &(&one / &(&one - &LaurentRat::x()))));
        }
        Ok(v)
    });
    SuiteReport::from_checks("zeta", flatten(results, "zeta"), vec![], start)
}

/// Gamma factors at the real place.
pub fn archimedean() -> SuiteReport {
    let start = Instant::now();
    let mut checks = Vec::new();
    for m in 3..=12 {
        for n in 1..=m - 2 {
            for s in 0..3 {
                match verify_arch_orbit_equation(n, m, s) {
                    Ok(c) => checks.extend(c),
                    Err(e) => checks.push(error_check("arch", &e)),
                }
            }
        }
    }
    let g = gamma_nm(1, 2, 0).map(|g| g.value);
    let two_pi = &Mono::rational(ri(2)) * &Mono::pi_pow_half(2);
    match g {
        Ok(v) => checks.push(Check::eq("Gamma_{1,2}(0) = 2 pi", &v, &two_pi)),
        Err(e) => checks.push(error_check("Gamma_{1,2}", &e)),
    }
    for twice in 1..=24 {
        let exact = digamma_half(twice).ok().and_then(|l| eval_ledger(&l, elementary_symbol));
        let num = digamma(&Rat::new(twice.into(), 2.into()));
        let (lhs, holds) = match exact {
            Some(x) => (x.to_decimal(50), x.close_to(&num, 50)),
            None => ("no value".into(), false),
        };
        checks.push(Check::new(format!("psi({twice}/2), 50 digits"), lhs, num.to_decimal(50), holds));
    }
    SuiteReport::from_checks("arch", checks, vec![], start)
}

/// Items 1 to 5 for the modular curve and the per-orbit negative test.
pub fn modular_curve() -> SuiteReport {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    for s in 0..6 {
        checks.extend(item1(s).unwrap_or_else(|e| vec![error_check("item 1", &e)]));
    }
    let mut local = Vec::new();
    for p in [3u64, 5, 7] {
        for a in 0..=4u32 {
            for unit in [1u64, 2] {
                local.push((p, unit * p.pow(a)));
            }
        }
    }
    let results = par_map(&local, |&(p, q)| -> Result<(Vec<Check>, Vec<Check>)> {
        let mut v = item2(p, q)?;
        if q % (p * p) != 0 {
            v.extend(item3(p, q)?);
        }
        let mut bare = Vec::new();
        for fe in item4(p, q)? {
            v.push(fe.completed);
            bare.push(fe.bare);
        }
        if q % (p * p) == 0 {
            let m = per_orbit_mismatch(p, q)?;
            v.push(Check::new(
                format!("p = {p}, q = {q}: some orbit term differs from its counterpart"),
                format!("{m:?}"),
                "at least one (true, true)",
                m.iter().any(|&(x, y)| x && y),
            ));
        }
        Ok((v, bare))
    });
    let mut bare_fail = 0;
    let mut bare_total = 0;
    for r in results {
        match r {
            Ok((v, bare)) => {
                checks.extend(v);
                bare_total += bare.len();
                bare_fail += bare.iter().filter(|c| !c.holds).count();
            }
            Err(e) => checks.push(error_check("modular local", &e)),
        }
    }
    notes.push(format!(
        "item 4: with the bare Euler factor 1/(1 - chi(p) p^-s) the quotient is invariant for {} of {bare_total} orbits (all failures at odd v_p(q)); the verdict uses the local factor completed by |f|_p^(s/2)",
        bare_total - bare_fail
    ));
    for q in [1u64, 3, 5, 9, 15, 18, 21, 27, 45, 50] {
        match item5(q, 30) {
            Ok(g) => checks.extend(g.checks),
            Err(e) => checks.push(error_check(format!("item 5, q = {q}"), &e)),
        }
    }
    notes.push("item 5: equality at the real place and every odd prime, so the quotient of the two sides is a function of 2^-s alone".into());
    SuiteReport::from_checks("modular-curve", checks, notes, start)
}

/// The parameter grid for the six worked genera.
pub fn example_grid() -> Vec<Example> {
    let mut v = Vec::new();
    v.extend([3u64, 7, 11, 15, 19, 23].map(Example::Heegner));
    v.extend([1u64, 3, 5, 15].map(Example::ModularCurve));
    v.extend([15u64, 21, 35].map(Example::ShimuraCurve));
    v.extend([5u64, 13, 17, 21].map(Example::Hilbert));
    v.extend([15u64, 21].map(Example::Siegel));
    v.push(Example::E8TwoPlanes);
    v
}

/// The six worked expansions with the constant `C` solved once and
/// substituted everywhere.
pub fn global_examples() -> SuiteReport {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    match reproduce_examples(&example_grid()) {
        Ok((c, reports)) => {
            notes.push(format!("C = {c}"));
            notes.push("the computed values follow from the local factors of each genus; the stated Heegner values are twice the computed ones and the stated E8 + 2H value is four times the computed one with 1/2 log 2 missing from its derivative".into());
            for r in reports {
                checks.extend(r.checks);
            }
            let per = crate::global::c_per_example(&example_grid()).unwrap_or_default();
            for (e, ce) in per {
                let s = ce.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "unsolvable".into());
                checks.push(Check::new(format!("C from {}", e.name()), s, c.to_string(), ce.as_ref() == Some(&c)));
            }
        }
        Err(e) => checks.push(error_check("global examples", &e)),
    }
    SuiteReport::from_checks("global-examples", checks, notes, start)
}

/// The global orbit equation for `x1 x2 - x3^2` and `q <= q_max`.
pub fn global_orbit_equation(q_max: u64) -> SuiteReport {
    let start = Instant::now();
    let qs: Vec<u64> = (1..=q_max).collect();
    let results = par_map(&qs, |&q| -> Result<Vec<Check>> {
        let r = verify_global_orbit_eq(q, 50)?;
        let mut v = r.checks.clone();
        let odd_sq: Vec<u64> = r.deleted.iter().copied().filter(|&p| p != 2).collect();
        if !odd_sq.is_empty() {
            let d = raw_difference(&r)?;
            let only_deleted = d.iter().all(|(s, _)| r.deleted.iter().any(|&p| *s == Symbol::log_prime(p)));
            let nonzero = odd_sq.iter().any(|&p| !d.get(&Symbol::log_prime(p)).is_zero());
            v.push(Check::new(
                format!("q = {q}: undeleted derivatives differ only in log p, p in {:?}", r.deleted),
                &d,
                "nonzero at some odd p with p^2 | q",
                only_deleted && nonzero,
            ));
        }
        Ok(v)
    });
    let notes = vec![
        "log 2 deleted, p = 2 compared at s = 0 only".into(),
        "D'' read as the product of the odd primes p with p^2 | q".into(),
    ];
    SuiteReport::from_checks("global-orbit-eq", flatten(results, "global orbit equation"), notes, start)
}

/// The suites by name.
pub const SUITES: &[&str] = &[
    "yang-vs-oracle",
    "explicit-densities",
    "lambda",
    "orbit-eq",
    "kitaoka",
    "zeta",
    "arch",
    "modular-curve",
    "global-examples",
    "global-orbit-eq",
];

/// Runs one suite by name.
pub fn run_suite(name: &str) -> Result<SuiteReport> {
    Ok(match name {
        "yang-vs-oracle" => yang_vs_oracle(&[3, 5, 7], 5),
        "explicit-densities" => explicit_densities(),
        "lambda" => lambda_identities(),
        "orbit-eq" => orbit_equation(),
        "kitaoka" => kitaoka(),
        "zeta" => local_zeta(),
        "arch" => archimedean(),
        "modular-curve" => modular_curve(),
        "global-examples" => global_examples(),
        "global-orbit-eq" => global_orbit_equation(50),
        _ => return Err(Error::Precondition(format!("unknown suite '{name}'; known: {}", SUITES.join(", ")))),
    })
}

/// The numbered acceptance criteria as suite names.
pub fn criterion_suites(n: u32) -> &'static [&'static str] {
    match n {
        1 => &["yang-vs-oracle"],
        2 => &["explicit-densities"],
        3 => &["lambda"],
        4 => &["orbit-eq"],
        5 => &["kitaoka"],
        6 => &["zeta"],
        7 => &["arch"],
        8 => &["modular-curve"],
        9 => &["global-examples"],
        10 => &["global-orbit-eq"],
        _ => &[],
    }
}

/// Ledger helper used by reports: the value and derivative of a ledger
/// scaled by a rational.
pub fn scaled(l: &ConstLedger, r: &Rat) -> ConstLedger {
    l.scale(r)
}
