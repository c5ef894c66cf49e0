//! `repdense`: local densities, volumes, zeta functions, orbit censuses and
//! identity checks from the command line.
//!
//! Exit codes: 0 when no check failed, 1 when a check failed, 2 for usage
//! and input errors, 3 when an enumeration exceeds the size guard.

use clap::{Args, Parser, Subcommand};
use repdense::arch::gamma_nm;
use repdense::counting::{beta_n1_poly, omega_table, BlockForm};
use repdense::error::Error;
use repdense::exact::{fmt_rat, parse_rat, pow_p, Rat};
use repdense::global::{lambda_tilde_inv, reproduce_examples, verify_global_orbit_eq, Example, GenusSpec};
use repdense::lambda::lambda_closed;
use repdense::lattice::{Coset, DiagLattice, LatticeSpec};
use repdense::modular::{item5, local_report};
use repdense::orbits::{census_bruteforce, census_unimodular, verify_orbit_equation, verify_orbit_equation_elementary, verify_unimodular_line};
use repdense::report::Check;
use repdense::suites::{run_suite, SuiteReport, Verdict, SUITES};
use repdense::yang::yang_beta;
use repdense::zeta::{zeta2_closed, zeta_closed, zeta_from_counts};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "repdense", version, about = "Local densities and orbit equations for quadratic forms")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct LatticeArg {
    /// Lattice file: {"p":3,"diag":[{"unit":1,"exp":0}]} or {"p":3,"gram":[[..]]}.
    #[arg(long)]
    lattice: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Solution counts Omega(j) of Q(x) = q mod p^j.
    Count {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long)]
        q: String,
        /// Largest level j.
        #[arg(long, default_value_t = 4)]
        j: u32,
        /// Coset of L*/L, e.g. "0,1/3".
        #[arg(long)]
        coset: Option<String>,
    },
    /// beta(L + H^s, <q>) as a polynomial in X = p^-s, by counting.
    Beta {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long)]
        q: String,
        /// Series length; required for q = 0.
        #[arg(long)]
        kmax: Option<u32>,
        #[arg(long)]
        coset: Option<String>,
        /// Also evaluate at this s.
        #[arg(long)]
        s: Option<i64>,
    },
    /// beta(L + H^s, <q>) from the closed formula.
    Yang {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long)]
        q: String,
        /// Cut for q = 0.
        #[arg(long)]
        kmax: Option<u32>,
        #[arg(long)]
        s: Option<i64>,
    },
    /// lambda(L; s) and vol SO'(L) = lambda(L; 0).
    Lambda {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long)]
        s: Option<i64>,
    },
    /// Local zeta function in X = p^-s.
    Zeta {
        #[command(flatten)]
        lattice: LatticeArg,
        /// Also fit the counted series with this many terms and compare.
        #[arg(long)]
        counts: Option<u32>,
    },
    /// Orbits of SO'(L) on the vectors of length q.
    Orbits {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long)]
        q: String,
        /// Partition the solutions by brute force instead of the closed census.
        #[arg(long)]
        bruteforce: bool,
        /// Level for the brute-force partition.
        #[arg(long)]
        k: Option<u32>,
    },
    /// Gamma_{n,m}(s) with its logarithmic derivative.
    Arch {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
        #[arg(long, default_value_t = 0)]
        s: i64,
    },
    /// lambda~^-1 at s = 0 with its derivative, for a worked genus or a genus file.
    Global {
        /// heegner:D, modular:N, shimura:N, hilbert:D, siegel:N or e8.
        #[arg(long, conflicts_with = "genus")]
        example: Option<String>,
        #[arg(long)]
        genus: Option<PathBuf>,
        /// Compare with the stated value after solving for C.
        #[arg(long)]
        compare: bool,
        /// Verify the global orbit equation for x1 x2 - x3^2 at this q.
        #[arg(long, conflicts_with_all = ["example", "genus"])]
        orbit_q: Option<u64>,
    },
    /// Traces of special vectors for x1 x2 - x3^2.
    ModularCurve {
        /// Local report at this odd prime; the global comparison otherwise.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        q: u64,
        /// Largest odd prime included in the global comparison.
        #[arg(long, default_value_t = 30)]
        bound: u64,
    },
    /// Run a verification suite, or check one instance with --lattice/--q.
    Verify {
        /// One of the suite names, or "all".
        suite: String,
        #[arg(long)]
        lattice: Option<PathBuf>,
        #[arg(long)]
        q: Option<String>,
        /// Add the brute-force census check (orbit-eq).
        #[arg(long)]
        bruteforce: bool,
    },
}

/// Output of one command: results plus named verdicts.
struct Run {
    results: Value,
    text: Vec<String>,
    verdicts: Vec<(String, Verdict, Vec<Check>)>,
}

impl Run {
    fn new(results: Value, text: Vec<String>) -> Self {
        Run { results, text, verdicts: Vec::new() }
    }

    fn verdict(&mut self, name: &str, checks: Vec<Check>) {
        let failed = checks.iter().filter(|c| !c.holds).count();
        let v = if failed == 0 {
            Verdict::Pass
        } else {
            Verdict::Fail(format!("{failed} of {} checks failed", checks.len()))
        };
        self.verdicts.push((name.into(), v, checks));
    }

    fn suite(&mut self, r: SuiteReport) {
        self.verdicts.push((r.name.clone(), r.verdict.clone(), r.checks));
        self.text.extend(r.notes.iter().map(|n| format!("note ({}): {n}", r.name)));
    }

    fn failed(&self) -> bool {
        self.verdicts.iter().any(|(_, v, _)| v.is_fail())
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

fn read_json(path: &PathBuf) -> Result<Value, Error> {
    let s = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load(path: &PathBuf) -> Result<(Value, DiagLattice), Error> {
    let v = read_json(path)?;
    let l = LatticeSpec::from_json(&v)?.to_diag()?;
    Ok((v, l))
}

fn coset(l: &DiagLattice, s: &Option<String>) -> Result<Coset, Error> {
    match s {
        Some(s) => Coset::parse(l, s),
        None => Ok(Coset::trivial(l)),
    }
}

fn x_at(l: &DiagLattice, s: i64) -> Rat {
    pow_p(l.p(), -s)
}

fn parse_example(s: &str) -> Result<Example, Error> {
    if s == "e8" {
        return Ok(Example::E8TwoPlanes);
    }
    let (kind, n) = s.split_once(':').ok_or_else(|| usage(format!("bad example '{s}'")))?;
    let n: u64 = n.parse().map_err(|_| usage(format!("bad example parameter '{n}'")))?;
    Ok(match kind {
        "heegner" => Example::Heegner(n),
        "modular" => Example::ModularCurve(n),
        "shimura" => Example::ShimuraCurve(n),
        "hilbert" => Example::Hilbert(n),
        "siegel" => Example::Siegel(n),
        _ => return Err(usage(format!("unknown example family '{kind}'"))),
    })
}

/// Input digest: FNV-1a over the command line and the input files.
fn digest(argv: &[String], files: &[Value]) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    let mut feed = |bytes: &[u8]| {
        for b in bytes {
            h ^= *b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    };
    for a in argv.iter().skip(1) {
        feed(a.as_bytes());
        feed(&[0]);
    }
    for f in files {
        feed(f.to_string().as_bytes());
    }
    format!("{h:016x}")
}

fn run(cmd: &Command, files: &mut Vec<Value>) -> Result<Run, Error> {
    Ok(match cmd {
        Command::Count { lattice, q, j, coset: c } => {
            let (v, l) = load(&lattice.lattice)?;
            files.push(v);
            let q = parse_rat(q)?;
            let form = BlockForm::from_diag(&l, &coset(&l, c)?)?;
            let table = omega_table(&form, &q, *j)?;
            let counts: Vec<String> = table.iter().map(|c| c.to_string()).collect();
            let text = counts.iter().enumerate().map(|(j, c)| format!("Omega({j}) = {c}")).collect();
            Run::new(json!({ "lattice": l.to_json(), "q": fmt_rat(&q), "omega": counts }), text)
        }
        Command::Beta { lattice, q, kmax, coset: c, s } => {
            let (v, l) = load(&lattice.lattice)?;
            files.push(v);
            let q = parse_rat(q)?;
            if q == Rat::from_integer(0.into()) && kmax.is_none() {
                return Err(usage("q = 0 needs --kmax (the series is infinite)"));
            }
            let b = beta_n1_poly(&l, &coset(&l, c)?, &q, *kmax)?;
            let mut text = vec![format!("beta({l}, {}) = {}", fmt_rat(&q), b.poly)];
            let mut res = json!({ "lattice": l.to_json(), "q": fmt_rat(&q), "beta": b.to_json() });
            if b.truncated {
                text.push(format!("series cut after X^{}", b.w));
            }
            if let Some(s) = s {
                let val = b.poly.eval(&x_at(&l, *s))?;
                text.push(format!("at s = {s}: {}", fmt_rat(&val)));
                res["at_s"] = json!({ "s": s, "value": fmt_rat(&val) });
            }
            Run::new(res, text)
        }
        Command::Yang { lattice, q, kmax, s } => {
            let (v, l) = load(&lattice.lattice)?;
            files.push(v);
            let q = parse_rat(q)?;
            let y = yang_beta(&l, &q, *kmax)?;
            let mut text = vec![format!("beta({l}, {}) = {}", fmt_rat(&q), y.poly)];
            let mut res = json!({ "lattice": l.to_json(), "q": fmt_rat(&q), "yang": y.to_json() });
            if y.truncated {
                text.push(format!("series cut after X^{}", y.k_max));
            }
            if let Some(s) = s {
                let val = y.poly.eval(&x_at(&l, *s))?;
                text.push(format!("at s = {s}: {}", fmt_rat(&val)));
                res["at_s"] = json!({ "s": s, "value": fmt_rat(&val) });
            }
            Run::new(res, text)
        }
        Command::Lambda { lattice, s } => {
            let (v, l) = load(&lattice.lattice)?;
            files.push(v);
            let lam = lambda_closed(&l)?;
            let zero = lam.at_zero()?;
            let mut text = vec![format!("lambda({l}; s) = {}", lam.value), format!("vol SO'({l}) = {zero}")];
            if lam.source.asserted_only() {
                text.push(format!("source: {} (asserted, not checked by counting)", lam.source.name()));
            }
            let mut res = json!({ "lattice": l.to_json(), "lambda": lam.to_json(), "vol_so_prime": zero.to_string() });
            if let Some(s) = s {
                let val = lam.value.eval(&x_at(&l, *s))?;
                text.push(format!("at s = {s}: {val}"));
                res["at_s"] = json!({ "s": s, "value": val.to_string() });
            }
            Run::new(res, text)
        }
        Command::Zeta { lattice, counts } => {
            let (v, l) = load(&lattice.lattice)?;
            files.push(v);
            let z = if l.dim() == 2 { zeta2_closed(&l)? } else { zeta_closed(&l)? };
            let text = vec![format!("zeta({l}) = {}", z.value)];
            let mut run = Run::new(json!({ "lattice": l.to_json(), "zeta": z.to_json() }), text);
            if let Some(n) = counts {
                let c = zeta_from_counts(&l, *n)?;
                let check = match &c.fitted {
                    Some(f) => Check::eq("closed form against counted series", &z.value, f),
                    None => Check::new("closed form against counted series", "no rational fit", &z.value, false),
                };
                run.verdict("zeta", vec![check]);
            }
            run
        }
        Command::Orbits { lattice, q, bruteforce, k } => {
            let (v, l) = load(&lattice.lattice)?;
            files.push(v);
            let q = parse_rat(q)?;
            let c = if *bruteforce { census_bruteforce(&l, &q, *k)? } else { census_unimodular(&l, &q)? };
            let mut text = vec![format!("{} orbits on Q(x) = {} in {l}", c.len(), fmt_rat(&q))];
            for (i, o) in c.orbits.iter().enumerate() {
                let rep: Vec<String> = o.representative.iter().map(|x| x.to_string()).collect();
                let perp = o.perp.as_ref().map(|p| p.to_string()).unwrap_or_else(|| "-".into());
                text.push(format!("  {i}: ({}) perp {perp}", rep.join(", ")));
            }
            Run::new(c.to_json(), text)
        }
        Command::Arch { n, m, s } => {
            let g = gamma_nm(*n, *m, *s)?;
            let text = vec![format!("Gamma_{{{n},{m}}}({s}) = {}", g.value), format!("log derivative = {}", g.dlog)];
            Run::new(g.to_json(), text)
        }
        Command::Global { example, genus, compare, orbit_q } => {
            if let Some(q) = orbit_q {
                let r = verify_global_orbit_eq(*q, 50)?;
                let mut run = Run::new(r.to_json(), vec![format!("global orbit equation, q = {q}")]);
                run.verdict("global-orbit-eq", r.checks.clone());
                return Ok(run);
            }
            let (g, ex) = match (example, genus) {
                (Some(e), _) => {
                    let ex = parse_example(e)?;
                    (ex.genus()?, Some(ex))
                }
                (None, Some(path)) => {
                    let v = read_json(path)?;
                    let g = GenusSpec::from_json(&v)?;
                    files.push(v);
                    (g, None)
                }
                (None, None) => return Err(usage("global needs --example, --genus or --orbit-q")),
            };
            let e = lambda_tilde_inv(&g)?;
            let text = vec![
                format!("{}: lambda~^-1(0) = {}", g.name, e.value),
                format!("derivative / value = {}", e.dlog),
            ];
            let mut run = Run::new(json!({ "genus": g.to_json(), "expansion": e.to_json() }), text);
            if *compare {
                let ex = ex.ok_or_else(|| usage("--compare needs --example"))?;
                let (c, reports) = reproduce_examples(&[ex])?;
                run.text.push(format!("C = {c}"));
                for r in reports {
                    run.results["comparison"] = r.to_json();
                    run.verdict(&r.example.name(), r.checks);
                }
            }
            run
        }
        Command::ModularCurve { p, q, bound } => match p {
            Some(p) => {
                let r = local_report(*p, *q)?;
                let text = vec![format!("local traces at p = {p}, q = {q}"), serde_json::to_string_pretty(&r).unwrap()];
                Run::new(r, text)
            }
            None => {
                let g = item5(*q, *bound)?;
                let mut run = Run::new(json!({ "q": q, "odd_primes": g.odd_primes }), vec![format!("global traces, q = {q}")]);
                run.text.push("note: the two sides agree up to a rational function of 2^-s".into());
                run.verdict("modular-curve item 5 (mod 2-adic factor)", g.checks);
                run
            }
        },
        Command::Verify { suite, lattice, q, bruteforce } => verify(suite, lattice, q, *bruteforce, files)?,
    })
}

fn verify(suite: &str, lattice: &Option<PathBuf>, q: &Option<String>, brute: bool, files: &mut Vec<Value>) -> Result<Run, Error> {
    let Some(path) = lattice else {
        let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
        let mut run = Run::new(json!({ "suites": names }), vec![]);
        for n in names {
            run.suite(run_suite(n)?);
        }
        return Ok(run);
    };
    let (v, l) = load(path)?;
    files.push(v);
    let q = q.as_deref().map(parse_rat).transpose()?;
    let need_q = || q.clone().ok_or_else(|| usage(format!("verify {suite} with --lattice needs --q")));
    let mut run = Run::new(json!({ "suite": suite, "lattice": l.to_json(), "q": q.as_ref().map(fmt_rat) }), vec![]);
    match suite {
        "orbit-eq" => {
            let q = need_q()?;
            let mut checks = vec![verify_orbit_equation(&l, &q)?];
            if let Ok(more) = verify_unimodular_line(&l, &q) {
                checks.extend(more);
            }
            if brute {
                checks.extend(verify_orbit_equation_elementary(&l, &q, None)?);
            }
            run.verdict("orbit-eq", checks);
        }
        "yang-vs-oracle" => {
            let q = need_q()?;
            let y = yang_beta(&l, &q, None)?;
            let c = beta_n1_poly(&l, &Coset::trivial(&l), &q, None)?;
            run.verdict("yang-vs-oracle", vec![Check::eq(format!("yang vs counting, {l}"), &y.poly, &c.poly)]);
        }
        "zeta" => {
            let z = if l.dim() == 2 { zeta2_closed(&l)? } else { zeta_closed(&l)? };
            let c = zeta_from_counts(&l, 16)?;
            let check = match &c.fitted {
                Some(f) => Check::eq(format!("zeta({l}) closed against counted"), &z.value, f),
                None => Check::new(format!("zeta({l}) closed against counted"), "no rational fit", &z.value, false),
            };
            run.verdict("zeta", vec![check]);
        }
        _ => return Err(usage(format!("suite '{suite}' does not take --lattice"))),
    }
    Ok(run)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SizeGuard { .. } => 3,
        Error::Identity(_) | Error::Inconsistent(_) | Error::NotStabilized(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let mut files = Vec::new();
    let start = std::time::Instant::now();
    let run = match run(&cli.command, &mut files) {
        Ok(r) => r,
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "command": &argv[1..], "error": e.to_string() }));
            }
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let failed = run.failed();
    let mut out = std::io::stdout().lock();
    if cli.json {
        let verdicts: Vec<Value> = run
            .verdicts
            .iter()
            .map(|(name, v, checks)| {
                json!({
                    "name": name,
                    "verdict": v.to_json(),
                    "checks": checks.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let report = json!({
            "command": &argv[1..],
            "inputs_digest": digest(&argv, &files),
            "results": run.results,
            "verdicts": verdicts,
        });
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        for line in &run.text {
            let _ = writeln!(out, "{line}");
        }
        for (name, v, checks) in &run.verdicts {
            let _ = writeln!(out, "{name}: {v} [{} checks]", checks.len());
            for c in checks.iter().filter(|c| !c.holds).take(20) {
                let _ = writeln!(out, "    {c}");
            }
        }
        if std::env::var_os("REPDENSE_TIMING").is_some() {
            eprintln!("elapsed: {:.2}s", start.elapsed().as_secs_f64());
        }
    }
    if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
