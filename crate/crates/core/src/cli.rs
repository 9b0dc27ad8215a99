//! Command-line front end. [`run`] parses arguments, executes one
//! subcommand and renders the report; `main` only forwards the outcome.

use std::collections::BTreeSet;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::adversary::{adversarial_gamma, no_multiples_check};
use crate::approx::{oracle_min, pigeonhole_witness, residue_min, transfer_search};
use crate::config::Limits;
use crate::constants::{compute_constants, explicit_bound_with};
use crate::diffsets::{m_plus, m_plus_db, positive_differences, Variant};
use crate::digitsets::{Base, SetKind, SetSpec};
use crate::discrepancy::{discrepancy_l, erdos_turan_check};
use crate::error::{Error, Result};
use crate::exact::{parse_real, Rational, RealValue};
use crate::expsum::{decay_check, eval_expsum, hypothesis_check, small_shift_count};
use crate::verify::{run_all, Scale, DEFAULT_SEED};

pub const CONFIG_ENV: &str = "RADIX_APPROX_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Oracle,
    Residue,
    Pigeonhole,
    Transfer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SetArg {
    Db,
    DbStar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    M1,
    M2,
}

#[derive(Debug, Parser)]
#[command(name = "radix-approx", version, about = "Rational approximation with 0/1-digit denominators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<std::path::PathBuf>,
    /// Worker threads; never changes results.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Precision of named-constant enclosures (at least 64).
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    /// Largest number of set elements any enumeration may visit.
    #[arg(long, global = true)]
    enumeration_cap: Option<u64>,
    /// Search-node budget for the difference-set solver.
    #[arg(long, global = true)]
    node_budget: Option<u64>,
    /// Seed for the randomised checks of verify-all.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Omit wall-clock time so identical runs give identical bytes.
    #[arg(long, global = true)]
    reproducible: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Witness for min ||gamma n|| over D_b or D_b* up to N.
    Search {
        #[arg(long)]
        base: u64,
        #[arg(long)]
        limit: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        #[arg(long, value_enum, default_value = "oracle")]
        method: Method,
        #[arg(long, value_enum, default_value = "db")]
        set: SetArg,
    },
    /// Largest J with all positive differences in S.
    Diffset {
        #[arg(long)]
        base: Option<u64>,
        #[arg(long)]
        limit: Option<String>,
        /// Explicit S as comma-separated positive integers.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<i64>>,
        #[arg(long, value_enum, default_value = "m1")]
        variant: VariantArg,
    },
    /// Digit-restricted exponential sum; with --m also the decay check.
    Expsum {
        #[arg(long)]
        base: u64,
        #[arg(long)]
        r: u32,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        #[arg(long)]
        m: Option<u32>,
        /// Threshold for the hypothesis and small-shift count.
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        exclude_zero: bool,
    },
    /// Discrepancy of x_n = n gamma (n = 1..T) or of explicit points.
    Discrepancy {
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        #[arg(long)]
        count: Option<u64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        points: Option<Vec<String>>,
        /// Erdos-Turan cutoff.
        #[arg(long = "G")]
        g: Option<u64>,
    },
    /// Adversarial gamma certificate, or the no-multiples check with --k --t.
    Adversary {
        #[arg(long)]
        base: u64,
        #[arg(long)]
        count: Option<String>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        t: Option<u32>,
        #[arg(long, default_value_t = 6)]
        e_max: u32,
    },
    /// Effective constants, and the explicit bound at N when --limit is set.
    Constants {
        #[arg(long)]
        base: u64,
        #[arg(long)]
        limit: Option<String>,
    },
    /// Runs the eleven acceptance checks.
    VerifyAll {
        #[arg(long)]
        quick: bool,
    },
}

/// Effective run configuration, recorded in every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub enumeration_cap: u64,
    pub node_budget: u64,
    pub output_format: Format,
    pub seed: u64,
    pub tolerance: Rational,
    pub reproducible: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let l = Limits::default();
        RunConfig {
            precision_bits: l.precision_bits,
            enumeration_cap: l.enumeration_cap,
            node_budget: l.node_budget,
            output_format: Format::Json,
            seed: DEFAULT_SEED,
            tolerance: Rational::new(1, 1_000_000_000u64),
            reproducible: false,
        }
    }
}

impl RunConfig {
    /// Applies `key=value` lines; `#` starts a comment.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key=value", no + 1)))?;
            let (k, v) = (k.trim().replace('_', "-"), v.trim());
            let bad = |what: &str| Error::Parse(format!("config line {}: bad {what} {v:?}", no + 1));
            match k.as_str() {
                "precision-bits" => self.precision_bits = v.parse().map_err(|_| bad("integer"))?,
                "enumeration-cap" => self.enumeration_cap = v.parse().map_err(|_| bad("integer"))?,
                "node-budget" => self.node_budget = v.parse().map_err(|_| bad("integer"))?,
                "seed" => self.seed = v.parse().map_err(|_| bad("integer"))?,
                "tolerance" => self.tolerance = v.parse()?,
                "reproducible" => self.reproducible = v.parse().map_err(|_| bad("boolean"))?,
                "output-format" => {
                    self.output_format = Format::from_str(v, true).map_err(|_| bad("format"))?
                }
                _ => return Err(Error::Parse(format!("config line {}: unknown key {k:?}", no + 1))),
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if self.precision_bits < 64 {
            return Err(Error::domain("precision-bits must be at least 64"));
        }
        if self.enumeration_cap == 0 || self.node_budget == 0 {
            return Err(Error::domain("caps must be positive"));
        }
        if self.tolerance.is_negative() {
            return Err(Error::domain("tolerance must be non-negative"));
        }
        Ok(())
    }

    pub fn limits(&self) -> Limits {
        Limits {
            precision_bits: self.precision_bits,
            enumeration_cap: self.enumeration_cap,
            node_budget: self.node_budget,
            ..Limits::default()
        }
    }
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    subcommand: &'a str,
    config: &'a RunConfig,
    result: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<u64>,
}

/// One CSV row; columns follow the fixed header.
#[derive(Default)]
struct Row {
    sub: String,
    b: String,
    n: String,
    witness: String,
    dist: Option<Rational>,
    bound: String,
    passed: String,
}

struct Report {
    name: &'static str,
    value: Value,
    rows: Vec<Row>,
    /// A check that ran to completion but failed (verify-all).
    failed: bool,
}

/// Parses `123`, `b^e` or `b**e` as a non-negative integer.
fn parse_big(s: &str) -> Result<BigUint> {
    let s = s.trim();
    let pow = s.split_once('^').or_else(|| s.split_once("**"));
    let bad = || Error::Parse(format!("not a non-negative integer: {s:?}"));
    match pow {
        Some((a, e)) => {
            let a: BigUint = a.trim().parse().map_err(|_| bad())?;
            let e: u32 = e.trim().parse().map_err(|_| bad())?;
            Ok(a.pow(e))
        }
        None => s.parse().map_err(|_| bad()),
    }
}

fn parse_u128(s: &str) -> Result<u128> {
    let v = parse_big(s)?;
    u128::try_from(&v).map_err(|_| Error::overflow(format!("{s} exceeds u128")))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn distance_row(sub: &str, b: Base, n: u128, witness: u128, d: &RealValue, bound: Option<&Rational>) -> Row {
    let passed = match (d.as_exact(), bound) {
        (Some(x), Some(g)) => (x <= g).to_string(),
        _ => String::new(),
    };
    Row {
        sub: sub.into(),
        b: b.to_string(),
        n: n.to_string(),
        witness: witness.to_string(),
        dist: Some(d.mid().clone()),
        bound: bound.map(|g| g.to_string()).unwrap_or_default(),
        passed,
    }
}

fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Report> {
    let limits = cfg.limits();
    let bits = cfg.precision_bits;
    Ok(match cmd {
        Command::Search {
            base,
            limit,
            gamma,
            method,
            set,
        } => {
            let b = Base::new(*base)?;
            let n = parse_u128(limit)?;
            let g = parse_real(gamma, bits)?;
            let (res, extra) = match (method, set) {
                (Method::Oracle, SetArg::Db) => (oracle_min(&g, &SetSpec::db(b), n, &limits)?, None),
                (Method::Oracle, SetArg::DbStar) => {
                    let spec = SetSpec::new(b, SetKind::DbStar)?;
                    (oracle_min(&g, &spec, n, &limits)?, None)
                }
                (Method::Residue, SetArg::Db) => {
                    let q = g
                        .as_exact()
                        .ok_or_else(|| Error::domain("the residue method needs an exact gamma"))?;
                    (residue_min(q, b, n, &limits)?, None)
                }
                (Method::Pigeonhole, SetArg::Db) => (pigeonhole_witness(&g, b, n)?, None),
                (Method::Transfer, SetArg::Db) => {
                    let (r, t) = transfer_search(&g, b, n, &limits)?;
                    (r, Some(to_value(&t)))
                }
                _ => return Err(Error::domain("this method only searches D_b")),
            };
            res.verify(&g)?;
            let mut value = to_value(&res);
            if let Some(t) = extra {
                value["transfer"] = t;
            }
            let row = distance_row("search", b, n, res.witness, &res.distance, res.guarantee.as_ref());
            Report {
                name: "search",
                value,
                rows: vec![row],
                failed: false,
            }
        }
        Command::Diffset {
            base,
            limit,
            values,
            variant,
        } => {
            let v = match variant {
                VariantArg::M1 => Variant::M1,
                VariantArg::M2 => Variant::M2,
            };
            let (rep, b, n) = match (values, base, limit) {
                (Some(vals), _, _) => {
                    let s: BTreeSet<i64> = vals.iter().copied().collect();
                    (m_plus(&s, v, None, &limits)?, String::new(), String::new())
                }
                (None, Some(b), Some(l)) => {
                    let b = Base::new(*b)?;
                    let n = parse_u128(l)?;
                    (m_plus_db(b, n, v, &limits)?, b.to_string(), n.to_string())
                }
                _ => return Err(Error::domain("give --values, or --base with --limit")),
            };
            let j: BTreeSet<i64> = rep.witness.iter().copied().collect();
            let d: Vec<i64> = positive_differences(&j).into_iter().collect();
            let mut value = to_value(&rep);
            value["witness_differences"] = to_value(&d);
            let row = Row {
                sub: "diffset".into(),
                b,
                n,
                witness: rep
                    .witness
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                dist: None,
                bound: rep.bound.map(|x| x.to_string()).unwrap_or_default(),
                passed: rep
                    .bound
                    .map(|c| (rep.value as u64 <= c).to_string())
                    .unwrap_or_default(),
            };
            Report {
                name: "diffset",
                value,
                rows: vec![row],
                failed: false,
            }
        }
        Command::Expsum {
            base,
            r,
            k,
            gamma,
            m,
            beta,
            exclude_zero,
        } => {
            let b = Base::new(*base)?;
            let g = parse_real(gamma, bits)?;
            let tol = cfg.tolerance.to_f64();
            let mut value;
            let (bound, passed) = if let Some(m) = m {
                let rep = decay_check(b, *r, *k, *m, &g, &limits)?;
                let bound = rep.decay_bound.as_ref().expect("set").to_f64();
                let passed = rep.magnitude_f64() <= bound + tol;
                value = to_value(&rep);
                (bound, passed)
            } else {
                let rep = eval_expsum(b, *r, *k, &g, *exclude_zero, &limits)?;
                let bound = rep.bound_f64();
                let passed = rep.bound_holds && rep.identity_holds.unwrap_or(true);
                value = to_value(&rep);
                (bound, passed)
            };
            if let Some(beta) = beta {
                let beta: Rational = beta.parse()?;
                if *k >= 1 {
                    value["small_shifts"] = to_value(&small_shift_count(b, *r, *k, &g, &beta, &limits)?);
                } else {
                    value["hypothesis"] = to_value(&hypothesis_check(b, *r, &beta, &g, &limits)?);
                }
            }
            let row = Row {
                sub: "expsum".into(),
                b: b.to_string(),
                bound: format!("{bound:e}"),
                passed: passed.to_string(),
                ..Row::default()
            };
            Report {
                name: "expsum",
                value,
                rows: vec![row],
                failed: false,
            }
        }
        Command::Discrepancy {
            gamma,
            count,
            points,
            g,
        } => {
            let pts: Vec<RealValue> = match (points, gamma, count) {
                (Some(p), _, _) => p.iter().map(|s| parse_real(s, bits)).collect::<Result<_>>()?,
                (None, Some(gm), Some(t)) => {
                    let gv = parse_real(gm, bits)?;
                    if *t > limits.enumeration_cap {
                        return Err(Error::limit("sequence length", t, limits.enumeration_cap));
                    }
                    (1..=*t).map(|n| gv.mul_int(&n.into())).collect()
                }
                _ => return Err(Error::domain("give --points, or --gamma with --count")),
            };
            let rep = match g {
                Some(g) => erdos_turan_check(&pts, *g)?,
                None => discrepancy_l(&pts)?,
            };
            let row = Row {
                sub: "discrepancy".into(),
                n: rep.t.to_string(),
                dist: Some(rep.l_value.mid().clone()),
                bound: rep.et_rhs.as_ref().map(|r| format!("{:e}", r.to_f64())).unwrap_or_default(),
                passed: if rep.et_rhs.is_some() { "true".into() } else { String::new() },
                ..Row::default()
            };
            Report {
                name: "discrepancy",
                value: to_value(&rep),
                rows: vec![row],
                failed: false,
            }
        }
        Command::Adversary {
            base,
            count,
            k,
            t,
            e_max,
        } => {
            let b = Base::new(*base)?;
            match (count, k, t) {
                (Some(c), _, _) => {
                    let n = parse_u128(c)?;
                    let cert = adversarial_gamma(b, n, &limits)?;
                    let row = Row {
                        sub: "adversary".into(),
                        b: b.to_string(),
                        n: n.to_string(),
                        witness: cert.min_witness_index.to_string(),
                        dist: Some(cert.min_distance.clone()),
                        bound: cert.lower_bound.mid().to_string(),
                        passed: cert.passed.to_string(),
                    };
                    Report {
                        name: "adversary",
                        value: to_value(&cert),
                        rows: vec![row],
                        failed: false,
                    }
                }
                (None, Some(k), Some(t)) => {
                    let nm = no_multiples_check(b, *k, *t, *e_max, &limits)?;
                    let row = Row {
                        sub: "adversary".into(),
                        b: b.to_string(),
                        witness: nm.counterexample.map(|x| x.to_string()).unwrap_or_default(),
                        passed: nm.holds.to_string(),
                        ..Row::default()
                    };
                    Report {
                        name: "adversary",
                        value: to_value(&nm),
                        rows: vec![row],
                        failed: false,
                    }
                }
                _ => return Err(Error::domain("give --count, or --k with --t")),
            }
        }
        Command::Constants { base, limit } => {
            let b = Base::new(*base)?;
            let consts = compute_constants(b)?;
            let mut value = to_value(&consts);
            let mut row = Row {
                sub: "constants".into(),
                b: b.to_string(),
                ..Row::default()
            };
            if let Some(l) = limit {
                let n = parse_big(l)?;
                let e = explicit_bound_with(&consts, &n)?;
                row.n = n.to_string();
                row.dist = e.db_bound.clone();
                row.bound = e.db_bound.as_ref().map(|x| x.to_string()).unwrap_or_default();
                row.passed = (!e.vacuous).to_string();
                value["explicit_bound"] = to_value(&e);
            }
            Report {
                name: "constants",
                value,
                rows: vec![row],
                failed: false,
            }
        }
        Command::VerifyAll { quick } => {
            let scale = if *quick { Scale::Quick } else { Scale::Full };
            let outcomes = run_all(scale, cfg.seed, &limits);
            let failed = outcomes.iter().any(|o| !o.passed);
            let rows = outcomes
                .iter()
                .map(|o| Row {
                    sub: format!("verify-all:{}", o.id),
                    passed: o.passed.to_string(),
                    ..Row::default()
                })
                .collect();
            Report {
                name: "verify-all",
                value: json!({ "scale": scale, "criteria": outcomes }),
                rows,
                failed,
            }
        }
    })
}

fn render_csv(rows: &[Row]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse(format!("csv: {e}"));
    w.write_record(["subcommand", "b", "N", "witness", "distance_num", "distance_den", "bound", "passed"])
        .map_err(io)?;
    for r in rows {
        let (num, den) = match &r.dist {
            Some(d) => (d.numer().to_string(), d.denom().to_string()),
            None => (String::new(), String::new()),
        };
        w.write_record([&r.sub, &r.b, &r.n, &r.witness, &num, &den, &r.bound, &r.passed])
            .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn render_human(name: &str, v: &Value) -> String {
    let mut out = format!("{name}\n");
    if let Value::Object(map) = v {
        for (k, x) in map {
            let s = match x {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("  {k}: {s}\n"));
        }
    } else {
        out.push_str(&format!("  {v}\n"));
    }
    out
}

/// Runs the tool on `argv` (program name first). `config_file` is the text
/// of the file named by [`CONFIG_ENV`], if any.
pub fn run(argv: &[String], config_file: Option<&str>) -> Outcome {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let err = |e: Error| Outcome {
        code: e.exit_code(),
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    };

    let mut cfg = RunConfig::default();
    if let Some(text) = config_file {
        if let Err(e) = cfg.apply_file(text) {
            return err(e);
        }
    }
    if let Some(f) = cli.format {
        cfg.output_format = f;
    }
    if let Some(p) = cli.precision_bits {
        cfg.precision_bits = p;
    }
    if let Some(c) = cli.enumeration_cap {
        cfg.enumeration_cap = c;
    }
    if let Some(n) = cli.node_budget {
        cfg.node_budget = n;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.reproducible |= cli.reproducible;
    if let Err(e) = cfg.validate() {
        return err(e);
    }

    let start = Instant::now();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => return err(Error::domain(format!("thread pool: {e}"))),
    };
    let report = match pool.install(|| execute(&cli.command, &cfg)) {
        Ok(r) => r,
        Err(e) => return err(e),
    };
    let wall = (!cfg.reproducible).then(|| start.elapsed().as_millis() as u64);

    let text = match cfg.output_format {
        Format::Json => {
            let env = Envelope {
                tool: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                subcommand: report.name,
                config: &cfg,
                result: &report.value,
                wall_time_ms: wall,
            };
            let mut s = serde_json::to_string_pretty(&env).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => match render_csv(&report.rows) {
            Ok(s) => s,
            Err(e) => return err(e),
        },
        Format::Human => render_human(report.name, &report.value),
    };
    let code = if report.failed { 2 } else { 0 };
    let stderr = if report.failed {
        "error: at least one acceptance check failed\n".to_string()
    } else {
        String::new()
    };
    match &cli.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome {
                code,
                stdout: String::new(),
                stderr,
            },
            Err(e) => err(Error::domain(format!("cannot write {}: {e}", path.display()))),
        },
        None => Outcome {
            code,
            stdout: text,
            stderr,
        },
    }
}
