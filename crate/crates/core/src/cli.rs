//! Command-line front end: one verb per verification, every effective
//! parameter echoed in the report header, deterministic CSV or JSON-lines rows.
//!
//! Exit status is 0 when a run completes or passes, 2 when a check fails and 1
//! on usage errors, which also print the verb's parameter schema.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Arg, ArgAction, ArgMatches, Command};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::arith::{gcd, kloosterman, kloosterman_direct, primes_up_to, ramanujan};
use crate::forms::{
    default_cache_dir, delta_oracle, hecke_check, lmfdb_base_url, load_form, ramanujan_tau,
    write_coefficient_file, CoefficientSource, CuspForm,
};
use crate::lfunc::{moment_bound, second_moment_geometric, smoothed_pair_sum};
use crate::quad::{transform_hat, transform_tilde, QuadConfig, SmoothWindow, SpectralParam};
use crate::specialfn::{voronoi_kernel, KernelKind, Sign};
use crate::traceverify::{
    jutila_build, jutila_l2_error, large_sieve_bound, large_sieve_lhs, petersson_geometric_r,
    petersson_rank1_check, random_instance, rational_approx, voronoi_lhs, voronoi_rhs,
    CoefficientLaw,
};
use crate::typecalc::{
    fixture_bump, fixture_exponential, fixture_kernel_i, fixture_product, fixture_w_delta,
    fixture_wrong_exponential, multi_indices, verify_type, KernelFixtureParams, VerifyOptions,
    WDeltaParams,
};
use crate::VERSION;

/// One parameter of a verb: flag name, default, help text.
#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub key: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

#[derive(Debug, Clone, Copy)]
pub struct VerbSpec {
    pub name: &'static str,
    pub about: &'static str,
    pub params: &'static [ParamSpec],
}

const fn p(key: &'static str, default: &'static str, help: &'static str) -> ParamSpec {
    ParamSpec { key, default, help }
}

pub const VERBS: &[VerbSpec] = &[
    VerbSpec {
        name: "arith",
        about: "Kloosterman fast path against direct sums, Weil bound at primes, Ramanujan sums",
        params: &[
            p(
                "c-max",
                "500",
                "largest modulus for the Kloosterman comparison",
            ),
            p("mn-max", "20", "m, n range over [1, mn-max]"),
            p("p-max", "2000", "largest prime for the Weil bound"),
            p("d-max", "500", "largest modulus for Ramanujan sums"),
            p("k-max", "50", "Ramanujan sums for |k| <= k-max"),
        ],
    },
    VerbSpec {
        name: "bessel",
        about: "Tabulate a Voronoi kernel J^{+/-}(y)",
        params: &[
            p("kind", "holomorphic", "holomorphic or maass"),
            p("weight", "12", "weight k of a holomorphic form"),
            p("t", "1.0", "spectral parameter of a Maass form"),
            p("sign", "plus", "plus or minus"),
            p("y-min", "0.05", "first y"),
            p("y-max", "5.0", "last y"),
            p("points", "40", "number of y values, geometrically spaced"),
        ],
    },
    VerbSpec {
        name: "transform",
        about: "Bessel transforms of a bump: decay of phi~(l) and phi^(t)",
        params: &[
            p("a", "100", "bump support starts here"),
            p("b", "200", "bump support ends here"),
            p("l-max", "200", "fit phi~(l) for 1 <= l <= l-max"),
            p(
                "l-tail",
                "1000,1500,2000",
                "orders where phi~ must be below 1e-8",
            ),
            p("t", "0.5,1,5", "real spectral parameters for phi^"),
            p("c-max", "100", "largest acceptable fitted constant"),
            p(
                "t-large",
                "150",
                "large |t| checked on the bump over [1, 2]",
            ),
        ],
    },
    VerbSpec {
        name: "forms",
        about: "Coefficients of a form and its Hecke relations",
        params: &[
            p(
                "label",
                "1.12.a.a",
                "form label; 1.12.a.a uses the built-in eta-product oracle",
            ),
            p("n-max", "30", "coefficients listed"),
            p(
                "hecke-grid",
                "30",
                "Hecke relation checked for m, n <= hecke-grid",
            ),
            p("tol", "1e-9", "largest acceptable relative violation"),
        ],
    },
    VerbSpec {
        name: "verify-petersson",
        about: "Rank-one structure of the Petersson geometric side for a one-dimensional space",
        params: &[
            p("level", "1", "level N"),
            p("weight", "12", "weight k"),
            p(
                "label",
                "",
                "form spanning the space; derived for level 1 weight 12",
            ),
            p("grid", "10", "m, n <= grid"),
            p("cmax", "5000", "Kloosterman moduli c <= cmax"),
            p("tol", "1e-9", "accepted Kloosterman tail bound"),
            p("defect-tol", "1e-6", "largest acceptable defect"),
        ],
    },
    VerbSpec {
        name: "verify-voronoi",
        about: "Both sides of the Voronoi formula for every unit a mod q",
        params: &[
            p("label", "1.12.a.a", "form label"),
            p("q", "1,2,3,5", "moduli"),
            p(
                "x",
                "5,20",
                "window centres X; the window is a Gaussian bump of width X/5",
            ),
            p("n-max", "200000", "largest dual index allowed"),
            p("tol", "1e-10", "dual tail tolerance"),
            p(
                "rel-tol",
                "1e-3",
                "largest acceptable relative disagreement",
            ),
        ],
    },
    VerbSpec {
        name: "verify-jutila",
        about: "Exact L2 error of the circle-method approximation to the unit interval",
        params: &[
            p("Q", "50", "moduli are the integers in (Q, 2Q]"),
            p("delta-exp", "2", "delta = Q^(-delta-exp)"),
            p("den", "1000000000", "denominator of the rational delta"),
        ],
    },
    VerbSpec {
        name: "verify-large-sieve",
        about: "Randomised trials of the large sieve inequality against the brute-force sum",
        params: &[
            p(
                "trials",
                "200",
                "number of trials, spread over the (Q, Z) grid",
            ),
            p("q", "10,30", "values of Q"),
            p("z", "1,4", "values of Z"),
            p("theta", "0.109375", "theta toward Ramanujan (7/64)"),
            p("law", "rademacher", "rademacher or gaussian coefficients"),
            p("factor", "100", "largest acceptable lhs / bound"),
        ],
    },
    VerbSpec {
        name: "moment",
        about: "Geometric side of the second moment and the second-moment bound",
        params: &[
            p("label", "1.12.a.a", "fixed form f"),
            p("kappa", "12", "weight of the family"),
            p("m", "1,2,3,5", "levels M of the family"),
            p("x", "5,10,20", "lengths X"),
            p("c-max", "2000", "Kloosterman moduli c <= c-max"),
            p("z-h", "1", "derivative scale of h"),
            p("eps", "0", "epsilon in the bound"),
        ],
    },
    VerbSpec {
        name: "typecalc",
        about: "Fit constants for claimed derivative-bound types",
        params: &[
            p(
                "fixture",
                "all",
                "all, exponential, wrong, bump, product, w-delta or kernel",
            ),
            p("order", "3", "largest total derivative order (at most 3)"),
            p("samples", "32", "sample points per box"),
        ],
    },
    VerbSpec {
        name: "fetch",
        about: "Download, cache and validate coefficients of a form",
        params: &[
            p("label", "11.2.a.a", "LMFDB label"),
            p("n-max", "20", "coefficients listed"),
            p("save", "", "also write a coefficient file here"),
        ],
    },
];

const GLOBAL_FLAGS: &[ParamSpec] = &[
    p("config", "", "key = value file; flags win on conflict"),
    p("seed", "0", "seed for randomised experiments"),
    p("output", "-", "report path, - for stdout"),
    p("format", "csv", "csv or jsonl"),
    p("threads", "0", "worker threads, 0 for all cores"),
    p(
        "coeff-dir",
        "",
        "directory of <label>.txt coefficient files",
    ),
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Run(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

fn run_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Run(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    JsonLines,
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub verb: String,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub output: String,
    pub format: Format,
    pub threads: usize,
    pub coeff_dir: Option<PathBuf>,
}

impl RunConfig {
    fn get(&self, key: &str) -> &str {
        self.params.get(key).map(String::as_str).unwrap_or("")
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<T, CliError> {
        self.get(key)
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("--{key}: cannot parse {:?}", self.get(key))))
    }

    fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Vec<T>, CliError> {
        self.get(key)
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("--{key}: cannot parse {s:?}")))
            })
            .collect()
    }
}

/// Rows of a report and its verdict; `pass = None` marks a plain computation.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub pass: Option<bool>,
    pub notes: Vec<String>,
}

impl Report {
    fn new(columns: &[&'static str]) -> Self {
        Report {
            columns: columns.to_vec(),
            rows: Vec::new(),
            pass: None,
            notes: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn verdict(&self) -> &'static str {
        match self.pass {
            None => "COMPLETE",
            Some(true) => "PASS",
            Some(false) => "FAIL",
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass == Some(false) {
            2
        } else {
            0
        }
    }
}

fn num(x: f64) -> Value {
    // JSON has no inf or nan; keep them readable as strings
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(x.to_string()))
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Writes header, rows and verdict.
pub fn render(cfg: &RunConfig, report: &Report) -> String {
    let mut out = String::new();
    match cfg.format {
        Format::Csv => {
            let _ = writeln!(out, "# rankinlab {VERSION}");
            let _ = writeln!(out, "# verb = {}", cfg.verb);
            let _ = writeln!(out, "# seed = {}", cfg.seed);
            let _ = writeln!(out, "# threads = {}", cfg.threads);
            let _ = writeln!(out, "# format = csv");
            let _ = writeln!(out, "# output = {}", cfg.output);
            let dir = cfg
                .coeff_dir
                .as_ref()
                .map(|d| d.display().to_string())
                .unwrap_or_default();
            let _ = writeln!(out, "# coeff-dir = {dir}");
            for (k, v) in &cfg.params {
                let _ = writeln!(out, "# {k} = {v}");
            }
            let _ = writeln!(out, "{}", report.columns.join(","));
            for row in &report.rows {
                let cells: Vec<String> = row.iter().map(cell).collect();
                let _ = writeln!(out, "{}", cells.join(","));
            }
            for n in &report.notes {
                let _ = writeln!(out, "# note: {n}");
            }
            let _ = writeln!(out, "# verdict = {}", report.verdict());
        }
        Format::JsonLines => {
            let header = json!({
                "rankinlab": VERSION,
                "verb": cfg.verb,
                "seed": cfg.seed,
                "threads": cfg.threads,
                "format": "jsonl",
                "output": cfg.output,
                "coeff-dir": cfg.coeff_dir.as_ref().map(|d| d.display().to_string()).unwrap_or_default(),
                "params": cfg.params,
            });
            let _ = writeln!(out, "{header}");
            for row in &report.rows {
                let obj: Map<String, Value> = report
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.clone()))
                    .collect();
                let _ = writeln!(out, "{}", Value::Object(obj));
            }
            let _ = writeln!(
                out,
                "{}",
                json!({ "verdict": report.verdict(), "notes": report.notes })
            );
        }
    }
    out
}

fn verb_spec(name: &str) -> Option<&'static VerbSpec> {
    VERBS.iter().find(|v| v.name == name)
}

/// Parameter schema of a verb, as printed on usage errors.
pub fn schema(verb: &VerbSpec) -> String {
    let mut s = format!(
        "rankinlab {} [--param value]...\n  {}\n",
        verb.name, verb.about
    );
    for ps in verb.params.iter().chain(GLOBAL_FLAGS) {
        let _ = writeln!(
            s,
            "  --{:<14} {} [default: {:?}]",
            ps.key, ps.help, ps.default
        );
    }
    s
}

fn full_schema() -> String {
    let mut s = String::from("usage: rankinlab <verb> [--param value]...\n\nverbs:\n");
    for v in VERBS {
        s.push('\n');
        s.push_str(&schema(v));
    }
    s
}

fn command() -> Command {
    let mut cmd = Command::new("rankinlab")
        .version(VERSION)
        .about("Numerical checks for Rankin-Selberg second-moment estimates")
        .subcommand_required(true);
    for v in VERBS {
        let mut sub = Command::new(v.name).about(v.about);
        for ps in v.params.iter().chain(GLOBAL_FLAGS) {
            sub = sub.arg(
                Arg::new(ps.key)
                    .long(ps.key)
                    .help(ps.help)
                    .action(ArgAction::Set),
            );
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}

/// key = value lines; blank lines and lines starting with # are ignored.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key = value", i + 1))
        })?;
        map.insert(
            k.trim().trim_start_matches("--").to_string(),
            v.trim().to_string(),
        );
    }
    Ok(map)
}

fn resolve(verb: &'static VerbSpec, m: &ArgMatches) -> Result<RunConfig, CliError> {
    let file = match m.get_one::<String>("config") {
        Some(path) => parse_config_file(
            &fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("--config {path}: {e}")))?,
        )?,
        None => BTreeMap::new(),
    };
    for k in file.keys() {
        if k == "config" || !verb.params.iter().chain(GLOBAL_FLAGS).any(|ps| ps.key == k) {
            return Err(CliError::Usage(format!(
                "config key {k:?} is not a parameter of {}",
                verb.name
            )));
        }
    }
    let value = |ps: &ParamSpec| -> String {
        m.get_one::<String>(ps.key)
            .cloned()
            .or_else(|| file.get(ps.key).cloned())
            .unwrap_or_else(|| ps.default.to_string())
    };
    let globals: BTreeMap<&str, String> =
        GLOBAL_FLAGS.iter().map(|ps| (ps.key, value(ps))).collect();
    let params = verb
        .params
        .iter()
        .map(|ps| (ps.key.to_string(), value(ps)))
        .collect();
    let format = match globals["format"].as_str() {
        "csv" => Format::Csv,
        "jsonl" | "json-lines" => Format::JsonLines,
        other => {
            return Err(CliError::Usage(format!(
                "--format must be csv or jsonl, got {other:?}"
            )))
        }
    };
    let seed = globals["seed"]
        .parse()
        .map_err(|_| CliError::Usage(format!("--seed: cannot parse {:?}", globals["seed"])))?;
    let threads = globals["threads"].parse().map_err(|_| {
        CliError::Usage(format!("--threads: cannot parse {:?}", globals["threads"]))
    })?;
    let coeff_dir = Some(globals["coeff-dir"].clone())
        .filter(|s| !s.is_empty())
        .map(PathBuf::from);
    Ok(RunConfig {
        verb: verb.name.to_string(),
        params,
        seed,
        output: globals["output"].clone(),
        format,
        threads,
        coeff_dir,
    })
}

/// Parses arguments (program name first), runs the verb and writes the
/// report. Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let matches = match command().try_get_matches_from(&args) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    return 0;
                }
                _ => {
                    let verb = args.get(1).and_then(|a| a.to_str()).and_then(verb_spec);
                    let msg = e.to_string();
                    let first = msg.lines().next().unwrap_or("usage error");
                    eprintln!("{first}\n");
                    eprintln!("{}", verb.map(schema).unwrap_or_else(full_schema));
                    return 1;
                }
            }
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let verb = verb_spec(name).expect("subcommands come from VERBS");
    let result = resolve(verb, sub).and_then(|mut cfg| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(run_err)?;
        cfg.threads = pool.current_num_threads();
        let report = pool.install(|| run(&cfg))?;
        Ok((cfg, report))
    });
    match result {
        Ok((cfg, report)) => {
            let text = render(&cfg, &report);
            let written = if cfg.output == "-" {
                io::stdout().write_all(text.as_bytes())
            } else {
                fs::write(&cfg.output, text)
            };
            if let Err(e) = written {
                eprintln!("cannot write report to {}: {e}", cfg.output);
                return 2;
            }
            eprintln!("{}: {}", cfg.verb, report.verdict());
            report.exit_code()
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{}", schema(verb));
            1
        }
        Err(e) => {
            eprintln!("{}: FAIL: {e}", verb.name);
            2
        }
    }
}

/// Runs one verb with a resolved configuration.
pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.verb.as_str() {
        "arith" => run_arith(cfg),
        "bessel" => run_bessel(cfg),
        "transform" => run_transform(cfg),
        "forms" => run_forms(cfg),
        "verify-petersson" => run_petersson(cfg),
        "verify-voronoi" => run_voronoi(cfg),
        "verify-jutila" => run_jutila(cfg),
        "verify-large-sieve" => run_large_sieve(cfg),
        "moment" => run_moment(cfg),
        "typecalc" => run_typecalc(cfg),
        "fetch" => run_fetch(cfg),
        other => Err(CliError::Usage(format!("unknown verb {other:?}"))),
    }
}

/// Loads a form with at least `n_needed` coefficients. 1.12.a.a comes from the
/// eta-product oracle unless a coefficient directory is given.
pub fn form_for(cfg: &RunConfig, label: &str, n_needed: u64) -> Result<CuspForm, CliError> {
    if label.is_empty() {
        return Err(CliError::Usage("a form label is required".into()));
    }
    let f = match &cfg.coeff_dir {
        Some(dir) => {
            load_form(&CoefficientSource::Directory(dir.clone()), label).map_err(run_err)?
        }
        None if label == "1.12.a.a" => delta_oracle(n_needed as usize),
        None => load_form(&CoefficientSource::lmfdb_default(), label).map_err(run_err)?,
    };
    f.require(n_needed).map_err(run_err)?;
    Ok(f)
}

fn run_arith(cfg: &RunConfig) -> Result<Report, CliError> {
    let c_max: u64 = cfg.parse("c-max")?;
    let mn_max: i64 = cfg.parse("mn-max")?;
    let p_max: u64 = cfg.parse("p-max")?;
    let d_max: u64 = cfg.parse("d-max")?;
    let k_max: i64 = cfg.parse("k-max")?;
    let mut rep = Report::new(&["check", "range", "cases", "max_abs_err", "violations"]);

    let mut worst: f64 = 0.0;
    let mut cases = 0u64;
    let mut bad = 0u64;
    for c in 1..=c_max {
        for m in 1..=mn_max {
            for n in 1..=mn_max {
                let fast = kloosterman(m, n, c).map_err(run_err)?;
                let direct = kloosterman_direct(m, n, c).map_err(run_err)?;
                let err = (fast.value - direct.value).abs();
                worst = worst.max(err);
                cases += 1;
                if err > 1e-9 {
                    bad += 1;
                }
            }
        }
    }
    rep.push(vec![
        json!("kloosterman"),
        json!(format!("c<={c_max};m,n<={mn_max}")),
        json!(cases),
        num(worst),
        json!(bad),
    ]);
    let ok_k = bad == 0;

    let mut worst: f64 = 0.0;
    let mut cases = 0u64;
    let mut bad = 0u64;
    for p in primes_up_to(p_max) {
        for m in 1..=3i64 {
            for n in 1..=3i64 {
                if ((m * n) as u64).is_multiple_of(p) {
                    continue;
                }
                let s = kloosterman(m, n, p).map_err(run_err)?.value.abs();
                let excess = s - 2.0 * (p as f64).sqrt();
                worst = worst.max(excess);
                cases += 1;
                if excess > 1e-9 {
                    bad += 1;
                }
            }
        }
    }
    rep.push(vec![
        json!("weil"),
        json!(format!("p<={p_max};m,n<=3")),
        json!(cases),
        num(worst.max(0.0)),
        json!(bad),
    ]);
    let ok_w = bad == 0;

    let mut cases = 0u64;
    let mut bad = 0u64;
    let mut worst: f64 = 0.0;
    for d in 1..=d_max {
        for k in -k_max..=k_max {
            let formula = ramanujan(k, d);
            let direct: Complex64 = units(d)
                .map(|a| {
                    Complex64::from_polar(
                        1.0,
                        2.0 * PI * ((k.rem_euclid(d as i64) as u64 * a % d) as f64 / d as f64),
                    )
                })
                .sum();
            let err = (direct.re - formula as f64).abs().max(direct.im.abs());
            worst = worst.max(err);
            cases += 1;
            if direct.re.round() as i64 != formula || err > 1e-6 {
                bad += 1;
            }
        }
    }
    rep.push(vec![
        json!("ramanujan"),
        json!(format!("d<={d_max};|k|<={k_max}")),
        json!(cases),
        num(worst),
        json!(bad),
    ]);
    let ok_r = bad == 0;
    rep.pass = Some(ok_k && ok_w && ok_r);
    Ok(rep)
}

fn units(c: u64) -> impl Iterator<Item = u64> {
    (1..=c).filter(move |&a| gcd(a, c) == 1)
}

fn run_bessel(cfg: &RunConfig) -> Result<Report, CliError> {
    let kind = match cfg.get("kind") {
        "holomorphic" => KernelKind::Holomorphic {
            weight: cfg.parse("weight")?,
        },
        "maass" => KernelKind::Maass { t: cfg.parse("t")? },
        other => {
            return Err(CliError::Usage(format!(
                "--kind must be holomorphic or maass, got {other:?}"
            )))
        }
    };
    let sign = match cfg.get("sign") {
        "plus" => Sign::Plus,
        "minus" => Sign::Minus,
        other => {
            return Err(CliError::Usage(format!(
                "--sign must be plus or minus, got {other:?}"
            )))
        }
    };
    let y0: f64 = cfg.parse("y-min")?;
    let y1: f64 = cfg.parse("y-max")?;
    let points: usize = cfg.parse("points")?;
    if !(y0 > 0.0 && y1 >= y0) || points == 0 {
        return Err(CliError::Usage(
            "need 0 < y-min <= y-max and points >= 1".into(),
        ));
    }
    let mut rep = Report::new(&["y", "value", "abs_err"]);
    for i in 0..points {
        let y = if points == 1 {
            y0
        } else {
            y0 * (y1 / y0).powf(i as f64 / (points - 1) as f64)
        };
        let v = voronoi_kernel(kind, sign, y).map_err(run_err)?;
        rep.push(vec![num(y), num(v.value), num(v.abs_err)]);
    }
    Ok(rep)
}

fn run_transform(cfg: &RunConfig) -> Result<Report, CliError> {
    let a: f64 = cfg.parse("a")?;
    let b: f64 = cfg.parse("b")?;
    let l_max: u32 = cfg.parse("l-max")?;
    let tails: Vec<u32> = cfg.list("l-tail")?;
    let ts: Vec<f64> = cfg.list("t")?;
    let c_max: f64 = cfg.parse("c-max")?;
    let t_large: f64 = cfg.parse("t-large")?;
    if !(a > 0.0 && b > a) {
        return Err(CliError::Usage("need 0 < a < b".into()));
    }
    let phi = SmoothWindow::bump(a, b);
    let qcfg = QuadConfig::with_tolerances(1e-10, 1e-13);
    let envelope = (a.ln() / a) * (1.0 + phi.deriv_scale());
    let mut rep = Report::new(&[
        "transform",
        "param",
        "value",
        "abs_err",
        "ratio_to_envelope",
    ]);
    let tilde: Vec<_> = rayon_map((1..=l_max).collect(), |&l| transform_tilde(&phi, l, &qcfg))?;
    let mut fitted: f64 = 0.0;
    for (l, v) in (1..=l_max).zip(&tilde) {
        let r = v.value.abs() / envelope;
        fitted = fitted.max(r);
        rep.push(vec![
            json!("tilde"),
            json!(l),
            num(v.value),
            num(v.abs_err),
            num(r),
        ]);
    }
    let mut tails_ok = true;
    for &l in &tails {
        let v = transform_tilde(&phi, l, &qcfg).map_err(run_err)?;
        tails_ok &= v.value.abs() + v.abs_err < 1e-8;
        rep.push(vec![
            json!("tilde"),
            json!(l),
            num(v.value),
            num(v.abs_err),
            num(v.value.abs() / envelope),
        ]);
    }
    for &t in &ts {
        let v = transform_hat(&phi, SpectralParam::Real(t), &qcfg).map_err(run_err)?;
        let r = v.value.abs() / envelope;
        fitted = fitted.max(r);
        rep.push(vec![
            json!("hat"),
            num(t),
            num(v.value),
            num(v.abs_err),
            num(r),
        ]);
    }
    // large |t| on a bump near 1: (Z/|t|)^2 envelope
    let small = SmoothWindow::bump(1.0, 2.0);
    let v = transform_hat(&small, SpectralParam::Real(t_large), &qcfg).map_err(run_err)?;
    let env_t = (small.deriv_scale() / t_large).powi(2);
    let r_t = v.value.abs() / env_t;
    rep.push(vec![
        json!("hat[1,2]"),
        num(t_large),
        num(v.value),
        num(v.abs_err),
        num(r_t),
    ]);
    rep.notes.push(format!(
        "fitted constant {fitted:.6e} for (Z+1) log(a)/a, limit {c_max}"
    ));
    rep.pass = Some(fitted <= c_max && tails_ok && r_t <= c_max);
    Ok(rep)
}

fn rayon_map<T, R, E, F>(items: Vec<T>, f: F) -> Result<Vec<R>, CliError>
where
    T: Sync,
    R: Send,
    E: std::fmt::Display + Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    use rayon::prelude::*;
    let out: Vec<Result<R, E>> = items.par_iter().map(f).collect();
    out.into_iter().map(|r| r.map_err(run_err)).collect()
}

fn run_forms(cfg: &RunConfig) -> Result<Report, CliError> {
    let label = cfg.get("label").to_string();
    let n_max: u64 = cfg.parse("n-max")?;
    let grid: u64 = cfg.parse("hecke-grid")?;
    let tol: f64 = cfg.parse("tol")?;
    let f = form_for(cfg, &label, n_max.max(grid * grid))?;
    let oracle = label == "1.12.a.a" && cfg.coeff_dir.is_none();
    let tau = if oracle {
        ramanujan_tau(n_max as usize)
    } else {
        Vec::new()
    };
    let mut rep = Report::new(&["n", "lambda", "tau"]);
    for n in 1..=n_max {
        let t = tau
            .get(n as usize - 1)
            .map(|t| json!(t.to_string()))
            .unwrap_or(json!(""));
        rep.push(vec![json!(n), num(f.lambda(n).expect("required above")), t]);
    }
    let h = hecke_check(&f, grid, grid).map_err(run_err)?;
    rep.notes.push(format!(
        "hecke relation over {} pairs: max relative violation {:.3e} at {:?}",
        h.pairs_checked, h.max_rel_violation, h.worst
    ));
    rep.pass = Some(h.max_rel_violation <= tol);
    Ok(rep)
}

fn run_petersson(cfg: &RunConfig) -> Result<Report, CliError> {
    let level: u64 = cfg.parse("level")?;
    let weight: u32 = cfg.parse("weight")?;
    let grid: u64 = cfg.parse("grid")?;
    let c_max: u64 = cfg.parse("cmax")?;
    let tol: f64 = cfg.parse("tol")?;
    let defect_tol: f64 = cfg.parse("defect-tol")?;
    let label = match cfg.get("label") {
        "" if level == 1 && weight == 12 => "1.12.a.a".to_string(),
        "" => {
            return Err(CliError::Usage(
                "--label is required unless level = 1 and weight = 12".into(),
            ))
        }
        l => l.to_string(),
    };
    let f = form_for(cfg, &label, grid)?;
    if f.level != level || f.kind != (crate::forms::FormKind::Holomorphic { weight }) {
        return Err(CliError::Usage(format!(
            "{label} is not of level {level} and weight {weight}"
        )));
    }
    let r = petersson_rank1_check(&f, grid, c_max, tol).map_err(run_err)?;
    let mut rep = Report::new(&[
        "m",
        "n",
        "R_mn",
        "abs_err",
        "R_mn_over_R11",
        "lambda_m_lambda_n",
        "defect",
    ]);
    for &(m, n, v) in &r.entries {
        let pred = f.lambda(m).unwrap_or(0.0) * f.lambda(n).unwrap_or(0.0);
        let ratio = v.value / r.r11.value;
        rep.push(vec![
            json!(m),
            json!(n),
            num(v.value),
            num(v.abs_err),
            num(ratio),
            num(pred),
            num((ratio - pred).abs()),
        ]);
    }
    rep.notes.push(format!("R(1,1) = {:.15e}", r.r11.value));
    rep.notes.push(format!(
        "factorization defect {:.3e}",
        r.factorization_defect
    ));
    rep.notes.push(format!(
        "ratio defect {:.3e} at {:?}",
        r.ratio_defect, r.worst_ratio
    ));
    rep.pass = Some(r.factorization_defect < defect_tol && r.ratio_defect < defect_tol);
    Ok(rep)
}

fn run_voronoi(cfg: &RunConfig) -> Result<Report, CliError> {
    let label = cfg.get("label").to_string();
    let qs: Vec<u64> = cfg.list("q")?;
    let xs: Vec<f64> = cfg.list("x")?;
    let n_max: u64 = cfg.parse("n-max")?;
    let tol: f64 = cfg.parse("tol")?;
    let rel_tol: f64 = cfg.parse("rel-tol")?;
    let x_top = xs.iter().cloned().fold(0.0, f64::max);
    let f = form_for(cfg, &label, n_max.max((1.8 * x_top).ceil() as u64 + 1))?;
    let mut rep = Report::new(&[
        "q",
        "a",
        "X",
        "lhs_re",
        "lhs_im",
        "rhs_re",
        "rhs_im",
        "rhs_abs_err",
        "rel_err",
        "dual_terms",
    ]);
    let mut pass = true;
    for &x in &xs {
        let h = SmoothWindow::gaussian_bump(x, x / 5.0);
        for &q in &qs {
            for a in units(q) {
                let lhs = voronoi_lhs(&f, a as i64, q, &h).map_err(run_err)?;
                let rhs = voronoi_rhs(&f, a as i64, q, &h, n_max, tol).map_err(run_err)?;
                let rel = (lhs - rhs.value).norm()
                    / lhs.norm().max(rhs.value.norm()).max(f64::MIN_POSITIVE);
                pass &= rel <= rel_tol;
                rep.push(vec![
                    json!(q),
                    json!(a),
                    num(x),
                    num(lhs.re),
                    num(lhs.im),
                    num(rhs.value.re),
                    num(rhs.value.im),
                    num(rhs.abs_err),
                    num(rel),
                    json!(rhs.terms),
                ]);
            }
        }
    }
    rep.pass = Some(pass);
    Ok(rep)
}

fn run_jutila(cfg: &RunConfig) -> Result<Report, CliError> {
    let q: u64 = cfg.parse("Q")?;
    let e: f64 = cfg.parse("delta-exp")?;
    let den: u64 = cfg.parse("den")?;
    if q == 0 {
        return Err(CliError::Usage("--Q must be positive".into()));
    }
    let q_set: Vec<u64> = (q + 1..=2 * q).collect();
    let delta = rational_approx((q as f64).powf(-e), den);
    let step = jutila_build(&q_set, &delta).map_err(run_err)?;
    let l2 = jutila_l2_error(&step);
    let lambda = step.lambda as f64;
    let delta_f = delta.to_f64().unwrap_or(f64::NAN);
    let bound = 10.0 * (q as f64).powi(2) / (delta_f * lambda * lambda);
    let l2_f = l2.to_f64().unwrap_or(f64::NAN);
    let integral = step.integral();
    let unit = integral == num_rational::BigRational::from_integer(1.into());
    let mut rep = Report::new(&[
        "Q",
        "delta",
        "Lambda",
        "l2_error",
        "l2_error_exact",
        "bound",
        "ratio",
        "integral_is_one",
    ]);
    rep.push(vec![
        json!(q),
        num(delta_f),
        json!(step.lambda),
        num(l2_f),
        json!(l2.to_string()),
        num(bound),
        num(l2_f / bound),
        json!(unit),
    ]);
    rep.pass = Some(l2_f <= bound && unit);
    Ok(rep)
}

fn run_large_sieve(cfg: &RunConfig) -> Result<Report, CliError> {
    let trials: u64 = cfg.parse("trials")?;
    let qs: Vec<u64> = cfg.list("q")?;
    let zs: Vec<f64> = cfg.list("z")?;
    let theta: f64 = cfg.parse("theta")?;
    let factor: f64 = cfg.parse("factor")?;
    let law = match cfg.get("law") {
        "rademacher" => CoefficientLaw::Rademacher,
        "gaussian" => CoefficientLaw::Gaussian,
        other => {
            return Err(CliError::Usage(format!(
                "--law must be rademacher or gaussian, got {other:?}"
            )))
        }
    };
    if qs.is_empty() || zs.is_empty() {
        return Err(CliError::Usage(
            "--q and --z need at least one value".into(),
        ));
    }
    let grid: Vec<(u64, f64)> = qs
        .iter()
        .flat_map(|&q| zs.iter().map(move |&z| (q, z)))
        .collect();
    let jobs: Vec<(u64, u64, f64)> = (0..trials)
        .map(|i| {
            let (q, z) = grid[i as usize % grid.len()];
            (cfg.seed.wrapping_mul(1_000_003).wrapping_add(i), q, z)
        })
        .collect();
    let results = rayon_map(jobs.clone(), |&(seed, q, z)| {
        let inst = random_instance(seed, q, z, law);
        let bound = large_sieve_bound(&inst, theta);
        let plus = large_sieve_lhs(&inst, Sign::Plus)?;
        let minus = large_sieve_lhs(&inst, Sign::Minus)?;
        Ok::<_, crate::traceverify::TraceError>((inst, bound, plus, minus))
    })?;
    let mut rep = Report::new(&[
        "trial", "seed", "Q", "Z", "r", "s", "w", "V", "H", "D", "sign", "lhs_abs", "bound",
        "ratio",
    ]);
    let mut worst: f64 = 0.0;
    for (i, ((seed, q, z), (inst, bound, plus, minus))) in jobs.iter().zip(results).enumerate() {
        for (name, v) in [("+", plus), ("-", minus)] {
            let ratio = v.norm() / bound;
            worst = worst.max(ratio);
            rep.push(vec![
                json!(i),
                json!(seed),
                json!(q),
                num(*z),
                json!(inst.r),
                json!(inst.s),
                json!(inst.w),
                json!(inst.v),
                json!(inst.h),
                json!(inst.d),
                json!(name),
                num(v.norm()),
                num(bound),
                num(ratio),
            ]);
        }
    }
    rep.notes
        .push(format!("worst ratio {worst:.6e}, limit {factor}"));
    rep.pass = Some(worst <= factor);
    Ok(rep)
}

fn run_moment(cfg: &RunConfig) -> Result<Report, CliError> {
    let label = cfg.get("label").to_string();
    let kappa: u32 = cfg.parse("kappa")?;
    let ms: Vec<u64> = cfg.list("m")?;
    let xs: Vec<f64> = cfg.list("x")?;
    let c_max: u64 = cfg.parse("c-max")?;
    let z_h: f64 = cfg.parse("z-h")?;
    let eps: f64 = cfg.parse("eps")?;
    let x_top = xs.iter().cloned().fold(0.0, f64::max);
    let f = form_for(cfg, &label, (2.5 * x_top).ceil() as u64 + 1)?;
    let h = SmoothWindow::bump_with_scale(0.5, 2.5, z_h.max(1.0));
    let mut rep = Report::new(&[
        "M",
        "N",
        "X",
        "lhs_geometric",
        "truncation_error",
        "moment_bound",
        "ratio",
        "spectral_rank1",
    ]);
    let mut pass = true;
    for &m in &ms {
        if !crate::lfunc::levels_coprime(m, f.level) {
            return Err(CliError::Usage(format!(
                "M = {m} shares a prime with the level {} of f",
                f.level
            )));
        }
        for &x in &xs {
            let r = second_moment_geometric(&f, kappa, m, &h, x, c_max).map_err(run_err)?;
            let n_lev = f.level as f64;
            let bound = moment_bound(m as f64, n_lev, x, z_h, eps);
            // S_12(1) is spanned by Delta, so the spectral side is a single term
            let spectral = if m == 1 && kappa == 12 {
                let r11 = petersson_geometric_r(1, 1, 12, 1, c_max, 1e-12).map_err(run_err)?;
                let delta = delta_oracle((2.5 * x).ceil() as usize + 1);
                let s = smoothed_pair_sum(&f, &delta, &h, x).map_err(run_err)?;
                num(r11.value * s * s)
            } else {
                json!("")
            };
            pass &= r.value >= -r.truncation_error;
            rep.push(vec![
                json!(m),
                json!(f.level),
                num(x),
                num(r.value),
                num(r.truncation_error),
                num(bound),
                num(r.value / bound),
                spectral,
            ]);
        }
    }
    rep.pass = Some(pass);
    Ok(rep)
}

fn run_typecalc(cfg: &RunConfig) -> Result<Report, CliError> {
    let which = cfg.get("fixture").to_string();
    let order: u32 = cfg.parse("order")?;
    let samples: usize = cfg.parse("samples")?;
    if !(1..=3).contains(&order) {
        return Err(CliError::Usage("--order must be 1, 2 or 3".into()));
    }
    let all: Vec<(&str, crate::typecalc::TypedFunction, bool)> = vec![
        ("exponential", fixture_exponential(), true),
        ("wrong", fixture_wrong_exponential(), false),
        ("bump", fixture_bump(), true),
        ("product", fixture_product(100.0), true),
        ("w-delta", fixture_w_delta(WDeltaParams::default()), true),
        (
            "kernel",
            fixture_kernel_i(KernelFixtureParams::default()),
            true,
        ),
    ];
    let chosen: Vec<_> = all
        .into_iter()
        .filter(|(n, ..)| which == "all" || *n == which)
        .collect();
    if chosen.is_empty() {
        return Err(CliError::Usage(format!("unknown fixture {which:?}")));
    }
    let opts = VerifyOptions {
        samples,
        seed: cfg.seed,
        ..Default::default()
    };
    let mut rep = Report::new(&[
        "fixture",
        "claimed",
        "constant",
        "constant_dilated",
        "verdict",
        "expected",
    ]);
    let mut pass = true;
    for (name, tf, expect) in chosen {
        let idx = multi_indices(tf.claimed.arity(), order);
        let r = verify_type(&tf, &idx, &opts).map_err(run_err)?;
        pass &= r.pass == expect;
        rep.push(vec![
            json!(name),
            json!(r.claimed),
            num(r.constant),
            num(r.constant_dilated),
            json!(r.verdict()),
            json!(if expect { "PASS" } else { "FAIL" }),
        ]);
    }
    rep.pass = Some(pass);
    Ok(rep)
}

fn run_fetch(cfg: &RunConfig) -> Result<Report, CliError> {
    let label = cfg.get("label").to_string();
    let n_max: u64 = cfg.parse("n-max")?;
    let save = cfg.get("save").to_string();
    let f = match &cfg.coeff_dir {
        Some(dir) => load_form(&CoefficientSource::Directory(dir.clone()), &label),
        None => load_form(
            &CoefficientSource::Lmfdb {
                base_url: lmfdb_base_url(),
                cache_dir: default_cache_dir(),
            },
            &label,
        ),
    }
    .map_err(run_err)?;
    f.require(n_max).map_err(run_err)?;
    if !save.is_empty() {
        write_coefficient_file(&f, std::path::Path::new(&save)).map_err(run_err)?;
    }
    let mut rep = Report::new(&["n", "lambda"]);
    for n in 1..=n_max {
        rep.push(vec![json!(n), num(f.lambda(n).expect("required above"))]);
    }
    rep.notes.push(format!(
        "{}: level {}, {:?}, {} coefficients",
        f.label,
        f.level,
        f.kind,
        f.n_max()
    ));
    Ok(rep)
}
