//! Command-line interface: exact spectra, support decompositions,
//! lambda-prime enumeration, tree-complexity tables, Monte Carlo atom
//! estimates, isoperimetry instruments, and the verification suites.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use spectral_atoms::field::{parse_rat, rat_string, AlgebraicNumber};
use spectral_atoms::graph::{Graph, RootedGraph, VertexSet};
use spectral_atoms::random::{CountMode, DegreeDistribution};
use spectral_atoms::verify::VerifyConfig;
use spectral_atoms::{Int, IntPoly};
use std::process::ExitCode;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "spectral-atoms",
    about = "Exact spectral measures, lambda-supports and atom masses of finite trees and forests",
    version
)]
struct Cli {
    /// Worker threads (overrides SPECTRAL_ATOMS_THREADS; 0 = all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct LambdaArgs {
    /// Shorthand location: an integer, sqrtN / -sqrtN, phi, -phi, psi, -psi
    #[arg(long)]
    lambda: Option<String>,
    /// Minimal polynomial, ascending integer coefficients ("-1 0 1")
    #[arg(long)]
    lambda_minpoly: Option<String>,
    /// Isolating interval "lo,hi" with rational endpoints
    #[arg(long)]
    root_interval: Option<String>,
}

impl LambdaArgs {
    fn resolve(&self) -> Result<AlgebraicNumber, String> {
        match (&self.lambda, &self.lambda_minpoly, &self.root_interval) {
            (Some(short), None, None) => parse_lambda_shorthand(short),
            (None, Some(poly), Some(interval)) => {
                let p = IntPoly::parse_text(poly).map_err(|e| e.to_string())?;
                let (lo, hi) = interval
                    .split_once(',')
                    .ok_or_else(|| "interval must be \"lo,hi\"".to_string())?;
                let lo = parse_rat(lo).map_err(|e| e.to_string())?;
                let hi = parse_rat(hi).map_err(|e| e.to_string())?;
                AlgebraicNumber::from_poly_interval(&p, lo, hi).map_err(|e| e.to_string())
            }
            _ => Err(
                "give either --lambda, or both --lambda-minpoly and --root-interval".into(),
            ),
        }
    }
}

fn parse_lambda_shorthand(s: &str) -> Result<AlgebraicNumber, String> {
    let t = s.trim();
    if let Ok(n) = t.parse::<i64>() {
        return Ok(AlgebraicNumber::from_int(Int::from(n)));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let base = match body {
        "phi" | "golden" => golden(false),
        "psi" => golden(true),
        _ => {
            if let Some(ns) = body.strip_prefix("sqrt") {
                let n: i64 = ns
                    .parse()
                    .map_err(|_| format!("bad shorthand {s:?}"))?;
                if n <= 0 {
                    return Err("sqrt shorthand needs a positive integer".into());
                }
                let root = (n as f64).sqrt().round() as i64;
                if root * root == n {
                    AlgebraicNumber::from_int(Int::from(root))
                } else {
                    let p = IntPoly::from_coeffs(vec![Int::from(-n), Int::from(0), Int::from(1)]);
                    AlgebraicNumber::roots_of_irreducible(&p)
                        .pop()
                        .ok_or("no real root")?
                }
            } else {
                return Err(format!(
                    "unknown lambda shorthand {s:?}; use an integer, sqrtN, phi or psi"
                ));
            }
        }
    };
    Ok(if neg { base.negate() } else { base })
}

/// phi = (1+sqrt5)/2 (conj=false) or psi = (1-sqrt5)/2 (conj=true).
fn golden(conj: bool) -> AlgebraicNumber {
    let p = IntPoly::from_coeffs(vec![Int::from(-1), Int::from(-1), Int::from(1)]);
    let mut roots = AlgebraicNumber::roots_of_irreducible(&p);
    if conj {
        roots.remove(0)
    } else {
        roots.pop().unwrap()
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimateMode {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum IsoMode {
    Ratio,
    Anchored,
    Thinness,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Exact spectral measure of a rooted graph
    Spectrum {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 0)]
        root: usize,
    },
    /// The lambda-support vertex set
    Support {
        #[arg(long)]
        graph: String,
        #[command(flatten)]
        lambda: LambdaArgs,
    },
    /// Full support decomposition: components, boundary, primality, multiplicity
    Decompose {
        #[arg(long)]
        graph: String,
        #[command(flatten)]
        lambda: LambdaArgs,
    },
    /// All lambda-prime trees up to a size
    Primes {
        #[arg(long)]
        max_n: usize,
        #[command(flatten)]
        lambda: LambdaArgs,
    },
    /// Tree-complexity table (tau and minimal witness per eigenvalue)
    TauTable {
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
        /// Also persist the index as JSON
        #[arg(long)]
        out: Option<String>,
    },
    /// Monte Carlo estimate of the limiting atom mass at lambda
    Estimate {
        /// Degree distribution, e.g. "3:1/2,4:1/2"
        #[arg(long)]
        pi: String,
        #[command(flatten)]
        lambda: LambdaArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        reps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = EstimateMode::Exact)]
        mode: EstimateMode,
    },
    /// Isoperimetric instruments: ratio, anchored brute force, thinness
    Isoperimetry {
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum)]
        mode: IsoMode,
        /// Comma-separated vertex subset (ratio and thinness modes)
        #[arg(long)]
        subset: Option<String>,
        #[arg(long, default_value_t = 0)]
        root: usize,
        #[arg(long, default_value_t = 1)]
        min_size: usize,
        #[arg(long, default_value_t = 8)]
        max_size: usize,
    },
    /// Kesten-McKay CDF sampler, CSV output "x,F(x)"
    KestenMckay {
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
    /// Run the invariant suites and print a pass/fail matrix
    Verify {
        /// Corpus spec, "exhaustive:9"
        #[arg(long, default_value = "exhaustive:9")]
        corpus: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Scaled-down corpora for a fast smoke run
        #[arg(long)]
        quick: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("SPECTRAL_ATOMS_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(t) = threads {
        if t > 0 {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
                eprintln!("thread pool: {e}");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_graph(path: &str) -> Result<Graph, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    Graph::parse(&text).map_err(|e| format!("{path}: {e}"))
}

fn parse_subset(spec: &str, n: usize) -> Result<VertexSet, String> {
    let mut idx = Vec::new();
    for tok in spec.split(',') {
        let v: usize = tok
            .trim()
            .parse()
            .map_err(|_| format!("bad vertex index {tok:?}"))?;
        idx.push(v);
    }
    VertexSet::from_indices(n, &idx).map_err(|e| e.to_string())
}

fn emit(value: serde_json::Value) {
    let mut obj = serde_json::Map::new();
    obj.insert("schema".into(), serde_json::json!(SCHEMA_VERSION));
    if let serde_json::Value::Object(m) = value {
        for (k, v) in m {
            obj.insert(k, v);
        }
    }
    println!("{}", serde_json::Value::Object(obj));
}

fn run(cmd: Command) -> Result<ExitCode, String> {
    match cmd {
        Command::Spectrum { graph, root } => {
            let g = load_graph(&graph)?;
            let rg = RootedGraph::new(g, root).map_err(|e| e.to_string())?;
            let m = spectral_atoms::spectral::spectral_measure(&rg).map_err(|e| e.to_string())?;
            let atoms: Vec<serde_json::Value> = m
                .atoms()
                .iter()
                .map(|(loc, mass)| {
                    serde_json::json!({
                        "lambda": serde_json::to_value(loc).unwrap(),
                        "mass": mass.coeff_strings(),
                        "approx_location": loc.to_f64(),
                        "approx_mass": mass.approx_at(loc.to_f64()),
                    })
                })
                .collect();
            emit(serde_json::json!({
                "root": root,
                "atoms": atoms,
                "total_mass": rat_string(&m.total_mass()),
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Support { graph, lambda } => {
            let g = load_graph(&graph)?;
            let lam = lambda.resolve()?;
            let dec = spectral_atoms::spectral::support(&g, &lam).map_err(|e| e.to_string())?;
            emit(serde_json::json!({
                "lambda": serde_json::to_value(&lam).unwrap(),
                "support": dec.support.indices(),
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompose { graph, lambda } => {
            let g = load_graph(&graph)?;
            let lam = lambda.resolve()?;
            let dec = spectral_atoms::spectral::support(&g, &lam).map_err(|e| e.to_string())?;
            emit(serde_json::to_value(&dec).map_err(|e| e.to_string())?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Primes { max_n, lambda } => {
            let lam = lambda.resolve()?;
            let trees = spectral_atoms::primes::enumerate_lambda_prime(max_n, &lam)
                .map_err(|e| e.to_string())?;
            emit(serde_json::json!({
                "lambda": serde_json::to_value(&lam).unwrap(),
                "max_n": max_n,
                "count": trees.len(),
                "trees": trees.iter().map(|c| c.to_hex()).collect::<Vec<_>>(),
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::TauTable { max_n, format, out } => {
            let index =
                spectral_atoms::primes::build_index(max_n).map_err(|e| e.to_string())?;
            if let Some(path) = &out {
                let json = serde_json::to_string_pretty(index.entries())
                    .map_err(|e| e.to_string())?;
                std::fs::write(path, json).map_err(|e| e.to_string())?;
            }
            match format {
                TableFormat::Json => {
                    emit(serde_json::json!({
                        "max_n": max_n,
                        "entries": serde_json::to_value(index.entries()).unwrap(),
                    }));
                }
                TableFormat::Text => {
                    println!(
                        "{:>12}  {:>20}  {:>3}  {}",
                        "lambda", "minpoly", "tau", "witness"
                    );
                    for (root, tau, witness) in index.flattened() {
                        println!(
                            "{:>12.6}  {:>20}  {:>3}  {}",
                            root.to_f64(),
                            root.minpoly().pretty(),
                            tau,
                            witness.to_hex()
                        );
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Estimate {
            pi,
            lambda,
            n,
            reps,
            seed,
            mode,
        } => {
            let pi = DegreeDistribution::parse(&pi).map_err(|e| e.to_string())?;
            let lam = lambda.resolve()?;
            let mode = match mode {
                EstimateMode::Exact => CountMode::Exact,
                EstimateMode::Float => CountMode::Float,
            };
            let est = spectral_atoms::random::estimate_atom(&pi, &lam, n, reps, seed, mode)
                .map_err(|e| e.to_string())?;
            let mut v = serde_json::to_value(&est).map_err(|e| e.to_string())?;
            if let serde_json::Value::Object(m) = &mut v {
                m.insert(
                    "mean_approx".into(),
                    serde_json::json!(est.mean_value.to_f64().unwrap_or(f64::NAN)),
                );
                m.insert("seed".into(), serde_json::json!(seed));
            }
            emit(v);
            Ok(ExitCode::SUCCESS)
        }
        Command::Isoperimetry {
            graph,
            mode,
            subset,
            root,
            min_size,
            max_size,
        } => {
            let g = load_graph(&graph)?;
            match mode {
                IsoMode::Ratio => {
                    let spec = subset.ok_or("ratio mode needs --subset")?;
                    let s = parse_subset(&spec, g.vertex_count())?;
                    let r = spectral_atoms::isoperimetry::isoperimetric_ratio(&g, &s)
                        .map_err(|e| e.to_string())?;
                    emit(serde_json::json!({
                        "mode": "ratio",
                        "subset": s.indices(),
                        "ratio": rat_string(&r),
                        "ratio_approx": r.to_f64().unwrap_or(f64::NAN),
                    }));
                }
                IsoMode::Anchored => {
                    let rg = RootedGraph::new(g, root).map_err(|e| e.to_string())?;
                    let profile = spectral_atoms::isoperimetry::anchored_profile(&rg, max_size)
                        .map_err(|e| e.to_string())?;
                    let min = spectral_atoms::isoperimetry::anchored_constant_bruteforce(
                        &rg, min_size, max_size,
                    )
                    .map_err(|e| e.to_string())?;
                    // lower envelope over min_size
                    let mut envelope = Vec::new();
                    for m in 1..=max_size {
                        let mut best: Option<spectral_atoms::Rat> = None;
                        for r in profile.iter().skip(m).flatten() {
                            if best.as_ref().map(|b| r < b).unwrap_or(true) {
                                best = Some(r.clone());
                            }
                        }
                        envelope.push(best.map(|b| rat_string(&b)));
                    }
                    emit(serde_json::json!({
                        "mode": "anchored",
                        "root": root,
                        "min_size": min_size,
                        "max_size": max_size,
                        "min_ratio": rat_string(&min),
                        "per_size_minima": profile
                            .iter()
                            .skip(1)
                            .map(|o| o.as_ref().map(rat_string))
                            .collect::<Vec<_>>(),
                        "lower_envelope_by_min_size": envelope,
                    }));
                }
                IsoMode::Thinness => {
                    let spec = subset.ok_or("thinness mode needs --subset")?;
                    let s = parse_subset(&spec, g.vertex_count())?;
                    let rep = spectral_atoms::isoperimetry::thinness_report(&g, &s)
                        .map_err(|e| e.to_string())?;
                    let mut v = serde_json::to_value(&rep).map_err(|e| e.to_string())?;
                    if let serde_json::Value::Object(m) = &mut v {
                        m.insert("mode".into(), serde_json::json!("thinness"));
                        m.insert("subset".into(), serde_json::json!(s.indices()));
                    }
                    emit(v);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::KestenMckay { r, points } => {
            if points < 2 {
                return Err("need at least two sample points".into());
            }
            let edge = 2.0 * ((r as f64) - 1.0).sqrt();
            let a = -edge - 0.25;
            let b = edge + 0.25;
            println!("x,F");
            for i in 0..points {
                let x = a + (b - a) * i as f64 / (points - 1) as f64;
                let f = spectral_atoms::random::kesten_mckay_cdf(r, x)
                    .map_err(|e| e.to_string())?;
                println!("{x:.8},{f:.10}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            corpus,
            seed,
            quick,
        } => {
            let exhaustive_n = match corpus.split_once(':') {
                Some(("exhaustive", n)) => n
                    .parse::<usize>()
                    .map_err(|_| format!("bad corpus spec {corpus:?}"))?,
                _ => return Err(format!("bad corpus spec {corpus:?}; use exhaustive:N")),
            };
            let cfg = if quick {
                VerifyConfig::quick()
            } else {
                VerifyConfig::standard()
            }
            .with_seed(seed)
            .with_exhaustive_n(exhaustive_n);
            let mut all = true;
            for suite in spectral_atoms::verify::verify_all(&cfg) {
                for c in &suite.checks {
                    println!(
                        "{:<14} {:<44} {} ({})",
                        suite.suite,
                        c.name,
                        if c.pass { "PASS" } else { "FAIL" },
                        c.detail
                    );
                    all &= c.pass;
                }
            }
            println!("{}", if all { "ALL PASS" } else { "FAILURES PRESENT" });
            Ok(if all {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
