//! `cram`: bounds, exact values, searches and certificate checks for
//! complementary Ramsey numbers.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use cram::bounds::{load_ramsey_table, CertificateRegistry, Engine, Query};
use cram::colorings::{builtin_witness, verify_witness, witness_library, ColoringJson, EdgeColoring, Witness, WitnessJson};
use cram::factorizations::{
    affine_factorization, factorization_search, gen_factorable_value, mols_extract, round_robin, FactorSearchConfig,
    FactorSearchOutcome, Factorization, FactorizationJson,
};
use cram::search::{
    check_kfree_lemma, check_memo_lemma, exact_value_with, exists_good_coloring, ExactOutcome, Exists, ResumeState,
    SearchConfig, WitnessCache,
};
use cram::tables::{reproduce_table, EntryStatus, TableOptions};
use cram::turan::check_extremal_lemma;
use cram::Error;

/// Stdout writes that end the process quietly when the reader has gone away.
macro_rules! println {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        if writeln!(std::io::stdout(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

macro_rules! print {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        if write!(std::io::stdout(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

const EXIT_USAGE: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(name = "cram", version, about = "Complementary Ramsey numbers: bounds, searches and certificates")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Wall-clock budget for searches, e.g. `30s`, `5m`.
    #[arg(long, global = true, value_parser = humantime::parse_duration)]
    budget: Option<Duration>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Two-color Ramsey values merged over the defaults.
    #[arg(long, global = true)]
    ramsey_table: Option<PathBuf>,
    /// Witness and certificate cache.
    #[arg(long, global = true, env = "CRAM_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Single thread, fixed order: witnesses are reproducible.
    #[arg(long, global = true)]
    deterministic: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Interval for R̄(m_1, ..., m_k) from the bound rules.
    Bound {
        #[arg(required = true, value_parser = clap::value_parser!(u32).range(1..))]
        m: Vec<u32>,
    },
    /// Exact value by search above the engine's lower bound.
    Exact {
        #[arg(required = true, value_parser = clap::value_parser!(u32).range(1..))]
        m: Vec<u32>,
    },
    /// Whether K_n has a coloring with alpha_i < m_i for every color.
    Exists {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=64))]
        n: u32,
        #[arg(required = true, value_parser = clap::value_parser!(u32).range(1..))]
        m: Vec<u32>,
        /// Prunes to switch off.
        #[arg(long, value_delimiter = ',')]
        disable: Vec<Prune>,
        /// Resume state: read if present, written when the budget runs out.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Write the witness coloring here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a witness or coloring file, a built-in witness, or a factorization.
    Verify {
        path: Option<PathBuf>,
        #[arg(long, conflicts_with_all = ["path", "factorization"])]
        builtin: Option<String>,
        #[arg(long, conflicts_with = "path")]
        factorization: Option<PathBuf>,
    },
    /// Build a factorization and report the value it certifies.
    Factorize {
        #[arg(value_enum)]
        kind: Construction,
        /// Order for round-robin, field size for the affine plane.
        order: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Search for a factorization of K_n with given class profiles.
    SearchDesign {
        n: usize,
        /// Class profiles such as `3,3,3` or `3,2,2,2x6` (repeat six times).
        #[arg(required = true)]
        classes: Vec<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exhaustive check of a small-graph lemma.
    CheckLemma {
        #[arg(value_enum)]
        lemma: Lemma,
        /// Largest order for the extremal check.
        #[arg(long, default_value_t = 7)]
        max_m: usize,
    },
    /// Recompute a reference table; exit 4 on any mismatch.
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(2..=3))]
        which: u8,
    },
    /// Latin squares from a resolvable coloring of K_{n^2}.
    ExtractMols {
        path: Option<PathBuf>,
        /// Use the affine plane of this order instead of a file.
        #[arg(long, conflicts_with = "path")]
        affine: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Prune {
    P1,
    P2,
    P3,
    P4,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    RoundRobin,
    Affine,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lemma {
    Kfree,
    Memo,
    Extremal,
}

/// A failure with the exit code it maps to.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(EXIT_USAGE, e.to_string())
    }
}

type Out = Result<u8, Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads.filter(|&t| t > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    if cli.global.deterministic {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(1).build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("cram: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Out {
    let g = &cli.global;
    match &cli.command {
        Command::Bound { m } => cmd_bound(g, m),
        Command::Exact { m } => cmd_exact(g, m),
        Command::Exists { n, m, disable, resume, output } => cmd_exists(g, *n as usize, m, disable, resume.as_deref(), output.as_deref()),
        Command::Verify { path, builtin, factorization } => cmd_verify(g, path.as_deref(), builtin.as_deref(), factorization.as_deref()),
        Command::Factorize { kind, order, output } => cmd_factorize(g, *kind, *order, output.as_deref()),
        Command::SearchDesign { n, classes, output } => cmd_search_design(g, *n, classes, output.as_deref()),
        Command::CheckLemma { lemma, max_m } => cmd_check_lemma(g, *lemma, *max_m),
        Command::Table { which } => cmd_table(g, *which),
        Command::ExtractMols { path, affine } => cmd_extract_mols(g, path.as_deref(), *affine),
    }
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn engine(g: &Global) -> Result<Engine, Fail> {
    let table = match &g.ramsey_table {
        Some(p) => load_ramsey_table(p)?,
        None => cram::bounds::RamseyTable::builtin(),
    };
    let mut certs = CertificateRegistry::builtin();
    if let Some(dir) = &g.cache_dir {
        certs.load_dir(dir)?;
    }
    Ok(Engine::new(table, certs))
}

fn search_config(g: &Global) -> SearchConfig {
    if g.deterministic {
        SearchConfig::deterministic()
    } else {
        SearchConfig { threads: g.threads.unwrap_or(0), ..SearchConfig::default() }
    }
}

fn cache(g: &Global) -> Option<WitnessCache> {
    g.cache_dir.as_ref().map(WitnessCache::new)
}

fn query(m: &[u32]) -> Result<Query, Fail> {
    Ok(Query::new(m.to_vec())?)
}

fn cmd_bound(g: &Global, m: &[u32]) -> Out {
    let q = query(m)?;
    let b = engine(g)?.bound(&q);
    if g.json {
        print_json(&b);
    } else {
        println!("R̄{q} in {}", b.interval());
        for s in &b.provenance {
            println!("  {s}");
        }
    }
    Ok(0)
}

fn cmd_exact(g: &Global, m: &[u32]) -> Out {
    let q = query(m)?;
    let mut e = engine(g)?;
    let r = exact_value_with(&q, g.budget, &search_config(g), &mut e, cache(g).as_ref())?;
    if g.json {
        print_json(&r);
    } else {
        match r.outcome {
            ExactOutcome::Exact { value } => println!("R̄{q} = {value}"),
            ExactOutcome::Bound { lo, hi } => {
                println!("R̄{q} in {} (undecided within budget)", cram::bounds::Interval { lo, hi })
            }
        }
        for run in &r.runs {
            let cached = if run.from_cache { ", cached" } else { "" };
            println!("  n={}: {:?} ({} nodes{cached})", run.n, run.exists, run.nodes);
        }
    }
    Ok(if r.value().is_some() { 0 } else { EXIT_UNDECIDED })
}

fn cmd_exists(g: &Global, n: usize, m: &[u32], disable: &[Prune], resume: Option<&Path>, output: Option<&Path>) -> Out {
    let q = query(m)?;
    let mut cfg = search_config(g);
    cfg.engine = Some(std::sync::Arc::new(engine(g)?));
    for p in disable {
        match p {
            Prune::P1 => cfg.p1 = false,
            Prune::P2 => cfg.p2 = false,
            Prune::P3 => cfg.p3 = false,
            Prune::P4 => cfg.p4 = false,
        }
    }
    if let Some(path) = resume.filter(|p| p.exists()) {
        let text = std::fs::read_to_string(path).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
        let state: ResumeState =
            serde_json::from_str(&text).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
        cfg.resume = Some(state);
    }
    let out = exists_good_coloring(n, &q, g.budget, &cfg)?;
    if let (Some(path), Some(state)) = (resume, &out.resume) {
        write_file(path, &serde_json::to_string_pretty(state).expect("serializable"))?;
    }
    if let (Some(w), Some(c)) = (&out.witness, cache(g)) {
        c.store(&q, w)?;
    }
    if let (Some(w), Some(path)) = (&out.witness, output) {
        write_file(path, &serde_json::to_string_pretty(&w.to_json()).expect("serializable"))?;
    }
    if g.json {
        print_json(&json!({
            "n": n,
            "query": q,
            "exists": out.exists,
            "witness": out.witness.as_ref().map(EdgeColoring::to_json),
            "stats": out.stats,
        }));
    } else {
        let word = match out.exists {
            Exists::Yes => "yes",
            Exists::No => "no",
            Exists::Undecided => "undecided",
        };
        println!("good coloring of K_{n} for {q}: {word}");
        if let Some(w) = &out.witness {
            println!("  alpha = {:?}", w.alpha_vector());
        }
        let s = &out.stats;
        println!(
            "  {} nodes; prunes P1 {} P2 {} P3 {} P4 {}; {} ms",
            s.nodes, s.prune_p1, s.prune_p2, s.prune_p3, s.prune_p4, s.elapsed_ms
        );
    }
    Ok(if out.exists == Exists::Undecided { EXIT_UNDECIDED } else { 0 })
}

fn write_file(path: &Path, text: &str) -> Result<(), Fail> {
    std::fs::write(path, text).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<serde_json::Value, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Fail(EXIT_USAGE, format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))
}

fn parse_as<T: serde::de::DeserializeOwned>(v: serde_json::Value, path: &Path) -> Result<T, Fail> {
    serde_json::from_value(v).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn cmd_verify(g: &Global, path: Option<&Path>, builtin: Option<&str>, factorization: Option<&Path>) -> Out {
    if let Some(p) = factorization {
        let doc: FactorizationJson = parse_as(read_json(p)?, p)?;
        let f = Factorization::from_json(&doc)?;
        return report_factorization(g, &f);
    }
    let w = if let Some(id) = builtin {
        builtin_witness(id).ok_or_else(|| {
            let ids: Vec<String> = witness_library().into_iter().map(|w| w.id).collect();
            Fail(EXIT_USAGE, format!("no built-in witness {id}; known: {}", ids.join(", ")))
        })?
    } else if let Some(p) = path {
        let v = read_json(p)?;
        if v.get("expected_alpha").is_some() {
            Witness::from_json(&parse_as::<WitnessJson>(v, p)?)?
        } else {
            let c = EdgeColoring::from_json(&parse_as::<ColoringJson>(v, p)?)?;
            let alpha = c.alpha_vector();
            let id = p.display().to_string();
            Witness { id, coloring: c, expected_alpha: alpha }
        }
    } else {
        return Err(Fail(EXIT_USAGE, "give a file, --builtin ID or --factorization FILE".into()));
    };
    let r = verify_witness(&w);
    if g.json {
        print_json(&r);
    } else {
        let alpha: Vec<String> = r.alpha.iter().map(usize::to_string).collect();
        println!("{}: n={} alpha=({})", r.id, r.n, alpha.join(","));
        if r.ok {
            println!("  certifies R̄{} > {}", r.certifies, r.n);
        } else {
            println!("  expected alpha {:?}", r.expected_alpha);
        }
    }
    Ok(if r.ok { 0 } else { EXIT_MISMATCH })
}

fn report_factorization(g: &Global, f: &Factorization) -> Out {
    let shapes: Vec<String> = f
        .shapes()
        .iter()
        .map(|s| match s {
            Some(s) => format!("{}K{} + {}K{}", s.r, s.q + 1, s.n - s.r, s.q),
            None => "not a union of cliques".into(),
        })
        .collect();
    let cert = gen_factorable_value(f);
    if g.json {
        print_json(&json!({
            "N": f.n(),
            "k": f.k(),
            "classes": shapes,
            "certifies": cert.as_ref().ok(),
            "inapplicable": cert.as_ref().err().map(|e| e.reason.clone()),
        }));
    } else {
        println!("K_{} into {} classes", f.n(), f.k());
        for (i, s) in shapes.iter().enumerate() {
            println!("  class {}: {s}", i + 1);
        }
        match &cert {
            Ok(c) => println!("  certifies R̄{} = {}", c.query, c.value),
            Err(e) => println!("  {e}"),
        }
    }
    Ok(if cert.is_ok() { 0 } else { EXIT_MISMATCH })
}

fn cmd_factorize(g: &Global, kind: Construction, order: usize, output: Option<&Path>) -> Out {
    let f = match kind {
        Construction::RoundRobin => round_robin(order)?,
        Construction::Affine => affine_factorization(order)?,
    };
    if let Some(p) = output {
        write_file(p, &serde_json::to_string(&f.to_json()).expect("serializable"))?;
    }
    report_factorization(g, &f)
}

fn parse_profile(s: &str) -> Result<Vec<Vec<usize>>, Fail> {
    let bad = || Fail(EXIT_USAGE, format!("bad class profile {s:?}; expected e.g. 3,3,3 or 3,2,2,2x6"));
    let (parts, times) = match s.split_once('x') {
        Some((p, t)) => (p, t.parse::<usize>().map_err(|_| bad())?),
        None => (s, 1),
    };
    let sizes: Vec<usize> =
        parts.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_, _>>()?;
    Ok(vec![sizes; times])
}

fn cmd_search_design(g: &Global, n: usize, classes: &[String], output: Option<&Path>) -> Out {
    let mut profiles = Vec::new();
    for c in classes {
        profiles.extend(parse_profile(c)?);
    }
    let cfg = FactorSearchConfig { budget: g.budget, parallel: !g.deterministic };
    let (out, stats) = factorization_search(n, &profiles, &cfg)?;
    match out {
        FactorSearchOutcome::Found(f) => {
            if let Some(p) = output {
                write_file(p, &serde_json::to_string(&f.to_json()).expect("serializable"))?;
            }
            if !g.json {
                println!("found ({} nodes, {} ms)", stats.nodes, stats.elapsed_ms);
            }
            report_factorization(g, &f)
        }
        FactorSearchOutcome::NotFound { exhausted } => {
            if g.json {
                print_json(&json!({ "found": false, "exhausted": exhausted, "stats": stats }));
            } else if exhausted {
                println!("no such factorization ({} nodes, {} ms)", stats.nodes, stats.elapsed_ms);
            } else {
                println!("not found within budget ({} nodes)", stats.nodes);
            }
            Ok(if exhausted { 0 } else { EXIT_UNDECIDED })
        }
    }
}

fn cmd_check_lemma(g: &Global, lemma: Lemma, max_m: usize) -> Out {
    let violations = match lemma {
        Lemma::Kfree => {
            let r = check_kfree_lemma()?;
            if g.json {
                print_json(&r);
            } else {
                println!(
                    "cubic graphs of order 10: {}, K4-free: {}, least alpha among K4-free: {}",
                    r.cubic_graphs, r.k4_free, r.min_alpha_k4_free
                );
                println!("K4 plus prism: alpha {}, contains K4: {}", r.remark_alpha, r.remark_contains_k4);
            }
            r.violations
        }
        Lemma::Memo => {
            let r = check_memo_lemma()?;
            if g.json {
                print_json(&r);
            } else {
                println!(
                    "triangle-free graphs on 7 vertices: {}, order-8 extensions: {}, least alpha: {}",
                    r.base_graphs, r.extensions, r.min_alpha
                );
            }
            r.violations
        }
        Lemma::Extremal => {
            let r = check_extremal_lemma(max_m)?;
            if g.json {
                print_json(&r);
            } else {
                println!(
                    "orders up to {}: {} graphs, {} (graph, n) instances, {} equality cases",
                    r.max_m, r.graphs_checked, r.instances_checked, r.equality_cases
                );
            }
            r.violations
        }
    };
    if !g.json {
        println!("violations: {}", violations.len());
        for v in violations.iter().take(10) {
            println!("  {v}");
        }
    }
    Ok(if violations.is_empty() { 0 } else { EXIT_MISMATCH })
}

fn cmd_table(g: &Global, which: u8) -> Out {
    let mut opts = TableOptions {
        engine: engine(g)?,
        budget: g.budget,
        search: search_config(g),
        cache: cache(g),
        design_budget: g.budget,
    };
    let r = reproduce_table(which, &mut opts)?;
    if g.json {
        print_json(&r);
    } else {
        print!("{}", r.render());
    }
    if !r.mismatches().is_empty() {
        return Ok(EXIT_MISMATCH);
    }
    Ok(if r.entries.iter().any(|e| e.status == EntryStatus::Undetermined) { EXIT_UNDECIDED } else { 0 })
}

fn cmd_extract_mols(g: &Global, path: Option<&Path>, affine: Option<usize>) -> Out {
    let c = match (path, affine) {
        (_, Some(q)) => affine_factorization(q)?.to_coloring()?,
        (Some(p), None) => {
            let v = read_json(p)?;
            if v.get("factors").is_some() {
                Factorization::from_json(&parse_as::<FactorizationJson>(v, p)?)?.to_coloring()?
            } else {
                EdgeColoring::from_json(&parse_as::<ColoringJson>(v, p)?)?
            }
        }
        (None, None) => return Err(Fail(EXIT_USAGE, "give a coloring file or --affine Q".into())),
    };
    let squares = match mols_extract(&c) {
        Ok(s) => s,
        Err(e @ (Error::NotResolvable(_) | Error::NotGrid(_))) => return Err(Fail(EXIT_MISMATCH, e.to_string())),
        Err(e) => return Err(e.into()),
    };
    if g.json {
        print_json(&json!({ "order": squares.first().map_or(0, Vec::len), "squares": squares }));
    } else {
        for (i, s) in squares.iter().enumerate() {
            println!("square {}:", i + 1);
            for row in s {
                let cells: Vec<String> = row.iter().map(|x| (x + 1).to_string()).collect();
                println!("  {}", cells.join(" "));
            }
        }
    }
    Ok(0)
}
