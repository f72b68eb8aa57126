use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use urd_core::atlas;
use urd_core::compose::build_iurd_36_12;
use urd_core::error::{Error, SearchError};
use urd_core::ingredients::{
    bipartite_one_factorization, one_factorization, rgdd, two_frame, Rgdd,
};
use urd_core::model::Design;
use urd_core::par::Exec;
use urd_core::search::{cache, catalog, solve, Budget, SearchSpec, Solution};
use urd_core::solver::{build_urd, build_urd20, build_urgdd, route};
use urd_core::spectrum::{block_index, d, Profile};
use urd_core::verify::verify_design;

const EXIT_INVALID: u8 = 1;
const EXIT_SPECTRUM: u8 = 2;
const EXIT_INTERNAL: u8 = 3;
const EXIT_EXHAUSTED: u8 = 4;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "urd",
    version,
    about = "Uniformly resolvable decompositions of K_v into matchings, P3- and P4-factors"
)]
struct Cli {
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the admissible profiles D(v).
    Spectrum {
        #[arg(long)]
        v: u32,
        #[arg(long)]
        json: bool,
    },
    /// Build and verify a URD(v; r, s, t) certificate.
    Build {
        #[arg(long)]
        v: u32,
        #[arg(short)]
        r: u32,
        #[arg(short)]
        s: u32,
        #[arg(short)]
        t: u32,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = catalog::DEFAULT_SEED)]
        seed: u64,
    },
    /// Verify a certificate file (a design, an RGDD or a cache entry).
    Verify {
        file: PathBuf,
        #[arg(long)]
        json_report: bool,
    },
    /// Emit one ingredient certificate.
    Ingredient {
        /// atlas, one-factorization, bipartite, frame, rgdd, urgdd, urd20 or iurd.
        #[arg(long)]
        family: String,
        /// Atlas entry id; lists the entries when omitted.
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        g: Option<usize>,
        #[arg(long)]
        u: Option<usize>,
        /// Profile `r,s,t` (full profile for iurd).
        #[arg(long)]
        profile: Option<Profile>,
        /// Partial profile `r,s,t` of an IURD.
        #[arg(long)]
        partial: Option<Profile>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a search spec (a JSON file or a catalog name).
    Search {
        #[arg(long, conflicts_with = "name")]
        spec: Option<PathBuf>,
        #[arg(long)]
        name: Option<String>,
        /// List the catalog instead of searching.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        seed: Option<u64>,
        /// `RESTARTS:STEPS`.
        #[arg(long)]
        budget: Option<String>,
        /// Store the result in the certificate cache.
        #[arg(long)]
        store: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and verify every profile of D(v) for v = 12, 24, ..., max-v.
    Selftest {
        #[arg(long, default_value_t = 120)]
        max_v: u32,
        #[arg(long, default_value_t = catalog::DEFAULT_SEED)]
        seed: u64,
        /// Write every certificate into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Time the constructions per route.
    Bench {
        #[arg(long, default_value_t = 120)]
        max_v: u32,
        #[arg(long)]
        json: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Spectrum(_) => EXIT_SPECTRUM,
            Error::Search(SearchError::Exhausted { .. }) => EXIT_EXHAUSTED,
            _ => EXIT_INTERNAL,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_USAGE, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    match run(cli.command, exec) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command, exec: Exec) -> Outcome {
    match command {
        Command::Spectrum { v, json } => spectrum(v, json),
        Command::Build {
            v,
            r,
            s,
            t,
            out,
            seed,
        } => {
            catalog::set_seed(seed);
            let target = Profile::new(r, s, t);
            let how = route(v, target)?;
            let design = build_urd(v, target)?;
            eprintln!("URD({v}; {target}) via {how}: verified");
            emit(&design.to_json(), out.as_deref())
        }
        Command::Verify { file, json_report } => verify(&file, json_report),
        Command::Ingredient {
            family,
            id,
            n,
            k,
            g,
            u,
            profile,
            partial,
            out,
        } => ingredient(&family, id, [n, k, g, u], profile, partial, out),
        Command::Search {
            spec,
            name,
            list,
            seed,
            budget,
            store,
            out,
        } => search(spec, name, list, seed, budget, store, out, exec),
        Command::Selftest {
            max_v,
            seed,
            out,
            json,
        } => selftest(max_v, seed, out, json, exec),
        Command::Bench { max_v, json } => bench(max_v, json),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    match out {
        Some(path) => {
            fs::write(path, format!("{text}\n"))?;
            Ok(())
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn spectrum(v: u32, json: bool) -> Outcome {
    let set = d(v).map_err(Error::from)?;
    if json {
        let rows: Vec<_> = set
            .iter()
            .map(|p| json!({"r": p.r, "s": p.s, "t": p.t, "block": block_index(*p)}))
            .collect();
        println!("{}", json!({"v": v, "count": set.len(), "profiles": rows}));
    } else {
        println!("{:>5} {:>5} {:>5} {:>6}", "r", "s", "t", "block");
        for p in &set {
            println!("{:>5} {:>5} {:>5} {:>6}", p.r, p.s, p.t, block_index(*p));
        }
        println!("{} profiles", set.len());
    }
    Ok(())
}

enum Certificate {
    Design(Design),
    Rgdd(Rgdd),
}

fn read_certificate(path: &Path) -> Result<Certificate, Failure> {
    let text = fs::read_to_string(path)?;
    let invalid = |e: String| {
        Failure::new(
            EXIT_INVALID,
            format!("{}: malformed certificate: {e}", path.display()),
        )
    };
    let mut value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| invalid(e.to_string()))?;
    if let Some(inner) = value.get_mut("certificate") {
        value = inner.take();
    }
    let body = value.to_string();
    if value.get("kind").and_then(|k| k.as_str()) == Some("rgdd") {
        Rgdd::from_json(&body)
            .map(Certificate::Rgdd)
            .map_err(|e| invalid(e.to_string()))
    } else {
        Design::from_json(&body)
            .map(Certificate::Design)
            .map_err(|e| invalid(e.to_string()))
    }
}

fn verify(path: &Path, json_report: bool) -> Outcome {
    match read_certificate(path)? {
        Certificate::Design(design) => {
            let report = verify_design(&design);
            if json_report {
                println!(
                    "{}",
                    json!({"valid": report.is_valid(), "violations": report.violations})
                );
            } else if report.is_valid() {
                println!(
                    "valid {} on {} points, profile {}",
                    design.kind.name(),
                    design.v,
                    design.profile
                );
            } else {
                for violation in &report.violations {
                    println!("{violation}");
                }
            }
            if report.is_valid() {
                Ok(())
            } else {
                Err(Failure::new(
                    EXIT_INVALID,
                    format!("{} violations", report.violations.len()),
                ))
            }
        }
        Certificate::Rgdd(r) => {
            let verdict = r.verify();
            if json_report {
                println!(
                    "{}",
                    json!({"valid": verdict.is_ok(), "violations": verdict.as_ref().err()})
                );
            } else if verdict.is_ok() {
                println!("valid {}-RGDD on {} points", r.k, r.v);
            }
            verdict.map_err(|e| Failure::new(EXIT_INVALID, e))
        }
    }
}

fn need<T>(value: Option<T>, flag: &str, family: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::new(EXIT_USAGE, format!("--family {family} needs --{flag}")))
}

fn ingredient(
    family: &str,
    id: Option<String>,
    [n, k, g, u]: [Option<usize>; 4],
    profile: Option<Profile>,
    partial: Option<Profile>,
    out: Option<PathBuf>,
) -> Outcome {
    let text = match family {
        "atlas" => match id {
            None => {
                for entry in atlas::all()? {
                    println!(
                        "{:<24} errata {}  {}",
                        entry.id,
                        entry.errata.len(),
                        entry.source
                    );
                }
                return Ok(());
            }
            Some(id) => atlas::get(&id)
                .map_err(|e| match e {
                    Error::Lookup(_) => Failure::new(EXIT_USAGE, e.to_string()),
                    other => other.into(),
                })?
                .design
                .to_json(),
        },
        "one-factorization" => one_factorization(need(n, "n", family)?)?.to_json(),
        "bipartite" => bipartite_one_factorization(need(n, "n", family)?).to_json(),
        "frame" => two_frame(need(u, "u", family)?)?.to_json(),
        "rgdd" => rgdd(
            need(k, "k", family)?,
            need(g, "g", family)?,
            need(u, "u", family)?,
        )?
        .to_json(),
        "urgdd" => build_urgdd(
            need(g, "g", family)?,
            need(u, "u", family)?,
            need(profile, "profile", family)?,
        )?
        .to_json(),
        "urd20" => build_urd20(need(profile, "profile", family)?)?.to_json(),
        "iurd" => build_iurd_36_12(
            need(profile, "profile", family)?,
            need(partial, "partial", family)?,
        )?
        .to_json(),
        other => {
            return Err(Failure::new(
                EXIT_USAGE,
                format!("unknown family {other:?}"),
            ))
        }
    };
    emit(&text, out.as_deref())
}

fn parse_budget(text: &str) -> Result<Budget, Failure> {
    let bad = || {
        Failure::new(
            EXIT_USAGE,
            format!("budget must be RESTARTS:STEPS, got {text:?}"),
        )
    };
    let (r, s) = text.split_once(':').ok_or_else(bad)?;
    Ok(Budget {
        restarts: r.parse().map_err(|_| bad())?,
        steps: s.parse().map_err(|_| bad())?,
    })
}

#[allow(clippy::too_many_arguments)]
fn search(
    spec: Option<PathBuf>,
    name: Option<String>,
    list: bool,
    seed: Option<u64>,
    budget: Option<String>,
    store: bool,
    out: Option<PathBuf>,
    exec: Exec,
) -> Outcome {
    if list {
        for s in catalog::all() {
            println!(
                "{:<22} {:>3} points  {:?}  key {}",
                s.name,
                s.v,
                s.engine,
                &s.key()[..8]
            );
        }
        return Ok(());
    }
    let mut spec: SearchSpec = match (spec, name) {
        (Some(path), _) => serde_json::from_str(&fs::read_to_string(&path)?)
            .map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))?,
        (None, Some(name)) => catalog::by_name(&name)
            .ok_or_else(|| Failure::new(EXIT_USAGE, format!("no catalog spec named {name:?}")))?,
        (None, None) => {
            return Err(Failure::new(
                EXIT_USAGE,
                "give --spec FILE, --name NAME or --list",
            ))
        }
    };
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    if let Some(text) = budget {
        spec.budget = parse_budget(&text)?;
    }
    let start = Instant::now();
    let solution = solve(&spec, exec).map_err(Error::from)?;
    eprintln!("{}: solved in {:.2?}", spec.name, start.elapsed());
    if store {
        let path = cache::Cache::open(cache::Cache::default_dir()).put(&spec, &solution)?;
        eprintln!("stored {}", path.display());
    }
    let text = match &solution {
        Solution::Design(d) => d.to_json(),
        Solution::Rgdd(r) => r.to_json(),
    };
    emit(&text, out.as_deref())
}

struct Outcomes {
    v: u32,
    profile: Profile,
    result: Result<String, String>,
    millis: f64,
}

fn run_all(max_v: u32, exec: Exec) -> Result<Vec<Outcomes>, Failure> {
    let mut jobs = Vec::new();
    for v in (12..=max_v).step_by(12) {
        for &p in &d(v).map_err(Error::from)? {
            jobs.push((v, p));
        }
    }
    Ok(exec.map(jobs, |(v, p)| {
        let start = Instant::now();
        let result = build_urd(v, p)
            .map(|d| d.to_json())
            .map_err(|e| e.to_string());
        Outcomes {
            v,
            profile: p,
            result,
            millis: start.elapsed().as_secs_f64() * 1e3,
        }
    }))
}

fn selftest(max_v: u32, seed: u64, out: Option<PathBuf>, json: bool, exec: Exec) -> Outcome {
    catalog::set_seed(seed);
    if let Some(dir) = &out {
        fs::create_dir_all(dir)?;
    }
    let start = Instant::now();
    let outcomes = run_all(max_v, exec)?;
    let mut table: BTreeMap<u32, (usize, usize, f64)> = BTreeMap::new();
    let mut failures = Vec::new();
    for o in &outcomes {
        let row = table.entry(o.v).or_default();
        row.0 += 1;
        row.2 += o.millis;
        match &o.result {
            Ok(text) => {
                row.1 += 1;
                if let Some(dir) = &out {
                    let name = format!(
                        "urd-{}-{}-{}-{}.json",
                        o.v, o.profile.r, o.profile.s, o.profile.t
                    );
                    fs::write(dir.join(name), format!("{text}\n"))?;
                }
            }
            Err(e) => failures.push(format!("URD({}; {}): {e}", o.v, o.profile)),
        }
    }
    if json {
        let rows: Vec<_> = table
            .iter()
            .map(|(v, (n, ok, ms))| json!({"v": v, "targets": n, "verified": ok, "millis": ms.round()}))
            .collect();
        println!("{}", json!({"rows": rows, "failures": failures}));
    } else {
        println!("{:>5} {:>8} {:>9} {:>10}", "v", "targets", "verified", "ms");
        for (v, (n, ok, ms)) in &table {
            println!("{v:>5} {n:>8} {ok:>9} {ms:>10.1}");
        }
        for f in &failures {
            println!("FAILED {f}");
        }
        let total: usize = table.values().map(|r| r.0).sum();
        println!(
            "{} of {total} verified in {:.2?}",
            total - failures.len(),
            start.elapsed()
        );
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::new(
            EXIT_INVALID,
            format!("{} targets failed", failures.len()),
        ))
    }
}

fn bench(max_v: u32, json: bool) -> Outcome {
    let outcomes = run_all(max_v, Exec::Sequential)?;
    let mut per_route: BTreeMap<String, (usize, f64)> = BTreeMap::new();
    for o in &outcomes {
        let label = route(o.v, o.profile)
            .map(|r| r.to_string())
            .unwrap_or_else(|e| e.to_string());
        let row = per_route.entry(label).or_default();
        row.0 += 1;
        row.1 += o.millis;
    }
    if json {
        let rows: Vec<_> = per_route
            .iter()
            .map(|(r, (n, ms))| json!({"route": r, "builds": n, "millis": ms, "mean_millis": ms / *n as f64}))
            .collect();
        println!("{}", serde_json::Value::Array(rows));
    } else {
        println!(
            "{:<56} {:>7} {:>10} {:>9}",
            "route", "builds", "total ms", "mean ms"
        );
        for (r, (n, ms)) in &per_route {
            println!("{r:<56} {n:>7} {ms:>10.1} {:>9.2}", ms / *n as f64);
        }
    }
    Ok(())
}
