//! One line per acceptance criterion; exits non-zero if any fails.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use urd_core::atlas;
use urd_core::compose::build_iurd_36_12;
use urd_core::ingredients::{rgdd, two_frame};
use urd_core::model::Design;
use urd_core::mutate::{rgdd_substitutions, vertex_substitutions};
use urd_core::par::Exec;
use urd_core::search::cache::Cache;
use urd_core::search::{catalog, solve};
use urd_core::solver::{build_urd, build_urgdd};
use urd_core::spectrum::{
    add, d, dbar, enumerate_weight, iset, oracle_enumerate, repeat, Profile, TripleSet,
};
use urd_core::verify::verify_design;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn spectrum_equivalence() -> Verdict {
    let start = Instant::now();
    for v in (12..=600).step_by(12) {
        if d(v).map_err(|e| e.to_string())? != oracle_enumerate(v) {
            return Err(format!("D({v}) differs from the enumeration"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(5) {
        return Err(format!("took {elapsed:.2?}"));
    }
    Ok(format!("50 values of v agree in {elapsed:.2?}"))
}

fn every_target_builds() -> Verdict {
    let start = Instant::now();
    let mut jobs = Vec::new();
    for v in (12..=120).step_by(12) {
        jobs.extend(d(v).map_err(|e| e.to_string())?.iter().map(|&p| (v, p)));
    }
    let total = jobs.len();
    let failures: Vec<String> = Exec::Parallel
        .map(jobs, |(v, p)| match build_urd(v, p) {
            Ok(design) if verify_design(&design).is_valid() && design.profile == p => None,
            Ok(_) => Some(format!("URD({v}; {p}) rejected by the verifier")),
            Err(e) => Some(format!("URD({v}; {p}): {e}")),
        })
        .into_iter()
        .flatten()
        .collect();
    let elapsed = start.elapsed();
    if !failures.is_empty() {
        return Err(format!(
            "{} of {total} failed, first: {}",
            failures.len(),
            failures[0]
        ));
    }
    if elapsed > Duration::from_secs(600) {
        return Err(format!("took {elapsed:.2?}"));
    }
    Ok(format!(
        "{total} certificates built and verified in {elapsed:.2?}"
    ))
}

fn repeated_sums() -> Verdict {
    let base = dbar(1, 2);
    for h in 1..=8u32 {
        let sum = repeat(h as usize, &base);
        if sum != dbar(1, h + 1) || sum != enumerate_weight(72 * h as u64) {
            return Err(format!("h = {h}"));
        }
    }
    Ok("h = 1..8 agree with both the tables and the enumeration".into())
}

fn atlas_fidelity() -> Verdict {
    let entries = atlas::all().map_err(|e| e.to_string())?;
    let errata: usize = entries.iter().map(|e| e.errata.len()).sum();
    if errata > 2 {
        return Err(format!("{errata} errata applied"));
    }
    for entry in &entries {
        let report = verify_design(&entry.design);
        if !report.is_valid() {
            return Err(format!("{}: {}", entry.id, report.summary(3)));
        }
    }
    Ok(format!(
        "{} entries verify with {errata} errata",
        entries.len()
    ))
}

fn generating_sets() -> Verdict {
    let q = iset::q();
    let pair = |a: usize, b: usize| iset::i(a).union(&iset::i(b));
    let cycles = |n: u32| TripleSet::singleton(Profile::new(0, 9 * n, 0));
    let checks = [
        ("I1 ∪ I2 ⊆ 8*Q", pair(1, 2).is_subset(&repeat(8, &q))),
        (
            "I3 ∪ I4 ⊆ 6*Q + (0,9,0)",
            pair(3, 4).is_subset(&add(&repeat(6, &q), &cycles(1))),
        ),
        (
            "I5 ∪ I6 ⊆ 4*Q + (0,18,0)",
            pair(5, 6).is_subset(&add(&repeat(4, &q), &cycles(2))),
        ),
        (
            "I7 ∪ I8 ⊆ 6*W",
            pair(7, 8).is_subset(&repeat(6, &iset::w())),
        ),
    ];
    match checks.iter().find(|(_, ok)| !ok) {
        Some((name, _)) => Err(format!("{name} fails")),
        None => Ok("all four containments hold".into()),
    }
}

fn searched_designs() -> Verdict {
    let cache = Cache::open(Cache::default_dir());
    let mut slowest = (String::new(), Duration::ZERO);
    for spec in catalog::all() {
        match cache.get(&spec) {
            Ok(Some(_)) => {}
            Ok(None) => return Err(format!("{} is not cached", spec.name)),
            Err(e) => return Err(e.to_string()),
        }
        let limit = Duration::from_secs(if spec.v == 60 { 1800 } else { 60 });
        let start = Instant::now();
        let solution = solve(&spec, Exec::Parallel).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        spec.check(&solution)
            .map_err(|e| format!("{}: {e}", spec.name))?;
        if elapsed > limit {
            return Err(format!("{} regenerated in {elapsed:.2?}", spec.name));
        }
        if elapsed > slowest.1 {
            slowest = (spec.name.clone(), elapsed);
        }
    }
    Ok(format!(
        "{} designs cached, verified and regenerated; slowest {} in {:.2?}",
        catalog::all().len(),
        slowest.0,
        slowest.1
    ))
}

fn mutations() -> Verdict {
    const COUNT: usize = 50;
    let build = |r: urd_core::Result<Design>| r.map_err(|e| e.to_string());
    let families: Vec<(&str, Design)> = vec![
        ("urd", build(build_urd(48, Profile::new(0, 33, 2)))?),
        ("urgdd", build(build_urgdd(12, 5, Profile::new(36, 9, 0)))?),
        (
            "iurd",
            build(build_iurd_36_12(
                Profile::new(0, 9, 8),
                Profile::new(0, 6, 2),
            ))?,
        ),
        ("frame", build(two_frame(4))?),
        (
            "ingredient",
            build(atlas::get("p2c5-2x5-(6,1)").map(|e| e.design))?,
        ),
    ];
    for (i, (name, design)) in families.iter().enumerate() {
        let muts = vertex_substitutions(design, COUNT, i as u64 + 1);
        if muts.len() < COUNT {
            return Err(format!("{name}: only {} mutations", muts.len()));
        }
        for m in &muts {
            let report = verify_design(&m.design);
            if report.is_valid() || !m.is_localized(&report) {
                return Err(format!(
                    "{name}: {} -> {} in class {} not caught at its class",
                    m.from, m.to, m.class
                ));
            }
        }
    }
    let r = rgdd(3, 3, 5).map_err(|e| e.to_string())?;
    for (m, class) in rgdd_substitutions(&r, COUNT, 99) {
        match m.verify() {
            Err(e) if e.starts_with(&format!("class {class}")) => {}
            other => return Err(format!("rgdd: class {class} mutation gave {other:?}")),
        }
    }
    Ok(format!(
        "{} families x {COUNT} mutations rejected and localized",
        families.len() + 1
    ))
}

fn read_dir_bytes(dir: &Path) -> std::io::Result<Vec<(String, Vec<u8>)>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        files.push((
            entry.file_name().to_string_lossy().into_owned(),
            fs::read(entry.path())?,
        ));
    }
    files.sort();
    Ok(files)
}

fn deterministic_selftest() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut sets = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_urd"))
            .args(["selftest", "--max-v", "60", "--seed", "7"])
            .arg("--out")
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!("selftest run {run} failed"));
        }
        sets.push(read_dir_bytes(&out).map_err(|e| e.to_string())?);
    }
    if sets[0].is_empty() || sets[0] != sets[1] {
        return Err("certificate sets differ".into());
    }
    Ok(format!(
        "{} certificates byte-identical across runs",
        sets[0].len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "spectrum equals enumeration for v <= 600",
            spectrum_equivalence,
        ),
        (
            "every target for v <= 120 builds and verifies",
            every_target_builds,
        ),
        ("repeated sums of the 12^2 spectrum", repeated_sums),
        ("atlas entries verify", atlas_fidelity),
        ("generating-set containments", generating_sets),
        ("searched designs cached and verified", searched_designs),
        ("single mutations rejected and localized", mutations),
        (
            "selftest certificates are deterministic",
            deterministic_selftest,
        ),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {}: {name} ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}: {name} ({detail})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
