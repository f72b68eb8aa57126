//! Content-addressed certificate store.
//!
//! Entries live in one directory as `<name>-<hash8>.json`, keyed by the hash of
//! the spec without seed and budget. Every entry is re-verified against its spec
//! when loaded; entries that fail are deleted and reported as corrupt.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::{solve, Budget, Engine, SearchSpec, Solution};
use crate::error::{Error, Result, SearchError};
use crate::ingredients::Rgdd;
use crate::model::Design;
use crate::par::Exec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub budget: Budget,
    pub engine: Engine,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub name: String,
    pub provenance: Provenance,
    pub certificate: serde_json::Value,
}

pub struct Cache {
    dir: PathBuf,
}

fn slug(name: &str) -> String {
    let mut out = String::new();
    for ch in name.chars() {
        if ch.is_ascii_alphanumeric() {
            out.push(ch);
        } else if !out.ends_with('-') {
            out.push('-');
        }
    }
    out.trim_end_matches('-').to_string()
}

fn parse_certificate(value: &serde_json::Value) -> Result<Solution> {
    let text = value.to_string();
    match value.get("kind").and_then(|k| k.as_str()) {
        Some("rgdd") => Ok(Solution::Rgdd(Rgdd::from_json(&text)?)),
        _ => Ok(Solution::Design(Design::from_json(&text)?)),
    }
}

fn certificate_text(solution: &Solution) -> String {
    match solution {
        Solution::Design(d) => d.to_json(),
        Solution::Rgdd(r) => r.to_json(),
    }
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    /// The shipped store, or `$URD_CACHE_DIR` when set.
    pub fn default_dir() -> PathBuf {
        std::env::var_os("URD_CACHE_DIR")
            .map(PathBuf::from)
            .unwrap_or_else(|| {
                Path::new(env!("CARGO_MANIFEST_DIR"))
                    .join("data")
                    .join("cache")
            })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, spec: &SearchSpec) -> PathBuf {
        let key = spec.key();
        self.dir
            .join(format!("{}-{}.json", slug(&spec.name), &key[..8]))
    }

    /// Load and re-verify the entry for `spec`. A corrupt entry is removed.
    pub fn get(&self, spec: &SearchSpec) -> std::result::Result<Option<CacheEntry>, SearchError> {
        let path = self.path_for(spec);
        let Ok(text) = fs::read_to_string(&path) else {
            return Ok(None);
        };
        let key = spec.key();
        let checked = serde_json::from_str::<CacheEntry>(&text)
            .map_err(|e| e.to_string())
            .and_then(|entry| {
                if entry.key != key {
                    return Err("key does not match the spec".to_string());
                }
                let solution = parse_certificate(&entry.certificate).map_err(|e| e.to_string())?;
                spec.check(&solution)?;
                Ok(entry)
            });
        match checked {
            Ok(entry) => Ok(Some(entry)),
            Err(detail) => {
                let _ = fs::remove_file(&path);
                Err(SearchError::Corrupt { key, detail })
            }
        }
    }

    pub fn get_solution(
        &self,
        spec: &SearchSpec,
    ) -> std::result::Result<Option<Solution>, SearchError> {
        match self.get(spec)? {
            Some(entry) => Ok(Some(parse_certificate(&entry.certificate).map_err(
                |e| SearchError::Corrupt {
                    key: entry.key.clone(),
                    detail: e.to_string(),
                },
            )?)),
            None => Ok(None),
        }
    }

    /// Store a solution after checking it against the spec.
    pub fn put(&self, spec: &SearchSpec, solution: &Solution) -> Result<PathBuf> {
        spec.check(solution)
            .map_err(|e| Error::Verification(format!("refusing to cache {}: {e}", spec.name)))?;
        let entry = CacheEntry {
            key: spec.key(),
            name: spec.name.clone(),
            provenance: Provenance {
                seed: spec.seed,
                budget: spec.budget,
                engine: spec.engine,
            },
            certificate: serde_json::from_str(&certificate_text(solution))?,
        };
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(spec);
        let mut text = serde_json::to_string(&entry)?;
        text.push('\n');
        fs::write(&path, text)?;
        Ok(path)
    }
}

fn memo() -> &'static Mutex<HashMap<String, Solution>> {
    static MEMO: OnceLock<Mutex<HashMap<String, Solution>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Memory, then the default store, then a fresh search whose result is stored.
pub fn fetch(spec: &SearchSpec) -> Result<Solution> {
    let key = spec.key();
    if let Some(hit) = memo().lock().expect("cache memo").get(&key) {
        return Ok(hit.clone());
    }
    let cache = Cache::open(Cache::default_dir());
    let solution = match cache.get_solution(spec) {
        Ok(Some(s)) => s,
        Ok(None) | Err(SearchError::Corrupt { .. }) => {
            let s = solve(spec, Exec::Parallel)?;
            // A read-only store still yields a usable design.
            let _ = cache.put(spec, &s);
            s
        }
        Err(e) => return Err(e.into()),
    };
    memo()
        .lock()
        .expect("cache memo")
        .insert(key, solution.clone());
    Ok(solution)
}

pub fn fetch_design(spec: &SearchSpec) -> Result<Design> {
    fetch(spec)?
        .into_design()
        .ok_or_else(|| Error::Structural(format!("{} is not a design", spec.name)))
}

pub fn fetch_rgdd(spec: &SearchSpec) -> Result<Rgdd> {
    fetch(spec)?
        .into_rgdd()
        .ok_or_else(|| Error::Structural(format!("{} is not an RGDD", spec.name)))
}
