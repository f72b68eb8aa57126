use thiserror::Error;

use crate::spectrum::Profile;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("({r},{s},{t}) is not admissible for v = {v}: {reason}", r = profile.r, s = profile.s, t = profile.t)]
    NotAdmissible {
        v: u32,
        profile: Profile,
        reason: String,
    },
    #[error("profile {profile} is outside the supported set for {family}")]
    OutsideSet { family: String, profile: Profile },
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("search for {name} exhausted its budget ({detail})")]
    Exhausted { name: String, detail: String },
    #[error("search spec {name} is inconsistent: {detail}")]
    Inconsistent { name: String, detail: String },
    #[error("cache entry {key} rejected: {detail}")]
    Corrupt { key: String, detail: String },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error("composition error: {0}")]
    Composition(String),
    #[error("unknown atlas entry {0:?}")]
    Lookup(String),
    #[error("transcription error in {id}: {detail}")]
    Transcription { id: String, detail: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed certificate: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
