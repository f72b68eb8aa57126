//! Construction and verification of uniformly resolvable decompositions of
//! `K_v` into perfect matchings, `P3`-factors and `P4`-factors.

pub mod atlas;
pub mod compose;
pub mod error;
pub mod ingredients;
pub mod model;
pub mod mutate;
pub mod par;
pub mod search;
pub mod solver;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
