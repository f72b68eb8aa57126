//! Admissibility arithmetic for class profiles.
//!
//! A profile `(r, s, t)` counts the perfect-matching, `P3` and `P4` classes of
//! a uniformly resolvable decomposition. This module computes the admissible
//! sets `D(v)` for `K_v` and `D̄((12k)^m)` for the complete multipartite graph
//! with `m` groups of size `12k`, the set algebra used to combine them, and a
//! brute-force Diophantine enumeration kept separate for cross-checking.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::SpectrumError;

/// Class counts `(r, s, t)` by block kind: matchings, `P3` classes, `P4` classes.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct Profile {
    pub r: u32,
    pub s: u32,
    pub t: u32,
}

impl Profile {
    pub const ZERO: Profile = Profile { r: 0, s: 0, t: 0 };

    pub const fn new(r: u32, s: u32, t: u32) -> Self {
        Profile { r, s, t }
    }

    /// Componentwise difference, or `None` if any component would go negative.
    pub fn checked_sub(self, other: Profile) -> Option<Profile> {
        Some(Profile {
            r: self.r.checked_sub(other.r)?,
            s: self.s.checked_sub(other.s)?,
            t: self.t.checked_sub(other.t)?,
        })
    }

    /// The weighted sum `6r + 8s + 9t`, i.e. twelve times the edge count of
    /// the profile divided by the number of points.
    pub fn weight(self) -> u64 {
        6 * self.r as u64 + 8 * self.s as u64 + 9 * self.t as u64
    }

    pub fn class_count(self) -> u32 {
        self.r + self.s + self.t
    }
}

impl Add for Profile {
    type Output = Profile;

    fn add(self, rhs: Profile) -> Profile {
        Profile {
            r: self.r + rhs.r,
            s: self.s + rhs.s,
            t: self.t + rhs.t,
        }
    }
}

impl std::iter::Sum for Profile {
    fn sum<I: Iterator<Item = Profile>>(iter: I) -> Profile {
        iter.fold(Profile::ZERO, Add::add)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.r, self.s, self.t)
    }
}

impl std::str::FromStr for Profile {
    type Err = String;

    /// Parses `r,s,t` with optional surrounding parentheses.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("expected r,s,t but got {text:?}"));
        }
        let parse = |p: &str| p.parse::<u32>().map_err(|e| format!("{p:?}: {e}"));
        Ok(Profile::new(
            parse(parts[0])?,
            parse(parts[1])?,
            parse(parts[2])?,
        ))
    }
}

/// A finite set of profiles with Minkowski addition.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TripleSet(BTreeSet<Profile>);

impl TripleSet {
    pub fn new() -> Self {
        TripleSet(BTreeSet::new())
    }

    pub fn singleton(p: Profile) -> Self {
        TripleSet(BTreeSet::from([p]))
    }

    pub fn insert(&mut self, p: Profile) -> bool {
        self.0.insert(p)
    }

    pub fn contains(&self, p: &Profile) -> bool {
        self.0.contains(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Profiles in lexicographic `(r, s, t)` order.
    pub fn iter(&self) -> impl Iterator<Item = &Profile> + '_ {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &TripleSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &TripleSet) -> TripleSet {
        TripleSet(self.0.union(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &TripleSet) -> TripleSet {
        TripleSet(self.0.difference(&other.0).copied().collect())
    }

    /// Translate every element by `p`.
    pub fn shifted(&self, p: Profile) -> TripleSet {
        self.0.iter().map(|&q| q + p).collect()
    }
}

impl FromIterator<Profile> for TripleSet {
    fn from_iter<I: IntoIterator<Item = Profile>>(iter: I) -> Self {
        TripleSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a TripleSet {
    type Item = &'a Profile;
    type IntoIter = std::collections::btree_set::Iter<'a, Profile>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// `X + Y = { x + y : x ∈ X, y ∈ Y }`.
pub fn add(x: &TripleSet, y: &TripleSet) -> TripleSet {
    let mut out = TripleSet::new();
    for &a in x {
        for &b in y {
            out.insert(a + b);
        }
    }
    out
}

/// `h * X`: all sums of `h` elements of `X`, repetition allowed.
pub fn repeat(h: usize, x: &TripleSet) -> TripleSet {
    repeat_table(h, x).pop().unwrap_or_default()
}

/// `[1*X, 2*X, ..., h*X]`, built incrementally.
pub fn repeat_table(h: usize, x: &TripleSet) -> Vec<TripleSet> {
    let mut table: Vec<TripleSet> = Vec::with_capacity(h);
    if h == 0 {
        return table;
    }
    table.push(x.clone());
    for _ in 1..h {
        let next = add(table.last().expect("non-empty"), x);
        table.push(next);
    }
    table
}

fn require_admissible(v: u32) -> Result<(), SpectrumError> {
    if v == 0 || !v.is_multiple_of(12) {
        return Err(SpectrumError::Domain(format!(
            "v = {v} is not a positive multiple of 12"
        )));
    }
    Ok(())
}

/// Upper bound on `y` (with `t = 2y`) inside `D_u(v)`; negative when empty.
pub fn r_max(v: u32, u: u32) -> i64 {
    let (v, u) = (v as i64, u as i64);
    match u % 3 {
        0 => (v - 3) / 3 - 4 * u / 3,
        1 => (v - 6) / 3 - 4 * (u - 1) / 3,
        _ => (v - 9) / 3 - 4 * (u - 2) / 3,
    }
}

/// Upper bound on `y` inside `D̄_u` for groups of size 12 with `k` = `k'(m-1)`.
pub fn r_bar(k: u32, u: u32) -> i64 {
    let (k, u) = (k as i64, u as i64);
    match u % 3 {
        0 => 4 * k - 4 * u / 3,
        1 => 4 * k - 2 - 4 * (u - 1) / 3,
        _ => 4 * k - 3 - 4 * (u - 2) / 3,
    }
}

/// `D_i(v) = {(v-1-4i-3y, 3i, 2y) : 0 ≤ y ≤ r_max(v, i)}`.
pub fn d_i(v: u32, i: u32) -> Result<TripleSet, SpectrumError> {
    require_admissible(v)?;
    let bound = r_max(v, i);
    let mut out = TripleSet::new();
    if bound < 0 || 4 * i > v - 1 {
        return Ok(out);
    }
    for y in 0..=bound as u32 {
        let r = v as i64 - 1 - 4 * i as i64 - 3 * y as i64;
        debug_assert!(r >= 0, "Table 1 bound admits negative r");
        out.insert(Profile::new(r as u32, 3 * i, 2 * y));
    }
    Ok(out)
}

/// The admissible spectrum `D(v)` for `v ≡ 0 (mod 12)`.
pub fn d(v: u32) -> Result<TripleSet, SpectrumError> {
    require_admissible(v)?;
    let mut out = TripleSet::new();
    for i in 0..=(v - 4) / 4 {
        out = out.union(&d_i(v, i)?);
    }
    Ok(out)
}

/// Index `i` of the block `D_i(v)` containing `p`, i.e. `s / 3`.
pub fn block_index(p: Profile) -> u32 {
    p.s / 3
}

/// `D̄_j((12k)^m)`.
pub fn dbar_j(k: u32, m: u32, j: u32) -> TripleSet {
    assert!(k >= 1 && m >= 2, "dbar needs k ≥ 1 and m ≥ 2");
    let km = k * (m - 1);
    let bound = r_bar(km, j);
    let mut out = TripleSet::new();
    if bound < 0 || j > 3 * km {
        return out;
    }
    for y in 0..=bound as u32 {
        let r = 12 * km as i64 - 4 * j as i64 - 3 * y as i64;
        debug_assert!(r >= 0, "Table 2 bound admits negative r");
        out.insert(Profile::new(r as u32, 3 * j, 2 * y));
    }
    out
}

/// `D̄((12k)^m)`: profiles admissible for a URGDD with `m` groups of size `12k`.
pub fn dbar(k: u32, m: u32) -> TripleSet {
    assert!(k >= 1 && m >= 2, "dbar needs k ≥ 1 and m ≥ 2");
    (0..=3 * k * (m - 1))
        .map(|j| dbar_j(k, m, j))
        .fold(TripleSet::new(), |acc, s| acc.union(&s))
}

/// Brute-force nonnegative solutions of `6r + 8s + 9t = 6(v-1)` with
/// `3 | s` and `2 | t`. Independent of the table formulas.
pub fn oracle_enumerate(v: u32) -> TripleSet {
    enumerate_weight(6 * (v as u64 - 1))
}

/// Brute-force nonnegative solutions of `6r + 8s + 9t = total` with `3 | s`, `2 | t`.
pub fn enumerate_weight(total: u64) -> TripleSet {
    let mut out = TripleSet::new();
    let mut t = 0;
    while 9 * t <= total {
        let mut s = 0;
        while 9 * t + 8 * s <= total {
            let rest = total - 9 * t - 8 * s;
            if rest.is_multiple_of(6) && s % 3 == 0 && t % 2 == 0 {
                out.insert(Profile::new((rest / 6) as u32, s as u32, t as u32));
            }
            s += 1;
        }
        t += 1;
    }
    out
}

/// Outcome of the necessity check: verdict plus the condition that decided it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    pub ok: bool,
    pub reason: String,
}

impl Admissibility {
    fn yes(reason: impl Into<String>) -> Self {
        Admissibility {
            ok: true,
            reason: reason.into(),
        }
    }

    fn no(reason: impl Into<String>) -> Self {
        Admissibility {
            ok: false,
            reason: reason.into(),
        }
    }
}

/// Necessary conditions for a `(P2, P3, P4)`-URD`(v; r, s, t)`.
///
/// For `v ≡ 0 (mod 12)` this is membership in `D(v)`. For other `v` it applies
/// the known spectra of the one- and two-kind problems.
pub fn necessary_ok(v: u32, p: Profile) -> Admissibility {
    if v < 2 {
        return Admissibility::no("v must be at least 2");
    }
    let Profile { r, s, t } = p;
    let twelve_e = 6 * v as u64 * (v as u64 - 1);
    if p.weight() * v as u64 != twelve_e {
        // Report the simplest violated consequence first.
        if t % 2 != 0 && v.is_multiple_of(12) {
            return Admissibility::no("t must be even");
        }
        if s % 3 != 0 && v.is_multiple_of(12) {
            return Admissibility::no("s must be divisible by 3");
        }
        return Admissibility::no(format!(
            "edge count identity 6r+8s+9t = 6(v-1) fails: {} != {}",
            p.weight(),
            6 * (v as u64 - 1)
        ));
    }
    if v.is_multiple_of(12) {
        if t % 2 != 0 {
            return Admissibility::no("t must be even");
        }
        if s % 3 != 0 {
            return Admissibility::no("s must be divisible by 3");
        }
        let members = d(v).expect("v is admissible");
        return if members.contains(&p) {
            if s == 0 && t == 0 {
                Admissibility::yes("pure 1-factorization")
            } else {
                Admissibility::yes(format!("in D({v})"))
            }
        } else {
            Admissibility::no(format!("not in D({v})"))
        };
    }
    match (r > 0, s > 0, t > 0) {
        (_, false, false) => {
            if v.is_multiple_of(2) {
                Admissibility::yes("pure 1-factorization")
            } else {
                Admissibility::no("a 1-factorization needs v even")
            }
        }
        (false, true, false) => {
            if v % 12 == 9 {
                Admissibility::yes("resolvable P3-decomposition, v ≡ 9 (mod 12)")
            } else {
                Admissibility::no("resolvable P3-decompositions need v ≡ 9 (mod 12)")
            }
        }
        (false, false, true) => {
            if v % 12 == 4 {
                Admissibility::yes("resolvable P4-decomposition, v ≡ 4 (mod 12)")
            } else {
                Admissibility::no("resolvable P4-decompositions need v ≡ 4 (mod 12)")
            }
        }
        (true, true, false) => {
            // v ≡ 6 (mod 12): (v-1-4x, 3x) with x ≤ (v-2)/4.
            if v % 12 == 6 && s % 3 == 0 && s / 3 <= (v - 2) / 4 {
                Admissibility::yes("(K2, P3)-URD, v ≡ 6 (mod 12)")
            } else {
                Admissibility::no("(K2, P3)-URDs need v ≡ 0 (mod 6)")
            }
        }
        (true, false, true) => {
            let bound = match v % 12 {
                4 => Some((v - 1) / 3),
                8 => Some((v - 2) / 3),
                _ => None,
            };
            match bound {
                Some(b) if t % 2 == 0 && t / 2 <= b => {
                    Admissibility::yes("(K2, P4)-URD, v ≡ 0 (mod 4)")
                }
                _ => Admissibility::no("(K2, P4)-URDs need v ≡ 0 (mod 4)"),
            }
        }
        (_, true, true) => Admissibility::no("classes of both P3 and P4 force v ≡ 0 (mod 12)"),
    }
}

/// The generating sets of the type-12^5 URGDD profiles used for `v = 60`.
pub mod iset {
    use super::{Profile, TripleSet};

    fn family(r0: u32, s: u32, max_x: u32) -> TripleSet {
        (0..=max_x)
            .map(|x| Profile::new(r0 - 3 * x, s, 2 * x))
            .collect()
    }

    /// `I_1 … I_9`; `I_9 = {(0,30,0)}` is the type-20^3 URGDD.
    pub fn i(index: usize) -> TripleSet {
        match index {
            1 => family(48, 0, 16),
            2 => family(44, 3, 14),
            3 => family(36, 9, 12),
            4 => family(32, 12, 10),
            5 => family(24, 18, 8),
            6 => family(20, 21, 6),
            7 => TripleSet::singleton(Profile::new(0, 36, 0)),
            8 => [Profile::new(4, 33, 0), Profile::new(1, 33, 2)]
                .into_iter()
                .collect(),
            9 => TripleSet::singleton(Profile::new(0, 30, 0)),
            _ => panic!("no I-set with index {index}"),
        }
    }

    /// `I_1 ∪ … ∪ I_8`.
    pub fn union_1_to_8() -> TripleSet {
        (1..=8).fold(TripleSet::new(), |acc, j| acc.union(&i(j)))
    }

    /// `{(6,0,0), (3,0,2), (0,0,4), (2,3,0)}`: profiles of the type-6^2 URGDDs.
    pub fn q() -> TripleSet {
        [
            Profile::new(6, 0, 0),
            Profile::new(3, 0, 2),
            Profile::new(0, 0, 4),
            Profile::new(2, 3, 0),
        ]
        .into_iter()
        .collect()
    }

    /// `{(0,6,0), (4,3,0), (1,3,2)}`: profiles of the type-4^3 URGDDs.
    pub fn w() -> TripleSet {
        [
            Profile::new(0, 6, 0),
            Profile::new(4, 3, 0),
            Profile::new(1, 3, 2),
        ]
        .into_iter()
        .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[(u32, u32, u32)]) -> TripleSet {
        items
            .iter()
            .map(|&(r, s, t)| Profile::new(r, s, t))
            .collect()
    }

    #[test]
    fn r_max_table_values() {
        assert_eq!(r_max(12, 0), 3);
        assert_eq!(r_max(60, 11), 5);
        assert_eq!(r_max(12, 2), 1);
    }

    #[test]
    fn d12_matches_enumeration() {
        let expected = set(&[
            (11, 0, 0),
            (8, 0, 2),
            (5, 0, 4),
            (2, 0, 6),
            (7, 3, 0),
            (4, 3, 2),
            (1, 3, 4),
            (3, 6, 0),
            (0, 6, 2),
        ]);
        assert_eq!(d(12).unwrap(), expected);
        assert_eq!(oracle_enumerate(12), expected);
        assert_eq!(d_i(12, 2).unwrap(), set(&[(3, 6, 0), (0, 6, 2)]));
    }

    #[test]
    fn d0_holds_the_one_factorization() {
        for v in (12..=240).step_by(12) {
            assert!(d_i(v, 0).unwrap().contains(&Profile::new(v - 1, 0, 0)));
        }
    }

    #[test]
    fn non_admissible_v_is_a_domain_error() {
        assert!(d(14).is_err());
        assert!(d(0).is_err());
    }

    #[test]
    fn dbar_12_squared() {
        let expected = set(&[
            (12, 0, 0),
            (9, 0, 2),
            (6, 0, 4),
            (3, 0, 6),
            (0, 0, 8),
            (8, 3, 0),
            (5, 3, 2),
            (2, 3, 4),
            (4, 6, 0),
            (1, 6, 2),
            (0, 9, 0),
        ]);
        assert_eq!(dbar(1, 2), expected);
        assert_eq!(enumerate_weight(72), expected);
        assert!(dbar(1, 3).contains(&Profile::new(1, 6, 10)));
    }

    #[test]
    fn set_addition() {
        let a = TripleSet::singleton(Profile::new(1, 0, 0));
        let b = TripleSet::singleton(Profile::new(0, 3, 2));
        assert_eq!(add(&a, &b), TripleSet::singleton(Profile::new(1, 3, 2)));
        assert_eq!(repeat(2, &dbar(1, 2)), dbar(1, 3));
    }

    #[test]
    fn necessity_examples() {
        assert!(necessary_ok(12, Profile::new(2, 0, 6)).ok);
        let bad = necessary_ok(12, Profile::new(9, 0, 1));
        assert!(!bad.ok);
        assert_eq!(bad.reason, "t must be even");
        let pure = necessary_ok(14, Profile::new(13, 0, 0));
        assert!(pure.ok);
        assert_eq!(pure.reason, "pure 1-factorization");
        assert!(!necessary_ok(14, Profile::new(12, 0, 0)).ok);
        assert!(necessary_ok(16, Profile::new(0, 0, 10)).ok);
        assert!(necessary_ok(9, Profile::new(0, 6, 0)).ok);
        assert!(!necessary_ok(18, Profile::new(0, 3, 10)).ok);
    }

    #[test]
    fn profile_parsing() {
        assert_eq!(
            "(1,6,10)".parse::<Profile>().unwrap(),
            Profile::new(1, 6, 10)
        );
        assert_eq!("0, 9,8".parse::<Profile>().unwrap(), Profile::new(0, 9, 8));
        assert!("1,2".parse::<Profile>().is_err());
    }
}
