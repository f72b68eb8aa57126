//! Route selection: which construction builds a given `URD(v; r,s,t)` or
//! URGDD, and the builders themselves. Every returned design is verified.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::atlas;
use crate::compose::{
    expand_rgdd, expand_skeleton, fill_groups, frame_compose, select_profiles, sum_set,
};
use crate::error::{Error, Result, SpectrumError};
use crate::ingredients::{
    bipartite_one_factorization, one_factorization, pair_group_factorization, rgdd, two_frame,
};
use crate::model::{BlockKind, Design, Skeleton, Vertex};
use crate::search::{cache, catalog};
use crate::spectrum::{d, d_i, dbar, iset, necessary_ok, Profile, TripleSet};
use crate::verify::verify_design;

/// Construction used for a URD target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Pure matchings for `v ≢ 0 (mod 12)`.
    OneFactorization,
    /// Certificate from the search cache.
    Searched,
    /// Type `6^2` URGDD with both groups filled by a URD(6).
    SixSquaredFill,
    /// 1-factorization of `K_{v/12}` blown up by 12, groups filled by URD(12).
    Doubling,
    /// Single triple blown up by 12 with a type `12^3` piece.
    Tripling,
    /// Type `12^5` URGDD from generating set `I_iset`, groups filled by URD(12).
    TwelveToTheFifth { row: u32, iset: usize },
    /// Type `20^3` URGDD, groups filled by URD(20).
    TwentyCubed,
    /// 2-frame of type `2^u` filled with weight 12 and a hole of 12.
    Frame { u: usize },
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Route::OneFactorization => write!(f, "1-factorization"),
            Route::Searched => write!(f, "search cache"),
            Route::SixSquaredFill => write!(f, "6^2 URGDD + URD(6) fill"),
            Route::Doubling => write!(f, "2-RGDD 1^(v/12) x12 + URD(12) fill"),
            Route::Tripling => write!(f, "3-RGDD 1^3 x12 + URD(12) fill"),
            Route::TwelveToTheFifth { row, iset } => write!(
                f,
                "12^5 URGDD from I{iset} + URD(12) fill, block D_{row}(60)"
            ),
            Route::TwentyCubed => write!(f, "20^3 URGDD + URD(20) fill"),
            Route::Frame { u } => write!(f, "2-frame 2^{u} x12 + hole 12"),
        }
    }
}

thread_local! {
    static TRACE: RefCell<Option<Vec<(usize, usize)>>> = const { RefCell::new(None) };
}

/// Run `f` and report the URGDD types `g^u` it asked for, in call order.
pub fn traced<R>(f: impl FnOnce() -> R) -> (R, Vec<(usize, usize)>) {
    let previous = TRACE.with(|t| t.borrow_mut().replace(Vec::new()));
    let out = f();
    let calls = TRACE
        .with(|t| std::mem::replace(&mut *t.borrow_mut(), previous))
        .unwrap_or_default();
    (out, calls)
}

fn record(g: usize, u: usize) {
    TRACE.with(|t| {
        if let Some(calls) = t.borrow_mut().as_mut() {
            calls.push((g, u));
        }
    });
}

/// Built designs with the URGDD types their construction asked for, so a
/// memo hit reports the same trace as a fresh build.
type Memo = Mutex<HashMap<(usize, usize, Profile), (Design, Vec<(usize, usize)>)>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

fn memoized(
    key: (usize, usize, Profile),
    build: impl FnOnce() -> Result<Design>,
) -> Result<Design> {
    let hit = memo().lock().expect("solver memo").get(&key).cloned();
    let (design, calls) = match hit {
        Some(entry) => entry,
        None => {
            let (design, calls) = traced(build);
            let entry = (design?, calls);
            memo()
                .lock()
                .expect("solver memo")
                .insert(key, entry.clone());
            entry
        }
    };
    for (g, u) in calls {
        record(g, u);
    }
    Ok(design)
}

fn outside(family: impl Into<String>, profile: Profile) -> Error {
    SpectrumError::OutsideSet {
        family: family.into(),
        profile,
    }
    .into()
}

fn verified(design: Design, target: Profile, what: &str) -> Result<Design> {
    if design.profile != target {
        return Err(Error::Verification(format!(
            "{what}: built profile {} instead of {target}",
            design.profile
        )));
    }
    let report = verify_design(&design);
    if !report.is_valid() {
        return Err(Error::Verification(format!(
            "{what}: {}",
            report.summary(5)
        )));
    }
    Ok(design)
}

fn searched(spec: &crate::search::SearchSpec, target: Profile) -> Result<Design> {
    let design = cache::fetch_design(spec)?;
    verified(design, target, &spec.name)
}

fn atlas_design(id: &str) -> Result<Design> {
    Ok(atlas::get(id)?.design)
}

fn singleton(p: Profile) -> TripleSet {
    TripleSet::singleton(Profile::ZERO).shifted(p)
}

/// Profiles of `12^3` URGDDs that only the `3^3` blow-up reaches.
pub fn twelve_cubed_by_triples() -> TripleSet {
    let specials = [Profile::new(1, 6, 10), Profile::new(0, 9, 8)];
    sum_set(&singleton(Profile::ZERO), &iset::w(), 3)
        .difference(&sum_set(&singleton(Profile::ZERO), &iset::q(), 4))
        .iter()
        .copied()
        .filter(|p| !specials.contains(p))
        .collect()
}

/// URGDD of type `g^u` with the given profile. Supported types are `6^2`,
/// `4^3`, `12^2`, `12^3`, `12^5` and `20^3`.
pub fn build_urgdd(g: usize, u: usize, target: Profile) -> Result<Design> {
    record(g, u);
    memoized((g, u, target), || {
        let design = match (g, u) {
            (6, 2) => urgdd_6x2(target)?,
            (4, 3) => urgdd_4x3(target)?,
            (12, 2) => urgdd_12x2(target)?,
            (12, 3) => urgdd_12x3(target)?,
            (12, 5) => urgdd_12x5(target)?,
            (20, 3) => urgdd_20x3(target)?,
            _ => return Err(Error::Unsupported(format!("URGDD of type {g}^{u}"))),
        };
        verified(design, target, &format!("URGDD {g}^{u} {target}"))
    })
}

fn urgdd_6x2(target: Profile) -> Result<Design> {
    match (target.r, target.s, target.t) {
        (6, 0, 0) => Ok(bipartite_one_factorization(6)),
        (2, 3, 0) => atlas_design("urgdd-6x2-(2,3,0)"),
        (3, 0, 2) | (0, 0, 4) => searched(&catalog::urgdd_6x2(target), target),
        _ => Err(outside("URGDD 6^2", target)),
    }
}

fn urgdd_4x3(target: Profile) -> Result<Design> {
    match (target.r, target.s, target.t) {
        (0, 6, 0) => searched(&catalog::urgdd_4x3_060(), target),
        (4, 3, 0) => atlas_design("urgdd-4x3-(4,3,0)"),
        (1, 3, 2) => atlas_design("urgdd-4x3-(1,3,2)"),
        _ => Err(outside("URGDD 4^3", target)),
    }
}

/// Blow up a 2- or 3-RGDD by `t` with URGDD pieces of type `t^k`.
fn blown_rgdd(
    k: usize,
    g: usize,
    u: usize,
    t: usize,
    target: Profile,
    parts: &TripleSet,
) -> Result<Design> {
    let r = rgdd(k, g, u)?;
    let a = select_profiles(target, &singleton(Profile::ZERO), parts, r.classes.len())?;
    expand_rgdd(
        &r,
        t,
        &a.parts,
        |p| build_urgdd(t, k, p),
        None,
        |_| unreachable!(),
    )
}

fn urgdd_12x2(target: Profile) -> Result<Design> {
    if !dbar(1, 2).contains(&target) {
        return Err(outside("URGDD 12^2", target));
    }
    match (target.r, target.s, target.t) {
        (0, 9, 0) => searched(&catalog::urgdd_12x2_090(), target),
        (1, 6, 2) => atlas_design("urgdd-12x2-(1,6,2)"),
        _ => blown_rgdd(2, 2, 2, 6, target, &iset::q()),
    }
}

fn urgdd_12x3(target: Profile) -> Result<Design> {
    if !dbar(1, 3).contains(&target) {
        return Err(outside("URGDD 12^3", target));
    }
    match (target.r, target.s, target.t) {
        (1, 6, 10) => atlas_design("urgdd-12x3-(1,6,10)"),
        (0, 9, 8) => searched(&catalog::urgdd_12x3_098(), target),
        _ if twelve_cubed_by_triples().contains(&target) => {
            blown_rgdd(3, 3, 3, 4, target, &iset::w())
        }
        _ => blown_rgdd(2, 2, 3, 6, target, &iset::q()),
    }
}

fn urgdd_12x5(target: Profile) -> Result<Design> {
    let in_sets = |a: usize, b: usize| iset::i(a).contains(&target) || iset::i(b).contains(&target);
    if in_sets(7, 8) {
        return blown_rgdd(3, 3, 5, 4, target, &iset::w());
    }
    let cycles: u32 = if in_sets(1, 2) {
        0
    } else if in_sets(3, 4) {
        1
    } else if in_sets(5, 6) {
        2
    } else {
        return Err(outside("URGDD 12^5 (I1..I8)", target));
    };
    let matchings = 8 - 2 * cycles as usize;
    let rest = target
        .checked_sub(Profile::new(0, 9 * cycles, 0))
        .ok_or_else(|| outside("URGDD 12^5", target))?;
    let parts = select_profiles(rest, &singleton(Profile::ZERO), &iset::q(), matchings)?.parts;
    let groups: Vec<Vec<Vertex>> = (0..5).map(|i| vec![i, i + 5]).collect();
    let skeleton_design = match cycles {
        0 => pair_group_factorization(&groups)?,
        1 => atlas_design("p2c5-2x5-(6,1)")?,
        _ => atlas_design("p2c5-2x5-(4,2)")?,
    };
    let c5 = atlas_design("c5x6-p3-factorization")?;
    let mut next = parts.into_iter();
    let pieces = skeleton_design
        .classes
        .iter()
        .map(|class| match class.kind {
            BlockKind::C5 => Ok(c5.clone()),
            _ => build_urgdd(6, 2, next.next().expect("one part per matching class")),
        })
        .collect::<Result<Vec<_>>>()?;
    expand_skeleton(&Skeleton::from(&skeleton_design), 6, &pieces)
}

fn urgdd_20x3(target: Profile) -> Result<Design> {
    blown_rgdd(3, 5, 3, 4, target, &iset::w()).map_err(|e| match e {
        Error::Spectrum(_) => outside("URGDD 20^3 (5 * W)", target),
        other => other,
    })
}

/// `URD(20; 19-3x, 0, 2x)` for `x = 0..6`.
pub fn build_urd20(target: Profile) -> Result<Design> {
    let x = target.t / 2;
    if target.s != 0 || !target.t.is_multiple_of(2) || x > 6 || target.r + 3 * x != 19 {
        return Err(outside("URD(20; 19-3x, 0, 2x)", target));
    }
    let design = if x == 0 {
        one_factorization(20)?
    } else {
        cache::fetch_design(&catalog::urd20(x))?
    };
    verified(design, target, "URD(20)")
}

fn build_urd6(target: Profile) -> Result<Design> {
    match (target.r, target.s, target.t) {
        (5, 0, 0) => one_factorization(6),
        (1, 3, 0) => searched(&catalog::urd6_130(), target),
        _ => Err(outside("URD(6) fills", target)),
    }
}

/// The construction [`build_urd`] uses for `(v, target)`.
pub fn route(v: u32, target: Profile) -> Result<Route> {
    let verdict = necessary_ok(v, target);
    if !verdict.ok {
        return Err(SpectrumError::NotAdmissible {
            v,
            profile: target,
            reason: verdict.reason,
        }
        .into());
    }
    if !v.is_multiple_of(12) {
        return if target.s == 0 && target.t == 0 {
            Ok(Route::OneFactorization)
        } else {
            Err(Error::Unsupported(format!(
                "URD({v}; {target}) needs one of the two-kind constructions; only v ≡ 0 (mod 12) is built"
            )))
        };
    }
    Ok(match v {
        12 if [Profile::new(2, 0, 6), Profile::new(0, 6, 2)].contains(&target) => Route::Searched,
        12 => Route::SixSquaredFill,
        36 => Route::Tripling,
        60 if target == Profile::new(0, 33, 10) => Route::Searched,
        60 => {
            let row = target.s / 3;
            let iset = match row {
                0..=2 => 1,
                3 => 2,
                4 | 5 => 3,
                6..=8 => 5,
                9 => 6,
                10 => 9,
                11 => 8,
                _ => 7,
            };
            if iset == 9 {
                Route::TwentyCubed
            } else {
                Route::TwelveToTheFifth { row, iset }
            }
        }
        _ if v.is_multiple_of(24) => Route::Doubling,
        _ => Route::Frame {
            u: (v as usize - 12) / 24,
        },
    })
}

/// The `D_i(12)` block paired with row `row` of the `v = 60` table.
fn sixty_fill_block(row: u32) -> u32 {
    match row {
        0..=2 => row,
        3 => 2,
        4 => 1,
        5 => 2,
        6..=8 => row - 6,
        9 => 2,
        11 => 0,
        _ => row - 12,
    }
}

fn build_sixty(row: u32, set: usize, target: Profile) -> Result<Design> {
    let generators = iset::i(set);
    let fills = d_i(12, sixty_fill_block(row))?;
    let (gdd_profile, fill) = fills
        .iter()
        .find_map(|&f| {
            target
                .checked_sub(f)
                .filter(|g| generators.contains(g))
                .map(|g| (g, f))
        })
        .ok_or_else(|| outside(format!("I{set} + D_{}(12)", sixty_fill_block(row)), target))?;
    let gdd = build_urgdd(12, 5, gdd_profile)?;
    fill_groups(&gdd, fill, |p| build_urd(12, p))
}

fn build_twenty_cubed(target: Profile) -> Result<Design> {
    let base = Profile::new(0, 30, 0);
    let fill = target
        .checked_sub(base)
        .ok_or_else(|| outside("I9 + D(20)", target))?;
    let gdd = build_urgdd(20, 3, base)?;
    fill_groups(&gdd, fill, build_urd20)
}

/// A verified `URD(v; r, s, t)`.
pub fn build_urd(v: u32, target: Profile) -> Result<Design> {
    let route = route(v, target)?;
    let build = || -> Result<Design> {
        let d12 = || d(12);
        match route {
            Route::OneFactorization => one_factorization(v as usize),
            Route::Searched if v == 12 => cache::fetch_design(&catalog::urd12(target)),
            Route::Searched => cache::fetch_design(&catalog::urd60_0_33_10()),
            Route::SixSquaredFill => {
                let (fill, part) = [Profile::new(5, 0, 0), Profile::new(1, 3, 0)]
                    .into_iter()
                    .find_map(|f| {
                        target
                            .checked_sub(f)
                            .filter(|q| iset::q().contains(q))
                            .map(|q| (f, q))
                    })
                    .ok_or_else(|| outside("{(5,0,0),(1,3,0)} + Q", target))?;
                fill_groups(&build_urgdd(6, 2, part)?, fill, build_urd6)
            }
            Route::Doubling => {
                let m = v as usize / 12;
                let a = select_profiles(target, &d12()?, &dbar(1, 2), m - 1)?;
                expand_rgdd(
                    &rgdd(2, 1, m)?,
                    12,
                    &a.parts,
                    |p| build_urgdd(12, 2, p),
                    Some(a.base),
                    |p| build_urd(12, p),
                )
            }
            Route::Tripling => {
                let a = select_profiles(target, &d12()?, &dbar(1, 3), 1)?;
                expand_rgdd(
                    &rgdd(3, 1, 3)?,
                    12,
                    &a.parts,
                    |p| build_urgdd(12, 3, p),
                    Some(a.base),
                    |p| build_urd(12, p),
                )
            }
            Route::TwelveToTheFifth { row, iset } => build_sixty(row, iset, target),
            Route::TwentyCubed => build_twenty_cubed(target),
            Route::Frame { u } => {
                let a = select_profiles(target, &d12()?, &dbar(1, 2), 2 * u)?;
                let per_class: Vec<[Profile; 2]> =
                    a.parts.chunks(2).map(|c| [c[0], c[1]]).collect();
                frame_compose(&two_frame(u)?, 12, &per_class, a.base)
            }
        }
    };
    let design = if v == 12 {
        memoized((12, 0, target), build)?
    } else {
        build()?
    };
    verified(design, target, &format!("URD({v}; {target})"))
}
