//! The recursive machines: blow-up of an RGDD skeleton, group filling, the
//! holed design on 36 points and frame filling, plus the selector that splits
//! a target profile into ingredient profiles.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result, SpectrumError};
use crate::ingredients::{frame_classes_missing, Rgdd};
use crate::model::{
    blow_up_skeleton, relabel, Block, BlockKind, Design, DesignKind, GroupLayout, ResolutionClass,
    Scope, Skeleton, Vertex,
};
use crate::solver;
use crate::spectrum::{add, d, dbar, repeat_table, Profile, TripleSet};
use crate::verify::verify_design;

/// A split of a target into one base profile and `h` part profiles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileAssignment {
    pub base: Profile,
    pub parts: Vec<Profile>,
}

impl ProfileAssignment {
    pub fn total(&self) -> Profile {
        self.base + self.parts.iter().copied().sum::<Profile>()
    }
}

type Reach = Arc<Vec<TripleSet>>;
type ReachTables = Mutex<HashMap<(Vec<Profile>, usize), Reach>>;

/// `[0*X, 1*X, ..., h*X]` with `0*X = {0}`, shared across calls.
fn reach(part_set: &TripleSet, h: usize) -> Reach {
    static TABLES: OnceLock<ReachTables> = OnceLock::new();
    let key = (part_set.iter().copied().collect::<Vec<_>>(), h);
    let tables = TABLES.get_or_init(Default::default);
    if let Some(hit) = tables.lock().expect("reach tables").get(&key) {
        return hit.clone();
    }
    let mut table = vec![TripleSet::singleton(Profile::ZERO)];
    table.extend(repeat_table(h, part_set));
    let table = Arc::new(table);
    tables
        .lock()
        .expect("reach tables")
        .insert(key, table.clone());
    table
}

/// Write `target = base + parts[0] + ... + parts[h-1]` with `base ∈ base_set`
/// and every part in `part_set`.
///
/// Candidates are tried in increasing order and each choice is checked
/// against the table of sums still reachable with the remaining parts, so the
/// greedy pass never has to back up and the answer is deterministic.
pub fn select_profiles(
    target: Profile,
    base_set: &TripleSet,
    part_set: &TripleSet,
    h: usize,
) -> Result<ProfileAssignment> {
    let table = reach(part_set, h);
    let infeasible = || {
        Error::Spectrum(SpectrumError::OutsideSet {
            family: format!("base + {h} parts"),
            profile: target,
        })
    };
    let base = base_set
        .iter()
        .copied()
        .find(|&b| {
            target
                .checked_sub(b)
                .is_some_and(|rest| table[h].contains(&rest))
        })
        .ok_or_else(infeasible)?;
    let mut rest = target.checked_sub(base).expect("checked above");
    let mut parts = Vec::with_capacity(h);
    for left in (0..h).rev() {
        let part = part_set
            .iter()
            .copied()
            .find(|&p| {
                rest.checked_sub(p)
                    .is_some_and(|r| table[left].contains(&r))
            })
            .ok_or_else(infeasible)?;
        rest = rest.checked_sub(part).expect("checked above");
        parts.push(part);
    }
    Ok(ProfileAssignment { base, parts })
}

/// Reject an unverified or mislabelled provider result.
fn expect_design(design: &Design, profile: Profile, what: &str) -> Result<()> {
    if design.profile != profile {
        return Err(Error::Composition(format!(
            "{what}: provider returned profile {} instead of {profile}",
            design.profile
        )));
    }
    let report = verify_design(design);
    if !report.is_valid() {
        return Err(Error::Composition(format!("{what}: {}", report.summary(3))));
    }
    Ok(())
}

fn checked(design: Design, what: &str) -> Result<Design> {
    let report = verify_design(&design);
    if report.is_valid() {
        Ok(design)
    } else {
        Err(Error::Composition(format!(
            "{what} failed verification: {}",
            report.summary(5)
        )))
    }
}

/// Blow up an RGDD by `t`, put a URGDD of type `t^k` with profile
/// `class_profiles[i]` on every block of class `i`, and optionally fill every
/// blown group with a URD of profile `group_fill`.
pub fn expand_rgdd<C, G>(
    rgdd: &Rgdd,
    t: usize,
    class_profiles: &[Profile],
    mut class_provider: C,
    group_fill: Option<Profile>,
    group_provider: G,
) -> Result<Design>
where
    C: FnMut(Profile) -> Result<Design>,
    G: FnMut(Profile) -> Result<Design>,
{
    if class_profiles.len() != rgdd.classes.len() {
        return Err(Error::Composition(format!(
            "{} class profiles for {} parallel classes",
            class_profiles.len(),
            rgdd.classes.len()
        )));
    }
    let mut pieces = Vec::with_capacity(class_profiles.len());
    for &p in class_profiles {
        let piece = class_provider(p)?;
        expect_design(&piece, p, "class piece")?;
        pieces.push(piece);
    }
    let blown = checked(
        blow_up_skeleton(&rgdd.skeleton(), t, |ci, _| &pieces[ci])?,
        "blown-up RGDD",
    )?;
    match group_fill {
        Some(fill) => fill_groups(&blown, fill, group_provider),
        None => Ok(blown),
    }
}

/// Blow up a skeleton whose classes need different kinds of piece.
pub fn expand_skeleton(skeleton: &Skeleton, t: usize, pieces: &[Design]) -> Result<Design> {
    if pieces.len() != skeleton.classes.len() {
        return Err(Error::Composition(
            "one piece per skeleton class is required".into(),
        ));
    }
    for piece in pieces {
        expect_design(piece, piece.profile, "skeleton piece")?;
    }
    checked(
        blow_up_skeleton(skeleton, t, |ci, _| &pieces[ci])?,
        "blown-up skeleton",
    )
}

/// Put a copy of one URD on every group of a URGDD. The `k`-th classes of the
/// copies are united into one class, so the result is a URD whose profile is
/// the sum of the two.
pub fn fill_groups<G>(gdd: &Design, fill_profile: Profile, mut fill_provider: G) -> Result<Design>
where
    G: FnMut(Profile) -> Result<Design>,
{
    let (fill_classes, _) =
        filled_classes(gdd, fill_profile, &mut fill_provider, &gdd.layout.groups)?;
    let mut classes = gdd.classes.clone();
    classes.extend(fill_classes);
    checked(
        Design::new(DesignKind::Urd, gdd.v, GroupLayout::none(), classes),
        "group filling",
    )
}

/// Classes of the fill URD copied onto `groups` and united by index.
fn filled_classes<G>(
    gdd: &Design,
    fill_profile: Profile,
    fill_provider: &mut G,
    groups: &[Vec<Vertex>],
) -> Result<(Vec<ResolutionClass>, Design)>
where
    G: FnMut(Profile) -> Result<Design>,
{
    if gdd.kind != DesignKind::Urgdd || gdd.layout.groups.is_empty() {
        return Err(Error::Composition(
            "only a URGDD can have its groups filled".into(),
        ));
    }
    let w = gdd.layout.groups[0].len();
    if gdd.layout.groups.iter().any(|g| g.len() != w) {
        return Err(
            SpectrumError::Domain("groups of unequal size cannot share a fill".into()).into(),
        );
    }
    let fill = fill_provider(fill_profile)?;
    expect_design(&fill, fill_profile, "group fill")?;
    if fill.kind != DesignKind::Urd || fill.v != w {
        return Err(Error::Composition(format!(
            "group fill must be a URD on {w} points, got a {} on {}",
            fill.kind.name(),
            fill.v
        )));
    }
    let mut sorted: Vec<Vec<Vertex>> = groups.to_vec();
    for g in &mut sorted {
        g.sort_unstable();
    }
    let classes = fill
        .classes
        .iter()
        .map(|fc| {
            let blocks = sorted
                .iter()
                .flat_map(|group| {
                    fc.blocks.iter().map(move |b| Block {
                        kind: b.kind,
                        verts: b.verts.iter().map(|&x| group[x as usize]).collect(),
                    })
                })
                .collect();
            ResolutionClass {
                kind: fc.kind,
                scope: Scope::Full,
                blocks,
            }
        })
        .collect();
    Ok((classes, fill))
}

/// Relabel a URGDD with equal groups so that group `g` becomes
/// `g*w .. (g+1)*w`, keeping the order inside each group.
pub fn normalize_groups(design: &Design) -> Result<Design> {
    let groups = &design.layout.groups;
    let w = groups.first().map_or(0, Vec::len);
    if w == 0 || groups.iter().any(|g| g.len() != w) || groups.len() * w != design.v {
        return Err(Error::Composition(
            "groups must be equal and cover the points".into(),
        ));
    }
    let mut perm = vec![0 as Vertex; design.v];
    for (g, group) in groups.iter().enumerate() {
        let mut sorted = group.clone();
        sorted.sort_unstable();
        for (c, &p) in sorted.iter().enumerate() {
            perm[p as usize] = (g * w + c) as Vertex;
        }
    }
    let mut out = relabel(design, &perm)?;
    out.layout = GroupLayout::uniform(w, groups.len());
    Ok(out)
}

/// Turn a URGDD with three groups of size `w` into an incomplete URD whose
/// hole is the last group: the other two groups get copies of `fill`, and the
/// `k`-th classes of the two copies form one partial class.
///
/// The output is labelled so that the filled groups are `0..w` and `w..2w`
/// and the hole is `2w..3w`.
pub fn iurd_from_urgdd(urgdd: &Design, fill: &Design) -> Result<Design> {
    if urgdd.layout.groups.len() != 3 {
        return Err(Error::Composition(
            "an IURD is built from a URGDD with three groups".into(),
        ));
    }
    let urgdd = normalize_groups(urgdd)?;
    let w = urgdd.v / 3;
    let fill_profile = fill.profile;
    let (partial, _) = filled_classes(
        &urgdd,
        fill_profile,
        &mut |_| Ok(fill.clone()),
        &urgdd.layout.groups[..2],
    )?;
    let mut classes = urgdd.classes.clone();
    classes.extend(partial.into_iter().map(|mut c| {
        c.scope = Scope::PartialHole;
        c
    }));
    let hole = (2 * w as Vertex..3 * w as Vertex).collect();
    checked(
        Design::new(
            DesignKind::Iurd,
            urgdd.v,
            GroupLayout::with_hole(hole),
            classes,
        ),
        "IURD",
    )
}

/// IURD(36, 12) with full profile in `D̄(12^3)` and partial profile in `D(12)`.
pub fn build_iurd_36_12(full_profile: Profile, partial_profile: Profile) -> Result<Design> {
    if !dbar(1, 3).contains(&full_profile) {
        return Err(SpectrumError::OutsideSet {
            family: "full classes of IURD(36,12)".into(),
            profile: full_profile,
        }
        .into());
    }
    if !d(12)?.contains(&partial_profile) {
        return Err(SpectrumError::OutsideSet {
            family: "partial classes of IURD(36,12)".into(),
            profile: partial_profile,
        }
        .into());
    }
    let urgdd = solver::build_urgdd(12, 3, full_profile)?;
    let fill = solver::build_urd(12, partial_profile)?;
    iurd_from_urgdd(&urgdd, &fill)
}

/// Unite classes of the same kind position by position.
fn unite_by_kind(
    lists: &[Vec<ResolutionClass>],
    scope: Scope,
    what: &str,
) -> Result<Vec<ResolutionClass>> {
    let mut out = Vec::new();
    for kind in BlockKind::ALL {
        let per_list: Vec<Vec<&ResolutionClass>> = lists
            .iter()
            .map(|l| l.iter().filter(|c| c.kind == kind).collect())
            .collect();
        let count = per_list[0].len();
        if per_list.iter().any(|l| l.len() != count) {
            return Err(Error::Composition(format!(
                "{what}: cannot match {} classes kind by kind",
                kind.name()
            )));
        }
        for k in 0..count {
            out.push(ResolutionClass {
                kind,
                scope,
                blocks: per_list
                    .iter()
                    .flat_map(|l| l[k].blocks.iter().cloned())
                    .collect(),
            });
        }
    }
    Ok(out)
}

fn map_classes(classes: &[ResolutionClass], f: impl Fn(Vertex) -> Vertex) -> Vec<ResolutionClass> {
    classes
        .iter()
        .map(|c| ResolutionClass {
            kind: c.kind,
            scope: Scope::Full,
            blocks: c
                .blocks
                .iter()
                .map(|b| Block {
                    kind: b.kind,
                    verts: b.verts.iter().map(|&x| f(x)).collect(),
                })
                .collect(),
        })
        .collect()
}

/// Fill a 2-frame with groups of size two.
///
/// Every point becomes `t = 12` points and a hole of 12 points is added. The
/// two frame classes missing group `i` are blown up with type `12^2` URGDDs of
/// profiles `per_class[i]`; group `i` together with the hole receives an
/// IURD(36, 12) whose full classes complete the blown classes. The partial
/// classes of all IURDs and a URD(12) on the hole make the remaining classes.
pub fn frame_compose(
    frame: &Design,
    t: usize,
    per_class: &[[Profile; 2]],
    hole_fill: Profile,
) -> Result<Design> {
    if t != 12 {
        return Err(Error::Unsupported(format!("frame filling with weight {t}")));
    }
    let report = verify_design(frame);
    if frame.kind != DesignKind::Frame || !report.is_valid() {
        return Err(Error::Composition(format!(
            "not a valid frame: {}",
            report.summary(3)
        )));
    }
    let groups = &frame.layout.groups;
    if groups.iter().any(|g| g.len() != 2) || per_class.len() != groups.len() {
        return Err(Error::Composition(
            "frame needs groups of size two and two profiles per group".into(),
        ));
    }
    let n = t as Vertex;
    let hole_base = (frame.v * t) as Vertex;
    let v = frame.v * t + t;

    let hole_design = solver::build_urd(12, hole_fill)?;
    expect_design(&hole_design, hole_fill, "hole URD")?;
    let mut hole_lists = vec![map_classes(&hole_design.classes, |x| hole_base + x)];
    let mut classes = Vec::new();

    for (i, group) in groups.iter().enumerate() {
        let missing = frame_classes_missing(frame, i);
        if missing.len() != 2 {
            return Err(Error::Composition(format!(
                "frame group {i} is missed by {} classes, expected 2",
                missing.len()
            )));
        }
        let mut blown = Vec::new();
        for (j, class) in missing.iter().enumerate() {
            let piece = solver::build_urgdd(12, 2, per_class[i][j])?;
            expect_design(&piece, per_class[i][j], "frame class piece")?;
            let skeleton = Skeleton {
                v: frame.v,
                groups: Vec::new(),
                classes: vec![class.blocks.iter().map(|b| b.verts.clone()).collect()],
            };
            blown.extend(blow_up_skeleton(&skeleton, t, |_, _| &piece)?.classes);
        }

        let full = per_class[i][0] + per_class[i][1];
        let iurd = build_iurd_36_12(full, hole_fill)?;
        let (a, b) = (group[0], group[1]);
        let place = |x: Vertex| match x / n {
            0 => a * n + x % n,
            1 => b * n + x % n,
            _ => hole_base + x % n,
        };
        let iurd_full: Vec<ResolutionClass> = iurd
            .classes
            .iter()
            .filter(|c| c.scope == Scope::Full)
            .cloned()
            .collect();
        let iurd_partial: Vec<ResolutionClass> = iurd
            .classes
            .iter()
            .filter(|c| c.scope != Scope::Full)
            .cloned()
            .collect();
        classes.extend(unite_by_kind(
            &[blown, map_classes(&iurd_full, place)],
            Scope::Full,
            &format!("group {i} full classes"),
        )?);
        hole_lists.push(map_classes(&iurd_partial, place));
    }
    classes.extend(unite_by_kind(&hole_lists, Scope::Full, "hole classes")?);
    checked(
        Design::new(DesignKind::Urd, v, GroupLayout::none(), classes),
        "frame filling",
    )
}

/// `base_set + h * part_set`, for checking selector preconditions.
pub fn sum_set(base_set: &TripleSet, part_set: &TripleSet, h: usize) -> TripleSet {
    add(base_set, &reach(part_set, h)[h])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::dbar;

    #[test]
    fn selector_examples() {
        let d12 = d(12).unwrap();
        let q2 = dbar(1, 2);
        let a = select_profiles(Profile::new(47, 0, 0), &d12, &q2, 3).unwrap();
        assert_eq!(a.base, Profile::new(11, 0, 0));
        assert_eq!(a.parts, vec![Profile::new(12, 0, 0); 3]);
        let b = select_profiles(Profile::new(0, 33, 2), &d12, &q2, 3).unwrap();
        assert_eq!(b.base, Profile::new(0, 6, 2));
        assert_eq!(b.parts, vec![Profile::new(0, 9, 0); 3]);
        let c = select_profiles(Profile::new(1, 6, 2), &q2, &q2, 0).unwrap();
        assert_eq!(c.base, Profile::new(1, 6, 2));
        assert!(c.parts.is_empty());
        assert!(select_profiles(Profile::new(1, 0, 0), &d12, &q2, 1).is_err());
    }

    #[test]
    fn selector_covers_d48() {
        let d12 = d(12).unwrap();
        let q2 = dbar(1, 2);
        for &p in &d(48).unwrap() {
            let a = select_profiles(p, &d12, &q2, 3).unwrap();
            assert_eq!(a.total(), p);
            assert!(d12.contains(&a.base));
            assert!(a.parts.iter().all(|x| q2.contains(x)));
        }
    }

    #[test]
    fn normalize_makes_groups_consecutive() {
        let groups: Vec<Vec<Vertex>> = vec![vec![0, 2], vec![1, 3]];
        let d = crate::ingredients::pair_group_factorization(&groups).unwrap();
        let n = normalize_groups(&d).unwrap();
        assert_eq!(n.layout, GroupLayout::uniform(2, 2));
        assert!(verify_design(&n).is_valid());
    }
}
