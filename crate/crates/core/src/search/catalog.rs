//! Named search specs for every design the constructions import.

use std::sync::atomic::{AtomicU64, Ordering};

use super::{Budget, ClassReq, ClassScope, Context, Engine, SearchSpec, Shape};
use crate::model::{GroupLayout, Vertex};
use crate::spectrum::Profile;

pub const DEFAULT_SEED: u64 = 0x5eed_2012;

static SEED: AtomicU64 = AtomicU64::new(DEFAULT_SEED);

/// Seed given to every spec built afterwards. Seeds are not part of the cache
/// key, so this only matters when a search actually runs.
pub fn set_seed(seed: u64) {
    SEED.store(seed, Ordering::Relaxed);
}

pub fn seed() -> u64 {
    SEED.load(Ordering::Relaxed)
}

fn reqs(shape: Shape, count: u32, step: usize) -> impl Iterator<Item = ClassReq> {
    (0..count).map(move |_| ClassReq {
        shape,
        scope: ClassScope::Full,
        step,
    })
}

fn profile_classes(p: Profile, step: usize) -> Vec<ClassReq> {
    reqs(Shape::P2, p.r, step)
        .chain(reqs(Shape::P3, p.s, step))
        .chain(reqs(Shape::P4, p.t, step))
        .collect()
}

fn spec(
    name: String,
    v: usize,
    context: Context,
    classes: Vec<ClassReq>,
    engine: Engine,
    budget: Budget,
) -> SearchSpec {
    SearchSpec {
        name,
        v,
        context,
        classes,
        symmetry: None,
        engine,
        seed: seed(),
        budget,
    }
}

fn shift(n: usize, cycle: usize) -> Vec<Vertex> {
    (0..n)
        .map(|p| ((p / cycle) * cycle + (p % cycle + 1) % cycle) as Vertex)
        .collect()
}

const EXACT: Budget = Budget {
    restarts: 64,
    steps: 2_000_000,
};

const ANNEAL: Budget = Budget {
    restarts: 200,
    steps: 4_000_000,
};

/// `URD(6; 1,3,0)`.
pub fn urd6_130() -> SearchSpec {
    spec(
        "urd-6-(1,3,0)".into(),
        6,
        Context::Complete,
        profile_classes(Profile::new(1, 3, 0), 0),
        Engine::Exact,
        EXACT,
    )
}

/// Type `6^2` URGDDs with profile `(3,0,2)` or `(0,0,4)`.
pub fn urgdd_6x2(p: Profile) -> SearchSpec {
    spec(
        format!("urgdd-6x2-{p}"),
        12,
        Context::Multipartite {
            groups: GroupLayout::uniform(6, 2).groups,
        },
        profile_classes(p, 0),
        Engine::Exact,
        EXACT,
    )
}

/// Type `4^3` URGDD with six `P3` classes.
pub fn urgdd_4x3_060() -> SearchSpec {
    spec(
        "urgdd-4x3-(0,6,0)".into(),
        12,
        Context::Multipartite {
            groups: GroupLayout::uniform(4, 3).groups,
        },
        profile_classes(Profile::new(0, 6, 0), 0),
        Engine::Exact,
        EXACT,
    )
}

/// `URD(12; 2,0,6)` and `URD(12; 0,6,2)`.
pub fn urd12(p: Profile) -> SearchSpec {
    spec(
        format!("urd-12-{p}"),
        12,
        Context::Complete,
        profile_classes(p, 0),
        Engine::Anneal,
        ANNEAL,
    )
}

/// `URD(20; 19-3x, 0, 2x)` for `x = 1..6`.
pub fn urd20(x: u32) -> SearchSpec {
    spec(
        format!("urd-20-{}", Profile::new(19 - 3 * x, 0, 2 * x)),
        20,
        Context::Complete,
        profile_classes(Profile::new(19 - 3 * x, 0, 2 * x), 0),
        Engine::Anneal,
        ANNEAL,
    )
}

/// Type `12^2` URGDD with nine `P3` classes, each invariant under `+3` on `Z_12`
/// acting on both sides.
pub fn urgdd_12x2_090() -> SearchSpec {
    let mut s = spec(
        "urgdd-12x2-(0,9,0)".into(),
        24,
        Context::Multipartite {
            groups: GroupLayout::uniform(12, 2).groups,
        },
        profile_classes(Profile::new(0, 9, 0), 3),
        Engine::Anneal,
        ANNEAL,
    );
    s.symmetry = Some(shift(24, 12));
    s
}

/// Type `12^3` URGDD `(0,9,8)` on `Z_36` with groups the residues mod 3;
/// `P3` classes are invariant under `+3`, `P4` classes under `+4`.
pub fn urgdd_12x3_098() -> SearchSpec {
    let groups = (0..3)
        .map(|i| (0..12).map(|j| (3 * j + i) as Vertex).collect())
        .collect();
    let mut s = spec(
        "urgdd-12x3-(0,9,8)".into(),
        36,
        Context::Multipartite { groups },
        reqs(Shape::P3, 9, 3).chain(reqs(Shape::P4, 8, 4)).collect(),
        Engine::Anneal,
        ANNEAL,
    );
    s.symmetry = Some(shift(36, 36));
    s
}

/// 3-RGDD of type `3^5`.
pub fn rgdd3_3x5() -> SearchSpec {
    spec(
        "rgdd3-3x5".into(),
        15,
        Context::Multipartite {
            groups: GroupLayout::uniform(3, 5).groups,
        },
        reqs(Shape::K3, 6, 0).collect(),
        Engine::Exact,
        EXACT,
    )
}

/// 2-frame of type `2^u` on `Z_2u` with groups `{i, i+u}`.
pub fn frame_2(u: usize) -> SearchSpec {
    let groups = (0..u)
        .map(|i| vec![i as Vertex, (i + u) as Vertex])
        .collect();
    let classes = (0..u)
        .flat_map(|i| {
            [0, 1].map(|_| ClassReq {
                shape: Shape::P2,
                scope: ClassScope::MissingGroup(i),
                step: 0,
            })
        })
        .collect();
    spec(
        format!("frame-2x{u}"),
        2 * u,
        Context::Multipartite { groups },
        classes,
        Engine::Exact,
        EXACT,
    )
}

/// Two matchings and three 5-cycle factors of the type `2^5` multipartite
/// graph on `Z_10` with groups `{i, i+5}`.
pub fn p2c5_2x5_23() -> SearchSpec {
    let groups = (0..5).map(|i| vec![i as Vertex, i as Vertex + 5]).collect();
    spec(
        "p2c5-2x5-(2,3)".into(),
        10,
        Context::Multipartite { groups },
        reqs(Shape::P2, 2, 0).chain(reqs(Shape::C5, 3, 0)).collect(),
        Engine::Exact,
        EXACT,
    )
}

/// `URD(60; 0,33,10)` on two copies of `Z_30`: `P3` classes are invariant under
/// `+6` and `P4` classes under `+10`. A single step for all classes cannot work,
/// since no block joins two points of one orbit.
pub fn urd60_0_33_10() -> SearchSpec {
    let mut s = spec(
        "urd-60-(0,33,10)".into(),
        60,
        Context::Complete,
        reqs(Shape::P3, 33, 6)
            .chain(reqs(Shape::P4, 10, 10))
            .collect(),
        Engine::Anneal,
        Budget {
            restarts: 64,
            steps: 50_000_000,
        },
    );
    s.symmetry = Some(shift(60, 30));
    s
}

/// Every spec the constructions may consult, with the even-`u` frames up to `u = 12`.
pub fn all() -> Vec<SearchSpec> {
    let mut out = vec![
        urd6_130(),
        urgdd_6x2(Profile::new(3, 0, 2)),
        urgdd_6x2(Profile::new(0, 0, 4)),
        urgdd_4x3_060(),
        urd12(Profile::new(2, 0, 6)),
        urd12(Profile::new(0, 6, 2)),
    ];
    out.extend((1..=6).map(urd20));
    out.extend([
        urgdd_12x2_090(),
        urgdd_12x3_098(),
        rgdd3_3x5(),
        frame_2(4),
        frame_2(6),
        urd60_0_33_10(),
    ]);
    out
}

/// Look up a catalog spec by name.
pub fn by_name(name: &str) -> Option<SearchSpec> {
    all()
        .into_iter()
        .chain([p2c5_2x5_23()])
        .chain([8, 10, 12].map(frame_2))
        .find(|s| s.name == name)
}
