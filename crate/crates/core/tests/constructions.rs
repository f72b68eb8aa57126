use urd_core::compose::{
    build_iurd_36_12, expand_rgdd, fill_groups, frame_compose, select_profiles,
};
use urd_core::error::Error;
use urd_core::ingredients::{rgdd, two_frame};
use urd_core::model::DesignKind;
use urd_core::search::{cache, catalog};
use urd_core::solver::{build_urd, build_urd20, build_urgdd, route, traced, Route};
use urd_core::spectrum::{d, dbar, iset, Profile};
use urd_core::verify::verify_design;

fn p(r: u32, s: u32, t: u32) -> Profile {
    Profile::new(r, s, t)
}

fn assert_valid(design: &urd_core::model::Design, profile: Profile) {
    let report = verify_design(design);
    assert!(report.is_valid(), "{}", report.summary(5));
    assert_eq!(design.profile, profile);
}

#[test]
fn every_admissible_target_up_to_120_is_built() {
    for v in (12..=120).step_by(12) {
        for &target in &d(v).unwrap() {
            let design = build_urd(v, target).unwrap_or_else(|e| panic!("URD({v}; {target}): {e}"));
            assert_eq!(design.v, v as usize);
            assert_valid(&design, target);
        }
    }
}

#[test]
fn doubling_never_uses_frames_and_frames_never_use_sixty_ingredients() {
    for v in [48, 96] {
        for &target in &d(v).unwrap() {
            assert_eq!(route(v, target).unwrap(), Route::Doubling);
        }
    }
    for (v, u) in [(84, 3), (108, 4)] {
        for &target in &d(v).unwrap() {
            assert_eq!(route(v, target).unwrap(), Route::Frame { u });
            let (built, calls) = traced(|| build_urd(v, target));
            built.unwrap();
            assert!(
                calls.iter().all(|&t| t != (12, 5) && t != (20, 3)),
                "URD({v}; {target}) asked for {calls:?}"
            );
        }
    }
}

#[test]
fn urgdd_builders_cover_their_sets() {
    for &q in &iset::q() {
        assert_valid(&build_urgdd(6, 2, q).unwrap(), q);
    }
    for &w in &iset::w() {
        assert_valid(&build_urgdd(4, 3, w).unwrap(), w);
    }
    for &t in &dbar(1, 2) {
        assert_valid(&build_urgdd(12, 2, t).unwrap(), t);
    }
    for &t in &dbar(1, 3) {
        assert_valid(&build_urgdd(12, 3, t).unwrap(), t);
    }
    for &t in &iset::union_1_to_8() {
        assert_valid(&build_urgdd(12, 5, t).unwrap(), t);
    }
    assert_valid(&build_urgdd(20, 3, p(0, 30, 0)).unwrap(), p(0, 30, 0));
}

#[test]
fn urgdd_routes_follow_the_listed_ingredients() {
    let (_, calls) = traced(|| build_urgdd(12, 2, p(5, 3, 2)).unwrap());
    assert!(calls.contains(&(6, 2)));
    let (_, calls) = traced(|| build_urgdd(12, 3, p(4, 15, 0)).unwrap());
    assert!(calls.contains(&(4, 3)));
    let (_, calls) = traced(|| build_urgdd(12, 5, p(0, 36, 0)).unwrap());
    assert_eq!(calls.iter().filter(|&&c| c == (4, 3)).count(), 6);
    let (_, calls) = traced(|| build_urgdd(20, 3, p(0, 30, 0)).unwrap());
    assert_eq!(calls.iter().filter(|&&c| c == (4, 3)).count(), 5);
}

#[test]
fn builders_reject_targets_outside_their_sets() {
    for (g, u, t) in [
        (12, 2, p(1, 0, 0)),
        (12, 3, p(0, 0, 0)),
        (12, 5, p(0, 33, 10)),
        (6, 2, p(1, 1, 1)),
    ] {
        assert!(
            matches!(build_urgdd(g, u, t), Err(Error::Spectrum(_))),
            "{g}^{u} {t}"
        );
    }
    assert!(matches!(
        build_urgdd(5, 2, p(5, 0, 0)),
        Err(Error::Unsupported(_))
    ));
    assert!(matches!(build_urd20(p(18, 0, 0)), Err(Error::Spectrum(_))));
    assert!(matches!(
        build_urd(24, p(22, 0, 1)),
        Err(Error::Spectrum(_))
    ));
    assert!(matches!(
        build_urd(16, p(0, 0, 10)),
        Err(Error::Unsupported(_))
    ));
    assert_valid(&build_urd(16, p(15, 0, 0)).unwrap(), p(15, 0, 0));
}

#[test]
fn urd20_family() {
    for x in 0..=6 {
        let target = p(19 - 3 * x, 0, 2 * x);
        assert_valid(&build_urd20(target).unwrap(), target);
    }
}

#[test]
fn blow_up_examples() {
    let urd12 = |q| build_urd(12, q);
    let d36 = expand_rgdd(
        &rgdd(3, 1, 3).unwrap(),
        12,
        &[p(1, 6, 10)],
        |q| build_urgdd(12, 3, q),
        Some(p(11, 0, 0)),
        urd12,
    )
    .unwrap();
    assert_valid(&d36, p(12, 6, 10));

    let d48 = expand_rgdd(
        &rgdd(2, 1, 4).unwrap(),
        12,
        &[p(12, 0, 0), p(0, 9, 0), p(0, 0, 8)],
        |q| build_urgdd(12, 2, q),
        Some(p(11, 0, 0)),
        urd12,
    )
    .unwrap();
    assert_valid(&d48, p(23, 9, 8));
    assert!(d(48).unwrap().contains(&p(23, 9, 8)));

    let gdd = expand_rgdd(
        &rgdd(3, 3, 3).unwrap(),
        4,
        &[p(0, 6, 0), p(4, 3, 0), p(1, 3, 2)],
        |q| build_urgdd(4, 3, q),
        None,
        urd12,
    )
    .unwrap();
    assert_eq!(gdd.kind, DesignKind::Urgdd);
    assert_valid(&gdd, p(5, 12, 2));
    assert!(expand_rgdd(
        &rgdd(3, 3, 3).unwrap(),
        4,
        &[p(0, 6, 0)],
        |q| build_urgdd(4, 3, q),
        None,
        urd12
    )
    .is_err());
}

#[test]
fn group_filling_examples() {
    let filled = fill_groups(&build_urgdd(6, 2, p(2, 3, 0)).unwrap(), p(1, 3, 0), |_| {
        cache::fetch_design(&catalog::urd6_130())
    })
    .unwrap();
    assert_valid(&filled, p(3, 6, 0));
    let sixty = fill_groups(
        &build_urgdd(20, 3, p(0, 30, 0)).unwrap(),
        p(19, 0, 0),
        build_urd20,
    )
    .unwrap();
    assert_valid(&sixty, p(19, 30, 0));
    let k24 = fill_groups(
        &build_urgdd(12, 2, p(12, 0, 0)).unwrap(),
        p(11, 0, 0),
        |q| build_urd(12, q),
    )
    .unwrap();
    assert_valid(&k24, p(23, 0, 0));
    let wrong_size = fill_groups(
        &build_urgdd(12, 2, p(12, 0, 0)).unwrap(),
        p(5, 0, 0),
        |_| urd_core::ingredients::one_factorization(6),
    );
    assert!(wrong_size.is_err());
}

#[test]
fn holed_designs() {
    for (full, partial) in [
        (p(0, 9, 8), p(11, 0, 0)),
        (p(24, 0, 0), p(0, 6, 2)),
        (p(1, 6, 10), p(2, 0, 6)),
    ] {
        let iurd = build_iurd_36_12(full, partial).unwrap();
        assert_eq!(iurd.kind, DesignKind::Iurd);
        assert_eq!(iurd.layout.hole.len(), 12);
        assert_eq!(iurd.partial_profile, Some(partial));
        assert_valid(&iurd, full);
    }
    assert!(matches!(
        build_iurd_36_12(p(1, 0, 0), p(11, 0, 0)),
        Err(Error::Spectrum(_))
    ));
}

#[test]
fn frame_filling_examples() {
    let frame3 = two_frame(3).unwrap();
    let matchings = frame_compose(&frame3, 12, &[[p(12, 0, 0); 2]; 3], p(11, 0, 0)).unwrap();
    assert_valid(&matchings, p(83, 0, 0));

    let mixed = frame_compose(&frame3, 12, &[[p(0, 9, 0), p(0, 0, 8)]; 3], p(0, 6, 2)).unwrap();
    assert_valid(&mixed, p(0, 33, 26));

    let frame4 = two_frame(4).unwrap();
    let per_class = [
        [p(1, 6, 2), p(2, 3, 4)],
        [p(12, 0, 0), p(0, 0, 8)],
        [p(4, 6, 0), p(0, 9, 0)],
        [p(6, 0, 4), p(9, 0, 2)],
    ];
    let total = per_class.iter().flatten().copied().sum::<Profile>() + p(2, 0, 6);
    assert_valid(
        &frame_compose(&frame4, 12, &per_class, p(2, 0, 6)).unwrap(),
        total,
    );
    assert!(d(108).unwrap().contains(&total));

    assert!(frame_compose(&frame3, 6, &[[p(12, 0, 0); 2]; 3], p(11, 0, 0)).is_err());
    assert!(frame_compose(&frame3, 12, &[[p(12, 0, 0); 2]; 2], p(11, 0, 0)).is_err());
}

#[test]
fn selector_splits_are_exact() {
    let d12 = d(12).unwrap();
    for v in [24u32, 48, 72, 96, 120] {
        let h = v as usize / 12 - 1;
        for &target in &d(v).unwrap() {
            let a = select_profiles(target, &d12, &dbar(1, 2), h).unwrap();
            assert_eq!(a.total(), target);
            assert_eq!(a.parts.len(), h);
        }
    }
}
