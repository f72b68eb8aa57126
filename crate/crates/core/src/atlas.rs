//! Explicitly listed designs, transcribed from their published listings.
//!
//! Literal listings are kept as text in the source notation (`{a,b}` for an
//! edge, `[a,b,c]` for a path, `(a,b,c,d,e)` for a cycle) and parsed through a
//! per-entry label table. Cyclic listings are developed from base blocks.
//! Every entry is verified when it is built; a failure is a transcription error.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::model::{
    BlockKind, BlownBase, Design, DesignKind, GroupLayout, ResolutionClass, Scope, Vertex,
};
use crate::spectrum::Profile;
use crate::verify::verify_design;

/// A class given as base blocks developed under `x -> x + step * i`.
///
/// Symbolic points are pairs `(x, layer)`; only `x` moves, modulo `modulus`.
#[derive(Clone, Debug)]
pub struct OrbitClassSpec {
    pub kind: BlockKind,
    pub base_blocks: Vec<Vec<(i64, u32)>>,
    pub step: i64,
    pub indices: Vec<i64>,
    pub modulus: i64,
    /// Number of points the developed class must cover.
    pub points: usize,
    pub labeling: fn(i64, u32) -> Vertex,
}

impl OrbitClassSpec {
    /// Plain cyclic development over `Z_modulus` with `count` translates.
    pub fn cyclic(kind: BlockKind, base: &[&[i64]], step: i64, count: i64, modulus: i64) -> Self {
        OrbitClassSpec {
            kind,
            base_blocks: base
                .iter()
                .map(|b| b.iter().map(|&x| (x, 0)).collect())
                .collect(),
            step,
            indices: (0..count).collect(),
            modulus,
            points: modulus as usize,
            labeling: |x, _| x as Vertex,
        }
    }
}

/// Develop the translates and check that they are disjoint and cover
/// `0..points` exactly.
pub fn develop(spec: &OrbitClassSpec) -> Result<ResolutionClass> {
    let mut blocks = Vec::new();
    let mut seen = vec![false; spec.points];
    for &i in &spec.indices {
        for base in &spec.base_blocks {
            let verts: Vec<Vertex> = base
                .iter()
                .map(|&(x, layer)| {
                    (spec.labeling)((x + spec.step * i).rem_euclid(spec.modulus), layer)
                })
                .collect();
            for &p in &verts {
                if p as usize >= spec.points || std::mem::replace(&mut seen[p as usize], true) {
                    return Err(Error::Transcription {
                        id: "develop".into(),
                        detail: format!(
                            "translate {i} of {base:?} hits point {p} twice or out of range"
                        ),
                    });
                }
            }
            blocks.push(verts);
        }
    }
    if seen.contains(&false) {
        return Err(Error::Transcription {
            id: "develop".into(),
            detail: format!("developed {} class leaves points uncovered", spec.kind),
        });
    }
    Ok(ResolutionClass::from_vertex_lists(
        spec.kind,
        Scope::Full,
        blocks,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtlasEntry {
    pub id: &'static str,
    pub design: Design,
    /// How the listing is given.
    pub source: &'static str,
    /// Corrections applied to the literal listing.
    pub errata: Vec<&'static str>,
}

pub const IDS: [&str; 8] = [
    "urgdd-6x2-(2,3,0)",
    "urgdd-4x3-(4,3,0)",
    "urgdd-4x3-(1,3,2)",
    "urgdd-12x2-(1,6,2)",
    "urgdd-12x3-(1,6,10)",
    "c5x6-p3-factorization",
    "p2c5-2x5-(6,1)",
    "p2c5-2x5-(4,2)",
];

/// Parse one class written as `{a,b} {c,d}`, `[a,b,c] ...` or `(a,b,c,d,e)`.
fn parse_class(
    id: &str,
    text: &str,
    label: &dyn Fn(&str) -> Option<Vertex>,
) -> Result<ResolutionClass> {
    let err = |detail: String| Error::Transcription {
        id: id.to_string(),
        detail,
    };
    let mut blocks = Vec::new();
    let mut kind = None;
    let mut rest = text.trim();
    while !rest.is_empty() {
        let open = rest.chars().next().expect("non-empty");
        let close = match open {
            '{' => '}',
            '[' => ']',
            '(' => ')',
            _ => return Err(err(format!("unexpected {open:?} in {text:?}"))),
        };
        let end = rest
            .find(close)
            .ok_or_else(|| err(format!("unclosed block in {text:?}")))?;
        let verts = rest[1..end]
            .split(',')
            .map(|s| label(s.trim()).ok_or_else(|| err(format!("unknown point {s:?}"))))
            .collect::<Result<Vec<Vertex>>>()?;
        let block_kind = match (open, verts.len()) {
            ('{', 2) => BlockKind::P2,
            ('[', 3) => BlockKind::P3,
            ('[', 4) => BlockKind::P4,
            ('(', 5) => BlockKind::C5,
            _ => {
                return Err(err(format!(
                    "block {:?} has an unexpected shape",
                    &rest[..=end]
                )))
            }
        };
        if kind.is_some_and(|k| k != block_kind) {
            return Err(err(format!("mixed block kinds in {text:?}")));
        }
        kind = Some(block_kind);
        blocks.push(verts);
        rest = rest[end + 1..].trim_start_matches([',', ' ']).trim();
    }
    let kind = kind.ok_or_else(|| err("empty class".into()))?;
    Ok(ResolutionClass::from_vertex_lists(
        kind,
        Scope::Full,
        blocks,
    ))
}

fn parse_classes(
    id: &str,
    lines: &[&str],
    label: &dyn Fn(&str) -> Option<Vertex>,
) -> Result<Vec<ResolutionClass>> {
    lines.iter().map(|l| parse_class(id, l, label)).collect()
}

/// Points `1..6` and `a..f` become `0..5` and `6..11`.
fn label_digits_letters(s: &str) -> Option<Vertex> {
    match s.as_bytes() {
        [d @ b'1'..=b'6'] => Some((d - b'1') as Vertex),
        [c @ b'a'..=b'f'] => Some((c - b'a') as Vertex + 6),
        _ => None,
    }
}

/// Points `1..n` become `0..n-1`.
fn label_one_based(s: &str) -> Option<Vertex> {
    s.parse::<Vertex>().ok().filter(|&n| n >= 1).map(|n| n - 1)
}

/// `k` stays `k`, `k'` becomes `12 + k`.
fn label_primed(s: &str) -> Option<Vertex> {
    match s.strip_suffix('\'') {
        Some(k) => k.parse::<Vertex>().ok().filter(|&k| k < 12).map(|k| 12 + k),
        None => s.parse::<Vertex>().ok().filter(|&k| k < 12),
    }
}

const URGDD_6X2_230: [&str; 5] = [
    "{1,e} {2,f} {3,c} {4,d} {5,b} {6,a}",
    "{1,d} {2,b} {3,a} {4,e} {5,f} {6,c}",
    "[a,1,b] [f,4,c] [3,d,5] [2,e,6]",
    "[c,2,d] [a,5,e] [3,b,4] [1,f,6]",
    "[e,3,f] [b,6,d] [2,a,4] [1,c,5]",
];

const URGDD_4X3_430: [&str; 7] = [
    "{1,6} {2,5} {3,10} {4,9} {7,12} {8,11}",
    "{1,5} {2,6} {3,9} {4,10} {7,11} {8,12}",
    "{1,9} {2,10} {3,7} {4,8} {6,12} {5,11}",
    "{1,10} {2,9} {3,8} {4,7} {5,12} {6,11}",
    "[8,1,11] [7,2,12] [4,5,9] [3,6,10]",
    "[11,3,5] [12,4,6] [1,7,9] [2,8,10]",
    "[6,9,8] [5,10,7] [2,11,4] [1,12,3]",
];

const URGDD_4X3_132: [&str; 6] = [
    "{1,6} {2,5} {3,10} {4,9} {7,12} {8,11}",
    "[8,1,11] [7,2,12] [4,5,9] [3,6,10]",
    "[11,3,5] [12,4,6] [1,7,9] [2,8,10]",
    "[6,9,8] [5,10,7] [2,11,4] [1,12,3]",
    "[9,1,10,4] [2,6,11,5] [12,8,3,7]",
    "[1,5,12,6] [3,9,2,10] [8,4,7,11]",
];

const URGDD_12X2_162: [&str; 9] = [
    "{0,11'} {1,4'} {2,6'} {3,7'} {4,1'} {5,0'} {6,10'} {7,5'} {8,3'} {9,8'} {10,2'} {11,9'}",
    "[0',0,1'] [2',1,3'] [6',6,7'] [8',7,9'] [2,4',3] [4,5',5] [8,10',9] [10,11',11]",
    "[1',2,5'] [2',5,4'] [7',8,11'] [8',11,10'] [1,0',3] [7,6',9] [0,3',4] [6,9',10]",
    "[4',4,0'] [5',3,3'] [10',10,6'] [11',9,9'] [1,1',5] [0,2',2] [7,7',11] [6,8',8]",
    "[0',6,1'] [2',7,3'] [6',0,7'] [8',1,9'] [2,10',3] [4,11',5] [8,4',9] [10,5',11]",
    "[1',8,5'] [2',11,4'] [7',2,11'] [8',5,10'] [1,6',3] [7,0',9] [0,9',4] [6,3',10]",
    "[4',10,0'] [5',9,3'] [10',4,6'] [11',3,9'] [1,7',5] [0,8',2] [7,1',11] [6,2',8]",
    "[4',0,5',1] [6,11',7,10'] [0',2,3',5] [11,6',8,9'] [1',3,2',4] [9,7',10,8']",
    "[7,4',6,5'] [0,10',1,11'] [8,0',11,3'] [2,9',5,6'] [3,8',4,7'] [10,1',9,2']",
];

fn listed(
    kind: DesignKind,
    v: usize,
    layout: GroupLayout,
    classes: Vec<ResolutionClass>,
    claimed: Profile,
) -> Design {
    let mut d = Design::new(kind, v, layout, classes);
    d.profile = claimed;
    d
}

fn urgdd_12x3_1_6_10() -> Result<Design> {
    use BlockKind::{P2, P3, P4};
    let p3 = |base: &[i64]| OrbitClassSpec::cyclic(P3, &[base], 3, 12, 36);
    let p4 = |base: &[i64]| OrbitClassSpec::cyclic(P4, &[base], 4, 9, 36);
    let specs = [
        OrbitClassSpec::cyclic(P2, &[&[1, 2], &[3, 8]], 4, 9, 36),
        p3(&[0, 2, 4]),
        p3(&[1, 3, 11]),
        p3(&[0, 4, 8]),
        p3(&[6, 2, 10]),
        p3(&[9, 1, 17]),
        p3(&[34, 18, 2]),
        p4(&[2, 3, 4, 5]),
        p4(&[0, 5, 10, 15]),
        p4(&[0, 7, 14, 1]),
        p4(&[11, 1, 8, 18]),
        p4(&[12, 2, 9, 23]),
        p4(&[14, 3, 13, 0]),
        p4(&[11, 0, 14, 25]),
        p4(&[12, 1, 18, 31]),
        p4(&[2, 19, 32, 13]),
        p4(&[17, 3, 20, 6]),
    ];
    let classes = specs.iter().map(develop).collect::<Result<Vec<_>>>()?;
    let groups = (0..3)
        .map(|i| (0..12).map(|j| 3 * j + i).collect())
        .collect();
    Ok(listed(
        DesignKind::Urgdd,
        36,
        GroupLayout {
            groups,
            hole: Vec::new(),
        },
        classes,
        Profile::new(1, 6, 10),
    ))
}

/// Base blocks on `Z_6 x Z_5`, written `(x, layer)`.
const C5X6_BASE: [[[(i64, u32); 3]; 5]; 3] = [
    [
        [(0, 1), (0, 0), (1, 1)],
        [(2, 2), (2, 1), (3, 2)],
        [(1, 3), (1, 2), (2, 3)],
        [(2, 4), (0, 3), (3, 4)],
        [(1, 0), (1, 4), (2, 0)],
    ],
    [
        [(2, 1), (0, 0), (3, 1)],
        [(3, 2), (1, 1), (4, 2)],
        [(4, 3), (2, 2), (5, 3)],
        [(4, 4), (0, 3), (5, 4)],
        [(4, 0), (0, 4), (5, 0)],
    ],
    [
        [(4, 1), (0, 0), (5, 1)],
        [(4, 2), (0, 1), (5, 2)],
        [(4, 3), (0, 2), (5, 3)],
        [(0, 4), (0, 3), (1, 4)],
        [(4, 0), (2, 4), (5, 0)],
    ],
];

/// `P3`-factorization of the 5-cycle with every vertex blown up six times.
/// Class `(j, i)` is the union of the `j`-th base set translated by `i` and by
/// `partner(i)`; the corrected pairing uses `i + 3`.
fn c5x6(partner: fn(i64) -> i64) -> Result<Design> {
    let mut classes = Vec::new();
    for base in &C5X6_BASE {
        for i in 0..3 {
            let spec = OrbitClassSpec {
                kind: BlockKind::P3,
                base_blocks: base.iter().map(|b| b.to_vec()).collect(),
                step: 1,
                indices: vec![i, partner(i)],
                modulus: 6,
                points: 30,
                labeling: |x, layer| layer * 6 + x as Vertex,
            };
            classes.push(develop(&spec)?);
        }
    }
    let mut d = Design::new(
        DesignKind::Ingredient,
        30,
        GroupLayout::uniform(6, 5),
        classes,
    );
    d.base = Some(BlownBase {
        copies: 6,
        edges: (0..5).map(|j| (j, (j + 1) % 5)).collect(),
    });
    d.profile = Profile::new(0, 9, 0);
    Ok(d)
}

/// Groups `{i, i+5}` on `Z_10`.
fn z10_layout() -> GroupLayout {
    GroupLayout {
        groups: (0..5).map(|i| vec![i, i + 5]).collect(),
        hole: Vec::new(),
    }
}

fn p2c5_6_1(corrected: bool) -> Result<Design> {
    use BlockKind::{C5, P2};
    let z = |x: i64| x as Vertex;
    // Pairs {2i, 2i+1} for i = 1, 2, 4 together with {0,6} and {1,7}.
    let mut first: Vec<Vec<Vertex>> = [1i64, 2, 4]
        .iter()
        .map(|&i| vec![z(2 * i), z(2 * i + 1)])
        .collect();
    first.extend([vec![0, 6], vec![1, 7]]);
    let first = ResolutionClass::from_vertex_lists(P2, Scope::Full, first);
    let mut classes = vec![first];
    for (base, step) in [([1, 2], 2), ([0, 3], 2), ([1, 4], 2)] {
        classes.push(develop(&OrbitClassSpec::cyclic(P2, &[&base], step, 5, 10))?);
    }
    classes.extend(parse_classes(
        "p2c5-2x5-(6,1)",
        &[
            "{0,4} {8,2} {1,5} {9,3} {6,7}",
            "{4,8} {2,6} {5,9} {3,7} {0,1}",
        ],
        &|s| s.parse::<Vertex>().ok().filter(|&x| x < 10),
    )?);
    // The cycle listing reads "6+1" in its fourth position; "6+i" is meant.
    let fourth = if corrected { (6, 1) } else { (7, 0) };
    let cycles: Vec<Vec<Vertex>> = (0..2)
        .map(|i| {
            vec![
                z(i),
                z(2 + i),
                z(4 + i),
                z(fourth.0 + fourth.1 * i),
                z(8 + i),
            ]
        })
        .collect();
    classes.push(ResolutionClass::from_vertex_lists(C5, Scope::Full, cycles));
    let mut d = Design::new(DesignKind::Ingredient, 10, z10_layout(), classes);
    d.profile = Profile::new(6, 0, 0);
    d.cycles = 1;
    Ok(d)
}

fn p2c5_4_2() -> Result<Design> {
    use BlockKind::{C5, P2};
    let mut classes = Vec::new();
    for base in [[0, 1], [1, 2], [0, 3], [1, 4]] {
        classes.push(develop(&OrbitClassSpec::cyclic(P2, &[&base], 2, 5, 10))?);
    }
    for base in [[0, 2, 4, 6, 8], [0, 4, 8, 2, 6]] {
        classes.push(develop(&OrbitClassSpec::cyclic(C5, &[&base], 1, 2, 10))?);
    }
    let mut d = Design::new(DesignKind::Ingredient, 10, z10_layout(), classes);
    d.profile = Profile::new(4, 0, 0);
    d.cycles = 2;
    Ok(d)
}

fn build(id: &str) -> Result<(Design, &'static str, Vec<&'static str>)> {
    let literal = "literal listing";
    Ok(match id {
        "urgdd-6x2-(2,3,0)" => (
            listed(
                DesignKind::Urgdd,
                12,
                GroupLayout::uniform(6, 2),
                parse_classes(id, &URGDD_6X2_230, &label_digits_letters)?,
                Profile::new(2, 3, 0),
            ),
            literal,
            Vec::new(),
        ),
        "urgdd-4x3-(4,3,0)" => (
            listed(
                DesignKind::Urgdd,
                12,
                GroupLayout::uniform(4, 3),
                parse_classes(id, &URGDD_4X3_430, &label_one_based)?,
                Profile::new(4, 3, 0),
            ),
            literal,
            Vec::new(),
        ),
        "urgdd-4x3-(1,3,2)" => (
            listed(
                DesignKind::Urgdd,
                12,
                GroupLayout::uniform(4, 3),
                parse_classes(id, &URGDD_4X3_132, &label_one_based)?,
                Profile::new(1, 3, 2),
            ),
            literal,
            Vec::new(),
        ),
        "urgdd-12x2-(1,6,2)" => (
            listed(
                DesignKind::Urgdd,
                24,
                GroupLayout::uniform(12, 2),
                parse_classes(id, &URGDD_12X2_162, &label_primed)?,
                Profile::new(1, 6, 2),
            ),
            literal,
            Vec::new(),
        ),
        "urgdd-12x3-(1,6,10)" => (
            urgdd_12x3_1_6_10()?,
            "cyclic development over Z_36",
            Vec::new(),
        ),
        "c5x6-p3-factorization" => (
            c5x6(|i| i + 3)?,
            "base blocks developed over Z_6 on Z_6 x Z_5",
            vec!["class pairing B_i with B_{3i} read as B_i with B_{i+3}"],
        ),
        "p2c5-2x5-(6,1)" => (
            p2c5_6_1(true)?,
            "cyclic classes over Z_10 plus literal classes",
            vec!["cycle vertex 6+1 read as 6+i"],
        ),
        "p2c5-2x5-(4,2)" => (p2c5_4_2()?, "cyclic development over Z_10", Vec::new()),
        _ => return Err(Error::Lookup(id.to_string())),
    })
}

/// Build and verify an entry. Entries are built once per process.
pub fn get(id: &str) -> Result<AtlasEntry> {
    static ENTRIES: OnceLock<Vec<std::result::Result<AtlasEntry, String>>> = OnceLock::new();
    let index = IDS
        .iter()
        .position(|&known| known == id)
        .ok_or_else(|| Error::Lookup(id.to_string()))?;
    let entries = ENTRIES.get_or_init(|| {
        IDS.iter()
            .map(|&id| {
                let (design, source, errata) = build(id).map_err(|e| e.to_string())?;
                let report = verify_design(&design);
                if !report.is_valid() {
                    return Err(format!("{id}: {}", report.summary(5)));
                }
                Ok(AtlasEntry {
                    id,
                    design,
                    source,
                    errata,
                })
            })
            .collect()
    });
    entries[index]
        .clone()
        .map_err(|detail| Error::Transcription {
            id: id.to_string(),
            detail,
        })
}

/// The listings exactly as printed, before any correction; used to show that
/// each correction is needed.
pub fn uncorrected(id: &str) -> Result<Design> {
    match id {
        "c5x6-p3-factorization" => c5x6(|i| (3 * i) % 6),
        "p2c5-2x5-(6,1)" => p2c5_6_1(false),
        _ => Ok(build(id)?.0),
    }
}

pub fn all() -> Result<Vec<AtlasEntry>> {
    IDS.iter().map(|id| get(id)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_verifies_with_its_claimed_profile() {
        for entry in all().unwrap() {
            assert!(verify_design(&entry.design).is_valid(), "{}", entry.id);
        }
        assert_eq!(
            get("urgdd-12x2-(1,6,2)").unwrap().design.profile,
            Profile::new(1, 6, 2)
        );
        assert_eq!(
            get("urgdd-12x3-(1,6,10)").unwrap().design.profile,
            Profile::new(1, 6, 10)
        );
    }

    #[test]
    fn unknown_id_is_a_lookup_error() {
        assert!(matches!(get("nope"), Err(Error::Lookup(_))));
    }

    #[test]
    fn cycle_factorization_shape() {
        let d = get("c5x6-p3-factorization").unwrap().design;
        assert_eq!(d.classes.len(), 9);
        assert!(d
            .classes
            .iter()
            .all(|c| c.blocks.len() == 10 && c.kind == BlockKind::P3));
    }

    #[test]
    fn errata_are_needed() {
        for id in ["c5x6-p3-factorization", "p2c5-2x5-(6,1)"] {
            let literal = uncorrected(id);
            let rejected = match literal {
                Err(_) => true,
                Ok(d) => !verify_design(&d).is_valid(),
            };
            assert!(rejected, "{id}: the literal listing should fail");
            assert_eq!(get(id).unwrap().errata.len(), 1);
        }
        for id in IDS
            .iter()
            .filter(|id| !id.starts_with("c5x6") && **id != "p2c5-2x5-(6,1)")
        {
            assert!(get(id).unwrap().errata.is_empty());
            assert!(verify_design(&uncorrected(id).unwrap()).is_valid());
        }
    }

    #[test]
    fn developing_a_matching_over_z36() {
        let c = develop(&OrbitClassSpec::cyclic(
            BlockKind::P2,
            &[&[1, 2], &[3, 8]],
            4,
            9,
            36,
        ))
        .unwrap();
        assert_eq!(c.blocks.len(), 18);
        let p4 = develop(&OrbitClassSpec::cyclic(
            BlockKind::P4,
            &[&[2, 3, 4, 5]],
            4,
            9,
            36,
        ))
        .unwrap();
        assert_eq!(p4.blocks.len(), 9);
        assert!(develop(&OrbitClassSpec::cyclic(BlockKind::P2, &[&[0, 1]], 1, 2, 4)).is_err());
    }
}
