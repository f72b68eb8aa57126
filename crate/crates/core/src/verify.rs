//! Independent validation of design certificates.
//!
//! [`verify_design`] never panics and never stops at the first problem: every
//! violation it can find is reported, each tied to the class, block or edge it
//! concerns.

use std::fmt;

use serde::Serialize;

use crate::model::{tally, BlockKind, Design, DesignKind, Edge, Scope, TargetGraph, Vertex};
use crate::spectrum::Profile;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Violation {
    Layout {
        detail: String,
    },
    MalformedBlock {
        class: usize,
        block: usize,
        detail: String,
    },
    MixedKind {
        class: usize,
        block: usize,
        expected: BlockKind,
        found: BlockKind,
    },
    ForbiddenKind {
        class: usize,
        kind: BlockKind,
    },
    BadScope {
        class: usize,
        detail: String,
    },
    Coverage {
        class: usize,
        vertex: Vertex,
        multiplicity: u32,
        expected: u32,
    },
    MissingEdge {
        edge: (Vertex, Vertex),
    },
    DuplicateEdge {
        edge: (Vertex, Vertex),
        multiplicity: u32,
        first_class: usize,
        class: usize,
    },
    ForbiddenEdge {
        edge: (Vertex, Vertex),
        class: usize,
    },
    ProfileMismatch {
        part: String,
        claimed: String,
        actual: String,
    },
    FrameMissCount {
        group: usize,
        count: usize,
        expected: usize,
    },
}

impl Violation {
    /// Classes the violation points at.
    pub fn classes(&self) -> Vec<usize> {
        match self {
            Violation::MalformedBlock { class, .. }
            | Violation::MixedKind { class, .. }
            | Violation::ForbiddenKind { class, .. }
            | Violation::BadScope { class, .. }
            | Violation::Coverage { class, .. }
            | Violation::ForbiddenEdge { class, .. } => vec![*class],
            Violation::DuplicateEdge {
                first_class, class, ..
            } => vec![*first_class, *class],
            _ => Vec::new(),
        }
    }

    pub fn edge(&self) -> Option<Edge> {
        match self {
            Violation::MissingEdge { edge }
            | Violation::DuplicateEdge { edge, .. }
            | Violation::ForbiddenEdge { edge, .. } => Some(Edge::new(edge.0, edge.1)),
            _ => None,
        }
    }

    pub fn vertex(&self) -> Option<Vertex> {
        match self {
            Violation::Coverage { vertex, .. } => Some(*vertex),
            _ => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Layout { detail } => write!(f, "layout: {detail}"),
            Violation::MalformedBlock {
                class,
                block,
                detail,
            } => {
                write!(f, "class {class}, block {block}: {detail}")
            }
            Violation::MixedKind {
                class,
                block,
                expected,
                found,
            } => write!(
                f,
                "class {class}, block {block}: {found} block in a {expected} class"
            ),
            Violation::ForbiddenKind { class, kind } => {
                write!(
                    f,
                    "class {class}: {kind} blocks are not allowed in this design family"
                )
            }
            Violation::BadScope { class, detail } => write!(f, "class {class}: {detail}"),
            Violation::Coverage {
                class,
                vertex,
                multiplicity,
                expected,
            } => write!(
                f,
                "class {class}: vertex {vertex} covered {multiplicity} times, expected {expected}"
            ),
            Violation::MissingEdge { edge } => write!(f, "missing edge {{{},{}}}", edge.0, edge.1),
            Violation::DuplicateEdge {
                edge,
                multiplicity,
                first_class,
                class,
            } => write!(
                f,
                "edge {{{},{}}} used {multiplicity} times (classes {first_class} and {class})",
                edge.0, edge.1
            ),
            Violation::ForbiddenEdge { edge, class } => write!(
                f,
                "class {class}: edge {{{},{}}} is not in the target graph",
                edge.0, edge.1
            ),
            Violation::ProfileMismatch {
                part,
                claimed,
                actual,
            } => write!(f, "{part} profile claimed {claimed}, classes give {actual}"),
            Violation::FrameMissCount {
                group,
                count,
                expected,
            } => write!(
                f,
                "group {group} is missed by {count} classes, expected {expected}"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Concise summary used in error messages.
    pub fn summary(&self, limit: usize) -> String {
        let mut parts: Vec<String> = self
            .violations
            .iter()
            .take(limit)
            .map(|v| v.to_string())
            .collect();
        if self.violations.len() > limit {
            parts.push(format!("... {} more", self.violations.len() - limit));
        }
        parts.join("; ")
    }
}

/// `rv/2 + 2sv/3 + 3tv/4 = v(v-1)/2`, scaled to integers.
pub fn verify_counts(v: u64, p: Profile) -> bool {
    v > 0 && (6 * p.r as u64 + 8 * p.s as u64 + 9 * p.t as u64) * v == 6 * v * (v - 1)
}

fn check_layout(d: &Design, out: &mut Vec<Violation>) -> bool {
    let v = d.v;
    let mut owner = vec![0u8; v];
    let mut ok = true;
    let mut mark = |p: Vertex, what: &str, out: &mut Vec<Violation>| {
        if (p as usize) >= v {
            out.push(Violation::Layout {
                detail: format!("{what} point {p} is outside 0..{v}"),
            });
            return false;
        }
        owner[p as usize] += 1;
        if owner[p as usize] > 1 {
            out.push(Violation::Layout {
                detail: format!("point {p} lies in more than one group or hole"),
            });
            return false;
        }
        true
    };
    for group in &d.layout.groups {
        if group.is_empty() {
            out.push(Violation::Layout {
                detail: "empty group".into(),
            });
            ok = false;
        }
        for &p in group {
            ok &= mark(p, "group", out);
        }
    }
    for &p in &d.layout.hole {
        ok &= mark(p, "hole", out);
    }
    match d.kind {
        DesignKind::Urd => {
            if !d.layout.groups.is_empty() || !d.layout.hole.is_empty() {
                out.push(Violation::Layout {
                    detail: "a URD has neither groups nor a hole".into(),
                });
                ok = false;
            }
        }
        DesignKind::Urgdd | DesignKind::Frame => {
            if d.layout.groups.is_empty() || !d.layout.hole.is_empty() {
                out.push(Violation::Layout {
                    detail: format!("a {} needs groups and no hole", d.kind.name()),
                });
                ok = false;
            } else if owner.contains(&0) {
                out.push(Violation::Layout {
                    detail: "groups do not cover every point".into(),
                });
                ok = false;
            }
        }
        DesignKind::Iurd => {
            if d.layout.hole.is_empty() || !d.layout.groups.is_empty() {
                out.push(Violation::Layout {
                    detail: "an IURD needs a hole and no groups".into(),
                });
                ok = false;
            }
        }
        DesignKind::Ingredient => {}
    }
    if let Some(base) = &d.base {
        let copies = base.copies;
        if copies == 0 || !v.is_multiple_of(copies) {
            out.push(Violation::Layout {
                detail: format!("{v} points are not a whole number of {copies}-fold copies"),
            });
            ok = false;
        } else {
            let base_v = (v / copies) as Vertex;
            for &(a, b) in &base.edges {
                if a >= base_v || b >= base_v || a == b {
                    out.push(Violation::Layout {
                        detail: format!("base edge ({a},{b}) is invalid"),
                    });
                    ok = false;
                }
            }
        }
        if d.kind != DesignKind::Ingredient {
            out.push(Violation::Layout {
                detail: "only ingredients live on blown graphs".into(),
            });
            ok = false;
        }
    }
    ok
}

/// Full validation of a certificate.
pub fn verify_design(d: &Design) -> Report {
    let mut out = Vec::new();
    let v = d.v;
    if !check_layout(d, &mut out) {
        return Report { violations: out };
    }
    let target = TargetGraph::of(d);
    let group_of = d.layout.group_index(v);
    let mut in_hole = vec![false; v];
    for &p in &d.layout.hole {
        in_hole[p as usize] = true;
    }

    let mut seen = vec![0u32; v];
    let mut counts = vec![0u32; v * v];
    let mut first_class = vec![usize::MAX; v * v];
    for (ci, class) in d.classes.iter().enumerate() {
        if class.kind == BlockKind::C5 && d.kind != DesignKind::Ingredient {
            out.push(Violation::ForbiddenKind {
                class: ci,
                kind: BlockKind::C5,
            });
        }
        let scope_ok = match (d.kind, class.scope) {
            (DesignKind::Frame, Scope::PartialGroup(g)) => {
                if g >= d.layout.groups.len() {
                    out.push(Violation::BadScope {
                        class: ci,
                        detail: format!("missing group {g} does not exist"),
                    });
                    false
                } else {
                    true
                }
            }
            (DesignKind::Iurd, Scope::Full | Scope::PartialHole) => true,
            (DesignKind::Urd | DesignKind::Urgdd | DesignKind::Ingredient, Scope::Full) => true,
            (kind, scope) => {
                out.push(Violation::BadScope {
                    class: ci,
                    detail: format!("scope {scope:?} is not allowed in a {}", kind.name()),
                });
                false
            }
        };
        if d.kind == DesignKind::Frame && class.kind != BlockKind::P2 {
            out.push(Violation::ForbiddenKind {
                class: ci,
                kind: class.kind,
            });
        }

        seen.iter_mut().for_each(|c| *c = 0);
        for (bi, block) in class.blocks.iter().enumerate() {
            if block.kind != class.kind {
                out.push(Violation::MixedKind {
                    class: ci,
                    block: bi,
                    expected: class.kind,
                    found: block.kind,
                });
            }
            if let Some(&p) = block.verts.iter().find(|&&p| p as usize >= v) {
                out.push(Violation::MalformedBlock {
                    class: ci,
                    block: bi,
                    detail: format!("vertex {p} is outside 0..{v}"),
                });
                continue;
            }
            if let Err(e) = block.check() {
                out.push(Violation::MalformedBlock {
                    class: ci,
                    block: bi,
                    detail: e.to_string(),
                });
            }
            for &p in &block.verts {
                seen[p as usize] += 1;
            }
            if block.verts.len() != block.kind.order() {
                continue;
            }
            for e in block.edge_iter() {
                if e.0 == e.1 {
                    continue;
                }
                if !target.contains(e.0, e.1) {
                    out.push(Violation::ForbiddenEdge {
                        edge: (e.0, e.1),
                        class: ci,
                    });
                    continue;
                }
                let idx = e.0 as usize * v + e.1 as usize;
                counts[idx] += 1;
                if counts[idx] == 1 {
                    first_class[idx] = ci;
                } else {
                    out.push(Violation::DuplicateEdge {
                        edge: (e.0, e.1),
                        multiplicity: counts[idx],
                        first_class: first_class[idx],
                        class: ci,
                    });
                }
            }
        }
        if scope_ok {
            for p in 0..v {
                let expected = match class.scope {
                    Scope::Full => 1,
                    Scope::PartialGroup(g) => u32::from(group_of[p] != Some(g)),
                    Scope::PartialHole => u32::from(!in_hole[p]),
                };
                if seen[p] != expected {
                    out.push(Violation::Coverage {
                        class: ci,
                        vertex: p as Vertex,
                        multiplicity: seen[p],
                        expected,
                    });
                }
            }
        }
    }

    for a in 0..v {
        for b in a + 1..v {
            if counts[a * v + b] == 0 && target.contains(a as Vertex, b as Vertex) {
                out.push(Violation::MissingEdge {
                    edge: (a as Vertex, b as Vertex),
                });
            }
        }
    }

    let fmt_counts = |p: Profile, c5: u32| {
        if c5 > 0 {
            format!("{p}+{c5}xC5")
        } else {
            p.to_string()
        }
    };
    if d.kind == DesignKind::Iurd {
        let full = tally(d.classes.iter().filter(|c| c.scope == Scope::Full));
        let partial = tally(d.classes.iter().filter(|c| c.scope != Scope::Full));
        if full.profile != d.profile || full.cycles != 0 {
            out.push(Violation::ProfileMismatch {
                part: "full".into(),
                claimed: d.profile.to_string(),
                actual: fmt_counts(full.profile, full.cycles),
            });
        }
        if Some(partial.profile) != d.partial_profile || partial.cycles != 0 {
            out.push(Violation::ProfileMismatch {
                part: "partial".into(),
                claimed: d
                    .partial_profile
                    .map_or_else(|| "nothing".to_string(), |p| p.to_string()),
                actual: fmt_counts(partial.profile, partial.cycles),
            });
        }
    } else {
        let all = tally(&d.classes);
        if all.profile != d.profile || all.cycles != d.cycles || d.partial_profile.is_some() {
            out.push(Violation::ProfileMismatch {
                part: "class".into(),
                claimed: fmt_counts(d.profile, d.cycles),
                actual: fmt_counts(all.profile, all.cycles),
            });
        }
    }

    if d.kind == DesignKind::Frame {
        for (g, group) in d.layout.groups.iter().enumerate() {
            let count = d
                .classes
                .iter()
                .filter(|c| c.scope == Scope::PartialGroup(g))
                .count();
            if count != group.len() {
                out.push(Violation::FrameMissCount {
                    group: g,
                    count,
                    expected: group.len(),
                });
            }
        }
    }
    Report { violations: out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GroupLayout, ResolutionClass};

    fn k4() -> Design {
        let m = |pairs: Vec<Vec<Vertex>>| {
            ResolutionClass::from_vertex_lists(BlockKind::P2, Scope::Full, pairs)
        };
        Design::new(
            DesignKind::Urd,
            4,
            GroupLayout::none(),
            vec![
                m(vec![vec![0, 1], vec![2, 3]]),
                m(vec![vec![0, 2], vec![1, 3]]),
                m(vec![vec![0, 3], vec![1, 2]]),
            ],
        )
    }

    #[test]
    fn counts_identity() {
        assert!(verify_counts(12, Profile::new(11, 0, 0)));
        assert!(verify_counts(12, Profile::new(2, 0, 6)));
        assert!(!verify_counts(12, Profile::new(3, 0, 5)));
    }

    #[test]
    fn k4_factorization_is_valid() {
        assert!(verify_design(&k4()).is_valid());
    }

    #[test]
    fn swapped_edge_reports_duplicate_and_missing() {
        let mut d = k4();
        d.classes[2].blocks[0].verts = vec![0, 1];
        d.classes[2].blocks[1].verts = vec![2, 3];
        let r = verify_design(&d);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DuplicateEdge { edge: (0, 1), .. })));
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::MissingEdge { edge: (0, 3) })));
    }

    #[test]
    fn shared_vertex_reports_coverage() {
        let mut d = k4();
        d.classes[0].blocks[1].verts = vec![1, 3];
        let r = verify_design(&d);
        assert!(r.violations.contains(&Violation::Coverage {
            class: 0,
            vertex: 1,
            multiplicity: 2,
            expected: 1
        }));
    }

    #[test]
    fn cycles_outside_ingredients_are_rejected() {
        let mut d = Design::new(
            DesignKind::Urd,
            5,
            GroupLayout::none(),
            vec![ResolutionClass::from_vertex_lists(
                BlockKind::C5,
                Scope::Full,
                vec![vec![0, 1, 2, 3, 4]],
            )],
        );
        d.classes.push(ResolutionClass::from_vertex_lists(
            BlockKind::C5,
            Scope::Full,
            vec![vec![0, 2, 4, 1, 3]],
        ));
        d.recount();
        let r = verify_design(&d);
        assert!(r
            .violations
            .iter()
            .all(|v| matches!(v, Violation::ForbiddenKind { .. })));
        assert_eq!(r.violations.len(), 2);
        d.kind = DesignKind::Ingredient;
        assert!(verify_design(&d).is_valid());
    }

    #[test]
    fn out_of_range_vertices_do_not_panic() {
        let mut d = k4();
        d.classes[1].blocks[0].verts = vec![0, 99];
        assert!(!verify_design(&d).is_valid());
        d.layout.hole = vec![7];
        assert!(!verify_design(&d).is_valid());
    }
}
