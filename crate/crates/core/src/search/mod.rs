//! Search oracle for the designs the constructions import rather than build.
//!
//! A [`SearchSpec`] names a target graph, a list of class requirements and an
//! optional cyclic symmetry. Two engines solve it: exact cover over all
//! candidate blocks ([`dlx`]) and simulated annealing over class arrangements
//! ([`anneal`]). Every result is re-verified before it is returned, and solved
//! specs are stored in a content-addressed [`cache`].

pub mod anneal;
pub mod cache;
pub mod catalog;
pub mod dlx;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::SearchError;
use crate::ingredients::Rgdd;
use crate::model::{
    BlockKind, BlownBase, Design, DesignKind, GroupLayout, ResolutionClass, Scope, Vertex,
};
use crate::par::Exec;
use crate::verify::verify_design;

/// Block shapes the engines place. `K3` is only used for triple systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shape {
    P2,
    P3,
    P4,
    C5,
    K3,
}

impl Shape {
    pub fn order(self) -> usize {
        match self {
            Shape::P2 => 2,
            Shape::P3 | Shape::K3 => 3,
            Shape::P4 => 4,
            Shape::C5 => 5,
        }
    }

    pub fn edge_positions(self) -> &'static [(usize, usize)] {
        match self {
            Shape::P2 => BlockKind::P2.edge_positions(),
            Shape::P3 => BlockKind::P3.edge_positions(),
            Shape::P4 => BlockKind::P4.edge_positions(),
            Shape::C5 => BlockKind::C5.edge_positions(),
            Shape::K3 => &[(0, 1), (1, 2), (0, 2)],
        }
    }

    pub fn block_kind(self) -> Option<BlockKind> {
        match self {
            Shape::P2 => Some(BlockKind::P2),
            Shape::P3 => Some(BlockKind::P3),
            Shape::P4 => Some(BlockKind::P4),
            Shape::C5 => Some(BlockKind::C5),
            Shape::K3 => None,
        }
    }

    /// Vertex orderings that describe the same block; used to avoid duplicate
    /// candidates in exact cover.
    fn is_canonical(self, verts: &[Vertex]) -> bool {
        match self {
            Shape::P2 | Shape::P3 | Shape::P4 => verts[0] < verts[verts.len() - 1],
            Shape::K3 => verts[0] < verts[1] && verts[1] < verts[2],
            Shape::C5 => verts[1..].iter().all(|&x| x > verts[0]) && verts[1] < verts[4],
        }
    }
}

/// The graph whose edges the blocks must partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "type")]
pub enum Context {
    Complete,
    Multipartite {
        groups: Vec<Vec<Vertex>>,
    },
    Blown {
        copies: usize,
        edges: Vec<(Vertex, Vertex)>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassScope {
    Full,
    MissingGroup(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReq {
    pub shape: Shape,
    pub scope: ClassScope,
    /// The class is invariant under `symmetry^step`; 0 means no constraint.
    #[serde(default)]
    pub step: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    Exact,
    Anneal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub restarts: u64,
    /// Annealing moves or exact-cover nodes per restart.
    pub steps: u64,
}

/// A search problem. `seed` and `budget` do not take part in the cache key.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub name: String,
    pub v: usize,
    pub context: Context,
    pub classes: Vec<ClassReq>,
    /// A permutation of `0..v` of order dividing `symmetry_order`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<Vec<Vertex>>,
    pub engine: Engine,
    pub seed: u64,
    pub budget: Budget,
}

/// What a search produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Design(Design),
    Rgdd(Rgdd),
}

impl Solution {
    pub fn into_design(self) -> Option<Design> {
        match self {
            Solution::Design(d) => Some(d),
            Solution::Rgdd(_) => None,
        }
    }

    pub fn into_rgdd(self) -> Option<Rgdd> {
        match self {
            Solution::Rgdd(r) => Some(r),
            Solution::Design(_) => None,
        }
    }
}

/// Edge-level description of a spec shared by both engines.
pub(crate) struct Problem {
    pub v: usize,
    pub allowed: Vec<bool>,
    /// Points each class must cover, in increasing order.
    pub class_points: Vec<Vec<Vertex>>,
}

impl SearchSpec {
    /// Hex digest of the canonical spec with seed and budget removed.
    pub fn key(&self) -> String {
        let mut keyed = self.clone();
        keyed.seed = 0;
        keyed.budget = Budget {
            restarts: 0,
            steps: 0,
        };
        let text = serde_json::to_string(&keyed).expect("spec serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    fn inconsistent(&self, detail: impl Into<String>) -> SearchError {
        SearchError::Inconsistent {
            name: self.name.clone(),
            detail: detail.into(),
        }
    }

    fn groups(&self) -> &[Vec<Vertex>] {
        match &self.context {
            Context::Multipartite { groups } => groups,
            _ => &[],
        }
    }

    /// Build the edge model and run the arithmetic pre-check: the classes
    /// together must hold exactly as many edges as the target graph.
    pub(crate) fn problem(&self) -> Result<Problem, SearchError> {
        let v = self.v;
        let mut allowed = vec![false; v * v];
        let mut set = |a: usize, b: usize| {
            allowed[a * v + b] = true;
            allowed[b * v + a] = true;
        };
        match &self.context {
            Context::Complete => {
                for a in 0..v {
                    for b in a + 1..v {
                        set(a, b);
                    }
                }
            }
            Context::Multipartite { groups } => {
                let mut owner = vec![usize::MAX; v];
                for (g, group) in groups.iter().enumerate() {
                    for &p in group {
                        let p = p as usize;
                        if p >= v || owner[p] != usize::MAX {
                            return Err(
                                self.inconsistent("groups are not disjoint subsets of the points")
                            );
                        }
                        owner[p] = g;
                    }
                }
                for a in 0..v {
                    for b in a + 1..v {
                        if owner[a] != owner[b] || owner[a] == usize::MAX {
                            set(a, b);
                        }
                    }
                }
            }
            Context::Blown { copies, edges } => {
                if *copies == 0 || !v.is_multiple_of(*copies) {
                    return Err(self.inconsistent("point count is not a multiple of the copies"));
                }
                for &(x, y) in edges {
                    for c in 0..*copies {
                        for d in 0..*copies {
                            let a = x as usize * copies + c;
                            let b = y as usize * copies + d;
                            if a >= v || b >= v || a == b {
                                return Err(self.inconsistent("base edge out of range"));
                            }
                            set(a, b);
                        }
                    }
                }
            }
        }
        let target_edges = allowed.iter().filter(|&&x| x).count() / 2;
        let mut class_points = Vec::with_capacity(self.classes.len());
        let mut total = 0;
        for (i, req) in self.classes.iter().enumerate() {
            let points: Vec<Vertex> = match req.scope {
                ClassScope::Full => (0..v as Vertex).collect(),
                ClassScope::MissingGroup(g) => {
                    let group = self.groups().get(g).ok_or_else(|| {
                        self.inconsistent(format!("class {i} misses unknown group {g}"))
                    })?;
                    (0..v as Vertex).filter(|p| !group.contains(p)).collect()
                }
            };
            let k = req.shape.order();
            if !points.len().is_multiple_of(k) {
                return Err(self.inconsistent(format!(
                    "class {i}: {} points cannot be split into blocks of {k}",
                    points.len()
                )));
            }
            total += points.len() / k * req.shape.edge_positions().len();
            class_points.push(points);
        }
        if total != target_edges {
            return Err(self.inconsistent(format!(
                "classes hold {total} edges but the target graph has {target_edges}"
            )));
        }
        if let Some(sigma) = &self.symmetry {
            let mut seen = vec![false; v];
            if sigma.len() != v
                || sigma
                    .iter()
                    .any(|&p| (p as usize) >= v || std::mem::replace(&mut seen[p as usize], true))
            {
                return Err(self.inconsistent("symmetry is not a permutation"));
            }
        } else if self.classes.iter().any(|c| c.step > 1) {
            return Err(self.inconsistent("class step given without a symmetry"));
        }
        Ok(Problem {
            v,
            allowed,
            class_points,
        })
    }

    /// Turn raw classes (one vertex list per block) into the output structure.
    pub(crate) fn assemble(&self, raw: Vec<Vec<Vec<Vertex>>>) -> Solution {
        let groups = self.groups().to_vec();
        if self.classes.iter().any(|c| c.shape == Shape::K3) {
            return Solution::Rgdd(Rgdd {
                k: 3,
                v: self.v,
                groups,
                classes: raw,
            });
        }
        let classes: Vec<ResolutionClass> = self
            .classes
            .iter()
            .zip(raw)
            .map(|(req, blocks)| {
                let scope = match req.scope {
                    ClassScope::Full => Scope::Full,
                    ClassScope::MissingGroup(g) => Scope::PartialGroup(g),
                };
                ResolutionClass::from_vertex_lists(
                    req.shape.block_kind().expect("path or cycle"),
                    scope,
                    blocks,
                )
            })
            .collect();
        let partial = self.classes.iter().any(|c| c.scope != ClassScope::Full);
        let cycles = self.classes.iter().any(|c| c.shape == Shape::C5);
        let (kind, base) = match &self.context {
            Context::Blown { copies, edges } => (
                DesignKind::Ingredient,
                Some(BlownBase {
                    copies: *copies,
                    edges: edges.clone(),
                }),
            ),
            _ if cycles => (DesignKind::Ingredient, None),
            Context::Complete => (DesignKind::Urd, None),
            Context::Multipartite { .. } if partial => (DesignKind::Frame, None),
            Context::Multipartite { .. } => (DesignKind::Urgdd, None),
        };
        let mut design = Design::new(
            kind,
            self.v,
            GroupLayout {
                groups,
                hole: Vec::new(),
            },
            classes,
        );
        design.base = base;
        design.canonicalize();
        Solution::Design(design)
    }

    /// Check a candidate solution against this spec.
    pub fn check(&self, solution: &Solution) -> Result<(), String> {
        match solution {
            Solution::Design(d) => {
                let report = verify_design(d);
                if !report.is_valid() {
                    return Err(report.summary(5));
                }
                if d.v != self.v || d.classes.len() != self.classes.len() {
                    return Err("solution does not match the spec's size".into());
                }
                let mut want: Vec<(Option<BlockKind>, ClassScope)> = self
                    .classes
                    .iter()
                    .map(|c| (c.shape.block_kind(), c.scope))
                    .collect();
                let mut have: Vec<(Option<BlockKind>, ClassScope)> = d
                    .classes
                    .iter()
                    .map(|c| {
                        let scope = match c.scope {
                            Scope::PartialGroup(g) => ClassScope::MissingGroup(g),
                            _ => ClassScope::Full,
                        };
                        (Some(c.kind), scope)
                    })
                    .collect();
                let key = |x: &(Option<BlockKind>, ClassScope)| {
                    (
                        x.0,
                        match x.1 {
                            ClassScope::Full => usize::MAX,
                            ClassScope::MissingGroup(g) => g,
                        },
                    )
                };
                want.sort_by_key(key);
                have.sort_by_key(key);
                if want != have {
                    return Err("class kinds or scopes differ from the spec".into());
                }
                if self.groups() != d.layout.groups.as_slice()
                    && !matches!(self.context, Context::Complete | Context::Blown { .. })
                {
                    return Err("groups differ from the spec".into());
                }
                Ok(())
            }
            Solution::Rgdd(r) => {
                if r.v != self.v
                    || r.classes.len() != self.classes.len()
                    || r.groups != self.groups()
                {
                    return Err("solution does not match the spec's size".into());
                }
                r.verify()
            }
        }
    }
}

/// Solve a spec, returning a verified solution or a budget-exhausted error.
pub fn solve(spec: &SearchSpec, exec: Exec) -> Result<Solution, SearchError> {
    let problem = spec.problem()?;
    let raw = match spec.engine {
        Engine::Exact => dlx::solve(spec, &problem, exec),
        Engine::Anneal => anneal::solve(spec, &problem, exec)?,
    };
    let raw = raw.ok_or_else(|| SearchError::Exhausted {
        name: spec.name.clone(),
        detail: format!(
            "{} restarts of {} steps, seed {}",
            spec.budget.restarts, spec.budget.steps, spec.seed
        ),
    })?;
    let solution = spec.assemble(raw);
    spec.check(&solution)
        .map_err(|detail| SearchError::Inconsistent {
            name: spec.name.clone(),
            detail: format!("engine returned an invalid solution: {detail}"),
        })?;
    Ok(solution)
}

/// Per-restart seed derived from the master seed.
pub(crate) fn restart_seed(seed: u64, restart: u64) -> u64 {
    seed ^ restart.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}
