//! Vertices, blocks, resolution classes and designs.
//!
//! Vertices are dense indices `0..v`. Blocks keep their vertex order (paths
//! are stored as sequences) and are canonicalized on serialization so that
//! certificates are byte-stable.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::Profile;

pub type Vertex = u32;

/// Shape of a block: a path on 2, 3 or 4 vertices, or a 5-cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BlockKind {
    P2,
    P3,
    P4,
    C5,
}

impl BlockKind {
    pub const ALL: [BlockKind; 4] = [BlockKind::P2, BlockKind::P3, BlockKind::P4, BlockKind::C5];

    /// Number of vertices.
    pub const fn order(self) -> usize {
        match self {
            BlockKind::P2 => 2,
            BlockKind::P3 => 3,
            BlockKind::P4 => 4,
            BlockKind::C5 => 5,
        }
    }

    pub const fn edge_count(self) -> usize {
        match self {
            BlockKind::P2 => 1,
            BlockKind::P3 => 2,
            BlockKind::P4 => 3,
            BlockKind::C5 => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BlockKind::P2 => "P2",
            BlockKind::P3 => "P3",
            BlockKind::P4 => "P4",
            BlockKind::C5 => "C5",
        }
    }

    pub fn parse(name: &str) -> Option<BlockKind> {
        BlockKind::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Position pairs joined by an edge, in block order.
    pub fn edge_positions(self) -> &'static [(usize, usize)] {
        match self {
            BlockKind::P2 => &[(0, 1)],
            BlockKind::P3 => &[(0, 1), (1, 2)],
            BlockKind::P4 => &[(0, 1), (1, 2), (2, 3)],
            BlockKind::C5 => &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)],
        }
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An unordered vertex pair, stored low id first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(pub Vertex, pub Vertex);

impl Edge {
    pub fn new(a: Vertex, b: Vertex) -> Edge {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.0, self.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub kind: BlockKind,
    pub verts: Vec<Vertex>,
}

impl Block {
    /// A checked block: right length, distinct vertices.
    pub fn new(kind: BlockKind, verts: Vec<Vertex>) -> Result<Block> {
        let block = Block { kind, verts };
        block.check()?;
        Ok(block)
    }

    pub fn check(&self) -> Result<()> {
        if self.verts.len() != self.kind.order() {
            return Err(Error::Structural(format!(
                "{} block {:?} has {} vertices",
                self.kind,
                self.verts,
                self.verts.len()
            )));
        }
        for (i, a) in self.verts.iter().enumerate() {
            if self.verts[i + 1..].contains(a) {
                return Err(Error::Structural(format!(
                    "{} block {:?} repeats vertex {a}",
                    self.kind, self.verts
                )));
            }
        }
        Ok(())
    }

    /// Edges without the well-formedness check.
    pub fn edge_iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.kind
            .edge_positions()
            .iter()
            .filter(|&&(i, j)| i < self.verts.len() && j < self.verts.len())
            .map(|&(i, j)| Edge::new(self.verts[i], self.verts[j]))
    }

    /// Orientation used in certificates: paths start at the smaller end,
    /// cycles start at their minimum and continue towards the smaller neighbour.
    pub fn canonical(&self) -> Block {
        let mut verts = self.verts.clone();
        match self.kind {
            BlockKind::C5 if !verts.is_empty() => {
                let n = verts.len();
                let (pos, _) = verts
                    .iter()
                    .enumerate()
                    .min_by_key(|&(_, v)| *v)
                    .expect("non-empty");
                verts.rotate_left(pos);
                if n > 2 && verts[n - 1] < verts[1] {
                    verts[1..].reverse();
                }
            }
            _ => {
                if verts.len() >= 2 && verts[verts.len() - 1] < verts[0] {
                    verts.reverse();
                }
            }
        }
        Block {
            kind: self.kind,
            verts,
        }
    }
}

/// Edge set of a block: `k-1` pairs for `P_k`, five for `C5`.
pub fn edges_of(block: &Block) -> Result<Vec<Edge>> {
    block.check()?;
    Ok(block.edge_iter().collect())
}

/// Which points a class must cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scope {
    Full,
    /// Every point except those of the given group.
    PartialGroup(usize),
    /// Every point except the hole.
    PartialHole,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionClass {
    pub kind: BlockKind,
    pub scope: Scope,
    pub blocks: Vec<Block>,
}

impl ResolutionClass {
    pub fn full(kind: BlockKind, blocks: Vec<Block>) -> Self {
        ResolutionClass {
            kind,
            scope: Scope::Full,
            blocks,
        }
    }

    /// Build a class from raw vertex sequences.
    pub fn from_vertex_lists(kind: BlockKind, scope: Scope, lists: Vec<Vec<Vertex>>) -> Self {
        ResolutionClass {
            kind,
            scope,
            blocks: lists
                .into_iter()
                .map(|verts| Block { kind, verts })
                .collect(),
        }
    }
}

/// Groups (for multipartite contexts) and an optional hole.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupLayout {
    pub groups: Vec<Vec<Vertex>>,
    pub hole: Vec<Vertex>,
}

impl GroupLayout {
    pub fn none() -> Self {
        GroupLayout::default()
    }

    /// `u` consecutive groups of size `g`: group `i` is `i*g .. (i+1)*g`.
    pub fn uniform(g: usize, u: usize) -> Self {
        GroupLayout {
            groups: (0..u)
                .map(|i| ((i * g) as Vertex..((i + 1) * g) as Vertex).collect())
                .collect(),
            hole: Vec::new(),
        }
    }

    pub fn with_hole(hole: Vec<Vertex>) -> Self {
        GroupLayout {
            groups: Vec::new(),
            hole,
        }
    }

    /// Group index of every point, `None` outside all groups.
    pub fn group_index(&self, v: usize) -> Vec<Option<usize>> {
        let mut index = vec![None; v];
        for (g, group) in self.groups.iter().enumerate() {
            for &p in group {
                if (p as usize) < v {
                    index[p as usize] = Some(g);
                }
            }
        }
        index
    }
}

/// The family a certificate belongs to; fixes the target edge set and the
/// profile counting convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DesignKind {
    /// Resolvable decomposition of `K_v`.
    Urd,
    /// Uniformly resolvable group divisible design.
    Urgdd,
    /// `K_v` minus the complete graph on the hole, with full and partial classes.
    Iurd,
    /// Partial classes each missing one group.
    Frame,
    /// Building block for the recursions; may contain 5-cycles or live on a blown graph.
    Ingredient,
}

impl DesignKind {
    pub fn name(self) -> &'static str {
        match self {
            DesignKind::Urd => "urd",
            DesignKind::Urgdd => "urgdd",
            DesignKind::Iurd => "iurd",
            DesignKind::Frame => "frame",
            DesignKind::Ingredient => "ingredient",
        }
    }

    pub fn parse(name: &str) -> Option<DesignKind> {
        [
            DesignKind::Urd,
            DesignKind::Urgdd,
            DesignKind::Iurd,
            DesignKind::Frame,
            DesignKind::Ingredient,
        ]
        .into_iter()
        .find(|k| k.name() == name)
    }
}

/// The graph `G_(n)`: `copies` copies of each point of `G`, with every copy of
/// `x` joined to every copy of `y` for each edge `{x, y}` of `G`. Point `(p, c)`
/// is vertex `p * copies + c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlownBase {
    pub copies: usize,
    pub edges: Vec<(Vertex, Vertex)>,
}

/// A design certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Design {
    pub kind: DesignKind,
    pub v: usize,
    pub layout: GroupLayout,
    pub classes: Vec<ResolutionClass>,
    /// Claimed class counts; for an IURD these are the full classes.
    pub profile: Profile,
    /// Claimed partial (hole-missing) class counts of an IURD.
    pub partial_profile: Option<Profile>,
    /// Claimed number of 5-cycle classes (ingredients only).
    pub cycles: u32,
    pub base: Option<BlownBase>,
}

/// Counts of classes per block kind.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct KindTally {
    pub profile: Profile,
    pub cycles: u32,
}

pub fn tally<'a>(classes: impl IntoIterator<Item = &'a ResolutionClass>) -> KindTally {
    let mut out = KindTally::default();
    for class in classes {
        match class.kind {
            BlockKind::P2 => out.profile.r += 1,
            BlockKind::P3 => out.profile.s += 1,
            BlockKind::P4 => out.profile.t += 1,
            BlockKind::C5 => out.cycles += 1,
        }
    }
    out
}

impl Design {
    /// A design whose claimed profile is read off its own classes.
    pub fn new(
        kind: DesignKind,
        v: usize,
        layout: GroupLayout,
        classes: Vec<ResolutionClass>,
    ) -> Design {
        let mut design = Design {
            kind,
            v,
            layout,
            classes,
            profile: Profile::ZERO,
            partial_profile: None,
            cycles: 0,
            base: None,
        };
        design.recount();
        design
    }

    /// Reset the claimed counts to what the classes actually contain.
    pub fn recount(&mut self) {
        if self.kind == DesignKind::Iurd {
            let full = tally(self.classes.iter().filter(|c| c.scope == Scope::Full));
            let partial = tally(self.classes.iter().filter(|c| c.scope != Scope::Full));
            self.profile = full.profile;
            self.partial_profile = Some(partial.profile);
            self.cycles = full.cycles + partial.cycles;
        } else {
            let all = tally(&self.classes);
            self.profile = all.profile;
            self.cycles = all.cycles;
        }
    }

    /// Number of edges the blocks are supposed to partition.
    pub fn target_edge_count(&self) -> usize {
        let pairs = |n: usize| n * n.saturating_sub(1) / 2;
        if let Some(base) = &self.base {
            return base.edges.len() * base.copies * base.copies;
        }
        match self.kind {
            DesignKind::Iurd => pairs(self.v) - pairs(self.layout.hole.len()),
            _ if !self.layout.groups.is_empty() => {
                pairs(self.v)
                    - self
                        .layout
                        .groups
                        .iter()
                        .map(|g| pairs(g.len()))
                        .sum::<usize>()
            }
            _ => pairs(self.v),
        }
    }

    /// Membership test for the target edge set.
    pub fn target(&self) -> TargetGraph {
        TargetGraph::of(self)
    }

    /// Copy with every block canonically oriented, blocks sorted by first
    /// vertex, and classes stably sorted by kind.
    pub fn canonical(&self) -> Design {
        let mut out = self.clone();
        out.canonicalize();
        out
    }

    pub fn canonicalize(&mut self) {
        for group in &mut self.layout.groups {
            group.sort_unstable();
        }
        self.layout.hole.sort_unstable();
        for class in &mut self.classes {
            for block in &mut class.blocks {
                *block = block.canonical();
            }
            class.blocks.sort_by(|a, b| a.verts.cmp(&b.verts));
        }
        self.classes.sort_by_key(|c| c.kind);
    }

    /// Canonical certificate text (single line, ASCII).
    pub fn to_json(&self) -> String {
        serde_json::to_string(&CertificateDoc::from(&self.canonical()))
            .expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Design> {
        let doc: CertificateDoc = serde_json::from_str(text)?;
        doc.try_into()
    }

    /// All block edges in class order, duplicates kept.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.classes
            .iter()
            .flat_map(|c| c.blocks.iter())
            .flat_map(|b| b.edge_iter())
    }
}

/// Target edge set of a design as a constant-time membership test.
pub struct TargetGraph {
    v: usize,
    rule: TargetRule,
}

enum TargetRule {
    Complete,
    Multipartite(Vec<Option<usize>>),
    Holed(Vec<bool>),
    Blown {
        copies: usize,
        adjacent: Vec<bool>,
        base_v: usize,
    },
}

impl TargetGraph {
    pub fn of(design: &Design) -> TargetGraph {
        let v = design.v;
        let rule = if let Some(base) = &design.base {
            let copies = base.copies.max(1);
            let base_v = v / copies;
            let mut adjacent = vec![false; base_v * base_v];
            for &(a, b) in &base.edges {
                let (a, b) = (a as usize, b as usize);
                if a < base_v && b < base_v && a != b {
                    adjacent[a * base_v + b] = true;
                    adjacent[b * base_v + a] = true;
                }
            }
            TargetRule::Blown {
                copies,
                adjacent,
                base_v,
            }
        } else if design.kind == DesignKind::Iurd {
            let mut in_hole = vec![false; v];
            for &p in &design.layout.hole {
                if (p as usize) < v {
                    in_hole[p as usize] = true;
                }
            }
            TargetRule::Holed(in_hole)
        } else if !design.layout.groups.is_empty() {
            TargetRule::Multipartite(design.layout.group_index(v))
        } else {
            TargetRule::Complete
        };
        TargetGraph { v, rule }
    }

    pub fn contains(&self, a: Vertex, b: Vertex) -> bool {
        let (a, b) = (a as usize, b as usize);
        if a == b || a >= self.v || b >= self.v {
            return false;
        }
        match &self.rule {
            TargetRule::Complete => true,
            TargetRule::Multipartite(index) => match (index[a], index[b]) {
                (Some(x), Some(y)) => x != y,
                _ => true,
            },
            TargetRule::Holed(in_hole) => !(in_hole[a] && in_hole[b]),
            TargetRule::Blown {
                copies,
                adjacent,
                base_v,
            } => {
                let (p, q) = (a / copies, b / copies);
                p < *base_v && q < *base_v && adjacent[p * base_v + q]
            }
        }
    }
}

/// A resolvable structure with arbitrary blocks (edges, triples, cycles):
/// the input to [`blow_up_skeleton`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub v: usize,
    pub groups: Vec<Vec<Vertex>>,
    pub classes: Vec<Vec<Vec<Vertex>>>,
}

impl From<&Design> for Skeleton {
    fn from(design: &Design) -> Skeleton {
        Skeleton {
            v: design.v,
            groups: design.layout.groups.clone(),
            classes: design
                .classes
                .iter()
                .map(|c| c.blocks.iter().map(|b| b.verts.clone()).collect())
                .collect(),
        }
    }
}

/// Map a piece vertex to `(group index, position inside the group)`.
fn piece_coordinates(piece: &Design) -> Vec<(usize, usize)> {
    let mut coords = vec![(usize::MAX, usize::MAX); piece.v];
    for (g, group) in piece.layout.groups.iter().enumerate() {
        for (c, &p) in group.iter().enumerate() {
            coords[p as usize] = (g, c);
        }
    }
    coords
}

/// Blow up every point into `n` copies and replace every block `b` by a piece
/// living on `b × {0..n-1}`.
///
/// The piece for a block with `k` vertices must have `k` groups of size `n`;
/// piece group `g` is mapped onto the copies of the block's `g`-th vertex, so
/// point `(p, c)` becomes `p * n + c`. Pieces placed on blocks of one class must
/// share their sequence of class kinds; class `j` of the output for skeleton
/// class `i` is the union of the mapped `j`-th piece classes.
pub fn blow_up_skeleton<'a, F>(skeleton: &Skeleton, n: usize, mut piece_for: F) -> Result<Design>
where
    F: FnMut(usize, &[Vertex]) -> &'a Design,
{
    if n == 0 {
        return Err(Error::Composition("blow-up factor must be positive".into()));
    }
    let v = skeleton.v * n;
    let mut classes = Vec::new();
    let mut total = KindTally::default();
    for (ci, class) in skeleton.classes.iter().enumerate() {
        let mut united: Vec<ResolutionClass> = Vec::new();
        for block in class {
            let piece = piece_for(ci, block);
            if piece.layout.groups.len() != block.len()
                || piece.layout.groups.iter().any(|g| g.len() != n)
                || piece.v != block.len() * n
            {
                return Err(Error::Composition(format!(
                    "piece on {} points with {} groups cannot replace a {}-vertex block at blow-up factor {n}",
                    piece.v,
                    piece.layout.groups.len(),
                    block.len()
                )));
            }
            if united.is_empty() {
                united = piece
                    .classes
                    .iter()
                    .map(|pc| ResolutionClass::full(pc.kind, Vec::new()))
                    .collect();
                let t = tally(&piece.classes);
                total.profile = total.profile + t.profile;
                total.cycles += t.cycles;
            } else if united.len() != piece.classes.len()
                || united
                    .iter()
                    .zip(&piece.classes)
                    .any(|(u, pc)| u.kind != pc.kind)
            {
                return Err(Error::Composition(format!(
                    "pieces inside skeleton class {ci} disagree on their class structure"
                )));
            }
            if piece.classes.iter().any(|pc| pc.scope != Scope::Full) {
                return Err(Error::Composition(
                    "pieces must consist of full classes".into(),
                ));
            }
            let coords = piece_coordinates(piece);
            for (target, pc) in united.iter_mut().zip(&piece.classes) {
                for b in &pc.blocks {
                    let verts = b
                        .verts
                        .iter()
                        .map(|&q| {
                            let (g, c) = coords[q as usize];
                            block[g] * n as Vertex + c as Vertex
                        })
                        .collect();
                    target.blocks.push(Block {
                        kind: b.kind,
                        verts,
                    });
                }
            }
        }
        classes.extend(united);
    }
    let groups: Vec<Vec<Vertex>> = if skeleton.groups.is_empty() {
        (0..skeleton.v)
            .map(|p| (0..n).map(|c| (p * n + c) as Vertex).collect())
            .collect()
    } else {
        skeleton
            .groups
            .iter()
            .map(|g| {
                let mut blown: Vec<Vertex> = g
                    .iter()
                    .flat_map(|&p| (0..n).map(move |c| p * n as Vertex + c as Vertex))
                    .collect();
                blown.sort_unstable();
                blown
            })
            .collect()
    };
    let kind = if total.cycles > 0 {
        DesignKind::Ingredient
    } else {
        DesignKind::Urgdd
    };
    Ok(Design {
        kind,
        v,
        layout: GroupLayout {
            groups,
            hole: Vec::new(),
        },
        classes,
        profile: total.profile,
        partial_profile: None,
        cycles: total.cycles,
        base: None,
    })
}

/// [`blow_up_skeleton`] applied to a design made of full classes.
pub fn blow_up<'a, F>(design: &Design, n: usize, mut piece_for: F) -> Result<Design>
where
    F: FnMut(usize, &Block) -> &'a Design,
{
    if design.classes.iter().any(|c| c.scope != Scope::Full) {
        return Err(Error::Composition(
            "only designs of full classes can be blown up".into(),
        ));
    }
    let skeleton = Skeleton::from(design);
    blow_up_skeleton(&skeleton, n, |ci, verts| {
        let block = design.classes[ci]
            .blocks
            .iter()
            .find(|b| b.verts == verts)
            .expect("skeleton mirrors the design");
        piece_for(ci, block)
    })
}

/// Apply a bijection of `0..v` to every vertex, the groups and the hole.
pub fn relabel(design: &Design, permutation: &[Vertex]) -> Result<Design> {
    let v = design.v;
    if permutation.len() != v {
        return Err(Error::Structural(format!(
            "permutation has {} entries for {v} points",
            permutation.len()
        )));
    }
    let mut seen = vec![false; v];
    for &p in permutation {
        let p = p as usize;
        if p >= v || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Structural(
                "relabeling map is not a bijection".into(),
            ));
        }
    }
    if design.base.is_some()
        && permutation
            .iter()
            .enumerate()
            .any(|(i, &p)| i as Vertex != p)
    {
        return Err(Error::Structural(
            "designs on a blown graph are labelled by (point, copy) and cannot be relabelled"
                .into(),
        ));
    }
    let map = |p: Vertex| -> Vertex { permutation.get(p as usize).copied().unwrap_or(p) };
    let mut out = design.clone();
    for group in &mut out.layout.groups {
        for p in group.iter_mut() {
            *p = map(*p);
        }
    }
    for p in &mut out.layout.hole {
        *p = map(*p);
    }
    for class in &mut out.classes {
        for block in &mut class.blocks {
            for p in &mut block.verts {
                *p = map(*p);
            }
        }
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct ProfileDoc {
    r: u32,
    s: u32,
    t: u32,
    #[serde(default, skip_serializing_if = "is_zero")]
    c5: u32,
}

fn is_zero(x: &u32) -> bool {
    *x == 0
}

#[derive(Serialize, Deserialize)]
struct ClassDoc {
    block_kind: String,
    scope: String,
    missing_group: Option<usize>,
    blocks: Vec<Vec<Vertex>>,
}

#[derive(Serialize, Deserialize)]
struct CertificateDoc {
    kind: String,
    v: usize,
    groups: Vec<Vec<Vertex>>,
    hole: Vec<Vertex>,
    profile: ProfileDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    partial_profile: Option<Profile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base: Option<BlownBase>,
    classes: Vec<ClassDoc>,
}

impl From<&Design> for CertificateDoc {
    fn from(d: &Design) -> Self {
        CertificateDoc {
            kind: d.kind.name().to_string(),
            v: d.v,
            groups: d.layout.groups.clone(),
            hole: d.layout.hole.clone(),
            profile: ProfileDoc {
                r: d.profile.r,
                s: d.profile.s,
                t: d.profile.t,
                c5: d.cycles,
            },
            partial_profile: d.partial_profile,
            base: d.base.clone(),
            classes: d
                .classes
                .iter()
                .map(|c| {
                    let (scope, missing_group) = match c.scope {
                        Scope::Full => ("full", None),
                        Scope::PartialGroup(g) => ("partial-group", Some(g)),
                        Scope::PartialHole => ("partial-hole", None),
                    };
                    ClassDoc {
                        block_kind: c.kind.name().to_string(),
                        scope: scope.to_string(),
                        missing_group,
                        blocks: c.blocks.iter().map(|b| b.verts.clone()).collect(),
                    }
                })
                .collect(),
        }
    }
}

impl TryFrom<CertificateDoc> for Design {
    type Error = Error;

    fn try_from(doc: CertificateDoc) -> Result<Design> {
        let kind = DesignKind::parse(&doc.kind)
            .ok_or_else(|| Error::Structural(format!("unknown design kind {:?}", doc.kind)))?;
        let mut classes = Vec::with_capacity(doc.classes.len());
        for (i, c) in doc.classes.into_iter().enumerate() {
            let block_kind = BlockKind::parse(&c.block_kind).ok_or_else(|| {
                Error::Structural(format!("class {i}: unknown block kind {:?}", c.block_kind))
            })?;
            let scope = match (c.scope.as_str(), c.missing_group) {
                ("full", _) => Scope::Full,
                ("partial-group", Some(g)) => Scope::PartialGroup(g),
                ("partial-group", None) => {
                    return Err(Error::Structural(format!(
                        "class {i}: partial-group scope without missing_group"
                    )))
                }
                ("partial-hole", _) => Scope::PartialHole,
                (other, _) => {
                    return Err(Error::Structural(format!(
                        "class {i}: unknown scope {other:?}"
                    )))
                }
            };
            classes.push(ResolutionClass::from_vertex_lists(
                block_kind, scope, c.blocks,
            ));
        }
        Ok(Design {
            kind,
            v: doc.v,
            layout: GroupLayout {
                groups: doc.groups,
                hole: doc.hole,
            },
            classes,
            profile: Profile::new(doc.profile.r, doc.profile.s, doc.profile.t),
            partial_profile: doc.partial_profile,
            cycles: doc.profile.c5,
            base: doc.base,
        })
    }
}

/// Group the classes of a design by kind, preserving order.
pub fn classes_by_kind(classes: &[ResolutionClass]) -> BTreeMap<BlockKind, Vec<&ResolutionClass>> {
    let mut out: BTreeMap<BlockKind, Vec<&ResolutionClass>> = BTreeMap::new();
    for c in classes {
        out.entry(c.kind).or_default().push(c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block(kind: BlockKind, verts: &[Vertex]) -> Block {
        Block::new(kind, verts.to_vec()).unwrap()
    }

    #[test]
    fn edges_of_paths_and_cycles() {
        let e = edges_of(&block(BlockKind::P3, &[0, 1, 2])).unwrap();
        assert_eq!(e, vec![Edge(0, 1), Edge(1, 2)]);
        let e = edges_of(&block(BlockKind::P4, &[5, 3, 2, 7])).unwrap();
        assert_eq!(e, vec![Edge(3, 5), Edge(2, 3), Edge(2, 7)]);
        let e = edges_of(&block(BlockKind::C5, &[0, 2, 4, 6, 8])).unwrap();
        assert_eq!(
            e,
            vec![Edge(0, 2), Edge(2, 4), Edge(4, 6), Edge(6, 8), Edge(0, 8)]
        );
    }

    #[test]
    fn malformed_blocks_are_structural_errors() {
        assert!(Block::new(BlockKind::P3, vec![0, 1]).is_err());
        assert!(Block::new(BlockKind::P4, vec![0, 1, 0, 2]).is_err());
        let bad = Block {
            kind: BlockKind::P2,
            verts: vec![3, 3],
        };
        assert!(edges_of(&bad).is_err());
    }

    #[test]
    fn canonical_orientation() {
        assert_eq!(
            block(BlockKind::P4, &[7, 1, 2, 3]).canonical().verts,
            vec![3, 2, 1, 7]
        );
        assert_eq!(
            block(BlockKind::P3, &[1, 9, 4]).canonical().verts,
            vec![1, 9, 4]
        );
        assert_eq!(
            block(BlockKind::C5, &[4, 8, 0, 2, 6]).canonical().verts,
            vec![0, 2, 6, 4, 8]
        );
        assert_eq!(
            block(BlockKind::C5, &[0, 8, 6, 4, 2]).canonical().verts,
            vec![0, 2, 4, 6, 8]
        );
    }

    #[test]
    fn smallest_blow_up_is_a_k22_factorization() {
        let edge = Design::new(
            DesignKind::Urd,
            2,
            GroupLayout::none(),
            vec![ResolutionClass::from_vertex_lists(
                BlockKind::P2,
                Scope::Full,
                vec![vec![0, 1]],
            )],
        );
        let piece = Design::new(
            DesignKind::Urgdd,
            4,
            GroupLayout::uniform(2, 2),
            vec![
                ResolutionClass::from_vertex_lists(
                    BlockKind::P2,
                    Scope::Full,
                    vec![vec![0, 2], vec![1, 3]],
                ),
                ResolutionClass::from_vertex_lists(
                    BlockKind::P2,
                    Scope::Full,
                    vec![vec![0, 3], vec![1, 2]],
                ),
            ],
        );
        let blown = blow_up(&edge, 2, |_, _| &piece).unwrap();
        assert_eq!(blown.v, 4);
        assert_eq!(blown.classes.len(), 2);
        assert_eq!(blown.profile, Profile::new(2, 0, 0));
        assert_eq!(blown.layout.groups, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(blown.edges().count(), 4);
    }

    #[test]
    fn relabel_rejects_non_bijections() {
        let d = Design::new(DesignKind::Urd, 3, GroupLayout::none(), Vec::new());
        assert!(relabel(&d, &[0, 0, 1]).is_err());
        assert!(relabel(&d, &[0, 1]).is_err());
        assert_eq!(relabel(&d, &[0, 1, 2]).unwrap(), d);
    }

    #[test]
    fn certificate_field_order() {
        let d = Design::new(
            DesignKind::Urd,
            2,
            GroupLayout::none(),
            vec![ResolutionClass::from_vertex_lists(
                BlockKind::P2,
                Scope::Full,
                vec![vec![1, 0]],
            )],
        );
        assert_eq!(
            d.to_json(),
            r#"{"kind":"urd","v":2,"groups":[],"hole":[],"profile":{"r":1,"s":0,"t":0},"classes":[{"block_kind":"P2","scope":"full","missing_group":null,"blocks":[[0,1]]}]}"#
        );
        assert_eq!(Design::from_json(&d.to_json()).unwrap(), d.canonical());
    }
}
