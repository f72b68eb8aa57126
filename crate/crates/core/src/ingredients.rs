//! Classical resolvable structures consumed by the recursions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, SpectrumError};
use crate::model::{
    relabel, BlockKind, Design, DesignKind, GroupLayout, ResolutionClass, Scope, Skeleton, Vertex,
};
use crate::search::{cache, catalog};
use crate::verify::verify_design;

fn domain(msg: impl Into<String>) -> Error {
    SpectrumError::Domain(msg.into()).into()
}

/// Resolvable group divisible design with blocks of size `k` (edges or triples).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rgdd {
    pub k: usize,
    pub v: usize,
    pub groups: Vec<Vec<Vertex>>,
    pub classes: Vec<Vec<Vec<Vertex>>>,
}

#[derive(Serialize, Deserialize)]
struct RgddDoc {
    kind: String,
    k: usize,
    v: usize,
    groups: Vec<Vec<Vertex>>,
    classes: Vec<Vec<Vec<Vertex>>>,
}

impl Rgdd {
    /// Blocks have size `k` and meet each group at most once; classes are
    /// parallel; every pair from distinct groups lies in exactly one block;
    /// there are `g(u-1)/(k-1)` classes.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let v = self.v;
        let mut group_of = vec![usize::MAX; v];
        for (g, group) in self.groups.iter().enumerate() {
            for &p in group {
                if p as usize >= v || group_of[p as usize] != usize::MAX {
                    return Err(format!(
                        "group {g} is not disjoint from the others or out of range"
                    ));
                }
                group_of[p as usize] = g;
            }
        }
        if group_of.contains(&usize::MAX) {
            return Err("groups do not cover the points".into());
        }
        let g = self.groups[0].len();
        if self.groups.iter().any(|x| x.len() != g) || self.k < 2 {
            return Err("groups of unequal size".into());
        }
        let expected = g * (self.groups.len() - 1) / (self.k - 1);
        if self.classes.len() != expected {
            return Err(format!(
                "{} classes, expected {expected}",
                self.classes.len()
            ));
        }
        let mut pair = vec![0u32; v * v];
        for (ci, class) in self.classes.iter().enumerate() {
            let mut seen = vec![false; v];
            for block in class {
                if block.len() != self.k {
                    return Err(format!("class {ci}: block {block:?} has the wrong size"));
                }
                for (i, &a) in block.iter().enumerate() {
                    if a as usize >= v || std::mem::replace(&mut seen[a as usize], true) {
                        return Err(format!("class {ci}: point {a} repeated or out of range"));
                    }
                    for &b in &block[..i] {
                        if group_of[a as usize] == group_of[b as usize] {
                            return Err(format!("class {ci}: block {block:?} meets a group twice"));
                        }
                        pair[a as usize * v + b as usize] += 1;
                        pair[b as usize * v + a as usize] += 1;
                    }
                }
            }
            if seen.contains(&false) {
                return Err(format!("class {ci} is not parallel"));
            }
        }
        for a in 0..v {
            for b in a + 1..v {
                let want = u32::from(group_of[a] != group_of[b]);
                if pair[a * v + b] != want {
                    return Err(format!(
                        "pair {{{a},{b}}} lies in {} blocks",
                        pair[a * v + b]
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut classes = self.classes.clone();
        for class in &mut classes {
            for block in class.iter_mut() {
                block.sort_unstable();
            }
            class.sort();
        }
        serde_json::to_string(&RgddDoc {
            kind: "rgdd".into(),
            k: self.k,
            v: self.v,
            groups: self.groups.clone(),
            classes,
        })
        .expect("rgdd serializes")
    }

    pub fn from_json(text: &str) -> Result<Rgdd> {
        let doc: RgddDoc = serde_json::from_str(text)?;
        if doc.kind != "rgdd" {
            return Err(Error::Structural(format!(
                "expected an rgdd document, found {:?}",
                doc.kind
            )));
        }
        Ok(Rgdd {
            k: doc.k,
            v: doc.v,
            groups: doc.groups,
            classes: doc.classes,
        })
    }

    pub fn skeleton(&self) -> Skeleton {
        Skeleton {
            v: self.v,
            groups: self.groups.clone(),
            classes: self.classes.clone(),
        }
    }
}

fn matching_class(pairs: impl IntoIterator<Item = (Vertex, Vertex)>) -> ResolutionClass {
    ResolutionClass::from_vertex_lists(
        BlockKind::P2,
        Scope::Full,
        pairs.into_iter().map(|(a, b)| vec![a, b]).collect(),
    )
}

/// Circle method: vertex `n-1` is fixed, class `i` pairs it with `i` and
/// joins `i+j` to `i-j` modulo `n-1`.
pub fn one_factorization(n: usize) -> Result<Design> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(domain(format!(
            "a 1-factorization of K_{n} needs n even and positive"
        )));
    }
    let m = (n - 1) as Vertex;
    let classes = (0..m)
        .map(|i| {
            let mut pairs = vec![(i, m)];
            for j in 1..=(m - 1) / 2 {
                pairs.push(((i + j) % m, (i + m - j) % m));
            }
            matching_class(pairs)
        })
        .collect();
    Ok(Design::new(
        DesignKind::Urd,
        n,
        GroupLayout::none(),
        classes,
    ))
}

/// Class `i` = `{{i+j, i-j}}` for `j = 1..(u-1)/2`; it misses exactly vertex `i`.
pub fn near_one_factorization(u: usize) -> Result<Vec<Vec<(Vertex, Vertex)>>> {
    if u < 3 || u.is_multiple_of(2) {
        return Err(domain(format!(
            "a near-1-factorization of K_{u} needs u odd and at least 3"
        )));
    }
    let m = u as Vertex;
    Ok((0..m)
        .map(|i| {
            (1..=(m - 1) / 2)
                .map(|j| {
                    let (a, b) = ((i + j) % m, (i + m - j) % m);
                    (a.min(b), a.max(b))
                })
                .collect()
        })
        .collect())
}

/// Matching `d` joins left `i` to right `i+d`; left is `0..n`, right `n..2n`.
pub fn bipartite_one_factorization(n: usize) -> Design {
    let m = n as Vertex;
    let classes = (0..m)
        .map(|d| matching_class((0..m).map(|i| (i, m + (i + d) % m))))
        .collect();
    Design::new(
        DesignKind::Urgdd,
        2 * n,
        GroupLayout::uniform(n, 2),
        classes,
    )
}

/// A 1-factorization of the complete multipartite graph with groups of size
/// two: take a 1-factorization of `K_2u`, relabel one factor onto the groups
/// and drop it.
pub fn pair_group_factorization(groups: &[Vec<Vertex>]) -> Result<Design> {
    let v = groups.len() * 2;
    if groups.iter().any(|g| g.len() != 2) {
        return Err(domain("groups must have size two"));
    }
    let full = one_factorization(v)?;
    let first = &full.classes[0];
    let mut perm = vec![0 as Vertex; v];
    for (block, group) in first.blocks.iter().zip(groups) {
        perm[block.verts[0] as usize] = group[0];
        perm[block.verts[1] as usize] = group[1];
    }
    let mut out = relabel(&full, &perm)?;
    out.classes.remove(0);
    out.kind = DesignKind::Urgdd;
    out.layout.groups = groups.to_vec();
    out.recount();
    Ok(out)
}

fn transversal_3(g: usize) -> Rgdd {
    let m = g as Vertex;
    let pt = |i: Vertex, x: Vertex| i * m + x % m;
    Rgdd {
        k: 3,
        v: 3 * g,
        groups: (0..3).map(|i| (0..m).map(|x| pt(i, x)).collect()).collect(),
        classes: (0..m)
            .map(|d| {
                (0..m)
                    .map(|x| vec![pt(0, x), pt(1, x + d), pt(2, 2 * x + d)])
                    .collect()
            })
            .collect(),
    }
}

/// The RGDD signatures the constructions consume.
///
/// `(2,1,u)` for even `u`, `(2,2,u)`, `(3,1,3)`, `(3,g,3)` for odd `g`
/// (resolvable transversal design) and `(3,3,5)` from the search cache.
pub fn rgdd(k: usize, g: usize, u: usize) -> Result<Rgdd> {
    let out = match (k, g, u) {
        (2, 1, u) if u >= 2 && u % 2 == 0 => {
            let f = one_factorization(u)?;
            Rgdd {
                k: 2,
                v: u,
                groups: (0..u as Vertex).map(|p| vec![p]).collect(),
                classes: f
                    .classes
                    .iter()
                    .map(|c| c.blocks.iter().map(|b| b.verts.clone()).collect())
                    .collect(),
            }
        }
        (2, 2, u) if u >= 2 => {
            let f = pair_group_factorization(&GroupLayout::uniform(2, u).groups)?;
            Rgdd {
                k: 2,
                v: 2 * u,
                groups: f.layout.groups.clone(),
                classes: f
                    .classes
                    .iter()
                    .map(|c| c.blocks.iter().map(|b| b.verts.clone()).collect())
                    .collect(),
            }
        }
        (3, g, 3) if g % 2 == 1 => transversal_3(g),
        (3, 3, 5) => cache::fetch_rgdd(&catalog::rgdd3_3x5())?,
        _ => return Err(domain(format!("no {k}-RGDD of type {g}^{u} is provided"))),
    };
    out.verify()
        .map_err(|e| Error::Verification(format!("{k}-RGDD {g}^{u}: {e}")))?;
    Ok(out)
}

/// 2-frame of type `2^u` on `Z_2u` with groups `{i, i+u}`.
///
/// Odd `u`: group `i` is missed by the pairs summing to `2i` and the pairs
/// summing to `2i+u` minus `{i, i+u}`. Even `u` comes from the search cache.
pub fn two_frame(u: usize) -> Result<Design> {
    if u < 3 {
        return Err(domain(format!("2-frames of type 2^{u} need u >= 3")));
    }
    let frame = if u % 2 == 1 {
        let n = 2 * u as Vertex;
        let m = u as Vertex;
        let class = |i: Vertex, sum: Vertex| {
            let pairs: Vec<Vec<Vertex>> = (0..n)
                .filter_map(|x| {
                    let y = (sum + n - x) % n;
                    (x < y && !(x % m == i && y == x + m)).then(|| vec![x, y])
                })
                .collect();
            ResolutionClass::from_vertex_lists(
                BlockKind::P2,
                Scope::PartialGroup(i as usize),
                pairs,
            )
        };
        let classes = (0..m)
            .flat_map(|i| [class(i, (2 * i) % n), class(i, (2 * i + m) % n)])
            .collect();
        Design::new(
            DesignKind::Frame,
            2 * u,
            GroupLayout {
                groups: (0..m).map(|i| vec![i, i + m]).collect(),
                hole: Vec::new(),
            },
            classes,
        )
    } else {
        cache::fetch_design(&catalog::frame_2(u))?
    };
    let report = verify_design(&frame);
    if !report.is_valid() {
        return Err(Error::Verification(format!(
            "2-frame 2^{u}: {}",
            report.summary(3)
        )));
    }
    Ok(frame)
}

/// The two classes of a frame that miss group `i`, in order.
pub fn frame_classes_missing(frame: &Design, group: usize) -> Vec<&ResolutionClass> {
    frame
        .classes
        .iter()
        .filter(|c| c.scope == Scope::PartialGroup(group))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::Profile;

    #[test]
    fn one_factorizations() {
        assert!(one_factorization(3).is_err());
        for n in [2, 4, 12, 20] {
            let d = one_factorization(n).unwrap();
            assert_eq!(d.classes.len(), n - 1);
            assert!(verify_design(&d).is_valid(), "K_{n}");
        }
        assert_eq!(
            one_factorization(12).unwrap().profile,
            Profile::new(11, 0, 0)
        );
    }

    #[test]
    fn near_one_factorization_partitions_edges() {
        assert!(near_one_factorization(4).is_err());
        assert_eq!(
            near_one_factorization(3).unwrap(),
            vec![vec![(1, 2)], vec![(0, 2)], vec![(0, 1)]]
        );
        for u in [5usize, 7] {
            let classes = near_one_factorization(u).unwrap();
            let mut edges: Vec<(Vertex, Vertex)> = classes.iter().flatten().copied().collect();
            edges.sort_unstable();
            edges.dedup();
            assert_eq!(edges.len(), u * (u - 1) / 2);
            for (i, class) in classes.iter().enumerate() {
                assert_eq!(class.len(), (u - 1) / 2);
                assert!(class
                    .iter()
                    .all(|&(a, b)| a as usize != i && b as usize != i));
            }
        }
    }

    #[test]
    fn bipartite_factorizations() {
        for n in [1, 6, 12] {
            let d = bipartite_one_factorization(n);
            assert!(verify_design(&d).is_valid());
            assert_eq!(d.profile, Profile::new(n as u32, 0, 0));
        }
    }

    #[test]
    fn small_rgdds() {
        let k3 = rgdd(3, 1, 3).unwrap();
        assert_eq!(k3.classes, vec![vec![vec![0, 1, 2]]]);
        let t5 = rgdd(3, 5, 3).unwrap();
        assert_eq!(t5.classes.len(), 5);
        assert!(t5.classes.iter().all(|c| c.len() == 5));
        assert_eq!(rgdd(2, 2, 3).unwrap().classes.len(), 4);
        assert_eq!(rgdd(2, 2, 2).unwrap().classes.len(), 2);
        assert_eq!(rgdd(2, 1, 4).unwrap().classes.len(), 3);
        assert!(rgdd(3, 2, 3).is_err());
        assert!(rgdd(4, 1, 4).is_err());
    }

    #[test]
    fn odd_frames() {
        assert!(two_frame(2).is_err());
        for u in [3usize, 5, 7, 9] {
            let f = two_frame(u).unwrap();
            assert_eq!(f.classes.len(), 2 * u);
            assert!(f.classes.iter().all(|c| c.blocks.len() == u - 1));
            for i in 0..u {
                assert_eq!(frame_classes_missing(&f, i).len(), 2);
            }
        }
    }
}
