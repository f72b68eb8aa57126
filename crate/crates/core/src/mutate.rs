//! Single-vertex corruptions of certificates, used to check that the verifier
//! rejects near misses and points at the right class.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ingredients::Rgdd;
use crate::model::{Design, Vertex};
use crate::verify::Report;

/// A design with one block vertex replaced.
#[derive(Clone, Debug)]
pub struct Mutation {
    pub design: Design,
    pub class: usize,
    pub block: usize,
    pub from: Vertex,
    pub to: Vertex,
}

impl Mutation {
    /// The vertex that left class `class` is now uncovered there, so a sound
    /// verifier must name that class.
    pub fn is_localized(&self, report: &Report) -> bool {
        report
            .violations
            .iter()
            .any(|v| v.classes().contains(&self.class))
    }
}

/// Pick `(class, block, position, replacement)` tuples without repeats.
fn picks(
    count: usize,
    seed: u64,
    v: usize,
    blocks: &dyn Fn(usize) -> usize,
    classes: usize,
    block_verts: &dyn Fn(usize, usize) -> Vec<Vertex>,
) -> Vec<(usize, usize, usize, Vertex)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 100 * count {
        attempts += 1;
        let c = rng.random_range(0..classes);
        if blocks(c) == 0 {
            continue;
        }
        let b = rng.random_range(0..blocks(c));
        let verts = block_verts(c, b);
        let j = rng.random_range(0..verts.len());
        let w = rng.random_range(0..v) as Vertex;
        if verts.contains(&w) || !seen.insert((c, b, j, w)) {
            continue;
        }
        out.push((c, b, j, w));
    }
    out
}

/// Up to `count` distinct single-vertex substitutions of `design`.
pub fn vertex_substitutions(design: &Design, count: usize, seed: u64) -> Vec<Mutation> {
    picks(
        count,
        seed,
        design.v,
        &|c| design.classes[c].blocks.len(),
        design.classes.len(),
        &|c, b| design.classes[c].blocks[b].verts.clone(),
    )
    .into_iter()
    .map(|(c, b, j, w)| {
        let mut mutated = design.clone();
        let slot = &mut mutated.classes[c].blocks[b].verts[j];
        let from = std::mem::replace(slot, w);
        Mutation {
            design: mutated,
            class: c,
            block: b,
            from,
            to: w,
        }
    })
    .collect()
}

/// The same for RGDDs; each result carries the mutated class index.
pub fn rgdd_substitutions(rgdd: &Rgdd, count: usize, seed: u64) -> Vec<(Rgdd, usize)> {
    picks(
        count,
        seed,
        rgdd.v,
        &|c| rgdd.classes[c].len(),
        rgdd.classes.len(),
        &|c, b| rgdd.classes[c][b].clone(),
    )
    .into_iter()
    .map(|(c, b, j, w)| {
        let mut mutated = rgdd.clone();
        mutated.classes[c][b][j] = w;
        (mutated, c)
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingredients::one_factorization;
    use crate::verify::verify_design;

    #[test]
    fn substitutions_are_distinct_and_rejected() {
        let d = one_factorization(8).unwrap();
        let muts = vertex_substitutions(&d, 40, 7);
        assert_eq!(muts.len(), 40);
        for m in &muts {
            let report = verify_design(&m.design);
            assert!(!report.is_valid());
            assert!(m.is_localized(&report));
        }
    }
}
