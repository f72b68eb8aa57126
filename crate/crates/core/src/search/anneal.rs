//! Simulated annealing over class arrangements.
//!
//! Each class is a permutation of its point orbits cut into consecutive base
//! blocks, plus a rotation offset per orbit. Without symmetry every orbit is a
//! single point. With a class step `s`, orbits are taken under `symmetry^s`
//! and every base block is developed through the whole orbit, so vertex
//! coverage holds by construction and only edge conflicts are scored.
//!
//! The cost is the number of surplus edge uses plus the number of uses of
//! edges outside the target graph. The arithmetic pre-check makes the total
//! edge count right, so cost zero is an exact decomposition.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{restart_seed, Problem, SearchSpec, Shape};
use crate::error::SearchError;
use crate::model::Vertex;
use crate::par::Exec;

const START_TEMPERATURE: f64 = 0.6;
const END_TEMPERATURE: f64 = 0.05;
const OFFSET_MOVE_RATE: f64 = 0.3;
const FOCUS_TRIES: usize = 4;

struct ClassModel {
    k: usize,
    m: usize,
    orbits: Vec<Vec<Vertex>>,
    edges: &'static [(usize, usize)],
    /// Reordering a block of this shape changes nothing.
    symmetric: bool,
}

struct Model {
    v: usize,
    allowed: Vec<bool>,
    classes: Vec<ClassModel>,
}

fn power(sigma: &[Vertex], s: usize) -> Vec<Vertex> {
    (0..sigma.len() as Vertex)
        .map(|mut p| {
            for _ in 0..s {
                p = sigma[p as usize];
            }
            p
        })
        .collect()
}

fn build_model(spec: &SearchSpec, problem: &Problem) -> Result<Model, SearchError> {
    let mut classes = Vec::new();
    for (i, (req, points)) in spec.classes.iter().zip(&problem.class_points).enumerate() {
        let k = req.shape.order();
        let orbits: Vec<Vec<Vertex>> = match (&spec.symmetry, req.step) {
            (Some(sigma), s) if s >= 1 => {
                let tau = power(sigma, s);
                let mut in_class = vec![false; problem.v];
                for &p in points {
                    in_class[p as usize] = true;
                }
                let mut done = vec![false; problem.v];
                let mut orbits = Vec::new();
                for &p in points {
                    if done[p as usize] {
                        continue;
                    }
                    let mut orbit = vec![p];
                    done[p as usize] = true;
                    let mut q = tau[p as usize];
                    while q != p {
                        if !in_class[q as usize] {
                            return Err(
                                spec.inconsistent(format!("class {i}: point set is not invariant"))
                            );
                        }
                        done[q as usize] = true;
                        orbit.push(q);
                        q = tau[q as usize];
                    }
                    orbits.push(orbit);
                }
                orbits
            }
            _ => points.iter().map(|&p| vec![p]).collect(),
        };
        let m = orbits[0].len();
        if orbits.iter().any(|o| o.len() != m) || !orbits.len().is_multiple_of(k) {
            return Err(spec.inconsistent(format!(
                "class {i}: orbits of unequal size or not divisible into blocks of {k}"
            )));
        }
        classes.push(ClassModel {
            k,
            m,
            orbits,
            edges: req.shape.edge_positions(),
            symmetric: matches!(req.shape, Shape::P2 | Shape::K3),
        });
    }
    Ok(Model {
        v: problem.v,
        allowed: problem.allowed.clone(),
        classes,
    })
}

struct State<'a> {
    model: &'a Model,
    order: Vec<Vec<usize>>,
    offset: Vec<Vec<usize>>,
    counts: Vec<u16>,
    cost: i64,
}

impl<'a> State<'a> {
    fn random(model: &'a Model, rng: &mut ChaCha8Rng) -> Self {
        let mut order = Vec::new();
        let mut offset = Vec::new();
        for cm in &model.classes {
            let mut perm: Vec<usize> = (0..cm.orbits.len()).collect();
            for i in (1..perm.len()).rev() {
                perm.swap(i, rng.random_range(0..=i));
            }
            order.push(perm);
            offset.push(
                (0..cm.orbits.len())
                    .map(|_| rng.random_range(0..cm.m))
                    .collect(),
            );
        }
        let mut state = State {
            model,
            order,
            offset,
            counts: vec![0; model.v * model.v],
            cost: 0,
        };
        for c in 0..model.classes.len() {
            for b in 0..model.classes[c].orbits.len() / model.classes[c].k {
                state.apply(c, b, true);
            }
        }
        state
    }

    #[inline]
    fn vertex(&self, c: usize, pos: usize, j: usize) -> usize {
        let cm = &self.model.classes[c];
        let o = self.order[c][pos];
        cm.orbits[o][(self.offset[c][o] + j) % cm.m] as usize
    }

    #[inline]
    fn edge_index(&self, a: usize, b: usize) -> usize {
        if a < b {
            a * self.model.v + b
        } else {
            b * self.model.v + a
        }
    }

    /// Add or remove all translates of base block `b` of class `c`.
    fn apply(&mut self, c: usize, b: usize, add: bool) {
        let cm = &self.model.classes[c];
        let base = b * cm.k;
        for j in 0..cm.m {
            for &(x, y) in cm.edges {
                let (p, q) = (self.vertex(c, base + x, j), self.vertex(c, base + y, j));
                let idx = self.edge_index(p, q);
                let allowed = self.model.allowed[idx];
                if add {
                    if !allowed || self.counts[idx] >= 1 {
                        self.cost += 1;
                    }
                    self.counts[idx] += 1;
                } else {
                    self.counts[idx] -= 1;
                    if !allowed || self.counts[idx] >= 1 {
                        self.cost -= 1;
                    }
                }
            }
        }
    }

    fn conflicted(&self, c: usize, b: usize) -> bool {
        let cm = &self.model.classes[c];
        let base = b * cm.k;
        (0..cm.m).any(|j| {
            cm.edges.iter().any(|&(x, y)| {
                let idx = self.edge_index(self.vertex(c, base + x, j), self.vertex(c, base + y, j));
                !self.model.allowed[idx] || self.counts[idx] > 1
            })
        })
    }

    fn pick_position(&self, c: usize, rng: &mut ChaCha8Rng) -> usize {
        let cm = &self.model.classes[c];
        let n = cm.orbits.len();
        let mut pos = rng.random_range(0..n);
        for _ in 0..FOCUS_TRIES {
            if self.conflicted(c, pos / cm.k) {
                break;
            }
            pos = rng.random_range(0..n);
        }
        pos
    }

    fn classes_out(&self) -> Vec<Vec<Vec<Vertex>>> {
        self.model
            .classes
            .iter()
            .enumerate()
            .map(|(c, cm)| {
                let mut blocks = Vec::new();
                for j in 0..cm.m {
                    for b in 0..cm.orbits.len() / cm.k {
                        blocks.push(
                            (0..cm.k)
                                .map(|x| self.vertex(c, b * cm.k + x, j) as Vertex)
                                .collect(),
                        );
                    }
                }
                blocks
            })
            .collect()
    }
}

enum Move {
    Swap { c: usize, p: usize, q: usize },
    Offset { c: usize, pos: usize, old: usize },
}

/// One annealing run; `Some` on reaching cost zero.
fn run(model: &Model, seed: u64, steps: u64) -> Option<Vec<Vec<Vec<Vertex>>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = State::random(model, &mut rng);
    let movable: Vec<usize> = (0..model.classes.len())
        .filter(|&c| model.classes[c].orbits.len() > 1 || model.classes[c].m > 1)
        .collect();
    if movable.is_empty() {
        return (state.cost == 0).then(|| state.classes_out());
    }
    let ratio = END_TEMPERATURE / START_TEMPERATURE;
    for step in 0..steps {
        if state.cost == 0 {
            return Some(state.classes_out());
        }
        let temperature = START_TEMPERATURE * ratio.powf(step as f64 / steps as f64);
        let c = movable[rng.random_range(0..movable.len())];
        let cm = &model.classes[c];
        let before = state.cost;
        let mv = if cm.m > 1 && (cm.orbits.len() == 1 || rng.random_bool(OFFSET_MOVE_RATE)) {
            let pos = state.pick_position(c, &mut rng);
            let o = state.order[c][pos];
            let old = state.offset[c][o];
            let new = (old + rng.random_range(1..cm.m)) % cm.m;
            state.apply(c, pos / cm.k, false);
            state.offset[c][o] = new;
            state.apply(c, pos / cm.k, true);
            Move::Offset { c, pos, old }
        } else {
            let p = state.pick_position(c, &mut rng);
            let mut q = rng.random_range(0..cm.orbits.len() - 1);
            if q >= p {
                q += 1;
            }
            let (bp, bq) = (p / cm.k, q / cm.k);
            if bp == bq && cm.symmetric {
                continue;
            }
            swap(&mut state, c, p, q);
            Move::Swap { c, p, q }
        };
        let delta = state.cost - before;
        if delta > 0 && rng.random::<f64>() >= (-(delta as f64) / temperature).exp() {
            match mv {
                Move::Swap { c, p, q } => swap(&mut state, c, p, q),
                Move::Offset { c, pos, old } => {
                    let k = model.classes[c].k;
                    let o = state.order[c][pos];
                    state.apply(c, pos / k, false);
                    state.offset[c][o] = old;
                    state.apply(c, pos / k, true);
                }
            }
        }
    }
    (state.cost == 0).then(|| state.classes_out())
}

fn swap(state: &mut State<'_>, c: usize, p: usize, q: usize) {
    let k = state.model.classes[c].k;
    let (bp, bq) = (p / k, q / k);
    state.apply(c, bp, false);
    if bq != bp {
        state.apply(c, bq, false);
    }
    state.order[c].swap(p, q);
    state.apply(c, bp, true);
    if bq != bp {
        state.apply(c, bq, true);
    }
}

pub(crate) fn solve(
    spec: &SearchSpec,
    problem: &Problem,
    exec: Exec,
) -> Result<Option<Vec<Vec<Vec<Vertex>>>>, SearchError> {
    let model = build_model(spec, problem)?;
    Ok(exec.find_first(spec.budget.restarts, |r| {
        run(&model, restart_seed(spec.seed, r), spec.budget.steps)
    }))
}
