//! Exact cover by dancing links.
//!
//! Columns are the target edges plus one `(class, point)` column for every
//! point a class must cover. Rows are `(class, candidate block)` pairs. Column
//! choice is most-constrained first with seeded tie-breaking, and each restart
//! shuffles the row order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{restart_seed, Problem, SearchSpec, Shape};
use crate::model::Vertex;
use crate::par::Exec;

struct Links {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    column: Vec<usize>,
    row: Vec<usize>,
    size: Vec<usize>,
    root: usize,
}

impl Links {
    fn new(columns: usize, rows: &[Vec<usize>]) -> Links {
        let root = columns;
        let mut l = Links {
            left: Vec::new(),
            right: Vec::new(),
            up: Vec::new(),
            down: Vec::new(),
            column: Vec::new(),
            row: Vec::new(),
            size: vec![0; columns],
            root,
        };
        for i in 0..=columns {
            l.left.push(if i == 0 { columns } else { i - 1 });
            l.right.push(if i == columns { 0 } else { i + 1 });
            l.up.push(i);
            l.down.push(i);
            l.column.push(i);
            l.row.push(usize::MAX);
        }
        for (r, cols) in rows.iter().enumerate() {
            let first = l.left.len();
            for (i, &c) in cols.iter().enumerate() {
                let node = first + i;
                let last = first + cols.len() - 1;
                l.left.push(if i == 0 { last } else { node - 1 });
                l.right.push(if node == last { first } else { node + 1 });
                l.up.push(l.up[c]);
                l.down.push(c);
                let above = l.up[c];
                l.down[above] = node;
                l.up[c] = node;
                l.column.push(c);
                l.row.push(r);
                l.size[c] += 1;
            }
        }
        l
    }

    fn cover(&mut self, c: usize) {
        let (lc, rc) = (self.left[c], self.right[c]);
        self.right[lc] = rc;
        self.left[rc] = lc;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.column[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.column[j]] += 1;
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (lc, rc) = (self.left[c], self.right[c]);
        self.right[lc] = c;
        self.left[rc] = c;
    }

    fn search(
        &mut self,
        chosen: &mut Vec<usize>,
        nodes: &mut u64,
        limit: u64,
        rng: &mut ChaCha8Rng,
    ) -> bool {
        if self.right[self.root] == self.root {
            return true;
        }
        *nodes += 1;
        if *nodes > limit {
            return false;
        }
        let mut best = usize::MAX;
        let mut best_size = usize::MAX;
        let mut ties = 0u32;
        let mut c = self.right[self.root];
        while c != self.root {
            let s = self.size[c];
            if s < best_size {
                best = c;
                best_size = s;
                ties = 1;
            } else if s == best_size {
                ties += 1;
                if rng.random_range(0..ties) == 0 {
                    best = c;
                }
            }
            c = self.right[c];
        }
        if best_size == 0 {
            return false;
        }
        self.cover(best);
        let mut r = self.down[best];
        while r != best {
            chosen.push(self.row[r]);
            let mut j = self.right[r];
            while j != r {
                self.cover(self.column[j]);
                j = self.right[j];
            }
            if self.search(chosen, nodes, limit, rng) {
                return true;
            }
            let mut j = self.left[r];
            while j != r {
                self.uncover(self.column[j]);
                j = self.left[j];
            }
            chosen.pop();
            if *nodes > limit {
                break;
            }
            r = self.down[r];
        }
        self.uncover(best);
        false
    }
}

/// All vertex tuples of `shape` on `points` whose edges are allowed, one per block.
fn candidates(shape: Shape, points: &[Vertex], v: usize, allowed: &[bool]) -> Vec<Vec<Vertex>> {
    fn extend(
        shape: Shape,
        points: &[Vertex],
        v: usize,
        allowed: &[bool],
        current: &mut Vec<Vertex>,
        out: &mut Vec<Vec<Vertex>>,
    ) {
        let k = shape.order();
        if current.len() == k {
            let edges_ok = shape
                .edge_positions()
                .iter()
                .all(|&(x, y)| allowed[current[x] as usize * v + current[y] as usize]);
            if edges_ok && shape.is_canonical(current) {
                out.push(current.clone());
            }
            return;
        }
        for &p in points {
            if current.contains(&p) {
                continue;
            }
            let n = current.len();
            let prefix_ok = shape
                .edge_positions()
                .iter()
                .filter(|&&(x, y)| x.max(y) == n)
                .all(|&(x, y)| {
                    let other = current[x.min(y)];
                    allowed[other as usize * v + p as usize]
                });
            if !prefix_ok {
                continue;
            }
            current.push(p);
            extend(shape, points, v, allowed, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    extend(shape, points, v, allowed, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn solve(
    spec: &SearchSpec,
    problem: &Problem,
    exec: Exec,
) -> Option<Vec<Vec<Vec<Vertex>>>> {
    let v = problem.v;
    let mut edge_column = vec![usize::MAX; v * v];
    let mut columns = 0;
    for a in 0..v {
        for b in a + 1..v {
            if problem.allowed[a * v + b] {
                edge_column[a * v + b] = columns;
                edge_column[b * v + a] = columns;
                columns += 1;
            }
        }
    }
    let mut point_column = Vec::new();
    for points in &problem.class_points {
        let mut map = vec![usize::MAX; v];
        for &p in points {
            map[p as usize] = columns;
            columns += 1;
        }
        point_column.push(map);
    }
    let mut rows: Vec<(usize, Vec<Vertex>, Vec<usize>)> = Vec::new();
    for (c, req) in spec.classes.iter().enumerate() {
        for block in candidates(req.shape, &problem.class_points[c], v, &problem.allowed) {
            let mut cols: Vec<usize> = req
                .shape
                .edge_positions()
                .iter()
                .map(|&(x, y)| edge_column[block[x] as usize * v + block[y] as usize])
                .collect();
            cols.extend(block.iter().map(|&p| point_column[c][p as usize]));
            rows.push((c, block, cols));
        }
    }
    let rows = &rows;
    exec.find_first(spec.budget.restarts, |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(spec.seed, r));
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.shuffle(&mut rng);
        let shuffled: Vec<Vec<usize>> = order.iter().map(|&i| rows[i].2.clone()).collect();
        let mut links = Links::new(columns, &shuffled);
        let mut chosen = Vec::new();
        let mut nodes = 0;
        if !links.search(&mut chosen, &mut nodes, spec.budget.steps, &mut rng) {
            return None;
        }
        let mut classes = vec![Vec::new(); spec.classes.len()];
        for &i in &chosen {
            let (c, block, _) = &rows[order[i]];
            classes[*c].push(block.clone());
        }
        Some(classes)
    })
}
