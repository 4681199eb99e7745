//! Partial actions of a free group on a growing set of points, with the
//! coincidence procedure shared by coset enumeration and Stallings folding.
//!
//! Column `2i` follows generator `i`, column `2i + 1` its inverse; the table
//! is kept symmetric: `t[a][x] = b` iff `t[b][x ^ 1] = a`.

use std::collections::VecDeque;

pub(crate) const UNDEF: usize = usize::MAX;

pub(crate) struct PartialAction {
    cols: usize,
    table: Vec<usize>,
    parent: Vec<usize>,
    live: usize,
    queue: Vec<usize>,
}

impl PartialAction {
    /// One point (the base), no edges.
    pub(crate) fn new(cols: usize) -> Self {
        Self { cols, table: vec![UNDEF; cols], parent: vec![0], live: 1, queue: Vec::new() }
    }

    pub(crate) fn allocated(&self) -> usize {
        self.parent.len()
    }

    #[cfg(test)]
    pub(crate) fn live(&self) -> usize {
        self.live
    }

    pub(crate) fn cols(&self) -> usize {
        self.cols
    }

    pub(crate) fn get(&self, p: usize, x: usize) -> usize {
        self.table[p * self.cols + x]
    }

    fn set(&mut self, p: usize, x: usize, q: usize) {
        self.table[p * self.cols + x] = q;
    }

    pub(crate) fn is_live(&self, p: usize) -> bool {
        self.parent[p] == p
    }

    pub(crate) fn add_point(&mut self) -> usize {
        let p = self.parent.len();
        self.parent.push(p);
        self.table.extend(std::iter::repeat_n(UNDEF, self.cols));
        self.live += 1;
        p
    }

    /// Sets `p·x = q` and `q·x⁻¹ = p`; both slots must be free.
    pub(crate) fn link(&mut self, p: usize, x: usize, q: usize) {
        debug_assert!(self.get(p, x) == UNDEF && self.get(q, x ^ 1) == UNDEF);
        self.set(p, x, q);
        self.set(q, x ^ 1, p);
    }

    pub(crate) fn rep(&mut self, p: usize) -> usize {
        let mut root = p;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = p;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a != b {
            let (keep, drop) = (a.min(b), a.max(b));
            self.parent[drop] = keep;
            self.live -= 1;
            self.queue.push(drop);
        }
    }

    /// Identifies `a` and `b` and every pair forced by determinism of the
    /// action. Smaller indices survive, so the base point is never lost.
    pub(crate) fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut next = 0;
        while next < self.queue.len() {
            let e = self.queue[next];
            next += 1;
            for x in 0..self.cols {
                let f = self.get(e, x);
                if f == UNDEF {
                    continue;
                }
                self.set(f, x ^ 1, UNDEF);
                let (e1, f1) = (self.rep(e), self.rep(f));
                let t = self.get(e1, x);
                if t != UNDEF {
                    self.merge(f1, t);
                    continue;
                }
                let s = self.get(f1, x ^ 1);
                if s != UNDEF {
                    self.merge(e1, s);
                } else {
                    self.set(e1, x, f1);
                    self.set(f1, x ^ 1, e1);
                }
            }
        }
    }

    /// Adds the edge `p -x-> q`, folding if `p` already has an `x`-edge or `q`
    /// an incoming one.
    pub(crate) fn join(&mut self, p: usize, x: usize, q: usize) {
        let (p, q) = (self.rep(p), self.rep(q));
        let t = self.get(p, x);
        if t != UNDEF {
            self.coincidence(t, q);
            return;
        }
        let s = self.get(q, x ^ 1);
        if s != UNDEF {
            self.coincidence(s, p);
        } else {
            self.link(p, x, q);
        }
    }

    /// Live points reachable from the base, renumbered in breadth-first order.
    pub(crate) fn export(&mut self) -> Vec<Vec<Option<usize>>> {
        let cols = self.cols;
        let rows: Vec<Vec<Option<usize>>> = (0..self.allocated())
            .map(|p| {
                (0..cols)
                    .map(|x| {
                        let q = self.get(p, x);
                        (q != UNDEF).then(|| self.rep(q))
                    })
                    .collect()
            })
            .collect();
        let root = self.rep(0);
        standardize(&rows, root)
    }
}

/// Renumbers the points reachable from `root` in breadth-first order, scanning
/// columns left to right; unreachable points are dropped.
pub(crate) fn standardize(rows: &[Vec<Option<usize>>], root: usize) -> Vec<Vec<Option<usize>>> {
    let mut new_id = vec![UNDEF; rows.len()];
    let mut order = vec![root];
    new_id[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(p) = queue.pop_front() {
        for q in rows[p].iter().flatten() {
            if new_id[*q] == UNDEF {
                new_id[*q] = order.len();
                order.push(*q);
                queue.push_back(*q);
            }
        }
    }
    order.iter().map(|&p| rows[p].iter().map(|e| e.map(|q| new_id[q])).collect()).collect()
}

/// Breadth-first spanning tree of a standardized table: for every point after
/// the root, the `(point, column)` edge through which it was first reached.
pub(crate) fn spanning_tree(rows: &[Vec<Option<usize>>]) -> Vec<Option<(usize, usize)>> {
    let mut tree = vec![None; rows.len()];
    let mut seen = vec![false; rows.len()];
    if rows.is_empty() {
        return tree;
    }
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(p) = queue.pop_front() {
        for (x, q) in rows[p].iter().enumerate() {
            if let Some(q) = *q {
                if !seen[q] {
                    seen[q] = true;
                    tree[q] = Some((p, x));
                    queue.push_back(q);
                }
            }
        }
    }
    tree
}

/// Positive edges `(point, generator)` used by the spanning tree.
pub(crate) fn tree_edges(rows: &[Vec<Option<usize>>]) -> Vec<Vec<bool>> {
    let ngens = rows.first().map_or(0, |r| r.len() / 2);
    let mut used = vec![vec![false; ngens]; rows.len()];
    for (q, edge) in spanning_tree(rows).into_iter().enumerate() {
        if let Some((p, x)) = edge {
            if x % 2 == 0 {
                used[p][x / 2] = true;
            } else {
                used[q][x / 2] = true;
            }
        }
    }
    used
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folding_two_loops() {
        // x·x at the base through a middle point, then x once more as a loop.
        let mut a = PartialAction::new(2);
        let m = a.add_point();
        a.join(0, 0, m);
        a.join(m, 0, 0);
        assert_eq!(a.live(), 2);
        a.join(0, 0, 0);
        assert_eq!(a.live(), 1);
        let rows = a.export();
        assert_eq!(rows, vec![vec![Some(0), Some(0)]]);
    }

    #[test]
    fn standardize_is_bfs() {
        let rows = vec![vec![Some(2), Some(1)], vec![Some(0), Some(2)], vec![Some(1), Some(0)]];
        let s = standardize(&rows, 0);
        assert_eq!(s, vec![vec![Some(1), Some(2)], vec![Some(2), Some(0)], vec![Some(0), Some(1)]]);
        let tree = spanning_tree(&s);
        assert_eq!(tree, vec![None, Some((0, 0)), Some((0, 1))]);
    }
}
