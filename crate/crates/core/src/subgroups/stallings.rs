//! Stallings graphs of finitely generated subgroups of free groups.

use std::collections::{HashMap, HashSet, VecDeque};

use super::action::{spanning_tree, standardize, tree_edges, PartialAction};
use super::{CosetTable, SubgroupError};
use crate::words::{Generator, Letter, Word};

/// Letters of the words in the subgroup generators returned by
/// [`intersect_with_finite_index`]: `h_j` stands for the `j`-th generator.
pub const SUBGROUP_LETTER_FAMILY: &str = "h";

/// A folded core graph with base vertex 0. Edges are stored per vertex and
/// column like a coset table; vertices are numbered breadth-first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupGraph {
    alphabet: Vec<Generator>,
    edges: Vec<Vec<Option<usize>>>,
    subgroup_generators: Vec<Word>,
}

impl SubgroupGraph {
    pub fn alphabet(&self) -> &[Generator] {
        &self.alphabet
    }

    pub fn edges(&self) -> &[Vec<Option<usize>>] {
        &self.edges
    }

    pub fn subgroup_generators(&self) -> &[Word] {
        &self.subgroup_generators
    }

    pub fn vertex_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of positive edges.
    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(|row| row.iter().step_by(2).flatten().count()).sum()
    }

    /// Every vertex has every outgoing and incoming label.
    pub fn is_complete(&self) -> bool {
        self.edges.iter().all(|row| row.iter().all(Option::is_some))
    }

    /// The index in the ambient free group, `None` when infinite.
    pub fn index(&self) -> Option<usize> {
        self.is_complete().then_some(self.vertex_count())
    }

    /// Rank of the subgroup: `E − V + 1`.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    /// Folded: edge slots are symmetric, so no vertex has two edges with the
    /// same label in the same direction.
    pub fn is_folded(&self) -> bool {
        self.edges
            .iter()
            .enumerate()
            .all(|(v, row)| row.iter().enumerate().all(|(x, e)| e.is_none_or(|w| self.edges[w][x ^ 1] == Some(v))))
    }

    /// Core: no vertex other than the base has degree one.
    pub fn is_core(&self) -> bool {
        self.edges.iter().enumerate().skip(1).all(|(_, row)| row.iter().flatten().count() != 1)
    }

    fn column(&self, l: &Letter) -> Option<usize> {
        self.alphabet.iter().position(|g| *g == l.gen).map(|i| 2 * i + usize::from(l.inverse))
    }

    /// Free basis read off the breadth-first spanning tree: one generator
    /// `t(u)·x·t(v)⁻¹` per non-tree edge `u -x-> v`.
    pub fn free_basis(&self) -> Vec<Word> {
        let tree = spanning_tree(&self.edges);
        let mut reps = vec![Word::identity(); self.edges.len()];
        for v in 1..self.edges.len() {
            let (u, x) = tree[v].expect("core graphs are connected");
            reps[v] = reps[u].concat(&Letter::new(self.alphabet[x / 2].clone(), x % 2 == 1).into());
        }
        let used = tree_edges(&self.edges);
        let mut basis = Vec::new();
        for (u, row) in self.edges.iter().enumerate() {
            for i in 0..self.alphabet.len() {
                if let (Some(v), false) = (row[2 * i], used[u][i]) {
                    basis.push(reps[u].concat(&self.alphabet[i].word()).concat(&reps[v].inverse()));
                }
            }
        }
        basis
    }
}

/// Folds the bouquet of loops spelled by `subgens` into the Stallings graph of
/// `⟨subgens⟩ ≤ F(alphabet)`.
pub fn fold(alphabet: &[Generator], subgens: &[Word]) -> Result<SubgroupGraph, SubgroupError> {
    let mut a = PartialAction::new(2 * alphabet.len());
    let cols = |w: &Word| -> Result<Vec<usize>, SubgroupError> {
        w.letters()
            .iter()
            .map(|l| {
                alphabet
                    .iter()
                    .position(|g| *g == l.gen)
                    .map(|i| 2 * i + usize::from(l.inverse))
                    .ok_or_else(|| SubgroupError::IncompatibleAlphabets(l.gen.to_string()))
            })
            .collect()
    };
    for w in subgens {
        let code = cols(w)?;
        let mut cur = 0;
        for (k, &x) in code.iter().enumerate() {
            let next = if k + 1 == code.len() { 0 } else { a.add_point() };
            a.join(cur, x, next);
            cur = a.rep(next);
        }
    }
    Ok(SubgroupGraph { alphabet: alphabet.to_vec(), edges: core(a.export()), subgroup_generators: subgens.to_vec() })
}

/// Repeatedly deletes non-base vertices of degree one, then renumbers.
fn core(mut rows: Vec<Vec<Option<usize>>>) -> Vec<Vec<Option<usize>>> {
    let degree = |row: &Vec<Option<usize>>| row.iter().flatten().count();
    let mut queue: VecDeque<usize> = (1..rows.len()).filter(|&v| degree(&rows[v]) == 1).collect();
    while let Some(v) = queue.pop_front() {
        if degree(&rows[v]) != 1 {
            continue;
        }
        let x = rows[v].iter().position(Option::is_some).expect("degree one");
        let w = rows[v][x].take().expect("degree one");
        rows[w][x ^ 1] = None;
        if w != 0 && degree(&rows[w]) == 1 {
            queue.push_back(w);
        }
    }
    standardize(&rows, 0)
}

/// True iff the reduced form of `w` labels a loop at the base.
pub fn graph_membership(g: &SubgroupGraph, w: &Word) -> bool {
    w.letters().iter().try_fold(0, |v, l| g.edges[v][g.column(l)?]) == Some(0)
}

/// Generators of `⟨subgens⟩ ∩ G₁` for a finite-index `G₁` given by its coset
/// table, as words in the letters `h_j` (one per subgroup generator).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Intersection {
    pub words: Vec<Word>,
    /// Each word with `h_j` replaced by the `j`-th subgroup generator.
    pub ambient: Vec<Word>,
    /// Size of the orbit of coset 0 under the subgroup, i.e. the index of the
    /// intersection in the subgroup.
    pub orbit: usize,
}

/// Schreier rewriting for the action of `F(h_1, …, h_m)` on the cosets of
/// `G₁`, with `h_j` acting as the `j`-th subgroup generator: the stabilizer of
/// coset 0 maps onto the intersection.
pub fn intersect_with_finite_index(g: &SubgroupGraph, table: &CosetTable) -> Result<Intersection, SubgroupError> {
    if !table.is_complete() {
        return Err(SubgroupError::Inconsistent("intersection needs a complete coset table".into()));
    }
    if g.alphabet() != table.generators() {
        return Err(SubgroupError::IncompatibleAlphabets(format!(
            "graph over {} generators, table over {}",
            g.alphabet().len(),
            table.generators().len()
        )));
    }
    let subgens = g.subgroup_generators();
    let letters: Vec<Generator> =
        (1..=subgens.len()).map(|j| Generator::indexed(SUBGROUP_LETTER_FAMILY, j as u64)).collect();
    let forward: Vec<Vec<usize>> = subgens
        .iter()
        .map(|w| (0..table.index()).map(|c| table.act(c, w).expect("complete table")).collect())
        .collect();
    let backward: Vec<Vec<usize>> = forward
        .iter()
        .map(|perm| {
            let mut inv = vec![0; perm.len()];
            for (c, &d) in perm.iter().enumerate() {
                inv[d] = c;
            }
            inv
        })
        .collect();

    // Breadth-first orbit of coset 0, recording a transversal in the h-letters.
    let mut reps: HashMap<usize, Word> = HashMap::from([(0, Word::identity())]);
    let mut order = vec![0];
    let mut tree = HashSet::new();
    let mut queue = VecDeque::from([0]);
    while let Some(c) = queue.pop_front() {
        for j in 0..subgens.len() {
            for inverse in [false, true] {
                let d = if inverse { backward[j][c] } else { forward[j][c] };
                if !reps.contains_key(&d) {
                    let step = Word::from(Letter::new(letters[j].clone(), inverse));
                    reps.insert(d, reps[&c].concat(&step));
                    tree.insert(if inverse { (d, j) } else { (c, j) });
                    order.push(d);
                    queue.push_back(d);
                }
            }
        }
    }
    let mut words = Vec::new();
    for &c in &order {
        for j in 0..subgens.len() {
            if !tree.contains(&(c, j)) {
                let d = forward[j][c];
                words.push(reps[&c].concat(&letters[j].word()).concat(&reps[&d].inverse()));
            }
        }
    }
    let ambient = words.iter().map(|w| w.substitute(|h| subgens[h.index().unwrap() as usize - 1].clone())).collect();
    Ok(Intersection { words, ambient, orbit: order.len() })
}

/// Core of the component of `(base, coset 0)` in the product of a Stallings
/// graph and a coset table: the Stallings graph of the intersection.
pub fn product_graph(g: &SubgroupGraph, table: &CosetTable) -> Result<SubgroupGraph, SubgroupError> {
    if g.alphabet() != table.generators() {
        return Err(SubgroupError::IncompatibleAlphabets("graph and table alphabets differ".into()));
    }
    let cols = 2 * g.alphabet().len();
    let mut id: HashMap<(usize, usize), usize> = HashMap::from([((0, 0), 0)]);
    let mut pairs = vec![(0, 0)];
    let mut rows: Vec<Vec<Option<usize>>> = Vec::new();
    let mut k = 0;
    while k < pairs.len() {
        let (v, c) = pairs[k];
        let mut row = vec![None; cols];
        for (x, slot) in row.iter_mut().enumerate() {
            if let (Some(w), Some(d)) = (g.edges[v][x], table.rows()[c][x]) {
                let next = *id.entry((w, d)).or_insert_with(|| {
                    pairs.push((w, d));
                    pairs.len() - 1
                });
                *slot = Some(next);
            }
        }
        rows.push(row);
        k += 1;
    }
    let mut out = SubgroupGraph { alphabet: g.alphabet.clone(), edges: core(rows), subgroup_generators: Vec::new() };
    out.subgroup_generators = out.free_basis();
    Ok(out)
}
