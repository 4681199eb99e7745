//! Todd–Coxeter coset enumeration, relator-scanning (HLT) strategy.

use serde::{Deserialize, Serialize};

use super::action::{spanning_tree, PartialAction, UNDEF};
use super::SubgroupError;
use crate::oracle::{OracleError, Permutation, WordOracle};
use crate::presentations::FinitePresentation;
use crate::words::{Generator, Letter, Word};

/// Right cosets of a subgroup, one row per coset and one column per generator
/// and inverse (column `2i` is generator `i`, `2i + 1` its inverse). Coset 0
/// is the subgroup itself; complete tables are numbered breadth-first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTable {
    pub(crate) generators: Vec<Generator>,
    pub(crate) rows: Vec<Vec<Option<usize>>>,
    pub(crate) complete: bool,
    pub(crate) subgroup_generators: Vec<Word>,
}

/// JSON export: one image list per generator, cosets numbered from 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetTableJson {
    pub generators: Vec<String>,
    pub subgroup_generators: Vec<String>,
    pub index: usize,
    pub complete: bool,
    pub permutations: Vec<Vec<Option<usize>>>,
}

impl CosetTable {
    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn rows(&self) -> &[Vec<Option<usize>>] {
        &self.rows
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn subgroup_generators(&self) -> &[Word] {
        &self.subgroup_generators
    }

    /// Number of cosets; the subgroup index when the table is complete.
    pub fn index(&self) -> usize {
        self.rows.len()
    }

    fn column(&self, l: &Letter) -> Option<usize> {
        self.generators.iter().position(|g| *g == l.gen).map(|i| 2 * i + usize::from(l.inverse))
    }

    /// The coset `c·w`, or `None` if the trace leaves the defined part or `w`
    /// uses an unknown generator.
    pub fn act(&self, coset: usize, w: &Word) -> Option<usize> {
        w.letters().iter().try_fold(coset, |c, l| self.rows[c][self.column(l)?])
    }

    /// Coset representatives read off the breadth-first spanning tree.
    pub fn transversal(&self) -> Vec<Word> {
        let tree = spanning_tree(&self.rows);
        let mut reps = vec![Word::identity(); self.rows.len()];
        for c in 1..self.rows.len() {
            let (p, x) = tree[c].expect("standardized tables are connected");
            let g = &self.generators[x / 2];
            reps[c] = reps[p].concat(&Word::from(Letter::new(g.clone(), x % 2 == 1)));
        }
        reps
    }

    /// The permutation of the cosets induced by each generator (right action).
    pub fn permutations(&self) -> Option<Vec<Permutation>> {
        if !self.complete {
            return None;
        }
        (0..self.generators.len())
            .map(|i| {
                Permutation::from_images(self.rows.iter().map(|r| r[2 * i].map(|c| c as u32)).collect::<Option<_>>()?)
            })
            .collect()
    }

    /// Full scan: symmetric, total, every relator closes at every coset and
    /// every subgroup generator fixes coset 0.
    pub fn verify(&self, p: &FinitePresentation) -> Result<(), SubgroupError> {
        let fail = |m: String| Err(SubgroupError::Inconsistent(m));
        if !self.complete {
            return fail("table is not complete".into());
        }
        if self.generators != p.generators() {
            return fail("table and presentation use different generators".into());
        }
        for (c, row) in self.rows.iter().enumerate() {
            for (x, e) in row.iter().enumerate() {
                match e {
                    Some(d) if self.rows[*d][x ^ 1] == Some(c) => {}
                    _ => return fail(format!("coset {c} column {x} is not a bijection")),
                }
            }
            for r in p.relators() {
                if self.act(c, r) != Some(c) {
                    return fail(format!("relator {r} does not close at coset {c}"));
                }
            }
        }
        for w in &self.subgroup_generators {
            if self.act(0, w) != Some(0) {
                return fail(format!("subgroup generator {w} moves coset 0"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> CosetTableJson {
        CosetTableJson {
            generators: self.generators.iter().map(ToString::to_string).collect(),
            subgroup_generators: self.subgroup_generators.iter().map(ToString::to_string).collect(),
            index: self.index(),
            complete: self.complete,
            permutations: (0..self.generators.len()).map(|i| self.rows.iter().map(|r| r[2 * i]).collect()).collect(),
        }
    }
}

/// Enumerates the cosets of `⟨subgens⟩` in the group presented by `p`,
/// allocating at most `max_cosets` rows (dead rows included).
pub fn todd_coxeter(p: &FinitePresentation, subgens: &[Word], max_cosets: usize) -> Result<CosetTable, SubgroupError> {
    if max_cosets == 0 {
        return Err(SubgroupError::InvalidBudget);
    }
    for w in subgens {
        p.check_word(w)?;
    }
    let relators = p.encoded_relators();
    let subwords: Vec<Vec<usize>> = subgens.iter().map(|w| p.encode(w)).collect::<Result<_, _>>()?;
    let mut e = Enumerator { a: PartialAction::new(2 * p.rank()), max: max_cosets };

    let outcome = (|| {
        for w in &subwords {
            e.scan_and_fill(0, w)?;
        }
        let mut c = 0;
        while c < e.a.allocated() {
            for r in &relators {
                if !e.a.is_live(c) {
                    break;
                }
                e.scan_and_fill(c, r)?;
            }
            for x in 0..e.a.cols() {
                if !e.a.is_live(c) {
                    break;
                }
                if e.a.get(c, x) == UNDEF {
                    e.define(c, x)?;
                }
            }
            c += 1;
        }
        Ok(())
    })();

    let table = CosetTable {
        generators: p.generators().to_vec(),
        rows: e.a.export(),
        complete: outcome.is_ok(),
        subgroup_generators: subgens.to_vec(),
    };
    match outcome {
        Ok(()) => {
            table.verify(p).expect("completed coset table must be consistent");
            Ok(table)
        }
        Err(Overflow) => Err(SubgroupError::BudgetExceeded { max_cosets, partial: Box::new(table) }),
    }
}

struct Overflow;

struct Enumerator {
    a: PartialAction,
    max: usize,
}

impl Enumerator {
    fn define(&mut self, c: usize, x: usize) -> Result<usize, Overflow> {
        if self.a.allocated() >= self.max {
            return Err(Overflow);
        }
        let d = self.a.add_point();
        self.a.link(c, x, d);
        Ok(d)
    }

    /// Traces `w` from `c` forwards and backwards, defining new cosets until
    /// the gap closes; a one-letter gap becomes a deduction and a
    /// mismatch a coincidence.
    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<(), Overflow> {
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0, w.len());
        loop {
            while i < j && self.a.get(f, w[i]) != UNDEF {
                f = self.a.get(f, w[i]);
                i += 1;
            }
            if i == j {
                if f != b {
                    self.a.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i && self.a.get(b, w[j - 1] ^ 1) != UNDEF {
                b = self.a.get(b, w[j - 1] ^ 1);
                j -= 1;
            }
            if j == i {
                self.a.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.a.link(f, w[i], b);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

/// Decides the word problem of a finite group from the coset table of its
/// trivial subgroup (the regular representation): a word is trivial iff it
/// fixes every coset.
#[derive(Debug, Clone)]
pub struct CosetTableOracle {
    table: CosetTable,
}

impl CosetTableOracle {
    /// Requires a complete table of a subgroup with trivial core, typically
    /// the trivial subgroup.
    pub fn new(table: CosetTable) -> Result<Self, SubgroupError> {
        if !table.complete {
            return Err(SubgroupError::Inconsistent("oracle needs a complete coset table".into()));
        }
        Ok(Self { table })
    }

    /// Enumerates the cosets of the trivial subgroup of `p`.
    pub fn for_group(p: &FinitePresentation, max_cosets: usize) -> Result<Self, SubgroupError> {
        Self::new(todd_coxeter(p, &[], max_cosets)?)
    }

    pub fn order(&self) -> usize {
        self.table.index()
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }
}

impl WordOracle for CosetTableOracle {
    fn is_trivial(&self, w: &Word) -> Result<bool, OracleError> {
        if let Some(l) = w.letters().iter().find(|l| self.table.column(l).is_none()) {
            return Err(OracleError::UnknownGenerator(l.gen.to_string()));
        }
        Ok((0..self.table.index()).all(|c| self.table.act(c, w) == Some(c)))
    }

    fn describe(&self) -> String {
        format!("coset table of order {}", self.table.index())
    }

    fn permutation_images(&self, gens: &[Generator]) -> Option<Vec<Permutation>> {
        let perms = self.table.permutations()?;
        gens.iter().map(|g| self.table.generators.iter().position(|h| h == g).map(|i| perms[i].clone())).collect()
    }
}
