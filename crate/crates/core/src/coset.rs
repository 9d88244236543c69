//! Todd–Coxeter enumeration of the regular action of a finite quotient.
//!
//! HLT strategy: every relator is scanned at every live coset in order,
//! undefined entries are filled by defining new cosets, and coincidences are
//! processed with a union-find queue. The finished table is renumbered in
//! breadth-first order from coset 0 so the output is canonical.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::{generator_of, Letter, Word};

pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

const NONE: usize = usize::MAX;

/// Right action of the generators on the cosets of the trivial subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetTable {
    coset_count: usize,
    /// `action[g][c] = c·g`.
    action: Vec<Vec<usize>>,
}

fn column(l: Letter) -> usize {
    2 * generator_of(l) + usize::from(l < 0)
}

struct Enumerator {
    cols: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    live: usize,
    max_cosets: usize,
    queue: VecDeque<usize>,
}

impl Enumerator {
    fn new(generator_count: usize, max_cosets: usize) -> Self {
        let cols = 2 * generator_count;
        Self { cols, table: vec![vec![NONE; cols]], parent: vec![0], live: 1, max_cosets, queue: VecDeque::new() }
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<()> {
        if self.live >= self.max_cosets {
            return Err(Error::CosetOverflow { limit: self.max_cosets });
        }
        let d = self.table.len();
        self.table.push(vec![NONE; self.cols]);
        self.parent.push(d);
        self.live += 1;
        self.table[c][x] = d;
        self.table[d][x ^ 1] = c;
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut k = c;
        while self.parent[k] != root {
            let next = self.parent[k];
            self.parent[k] = root;
            k = next;
        }
        root
    }

    fn merge(&mut self, k: usize, l: usize) {
        let (k, l) = (self.rep(k), self.rep(l));
        if k == l {
            return;
        }
        let (keep, drop) = (k.min(l), k.max(l));
        self.parent[drop] = keep;
        self.live -= 1;
        self.queue.push_back(drop);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        while let Some(e) = self.queue.pop_front() {
            for x in 0..self.cols {
                let f = self.table[e][x];
                if f == NONE {
                    continue;
                }
                if self.table[f][x ^ 1] == e {
                    self.table[f][x ^ 1] = NONE;
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                if self.table[e1][x] != NONE {
                    let t = self.table[e1][x];
                    self.merge(f1, t);
                } else if self.table[f1][x ^ 1] != NONE {
                    let t = self.table[f1][x ^ 1];
                    self.merge(e1, t);
                } else {
                    self.table[e1][x] = f1;
                    self.table[f1][x ^ 1] = e1;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, word: &[usize]) -> Result<()> {
        let mut f = c;
        let mut b = c;
        let mut i = 0isize;
        let mut j = word.len() as isize - 1;
        loop {
            while i <= j && self.table[f][word[i as usize]] != NONE {
                f = self.table[f][word[i as usize]];
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.table[b][word[j as usize] ^ 1] != NONE {
                b = self.table[b][word[j as usize] ^ 1];
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                let x = word[i as usize];
                self.table[f][x] = b;
                self.table[b][x ^ 1] = f;
                return Ok(());
            }
            self.define(f, word[i as usize])?;
        }
    }

    fn run(&mut self, relators: &[Vec<usize>]) -> Result<()> {
        let mut c = 0;
        while c < self.table.len() {
            for r in relators {
                if !self.is_live(c) {
                    break;
                }
                self.scan_and_fill(c, r)?;
            }
            if self.is_live(c) {
                for x in 0..self.cols {
                    if self.is_live(c) && self.table[c][x] == NONE {
                        self.define(c, x)?;
                    }
                }
            }
            c += 1;
        }
        Ok(())
    }

    /// Renumbers live cosets breadth-first from coset 0 in column order.
    fn standardize(mut self, generator_count: usize) -> CosetTable {
        let n = self.table.len();
        let mut number = vec![NONE; n];
        let mut order = Vec::with_capacity(self.live);
        let start = self.rep(0);
        number[start] = 0;
        order.push(start);
        let mut k = 0;
        while k < order.len() {
            let c = order[k];
            for x in 0..self.cols {
                let d = self.rep(self.table[c][x]);
                if number[d] == NONE {
                    number[d] = order.len();
                    order.push(d);
                }
            }
            k += 1;
        }
        let action = (0..generator_count)
            .map(|g| order.iter().map(|&c| number[self.rep(self.table[c][2 * g])]).collect())
            .collect();
        CosetTable { coset_count: order.len(), action }
    }
}

/// Enumerates the cosets of the trivial subgroup in
/// `⟨generators | relators ∪ extra_relators⟩`, i.e. the regular action of that
/// finite quotient.
pub fn todd_coxeter(p: &Presentation, extra_relators: &[Word], max_cosets: usize) -> Result<CosetTable> {
    if max_cosets == 0 {
        return Err(Error::InvalidInput("max_cosets must be at least 1".into()));
    }
    let n = p.generator_count();
    for w in extra_relators {
        if let Some(g) = w.max_generator() {
            if g >= n {
                return Err(Error::UnknownGenerator { index: g as i64 + 1, count: n });
            }
        }
    }
    let relators: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .chain(extra_relators)
        .filter(|w| !w.is_identity())
        .map(|w| w.letters().iter().map(|&l| column(l)).collect())
        .collect();
    let mut e = Enumerator::new(n, max_cosets);
    e.run(&relators)?;
    let table = e.standardize(n);
    debug_assert!(table.validate(&p.relators().iter().chain(extra_relators).cloned().collect::<Vec<_>>()).is_ok());
    Ok(table)
}

impl CosetTable {
    pub fn coset_count(&self) -> usize {
        self.coset_count
    }

    pub fn generator_count(&self) -> usize {
        self.action.len()
    }

    /// Permutation `c ↦ c·g` of generator `g`.
    pub fn action(&self, g: usize) -> &[usize] {
        &self.action[g]
    }

    /// `c·w`, acting letter by letter from the left end of `w`.
    pub fn act(&self, mut c: usize, w: &Word) -> usize {
        for &l in w.letters() {
            c = self.act_letter(c, l);
        }
        c
    }

    pub fn act_letter(&self, c: usize, l: Letter) -> usize {
        let perm = &self.action[generator_of(l)];
        if l > 0 {
            perm[c]
        } else {
            // tables are small and inverse lookups rare outside evaluation
            perm.iter().position(|&d| d == c).expect("bijection")
        }
    }

    /// Inverse permutations, one per generator.
    pub fn inverse_actions(&self) -> Vec<Vec<usize>> {
        self.action
            .iter()
            .map(|perm| {
                let mut inv = vec![0; perm.len()];
                for (c, &d) in perm.iter().enumerate() {
                    inv[d] = c;
                }
                inv
            })
            .collect()
    }

    /// Checks bijectivity, relators acting trivially and transitivity from coset 0.
    pub fn validate(&self, relators: &[Word]) -> Result<()> {
        let n = self.coset_count;
        for perm in &self.action {
            let mut seen = vec![false; n];
            for &d in perm {
                if d >= n || std::mem::replace(&mut seen[d], true) {
                    return Err(Error::InvalidInput("generator action is not a bijection".into()));
                }
            }
        }
        let inv = self.inverse_actions();
        let act = |mut c: usize, w: &Word| {
            for &l in w.letters() {
                let g = generator_of(l);
                c = if l > 0 { self.action[g][c] } else { inv[g][c] };
            }
            c
        };
        for r in relators {
            if (0..n).any(|c| act(c, r) != c) {
                return Err(Error::InvalidInput("a relator acts nontrivially".into()));
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for g in 0..self.action.len() {
                for d in [self.action[g][c], inv[g][c]] {
                    if !seen[d] {
                        seen[d] = true;
                        stack.push(d);
                    }
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidInput("action is not transitive".into()));
        }
        Ok(())
    }
}
