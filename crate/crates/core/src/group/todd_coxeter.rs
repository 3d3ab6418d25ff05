//! Felsch-strategy coset enumeration.
//!
//! Scan order is fixed: cosets are defined at the first undefined entry in
//! (coset, column) order, where column `2i` is generator `i+1` and `2i+1` its
//! inverse. Deductions are processed first-in first-out, each one scanned
//! against every cyclic conjugate of the relators and their inverses that
//! starts with the deduced letter. Completed tables are compacted and then
//! standardized by breadth-first search from the subgroup coset, so equal
//! inputs always give the same row layout.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use super::finite::FiniteTable;
use super::presentation::Presentation;
use super::word::{Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TcError {
    #[error("max_cosets must be at least 1")]
    ZeroBudget,
    #[error("subgroup generator {index}: {source}")]
    BadSubgroupWord {
        index: usize,
        #[source]
        source: WordError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CosetStatus {
    Complete,
    BudgetExhausted,
}

/// Coset table; row 0 is the subgroup coset.
#[derive(Debug, Clone, Serialize)]
pub struct CosetTable {
    rank: usize,
    rows: Vec<Vec<Option<u32>>>,
    subgroup_generators: Vec<Word>,
    status: CosetStatus,
    /// Total coset definitions made, including later-merged ones.
    defined: usize,
}

const UNDEF: u32 = u32::MAX;

fn column(l: i32) -> usize {
    let g = l.unsigned_abs() as usize - 1;
    if l > 0 {
        2 * g
    } else {
        2 * g + 1
    }
}

struct Enumerator {
    ncols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    deductions: VecDeque<(u32, usize)>,
    max_cosets: usize,
    /// Cyclic conjugates of relators and inverses, grouped by first column,
    /// stored as column sequences.
    by_first: Vec<Vec<Vec<usize>>>,
    exhausted: bool,
}

impl Enumerator {
    fn new(p: &Presentation, max_cosets: usize) -> Self {
        let ncols = 2 * p.rank();
        let mut by_first: Vec<Vec<Vec<usize>>> = vec![Vec::new(); ncols];
        for r in p.relators() {
            for base in [r.clone(), r.inverse()] {
                for rot in base.rotations() {
                    let cols: Vec<usize> = rot.letters().iter().map(|&l| column(l)).collect();
                    let first = cols[0];
                    if !by_first[first].contains(&cols) {
                        by_first[first].push(cols);
                    }
                }
            }
        }
        Enumerator {
            ncols,
            table: vec![UNDEF; ncols],
            parent: vec![0],
            deductions: VecDeque::new(),
            max_cosets,
            by_first,
            exhausted: false,
        }
    }

    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.ncols + x]
    }

    fn set(&mut self, c: u32, x: usize, v: u32) {
        self.table[c as usize * self.ncols + x] = v;
    }

    fn live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = c;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn define(&mut self, c: u32, x: usize) -> bool {
        if self.parent.len() >= self.max_cosets {
            self.exhausted = true;
            return false;
        }
        let n = self.parent.len() as u32;
        self.parent.push(n);
        self.table.extend(std::iter::repeat_n(UNDEF, self.ncols));
        self.set(c, x, n);
        self.set(n, x ^ 1, c);
        self.deductions.push_back((c, x));
        true
    }

    fn merge(&mut self, a: u32, b: u32, queue: &mut Vec<u32>) {
        let (p, q) = (self.rep(a), self.rep(b));
        if p != q {
            let (lo, hi) = (p.min(q), p.max(q));
            self.parent[hi as usize] = lo;
            queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let g = queue[i];
            i += 1;
            for x in 0..self.ncols {
                let d = self.get(g, x);
                if d == UNDEF {
                    continue;
                }
                self.set(d, x ^ 1, UNDEF);
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mx = self.get(mu, x);
                if mx != UNDEF {
                    self.merge(nu, mx, &mut queue);
                } else {
                    let nx = self.get(nu, x ^ 1);
                    if nx != UNDEF {
                        self.merge(mu, nx, &mut queue);
                    } else {
                        self.set(mu, x, nu);
                        self.set(nu, x ^ 1, mu);
                        self.deductions.push_back((mu, x));
                    }
                }
            }
        }
    }

    /// Scans `word` (columns) at coset `a`; with `fill`, defines new cosets
    /// to close the scan.
    fn scan(&mut self, a: u32, word: &[usize], fill: bool) {
        let n = word.len();
        let mut f = a;
        let mut b = a;
        let mut i = 0usize;
        let mut j = n; // exclusive upper end: letters i..j are unscanned
        loop {
            while i < j {
                let next = self.get(f, word[i]);
                if next == UNDEF {
                    break;
                }
                f = next;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            while j > i {
                let next = self.get(b, word[j - 1] ^ 1);
                if next == UNDEF {
                    break;
                }
                b = next;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return;
            }
            if j == i + 1 {
                let x = word[i];
                self.set(f, x, b);
                self.set(b, x ^ 1, f);
                self.deductions.push_back((f, x));
                return;
            }
            if !fill || !self.define(f, word[i]) {
                return;
            }
        }
    }

    fn process_deductions(&mut self) {
        while let Some((a, x)) = self.deductions.pop_front() {
            if !self.live(a) {
                continue;
            }
            let words = self.by_first[x].clone();
            for w in &words {
                self.scan(a, w, false);
                if !self.live(a) {
                    break;
                }
            }
            if !self.live(a) {
                continue;
            }
            let b = self.get(a, x);
            if b == UNDEF || !self.live(b) {
                continue;
            }
            let words = self.by_first[x ^ 1].clone();
            for w in &words {
                self.scan(b, w, false);
                if !self.live(b) {
                    break;
                }
            }
        }
    }

    fn run(&mut self, subgroup: &[Vec<usize>]) {
        for w in subgroup {
            if !w.is_empty() {
                self.scan(0, w, true);
                if self.exhausted {
                    return;
                }
                self.process_deductions();
            }
        }
        let mut c = 0u32;
        while (c as usize) < self.parent.len() {
            if self.live(c) {
                for x in 0..self.ncols {
                    if !self.live(c) {
                        break;
                    }
                    if self.get(c, x) == UNDEF {
                        if !self.define(c, x) {
                            return;
                        }
                        self.process_deductions();
                    }
                }
            }
            c += 1;
        }
    }

    fn finish(mut self, rank: usize, subgroup_generators: Vec<Word>) -> CosetTable {
        let defined = self.parent.len();
        let live: Vec<u32> = (0..self.parent.len() as u32).filter(|&c| self.live(c)).collect();
        let mut order = vec![UNDEF; self.parent.len()];
        let status = if self.exhausted {
            for (i, &c) in live.iter().enumerate() {
                order[c as usize] = i as u32;
            }
            CosetStatus::BudgetExhausted
        } else {
            // standardize by BFS from the subgroup coset
            let mut next = 0u32;
            order[0] = 0;
            next += 1;
            let mut queue = VecDeque::from([0u32]);
            while let Some(c) = queue.pop_front() {
                for x in 0..self.ncols {
                    let d = self.get(c, x);
                    let d = self.rep(d);
                    if order[d as usize] == UNDEF {
                        order[d as usize] = next;
                        next += 1;
                        queue.push_back(d);
                    }
                }
            }
            CosetStatus::Complete
        };
        let count = live.iter().filter(|&&c| order[c as usize] != UNDEF).count();
        let mut rows = vec![vec![None; self.ncols]; count];
        for &c in &live {
            let new = order[c as usize];
            if new == UNDEF {
                continue;
            }
            for x in 0..self.ncols {
                let d = self.get(c, x);
                rows[new as usize][x] = if d == UNDEF {
                    None
                } else {
                    let r = self.rep(d);
                    Some(order[r as usize]).filter(|&v| v != UNDEF)
                };
            }
        }
        CosetTable {
            rank,
            rows,
            subgroup_generators,
            status,
            defined,
        }
    }
}

/// Enumerates the cosets of `⟨subgroup⟩` in the group presented by `p`,
/// allocating at most `max_cosets` coset rows.
pub fn todd_coxeter(p: &Presentation, subgroup: &[Word], max_cosets: usize) -> Result<CosetTable, TcError> {
    if max_cosets == 0 {
        return Err(TcError::ZeroBudget);
    }
    let mut sub_cols = Vec::with_capacity(subgroup.len());
    for (index, w) in subgroup.iter().enumerate() {
        w.validate(p.rank())
            .map_err(|source| TcError::BadSubgroupWord { index, source })?;
        sub_cols.push(w.reduced().letters().iter().map(|&l| column(l)).collect::<Vec<_>>());
    }
    let mut e = Enumerator::new(p, max_cosets);
    e.run(&sub_cols);
    Ok(e.finish(p.rank(), subgroup.to_vec()))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableModelError {
    #[error("coset table is incomplete (budget exhausted)")]
    Incomplete,
    #[error("coset table is for a nontrivial subgroup")]
    NontrivialSubgroup,
}

impl CosetTable {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn status(&self) -> CosetStatus {
        self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == CosetStatus::Complete
    }

    /// Number of (live) cosets; equals the subgroup index when complete.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn definitions(&self) -> usize {
        self.defined
    }

    pub fn subgroup_generators(&self) -> &[Word] {
        &self.subgroup_generators
    }

    pub fn rows(&self) -> &[Vec<Option<u32>>] {
        &self.rows
    }

    /// Image of `coset` under the letter `l`.
    pub fn act(&self, coset: u32, l: i32) -> Option<u32> {
        self.rows[coset as usize][column(l)]
    }

    pub fn act_word(&self, coset: u32, w: &Word) -> Option<u32> {
        w.letters().iter().try_fold(coset, |c, &l| self.act(c, l))
    }

    /// Shortlex-first word carrying the subgroup coset to each coset.
    pub fn representatives(&self) -> Vec<Option<Word>> {
        let mut reps: Vec<Option<Word>> = vec![None; self.rows.len()];
        if self.rows.is_empty() {
            return reps;
        }
        reps[0] = Some(Word::empty());
        let mut queue = VecDeque::from([0u32]);
        while let Some(c) = queue.pop_front() {
            let base = reps[c as usize].clone().unwrap();
            for g in 1..=self.rank as i32 {
                for l in [g, -g] {
                    if let Some(d) = self.act(c, l) {
                        if reps[d as usize].is_none() {
                            reps[d as usize] = Some(base.concat(&Word::letter(l)));
                            queue.push_back(d);
                        }
                    }
                }
            }
        }
        reps
    }
}

/// Regular-representation model of a complete table over the trivial
/// subgroup: elements are coset indices, acting by right multiplication.
pub fn model_from_table(t: &CosetTable) -> Result<FiniteTable, TableModelError> {
    if !t.is_complete() {
        return Err(TableModelError::Incomplete);
    }
    let n = t.len();
    let reps: Vec<Word> = t
        .representatives()
        .into_iter()
        .map(|r| r.expect("complete tables are connected"))
        .collect();
    // stabilizer of coset 0 is trivial iff every Schreier generator acts trivially
    for c in 0..n as u32 {
        for g in 1..=t.rank() as i32 {
            let d = t.act(c, g).unwrap();
            let schreier = reps[c as usize].concat(&Word::letter(g)).concat(&reps[d as usize].inverse());
            for x in 0..n as u32 {
                if t.act_word(x, &schreier) != Some(x) {
                    return Err(TableModelError::NontrivialSubgroup);
                }
            }
        }
    }
    let table: Vec<Vec<u32>> = (0..n as u32)
        .map(|a| reps.iter().map(|w| t.act_word(a, w).unwrap()).collect())
        .collect();
    let generators = (1..=t.rank() as i32).map(|g| t.act(0, g).unwrap()).collect();
    Ok(FiniteTable::new(table, 0, generators).expect("regular representation is a group"))
}
