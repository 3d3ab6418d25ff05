use std::collections::VecDeque;

use thiserror::Error;

use super::model::{Element, GroupModel, Subgroup};
use super::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("multiplication table is empty")]
    Empty,
    #[error("row {0} has the wrong length or out-of-range entries")]
    Malformed(usize),
    #[error("identity {0} does not act trivially")]
    BadIdentity(u32),
    #[error("row {0} is not a permutation")]
    NotLatin(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(u32, u32, u32),
    #[error("generator index {0} out of range")]
    BadGenerator(u32),
}

/// Finite group given by a full multiplication table `table[a][b] = a·b`.
#[derive(Debug, Clone)]
pub struct FiniteTable {
    table: Vec<Vec<u32>>,
    inverse: Vec<u32>,
    identity: u32,
    generators: Vec<u32>,
    names: Option<Vec<String>>,
}

impl FiniteTable {
    pub fn new(table: Vec<Vec<u32>>, identity: u32, generators: Vec<u32>) -> Result<Self, TableError> {
        let n = table.len();
        if n == 0 {
            return Err(TableError::Empty);
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n || row.iter().any(|&x| x as usize >= n) {
                return Err(TableError::Malformed(i));
            }
            let mut seen = vec![false; n];
            for &x in row {
                if std::mem::replace(&mut seen[x as usize], true) {
                    return Err(TableError::NotLatin(i));
                }
            }
        }
        let id = identity as usize;
        if id >= n || (0..n).any(|a| table[id][a] as usize != a || table[a][id] as usize != a) {
            return Err(TableError::BadIdentity(identity));
        }
        for &g in &generators {
            if g as usize >= n {
                return Err(TableError::BadGenerator(g));
            }
        }
        // exhaustive for small groups; larger tables are checked on a stride
        let stride = if n <= 128 { 1 } else { n / 64 + 1 };
        for a in (0..n).step_by(stride) {
            for b in 0..n {
                let ab = table[a][b] as usize;
                for c in (0..n).step_by(stride) {
                    if table[ab][c] != table[a][table[b][c] as usize] {
                        return Err(TableError::NotAssociative(a as u32, b as u32, c as u32));
                    }
                }
            }
        }
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            inverse[a] = table[a].iter().position(|&x| x == identity).unwrap() as u32;
        }
        Ok(FiniteTable {
            table,
            inverse,
            identity,
            generators,
            names: None,
        })
    }

    /// Cyclic group of order `n` generated by 1.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n)
            .map(|a| (0..n).map(|b| ((a + b) % n) as u32).collect())
            .collect();
        let gens = if n > 1 { vec![1] } else { vec![0] };
        FiniteTable::new(table, 0, gens).expect("cyclic table is a group")
    }

    /// Symmetric group S3 as permutations of {0,1,2}, generated by
    /// `r = (0 1 2)` and `t = (0 1)`.
    pub fn symmetric3() -> Self {
        let perms: Vec<[u8; 3]> = vec![[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
        let index = |p: [u8; 3]| perms.iter().position(|q| *q == p).unwrap() as u32;
        // (a·b)(i) = b(a(i)) : apply a first (right actions)
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index([b[a[0] as usize], b[a[1] as usize], b[a[2] as usize]]))
                    .collect()
            })
            .collect();
        FiniteTable::new(table, 0, vec![1, 3]).expect("S3 table is a group")
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        self.names = Some(names);
        self
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity_index(&self) -> u32 {
        self.identity
    }

    pub fn generator_indices(&self) -> &[u32] {
        &self.generators
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize][b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    /// Evaluates a word over this table's generators to an index.
    pub fn eval_index(&self, w: &Word) -> u32 {
        let mut acc = self.identity;
        for &l in w.letters() {
            let g = self.generators[l.unsigned_abs() as usize - 1];
            acc = self.mul(acc, if l > 0 { g } else { self.inv(g) });
        }
        acc
    }

    /// Order of an element.
    pub fn element_order(&self, a: u32) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Closure of a set of elements under multiplication: a membership bitmap.
    pub fn closure(&self, gens: &[u32]) -> Vec<bool> {
        let n = self.order();
        let mut inside = vec![false; n];
        inside[self.identity as usize] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                for y in [self.mul(x, g), self.mul(x, self.inv(g))] {
                    if !std::mem::replace(&mut inside[y as usize], true) {
                        queue.push_back(y);
                    }
                }
            }
        }
        inside
    }

    /// Shortlex-first word for every element (BFS over generators), when the
    /// generators generate the table.
    pub fn element_words(&self) -> Vec<Option<Word>> {
        let n = self.order();
        let mut words: Vec<Option<Word>> = vec![None; n];
        words[self.identity as usize] = Some(Word::empty());
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            let base = words[x as usize].clone().unwrap();
            for (i, &g) in self.generators.iter().enumerate() {
                for (l, y) in [(i as i32 + 1, self.mul(x, g)), (-(i as i32 + 1), self.mul(x, self.inv(g)))] {
                    if words[y as usize].is_none() {
                        words[y as usize] = Some(base.concat(&Word::letter(l)));
                        queue.push_back(y);
                    }
                }
            }
        }
        words
    }

    fn index_of(e: &Element) -> u32 {
        match e {
            Element::Index(i) => *i,
            other => panic!("finite table given a foreign element {other:?}"),
        }
    }
}

impl GroupModel for FiniteTable {
    fn describe(&self) -> String {
        format!("finite group of order {}", self.order())
    }

    fn rank(&self) -> usize {
        self.generators.len()
    }

    fn identity(&self) -> Element {
        Element::Index(self.identity)
    }

    fn generator(&self, index: usize) -> Element {
        Element::Index(self.generators[index])
    }

    fn multiply(&self, a: &Element, b: &Element) -> Element {
        Element::Index(self.mul(Self::index_of(a), Self::index_of(b)))
    }

    fn invert(&self, a: &Element) -> Element {
        Element::Index(self.inv(Self::index_of(a)))
    }

    fn format_element(&self, a: &Element) -> String {
        match (a, &self.names) {
            (Element::Index(i), Some(names)) => names[*i as usize].clone(),
            (Element::Index(i), None) => format!("e{i}"),
            (other, _) => format!("{other:?}"),
        }
    }

    fn subgroup(&self, generators: &[usize]) -> Option<Subgroup> {
        let gens: Vec<u32> = generators.iter().map(|&g| self.generators[g]).collect();
        let inside = self.closure(&gens);
        Some(Subgroup::new(generators.to_vec(), move |e| match e {
            Element::Index(i) => inside.get(*i as usize).copied().unwrap_or(false),
            _ => false,
        }))
    }

    fn finite_order(&self) -> Option<usize> {
        Some(self.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::model::check_group_axioms;

    #[test]
    fn cyclic_generator_order() {
        let c5 = FiniteTable::cyclic(5);
        assert_eq!(c5.element_order(1), 5);
        check_group_axioms(&c5, 100, 1, 8).unwrap();
    }

    #[test]
    fn s3_is_nonabelian_of_order_6() {
        let s3 = FiniteTable::symmetric3();
        assert_eq!(s3.order(), 6);
        assert_ne!(s3.mul(1, 3), s3.mul(3, 1));
        assert_eq!(s3.element_order(1), 3);
        assert_eq!(s3.element_order(3), 2);
        check_group_axioms(&s3, 100, 1, 8).unwrap();
    }

    #[test]
    fn rejects_non_group_tables() {
        assert_eq!(FiniteTable::new(vec![], 0, vec![]).unwrap_err(), TableError::Empty);
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert_eq!(FiniteTable::new(bad, 0, vec![1]).unwrap_err(), TableError::NotLatin(1));
    }

    #[test]
    fn closure_of_reflection_in_s3() {
        let s3 = FiniteTable::symmetric3();
        let h = s3.closure(&[3]);
        assert_eq!(h.iter().filter(|x| **x).count(), 2);
        let words = s3.element_words();
        assert!(words.iter().all(|w| w.is_some()));
    }
}
