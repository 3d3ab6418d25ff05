//! Dehn's algorithm for metric small-cancellation presentations.

use std::collections::HashMap;
use std::sync::Mutex;

use thiserror::Error;

use super::model::{Element, GroupModel};
use super::presentation::Presentation;
use super::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DehnError {
    #[error("presentation is not C'(1/6): piece of length {piece} shared by {first} and {second}")]
    NotSmallCancellation { first: Word, second: Word, piece: usize },
    #[error("relator {0} is not cyclically reduced")]
    NotCyclicallyReduced(Word),
}

/// Cyclic conjugates of all relators and their inverses, deduplicated, in a
/// fixed order.
pub fn symmetrized(p: &Presentation) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    for r in p.relators() {
        for base in [r.clone(), r.inverse()] {
            for rot in base.rotations() {
                if !out.contains(&rot) {
                    out.push(rot);
                }
            }
        }
    }
    out
}

fn common_prefix(a: &[i32], b: &[i32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Exhaustive C'(1/6) check over pieces of the symmetrized relator set.
pub fn check_small_cancellation(p: &Presentation) -> Result<(), DehnError> {
    for r in p.relators() {
        if r.cyclically_reduced() != *r {
            return Err(DehnError::NotCyclicallyReduced(r.clone()));
        }
    }
    for r in p.relators() {
        // a proper power overlaps itself in a piece of length |r| - period
        let n = r.len();
        if let Some(k) = (1..n).find(|&k| n % k == 0 && r.letters()[k..] == r.letters()[..n - k]) {
            return Err(DehnError::NotSmallCancellation {
                first: r.clone(),
                second: r.clone(),
                piece: n - k,
            });
        }
    }
    let rs = symmetrized(p);
    for (i, a) in rs.iter().enumerate() {
        for b in &rs[i + 1..] {
            let piece = common_prefix(a.letters(), b.letters());
            if 6 * piece >= a.len() || 6 * piece >= b.len() {
                return Err(DehnError::NotSmallCancellation {
                    first: a.clone(),
                    second: b.clone(),
                    piece,
                });
            }
        }
    }
    Ok(())
}

/// Validated Dehn reducer for one presentation.
#[derive(Debug, Clone)]
pub struct DehnReducer {
    rstar: Vec<Word>,
}

impl DehnReducer {
    pub fn new(p: &Presentation) -> Result<Self, DehnError> {
        check_small_cancellation(p)?;
        Ok(DehnReducer { rstar: symmetrized(p) })
    }

    /// Replaces, at the leftmost position, the longest subword that is more
    /// than half of a symmetrized relator by the inverse of its complement;
    /// repeats until no such subword exists.
    pub fn reduce(&self, w: &Word) -> Word {
        let mut cur = w.reduced().into_letters();
        'outer: loop {
            for i in 0..cur.len() {
                let mut best: Option<(usize, &Word)> = None;
                for r in &self.rstar {
                    let l = common_prefix(&cur[i..], r.letters());
                    if 2 * l > r.len() && best.is_none_or(|(bl, _)| l > bl) {
                        best = Some((l, r));
                    }
                }
                if let Some((l, r)) = best {
                    let complement = Word::new(r.letters()[l..].to_vec()).inverse();
                    let mut next = cur[..i].to_vec();
                    next.extend_from_slice(complement.letters());
                    next.extend_from_slice(&cur[i + l..]);
                    cur = Word::new(next).reduced().into_letters();
                    continue 'outer;
                }
            }
            return Word::new(cur);
        }
    }
}

/// `dehn_reduce` as a one-shot: validates C'(1/6), then reduces.
pub fn dehn_reduce(p: &Presentation, w: &Word) -> Result<Word, DehnError> {
    Ok(DehnReducer::new(p)?.reduce(w))
}

/// Group model for a C'(1/6) presentation. Dehn-reduced words are not unique,
/// so elements are interned: each new element is replaced by the first
/// materialized word it equals, which keeps keys injective per session.
pub struct DehnModel {
    presentation: Presentation,
    reducer: DehnReducer,
    interned: Mutex<Interner>,
}

#[derive(Default)]
struct Interner {
    reps: Vec<Word>,
    exact: HashMap<Word, usize>,
}

impl DehnModel {
    pub fn new(p: Presentation) -> Result<Self, DehnError> {
        let reducer = DehnReducer::new(&p)?;
        Ok(DehnModel {
            presentation: p,
            reducer,
            interned: Mutex::new(Interner::default()),
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    fn canon(&self, w: Word) -> Element {
        let w = self.reducer.reduce(&w);
        let mut table = self.interned.lock().unwrap();
        if let Some(&i) = table.exact.get(&w) {
            return Element::Word(table.reps[i].letters().to_vec());
        }
        let winv = w.inverse();
        let found = table
            .reps
            .iter()
            .position(|r| self.reducer.reduce(&r.concat(&winv)).is_empty());
        let idx = match found {
            Some(i) => i,
            None => {
                table.reps.push(w.clone());
                table.reps.len() - 1
            }
        };
        table.exact.insert(w, idx);
        Element::Word(table.reps[idx].letters().to_vec())
    }

    fn word(e: &Element) -> Word {
        match e {
            Element::Word(w) => Word::new(w.clone()),
            other => panic!("presentation model given a foreign element {other:?}"),
        }
    }
}

impl GroupModel for DehnModel {
    fn describe(&self) -> String {
        format!(
            "small-cancellation group on {} generators with {} relators",
            self.presentation.rank(),
            self.presentation.relators().len()
        )
    }

    fn rank(&self) -> usize {
        self.presentation.rank()
    }

    fn identity(&self) -> Element {
        Element::Word(vec![])
    }

    fn generator(&self, index: usize) -> Element {
        self.canon(Word::letter(index as i32 + 1))
    }

    fn multiply(&self, a: &Element, b: &Element) -> Element {
        self.canon(Self::word(a).concat(&Self::word(b)))
    }

    fn invert(&self, a: &Element) -> Element {
        self.canon(Self::word(a).inverse())
    }

    fn format_element(&self, a: &Element) -> String {
        Self::word(a).to_text()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::model::check_group_axioms;

    fn genus2() -> Presentation {
        Presentation::from_text(4, &["abABcdCD"]).unwrap()
    }

    #[test]
    fn full_relator_reduces_to_identity() {
        let p = genus2();
        let w = p.relators()[0].clone();
        assert!(dehn_reduce(&p, &w).unwrap().is_empty());
    }

    #[test]
    fn single_generator_is_dehn_reduced() {
        assert_eq!(dehn_reduce(&genus2(), &Word::letter(1)).unwrap(), Word::letter(1));
    }

    #[test]
    fn relator_minus_last_letter() {
        let p = genus2();
        let r = p.relators()[0].clone();
        let short = Word::new(r.letters()[..r.len() - 1].to_vec());
        let out = dehn_reduce(&p, &short).unwrap();
        let last = *r.letters().last().unwrap();
        assert_eq!(out, Word::letter(-last));
        // oracle: short · out^{-1} is a cyclic conjugate of r or r^{-1}
        let joined = short.concat(&out.inverse()).reduced();
        let conjugates: Vec<Word> = r.rotations().chain(r.inverse().rotations()).collect();
        assert!(conjugates.contains(&joined));
    }

    #[test]
    fn rejects_large_pieces() {
        // abab is a proper power: it overlaps its own rotation in length 2
        let p = Presentation::from_text(2, &["abab"]).unwrap();
        assert!(matches!(
            dehn_reduce(&p, &Word::letter(1)),
            Err(DehnError::NotSmallCancellation { .. })
        ));
    }

    #[test]
    fn conjugates_of_relator_vanish() {
        let p = genus2();
        let red = DehnReducer::new(&p).unwrap();
        let r = &p.relators()[0];
        for c in ["a", "bc", "DA"] {
            let g = Word::parse_text(c).unwrap();
            let w = g.concat(r).concat(&g.inverse());
            assert!(red.reduce(&w).is_empty(), "{c}");
        }
    }

    #[test]
    fn surface_model_axioms() {
        let m = DehnModel::new(genus2()).unwrap();
        check_group_axioms(&m, 60, 2, 6).unwrap();
    }
}
