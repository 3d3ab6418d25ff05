//! The pluggable group-arithmetic interface and the two simplest backends.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::word::Word;

/// A group element in normal form. Every backend keeps its elements
/// canonical, so structural equality is group equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Freely reduced word (free groups).
    Word(Vec<i32>),
    /// Coordinate vector (free abelian groups).
    Vector(Vec<i64>),
    /// Index into a finite multiplication table.
    Index(u32),
    /// Free-product normal form: nontrivial syllables from alternating factors.
    Syllables(Vec<(u32, Element)>),
    /// Direct-product components.
    Tuple(Vec<Element>),
    /// Amalgam normal form `c · t1 ⋯ tn`: an edge-group element followed by
    /// alternating nontrivial right-transversal representatives.
    Amalgam { edge: u32, syllables: Vec<(u8, u32)> },
}

impl Element {
    /// Injective byte encoding of the normal form.
    pub fn key(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.encode(&mut out);
        out
    }

    fn encode(&self, out: &mut Vec<u8>) {
        match self {
            Element::Word(w) => {
                out.push(0);
                put_varint(out, w.len() as i64);
                for &l in w {
                    put_varint(out, l as i64);
                }
            }
            Element::Vector(v) => {
                out.push(1);
                put_varint(out, v.len() as i64);
                for &x in v {
                    put_varint(out, x);
                }
            }
            Element::Index(i) => {
                out.push(2);
                put_varint(out, *i as i64);
            }
            Element::Syllables(s) => {
                out.push(3);
                put_varint(out, s.len() as i64);
                for (f, e) in s {
                    put_varint(out, *f as i64);
                    e.encode(out);
                }
            }
            Element::Tuple(t) => {
                out.push(4);
                put_varint(out, t.len() as i64);
                for e in t {
                    e.encode(out);
                }
            }
            Element::Amalgam { edge, syllables } => {
                out.push(5);
                put_varint(out, *edge as i64);
                put_varint(out, syllables.len() as i64);
                for (side, t) in syllables {
                    out.push(*side);
                    put_varint(out, *t as i64);
                }
            }
        }
    }
}

fn put_varint(out: &mut Vec<u8>, x: i64) {
    let mut z = ((x << 1) ^ (x >> 63)) as u64;
    loop {
        let b = (z & 0x7f) as u8;
        z >>= 7;
        if z == 0 {
            out.push(b);
            break;
        }
        out.push(b | 0x80);
    }
}

/// Membership predicate for the subgroup generated by a subset of the
/// model's generators.
#[derive(Clone)]
pub struct Subgroup {
    pub generators: Vec<usize>,
    contains: Arc<dyn Fn(&Element) -> bool + Send + Sync>,
}

impl Subgroup {
    pub fn new(generators: Vec<usize>, contains: impl Fn(&Element) -> bool + Send + Sync + 'static) -> Self {
        Subgroup {
            generators,
            contains: Arc::new(contains),
        }
    }

    pub fn contains(&self, e: &Element) -> bool {
        (self.contains)(e)
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup").field("generators", &self.generators).finish()
    }
}

pub trait GroupModel: Send + Sync {
    fn describe(&self) -> String;

    /// Number of generators.
    fn rank(&self) -> usize;

    fn identity(&self) -> Element;

    /// Generator by 0-based index.
    fn generator(&self, index: usize) -> Element;

    fn multiply(&self, a: &Element, b: &Element) -> Element;

    fn invert(&self, a: &Element) -> Element;

    fn canonical_key(&self, a: &Element) -> Vec<u8> {
        a.key()
    }

    fn format_element(&self, a: &Element) -> String {
        let key = self.canonical_key(a);
        let mut s = String::with_capacity(key.len() * 2);
        for b in key {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }

    /// Membership for `⟨generators⟩`, when this backend can decide it.
    /// The default handles only the trivial subgroup and the whole group.
    fn subgroup(&self, generators: &[usize]) -> Option<Subgroup> {
        default_subgroup(self.rank(), generators, self.identity())
    }

    /// Group order when the backend knows it is finite.
    fn finite_order(&self) -> Option<usize> {
        None
    }

    /// Element of a signed 1-based letter.
    fn letter(&self, l: i32) -> Element {
        let g = self.generator(l.unsigned_abs() as usize - 1);
        if l > 0 {
            g
        } else {
            self.invert(&g)
        }
    }

    fn eval(&self, w: &Word) -> Element {
        let mut acc = self.identity();
        for &l in w.letters() {
            acc = self.multiply(&acc, &self.letter(l));
        }
        acc
    }

    fn is_identity(&self, a: &Element) -> bool {
        *a == self.identity()
    }
}

pub(crate) fn default_subgroup(rank: usize, generators: &[usize], identity: Element) -> Option<Subgroup> {
    if generators.is_empty() {
        return Some(Subgroup::new(vec![], move |e| *e == identity));
    }
    let mut all: Vec<usize> = generators.to_vec();
    all.sort_unstable();
    all.dedup();
    if all == (0..rank).collect::<Vec<_>>() {
        return Some(Subgroup::new(all, |_| true));
    }
    None
}

pub type SharedModel = Arc<dyn GroupModel>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomViolation {
    #[error("associativity fails on sampled words {0}, {1}, {2}")]
    Associativity(Word, Word, Word),
    #[error("identity law fails on sampled word {0}")]
    Identity(Word),
    #[error("inverse law fails on sampled word {0}")]
    Inverse(Word),
}

/// Samples `samples` triples of random words (fixed seed) and checks the
/// group axioms on their images.
pub fn check_group_axioms(model: &dyn GroupModel, samples: usize, seed: u64, max_len: usize) -> Result<(), AxiomViolation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = model.rank() as i32;
    let random_word = |rng: &mut ChaCha8Rng| {
        if rank == 0 {
            return Word::empty();
        }
        let len = rng.gen_range(0..=max_len);
        Word::new(
            (0..len)
                .map(|_| {
                    let g = rng.gen_range(1..=rank);
                    if rng.gen_bool(0.5) {
                        g
                    } else {
                        -g
                    }
                })
                .collect(),
        )
    };
    let id = model.identity();
    for _ in 0..samples {
        let (u, v, w) = (random_word(&mut rng), random_word(&mut rng), random_word(&mut rng));
        let (a, b, c) = (model.eval(&u), model.eval(&v), model.eval(&w));
        let left = model.multiply(&model.multiply(&a, &b), &c);
        let right = model.multiply(&a, &model.multiply(&b, &c));
        if left != right {
            return Err(AxiomViolation::Associativity(u, v, w));
        }
        if model.multiply(&a, &id) != a || model.multiply(&id, &a) != a {
            return Err(AxiomViolation::Identity(u));
        }
        let inv = model.invert(&a);
        if model.multiply(&a, &inv) != id || model.multiply(&inv, &a) != id {
            return Err(AxiomViolation::Inverse(u));
        }
    }
    Ok(())
}

/// Free group on `rank` generators; elements are freely reduced words.
#[derive(Debug, Clone)]
pub struct FreeGroup {
    rank: usize,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Self {
        FreeGroup { rank }
    }
}

impl GroupModel for FreeGroup {
    fn describe(&self) -> String {
        format!("free group of rank {}", self.rank)
    }

    fn rank(&self) -> usize {
        self.rank
    }

    fn identity(&self) -> Element {
        Element::Word(Vec::new())
    }

    fn generator(&self, index: usize) -> Element {
        assert!(index < self.rank, "generator {index} out of range");
        Element::Word(vec![index as i32 + 1])
    }

    fn multiply(&self, a: &Element, b: &Element) -> Element {
        let (Element::Word(x), Element::Word(y)) = (a, b) else {
            panic!("free group given a foreign element");
        };
        let mut out = x.clone();
        for &l in y {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Element::Word(out)
    }

    fn invert(&self, a: &Element) -> Element {
        let Element::Word(x) = a else {
            panic!("free group given a foreign element");
        };
        Element::Word(x.iter().rev().map(|l| -l).collect())
    }

    fn format_element(&self, a: &Element) -> String {
        match a {
            Element::Word(w) => Word::new(w.clone()).to_text(),
            other => format!("{other:?}"),
        }
    }

    fn subgroup(&self, generators: &[usize]) -> Option<Subgroup> {
        let allowed: Vec<i32> = generators.iter().map(|&g| g as i32 + 1).collect();
        Some(Subgroup::new(generators.to_vec(), move |e| match e {
            Element::Word(w) => w.iter().all(|l| allowed.contains(&l.abs())),
            _ => false,
        }))
    }
}

/// Free abelian group `Z^rank` with the standard basis as generators.
#[derive(Debug, Clone)]
pub struct FreeAbelian {
    rank: usize,
}

impl FreeAbelian {
    pub fn new(rank: usize) -> Self {
        FreeAbelian { rank }
    }

    pub fn element(coords: &[i64]) -> Element {
        Element::Vector(coords.to_vec())
    }
}

impl GroupModel for FreeAbelian {
    fn describe(&self) -> String {
        format!("free abelian group of rank {}", self.rank)
    }

    fn rank(&self) -> usize {
        self.rank
    }

    fn identity(&self) -> Element {
        Element::Vector(vec![0; self.rank])
    }

    fn generator(&self, index: usize) -> Element {
        let mut v = vec![0; self.rank];
        v[index] = 1;
        Element::Vector(v)
    }

    fn multiply(&self, a: &Element, b: &Element) -> Element {
        let (Element::Vector(x), Element::Vector(y)) = (a, b) else {
            panic!("free abelian group given a foreign element");
        };
        Element::Vector(x.iter().zip(y).map(|(p, q)| p + q).collect())
    }

    fn invert(&self, a: &Element) -> Element {
        let Element::Vector(x) = a else {
            panic!("free abelian group given a foreign element");
        };
        Element::Vector(x.iter().map(|p| -p).collect())
    }

    fn format_element(&self, a: &Element) -> String {
        match a {
            Element::Vector(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                format!("({})", parts.join(","))
            }
            other => format!("{other:?}"),
        }
    }

    fn subgroup(&self, generators: &[usize]) -> Option<Subgroup> {
        let rank = self.rank;
        let allowed: Vec<bool> = (0..rank).map(|i| generators.contains(&i)).collect();
        Some(Subgroup::new(generators.to_vec(), move |e| match e {
            Element::Vector(v) => v.iter().zip(&allowed).all(|(x, ok)| *ok || *x == 0),
            _ => false,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_distinguish_variants() {
        let a = Element::Word(vec![1]);
        let b = Element::Vector(vec![1]);
        let c = Element::Index(1);
        assert_ne!(a.key(), b.key());
        assert_ne!(b.key(), c.key());
        assert_ne!(Element::Word(vec![-1]).key(), Element::Word(vec![1]).key());
    }

    #[test]
    fn free_group_axioms() {
        check_group_axioms(&FreeGroup::new(3), 200, 7, 10).unwrap();
    }

    #[test]
    fn free_abelian_axioms() {
        check_group_axioms(&FreeAbelian::new(2), 200, 7, 10).unwrap();
    }

    #[test]
    fn free_membership_is_letter_support() {
        let f = FreeGroup::new(2);
        let h = f.subgroup(&[0]).unwrap();
        assert!(h.contains(&f.eval(&Word::parse_text("aaA").unwrap())));
        assert!(!h.contains(&f.eval(&Word::parse_text("ab").unwrap())));
        assert!(h.contains(&f.eval(&Word::parse_text("abB").unwrap())));
    }

    #[test]
    fn abelian_membership() {
        let z2 = FreeAbelian::new(2);
        let h = z2.subgroup(&[1]).unwrap();
        assert!(h.contains(&FreeAbelian::element(&[0, 5])));
        assert!(!h.contains(&FreeAbelian::element(&[1, 5])));
    }
}
