//! Tietze simplification.

use std::sync::Arc;

use serde::Serialize;

use crate::group::{FiniteTable, FreeGroup, FreeProduct, Presentation, SharedModel, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TietzeMove {
    /// Cyclic reduction, trivial and duplicate relators dropped.
    Normalize { dropped: usize },
    /// `generator` solved from one relator and substituted everywhere.
    Eliminate { generator: String, expression: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TietzeResult {
    pub presentation: Presentation,
    pub moves: Vec<TietzeMove>,
    /// Every input generator as a word in the output generators.
    pub expressions: Vec<Word>,
    /// Input indices (0-based) of the surviving generators.
    pub kept: Vec<usize>,
}

/// Rotation- and inversion-invariant key of a cyclically reduced word.
fn cyclic_key(r: &Word) -> Word {
    let inv = r.inverse();
    r.rotations().chain(inv.rotations()).min().unwrap_or_default()
}

fn normalize(relators: &mut Vec<Word>) -> usize {
    let before = relators.len();
    let mut out: Vec<Word> = relators
        .iter()
        .map(|r| r.cyclically_reduced())
        .filter(|r| !r.is_empty())
        .collect();
    let mut seen = std::collections::HashSet::new();
    out.retain(|r| seen.insert(cyclic_key(r)));
    *relators = out;
    before - relators.len()
}

pub fn tietze_simplify(p: &Presentation, budget: usize) -> Presentation {
    tietze_simplify_tracked(p, budget).presentation
}

/// Repeatedly picks the shortest relator in which some generator occurs
/// exactly once (the highest such generator on ties), solves for it and
/// substitutes. Each elimination costs one unit of `budget`.
pub fn tietze_simplify_tracked(p: &Presentation, budget: usize) -> TietzeResult {
    let rank = p.rank();
    let names = p.generator_names();
    let mut relators: Vec<Word> = p.relators().to_vec();
    let mut alive = vec![true; rank];
    let mut expressions: Vec<Word> = (1..=rank as i32).map(Word::letter).collect();
    let mut moves = Vec::new();
    let mut left = budget;
    loop {
        let dropped = normalize(&mut relators);
        if dropped > 0 {
            moves.push(TietzeMove::Normalize { dropped });
        }
        if left == 0 {
            break;
        }
        let mut pick: Option<(usize, usize, i32)> = None;
        for (ri, r) in relators.iter().enumerate() {
            if pick.is_some_and(|(_, len, _)| r.len() > len) {
                continue;
            }
            for g in (1..=rank as i32).rev() {
                if r.occurrences(g) == 1 {
                    let better = match pick {
                        None => true,
                        Some((pi, len, pg)) => r.len() < len || (r.len() == len && (g > pg || (g == pg && ri < pi))),
                    };
                    if better {
                        pick = Some((ri, r.len(), g));
                    }
                    break;
                }
            }
        }
        let Some((ri, _, g)) = pick else { break };
        let r = relators.remove(ri);
        // rotate so that g^±1 leads: g^e w = 1, so g = w^-e
        let letters = r.letters();
        let pos = letters.iter().position(|l| l.abs() == g).expect("occurs once");
        let mut rot = letters[pos..].to_vec();
        rot.extend_from_slice(&letters[..pos]);
        let rest = Word::new(rot[1..].to_vec());
        let value = if rot[0] > 0 { rest.inverse() } else { rest };
        for w in relators.iter_mut() {
            *w = w.substitute(g, &value);
        }
        for e in expressions.iter_mut() {
            *e = e.substitute(g, &value);
        }
        alive[g as usize - 1] = false;
        moves.push(TietzeMove::Eliminate {
            generator: names[g as usize - 1].clone(),
            expression: value.to_text(),
        });
        left -= 1;
    }
    let kept: Vec<usize> = (0..rank).filter(|&i| alive[i]).collect();
    let mut renumber = vec![0i32; rank + 1];
    for (new, &old) in kept.iter().enumerate() {
        renumber[old + 1] = new as i32 + 1;
    }
    let map = |w: &Word| Word::new(w.letters().iter().map(|&l| l.signum() * renumber[l.unsigned_abs() as usize]).collect());
    let relators: Vec<Word> = relators.iter().map(map).collect();
    let expressions = expressions.iter().map(map).collect();
    let presentation = Presentation::new(kept.iter().map(|&i| names[i].clone()).collect(), relators)
        .expect("names stay distinct");
    TietzeResult {
        presentation,
        moves,
        expressions,
        kept,
    }
}

/// Model for a presentation whose relators are each a power of a single
/// generator: the free product of the cyclic groups so presented.
pub fn recognize_free_product(p: &Presentation) -> Option<SharedModel> {
    let mut orders = vec![0usize; p.rank()];
    for r in p.relators() {
        let g = r.letters().first()?.unsigned_abs() as usize;
        if !r.letters().iter().all(|l| *l == r.letters()[0]) {
            return None;
        }
        let k = r.len();
        orders[g - 1] = gcd(orders[g - 1], k);
    }
    if p.rank() == 0 {
        return Some(Arc::new(FiniteTable::cyclic(1)));
    }
    let factors: Vec<SharedModel> = orders
        .iter()
        .map(|&k| -> SharedModel {
            if k == 0 {
                Arc::new(FreeGroup::new(1))
            } else {
                Arc::new(FiniteTable::cyclic(k))
            }
        })
        .collect();
    Some(Arc::new(FreeProduct::new(factors)))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(names: &[&str], rels: &[&str]) -> Presentation {
        Presentation::new(
            names.iter().map(|s| s.to_string()).collect(),
            rels.iter().map(|r| Word::parse_text(r).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn kills_a_trivial_generator() {
        let q = tietze_simplify(&pres(&["x", "t"], &["b", "aa"]), 10);
        assert_eq!(q, pres(&["x"], &["aa"]));
    }

    #[test]
    fn substitutes_a_defined_generator() {
        let q = tietze_simplify(&pres(&["x", "y"], &["bA", "bbb"]), 10);
        assert_eq!(q, pres(&["x"], &["aaa"]));
    }

    #[test]
    fn budget_stops_early() {
        let r = tietze_simplify_tracked(&pres(&["x", "y", "z"], &["c", "b", "aa"]), 1);
        assert_eq!(r.presentation.rank(), 2);
        assert_eq!(r.kept, vec![0, 1]);
    }

    #[test]
    fn expressions_track_eliminated_generators() {
        // y = x^2, z = y x  so z = x^3
        let r = tietze_simplify_tracked(&pres(&["x", "y", "z"], &["bAA", "cAB", "aaaaaaa"]), 10);
        assert_eq!(r.presentation.rank(), 1);
        assert_eq!(r.expressions[2], Word::new(vec![1, 1, 1]));
        assert_eq!(r.presentation.relators(), &[Word::new(vec![1; 7])]);
    }

    #[test]
    fn free_product_recognition() {
        let m = recognize_free_product(&pres(&["x", "y", "z"], &["aa", "bbb"])).unwrap();
        assert_eq!(m.rank(), 3);
        assert!(m.is_identity(&m.eval(&Word::parse_text("aa").unwrap())));
        assert!(!m.is_identity(&m.eval(&Word::parse_text("cc").unwrap())));
        assert!(recognize_free_product(&pres(&["x", "y"], &["ab"])).is_none());
    }
}
