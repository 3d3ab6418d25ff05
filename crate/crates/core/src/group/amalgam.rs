//! Amalgamated free products `A *_C B` of finite groups, with exact normal
//! forms `c · t1 ⋯ tn` over right transversals of `C` in each factor.

use std::collections::VecDeque;

use thiserror::Error;

use super::finite::FiniteTable;
use super::model::{Element, GroupModel, Subgroup};
use super::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AmalgamError {
    #[error("edge-group generator images have the wrong count for the {0} side")]
    ImageCount(&'static str),
    #[error("edge-group map into the {0} factor is not an injective homomorphism")]
    NotEmbedding(&'static str),
}

#[derive(Debug, Clone)]
struct Side {
    group: FiniteTable,
    /// edge element -> factor element
    embed: Vec<u32>,
    /// factor element -> edge element, when in the image
    pullback: Vec<Option<u32>>,
    /// factor element -> its right-coset representative `t` with `a ∈ C t`
    rep: Vec<u32>,
}

impl Side {
    fn build(
        group: FiniteTable,
        edge: &FiniteTable,
        images: &[Word],
        name: &'static str,
    ) -> Result<Side, AmalgamError> {
        if images.len() != edge.rank() {
            return Err(AmalgamError::ImageCount(name));
        }
        let gen_images: Vec<u32> = images.iter().map(|w| group.eval_index(w)).collect();
        let n = edge.order();
        let mut embed: Vec<Option<u32>> = vec![None; n];
        embed[edge.identity_index() as usize] = Some(group.identity_index());
        let mut queue = VecDeque::from([edge.identity_index()]);
        while let Some(c) = queue.pop_front() {
            let fc = embed[c as usize].unwrap();
            for (i, &g) in edge.generator_indices().iter().enumerate() {
                let next = edge.mul(c, g);
                let img = group.mul(fc, gen_images[i]);
                match embed[next as usize] {
                    None => {
                        embed[next as usize] = Some(img);
                        queue.push_back(next);
                    }
                    Some(existing) if existing != img => return Err(AmalgamError::NotEmbedding(name)),
                    Some(_) => {}
                }
            }
        }
        let embed: Vec<u32> = embed
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or(AmalgamError::NotEmbedding(name))?;
        // homomorphism on all pairs, then injectivity
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                if embed[edge.mul(a, b) as usize] != group.mul(embed[a as usize], embed[b as usize]) {
                    return Err(AmalgamError::NotEmbedding(name));
                }
            }
        }
        let mut pullback = vec![None; group.order()];
        for (c, &a) in embed.iter().enumerate() {
            if pullback[a as usize].replace(c as u32).is_some() {
                return Err(AmalgamError::NotEmbedding(name));
            }
        }
        let mut rep = vec![u32::MAX; group.order()];
        for a in 0..group.order() as u32 {
            if rep[a as usize] != u32::MAX {
                continue;
            }
            let coset: Vec<u32> = embed.iter().map(|&c| group.mul(c, a)).collect();
            let r = if coset.contains(&group.identity_index()) {
                group.identity_index()
            } else {
                *coset.iter().min().unwrap()
            };
            for x in coset {
                rep[x as usize] = r;
            }
        }
        Ok(Side {
            group,
            embed,
            pullback,
            rep,
        })
    }

    /// `a = c · t` with `c` an edge element and `t` the transversal rep.
    fn split(&self, a: u32) -> (u32, u32) {
        let t = self.rep[a as usize];
        let c_in_factor = self.group.mul(a, self.group.inv(t));
        (self.pullback[c_in_factor as usize].expect("coset decomposition"), t)
    }
}

#[derive(Debug, Clone)]
pub struct Amalgam {
    sides: [Side; 2],
    edge: FiniteTable,
}

impl Amalgam {
    /// `left *_edge right`, with the edge group's generators sent to the given
    /// words in each factor's generators.
    pub fn new(
        left: FiniteTable,
        right: FiniteTable,
        edge: FiniteTable,
        left_images: &[Word],
        right_images: &[Word],
    ) -> Result<Self, AmalgamError> {
        let l = Side::build(left, &edge, left_images, "left")?;
        let r = Side::build(right, &edge, right_images, "right")?;
        Ok(Amalgam { sides: [l, r], edge })
    }

    fn parts(e: &Element) -> (u32, &[(u8, u32)]) {
        match e {
            Element::Amalgam { edge, syllables } => (*edge, syllables),
            other => panic!("amalgam given a foreign element {other:?}"),
        }
    }

    /// Moves an edge element `c` leftwards through all syllables.
    fn absorb(&self, edge: &mut u32, syllables: &mut [(u8, u32)], mut c: u32) {
        for (side, t) in syllables.iter_mut().rev() {
            let s = &self.sides[*side as usize];
            let prod = s.group.mul(*t, s.embed[c as usize]);
            let (c2, t2) = s.split(prod);
            *t = t2;
            c = c2;
        }
        *edge = self.edge.mul(*edge, c);
    }

    /// Right multiplication by an element `x` of factor `side`.
    fn mul_factor(&self, edge: &mut u32, syllables: &mut Vec<(u8, u32)>, side: u8, x: u32) {
        let s = &self.sides[side as usize];
        let value = match syllables.last() {
            Some(&(last_side, t)) if last_side == side => {
                syllables.pop();
                s.group.mul(t, x)
            }
            _ => x,
        };
        let (c, t) = s.split(value);
        self.absorb(edge, syllables, c);
        if t != s.group.identity_index() {
            syllables.push((side, t));
        }
    }

    /// Element for factor element `x` on `side` (0 = left, 1 = right).
    pub fn factor_element(&self, side: u8, x: u32) -> Element {
        let mut edge = self.edge.identity_index();
        let mut syl = Vec::new();
        self.mul_factor(&mut edge, &mut syl, side, x);
        Element::Amalgam { edge, syllables: syl }
    }

    fn factor_value(&self, e: &Element, side: u8) -> Option<u32> {
        let (c, syl) = Self::parts(e);
        let s = &self.sides[side as usize];
        match syl {
            [] => Some(s.embed[c as usize]),
            [(sd, t)] if *sd == side => Some(s.group.mul(s.embed[c as usize], *t)),
            _ => None,
        }
    }
}

impl GroupModel for Amalgam {
    fn describe(&self) -> String {
        format!(
            "amalgam of orders {} and {} over {}",
            self.sides[0].group.order(),
            self.sides[1].group.order(),
            self.edge.order()
        )
    }

    fn rank(&self) -> usize {
        self.sides[0].group.rank() + self.sides[1].group.rank()
    }

    fn identity(&self) -> Element {
        Element::Amalgam {
            edge: self.edge.identity_index(),
            syllables: vec![],
        }
    }

    fn generator(&self, index: usize) -> Element {
        let left_rank = self.sides[0].group.rank();
        if index < left_rank {
            self.factor_element(0, self.sides[0].group.generator_indices()[index])
        } else {
            self.factor_element(1, self.sides[1].group.generator_indices()[index - left_rank])
        }
    }

    fn multiply(&self, a: &Element, b: &Element) -> Element {
        let (ca, sa) = Self::parts(a);
        let (cb, sb) = Self::parts(b);
        let mut edge = ca;
        let mut syl = sa.to_vec();
        let left = &self.sides[0];
        self.mul_factor(&mut edge, &mut syl, 0, left.embed[cb as usize]);
        for &(side, t) in sb {
            self.mul_factor(&mut edge, &mut syl, side, t);
        }
        Element::Amalgam { edge, syllables: syl }
    }

    fn invert(&self, a: &Element) -> Element {
        let (c, syl) = Self::parts(a);
        let mut edge = self.edge.identity_index();
        let mut out = Vec::new();
        for &(side, t) in syl.iter().rev() {
            let g = &self.sides[side as usize].group;
            self.mul_factor(&mut edge, &mut out, side, g.inv(t));
        }
        let left = &self.sides[0];
        self.mul_factor(&mut edge, &mut out, 0, left.embed[self.edge.inv(c) as usize]);
        Element::Amalgam { edge, syllables: out }
    }

    fn format_element(&self, a: &Element) -> String {
        let (c, syl) = Self::parts(a);
        let mut s = format!("c{c}");
        for (side, t) in syl {
            s.push_str(&format!("{}{t}", if *side == 0 { 'L' } else { 'R' }));
        }
        s
    }

    fn subgroup(&self, generators: &[usize]) -> Option<Subgroup> {
        let left_rank = self.sides[0].group.rank();
        if let Some(s) = super::model::default_subgroup(self.rank(), generators, self.identity()) {
            return Some(s);
        }
        let side = if generators.iter().all(|&g| g < left_rank) {
            0u8
        } else if generators.iter().all(|&g| g >= left_rank) {
            1u8
        } else {
            return None;
        };
        let group = &self.sides[side as usize].group;
        let gens: Vec<u32> = generators
            .iter()
            .map(|&g| group.generator_indices()[if side == 0 { g } else { g - left_rank }])
            .collect();
        let inside = group.closure(&gens);
        let me = self.clone();
        Some(Subgroup::new(generators.to_vec(), move |e| {
            me.factor_value(e, side).is_some_and(|v| inside[v as usize])
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::model::check_group_axioms;

    fn s3_amalgam() -> Amalgam {
        // S3 = <r, t>; edge C2 = <t>
        let t = Word::letter(2);
        Amalgam::new(
            FiniteTable::symmetric3(),
            FiniteTable::symmetric3(),
            FiniteTable::cyclic(2),
            &[t.clone()],
            &[t],
        )
        .unwrap()
    }

    #[test]
    fn axioms_hold() {
        check_group_axioms(&s3_amalgam(), 300, 11, 10).unwrap();
        let dinf = Amalgam::new(
            FiniteTable::cyclic(2),
            FiniteTable::cyclic(2),
            FiniteTable::cyclic(1),
            &[Word::empty()],
            &[Word::empty()],
        )
        .unwrap();
        check_group_axioms(&dinf, 300, 11, 10).unwrap();
    }

    #[test]
    fn amalgamated_generators_coincide() {
        let g = s3_amalgam();
        // left t (gen 2) equals right t (gen 4)
        assert_eq!(g.generator(1), g.generator(3));
        // left r and right r are distinct and their product has infinite order
        let rr = g.multiply(&g.generator(0), &g.generator(2));
        let mut x = rr.clone();
        for _ in 0..20 {
            assert!(!g.is_identity(&x));
            x = g.multiply(&x, &rr);
        }
    }

    #[test]
    fn factor_membership() {
        let g = s3_amalgam();
        let left = g.subgroup(&[0, 1]).unwrap();
        let edge = g.subgroup(&[1]).unwrap();
        assert!(left.contains(&g.generator(0)));
        assert!(!left.contains(&g.generator(2)));
        assert!(edge.contains(&g.generator(3)));
        assert!(!edge.contains(&g.generator(0)));
    }

    #[test]
    fn rejects_non_embedding() {
        // C3 cannot embed into C2
        let err = Amalgam::new(
            FiniteTable::cyclic(2),
            FiniteTable::cyclic(2),
            FiniteTable::cyclic(3),
            &[Word::letter(1)],
            &[Word::letter(1)],
        )
        .unwrap_err();
        assert_eq!(err, AmalgamError::NotEmbedding("left"));
    }
}
