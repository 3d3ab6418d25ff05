//! Free and direct products of arbitrary backends. Generators are the
//! factors' generators in factor order.

use super::model::{Element, GroupModel, SharedModel, Subgroup};

fn locate(offsets: &[usize], index: usize) -> (usize, usize) {
    let f = offsets.partition_point(|&o| o <= index) - 1;
    (f, index - offsets[f])
}

fn offsets_of(factors: &[SharedModel]) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(factors.len() + 1);
    let mut acc = 0;
    for f in factors {
        offsets.push(acc);
        acc += f.rank();
    }
    offsets.push(acc);
    offsets
}

/// Split `generators` (global indices) into per-factor local index lists.
fn split_generators(offsets: &[usize], count: usize, generators: &[usize]) -> Vec<Vec<usize>> {
    let mut parts = vec![Vec::new(); count];
    for &g in generators {
        let (f, local) = locate(offsets, g);
        parts[f].push(local);
    }
    parts
}

/// Free product; elements are reduced syllable sequences.
pub struct FreeProduct {
    factors: Vec<SharedModel>,
    offsets: Vec<usize>,
}

impl FreeProduct {
    pub fn new(factors: Vec<SharedModel>) -> Self {
        let offsets = offsets_of(&factors);
        FreeProduct { factors, offsets }
    }

    pub fn factors(&self) -> &[SharedModel] {
        &self.factors
    }

    fn syllables(e: &Element) -> &[(u32, Element)] {
        match e {
            Element::Syllables(s) => s,
            other => panic!("free product given a foreign element {other:?}"),
        }
    }

    /// Embeds a factor element.
    pub fn inject(&self, factor: usize, e: Element) -> Element {
        if self.factors[factor].is_identity(&e) {
            Element::Syllables(vec![])
        } else {
            Element::Syllables(vec![(factor as u32, e)])
        }
    }
}

impl GroupModel for FreeProduct {
    fn describe(&self) -> String {
        let parts: Vec<String> = self.factors.iter().map(|f| f.describe()).collect();
        format!("free product of [{}]", parts.join("; "))
    }

    fn rank(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn identity(&self) -> Element {
        Element::Syllables(vec![])
    }

    fn generator(&self, index: usize) -> Element {
        let (f, local) = locate(&self.offsets, index);
        self.inject(f, self.factors[f].generator(local))
    }

    fn multiply(&self, a: &Element, b: &Element) -> Element {
        let mut out: Vec<(u32, Element)> = Self::syllables(a).to_vec();
        let rest = Self::syllables(b);
        let mut i = 0;
        while i < rest.len() {
            let (f, e) = &rest[i];
            match out.last() {
                Some((g, x)) if g == f => {
                    let model = &self.factors[*f as usize];
                    let prod = model.multiply(x, e);
                    out.pop();
                    i += 1;
                    if !model.is_identity(&prod) {
                        out.push((*f, prod));
                        break;
                    }
                }
                _ => break,
            }
        }
        out.extend(rest[i..].iter().cloned());
        Element::Syllables(out)
    }

    fn invert(&self, a: &Element) -> Element {
        Element::Syllables(
            Self::syllables(a)
                .iter()
                .rev()
                .map(|(f, e)| (*f, self.factors[*f as usize].invert(e)))
                .collect(),
        )
    }

    fn format_element(&self, a: &Element) -> String {
        let s = Self::syllables(a);
        if s.is_empty() {
            return "1".to_string();
        }
        s.iter()
            .map(|(f, e)| format!("[{f}:{}]", self.factors[*f as usize].format_element(e)))
            .collect()
    }

    fn subgroup(&self, generators: &[usize]) -> Option<Subgroup> {
        let parts = split_generators(&self.offsets, self.factors.len(), generators);
        let mut preds = Vec::with_capacity(parts.len());
        for (f, local) in parts.iter().enumerate() {
            preds.push(self.factors[f].subgroup(local)?);
        }
        Some(Subgroup::new(generators.to_vec(), move |e| match e {
            Element::Syllables(s) => s.iter().all(|(f, x)| preds[*f as usize].contains(x)),
            _ => false,
        }))
    }
}

/// Direct product; elements are component tuples.
pub struct DirectProduct {
    factors: Vec<SharedModel>,
    offsets: Vec<usize>,
}

impl DirectProduct {
    pub fn new(factors: Vec<SharedModel>) -> Self {
        let offsets = offsets_of(&factors);
        DirectProduct { factors, offsets }
    }

    fn parts(e: &Element) -> &[Element] {
        match e {
            Element::Tuple(t) => t,
            other => panic!("direct product given a foreign element {other:?}"),
        }
    }
}

impl GroupModel for DirectProduct {
    fn describe(&self) -> String {
        let parts: Vec<String> = self.factors.iter().map(|f| f.describe()).collect();
        format!("direct product of [{}]", parts.join("; "))
    }

    fn rank(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn identity(&self) -> Element {
        Element::Tuple(self.factors.iter().map(|f| f.identity()).collect())
    }

    fn generator(&self, index: usize) -> Element {
        let (f, local) = locate(&self.offsets, index);
        let mut t: Vec<Element> = self.factors.iter().map(|m| m.identity()).collect();
        t[f] = self.factors[f].generator(local);
        Element::Tuple(t)
    }

    fn multiply(&self, a: &Element, b: &Element) -> Element {
        Element::Tuple(
            Self::parts(a)
                .iter()
                .zip(Self::parts(b))
                .zip(&self.factors)
                .map(|((x, y), m)| m.multiply(x, y))
                .collect(),
        )
    }

    fn invert(&self, a: &Element) -> Element {
        Element::Tuple(
            Self::parts(a)
                .iter()
                .zip(&self.factors)
                .map(|(x, m)| m.invert(x))
                .collect(),
        )
    }

    fn format_element(&self, a: &Element) -> String {
        let parts: Vec<String> = Self::parts(a)
            .iter()
            .zip(&self.factors)
            .map(|(x, m)| m.format_element(x))
            .collect();
        format!("<{}>", parts.join(","))
    }

    fn subgroup(&self, generators: &[usize]) -> Option<Subgroup> {
        let parts = split_generators(&self.offsets, self.factors.len(), generators);
        let mut preds = Vec::with_capacity(parts.len());
        for (f, local) in parts.iter().enumerate() {
            preds.push(self.factors[f].subgroup(local)?);
        }
        Some(Subgroup::new(generators.to_vec(), move |e| match e {
            Element::Tuple(t) => t.iter().zip(&preds).all(|(x, p)| p.contains(x)),
            _ => false,
        }))
    }

    fn finite_order(&self) -> Option<usize> {
        self.factors.iter().map(|f| f.finite_order()).product()
    }
}
