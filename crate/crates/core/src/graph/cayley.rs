//! Balls in Cayley graphs.

use std::collections::HashMap;

use crate::group::{Element, GroupModel, Word};

use super::{GraphBuilder, GraphError, MetricGraph, VertexLabel};

pub const DEFAULT_MAX_VERTICES: usize = 200_000;

/// A Cayley ball together with the group element behind each vertex.
#[derive(Debug, Clone)]
pub struct CayleyBall {
    pub graph: MetricGraph,
    pub radius: usize,
    pub elements: Vec<Element>,
    /// Shortlex-least word for each vertex (order `a < A < b < B < ...`).
    pub words: Vec<Word>,
    index: HashMap<Vec<u8>, usize>,
    keys: Vec<Vec<u8>>,
}

impl CayleyBall {
    pub fn vertex_of(&self, model: &dyn GroupModel, e: &Element) -> Option<usize> {
        self.index.get(&model.canonical_key(e)).copied()
    }

    pub fn vertex_of_key(&self, key: &[u8]) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn key(&self, v: usize) -> &[u8] {
        &self.keys[v]
    }

    /// Word length of vertex `v`.
    pub fn depth(&self, v: usize) -> usize {
        self.words[v].len()
    }
}

/// Vertices are the elements of word length at most `radius`, with an edge
/// `g -- gs` for every generator `s` whenever both ends are in the ball.
/// Generators equal to the identity or to each other add no extra edges.
pub fn cayley_ball(model: &dyn GroupModel, radius: usize, max_vertices: usize) -> Result<CayleyBall, GraphError> {
    let rank = model.rank() as i32;
    let letters: Vec<i32> = (1..=rank).flat_map(|g| [g, -g]).collect();
    let letter_elems: Vec<Element> = letters.iter().map(|&l| model.letter(l)).collect();
    let mut elements = vec![model.identity()];
    let mut words = vec![Word::empty()];
    let mut keys = vec![model.canonical_key(&elements[0])];
    let mut index = HashMap::from([(keys[0].clone(), 0usize)]);
    let mut frontier = vec![0usize];
    for _ in 0..radius {
        let mut next = Vec::new();
        for &v in &frontier {
            for (li, s) in letter_elems.iter().enumerate() {
                let e = model.multiply(&elements[v], s);
                let k = model.canonical_key(&e);
                if index.contains_key(&k) {
                    continue;
                }
                if elements.len() == max_vertices {
                    return Err(GraphError::BudgetExceeded(max_vertices));
                }
                let mut w = words[v].clone().into_letters();
                w.push(letters[li]);
                index.insert(k.clone(), elements.len());
                next.push(elements.len());
                elements.push(e);
                words.push(Word::new(w));
                keys.push(k);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let mut b = GraphBuilder::new();
    for w in &words {
        b.add_vertex(VertexLabel::Element(w.to_text()));
    }
    for (v, e) in elements.iter().enumerate() {
        for s in letter_elems.iter().step_by(2) {
            let k = model.canonical_key(&model.multiply(e, s));
            if let Some(&u) = index.get(&k) {
                b.add_edge(v, u, 2);
            }
        }
    }
    let graph = b.build(0)?;
    Ok(CayleyBall {
        graph,
        radius,
        elements,
        words,
        index,
        keys,
    })
}
