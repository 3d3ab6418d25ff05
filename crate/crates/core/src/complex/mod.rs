//! Simple complexes of groups over finite simplicial complexes, and their
//! fundamental-group presentations.
//!
//! Simplices are identified by their position in the complex's simplex list.
//! The local map for an inclusion `σ ⊂ σ′` sends the generators of `G_σ′` to
//! words in the generators of `G_σ`.

mod compile;
pub mod fixtures;
mod spec;
mod tietze;
mod validate;

use serde::Serialize;
use thiserror::Error;

pub use compile::{
    all_maximal_trees, fundamental_presentation, maximal_tree, CompiledPresentation, GeneratorOrigin, RelatorCounts,
};
pub use spec::{CogFile, GroupEntry, LocalGroupSpec, LocalImageSpec, Pi1Spec};
pub use tietze::{recognize_free_product, tietze_simplify, tietze_simplify_tracked, TietzeMove, TietzeResult};
pub use validate::{validate_cog, CogReport, Violation};

use crate::group::{Presentation, SharedModel, SpecError, Word};

pub const DEFAULT_MAX_DIMENSION: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("simplex {0} is empty")]
    EmptySimplex(usize),
    #[error("simplex {0} repeats a vertex")]
    RepeatedVertex(usize),
    #[error("simplex {simplex} uses unknown vertex {vertex}")]
    UnknownVertex { simplex: usize, vertex: usize },
    #[error("simplices {0} and {1} are the same")]
    DuplicateSimplex(usize, usize),
    #[error("face {face:?} of simplex {simplex} is missing")]
    MissingFace { simplex: usize, face: Vec<usize> },
    #[error("simplex {simplex} has dimension {dimension}, over the bound {bound}")]
    TooHighDimension {
        simplex: usize,
        dimension: usize,
        bound: usize,
    },
    #[error("vertex {0} has no 0-simplex")]
    MissingVertexSimplex(usize),
    #[error("vertex {0} is listed twice")]
    DuplicateVertex(usize),
}

#[derive(Debug, Error)]
pub enum CogError {
    #[error("invalid cog JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("{0:?} is not a simplex id")]
    UnknownSimplex(String),
    #[error("simplex {0} has no local group")]
    MissingGroup(usize),
    #[error("unknown group reference {0:?}")]
    UnknownRef(String),
    #[error("map key {0:?} is not of the form \"i,j\"")]
    BadMapKey(String),
    #[error("map {sub},{sup} names unknown generator {name:?}")]
    UnknownGenerator { sub: usize, sup: usize, name: String },
    #[error("complex of groups fails validation with {} violation(s)", .0.len())]
    Invalid(Vec<Violation>),
    #[error("the complex is disconnected")]
    Disconnected,
    #[error("no spanning tree: arrow {0} is not an arrow of the scwol")]
    BadTree(usize),
    #[error(transparent)]
    Group(#[from] SpecError),
}

/// Vertices and simplices (sorted vertex lists), closed under faces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicialComplex {
    vertices: Vec<usize>,
    simplices: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    pub fn new(vertices: Vec<usize>, simplices: Vec<Vec<usize>>) -> Result<Self, ComplexError> {
        Self::with_max_dimension(vertices, simplices, DEFAULT_MAX_DIMENSION)
    }

    pub fn with_max_dimension(
        vertices: Vec<usize>,
        simplices: Vec<Vec<usize>>,
        bound: usize,
    ) -> Result<Self, ComplexError> {
        let mut seen = std::collections::BTreeSet::new();
        for &v in &vertices {
            if !seen.insert(v) {
                return Err(ComplexError::DuplicateVertex(v));
            }
        }
        let mut sorted = Vec::with_capacity(simplices.len());
        let mut index = std::collections::BTreeMap::new();
        for (i, s) in simplices.into_iter().enumerate() {
            let mut s = s;
            s.sort_unstable();
            if s.is_empty() {
                return Err(ComplexError::EmptySimplex(i));
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(ComplexError::RepeatedVertex(i));
            }
            if let Some(&v) = s.iter().find(|v| !seen.contains(v)) {
                return Err(ComplexError::UnknownVertex { simplex: i, vertex: v });
            }
            if s.len() - 1 > bound {
                return Err(ComplexError::TooHighDimension {
                    simplex: i,
                    dimension: s.len() - 1,
                    bound,
                });
            }
            if let Some(&j) = index.get(&s) {
                return Err(ComplexError::DuplicateSimplex(j, i));
            }
            index.insert(s.clone(), i);
            sorted.push(s);
        }
        for (i, s) in sorted.iter().enumerate() {
            for drop in 0..s.len() {
                if s.len() == 1 {
                    break;
                }
                let mut face = s.clone();
                face.remove(drop);
                if !index.contains_key(&face) {
                    return Err(ComplexError::MissingFace { simplex: i, face });
                }
            }
        }
        // every vertex must be a 0-simplex
        for &v in &vertices {
            if !index.contains_key(&vec![v]) {
                return Err(ComplexError::MissingVertexSimplex(v));
            }
        }
        Ok(SimplicialComplex {
            vertices,
            simplices: sorted,
        })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplex(&self, i: usize) -> &[usize] {
        &self.simplices[i]
    }

    pub fn dimension(&self) -> usize {
        self.simplices.iter().map(|s| s.len() - 1).max().unwrap_or(0)
    }

    pub fn index_of(&self, vertices: &[usize]) -> Option<usize> {
        let mut v = vertices.to_vec();
        v.sort_unstable();
        self.simplices.iter().position(|s| *s == v)
    }

    /// Whether simplex `i` is a proper face of simplex `j`.
    pub fn is_proper_face(&self, i: usize, j: usize) -> bool {
        let (a, b) = (&self.simplices[i], &self.simplices[j]);
        a.len() < b.len() && a.iter().all(|v| b.binary_search(v).is_ok())
    }

    /// Simplex ids of the 0-simplices, in vertex-list order.
    pub fn vertex_simplices(&self) -> Vec<usize> {
        self.vertices
            .iter()
            .map(|&v| self.index_of(&[v]).expect("checked at construction"))
            .collect()
    }
}

/// Arrow of the scwol: from the larger simplex to a proper face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
}

/// Scwol of the barycentric subdivision: one object per simplex, one arrow
/// per proper inclusion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Scwol {
    pub objects: usize,
    /// Sorted by `(from, to)`.
    pub arrows: Vec<Arrow>,
    /// Pairs `(a, b)` of arrow indices with `b` ending where `a` starts.
    pub composable: Vec<(usize, usize)>,
}

impl Scwol {
    pub fn from_complex(k: &SimplicialComplex) -> Self {
        let n = k.len();
        let mut arrows = Vec::new();
        for from in 0..n {
            for to in 0..n {
                if k.is_proper_face(to, from) {
                    arrows.push(Arrow { from, to });
                }
            }
        }
        let mut composable = Vec::new();
        for (ai, a) in arrows.iter().enumerate() {
            for (bi, b) in arrows.iter().enumerate() {
                if b.to == a.from {
                    composable.push((ai, bi));
                }
            }
        }
        Scwol {
            objects: n,
            arrows,
            composable,
        }
    }

    pub fn arrow_index(&self, from: usize, to: usize) -> Option<usize> {
        self.arrows.binary_search(&Arrow { from, to }).ok()
    }

    /// The composite of a composable pair.
    pub fn compose(&self, a: usize, b: usize) -> usize {
        let (a, b) = (self.arrows[a], self.arrows[b]);
        self.arrow_index(b.from, a.to).expect("faces of faces are faces")
    }
}

/// A local group: a presentation, plus a model for deciding equality when one
/// is available.
#[derive(Clone)]
pub struct LocalGroup {
    pub presentation: Presentation,
    pub model: Option<SharedModel>,
    /// "supplied", "todd_coxeter", "small_cancellation" or "none".
    pub model_source: &'static str,
}

impl std::fmt::Debug for LocalGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LocalGroup")
            .field("presentation", &self.presentation)
            .field("model_source", &self.model_source)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub struct SimpleComplexOfGroups {
    pub complex: SimplicialComplex,
    pub scwol: Scwol,
    pub groups: Vec<LocalGroup>,
    /// Per scwol arrow: images of the generators of `G_from` as words in
    /// `G_to`. `None` entries were not given.
    pub maps: Vec<Option<Vec<Option<Word>>>>,
    /// Map keys that are not inclusions.
    pub stray_maps: Vec<(usize, usize)>,
    pub pi1: Option<Pi1Spec>,
}

impl SimpleComplexOfGroups {
    /// Image of generator `g` (0-based) of `G_from` along arrow `a`.
    pub fn image(&self, arrow: usize, g: usize) -> Option<&Word> {
        self.maps[arrow].as_ref()?.get(g)?.as_ref()
    }

    /// All images along arrow `a`, when complete.
    pub fn images(&self, arrow: usize) -> Option<Vec<Word>> {
        self.maps[arrow].as_ref()?.iter().cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_validation() {
        let k = SimplicialComplex::new(vec![0, 1], vec![vec![0], vec![1], vec![1, 0]]).unwrap();
        assert_eq!(k.dimension(), 1);
        assert_eq!(k.simplex(2), &[0, 1]);
        assert!(k.is_proper_face(0, 2));
        assert_eq!(
            SimplicialComplex::new(vec![0, 1], vec![vec![0], vec![0, 1]]),
            Err(ComplexError::MissingFace {
                simplex: 1,
                face: vec![1]
            })
        );
        assert!(matches!(
            SimplicialComplex::new(vec![0], vec![vec![0], vec![0]]),
            Err(ComplexError::DuplicateSimplex(0, 1))
        ));
        assert!(matches!(
            SimplicialComplex::with_max_dimension(vec![0, 1], vec![vec![0], vec![1], vec![0, 1]], 0),
            Err(ComplexError::TooHighDimension { .. })
        ));
    }

    #[test]
    fn triangle_scwol_counts() {
        let k = fixtures::triangle_complex();
        let s = Scwol::from_complex(&k);
        assert_eq!(s.objects, 7);
        // 6 edge-to-vertex, 3 triangle-to-edge, 3 triangle-to-vertex
        assert_eq!(s.arrows.len(), 12);
        assert_eq!(s.composable.len(), 6);
        for &(a, b) in &s.composable {
            let c = s.arrows[s.compose(a, b)];
            assert_eq!(c.from, 6);
            assert!(k.simplex(c.to).len() == 1);
        }
    }
}
