//! Finite weighted graphs in integer half-units.
//!
//! Every edge has weight 2 (length 1) except edges at a cone point, which have
//! weight 1 (length 1/2).

mod canon;
mod cayley;
mod io;
mod paths;

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use canon::{canonical_form, SMALL_GRAPH_BOUND};
pub use cayley::{cayley_ball, CayleyBall, DEFAULT_MAX_VERTICES};
pub use paths::{all_geodesics, distance, geodesics_between, gromov_product, DistanceMatrix, Geodesic, GeodesicSet, INF};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} not found")]
    VertexNotFound(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} -- {1}")]
    DuplicateEdge(usize, usize),
    #[error("edge {u} -- {v} has weight {w}; weight 1 is reserved for cone edges and only 1 or 2 are allowed")]
    BadWeight { u: usize, v: usize, w: u8 },
    #[error("vertex {0} is not reachable from the base")]
    Disconnected(usize),
    #[error("graph has {size} vertices, over the bound of {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("vertex budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

/// What a vertex stands for.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexLabel {
    /// Group element, as its shortlex word in text form.
    Element(String),
    /// Horoball vertex: base vertex `vertex` at `level`, optionally over a coset.
    Horo {
        coset: Option<usize>,
        vertex: usize,
        level: usize,
    },
    /// Cone point for coset `id`.
    Cone(usize),
    /// Simplex of a development: coset key and base simplex.
    Simplex { coset: String, simplex: usize },
    Plain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LabelKind {
    Element,
    Horo,
    Cone,
    Simplex,
    Plain,
}

impl LabelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LabelKind::Element => "element",
            LabelKind::Horo => "horo",
            LabelKind::Cone => "cone",
            LabelKind::Simplex => "simplex",
            LabelKind::Plain => "plain",
        }
    }
}

impl VertexLabel {
    pub fn kind(&self) -> LabelKind {
        match self {
            VertexLabel::Element(_) => LabelKind::Element,
            VertexLabel::Horo { .. } => LabelKind::Horo,
            VertexLabel::Cone(_) => LabelKind::Cone,
            VertexLabel::Simplex { .. } => LabelKind::Simplex,
            VertexLabel::Plain(_) => LabelKind::Plain,
        }
    }

    pub fn is_cone(&self) -> bool {
        matches!(self, VertexLabel::Cone(_))
    }
}

/// Text forms: `abA` (element), `(3@2)` or `(c1:3@2)` (horoball),
/// `*4` (cone), `(key:5)` (simplex), `#text` (plain).
impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Element(w) => f.write_str(w),
            VertexLabel::Horo {
                coset: None,
                vertex,
                level,
            } => write!(f, "({vertex}@{level})"),
            VertexLabel::Horo {
                coset: Some(c),
                vertex,
                level,
            } => write!(f, "(c{c}:{vertex}@{level})"),
            VertexLabel::Cone(id) => write!(f, "*{id}"),
            VertexLabel::Simplex { coset, simplex } => write!(f, "({coset}:{simplex})"),
            VertexLabel::Plain(s) => write!(f, "#{s}"),
        }
    }
}

impl FromStr for VertexLabel {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, GraphError> {
        let bad = || GraphError::Parse(format!("bad vertex label {s:?}"));
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        if let Some(rest) = s.strip_prefix('#') {
            return Ok(VertexLabel::Plain(rest.to_string()));
        }
        if let Some(rest) = s.strip_prefix('*') {
            return Ok(VertexLabel::Cone(num(rest)?));
        }
        if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            if let Some((left, level)) = inner.rsplit_once('@') {
                let level = num(level)?;
                return match left.split_once(':') {
                    Some((c, v)) => Ok(VertexLabel::Horo {
                        coset: Some(num(c.strip_prefix('c').ok_or_else(bad)?)?),
                        vertex: num(v)?,
                        level,
                    }),
                    None => Ok(VertexLabel::Horo {
                        coset: None,
                        vertex: num(left)?,
                        level,
                    }),
                };
            }
            let (coset, simplex) = inner.rsplit_once(':').ok_or_else(bad)?;
            return Ok(VertexLabel::Simplex {
                coset: coset.to_string(),
                simplex: num(simplex)?,
            });
        }
        if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '.') {
            return Ok(VertexLabel::Element(s.to_string()));
        }
        Err(bad())
    }
}

/// Immutable weighted graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGraph {
    labels: Vec<VertexLabel>,
    edges: Vec<(u32, u32, u8)>,
    adj: Vec<Vec<(u32, u8)>>,
    base: usize,
}

impl MetricGraph {
    /// Validates all invariants, including connectivity from `base`.
    pub fn new(labels: Vec<VertexLabel>, edges: Vec<(usize, usize, u8)>, base: usize) -> Result<Self, GraphError> {
        let g = Self::new_unconnected(labels, edges, base)?;
        if let Some(v) = g.unreachable_vertex() {
            return Err(GraphError::Disconnected(v));
        }
        Ok(g)
    }

    /// Same checks as [`MetricGraph::new`] except connectivity. Used for
    /// induced subgraphs whose distances may be infinite.
    pub fn new_unconnected(
        labels: Vec<VertexLabel>,
        edges: Vec<(usize, usize, u8)>,
        base: usize,
    ) -> Result<Self, GraphError> {
        let n = labels.len();
        if base >= n {
            return Err(GraphError::VertexNotFound(base));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut adj = vec![Vec::new(); n];
        let mut stored = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            if u >= n {
                return Err(GraphError::VertexNotFound(u));
            }
            if v >= n {
                return Err(GraphError::VertexNotFound(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let (a, b) = (u.min(v), u.max(v));
            let cone = labels[a].is_cone() || labels[b].is_cone();
            if !(w == 2 || (w == 1 && cone)) {
                return Err(GraphError::BadWeight { u: a, v: b, w });
            }
            if !seen.insert((a, b)) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
            adj[a].push((b as u32, w));
            adj[b].push((a as u32, w));
            stored.push((a as u32, b as u32, w));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(MetricGraph {
            labels,
            edges: stored,
            adj,
            base,
        })
    }

    /// First vertex not reachable from the base.
    pub fn unreachable_vertex(&self) -> Option<usize> {
        let mut seen = vec![false; self.len()];
        seen[self.base] = true;
        let mut queue = VecDeque::from([self.base]);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adj[u] {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    queue.push_back(v as usize);
                }
            }
        }
        seen.iter().position(|s| !s)
    }

    pub fn is_connected(&self) -> bool {
        self.unreachable_vertex().is_none()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &VertexLabel {
        &self.labels[v]
    }

    /// Edges `(u, v, w)` with `u < v`, in insertion order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u8)> + '_ {
        self.edges.iter().map(|&(u, v, w)| (u as usize, v as usize, w))
    }

    /// Neighbours of `v` with edge weights, by increasing vertex id.
    pub fn neighbors(&self, v: usize) -> &[(u32, u8)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Option<u8> {
        let list = self.adj.get(u)?;
        list.binary_search_by_key(&(v as u32), |&(x, _)| x).ok().map(|i| list[i].1)
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.len() {
            Ok(())
        } else {
            Err(GraphError::VertexNotFound(v))
        }
    }

    /// Subgraph induced on `keep` (in that order; vertex `keep[i]` becomes
    /// `i`). The base becomes `keep[0]` unless the old base is kept.
    pub fn induced(&self, keep: &[usize]) -> MetricGraph {
        let mut pos = vec![u32::MAX; self.len()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i as u32;
        }
        let labels = keep.iter().map(|&v| self.labels[v].clone()).collect();
        let edges = self
            .edges()
            .filter(|&(u, v, _)| pos[u] != u32::MAX && pos[v] != u32::MAX)
            .map(|(u, v, w)| (pos[u] as usize, pos[v] as usize, w))
            .collect();
        let base = if pos[self.base] != u32::MAX {
            pos[self.base] as usize
        } else {
            0
        };
        MetricGraph::new_unconnected(labels, edges, base).expect("induced subgraph of a valid graph")
    }

    /// Same graph with vertices renumbered: old vertex `v` becomes `perm[v]`.
    /// Edges keep their relative order.
    pub fn permuted(&self, perm: &[usize]) -> MetricGraph {
        let mut labels = vec![VertexLabel::Plain(String::new()); self.len()];
        for (v, l) in self.labels.iter().enumerate() {
            labels[perm[v]] = l.clone();
        }
        let edges = self.edges().map(|(u, v, w)| (perm[u], perm[v], w)).collect();
        MetricGraph::new_unconnected(labels, edges, perm[self.base]).expect("permutation of a valid graph")
    }
}

/// Incremental construction with edge deduplication.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    labels: Vec<VertexLabel>,
    edges: Vec<(usize, usize, u8)>,
    seen: HashSet<(usize, usize)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, label: VertexLabel) -> usize {
        self.labels.push(label);
        self.labels.len() - 1
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Adds `u -- v` unless it is a loop or already present.
    pub fn add_edge(&mut self, u: usize, v: usize, w: u8) -> bool {
        if u == v || !self.seen.insert((u.min(v), u.max(v))) {
            return false;
        }
        self.edges.push((u, v, w));
        true
    }

    pub fn build(self, base: usize) -> Result<MetricGraph, GraphError> {
        MetricGraph::new(self.labels, self.edges, base)
    }

    pub fn build_unconnected(self, base: usize) -> Result<MetricGraph, GraphError> {
        MetricGraph::new_unconnected(self.labels, self.edges, base)
    }
}

/// Path graph on `n` vertices with plain labels `#0 .. #n-1`.
pub fn path_graph(n: usize) -> MetricGraph {
    let labels = (0..n).map(|i| VertexLabel::Plain(i.to_string())).collect();
    let edges = (1..n).map(|i| (i - 1, i, 2)).collect();
    MetricGraph::new(labels, edges, 0).expect("path graph")
}

/// Cycle graph on `n >= 3` vertices.
pub fn cycle_graph(n: usize) -> MetricGraph {
    let labels = (0..n).map(|i| VertexLabel::Plain(i.to_string())).collect();
    let edges = (0..n).map(|i| (i, (i + 1) % n, 2)).collect();
    MetricGraph::new(labels, edges, 0).expect("cycle graph")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_text_round_trip() {
        let labels = [
            VertexLabel::Element("abA".into()),
            VertexLabel::Element("1".into()),
            VertexLabel::Element("g27.G3".into()),
            VertexLabel::Horo {
                coset: None,
                vertex: 3,
                level: 2,
            },
            VertexLabel::Horo {
                coset: Some(7),
                vertex: 0,
                level: 5,
            },
            VertexLabel::Cone(4),
            VertexLabel::Simplex {
                coset: "0a1b".into(),
                simplex: 2,
            },
            VertexLabel::Plain("x y".into()),
        ];
        for l in labels {
            let text = l.to_string();
            assert_eq!(text.parse::<VertexLabel>().unwrap(), l, "{text}");
        }
        assert_eq!(
            VertexLabel::Horo {
                coset: None,
                vertex: 3,
                level: 2
            }
            .to_string(),
            "(3@2)"
        );
        assert!("".parse::<VertexLabel>().is_err());
        assert!("a b".parse::<VertexLabel>().is_err());
    }

    #[test]
    fn rejects_invariant_violations() {
        let plain = |n: usize| (0..n).map(|i| VertexLabel::Plain(i.to_string())).collect::<Vec<_>>();
        assert_eq!(MetricGraph::new(plain(2), vec![(0, 0, 2)], 0), Err(GraphError::SelfLoop(0)));
        assert_eq!(
            MetricGraph::new(plain(2), vec![(0, 1, 2), (1, 0, 2)], 0),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert_eq!(
            MetricGraph::new(plain(2), vec![(0, 1, 1)], 0),
            Err(GraphError::BadWeight { u: 0, v: 1, w: 1 })
        );
        assert_eq!(MetricGraph::new(plain(3), vec![(0, 1, 2)], 0), Err(GraphError::Disconnected(2)));
        assert_eq!(MetricGraph::new(plain(1), vec![(0, 3, 2)], 0), Err(GraphError::VertexNotFound(3)));
        let mut cone = plain(1);
        cone.push(VertexLabel::Cone(0));
        assert!(MetricGraph::new(cone, vec![(0, 1, 1)], 0).is_ok());
    }

    #[test]
    fn induced_and_permuted() {
        let c = cycle_graph(6);
        let sub = c.induced(&[0, 1, 2]);
        assert_eq!(sub.edge_count(), 2);
        assert!(sub.is_connected());
        let gap = c.induced(&[0, 2, 4]);
        assert_eq!(gap.edge_count(), 0);
        let p = c.permuted(&[5, 4, 3, 2, 1, 0]);
        assert_eq!(p.base(), 5);
        assert_eq!(p.edge_weight(5, 4), Some(2));
    }
}
