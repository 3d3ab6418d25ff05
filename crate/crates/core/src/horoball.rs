//! Truncated combinatorial horoballs.
//!
//! Vertex `(v, k)` of a horoball of depth `D` over a base with `n` vertices
//! has index `k * n + v`. Level 0 carries exactly the base edges; level
//! `k > 0` joins `v, w` whenever `d_base(v, w) <= 2^k` edge-lengths.

use serde::Serialize;

use crate::graph::{DistanceMatrix, GraphError, MetricGraph, VertexLabel, INF};

#[derive(Debug, Clone)]
pub struct Horoball {
    base: MetricGraph,
    base_dist: DistanceMatrix,
    depth: usize,
    graph: MetricGraph,
}

/// Horizontal and vertical edges over a base of `n` vertices with distance
/// `dist` (half-units, [`INF`] for unreachable pairs), using `index(v, k)`.
pub(crate) fn horoball_edges(
    n: usize,
    base_edges: impl Iterator<Item = (usize, usize)>,
    dist: impl Fn(usize, usize) -> u32,
    depth: usize,
    index: impl Fn(usize, usize) -> usize,
) -> Vec<(usize, usize, u8)> {
    let mut edges: Vec<(usize, usize, u8)> = base_edges.map(|(u, v)| (index(u, 0), index(v, 0), 2)).collect();
    for k in 1..=depth {
        // half-units: d_base <= 2^k edges
        let reach = 2u64 << k.min(40);
        for v in 0..n {
            for w in v + 1..n {
                let d = dist(v, w);
                if d != INF && d as u64 <= reach {
                    edges.push((index(v, k), index(w, k), 2));
                }
            }
        }
    }
    for k in 0..depth {
        for v in 0..n {
            edges.push((index(v, k), index(v, k + 1), 2));
        }
    }
    edges
}

/// Exact distance and whether some shortest path uses the top level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExactDistance {
    pub distance: u32,
    pub touches_top_level: bool,
}

/// Horoball over a connected base graph.
pub fn build_horoball(c: &MetricGraph, depth: usize) -> Result<Horoball, GraphError> {
    if let Some(v) = c.unreachable_vertex() {
        return Err(GraphError::Disconnected(v));
    }
    let dist = DistanceMatrix::new(c);
    let n = c.len();
    let edges = horoball_edges(n, c.edges().map(|(u, v, _)| (u, v)), |u, v| dist.get(u, v), depth, |v, k| {
        k * n + v
    });
    let labels = (0..=depth)
        .flat_map(|level| {
            (0..n).map(move |vertex| VertexLabel::Horo {
                coset: None,
                vertex,
                level,
            })
        })
        .collect();
    let graph = MetricGraph::new(labels, edges, c.base())?;
    Ok(Horoball {
        base: c.clone(),
        base_dist: dist,
        depth,
        graph,
    })
}

impl Horoball {
    pub fn graph(&self) -> &MetricGraph {
        &self.graph
    }

    pub fn base(&self) -> &MetricGraph {
        &self.base
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn vertex(&self, v: usize, level: usize) -> Result<usize, GraphError> {
        let n = self.base.len();
        if v >= n || level > self.depth {
            return Err(GraphError::VertexNotFound(level * n + v));
        }
        Ok(level * n + v)
    }

    /// `(base vertex, level)` of horoball vertex `x`.
    pub fn coords(&self, x: usize) -> (usize, usize) {
        (x % self.base.len(), x / self.base.len())
    }

    /// Subgraph on one level. Level 0 gets the base labels back.
    pub fn section_at_level(&self, level: usize) -> Result<MetricGraph, GraphError> {
        let n = self.base.len();
        self.vertex(0, level)?;
        let keep: Vec<usize> = (0..n).map(|v| level * n + v).collect();
        let sub = self.graph.induced(&keep);
        if level == 0 {
            return MetricGraph::new_unconnected(self.base.labels().to_vec(), sub.edges().collect(), self.base.base());
        }
        Ok(sub)
    }
}

/// Best route that climbs to one level `m`, crosses, and descends:
/// `min over m of (m-k) + (m-l) + ceil(d/2^m)` edge-lengths, in half-units.
pub fn horoball_distance_fast(h: &Horoball, a: (usize, usize), b: (usize, usize)) -> Result<u32, GraphError> {
    let ((v, k), (w, l)) = (a, b);
    h.vertex(v, k)?;
    h.vertex(w, l)?;
    let d = h.base_dist.get(v, w);
    if d == INF {
        return Ok(INF);
    }
    let d = (d / 2) as u64;
    let best = (k.max(l)..=h.depth)
        .map(|m| {
            let jumps = if m >= 63 { d.min(1) } else { d.div_ceil(1u64 << m) };
            (m - k) as u64 + (m - l) as u64 + jumps
        })
        .min()
        .expect("level range is nonempty");
    Ok((2 * best) as u32)
}

/// Shortest path on the horoball graph itself.
pub fn horoball_distance_exact(h: &Horoball, a: (usize, usize), b: (usize, usize)) -> Result<ExactDistance, GraphError> {
    let x = h.vertex(a.0, a.1)?;
    let y = h.vertex(b.0, b.1)?;
    let dx = h.graph.distances_from(x);
    let dy = h.graph.distances_from(y);
    let d = dx[y];
    let n = h.base.len();
    let top = h.depth * n..(h.depth + 1) * n;
    let touches = d != INF && top.into_iter().any(|t| dx[t] != INF && dy[t] != INF && dx[t] + dy[t] == d);
    Ok(ExactDistance {
        distance: d,
        touches_top_level: touches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{canonical_form, path_graph};

    #[test]
    fn single_vertex_is_a_ray() {
        let h = build_horoball(&path_graph(1), 3).unwrap();
        assert_eq!(h.graph().len(), 4);
        assert_eq!(h.graph().edge_count(), 3);
    }

    #[test]
    fn one_edge_ladder() {
        let h = build_horoball(&path_graph(2), 2).unwrap();
        assert_eq!(h.graph().len(), 6);
        // three rungs and four verticals
        assert_eq!(h.graph().edge_count(), 7);
    }

    #[test]
    fn far_endpoints_meet_at_level_three() {
        let h = build_horoball(&path_graph(9), 3).unwrap();
        let (a, b) = (h.vertex(0, 3).unwrap(), h.vertex(8, 3).unwrap());
        assert_eq!(h.graph().edge_weight(a, b), Some(2));
        assert_eq!(h.graph().edge_weight(h.vertex(0, 2).unwrap(), h.vertex(8, 2).unwrap()), None);
    }

    #[test]
    fn fast_and_exact_examples() {
        let h = build_horoball(&path_graph(9), 3).unwrap();
        for (a, b, want) in [((0, 0), (0, 3), 6), ((0, 0), (1, 0), 2), ((0, 0), (8, 0), 12)] {
            assert_eq!(horoball_distance_fast(&h, a, b).unwrap(), want);
            assert_eq!(horoball_distance_exact(&h, a, b).unwrap().distance, want);
        }
        assert!(horoball_distance_fast(&h, (9, 0), (0, 0)).is_err());
        assert!(horoball_distance_exact(&h, (0, 4), (0, 0)).is_err());
    }

    #[test]
    fn depth_monotonicity_and_top_warning() {
        let base = path_graph(17);
        let mut last = u32::MAX;
        for depth in 0..6 {
            let h = build_horoball(&base, depth).unwrap();
            let e = horoball_distance_exact(&h, (0, 0), (16, 0)).unwrap();
            assert!(e.distance <= last);
            assert!(e.distance <= 32);
            last = e.distance;
            if depth == 1 {
                assert!(e.touches_top_level);
            }
        }
    }

    #[test]
    fn level_zero_is_the_base() {
        let base = path_graph(6);
        let h = build_horoball(&base, 3).unwrap();
        let s = h.section_at_level(0).unwrap();
        assert_eq!(s, base);
        assert_eq!(canonical_form(&s).unwrap(), canonical_form(&base).unwrap());
    }
}
