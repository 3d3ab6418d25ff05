//! Shortest paths with weights in {1, 2}.

use rayon::prelude::*;
use serde::Serialize;

use super::{GraphError, MetricGraph};

/// Distance to an unreachable vertex.
pub const INF: u32 = u32::MAX;

impl MetricGraph {
    /// Single-source distances by a three-bucket Dial queue.
    pub fn distances_from(&self, source: usize) -> Vec<u32> {
        self.distances_from_set(&[source])
    }

    /// Distance from the nearest of `sources`.
    pub fn distances_from_set(&self, sources: &[usize]) -> Vec<u32> {
        let mut dist = vec![INF; self.len()];
        let mut buckets: [Vec<u32>; 3] = Default::default();
        for &s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                buckets[0].push(s as u32);
            }
        }
        let mut d: u32 = 0;
        let mut pending = buckets[0].len();
        while pending > 0 {
            let slot = (d % 3) as usize;
            while let Some(u) = buckets[slot].pop() {
                pending -= 1;
                let u = u as usize;
                if dist[u] != d {
                    continue;
                }
                for &(v, w) in self.neighbors(u) {
                    let nd = d + w as u32;
                    if nd < dist[v as usize] {
                        dist[v as usize] = nd;
                        buckets[(nd % 3) as usize].push(v);
                        pending += 1;
                    }
                }
            }
            d += 1;
        }
        dist
    }
}

/// Exact distance in half-units ([`INF`] when unreachable).
pub fn distance(g: &MetricGraph, u: usize, v: usize) -> Result<u32, GraphError> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    Ok(g.distances_from(u)[v])
}

/// All-pairs distances, one parallel single-source search per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    pub fn new(g: &MetricGraph) -> Self {
        let n = g.len();
        let rows: Vec<Vec<u32>> = (0..n).into_par_iter().map(|s| g.distances_from(s)).collect();
        DistanceMatrix {
            n,
            d: rows.concat(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.d[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[u32] {
        &self.d[u * self.n..(u + 1) * self.n]
    }

    /// Largest finite distance.
    pub fn diameter(&self) -> u32 {
        self.d.iter().copied().filter(|&x| x != INF).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Geodesic {
    pub vertices: Vec<usize>,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeodesicSet {
    pub geodesics: Vec<Geodesic>,
    pub truncated: bool,
}

/// Geodesics from `u` to `v` in lexicographic order of vertex-id sequences,
/// at most `max_count` of them (at least one is always allowed).
pub fn all_geodesics(g: &MetricGraph, u: usize, v: usize, max_count: usize) -> Result<GeodesicSet, GraphError> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let du = g.distances_from(u);
    let dv = g.distances_from(v);
    Ok(geodesics_between(g, &du, &dv, u, v, max_count.max(1)))
}

/// Enumeration given distance rows from both endpoints.
pub fn geodesics_between(g: &MetricGraph, du: &[u32], dv: &[u32], u: usize, v: usize, max_count: usize) -> GeodesicSet {
    let total = du[v];
    let mut out = GeodesicSet {
        geodesics: Vec::new(),
        truncated: false,
    };
    if total == INF {
        return out;
    }
    let on_dag = |from: usize, w: u8, to: usize| du[from] + w as u32 == du[to] && du[to] + dv[to] == total;
    let mut path = vec![u];
    let mut cursor = vec![0usize];
    while let Some(&top) = path.last() {
        if top == v {
            if out.geodesics.len() == max_count {
                out.truncated = true;
                return out;
            }
            out.geodesics.push(Geodesic {
                vertices: path.clone(),
                weight: total,
            });
            path.pop();
            cursor.pop();
            continue;
        }
        let i = cursor.last_mut().unwrap();
        let nbrs = g.neighbors(top);
        let mut advanced = false;
        while *i < nbrs.len() {
            let (nb, w) = nbrs[*i];
            *i += 1;
            if on_dag(top, w, nb as usize) {
                path.push(nb as usize);
                cursor.push(0);
                advanced = true;
                break;
            }
        }
        if !advanced {
            path.pop();
            cursor.pop();
        }
    }
    out
}

/// Twice the Gromov product `(x|y)_p`: `d(x,p) + d(y,p) - d(x,y)`.
pub fn gromov_product(g: &MetricGraph, x: usize, y: usize, p: usize) -> Result<u32, GraphError> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    g.check_vertex(p)?;
    let dp = g.distances_from(p);
    let dx = g.distances_from(x);
    Ok(dp[x] + dp[y] - dx[y])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_graph, path_graph, MetricGraph, VertexLabel};

    /// `(2r+1) x (2r+1)` grid, vertex `(i, j)` at `i * side + j`.
    fn grid(r: usize) -> MetricGraph {
        let side = 2 * r + 1;
        let labels = (0..side * side).map(|i| VertexLabel::Plain(i.to_string())).collect();
        let mut edges = Vec::new();
        for i in 0..side {
            for j in 0..side {
                if j + 1 < side {
                    edges.push((i * side + j, i * side + j + 1, 2));
                }
                if i + 1 < side {
                    edges.push((i * side + j, (i + 1) * side + j, 2));
                }
            }
        }
        MetricGraph::new(labels, edges, 0).unwrap()
    }

    /// Exhaustive simple-path DFS oracle counting paths of minimal weight.
    fn brute_geodesics(g: &MetricGraph, u: usize, v: usize) -> Vec<Vec<usize>> {
        fn go(g: &MetricGraph, v: usize, path: &mut Vec<usize>, wt: u32, out: &mut Vec<(u32, Vec<usize>)>) {
            let top = *path.last().unwrap();
            if top == v {
                out.push((wt, path.clone()));
                return;
            }
            for &(nb, w) in g.neighbors(top) {
                if !path.contains(&(nb as usize)) {
                    path.push(nb as usize);
                    go(g, v, path, wt + w as u32, out);
                    path.pop();
                }
            }
        }
        let mut all = Vec::new();
        go(g, v, &mut vec![u], 0, &mut all);
        let best = all.iter().map(|p| p.0).min().unwrap();
        let mut geos: Vec<Vec<usize>> = all.into_iter().filter(|p| p.0 == best).map(|p| p.1).collect();
        geos.sort();
        geos
    }

    #[test]
    fn distance_basics() {
        let p = path_graph(7);
        assert_eq!(distance(&p, 3, 3).unwrap(), 0);
        assert_eq!(distance(&p, 0, 6).unwrap(), 12);
        assert_eq!(distance(&p, 0, 9), Err(GraphError::VertexNotFound(9)));
        let g = grid(3);
        // (0,0) is the centre (3,3); (2,3) is (5,6)
        assert_eq!(distance(&g, 3 * 7 + 3, 5 * 7 + 6).unwrap(), 10);
    }

    #[test]
    fn half_edges_count_once() {
        let labels = vec![
            VertexLabel::Plain("a".into()),
            VertexLabel::Plain("b".into()),
            VertexLabel::Cone(0),
        ];
        let g = MetricGraph::new(labels, vec![(0, 2, 1), (1, 2, 1)], 0).unwrap();
        assert_eq!(distance(&g, 0, 1).unwrap(), 2);
        assert_eq!(distance(&g, 0, 2).unwrap(), 1);
    }

    #[test]
    fn grid_geodesic_counts() {
        let g = grid(3);
        let c = 3 * 7 + 3;
        assert_eq!(all_geodesics(&g, c, c + 7 + 1, 100).unwrap().geodesics.len(), 2);
        let set = all_geodesics(&g, c, c + 14 + 2, 100).unwrap();
        assert_eq!(set.geodesics.len(), 6);
        assert!(!set.truncated);
        let oracle = brute_geodesics(&grid(2), 12, 24);
        let ours = all_geodesics(&grid(2), 12, 24, 100).unwrap();
        assert_eq!(oracle, ours.geodesics.into_iter().map(|g| g.vertices).collect::<Vec<_>>());
    }

    #[test]
    fn truncation_keeps_lexicographic_prefix() {
        let g = grid(3);
        let full = all_geodesics(&g, 0, 48, 10_000).unwrap();
        assert_eq!(full.geodesics.len(), 924); // C(12, 6)
        let cut = all_geodesics(&g, 0, 48, 5).unwrap();
        assert!(cut.truncated);
        assert_eq!(cut.geodesics[..], full.geodesics[..5]);
        let exact = all_geodesics(&g, 0, 48, 924).unwrap();
        assert!(!exact.truncated);
    }

    #[test]
    fn tree_has_unique_geodesics() {
        let p = path_graph(5);
        for u in 0..5 {
            for v in 0..5 {
                let s = all_geodesics(&p, u, v, 3).unwrap();
                assert_eq!(s.geodesics.len(), 1);
                assert_eq!(s.geodesics[0].weight, distance(&p, u, v).unwrap());
            }
        }
    }

    #[test]
    fn gromov_products() {
        let p = path_graph(5);
        assert_eq!(gromov_product(&p, 2, 2, 2).unwrap(), 0);
        assert_eq!(gromov_product(&p, 0, 4, 2).unwrap(), 0);
        assert_eq!(gromov_product(&p, 3, 4, 0).unwrap(), 12);
    }

    #[test]
    fn matrix_is_a_metric() {
        let g = cycle_graph(9);
        let m = DistanceMatrix::new(&g);
        for x in 0..9 {
            for y in 0..9 {
                assert_eq!(m.get(x, y), m.get(y, x));
                for z in 0..9 {
                    assert!(m.get(x, z) <= m.get(x, y) + m.get(y, z));
                }
            }
        }
        assert_eq!(m.diameter(), 8);
    }
}
