//! Label-kind-aware canonical certificates for small graphs.
//!
//! Trees use AHU encodings rooted at the centre. Everything else goes through
//! individualization-refinement, keeping the lexicographically largest leaf
//! certificate and pruning children by automorphisms found so far.

use std::collections::HashMap;

use super::{GraphError, MetricGraph};

/// Largest vertex count accepted by [`canonical_form`].
pub const SMALL_GRAPH_BOUND: usize = 512;

/// Equal for two graphs iff they are isomorphic by a map that preserves edge
/// weights and label kinds. The base vertex is ignored.
pub fn canonical_form(g: &MetricGraph) -> Result<Vec<u8>, GraphError> {
    if g.len() > SMALL_GRAPH_BOUND {
        return Err(GraphError::TooLarge {
            size: g.len(),
            bound: SMALL_GRAPH_BOUND,
        });
    }
    if g.edge_count() + 1 == g.len() && g.is_connected() {
        return Ok(tree_form(g));
    }
    Ok(Search::new(g).run())
}

fn kind_byte(g: &MetricGraph, v: usize) -> u8 {
    g.label(v).kind() as u8
}

fn tree_form(g: &MetricGraph) -> Vec<u8> {
    let n = g.len();
    // peel leaves to find the centre
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &(u, _) in g.neighbors(v) {
                let u = u as usize;
                deg[u] -= 1;
                if deg[u] == 1 {
                    next.push(u);
                }
            }
        }
        layer = next;
    }
    let encode = |root: usize, skip: Option<usize>| -> Vec<u8> {
        fn go(g: &MetricGraph, v: usize, parent: Option<usize>, in_weight: u8) -> Vec<u8> {
            let mut kids: Vec<Vec<u8>> = g
                .neighbors(v)
                .iter()
                .filter(|&&(u, _)| Some(u as usize) != parent)
                .map(|&(u, w)| go(g, u as usize, Some(v), w))
                .collect();
            kids.sort();
            let mut out = vec![b'(', kind_byte(g, v), in_weight];
            for k in kids {
                out.extend(k);
            }
            out.push(b')');
            out
        }
        go(g, root, skip, 0)
    };
    let mut out = vec![b'T'];
    match layer[..] {
        [c] => out.extend(encode(c, None)),
        [a, b] => {
            let w = g.edge_weight(a, b).expect("bicentre edge");
            let mut sides = [encode(a, Some(b)), encode(b, Some(a))];
            sides.sort();
            out.push(w);
            out.extend(sides.concat());
        }
        _ => unreachable!("a tree has one or two centres"),
    }
    out
}

struct Search<'a> {
    g: &'a MetricGraph,
    best: Option<(Vec<u8>, Vec<usize>)>,
    /// Automorphisms as vertex permutations.
    autos: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(g: &'a MetricGraph) -> Self {
        Search {
            g,
            best: None,
            autos: Vec::new(),
        }
    }

    fn run(mut self) -> Vec<u8> {
        let colors: Vec<u32> = (0..self.g.len()).map(|v| kind_byte(self.g, v) as u32).collect();
        let colors = self.refine(rank(&colors));
        self.descend(colors, &mut Vec::new());
        let mut out = vec![b'G'];
        out.extend(self.best.expect("search reaches a leaf").0);
        out
    }

    /// Colour refinement to a stable ordered partition; cell order depends
    /// only on isomorphism-invariant data.
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let n = self.g.len();
        let mut cells = count_cells(&colors);
        loop {
            let sigs: Vec<(u32, Vec<(u32, u8)>)> = (0..n)
                .map(|v| {
                    let mut s: Vec<(u32, u8)> =
                        self.g.neighbors(v).iter().map(|&(u, w)| (colors[u as usize], w)).collect();
                    s.sort_unstable();
                    (colors[v], s)
                })
                .collect();
            let next = rank(&sigs);
            let next_cells = count_cells(&next);
            colors = next;
            if next_cells == cells {
                return colors;
            }
            cells = next_cells;
        }
    }

    fn descend(&mut self, colors: Vec<u32>, prefix: &mut Vec<usize>) {
        let n = self.g.len();
        let cells = count_cells(&colors);
        if cells == n {
            self.leaf(&colors);
            return;
        }
        // first smallest non-singleton cell
        let mut sizes: HashMap<u32, usize> = HashMap::new();
        for &c in &colors {
            *sizes.entry(c).or_default() += 1;
        }
        let target = sizes
            .iter()
            .filter(|&(_, &s)| s > 1)
            .min_by_key(|&(&c, &s)| (s, c))
            .map(|(&c, _)| c)
            .unwrap();
        let members: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &members {
            if !explored.is_empty() && self.in_explored_orbit(v, &explored, prefix) {
                continue;
            }
            explored.push(v);
            let split: Vec<(u32, bool)> = (0..n).map(|x| (colors[x], x != v)).collect();
            let child = self.refine(rank(&split));
            prefix.push(v);
            self.descend(child, prefix);
            prefix.pop();
        }
    }

    /// Whether `v` lies in the orbit of an explored vertex under the
    /// automorphisms found so far that fix `prefix` pointwise.
    fn in_explored_orbit(&self, v: usize, explored: &[usize], prefix: &[usize]) -> bool {
        let gens: Vec<&Vec<usize>> = self
            .autos
            .iter()
            .filter(|p| prefix.iter().all(|&x| p[x] == x))
            .collect();
        if gens.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.g.len()];
        let mut stack = explored.to_vec();
        for &e in explored {
            seen[e] = true;
        }
        while let Some(x) = stack.pop() {
            if x == v {
                return true;
            }
            for p in &gens {
                let y = p[x];
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        false
    }

    fn leaf(&mut self, colors: &[u32]) {
        let g = self.g;
        let n = g.len();
        // colors are a bijection onto 0..n
        let pos: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
        let mut cert = Vec::with_capacity(n + 12 * g.edge_count());
        cert.extend((n as u32).to_be_bytes());
        let mut order = vec![0usize; n];
        for v in 0..n {
            order[pos[v]] = v;
        }
        cert.extend(order.iter().map(|&v| kind_byte(g, v)));
        let mut edges: Vec<(u32, u32, u8)> = g
            .edges()
            .map(|(u, v, w)| {
                let (a, b) = (pos[u] as u32, pos[v] as u32);
                (a.min(b), a.max(b), w)
            })
            .collect();
        edges.sort_unstable();
        for (a, b, w) in edges {
            cert.extend(a.to_be_bytes());
            cert.extend(b.to_be_bytes());
            cert.push(w);
        }
        match &self.best {
            Some((best, best_pos)) if *best == cert => {
                // pos^-1 ∘ best_pos maps the best leaf's vertex to ours
                let mut auto = vec![0usize; n];
                for v in 0..n {
                    auto[v] = order[best_pos[v]];
                }
                if auto.iter().enumerate().any(|(i, &x)| i != x) {
                    self.autos.push(auto);
                }
            }
            Some((best, _)) if *best > cert => {}
            _ => self.best = Some((cert, pos)),
        }
    }
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap() as u32)
        .collect()
}

fn count_cells(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}
