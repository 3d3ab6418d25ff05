//! Slim-triangle and four-point δ, and quasiconvexity constants, on finite
//! graphs. Everything is measured at vertices.
//!
//! Slimness is computed without enumerating geodesics. For a side `[x, y]`
//! through `p` and a third vertex `z`, the worst choice of the other two sides
//! is `min(F(z, x, p), F(z, y, p))`, where `F(z, a, p)` is the largest value of
//! `min over q in γ of d(p, q)` over geodesics `γ` from `z` to `a`. Fixing `z`
//! and `p`, `F(z, ·, p)` is a bottleneck DP over the shortest-path DAG from `z`.
//! Since sides range over all geodesics, `p` ranges over the whole interval
//! `I(x, y)`, and the result is the exact vertex-slimness of the graph.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{DistanceMatrix, GraphError, MetricGraph, INF};

pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 600;

/// Stated in every report.
pub const VERTEX_NOTE: &str =
    "measured at vertices only; the continuous value can exceed this by at most 2 half-units";

#[derive(Debug, Error)]
pub enum HypError {
    #[error("graph has {size} vertices, over the exhaustive bound of {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("graph is not connected: vertex {0} is unreachable")]
    Disconnected(usize),
    #[error("subset is empty")]
    EmptySubset,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaPolicy {
    Exhaustive { max_vertices: usize },
    Sampled { seed: u64, samples: usize },
}

impl Default for DeltaPolicy {
    fn default() -> Self {
        DeltaPolicy::Exhaustive {
            max_vertices: DEFAULT_EXHAUSTIVE_BOUND,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeltaMode {
    Exhaustive,
    Sampled { seed: u64, samples: usize },
}

/// For slim δ: `vertices = [x, y, z, p]`, side `[x, y]`, third corner `z`,
/// point `p` on the side. For four-point δ: the quadruple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaWitness {
    pub vertices: Vec<usize>,
    pub labels: Vec<String>,
    pub value: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    /// "slim" or "four_point" (the latter is `L - M`, twice the usual defect).
    pub measure: String,
    pub delta: u32,
    pub mode: DeltaMode,
    pub vertices: usize,
    pub witness: Option<DeltaWitness>,
    pub truncated: bool,
    pub note: String,
    /// Ball radius, when the graph is a ball.
    pub radius: Option<usize>,
    pub radius_note: Option<String>,
}

impl DeltaReport {
    pub fn with_radius(mut self, radius: usize) -> Self {
        self.radius = Some(radius);
        self.radius_note = Some(format!(
            "geodesics near the ball boundary can differ from the full Cayley graph; trust triples within {} of the base",
            radius / 2
        ));
        self
    }
}

fn check_connected(g: &MetricGraph) -> Result<(), HypError> {
    match g.unreachable_vertex() {
        Some(v) => Err(HypError::Disconnected(v)),
        None => Ok(()),
    }
}

/// Vertices by increasing distance from `z`.
fn dag_order(dz: &[u32]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..dz.len()).filter(|&v| dz[v] != INF).collect();
    order.sort_by_key(|&v| (dz[v], v));
    order
}

/// `out[a] = F(z, a, p)` for every `a`.
fn bottleneck(g: &MetricGraph, dm: &DistanceMatrix, z: usize, order: &[usize], p: usize, out: &mut [u32]) {
    let dz = dm.row(z);
    let dp = dm.row(p);
    for &q in order {
        if q == z {
            out[q] = dp[z];
            continue;
        }
        let mut best = 0;
        for &(r, w) in g.neighbors(q) {
            let r = r as usize;
            if dz[r] != INF && dz[r] + w as u32 == dz[q] {
                best = best.max(out[r]);
            }
        }
        out[q] = best.min(dp[q]);
    }
}

/// `(value, x, y, z, p)` with larger value first, then lexicographically
/// smaller vertices.
type Cand = (u32, [usize; 4]);

fn better(a: &Cand, b: &Cand) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

fn pick(a: Option<Cand>, b: Option<Cand>) -> Option<Cand> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if better(&y, &x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

fn interval(dm: &DistanceMatrix, x: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
    let dxy = dm.get(x, y);
    (0..dm.len()).filter(move |&p| dm.get(x, p) + dm.get(p, y) == dxy)
}

/// Slimness contribution of side `[x, y]`, corner `z`, point `p`.
pub fn slim_value(g: &MetricGraph, dm: &DistanceMatrix, x: usize, y: usize, z: usize, p: usize) -> u32 {
    let order = dag_order(dm.row(z));
    let mut f = vec![0; g.len()];
    bottleneck(g, dm, z, &order, p, &mut f);
    f[x].min(f[y])
}

fn report(g: &MetricGraph, measure: &str, mode: DeltaMode, best: Option<Cand>) -> DeltaReport {
    let witness = best.map(|(value, v)| {
        let vertices = v.to_vec();
        DeltaWitness {
            labels: vertices.iter().map(|&x| g.label(x).to_string()).collect(),
            vertices,
            value,
        }
    });
    DeltaReport {
        measure: measure.into(),
        delta: best.map_or(0, |b| b.0),
        mode,
        vertices: g.len(),
        witness,
        truncated: false,
        note: VERTEX_NOTE.into(),
        radius: None,
        radius_note: None,
    }
}

pub fn slim_delta(g: &MetricGraph, policy: DeltaPolicy) -> Result<DeltaReport, HypError> {
    check_connected(g)?;
    let n = g.len();
    match policy {
        DeltaPolicy::Exhaustive { max_vertices } => {
            if n > max_vertices {
                return Err(HypError::TooLarge {
                    size: n,
                    bound: max_vertices,
                });
            }
            let dm = DistanceMatrix::new(g);
            let intervals: Vec<(usize, usize, Vec<usize>)> = (0..n)
                .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
                .map(|(x, y)| (x, y, interval(&dm, x, y).collect()))
                .collect();
            let best = (0..n)
                .into_par_iter()
                .map(|z| {
                    let order = dag_order(dm.row(z));
                    let mut table = vec![0u32; n * n];
                    for p in 0..n {
                        bottleneck(g, &dm, z, &order, p, &mut table[p * n..(p + 1) * n]);
                    }
                    let mut local: Option<Cand> = None;
                    for (x, y, ps) in &intervals {
                        for &p in ps {
                            let v = table[p * n + x].min(table[p * n + y]);
                            local = pick(local, Some((v, [*x, *y, z, p])));
                        }
                    }
                    local
                })
                .reduce(|| None, pick);
            Ok(report(g, "slim", DeltaMode::Exhaustive, best))
        }
        DeltaPolicy::Sampled { seed, samples } => {
            let dm = DistanceMatrix::new(g);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let triples: Vec<[usize; 3]> = (0..samples)
                .map(|_| [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)])
                .collect();
            let best = triples
                .par_iter()
                .map(|t| {
                    let mut local: Option<Cand> = None;
                    let mut f = vec![0u32; n];
                    for (a, b, c) in [(t[0], t[1], t[2]), (t[1], t[2], t[0]), (t[0], t[2], t[1])] {
                        let (x, y) = (a.min(b), a.max(b));
                        let order = dag_order(dm.row(c));
                        for p in interval(&dm, x, y) {
                            bottleneck(g, &dm, c, &order, p, &mut f);
                            local = pick(local, Some((f[x].min(f[y]), [x, y, c, p])));
                        }
                    }
                    local
                })
                .reduce(|| None, pick);
            Ok(report(g, "slim", DeltaMode::Sampled { seed, samples }, best))
        }
    }
}

fn four_point_value(dm: &DistanceMatrix, q: [usize; 4]) -> u32 {
    let [x, y, z, w] = q;
    let mut s = [
        dm.get(x, y) + dm.get(z, w),
        dm.get(x, z) + dm.get(y, w),
        dm.get(x, w) + dm.get(y, z),
    ];
    s.sort_unstable();
    s[2] - s[1]
}

/// Largest `L - M` over quadruples, where `L >= M` are the two largest of
/// the three pair sums.
pub fn four_point_delta(g: &MetricGraph, policy: DeltaPolicy) -> Result<DeltaReport, HypError> {
    check_connected(g)?;
    let n = g.len();
    let dm = DistanceMatrix::new(g);
    match policy {
        DeltaPolicy::Exhaustive { max_vertices } => {
            if n > max_vertices {
                return Err(HypError::TooLarge {
                    size: n,
                    bound: max_vertices,
                });
            }
            let best = (0..n)
                .into_par_iter()
                .map(|x| {
                    let mut local: Option<Cand> = None;
                    for y in x + 1..n {
                        for z in y + 1..n {
                            for w in z + 1..n {
                                let q = [x, y, z, w];
                                local = pick(local, Some((four_point_value(&dm, q), q)));
                            }
                        }
                    }
                    local
                })
                .reduce(|| None, pick);
            Ok(report(g, "four_point", DeltaMode::Exhaustive, best))
        }
        DeltaPolicy::Sampled { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut best = None;
            for _ in 0..samples {
                let mut q = [0; 4];
                for v in &mut q {
                    *v = rng.gen_range(0..n);
                }
                q.sort_unstable();
                best = pick(best, Some((four_point_value(&dm, q), q)));
            }
            Ok(report(g, "four_point", DeltaMode::Sampled { seed, samples }, best))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QcReport {
    pub constant: u32,
    /// `[u, v, p]`: `p` on a geodesic from `u` to `v`, farthest from the subset.
    pub witness: Option<[usize; 3]>,
    pub labels: Vec<String>,
    /// Always false: every geodesic is covered through intervals.
    pub lower_bound_only: bool,
}

/// Largest distance to `subset` from a vertex on a geodesic between two
/// subset vertices. Pairs in different components are skipped.
pub fn quasiconvexity_constant(g: &MetricGraph, subset: &[usize]) -> Result<QcReport, HypError> {
    if subset.is_empty() {
        return Err(HypError::EmptySubset);
    }
    for &s in subset {
        g.check_vertex(s)?;
    }
    let mut subset = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    let to_subset = g.distances_from_set(&subset);
    let rows: Vec<Vec<u32>> = subset.par_iter().map(|&s| g.distances_from(s)).collect();
    let best = (0..subset.len())
        .into_par_iter()
        .map(|i| {
            let mut local: Option<Cand> = None;
            for j in i + 1..subset.len() {
                let dij = rows[i][subset[j]];
                if dij == INF {
                    continue;
                }
                for p in 0..g.len() {
                    if rows[i][p] != INF && rows[j][p] != INF && rows[i][p] + rows[j][p] == dij {
                        local = pick(local, Some((to_subset[p], [subset[i], subset[j], p, 0])));
                    }
                }
            }
            local
        })
        .reduce(|| None, pick);
    let witness = best.map(|(_, v)| [v[0], v[1], v[2]]);
    Ok(QcReport {
        constant: best.map_or(0, |b| b.0),
        labels: witness
            .map(|w| w.iter().map(|&x| g.label(x).to_string()).collect())
            .unwrap_or_default(),
        witness,
        lower_bound_only: false,
    })
}
