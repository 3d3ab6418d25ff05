//! Projection of ball paths to the coned-off ball and an empirical bounded
//! coset penetration sweep over pairs of geodesics (k = 1 only).

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{cayley_ball, geodesics_between, CayleyBall, DistanceMatrix};
use crate::group::{GroupModel, Subgroup};

use super::{cone_off, enumerate_cosets, AugError, ConedBall, CosetRecord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetVisit {
    pub coset: usize,
    pub entry: usize,
    pub exit: usize,
    /// Weight of the replaced subpath, in half-units.
    pub travel: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PenetrationTrace {
    pub visits: Vec<CosetVisit>,
}

impl PenetrationTrace {
    fn visit(&self, coset: usize) -> Option<&CosetVisit> {
        self.visits.iter().find(|v| v.coset == coset)
    }
}

/// Replaces each maximal run of at least two path vertices in one coset,
/// with distinct ends, by the two half-edges through its cone; a run that
/// returns to its entry collapses to that vertex. Backtracks `x y x` and
/// repeated vertices are then removed.
pub fn project_to_coned(coned: &ConedBall, path: &[usize]) -> (Vec<usize>, PenetrationTrace) {
    let mut raw = Vec::with_capacity(path.len());
    let mut visits = Vec::new();
    let mut i = 0;
    while i < path.len() {
        let Some(c) = coned.coset_of[path[i]] else {
            raw.push(path[i]);
            i += 1;
            continue;
        };
        let mut j = i;
        while j + 1 < path.len() && coned.coset_of[path[j + 1]] == Some(c) {
            j += 1;
        }
        raw.push(path[i]);
        if j > i && path[i] != path[j] {
            let travel = path[i..=j]
                .windows(2)
                .map(|w| coned.graph.edge_weight(w[0], w[1]).expect("path edge") as u32)
                .sum();
            raw.push(coned.cones[c]);
            raw.push(path[j]);
            visits.push(CosetVisit {
                coset: c,
                entry: path[i],
                exit: path[j],
                travel,
            });
        }
        i = j + 1;
    }
    let mut out: Vec<usize> = Vec::with_capacity(raw.len());
    for v in raw {
        if out.last() == Some(&v) {
            continue;
        }
        if out.len() >= 2 && out[out.len() - 2] == v {
            out.pop();
            continue;
        }
        out.push(v);
    }
    (out, PenetrationTrace { visits })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BcpBudget {
    pub max_vertices: usize,
    /// Geodesic pairs compared before the sweep stops.
    pub max_pairs: usize,
    /// Geodesics enumerated per endpoint pair.
    pub max_geodesics: usize,
}

impl Default for BcpBudget {
    fn default() -> Self {
        BcpBudget {
            max_vertices: crate::graph::DEFAULT_MAX_VERTICES,
            max_pairs: 200_000_000,
            max_geodesics: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BcpWitness {
    /// "travel" or "gap".
    pub kind: String,
    pub value: u32,
    pub coset: String,
    pub gamma1: Vec<String>,
    pub gamma2: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BcpReport {
    pub k: u32,
    pub radius: usize,
    pub c_travel: u32,
    pub c_gap: u32,
    pub truncated: bool,
    pub pairs_checked: u64,
    pub witnesses: Vec<BcpWitness>,
}

#[derive(Clone)]
struct Best {
    value: u32,
    coset: usize,
    gamma1: Vec<usize>,
    gamma2: Vec<usize>,
}

fn improve(slot: &mut Option<Best>, value: u32, coset: usize, g1: &[usize], g2: &[usize]) {
    if slot.as_ref().is_none_or(|b| value > b.value) {
        *slot = Some(Best {
            value,
            coset,
            gamma1: g1.to_vec(),
            gamma2: g2.to_vec(),
        });
    }
}

#[derive(Default)]
struct Partial {
    pairs: u64,
    geodesics_truncated: bool,
    travel: Option<Best>,
    gap: Option<Best>,
}

impl Partial {
    fn absorb(&mut self, other: Partial) {
        self.pairs += other.pairs;
        self.geodesics_truncated |= other.geodesics_truncated;
        for (mine, theirs) in [(&mut self.travel, other.travel), (&mut self.gap, other.gap)] {
            if let Some(t) = theirs {
                improve(mine, t.value, t.coset, &t.gamma1, &t.gamma2);
            }
        }
    }
}

/// Ball vertices within one unit (2 half-units) of `v`, increasing.
fn near(ball: &CayleyBall, v: usize) -> Vec<usize> {
    let mut out: Vec<usize> = ball
        .graph
        .neighbors(v)
        .iter()
        .filter(|&&(_, w)| w <= 2)
        .map(|&(u, _)| u as usize)
        .collect();
    out.push(v);
    out.sort_unstable();
    out
}

fn sweep_source(
    ball: &CayleyBall,
    coned: &ConedBall,
    dm: &DistanceMatrix,
    x1: usize,
    max_geodesics: usize,
) -> Partial {
    let n = ball.graph.len();
    let mut p = Partial::default();
    let nx = near(ball, x1);
    for y1 in x1..n {
        let g1s = geodesics_between(&ball.graph, dm.row(x1), dm.row(y1), x1, y1, max_geodesics);
        p.geodesics_truncated |= g1s.truncated;
        let ny = near(ball, y1);
        let traces1: Vec<PenetrationTrace> =
            g1s.geodesics.iter().map(|g| project_to_coned(coned, &g.vertices).1).collect();
        for &x2 in &nx {
            for &y2 in &ny {
                let g2s = geodesics_between(&ball.graph, dm.row(x2), dm.row(y2), x2, y2, max_geodesics);
                p.geodesics_truncated |= g2s.truncated;
                for g2 in &g2s.geodesics {
                    let t2 = project_to_coned(coned, &g2.vertices).1;
                    for (g1, t1) in g1s.geodesics.iter().zip(&traces1) {
                        p.pairs += 1;
                        for v in &t1.visits {
                            match t2.visit(v.coset) {
                                None => improve(&mut p.travel, v.travel, v.coset, &g1.vertices, &g2.vertices),
                                Some(w) => {
                                    let gap = dm.get(v.entry, w.entry).max(dm.get(v.exit, w.exit));
                                    improve(&mut p.gap, gap, v.coset, &g1.vertices, &g2.vertices);
                                }
                            }
                        }
                        for w in &t2.visits {
                            if t1.visit(w.coset).is_none() {
                                improve(&mut p.travel, w.travel, w.coset, &g2.vertices, &g1.vertices);
                            }
                        }
                    }
                }
            }
        }
    }
    p
}

/// The sweep on prepared inputs. `γ1` runs over geodesics `x1 -> y1` with
/// `x1 <= y1`; `γ2` over geodesics whose ends lie within one unit of them.
/// Sources are taken in order and a source is only counted whole; the sweep
/// stops before the source that would push the pair count over budget.
pub fn bcp_sweep(ball: &CayleyBall, cosets: &[CosetRecord], coned: &ConedBall, budget: &BcpBudget) -> BcpReport {
    let n = ball.graph.len();
    let dm = DistanceMatrix::new(&ball.graph);
    let mut total = Partial::default();
    let mut truncated = false;
    let block = rayon::current_num_threads().max(1) * 4;
    'blocks: for start in (0..n).step_by(block) {
        let parts: Vec<Partial> = (start..(start + block).min(n))
            .into_par_iter()
            .map(|x1| sweep_source(ball, coned, &dm, x1, budget.max_geodesics.max(1)))
            .collect();
        for part in parts {
            if total.pairs + part.pairs > budget.max_pairs as u64 {
                truncated = true;
                break 'blocks;
            }
            total.absorb(part);
        }
    }
    let label_path = |p: &[usize]| p.iter().map(|&v| ball.graph.label(v).to_string()).collect::<Vec<_>>();
    let mut witnesses = Vec::new();
    for (kind, best) in [("travel", &total.travel), ("gap", &total.gap)] {
        if let Some(b) = best {
            witnesses.push(BcpWitness {
                kind: kind.into(),
                value: b.value,
                coset: ball.graph.label(cosets[b.coset].rep_vertex).to_string(),
                gamma1: label_path(&b.gamma1),
                gamma2: label_path(&b.gamma2),
            });
        }
    }
    BcpReport {
        k: 1,
        radius: ball.radius,
        c_travel: total.travel.as_ref().map_or(0, |b| b.value),
        c_gap: total.gap.as_ref().map_or(0, |b| b.value),
        truncated: truncated || total.geodesics_truncated,
        pairs_checked: total.pairs,
        witnesses,
    }
}

/// Builds the ball, its peripheral cosets and the coned ball, then sweeps.
pub fn bcp_check(
    model: &dyn GroupModel,
    peripherals: &[Subgroup],
    radius: usize,
    budget: &BcpBudget,
) -> Result<BcpReport, AugError> {
    let ball = cayley_ball(model, radius, budget.max_vertices)?;
    let cosets = enumerate_cosets(&ball, model, peripherals)?;
    let coned = cone_off(&ball, &cosets)?;
    Ok(bcp_sweep(&ball, &cosets, &coned, budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::all_geodesics;
    use crate::group::{FreeGroup, Word};

    fn setup(radius: usize) -> (FreeGroup, CayleyBall, Vec<CosetRecord>, ConedBall) {
        let f = FreeGroup::new(2);
        let ball = cayley_ball(&f, radius, 100_000).unwrap();
        let cosets = enumerate_cosets(&ball, &f, &[f.subgroup(&[0]).unwrap()]).unwrap();
        let coned = cone_off(&ball, &cosets).unwrap();
        (f, ball, cosets, coned)
    }

    fn v(f: &FreeGroup, ball: &CayleyBall, text: &str) -> usize {
        ball.vertex_of(f, &f.eval(&Word::parse_text(text).unwrap())).unwrap()
    }

    fn weight(coned: &ConedBall, p: &[usize]) -> u32 {
        p.windows(2).map(|w| coned.graph.edge_weight(w[0], w[1]).unwrap() as u32).sum()
    }

    #[test]
    fn path_inside_one_coset() {
        let (f, ball, _, coned) = setup(3);
        let path: Vec<usize> = ["A", "1", "a", "aa"].iter().map(|t| v(&f, &ball, t)).collect();
        let (out, trace) = project_to_coned(&coned, &path);
        assert_eq!(weight(&coned, &out), 2);
        assert_eq!(trace.visits.len(), 1);
        assert_eq!(trace.visits[0].travel, 6);
    }

    #[test]
    fn trace_through_line() {
        let (f, ball, _, coned) = setup(3);
        let path: Vec<usize> = ["1", "a", "aa", "aab"].iter().map(|t| v(&f, &ball, t)).collect();
        let (out, trace) = project_to_coned(&coned, &path);
        let visit = &trace.visits[0];
        assert_eq!((visit.entry, visit.exit, visit.travel), (path[0], path[2], 4));
        assert_eq!(trace.visits.len(), 1);
        assert_eq!(weight(&coned, &out), 4);
    }

    #[test]
    fn single_steps_keep_their_weight() {
        let (f, ball, _, coned) = setup(3);
        // b -> ba crosses one edge inside the coset b<a>
        let path: Vec<usize> = ["ab", "a", "1", "b", "ba"].iter().map(|t| v(&f, &ball, t)).collect();
        let (out, _) = project_to_coned(&coned, &path);
        assert_eq!(weight(&coned, &out), weight(&coned, &path));
        let lone: Vec<usize> = ["b", "bb", "bbb"].iter().map(|t| v(&f, &ball, t)).collect();
        let (out, trace) = project_to_coned(&coned, &lone);
        assert_eq!(out, lone);
        assert!(trace.visits.is_empty());
    }

    #[test]
    fn backtracks_are_removed() {
        let (f, ball, _, coned) = setup(3);
        let path: Vec<usize> = ["1", "b", "bb", "b", "1", "B"].iter().map(|t| v(&f, &ball, t)).collect();
        let (out, _) = project_to_coned(&coned, &path);
        assert_eq!(out, vec![path[0], path[5]]);
    }

    #[test]
    fn geodesic_projections_have_no_backtracks() {
        let (_, ball, _, coned) = setup(3);
        for x in 0..ball.graph.len() {
            for y in 0..ball.graph.len() {
                let g = &all_geodesics(&ball.graph, x, y, 2).unwrap().geodesics[0];
                let (out, trace) = project_to_coned(&coned, &g.vertices);
                assert!(out.windows(3).all(|w| w[0] != w[2]));
                let mut cs: Vec<usize> = trace.visits.iter().map(|v| v.coset).collect();
                cs.sort_unstable();
                let before = cs.len();
                cs.dedup();
                assert_eq!(before, cs.len());
            }
        }
    }

    #[test]
    fn small_sweep_is_deterministic() {
        let (_, ball, cosets, coned) = setup(2);
        let budget = BcpBudget::default();
        let a = bcp_sweep(&ball, &cosets, &coned, &budget);
        let b = bcp_sweep(&ball, &cosets, &coned, &budget);
        assert_eq!(a, b);
        assert!(!a.truncated);
        assert!(a.c_travel >= 2);
        let cut = bcp_sweep(
            &ball,
            &cosets,
            &coned,
            &BcpBudget {
                max_pairs: 10,
                ..budget
            },
        );
        assert!(cut.truncated);
        assert!(cut.pairs_checked <= 10);
    }
}
