//! Peripheral cosets in a Cayley ball, the coned-off ball, and the augmented
//! ball with one truncated horoball per coset.

mod bcp;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{CayleyBall, DistanceMatrix, GraphError, MetricGraph, VertexLabel};
use crate::group::{Element, GroupModel, Subgroup};
use crate::horoball::horoball_edges;

pub use bcp::{bcp_check, bcp_sweep, project_to_coned, BcpBudget, BcpReport, BcpWitness, CosetVisit, PenetrationTrace};

/// Pairs tested when sampling closure of a peripheral predicate.
const CLOSURE_SAMPLES: usize = 64;

#[derive(Debug, Error)]
pub enum AugError {
    #[error("peripheral {index} fails closure sampling: {detail}")]
    ClosureFailure { index: usize, detail: String },
    #[error("vertex {vertex} lies in cosets {first} and {second}")]
    OverlappingCosets { vertex: usize, first: usize, second: usize },
    #[error("augmented ball needs {needed} vertices, over the budget of {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One left coset `gP` intersected with the ball.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetRecord {
    pub peripheral: usize,
    /// Hex canonical key of the representative.
    pub representative: String,
    pub rep_vertex: usize,
    /// Ball vertex ids, increasing.
    pub members: Vec<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

fn check_closure(ball: &CayleyBall, model: &dyn GroupModel, h: &Subgroup, index: usize) -> Result<(), AugError> {
    let fail = |detail: String| AugError::ClosureFailure { index, detail };
    if !h.contains(&model.identity()) {
        return Err(fail("identity is not a member".into()));
    }
    for &g in &h.generators {
        if !h.contains(&model.generator(g)) {
            return Err(fail(format!("generator {} is not a member", g + 1)));
        }
    }
    let members: Vec<&Element> = ball.elements.iter().filter(|e| h.contains(e)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(index as u64);
    for _ in 0..CLOSURE_SAMPLES.min(members.len() * members.len()) {
        let x = members[rng.gen_range(0..members.len())];
        let y = members[rng.gen_range(0..members.len())];
        let q = model.multiply(x, &model.invert(y));
        if !h.contains(&q) {
            return Err(fail(format!(
                "{} * ({})^-1 is not a member",
                model.format_element(x),
                model.format_element(y)
            )));
        }
    }
    Ok(())
}

/// Partitions the ball by left cosets of each peripheral subgroup. Classes
/// come out ordered by representative key, then peripheral index.
pub fn enumerate_cosets(
    ball: &CayleyBall,
    model: &dyn GroupModel,
    peripherals: &[Subgroup],
) -> Result<Vec<CosetRecord>, AugError> {
    let n = ball.graph.len();
    let mut out = Vec::new();
    for (pi, h) in peripherals.iter().enumerate() {
        check_closure(ball, model, h, pi)?;
        let mut uf = UnionFind::new(n);
        let gens: Vec<Element> = h.generators.iter().map(|&g| model.generator(g)).collect();
        for v in 0..n {
            for s in &gens {
                if let Some(u) = ball.vertex_of(model, &model.multiply(&ball.elements[v], s)) {
                    uf.union(v, u);
                }
            }
        }
        // components of one coset need not touch inside the ball
        let mut roots: Vec<usize> = (0..n).filter(|&v| uf.find(v) == v).collect();
        if !h.generators.is_empty() {
            let inverses: Vec<Element> = roots.iter().map(|&r| model.invert(&ball.elements[r])).collect();
            for i in 0..roots.len() {
                for j in i + 1..roots.len() {
                    if uf.find(roots[i]) == uf.find(roots[j]) {
                        continue;
                    }
                    if h.contains(&model.multiply(&inverses[i], &ball.elements[roots[j]])) {
                        uf.union(roots[i], roots[j]);
                    }
                }
            }
            roots.retain(|&r| uf.find(r) == r);
        }
        let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            classes[uf.find(v)].push(v);
        }
        for r in roots {
            let members = std::mem::take(&mut classes[r]);
            let rep = *members.iter().min_by_key(|&&v| ball.key(v)).unwrap();
            out.push(CosetRecord {
                peripheral: pi,
                representative: hex::encode(ball.key(rep)),
                rep_vertex: rep,
                members,
            });
        }
    }
    out.sort_by(|a, b| (ball.key(a.rep_vertex), a.peripheral).cmp(&(ball.key(b.rep_vertex), b.peripheral)));
    Ok(out)
}

/// Ball plus one cone vertex per coset, joined to each member by a
/// half-length edge.
#[derive(Debug, Clone)]
pub struct ConedBall {
    pub graph: MetricGraph,
    pub ball_len: usize,
    /// Cone vertex of coset `i`.
    pub cones: Vec<usize>,
    /// Coset containing each ball vertex.
    pub coset_of: Vec<Option<usize>>,
}

pub fn cone_off(ball: &CayleyBall, cosets: &[CosetRecord]) -> Result<ConedBall, AugError> {
    let n = ball.graph.len();
    let mut coset_of: Vec<Option<usize>> = vec![None; n];
    for (ci, c) in cosets.iter().enumerate() {
        for &v in &c.members {
            if let Some(first) = coset_of[v] {
                return Err(AugError::OverlappingCosets {
                    vertex: v,
                    first,
                    second: ci,
                });
            }
            coset_of[v] = Some(ci);
        }
    }
    let mut labels = ball.graph.labels().to_vec();
    let mut edges: Vec<(usize, usize, u8)> = ball.graph.edges().collect();
    let mut cones = Vec::with_capacity(cosets.len());
    for (ci, c) in cosets.iter().enumerate() {
        let cone = labels.len();
        labels.push(VertexLabel::Cone(ci));
        cones.push(cone);
        edges.extend(c.members.iter().map(|&v| (v, cone, 1)));
    }
    let graph = MetricGraph::new(labels, edges, ball.graph.base())?;
    Ok(ConedBall {
        graph,
        ball_len: n,
        cones,
        coset_of,
    })
}

/// Ball with a depth-`depth` horoball glued along each coset.
#[derive(Debug, Clone)]
pub struct AugmentedBall {
    pub graph: MetricGraph,
    pub depth: usize,
    pub ball_len: usize,
    offsets: Vec<usize>,
    sizes: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl AugmentedBall {
    /// Vertex over member `j` of coset `c` at `level`.
    pub fn vertex(&self, c: usize, j: usize, level: usize) -> usize {
        if level == 0 {
            self.members[c][j]
        } else {
            self.offsets[c] + (level - 1) * self.sizes[c] + j
        }
    }

    /// Members of coset `c` and every horoball vertex above them.
    pub fn horoball_vertices(&self, c: usize) -> Vec<usize> {
        let mut out = self.members[c].clone();
        out.extend(self.offsets[c]..self.offsets[c] + self.depth * self.sizes[c]);
        out
    }

    /// The ambient ball, recovered by deleting all positive levels.
    pub fn level_zero(&self) -> MetricGraph {
        self.graph.induced(&(0..self.ball_len).collect::<Vec<_>>())
    }
}

/// Each horoball is built over the subgraph induced on the coset's members;
/// member pairs not connected inside it get no horizontal edges.
pub fn build_augmented(
    ball: &CayleyBall,
    cosets: &[CosetRecord],
    depth: usize,
    max_vertices: usize,
) -> Result<AugmentedBall, AugError> {
    let n = ball.graph.len();
    let needed = n + cosets.iter().map(|c| c.members.len() * depth).sum::<usize>();
    if needed > max_vertices {
        return Err(AugError::BudgetExceeded {
            needed,
            budget: max_vertices,
        });
    }
    let mut labels = ball.graph.labels().to_vec();
    let mut edges: Vec<(usize, usize, u8)> = ball.graph.edges().collect();
    let mut offsets = Vec::with_capacity(cosets.len());
    for (ci, c) in cosets.iter().enumerate() {
        let offset = labels.len();
        offsets.push(offset);
        let s = c.members.len();
        for level in 1..=depth {
            for &v in &c.members {
                labels.push(VertexLabel::Horo {
                    coset: Some(ci),
                    vertex: v,
                    level,
                });
            }
        }
        if depth == 0 {
            continue;
        }
        let base = ball.graph.induced(&c.members);
        let dist = DistanceMatrix::new(&base);
        let members = &c.members;
        let index = |j: usize, k: usize| {
            if k == 0 {
                members[j]
            } else {
                offset + (k - 1) * s + j
            }
        };
        edges.extend(horoball_edges(s, std::iter::empty(), |u, v| dist.get(u, v), depth, index));
    }
    let graph = MetricGraph::new(labels, edges, ball.graph.base())?;
    Ok(AugmentedBall {
        graph,
        depth,
        ball_len: n,
        offsets,
        sizes: cosets.iter().map(|c| c.members.len()).collect(),
        members: cosets.iter().map(|c| c.members.clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{canonical_form, cayley_ball, distance};
    use crate::group::{FreeGroup, Word};

    fn f2_cosets(radius: usize) -> (FreeGroup, CayleyBall, Vec<CosetRecord>) {
        let f = FreeGroup::new(2);
        let ball = cayley_ball(&f, radius, 100_000).unwrap();
        let h = f.subgroup(&[0]).unwrap();
        let cosets = enumerate_cosets(&ball, &f, &[h]).unwrap();
        (f, ball, cosets)
    }

    /// Model-arithmetic check that each record is one coset.
    fn assert_cosets(ball: &CayleyBall, model: &dyn GroupModel, h: &Subgroup, cosets: &[CosetRecord]) {
        let mut seen = vec![false; ball.graph.len()];
        for c in cosets {
            let r = model.invert(&ball.elements[c.rep_vertex]);
            for &v in &c.members {
                assert!(h.contains(&model.multiply(&r, &ball.elements[v])));
                assert!(ball.key(c.rep_vertex) <= ball.key(v));
                assert!(!seen[v]);
                seen[v] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
        for (i, a) in cosets.iter().enumerate() {
            for b in &cosets[i + 1..] {
                let q = model.multiply(&model.invert(&ball.elements[a.rep_vertex]), &ball.elements[b.rep_vertex]);
                assert!(!h.contains(&q));
            }
        }
    }

    #[test]
    fn extreme_subgroups() {
        let f = FreeGroup::new(2);
        let ball = cayley_ball(&f, 2, 100).unwrap();
        let whole = enumerate_cosets(&ball, &f, &[f.subgroup(&[0, 1]).unwrap()]).unwrap();
        assert_eq!(whole.len(), 1);
        assert_eq!(whole[0].members.len(), 17);
        let trivial = enumerate_cosets(&ball, &f, &[f.subgroup(&[]).unwrap()]).unwrap();
        assert_eq!(trivial.len(), 17);
        assert!(trivial.iter().all(|c| c.members.len() == 1));
    }

    #[test]
    fn line_coset_in_f2() {
        let (f, ball, cosets) = f2_cosets(2);
        assert_cosets(&ball, &f, &f.subgroup(&[0]).unwrap(), &cosets);
        let id = cosets.iter().find(|c| c.members.contains(&0)).unwrap();
        let mut words: Vec<String> = id.members.iter().map(|&v| ball.words[v].to_text()).collect();
        words.sort();
        let mut want: Vec<String> = ["1", "AA", "A", "a", "aa"].iter().map(|s| s.to_string()).collect();
        want.sort();
        assert_eq!(words, want);
        // oracle: reduced words of length <= 2 with a right tail in <a> counted by prefix
        let oracle_classes = {
            let mut heads = std::collections::BTreeSet::new();
            for w in &ball.words {
                let l = w.letters();
                let cut = l.iter().rposition(|x| x.abs() != 1).map_or(0, |i| i + 1);
                heads.insert(l[..cut].to_vec());
            }
            heads.len()
        };
        assert_eq!(cosets.len(), oracle_classes);
    }

    #[test]
    fn closure_failure_is_reported() {
        let f = FreeGroup::new(2);
        let ball = cayley_ball(&f, 2, 100).unwrap();
        // claims <a, b> but only admits <a>
        let bogus = Subgroup::new(vec![0, 1], |e| matches!(e, Element::Word(w) if w.iter().all(|&l| l.abs() == 1)));
        assert!(matches!(
            enumerate_cosets(&ball, &f, &[bogus]),
            Err(AugError::ClosureFailure { index: 0, .. })
        ));
        // admits <a> and b alone: not closed under products
        let leaky = Subgroup::new(vec![0], |e| {
            matches!(e, Element::Word(w) if w.iter().all(|&l| l.abs() == 1) || w == &vec![2])
        });
        assert!(matches!(
            enumerate_cosets(&ball, &f, &[leaky]),
            Err(AugError::ClosureFailure { index: 0, .. })
        ));
        let no_id = Subgroup::new(vec![], |_| false);
        assert!(matches!(
            enumerate_cosets(&ball, &f, &[no_id]),
            Err(AugError::ClosureFailure { index: 0, .. })
        ));
    }

    #[test]
    fn coning_examples() {
        let z = FreeGroup::new(1);
        let ball = cayley_ball(&z, 3, 100).unwrap();
        let all = enumerate_cosets(&ball, &z, &[z.subgroup(&[0]).unwrap()]).unwrap();
        let coned = cone_off(&ball, &all).unwrap();
        for u in 0..7 {
            for v in 0..7 {
                assert!(distance(&coned.graph, u, v).unwrap() <= 2);
            }
        }
        let trivial = enumerate_cosets(&ball, &z, &[z.subgroup(&[]).unwrap()]).unwrap();
        let pendant = cone_off(&ball, &trivial).unwrap();
        assert_eq!(distance(&pendant.graph, 0, 6).unwrap(), distance(&ball.graph, 0, 6).unwrap());
        let stripped = coned.graph.induced(&(0..7).collect::<Vec<_>>());
        assert_eq!(stripped, ball.graph);
    }

    #[test]
    fn coned_distance_to_a5b() {
        let (f, ball, cosets) = f2_cosets(7);
        let coned = cone_off(&ball, &cosets).unwrap();
        let target = ball.vertex_of(&f, &f.eval(&Word::parse_text("aaaaab").unwrap())).unwrap();
        assert_eq!(distance(&coned.graph, 0, target).unwrap(), 4);
    }

    #[test]
    fn overlapping_cosets_rejected() {
        let f = FreeGroup::new(2);
        let ball = cayley_ball(&f, 1, 100).unwrap();
        let hs = [f.subgroup(&[0]).unwrap(), f.subgroup(&[1]).unwrap()];
        let cosets = enumerate_cosets(&ball, &f, &hs).unwrap();
        assert!(matches!(cone_off(&ball, &cosets), Err(AugError::OverlappingCosets { .. })));
        // horoballs may share level-0 vertices
        assert!(build_augmented(&ball, &cosets, 1, 1000).is_ok());
    }

    #[test]
    fn augmented_counts_and_sections() {
        let z = FreeGroup::new(1);
        let zb = cayley_ball(&z, 3, 100).unwrap();
        let all = enumerate_cosets(&zb, &z, &[z.subgroup(&[0]).unwrap()]).unwrap();
        assert_eq!(build_augmented(&zb, &all, 1, 1000).unwrap().graph.len(), 14);
        assert_eq!(build_augmented(&zb, &all, 0, 1000).unwrap().graph, zb.graph);

        let (_, ball, cosets) = f2_cosets(2);
        let aug = build_augmented(&ball, &cosets, 2, 10_000).unwrap();
        let expected = ball.graph.len() + cosets.iter().map(|c| 2 * c.members.len()).sum::<usize>();
        assert_eq!(aug.graph.len(), expected);
        let zero = aug.level_zero();
        assert_eq!(canonical_form(&zero).unwrap(), canonical_form(&ball.graph).unwrap());
        assert!(matches!(
            build_augmented(&ball, &cosets, 2, 20),
            Err(AugError::BudgetExceeded { .. })
        ));
        for u in 0..ball.graph.len() {
            let da = aug.graph.distances_from(u);
            let db = ball.graph.distances_from(u);
            for v in 0..ball.graph.len() {
                assert!(da[v] <= db[v]);
            }
        }
    }
}
