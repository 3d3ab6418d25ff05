//! Maximal trees and the fundamental-group presentation.

use std::collections::VecDeque;

use serde::Serialize;

use super::{validate_cog, Arrow, CogError, Scwol, SimpleComplexOfGroups};
use crate::group::{Presentation, Word};

/// Spanning tree of the scwol's 1-skeleton, breadth-first from object 0,
/// visiting neighbors in increasing object order. Returns arrow indices,
/// sorted.
pub fn maximal_tree(s: &Scwol) -> Result<Vec<usize>, CogError> {
    if s.objects == 0 {
        return Ok(vec![]);
    }
    let mut nbrs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); s.objects];
    for (i, a) in s.arrows.iter().enumerate() {
        nbrs[a.from].push((a.to, i));
        nbrs[a.to].push((a.from, i));
    }
    for n in &mut nbrs {
        n.sort_unstable();
    }
    let mut seen = vec![false; s.objects];
    let mut tree = Vec::new();
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        for &(y, arrow) in &nbrs[x] {
            if !seen[y] {
                seen[y] = true;
                tree.push(arrow);
                queue.push_back(y);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(CogError::Disconnected);
    }
    tree.sort_unstable();
    Ok(tree)
}

/// Every spanning tree, up to `limit` of them, in lexicographic order of
/// their sorted arrow lists.
pub fn all_maximal_trees(s: &Scwol, limit: usize) -> Vec<Vec<usize>> {
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        r
    }
    fn go(s: &Scwol, next: usize, chosen: &mut Vec<usize>, parent: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        if chosen.len() + 1 == s.objects {
            out.push(chosen.clone());
            return;
        }
        let remaining = s.arrows.len() - next;
        if remaining < s.objects - 1 - chosen.len() {
            return;
        }
        let a = s.arrows[next];
        let (ra, rb) = (find(parent, a.from), find(parent, a.to));
        if ra != rb {
            let saved = parent.clone();
            parent[ra] = rb;
            chosen.push(next);
            go(s, next + 1, chosen, parent, out, limit);
            chosen.pop();
            *parent = saved;
        }
        go(s, next + 1, chosen, parent, out, limit);
    }
    let mut out = Vec::new();
    if s.objects == 0 {
        return out;
    }
    let mut parent: Vec<usize> = (0..s.objects).collect();
    go(s, 0, &mut Vec::new(), &mut parent, &mut out, limit);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorOrigin {
    /// Generator `name` of the local group at `simplex`.
    Local { simplex: usize, name: String },
    /// The edge generator `a⁺` of an arrow.
    Edge { from: usize, to: usize },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RelatorCounts {
    pub local: usize,
    pub composition: usize,
    pub conjugation: usize,
    pub tree: usize,
}

impl RelatorCounts {
    pub fn total(&self) -> usize {
        self.local + self.composition + self.conjugation + self.tree
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompiledPresentation {
    pub presentation: Presentation,
    pub provenance: Vec<GeneratorOrigin>,
    pub tree: Vec<Arrow>,
    pub counts: RelatorCounts,
    /// Index of the first generator of each local group.
    pub local_offsets: Vec<usize>,
    /// Index of the first edge generator; arrow `i` is generator
    /// `edge_offset + i`.
    pub edge_offset: usize,
}

impl CompiledPresentation {
    /// Letter (1-based) of local generator `g` of `simplex`.
    pub fn local_letter(&self, simplex: usize, g: usize) -> i32 {
        (self.local_offsets[simplex] + g + 1) as i32
    }

    pub fn edge_letter(&self, arrow: usize) -> i32 {
        (self.edge_offset + arrow + 1) as i32
    }
}

/// Presentation with generators `s{σ}_{name}` for every local generator then
/// `e{from}_{to}` for every arrow, and relators in four blocks: local
/// relators, `(ab)⁺ = a⁺b⁺` per composable pair, `a⁺ g (a⁺)⁻¹ = φ_a(g)` per
/// arrow and source generator, and `a⁺` per tree arrow. `a⁻` is written as
/// the inverse of `a⁺`.
pub fn fundamental_presentation(c: &SimpleComplexOfGroups, tree: &[usize]) -> Result<CompiledPresentation, CogError> {
    let report = validate_cog(c);
    if !report.ok {
        return Err(CogError::Invalid(report.violations));
    }
    let arrows = &c.scwol.arrows;
    for &t in tree {
        if t >= arrows.len() {
            return Err(CogError::BadTree(t));
        }
    }
    let mut names = Vec::new();
    let mut provenance = Vec::new();
    let mut local_offsets = Vec::with_capacity(c.groups.len());
    for (s, g) in c.groups.iter().enumerate() {
        local_offsets.push(names.len());
        for n in g.presentation.generator_names() {
            names.push(format!("s{s}_{n}"));
            provenance.push(GeneratorOrigin::Local {
                simplex: s,
                name: n.clone(),
            });
        }
    }
    let edge_offset = names.len();
    for a in arrows {
        names.push(format!("e{}_{}", a.from, a.to));
        provenance.push(GeneratorOrigin::Edge { from: a.from, to: a.to });
    }
    let local = |s: usize| {
        let shift = local_offsets[s] as i32;
        move |w: &Word| Word::new(w.letters().iter().map(|&l| l.signum() * (l.abs() + shift)).collect())
    };
    let edge = |a: usize| (edge_offset + a + 1) as i32;

    let mut relators = Vec::new();
    let mut counts = RelatorCounts::default();
    for (s, g) in c.groups.iter().enumerate() {
        for r in g.presentation.relators() {
            relators.push(local(s)(r));
            counts.local += 1;
        }
    }
    for &(a, b) in &c.scwol.composable {
        let ab = c.scwol.compose(a, b);
        relators.push(Word::new(vec![edge(ab), -edge(b), -edge(a)]));
        counts.composition += 1;
    }
    for (ai, a) in arrows.iter().enumerate() {
        for g in 0..c.rank(a.from) {
            let image = local(a.to)(c.image(ai, g).expect("validated"));
            let mut w = vec![edge(ai), local_offsets[a.from] as i32 + g as i32 + 1, -edge(ai)];
            w.extend(image.inverse().letters());
            relators.push(Word::new(w));
            counts.conjugation += 1;
        }
    }
    let mut tree_arrows: Vec<usize> = tree.to_vec();
    tree_arrows.sort_unstable();
    tree_arrows.dedup();
    for &t in &tree_arrows {
        relators.push(Word::letter(edge(t)));
        counts.tree += 1;
    }
    let presentation = Presentation::new(names, relators).expect("generated names are distinct");
    Ok(CompiledPresentation {
        presentation,
        provenance,
        tree: tree_arrows.iter().map(|&t| arrows[t]).collect(),
        counts,
        local_offsets,
        edge_offset,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{fixtures, tietze_simplify};

    #[test]
    fn tree_sizes() {
        for (name, text) in fixtures::ALL {
            let c = SimpleComplexOfGroups::from_json(text).unwrap();
            let t = maximal_tree(&c.scwol).unwrap();
            assert_eq!(t.len(), c.scwol.objects - 1, "{name}");
        }
        let single = SimpleComplexOfGroups::from_json(fixtures::SINGLE_VERTEX).unwrap();
        assert!(maximal_tree(&single.scwol).unwrap().is_empty());
        let seg = SimpleComplexOfGroups::from_json(fixtures::SEGMENT).unwrap();
        assert_eq!(maximal_tree(&seg.scwol).unwrap().len(), 2);
    }

    #[test]
    fn disconnected_complex_has_no_tree() {
        let text = r#"{"complex": {"vertices": [0, 1], "simplices": [[0], [1]]},
            "groups": {"0": {"generators": []}, "1": {"generators": []}}}"#;
        let c = SimpleComplexOfGroups::from_json(text).unwrap();
        assert!(matches!(maximal_tree(&c.scwol), Err(CogError::Disconnected)));
    }

    #[test]
    fn spanning_tree_enumeration_matches_count() {
        // triangle scwol: 7 objects, 12 arrows
        let c = SimpleComplexOfGroups::from_json(fixtures::TRIVIAL_TRIANGLE).unwrap();
        let trees = all_maximal_trees(&c.scwol, usize::MAX);
        assert!(trees.contains(&maximal_tree(&c.scwol).unwrap()));
        assert!(trees.iter().all(|t| t.len() == 6));
        // brute-force oracle over all 6-subsets of the 12 arrows
        let mut count = 0;
        for mask in 0u32..(1 << 12) {
            if mask.count_ones() != 6 {
                continue;
            }
            let mut parent: Vec<usize> = (0..7).collect();
            let mut ok = true;
            for i in 0..12 {
                if mask >> i & 1 == 1 {
                    let a = c.scwol.arrows[i];
                    let f = |p: &Vec<usize>, mut x: usize| {
                        while p[x] != x {
                            x = p[x];
                        }
                        x
                    };
                    let (x, y) = (f(&parent, a.from), f(&parent, a.to));
                    if x == y {
                        ok = false;
                        break;
                    }
                    parent[x] = y;
                }
            }
            count += ok as usize;
        }
        assert_eq!(trees.len(), count);
    }

    #[test]
    fn single_vertex_compiles_to_its_group() {
        let c = SimpleComplexOfGroups::from_json(fixtures::SINGLE_VERTEX).unwrap();
        let p = fundamental_presentation(&c, &[]).unwrap();
        assert_eq!(p.presentation.generator_names(), &["s0_x".to_string()]);
        assert_eq!(p.presentation.relators(), &[Word::new(vec![1, 1])]);
    }

    #[test]
    fn relator_bookkeeping() {
        for (name, text) in fixtures::ALL {
            let c = SimpleComplexOfGroups::from_json(text).unwrap();
            let tree = maximal_tree(&c.scwol).unwrap();
            let p = fundamental_presentation(&c, &tree).unwrap();
            let local: usize = c.groups.iter().map(|g| g.presentation.relators().len()).sum();
            let conj: usize = c.scwol.arrows.iter().map(|a| c.rank(a.from)).sum();
            let want = local + c.scwol.composable.len() + conj + tree.len();
            assert_eq!(p.presentation.relators().len(), want, "{name}");
            assert_eq!(p.counts.total(), want);
            // tree generators are killed by single-letter relators
            for &t in &tree {
                assert!(p.presentation.relators().contains(&Word::letter(p.edge_letter(t))));
            }
            assert_eq!(p.provenance.len(), p.presentation.rank());
        }
    }

    #[test]
    fn segment_compiles_to_free_product() {
        let c = SimpleComplexOfGroups::from_json(fixtures::SEGMENT).unwrap();
        let p = fundamental_presentation(&c, &maximal_tree(&c.scwol).unwrap()).unwrap();
        assert_eq!(p.presentation.rank(), 4);
        let q = tietze_simplify(&p.presentation, 100);
        assert_eq!(q.rank(), 2);
        assert_eq!(q.relators(), &[Word::new(vec![1, 1]), Word::new(vec![2, 2, 2])]);
    }

    #[test]
    fn trivial_triangle_is_trivial() {
        let c = SimpleComplexOfGroups::from_json(fixtures::TRIVIAL_TRIANGLE).unwrap();
        for tree in all_maximal_trees(&c.scwol, 50) {
            let p = fundamental_presentation(&c, &tree).unwrap();
            let q = tietze_simplify(&p.presentation, 1000);
            assert_eq!(q.rank(), 0, "tree {tree:?}");
        }
    }

    #[test]
    fn invalid_cog_is_refused() {
        let c = SimpleComplexOfGroups::from_json(fixtures::TWISTED_TRIANGLE).unwrap();
        assert!(matches!(
            fundamental_presentation(&c, &maximal_tree(&c.scwol).unwrap()),
            Err(CogError::Invalid(_))
        ));
    }
}
