//! Stabilizer enumeration up to a word-length budget.
//!
//! Whether a stabilizer is finite cannot be decided by enumeration. The
//! verdicts below are evidence at the given budget, with the growth sequence
//! exposed so the reader can judge.

use rayon::prelude::*;
use serde::Serialize;

use super::{Backend, DevError, DevelopmentBall};
use crate::augmented::enumerate_cosets;
use crate::graph::{cayley_ball, CayleyBall, INF};
use crate::group::{Element, GroupModel, Subgroup};

pub const DISTANCE_NOTE: &str =
    "distances are edge counts in the vertex 1-skeleton of the ball, standing in for the piecewise metric";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizerProbe {
    pub s1: usize,
    pub s2: usize,
    pub labels: [String; 2],
    /// Edge count in the ball's skeleton; `None` when disconnected in the ball.
    pub distance: Option<u32>,
    pub word_length: usize,
    /// Shortlex words of the elements fixing both simplices.
    pub fixers: Vec<String>,
    /// Fixer counts among elements of length at most 1, 2, ..., `word_length`.
    pub growth: Vec<usize>,
}

impl StabilizerProbe {
    /// Strict increase between the last two budgets.
    pub fn increasing(&self) -> bool {
        let n = self.growth.len();
        n >= 2 && self.growth[n - 1] > self.growth[n - 2]
    }
}

fn fixes(b: &Backend, d: &DevelopmentBall, s: usize, x: &Element) -> bool {
    let m = &b.model;
    let r = &d.simplices[s].rep;
    b.members[d.simplices[s].simplex].contains(&m.multiply(&m.multiply(&m.invert(r), x), r))
}

/// Skeleton distances (in edges) between the vertices of the ball.
fn vertex_distances(d: &DevelopmentBall) -> Result<(Vec<usize>, Vec<Vec<u32>>), DevError> {
    let verts = d.vertex_indices();
    let mut pos = vec![usize::MAX; d.len()];
    for (p, &v) in verts.iter().enumerate() {
        pos[v] = p;
    }
    let sk = d.skeleton()?;
    let rows = (0..sk.len())
        .map(|v| sk.distances_from(v).into_iter().map(|x| if x == INF { INF } else { x / 2 }).collect())
        .collect();
    Ok((pos, rows))
}

fn simplex_distance(d: &DevelopmentBall, pos: &[usize], rows: &[Vec<u32>], s1: usize, s2: usize) -> Option<u32> {
    let mut best = INF;
    for &u in &d.simplices[s1].vertices {
        for &v in &d.simplices[s2].vertices {
            best = best.min(rows[pos[u]][pos[v]]);
        }
    }
    (best != INF).then_some(best)
}

fn label(d: &DevelopmentBall, s: usize) -> String {
    format!("({}:{})", d.simplices[s].key, d.simplices[s].simplex)
}

fn growth_of(ball: &CayleyBall, fixed: impl Fn(usize) -> bool, word_length: usize) -> Vec<usize> {
    let mut growth = vec![0; word_length];
    for v in 0..ball.graph.len() {
        if fixed(v) {
            for g in growth.iter_mut().skip(ball.depth(v).saturating_sub(1)) {
                *g += 1;
            }
        }
    }
    growth
}

/// Elements of length at most `word_length` fixing both simplices.
pub fn stabilizer_probe(
    d: &DevelopmentBall,
    b: &Backend,
    s1: usize,
    s2: usize,
    word_length: usize,
    max_elements: usize,
) -> Result<StabilizerProbe, DevError> {
    for s in [s1, s2] {
        if s >= d.len() {
            return Err(DevError::UnknownSimplex(s));
        }
    }
    let ball = cayley_ball(b.model.as_ref(), word_length, max_elements)?;
    let (pos, rows) = vertex_distances(d)?;
    let fixed: Vec<bool> = ball
        .elements
        .par_iter()
        .map(|x| fixes(b, d, s1, x) && fixes(b, d, s2, x))
        .collect();
    Ok(StabilizerProbe {
        s1,
        s2,
        labels: [label(d, s1), label(d, s2)],
        distance: simplex_distance(d, &pos, &rows, s1, s2),
        word_length,
        fixers: (0..ball.graph.len())
            .filter(|&v| fixed[v])
            .map(|v| ball.words[v].to_text())
            .collect(),
        growth: growth_of(&ball, |v| fixed[v], word_length),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AcylVerdict {
    AcylindricalEvidence,
    NonAcylindricalEvidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AcylindricityReport {
    pub verdict: AcylVerdict,
    pub k: u32,
    pub word_length: usize,
    pub pairs_checked: usize,
    pub max_fixer_count: usize,
    /// Probes growing at the last budget (up to 8), else the largest probe.
    pub witnesses: Vec<StabilizerProbe>,
    pub heuristic: bool,
    pub note: String,
}

const MAX_WITNESSES: usize = 8;

/// Sweeps simplex pairs at distance at least `k`. Any pair whose fixer count
/// still grows at the last budget gives non-acylindrical evidence.
pub fn acylindricity_report(
    d: &DevelopmentBall,
    b: &Backend,
    k: u32,
    word_length: usize,
    max_elements: usize,
) -> Result<AcylindricityReport, DevError> {
    let ball = cayley_ball(b.model.as_ref(), word_length, max_elements)?;
    let (pos, rows) = vertex_distances(d)?;
    let fixed: Vec<Vec<bool>> = (0..d.len())
        .into_par_iter()
        .map(|s| ball.elements.iter().map(|x| fixes(b, d, s, x)).collect())
        .collect();
    let probes: Vec<Vec<(usize, usize, u32, Vec<usize>)>> = (0..d.len())
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            for j in i + 1..d.len() {
                let Some(dist) = simplex_distance(d, &pos, &rows, i, j) else { continue };
                if dist < k {
                    continue;
                }
                let growth = growth_of(&ball, |v| fixed[i][v] && fixed[j][v], word_length);
                out.push((i, j, dist, growth));
            }
            out
        })
        .collect();
    let probes: Vec<_> = probes.into_iter().flatten().collect();
    let make = |&(i, j, dist, ref growth): &(usize, usize, u32, Vec<usize>)| StabilizerProbe {
        s1: i,
        s2: j,
        labels: [label(d, i), label(d, j)],
        distance: Some(dist),
        word_length,
        fixers: (0..ball.graph.len())
            .filter(|&v| fixed[i][v] && fixed[j][v])
            .map(|v| ball.words[v].to_text())
            .collect(),
        growth: growth.clone(),
    };
    let last = |g: &Vec<usize>| g.last().copied().unwrap_or(0);
    let max_fixer_count = probes.iter().map(|p| last(&p.3)).max().unwrap_or(0);
    let growing: Vec<StabilizerProbe> = probes
        .iter()
        .map(make)
        .filter(|p| p.increasing())
        .take(MAX_WITNESSES)
        .collect();
    let (verdict, witnesses) = if growing.is_empty() {
        let top = probes.iter().find(|p| last(&p.3) == max_fixer_count).map(make);
        (AcylVerdict::AcylindricalEvidence, top.into_iter().collect())
    } else {
        (AcylVerdict::NonAcylindricalEvidence, growing)
    };
    Ok(AcylindricityReport {
        verdict,
        k,
        word_length,
        pairs_checked: probes.len(),
        max_fixer_count,
        witnesses,
        heuristic: true,
        note: DISTANCE_NOTE.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FatFamily {
    /// Shortlex words of the coset representatives; the first is `H` itself.
    pub cosets: Vec<String>,
    /// Size of `∩ gHg⁻¹` among elements of length at most `word_length`.
    pub intersection: usize,
    pub growth: Vec<usize>,
    /// "flat" or "increasing" at the last budget.
    pub evidence: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FatReport {
    pub radius: usize,
    pub word_length: usize,
    pub threshold: usize,
    pub cosets: usize,
    pub family_count: usize,
    pub families: Vec<FatFamily>,
}

/// Families of cosets `gH` meeting the ball of the given radius, each
/// containing `H`, whose conjugates `gHg⁻¹` share more than `threshold`
/// elements of length at most `word_length`. Each coset seeds one family that
/// is then extended greedily in coset order; duplicates are dropped.
pub fn fat_coset_families(
    model: &dyn GroupModel,
    h: &Subgroup,
    radius: usize,
    word_length: usize,
    threshold: usize,
    max_elements: usize,
) -> Result<FatReport, DevError> {
    let ball = cayley_ball(model, radius, max_elements)?;
    let cosets = enumerate_cosets(&ball, model, std::slice::from_ref(h))
        .map_err(|e| DevError::BackendUnavailable(e.to_string()))?;
    let elems = cayley_ball(model, word_length, max_elements)?;
    let in_h: Vec<usize> = (0..elems.graph.len()).filter(|&v| h.contains(&elems.elements[v])).collect();
    let anchor = cosets
        .iter()
        .position(|c| h.contains(&ball.elements[c.rep_vertex]))
        .expect("the identity lies in some coset");
    // for each coset, the members x of H with g^-1 x g in H
    let kept: Vec<Vec<bool>> = cosets
        .par_iter()
        .map(|c| {
            let g = &ball.elements[c.rep_vertex];
            let gi = model.invert(g);
            let mut row = vec![false; elems.graph.len()];
            for &v in &in_h {
                if h.contains(&model.multiply(&model.multiply(&gi, &elems.elements[v]), g)) {
                    row[v] = true;
                }
            }
            row
        })
        .collect();
    let count = |s: &[bool]| s.iter().filter(|&&x| x).count();
    let mut families: Vec<(Vec<usize>, Vec<bool>)> = Vec::new();
    for seed in 0..cosets.len() {
        let mut members = vec![anchor];
        let mut s = kept[anchor].clone();
        if seed != anchor {
            members.push(seed);
            for (x, y) in s.iter_mut().zip(&kept[seed]) {
                *x &= *y;
            }
        }
        if count(&s) <= threshold {
            continue;
        }
        for other in 0..cosets.len() {
            if members.contains(&other) {
                continue;
            }
            let both: Vec<bool> = s.iter().zip(&kept[other]).map(|(x, y)| *x && *y).collect();
            if count(&both) > threshold {
                members.push(other);
                s = both;
            }
        }
        let mut key = members.clone();
        key.sort_unstable();
        if families.iter().all(|(m, _)| {
            let mut k2 = m.clone();
            k2.sort_unstable();
            k2 != key
        }) {
            families.push((members, s));
        }
    }
    let families: Vec<FatFamily> = families
        .into_iter()
        .map(|(members, s)| {
            let growth = growth_of(&elems, |v| s[v], word_length);
            let n = growth.len();
            let increasing = n >= 2 && growth[n - 1] > growth[n - 2];
            FatFamily {
                cosets: members.iter().map(|&c| ball.words[cosets[c].rep_vertex].to_text()).collect(),
                intersection: count(&s),
                growth,
                evidence: if increasing { "increasing" } else { "flat" }.into(),
            }
        })
        .collect();
    Ok(FatReport {
        radius,
        word_length,
        threshold,
        cosets: cosets.len(),
        family_count: families.len(),
        families,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{fixtures, SimpleComplexOfGroups};
    use crate::development::{develop, DEFAULT_MAX_SIMPLICES};
    use crate::group::{FreeGroup, GroupModel};

    fn setup(text: &str, radius: usize) -> (Backend, DevelopmentBall) {
        let c = SimpleComplexOfGroups::from_json(text).unwrap();
        let b = Backend::from_cog(&c, 10_000).unwrap();
        let d = develop(&c, &b, radius, DEFAULT_MAX_SIMPLICES, 10_000).unwrap();
        (b, d)
    }

    #[test]
    fn vertex_stabilizer_in_dinfty_is_the_vertex_group() {
        let (b, d) = setup(fixtures::DINFTY, 4);
        let p = stabilizer_probe(&d, &b, 0, 0, 8, 100_000).unwrap();
        assert_eq!(p.fixers.len(), 2);
        assert_eq!(p.growth, vec![2; 8]);
        assert_eq!(p.distance, Some(0));
    }

    #[test]
    fn far_pair_in_dinfty_is_fixed_by_identity_only() {
        let (b, d) = setup(fixtures::DINFTY, 4);
        let far = d.vertex_indices().into_iter().find(|&v| d.simplices[v].distance == 2).unwrap();
        let p = stabilizer_probe(&d, &b, 0, far, 8, 100_000).unwrap();
        assert_eq!(p.fixers, vec!["1".to_string()]);
        assert!(!p.increasing());
        // every listed fixer fixes both
        let r = acylindricity_report(&d, &b, 2, 8, 100_000).unwrap();
        assert_eq!(r.verdict, AcylVerdict::AcylindricalEvidence);
        assert_eq!(r.max_fixer_count, 1);
    }

    #[test]
    fn central_z_gives_non_acylindrical_evidence() {
        let (b, d) = setup(fixtures::Z_DINFTY, 2);
        let far = d.vertex_indices().into_iter().find(|&v| d.simplices[v].distance == 2).unwrap();
        let counts: Vec<usize> = [4, 6, 8]
            .iter()
            .map(|&l| *stabilizer_probe(&d, &b, 0, far, l, 100_000).unwrap().growth.last().unwrap())
            .collect();
        assert!(counts[0] < counts[1] && counts[1] < counts[2], "{counts:?}");
        let r = acylindricity_report(&d, &b, 2, 8, 100_000).unwrap();
        assert_eq!(r.verdict, AcylVerdict::NonAcylindricalEvidence);
    }

    #[test]
    fn single_simplex_is_vacuous() {
        let (b, d) = setup(fixtures::SINGLE_VERTEX, 2);
        let r = acylindricity_report(&d, &b, 1, 4, 1000).unwrap();
        assert_eq!(r.verdict, AcylVerdict::AcylindricalEvidence);
        assert_eq!(r.pairs_checked, 0);
    }

    #[test]
    fn fat_families_in_f2() {
        let f = FreeGroup::new(2);
        let a = f.subgroup(&[0]).unwrap();
        let r = fat_coset_families(&f, &a, 3, 6, 1, 100_000).unwrap();
        assert_eq!(r.family_count, 1);
        assert_eq!(r.families[0].cosets, vec!["1".to_string()]);
        assert_eq!(r.families[0].intersection, 13);

        let whole = f.subgroup(&[0, 1]).unwrap();
        let r = fat_coset_families(&f, &whole, 2, 3, 1, 100_000).unwrap();
        assert_eq!(r.family_count, 1);
        assert_eq!(r.families[0].evidence, "increasing");

        let trivial = f.subgroup(&[]).unwrap();
        assert_eq!(fat_coset_families(&f, &trivial, 2, 4, 1, 100_000).unwrap().family_count, 0);
    }
}
