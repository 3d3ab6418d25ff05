//! Axiom checks for simple complexes of groups.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::SimpleComplexOfGroups;
use crate::graph::cayley_ball;
use crate::group::{GroupModel, Word};

/// Random words per arrow when injectivity can only be sampled.
pub const INJECTIVITY_SAMPLES: usize = 64;
const SAMPLE_LENGTH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// A map key that is not a proper inclusion.
    StrayMap { sub: usize, sup: usize },
    MissingMap { sub: usize, sup: usize },
    MissingImage { sub: usize, sup: usize, generator: String },
    BadWord { sub: usize, sup: usize, generator: String, detail: String },
    ModelRank { simplex: usize, model_rank: usize, presentation_rank: usize },
    /// Relator `relator` of `G_sup` maps to a nontrivial element of `G_sub`.
    RelatorImage { sub: usize, sup: usize, relator: usize, image: String },
    /// `φ_{σ,σ″}(g) ≠ φ_{σ,σ′}(φ_{σ′,σ″}(g))` for `σ ⊂ σ′ ⊂ σ″`.
    Composition {
        sigma: usize,
        sigma_prime: usize,
        sigma_second: usize,
        generator: String,
        direct: String,
        composite: String,
    },
    NotInjective { sub: usize, sup: usize, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CogReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
    /// Checks skipped or only sampled.
    pub warnings: Vec<String>,
}

enum Verdict {
    Equal,
    Different,
    Unknown,
}

fn words_equal(model: Option<&dyn GroupModel>, u: &Word, v: &Word) -> Verdict {
    match model {
        Some(m) => {
            if m.eval(u) == m.eval(v) {
                Verdict::Equal
            } else {
                Verdict::Different
            }
        }
        None if u.reduced() == v.reduced() => Verdict::Equal,
        None => Verdict::Unknown,
    }
}

pub fn validate_cog(c: &SimpleComplexOfGroups) -> CogReport {
    let mut violations = Vec::new();
    let mut warnings = Vec::new();
    for &(sub, sup) in &c.stray_maps {
        violations.push(Violation::StrayMap { sub, sup });
    }
    for (simplex, g) in c.groups.iter().enumerate() {
        if let Some(m) = &g.model {
            if m.rank() != g.presentation.rank() {
                violations.push(Violation::ModelRank {
                    simplex,
                    model_rank: m.rank(),
                    presentation_rank: g.presentation.rank(),
                });
            }
        }
    }
    let rank_ok = |s: usize| c.groups[s].model.as_ref().is_none_or(|m| m.rank() == c.rank(s));
    let model = |s: usize| if rank_ok(s) { c.model(s) } else { None };

    let arrows = &c.scwol.arrows;
    let mut usable = vec![false; arrows.len()];
    for (ai, a) in arrows.iter().enumerate() {
        let (sub, sup) = (a.to, a.from);
        let Some(images) = &c.maps[ai] else {
            violations.push(Violation::MissingMap { sub, sup });
            continue;
        };
        let names = c.groups[sup].presentation.generator_names();
        let mut ok = true;
        for (g, img) in images.iter().enumerate() {
            match img {
                None => {
                    violations.push(Violation::MissingImage {
                        sub,
                        sup,
                        generator: names[g].clone(),
                    });
                    ok = false;
                }
                Some(w) => {
                    if let Err(e) = w.validate(c.rank(sub)) {
                        violations.push(Violation::BadWord {
                            sub,
                            sup,
                            generator: names[g].clone(),
                            detail: e.to_string(),
                        });
                        ok = false;
                    }
                }
            }
        }
        usable[ai] = ok;
    }

    // relators of the source map to the identity
    for (ai, a) in arrows.iter().enumerate() {
        if !usable[ai] {
            continue;
        }
        let images = c.images(ai).expect("usable");
        for (k, r) in c.groups[a.from].presentation.relators().iter().enumerate() {
            let img = r.map_letters(&images);
            match words_equal(model(a.to), &img, &Word::empty()) {
                Verdict::Equal => {}
                Verdict::Different => violations.push(Violation::RelatorImage {
                    sub: a.to,
                    sup: a.from,
                    relator: k,
                    image: img.to_text(),
                }),
                Verdict::Unknown => warnings.push(format!(
                    "relator {k} of simplex {} maps to {} in simplex {}, which has no model to decide it",
                    a.from,
                    img.to_text(),
                    a.to
                )),
            }
        }
    }

    // compositions
    let outcomes: Vec<(Vec<Violation>, Vec<String>)> = c
        .scwol
        .composable
        .par_iter()
        .map(|&(ai, bi)| {
            let mut v = Vec::new();
            let mut w = Vec::new();
            let ci = c.scwol.compose(ai, bi);
            if !(usable[ai] && usable[bi] && usable[ci]) {
                return (v, w);
            }
            let (a, b) = (arrows[ai], arrows[bi]);
            let outer = c.images(ai).expect("usable");
            let names = c.groups[b.from].presentation.generator_names();
            for (g, name) in names.iter().enumerate() {
                let direct = c.image(ci, g).expect("usable").clone();
                let composite = c.image(bi, g).expect("usable").map_letters(&outer);
                match words_equal(model(a.to), &direct, &composite) {
                    Verdict::Equal => {}
                    Verdict::Different => v.push(Violation::Composition {
                        sigma: a.to,
                        sigma_prime: a.from,
                        sigma_second: b.from,
                        generator: name.clone(),
                        direct: direct.to_text(),
                        composite: composite.to_text(),
                    }),
                    Verdict::Unknown => w.push(format!(
                        "composition {} < {} < {} on {name} undecided without a model",
                        a.to, a.from, b.from
                    )),
                }
            }
            (v, w)
        })
        .collect();
    for (v, w) in outcomes {
        violations.extend(v);
        warnings.extend(w);
    }

    // injectivity
    for (ai, a) in arrows.iter().enumerate() {
        if !usable[ai] || c.rank(a.from) == 0 {
            continue;
        }
        let images = c.images(ai).expect("usable");
        let (Some(src), Some(tgt)) = (model(a.from), model(a.to)) else {
            warnings.push(format!("injectivity of {} -> {} not checked: no model", a.from, a.to));
            continue;
        };
        match (src.finite_order(), tgt.finite_order()) {
            (Some(order), Some(_)) => {
                let ball = match cayley_ball(src, order, order) {
                    Ok(b) => b,
                    Err(e) => {
                        warnings.push(format!("injectivity of {} -> {} not checked: {e}", a.from, a.to));
                        continue;
                    }
                };
                let mut seen = std::collections::HashMap::new();
                for (v, w) in ball.words.iter().enumerate() {
                    let key = tgt.canonical_key(&tgt.eval(&w.map_letters(&images)));
                    if let Some(&u) = seen.get(&key) {
                        let u: usize = u;
                        violations.push(Violation::NotInjective {
                            sub: a.to,
                            sup: a.from,
                            detail: format!("{} and {} have the same image", ball.words[u].to_text(), w.to_text()),
                        });
                        break;
                    }
                    seen.insert(key, v);
                }
            }
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(ai as u64);
                for _ in 0..INJECTIVITY_SAMPLES {
                    let w = Word::random(&mut rng, c.rank(a.from), SAMPLE_LENGTH);
                    if !src.is_identity(&src.eval(&w)) && tgt.is_identity(&tgt.eval(&w.map_letters(&images))) {
                        violations.push(Violation::NotInjective {
                            sub: a.to,
                            sup: a.from,
                            detail: format!("nontrivial {} maps to the identity", w.to_text()),
                        });
                        break;
                    }
                }
                warnings.push(format!(
                    "injectivity of {} -> {} sampled on {INJECTIVITY_SAMPLES} words",
                    a.from, a.to
                ));
            }
        }
    }

    CogReport {
        ok: violations.is_empty(),
        violations,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures;

    #[test]
    fn fixtures_are_valid() {
        for (name, text) in fixtures::ALL {
            let c = SimpleComplexOfGroups::from_json(text).unwrap();
            let r = validate_cog(&c);
            assert!(r.ok, "{name}: {:?}", r.violations);
        }
    }

    #[test]
    fn single_vertex_is_ok() {
        let c = SimpleComplexOfGroups::from_json(fixtures::SINGLE_VERTEX).unwrap();
        let r = validate_cog(&c);
        assert!(r.ok && r.warnings.is_empty());
    }

    #[test]
    fn twisted_triangle_names_the_chain() {
        let c = SimpleComplexOfGroups::from_json(fixtures::TWISTED_TRIANGLE).unwrap();
        let r = validate_cog(&c);
        assert!(!r.ok);
        // vertex 0 is simplex 0, the triangle is simplex 6
        assert!(r.violations.iter().all(|v| matches!(
            v,
            Violation::Composition {
                sigma: 0,
                sigma_second: 6,
                ..
            }
        )));
        assert_eq!(r.violations.len(), 2);
    }

    #[test]
    fn relator_and_injectivity_failures() {
        // C2 -> C3 cannot send x to a nontrivial element; x -> 1 is not injective
        let text = |img: &str| {
            format!(
                r#"{{"complex": {{"vertices": [0, 1], "simplices": [[0], [1], [0, 1]]}},
                "groups": {{"0": {{"generators": ["y"], "relators": ["aaa"]}},
                           "1": {{"generators": ["y"], "relators": ["aaa"]}},
                           "2": {{"generators": ["x"], "relators": ["aa"]}}}},
                "maps": {{"0,2": {{"x": "{img}"}}, "1,2": {{"x": "1"}}}}}}"#
            )
        };
        let r = validate_cog(&SimpleComplexOfGroups::from_json(&text("a")).unwrap());
        assert!(r.violations.contains(&Violation::RelatorImage {
            sub: 0,
            sup: 2,
            relator: 0,
            image: "aa".into()
        }));
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NotInjective { sub: 1, sup: 2, .. })));
    }

    #[test]
    fn missing_pieces_are_reported() {
        let text = r#"{"complex": {"vertices": [0, 1], "simplices": [[0], [1], [0, 1]]},
            "groups": {"0": {"generators": ["y"]}, "1": {"generators": ["y"]}, "2": {"generators": ["x"]}},
            "maps": {"0,2": {}, "0,1": {}}}"#;
        let c = SimpleComplexOfGroups::from_json(text).unwrap();
        let r = validate_cog(&c);
        assert!(r.violations.contains(&Violation::StrayMap { sub: 0, sup: 1 }));
        assert!(r.violations.contains(&Violation::MissingMap { sub: 1, sup: 2 }));
        assert!(r.violations.contains(&Violation::MissingImage {
            sub: 0,
            sup: 2,
            generator: "x".into()
        }));
    }
}
