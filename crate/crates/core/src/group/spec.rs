//! JSON group spec files.
//!
//! ```json
//! {"kind": "free", "rank": 2}
//! {"kind": "free_abelian", "rank": 2}
//! {"kind": "cyclic", "order": 5}
//! {"kind": "finite_table", "table": [[0,1],[1,0]], "identity": 0, "generators": [1]}
//! {"kind": "presentation", "generators": ["x","y"], "relators": [[1,1],[2,2,2]]}
//! {"kind": "free_product", "factors": [ ... ]}
//! {"kind": "direct_product", "factors": [ ... ]}
//! {"kind": "amalgam", "left": {..}, "right": {..}, "edge": {..},
//!  "left_images": [[2]], "right_images": [[2]]}
//! ```
//! Any spec may carry `"peripheral": [1]`, the 1-based generator indices that
//! generate the peripheral subgroup.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::amalgam::{Amalgam, AmalgamError};
use super::dehn::{DehnError, DehnModel};
use super::finite::{FiniteTable, TableError};
use super::model::{FreeAbelian, FreeGroup, GroupModel, SharedModel, Subgroup};
use super::presentation::{Presentation, PresentationError};
use super::product::{DirectProduct, FreeProduct};
use super::todd_coxeter::{model_from_table, todd_coxeter};
use super::word::Word;

/// Coset budget used when a presentation spec is tried as a finite group.
pub const DEFAULT_PRESENTATION_COSETS: usize = 20_000;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("invalid group spec JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Amalgam(#[from] AmalgamError),
    #[error("presentation is neither finite within {cosets} cosets nor small-cancellation: {dehn}")]
    Undecidable { cosets: usize, dehn: DehnError },
    #[error("{0} requires a finite group")]
    NotFinite(String),
    #[error("peripheral generator {index} out of range for rank {rank}")]
    BadPeripheral { index: usize, rank: usize },
    #[error("peripheral subgroup membership is not decidable in this model")]
    NoMembership,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Free {
        rank: usize,
    },
    FreeAbelian {
        rank: usize,
    },
    Cyclic {
        order: usize,
    },
    FiniteTable {
        table: Vec<Vec<u32>>,
        #[serde(default)]
        identity: u32,
        generators: Vec<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
    },
    Presentation {
        #[serde(flatten)]
        presentation: Presentation,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_cosets: Option<usize>,
    },
    FreeProduct {
        factors: Vec<GroupSpec>,
    },
    DirectProduct {
        factors: Vec<GroupSpec>,
    },
    Amalgam {
        left: Box<GroupSpec>,
        right: Box<GroupSpec>,
        edge: Box<GroupSpec>,
        left_images: Vec<Word>,
        right_images: Vec<Word>,
    },
}

/// A group spec file: the spec plus an optional peripheral generator list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupFile {
    #[serde(flatten)]
    pub spec: GroupSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub peripheral: Vec<usize>,
}

impl GroupFile {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Membership predicate for the peripheral subgroup (0-based indices
    /// internally). An empty list means the trivial subgroup.
    pub fn peripheral_subgroup(&self, model: &dyn GroupModel) -> Result<Subgroup, SpecError> {
        peripheral_subgroup(model, &self.peripheral)
    }
}

/// `⟨generators⟩` for 1-based generator indices.
pub fn peripheral_subgroup(model: &dyn GroupModel, one_based: &[usize]) -> Result<Subgroup, SpecError> {
    let rank = model.rank();
    let mut gens = Vec::with_capacity(one_based.len());
    for &g in one_based {
        if g == 0 || g > rank {
            return Err(SpecError::BadPeripheral { index: g, rank });
        }
        gens.push(g - 1);
    }
    model.subgroup(&gens).ok_or(SpecError::NoMembership)
}

impl GroupSpec {
    pub fn build(&self) -> Result<SharedModel, SpecError> {
        Ok(match self {
            GroupSpec::Free { rank } => Arc::new(FreeGroup::new(*rank)),
            GroupSpec::FreeAbelian { rank } => Arc::new(FreeAbelian::new(*rank)),
            GroupSpec::Cyclic { order: 0 } => Arc::new(FreeGroup::new(1)),
            GroupSpec::Cyclic { .. } | GroupSpec::FiniteTable { .. } => Arc::new(self.build_finite()?),
            GroupSpec::Presentation {
                presentation,
                max_cosets,
            } => {
                let cosets = max_cosets.unwrap_or(DEFAULT_PRESENTATION_COSETS);
                if let Some(t) = finite_from_presentation(presentation, cosets) {
                    Arc::new(t)
                } else {
                    match DehnModel::new(presentation.clone()) {
                        Ok(m) => Arc::new(m),
                        Err(dehn) => return Err(SpecError::Undecidable { cosets, dehn }),
                    }
                }
            }
            GroupSpec::FreeProduct { factors } => Arc::new(FreeProduct::new(
                factors.iter().map(|f| f.build()).collect::<Result<_, _>>()?,
            )),
            GroupSpec::DirectProduct { factors } => Arc::new(DirectProduct::new(
                factors.iter().map(|f| f.build()).collect::<Result<_, _>>()?,
            )),
            GroupSpec::Amalgam {
                left,
                right,
                edge,
                left_images,
                right_images,
            } => Arc::new(Amalgam::new(
                left.build_finite()?,
                right.build_finite()?,
                edge.build_finite()?,
                left_images,
                right_images,
            )?),
        })
    }

    /// The spec as a finite multiplication table, when it is one.
    pub fn build_finite(&self) -> Result<FiniteTable, SpecError> {
        match self {
            GroupSpec::Cyclic { order } if *order > 0 => Ok(FiniteTable::cyclic(*order)),
            GroupSpec::FiniteTable {
                table,
                identity,
                generators,
                names,
            } => {
                let t = FiniteTable::new(table.clone(), *identity, generators.clone())?;
                Ok(match names {
                    Some(n) if n.len() == t.order() => t.with_names(n.clone()),
                    _ => t,
                })
            }
            GroupSpec::Presentation {
                presentation,
                max_cosets,
            } => finite_from_presentation(presentation, max_cosets.unwrap_or(DEFAULT_PRESENTATION_COSETS))
                .ok_or_else(|| SpecError::NotFinite("amalgam factor".into())),
            _ => Err(SpecError::NotFinite("amalgam factor".into())),
        }
    }
}

/// Todd–Coxeter over the trivial subgroup, as a table model when it closes.
pub fn finite_from_presentation(p: &Presentation, max_cosets: usize) -> Option<FiniteTable> {
    let t = todd_coxeter(p, &[], max_cosets).ok()?;
    let names = p.generator_names().to_vec();
    let table = model_from_table(&t).ok()?;
    let words = table.element_words();
    let labels = words
        .into_iter()
        .map(|w| {
            let w = w.expect("generators generate the table");
            if w.is_empty() {
                "1".to_string()
            } else {
                w.letters()
                    .iter()
                    .map(|&l| {
                        let n = &names[l.unsigned_abs() as usize - 1];
                        if l > 0 {
                            n.clone()
                        } else {
                            format!("{n}^-1")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("*")
            }
        })
        .collect();
    Some(table.with_names(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_kind() {
        let texts = [
            r#"{"kind":"free","rank":2}"#,
            r#"{"kind":"free_abelian","rank":2}"#,
            r#"{"kind":"cyclic","order":5}"#,
            r#"{"kind":"finite_table","table":[[0,1],[1,0]],"generators":[1]}"#,
            r#"{"kind":"presentation","generators":["x","y"],"relators":[[1,1],[2,2,2],[1,2,1,2,1,2,1,2,1,2]]}"#,
            r#"{"kind":"free_product","factors":[{"kind":"cyclic","order":2},{"kind":"cyclic","order":3}]}"#,
            r#"{"kind":"direct_product","factors":[{"kind":"free_abelian","rank":1},{"kind":"cyclic","order":2}]}"#,
            r#"{"kind":"amalgam","left":{"kind":"cyclic","order":2},"right":{"kind":"cyclic","order":2},"edge":{"kind":"cyclic","order":1},"left_images":[[]],"right_images":[[]]}"#,
        ];
        let ranks = [2, 2, 1, 1, 2, 2, 2, 2];
        for (t, r) in texts.iter().zip(ranks) {
            let f = GroupFile::from_json(t).unwrap();
            let m = f.spec.build().unwrap();
            assert_eq!(m.rank(), r, "{t}");
        }
    }

    #[test]
    fn presentation_kind_prefers_finite_then_dehn() {
        let a5 = GroupFile::from_json(
            r#"{"kind":"presentation","generators":["x","y"],"relators":[[1,1],[2,2,2],[1,2,1,2,1,2,1,2,1,2]]}"#,
        )
        .unwrap();
        assert_eq!(a5.spec.build().unwrap().finite_order(), Some(60));
        let surface = GroupFile::from_json(
            r#"{"kind":"presentation","generators":["a","b","c","d"],"relators":["abABcdCD"],"max_cosets":200}"#,
        )
        .unwrap();
        let m = surface.spec.build().unwrap();
        assert_eq!(m.finite_order(), None);
        let bad = GroupFile::from_json(r#"{"kind":"presentation","generators":["a","b"],"relators":["abAB"],"max_cosets":50}"#).unwrap();
        assert!(matches!(bad.spec.build(), Err(SpecError::Undecidable { .. })));
    }

    #[test]
    fn peripheral_indices_are_validated() {
        let f = GroupFile::from_json(r#"{"kind":"free","rank":2,"peripheral":[1]}"#).unwrap();
        let m = f.spec.build().unwrap();
        let h = f.peripheral_subgroup(m.as_ref()).unwrap();
        assert_eq!(h.generators, vec![0]);
        assert!(matches!(
            peripheral_subgroup(m.as_ref(), &[3]),
            Err(SpecError::BadPeripheral { index: 3, rank: 2 })
        ));
    }
}
