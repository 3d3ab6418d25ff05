//! Cog spec files.
//!
//! ```json
//! {
//!   "complex": {"vertices": [0, 1], "simplices": [[0], [1], [0, 1]]},
//!   "library": {"C2": {"generators": ["x"], "relators": ["aa"]}},
//!   "groups": {"0": {"ref": "C2"}, "1": {"generators": ["y"], "relators": ["aaa"]},
//!              "2": {"generators": []}},
//!   "maps": {"0,2": {}, "1,2": {}},
//!   "pi1": {"group": {"kind": "free_product", ...},
//!           "local": {"0": {"images": ["a"], "subgroup": [1]}, ...}}
//! }
//! ```
//! Group and map keys are simplex ids (positions in `simplices`). Key `"i,j"`
//! is the inclusion of simplex `i` in simplex `j`; its value sends generator
//! names of `G_j` to words over the generators of `G_i`. Local groups may
//! carry a `"model"` group spec. The optional `pi1` block supplies a model of
//! the fundamental group for developments: images of each local generator
//! and the model generators (1-based) generating each local group's image.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Arrow, CogError, LocalGroup, Scwol, SimpleComplexOfGroups, SimplicialComplex};
use crate::group::{finite_from_presentation, DehnModel, GroupModel, GroupSpec, Presentation, SharedModel, Word};

/// Coset budget when trying a local presentation as a finite group.
pub const LOCAL_TC_BUDGET: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub vertices: Vec<usize>,
    pub simplices: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalGroupSpec {
    #[serde(flatten)]
    pub presentation: Presentation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<GroupSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupEntry {
    Ref {
        #[serde(rename = "ref")]
        name: String,
    },
    Inline(LocalGroupSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalImageSpec {
    pub images: Vec<Word>,
    #[serde(default)]
    pub subgroup: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pi1Spec {
    pub group: GroupSpec,
    pub local: BTreeMap<String, LocalImageSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CogFile {
    pub complex: ComplexSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub library: BTreeMap<String, LocalGroupSpec>,
    pub groups: BTreeMap<String, GroupEntry>,
    #[serde(default)]
    pub maps: BTreeMap<String, BTreeMap<String, Word>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi1: Option<Pi1Spec>,
}

fn simplex_id(key: &str, n: usize) -> Result<usize, CogError> {
    key.trim()
        .parse::<usize>()
        .ok()
        .filter(|&i| i < n)
        .ok_or_else(|| CogError::UnknownSimplex(key.to_string()))
}

/// Explicit model, else a finite table by coset enumeration, else a
/// small-cancellation model.
pub(crate) fn local_model(spec: &LocalGroupSpec) -> Result<(Option<SharedModel>, &'static str), CogError> {
    if let Some(m) = &spec.model {
        return Ok((Some(m.build()?), "supplied"));
    }
    let p = &spec.presentation;
    if let Some(t) = finite_from_presentation(p, LOCAL_TC_BUDGET) {
        return Ok((Some(Arc::new(t) as SharedModel), "todd_coxeter"));
    }
    if let Ok(d) = DehnModel::new(p.clone()) {
        return Ok((Some(Arc::new(d) as SharedModel), "small_cancellation"));
    }
    Ok((None, "none"))
}

impl CogFile {
    pub fn from_json(text: &str) -> Result<Self, CogError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<SimpleComplexOfGroups, CogError> {
        let complex = SimplicialComplex::new(self.complex.vertices.clone(), self.complex.simplices.clone())?;
        let n = complex.len();
        let mut specs: Vec<Option<&LocalGroupSpec>> = vec![None; n];
        for (key, entry) in &self.groups {
            let i = simplex_id(key, n)?;
            specs[i] = Some(match entry {
                GroupEntry::Inline(s) => s,
                GroupEntry::Ref { name } => self.library.get(name).ok_or_else(|| CogError::UnknownRef(name.clone()))?,
            });
        }
        let mut groups = Vec::with_capacity(n);
        for (i, s) in specs.iter().enumerate() {
            let s = s.ok_or(CogError::MissingGroup(i))?;
            let (model, model_source) = local_model(s)?;
            groups.push(LocalGroup {
                presentation: s.presentation.clone(),
                model,
                model_source,
            });
        }
        let scwol = Scwol::from_complex(&complex);
        let mut maps = vec![None; scwol.arrows.len()];
        let mut stray_maps = Vec::new();
        for (key, images) in &self.maps {
            let (a, b) = key.split_once(',').ok_or_else(|| CogError::BadMapKey(key.clone()))?;
            let (sub, sup) = (simplex_id(a, n)?, simplex_id(b, n)?);
            let Some(arrow) = scwol.arrow_index(sup, sub) else {
                stray_maps.push((sub, sup));
                continue;
            };
            let names = groups[sup].presentation.generator_names();
            for name in images.keys() {
                if !names.contains(name) {
                    return Err(CogError::UnknownGenerator {
                        sub,
                        sup,
                        name: name.clone(),
                    });
                }
            }
            maps[arrow] = Some(names.iter().map(|g| images.get(g).cloned()).collect());
        }
        Ok(SimpleComplexOfGroups {
            complex,
            scwol,
            groups,
            maps,
            stray_maps,
            pi1: self.pi1.clone(),
        })
    }
}

impl SimpleComplexOfGroups {
    pub fn from_json(text: &str) -> Result<Self, CogError> {
        CogFile::from_json(text)?.build()
    }

    pub fn arrow(&self, i: usize) -> Arrow {
        self.scwol.arrows[i]
    }

    pub fn rank(&self, simplex: usize) -> usize {
        self.groups[simplex].presentation.rank()
    }

    pub fn model(&self, simplex: usize) -> Option<&dyn GroupModel> {
        self.groups[simplex].model.as_deref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refs_and_maps_resolve() {
        let text = r#"{
            "complex": {"vertices": [0, 1], "simplices": [[0], [1], [0, 1]]},
            "library": {"C2": {"generators": ["x"], "relators": ["aa"]}},
            "groups": {"0": {"ref": "C2"}, "1": {"ref": "C2"}, "2": {"generators": ["c"], "relators": ["aa"]}},
            "maps": {"0,2": {"c": "a"}, "1,2": {"c": [1]}}
        }"#;
        let c = SimpleComplexOfGroups::from_json(text).unwrap();
        assert_eq!(c.groups[0].model_source, "todd_coxeter");
        assert_eq!(c.model(0).unwrap().finite_order(), Some(2));
        let a = c.scwol.arrow_index(2, 0).unwrap();
        assert_eq!(c.images(a).unwrap(), vec![Word::letter(1)]);
        assert!(c.stray_maps.is_empty());
    }

    #[test]
    fn bad_inputs_are_errors() {
        let base = |groups: &str, maps: &str| {
            format!(r#"{{"complex": {{"vertices": [0], "simplices": [[0]]}}, "groups": {groups}, "maps": {maps}}}"#)
        };
        assert!(matches!(
            SimpleComplexOfGroups::from_json(&base("{}", "{}")),
            Err(CogError::MissingGroup(0))
        ));
        assert!(matches!(
            SimpleComplexOfGroups::from_json(&base(r#"{"0": {"ref": "nope"}}"#, "{}")),
            Err(CogError::UnknownRef(_))
        ));
        assert!(matches!(
            SimpleComplexOfGroups::from_json(&base(r#"{"5": {"generators": []}}"#, "{}")),
            Err(CogError::UnknownSimplex(_))
        ));
        assert!(matches!(
            SimpleComplexOfGroups::from_json(&base(r#"{"0": {"generators": []}}"#, r#"{"0-0": {}}"#)),
            Err(CogError::BadMapKey(_))
        ));
        let stray = SimpleComplexOfGroups::from_json(&base(r#"{"0": {"generators": []}}"#, r#"{"0,0": {}}"#)).unwrap();
        assert_eq!(stray.stray_maps, vec![(0, 0)]);
    }
}
