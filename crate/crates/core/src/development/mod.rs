//! Finite balls in the development of a simple complex of groups, built as
//! complexes of cosets `gG_σ`, and stabilizer probes on them.
//!
//! Developments assume the morphism to the fundamental group is simple: every
//! edge element `a⁺` is trivial there. This holds whenever the complex is
//! simply connected, which covers the bundled fixtures; both backends check it.

mod probe;

use serde::Serialize;
use thiserror::Error;

pub use probe::{
    acylindricity_report, fat_coset_families, stabilizer_probe, AcylVerdict, AcylindricityReport, FatFamily,
    FatReport, StabilizerProbe, DISTANCE_NOTE,
};

use crate::complex::{fundamental_presentation, maximal_tree, CogError, SimpleComplexOfGroups, SimplicialComplex};
use crate::graph::{GraphBuilder, GraphError, MetricGraph, VertexLabel};
use crate::group::{
    model_from_table, todd_coxeter, Element, GroupModel, SharedModel, SpecError, Subgroup, TcError, Word,
};

pub const DEFAULT_MAX_SIMPLICES: usize = 20_000;

#[derive(Debug, Error)]
pub enum DevError {
    #[error(transparent)]
    Cog(#[from] CogError),
    #[error("no backend: {0}")]
    BackendUnavailable(String),
    #[error("edge element of arrow {from} -> {to} is nontrivial; only simple morphisms are supported")]
    NotSimple { from: usize, to: usize },
    #[error("supplied model has no local data for simplex {0}")]
    MissingLocal(usize),
    #[error("supplied model cannot decide membership in the image of simplex {0}")]
    NoMembership(usize),
    #[error("supplied model is inconsistent with the cog: {0}")]
    InconsistentModel(String),
    #[error("index of the image of simplex {sup} in simplex {sub} is not finite within the coset budget")]
    InfiniteIndex { sub: usize, sup: usize },
    #[error("development exceeds {0} simplices")]
    BudgetExceeded(usize),
    #[error("base complex has dimension {0}; only graphs of groups are supported here")]
    HigherDimensional(usize),
    #[error("simplex {0} is not in the development ball")]
    UnknownSimplex(usize),
    #[error(transparent)]
    Group(#[from] SpecError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tc(#[from] TcError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    CosetTable,
    Supplied,
}

/// A model of the fundamental group with the image of every local group.
#[derive(Clone)]
pub struct Backend {
    pub kind: BackendKind,
    pub model: SharedModel,
    /// Images of the local generators, per simplex.
    pub images: Vec<Vec<Element>>,
    /// Membership in the image of each local group.
    pub members: Vec<Subgroup>,
}

impl std::fmt::Debug for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Backend")
            .field("kind", &self.kind)
            .field("model", &self.model.describe())
            .finish()
    }
}

impl Backend {
    /// The supplied model when the cog has one, else coset enumeration.
    pub fn from_cog(c: &SimpleComplexOfGroups, max_cosets: usize) -> Result<Backend, DevError> {
        if c.pi1.is_some() {
            Backend::supplied(c)
        } else {
            Backend::coset_table(c, max_cosets)
        }
    }

    /// Regular representation of a finite fundamental group, by coset
    /// enumeration on the compiled presentation.
    pub fn coset_table(c: &SimpleComplexOfGroups, max_cosets: usize) -> Result<Backend, DevError> {
        let compiled = fundamental_presentation(c, &maximal_tree(&c.scwol)?)?;
        let table = todd_coxeter(&compiled.presentation, &[], max_cosets)?;
        let table = model_from_table(&table)
            .map_err(|e| DevError::BackendUnavailable(format!("fundamental group is not finite at budget: {e}")))?;
        for (ai, a) in c.scwol.arrows.iter().enumerate() {
            let e = table.eval(&Word::letter(compiled.edge_letter(ai)));
            if !table.is_identity(&e) {
                return Err(DevError::NotSimple { from: a.from, to: a.to });
            }
        }
        let mut images = Vec::with_capacity(c.groups.len());
        let mut members = Vec::with_capacity(c.groups.len());
        for s in 0..c.groups.len() {
            let imgs: Vec<Element> = (0..c.rank(s))
                .map(|g| table.eval(&Word::letter(compiled.local_letter(s, g))))
                .collect();
            let idx: Vec<u32> = imgs
                .iter()
                .map(|e| match e {
                    Element::Index(i) => *i,
                    _ => unreachable!("table elements are indices"),
                })
                .collect();
            let inside = table.closure(&idx);
            let gens = (0..c.rank(s)).map(|g| compiled.local_offsets[s] + g).collect();
            members.push(Subgroup::new(gens, move |e| match e {
                Element::Index(i) => inside.get(*i as usize).copied().unwrap_or(false),
                _ => false,
            }));
            images.push(imgs);
        }
        Ok(Backend {
            kind: BackendKind::CosetTable,
            model: std::sync::Arc::new(table),
            images,
            members,
        })
    }

    /// The cog's `pi1` block. Checks that local relators hold and that the
    /// local maps commute with the images, which makes the morphism simple.
    pub fn supplied(c: &SimpleComplexOfGroups) -> Result<Backend, DevError> {
        let pi1 = c
            .pi1
            .as_ref()
            .ok_or_else(|| DevError::BackendUnavailable("cog has no pi1 block".into()))?;
        let model = pi1.group.build()?;
        let mut images = Vec::with_capacity(c.groups.len());
        let mut members = Vec::with_capacity(c.groups.len());
        for s in 0..c.groups.len() {
            let local = pi1.local.get(&s.to_string()).ok_or(DevError::MissingLocal(s))?;
            if local.images.len() != c.rank(s) {
                return Err(DevError::InconsistentModel(format!(
                    "simplex {s} has {} generators but {} images",
                    c.rank(s),
                    local.images.len()
                )));
            }
            let mut imgs = Vec::with_capacity(local.images.len());
            for w in &local.images {
                w.validate(model.rank())
                    .map_err(|e| DevError::InconsistentModel(format!("simplex {s}: {e}")))?;
                imgs.push(model.eval(w));
            }
            let gens: Vec<usize> = local.subgroup.iter().map(|&g| g.wrapping_sub(1)).collect();
            if gens.iter().any(|&g| g >= model.rank()) {
                return Err(DevError::InconsistentModel(format!("simplex {s}: subgroup generator out of range")));
            }
            let sub = model.subgroup(&gens).ok_or(DevError::NoMembership(s))?;
            if let Some(g) = imgs.iter().position(|e| !sub.contains(e)) {
                return Err(DevError::InconsistentModel(format!(
                    "image of generator {g} of simplex {s} is outside the stated subgroup"
                )));
            }
            images.push(imgs);
            members.push(sub);
        }
        let b = Backend {
            kind: BackendKind::Supplied,
            model,
            images,
            members,
        };
        for s in 0..c.groups.len() {
            for (k, r) in c.groups[s].presentation.relators().iter().enumerate() {
                if !b.model.is_identity(&b.eval_local(s, r)) {
                    return Err(DevError::InconsistentModel(format!("relator {k} of simplex {s} is nontrivial")));
                }
            }
        }
        for (ai, a) in c.scwol.arrows.iter().enumerate() {
            for g in 0..c.rank(a.from) {
                let direct = &b.images[a.from][g];
                let via = b.eval_local(a.to, c.image(ai, g).expect("validated cog"));
                if *direct != via {
                    return Err(DevError::NotSimple { from: a.from, to: a.to });
                }
            }
        }
        Ok(b)
    }

    /// A word over the generators of the local group at `simplex`, in the model.
    pub fn eval_local(&self, simplex: usize, w: &Word) -> Element {
        let m = &self.model;
        let mut acc = m.identity();
        for &l in w.letters() {
            let x = &self.images[simplex][l.unsigned_abs() as usize - 1];
            acc = if l > 0 {
                m.multiply(&acc, x)
            } else {
                m.multiply(&acc, &m.invert(x))
            };
        }
        acc
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DevSimplex {
    pub simplex: usize,
    #[serde(skip)]
    pub rep: Element,
    /// Formatted representative of the coset.
    pub key: String,
    /// Ball indices of the vertices, in the base simplex's vertex order.
    pub vertices: Vec<usize>,
    /// Least skeleton distance from the root over the vertices.
    pub distance: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct DevelopmentBall {
    pub base: SimplicialComplex,
    pub backend: BackendKind,
    pub radius: usize,
    /// Vertices first, in breadth-first order from the root (index 0), then
    /// higher simplices.
    pub simplices: Vec<DevSimplex>,
    /// Proper faces of each simplex, as ball indices.
    pub faces: Vec<Vec<usize>>,
}

struct CosetStore {
    per_simplex: Vec<Vec<(Element, usize)>>,
}

impl CosetStore {
    fn find(&self, b: &Backend, simplex: usize, g: &Element) -> Option<usize> {
        let m = &b.model;
        let gi = m.invert(g);
        self.per_simplex[simplex]
            .iter()
            .find(|(r, _)| b.members[simplex].contains(&m.multiply(&gi, r)))
            .map(|&(_, i)| i)
    }
}

/// Left coset representatives of the image of `G_from` in `G_to`, as
/// elements of the model.
fn local_reps(c: &SimpleComplexOfGroups, b: &Backend, arrow: usize, max_cosets: usize) -> Result<Vec<Element>, DevError> {
    let a = c.scwol.arrows[arrow];
    let sub = c.images(arrow).expect("validated cog");
    let t = todd_coxeter(&c.groups[a.to].presentation, &sub, max_cosets)?;
    if !t.is_complete() {
        return Err(DevError::InfiniteIndex { sub: a.to, sup: a.from });
    }
    // right cosets H w give left cosets w^-1 H
    Ok(t.representatives()
        .into_iter()
        .map(|w| b.eval_local(a.to, &w.expect("complete table is connected").inverse()))
        .collect())
}

/// Ball of the given skeleton radius around the identity coset of the least
/// vertex, with every simplex whose vertices all lie in the ball.
pub fn develop(
    c: &SimpleComplexOfGroups,
    b: &Backend,
    radius: usize,
    max_simplices: usize,
    max_cosets: usize,
) -> Result<DevelopmentBall, DevError> {
    let k = &c.complex;
    let m = &b.model;
    let mut reps: Vec<Option<Vec<Element>>> = vec![None; c.scwol.arrows.len()];
    for (ai, a) in c.scwol.arrows.iter().enumerate() {
        if k.simplex(a.to).len() == 1 {
            reps[ai] = Some(local_reps(c, b, ai, max_cosets)?);
        }
    }
    let root_vertex = *k.vertices().iter().min().expect("complex has a vertex");
    let root = k.index_of(&[root_vertex]).expect("vertex simplex");

    let mut store = CosetStore {
        per_simplex: vec![Vec::new(); k.len()],
    };
    let mut simplices: Vec<DevSimplex> = Vec::new();
    let push = |simplices: &mut Vec<DevSimplex>, store: &mut CosetStore, s: usize, g: Element, d: u32| {
        let i = simplices.len();
        store.per_simplex[s].push((g.clone(), i));
        simplices.push(DevSimplex {
            simplex: s,
            key: m.format_element(&g),
            rep: g,
            vertices: vec![],
            distance: d,
        });
        i
    };
    push(&mut simplices, &mut store, root, m.identity(), 0);
    simplices[0].vertices = vec![0];
    let mut head = 0;
    while head < simplices.len() {
        let (v, g, d) = (simplices[head].simplex, simplices[head].rep.clone(), simplices[head].distance);
        head += 1;
        if d as usize >= radius {
            continue;
        }
        for (ai, a) in c.scwol.arrows.iter().enumerate() {
            if a.to != v || k.simplex(a.from).len() != 2 {
                continue;
            }
            let e = k.simplex(a.from);
            let other = if e[0] == k.simplex(v)[0] { e[1] } else { e[0] };
            let w = k.index_of(&[other]).expect("vertex simplex");
            for h in reps[ai].as_ref().expect("vertex arrows") {
                let gh = m.multiply(&g, h);
                if store.find(b, w, &gh).is_none() {
                    if simplices.len() >= max_simplices {
                        return Err(DevError::BudgetExceeded(max_simplices));
                    }
                    let i = push(&mut simplices, &mut store, w, gh, d + 1);
                    simplices[i].vertices = vec![i];
                }
            }
        }
    }
    let vertex_count = simplices.len();

    for vi in 0..vertex_count {
        let (v, g) = (simplices[vi].simplex, simplices[vi].rep.clone());
        for (ai, a) in c.scwol.arrows.iter().enumerate() {
            if a.to != v {
                continue;
            }
            let s = a.from;
            for h in reps[ai].as_ref().expect("vertex arrows") {
                let gh = m.multiply(&g, h);
                if store.find(b, s, &gh).is_some() {
                    continue;
                }
                let mut verts = Vec::with_capacity(k.simplex(s).len());
                for &u in k.simplex(s) {
                    let us = k.index_of(&[u]).expect("vertex simplex");
                    match store.find(b, us, &gh) {
                        Some(x) => verts.push(x),
                        None => break,
                    }
                }
                if verts.len() < k.simplex(s).len() {
                    continue;
                }
                if simplices.len() >= max_simplices {
                    return Err(DevError::BudgetExceeded(max_simplices));
                }
                let d = verts.iter().map(|&x| simplices[x].distance).min().unwrap_or(0);
                let i = push(&mut simplices, &mut store, s, gh, d);
                simplices[i].vertices = verts;
            }
        }
    }

    let mut faces = vec![Vec::new(); simplices.len()];
    for (i, s) in simplices.iter().enumerate() {
        for t in 0..k.len() {
            if k.is_proper_face(t, s.simplex) {
                if let Some(j) = store.find(b, t, &s.rep) {
                    faces[i].push(j);
                }
            }
        }
        faces[i].sort_unstable();
    }
    Ok(DevelopmentBall {
        base: k.clone(),
        backend: b.kind,
        radius,
        simplices,
        faces,
    })
}

impl DevelopmentBall {
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn vertex_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.base.simplex(self.simplices[i].simplex).len() == 1).collect()
    }

    /// Number of ball simplices over each base simplex.
    pub fn fibers(&self) -> Vec<usize> {
        let mut out = vec![0; self.base.len()];
        for s in &self.simplices {
            out[s.simplex] += 1;
        }
        out
    }

    /// Face poset as a graph: each simplex joined to its codimension-one faces.
    pub fn to_graph(&self) -> Result<MetricGraph, GraphError> {
        let mut g = GraphBuilder::new();
        for s in &self.simplices {
            g.add_vertex(VertexLabel::Simplex {
                coset: s.key.clone(),
                simplex: s.simplex,
            });
        }
        for (i, s) in self.simplices.iter().enumerate() {
            let dim = self.base.simplex(s.simplex).len();
            for &j in &self.faces[i] {
                if self.base.simplex(self.simplices[j].simplex).len() + 1 == dim {
                    g.add_edge(i, j, 2);
                }
            }
        }
        g.build_unconnected(0)
    }

    /// Vertices joined by edge simplices, indexed like [`Self::vertex_indices`].
    pub fn skeleton(&self) -> Result<MetricGraph, GraphError> {
        let verts = self.vertex_indices();
        let mut pos = vec![usize::MAX; self.len()];
        let mut g = GraphBuilder::new();
        for (p, &v) in verts.iter().enumerate() {
            pos[v] = p;
            g.add_vertex(VertexLabel::Simplex {
                coset: self.simplices[v].key.clone(),
                simplex: self.simplices[v].simplex,
            });
        }
        for s in &self.simplices {
            if s.vertices.len() == 2 {
                g.add_edge(pos[s.vertices[0]], pos[s.vertices[1]], 2);
            }
        }
        g.build_unconnected(0)
    }
}

/// Whether the vertex-edge graph has no cycle. Parallel edge simplices count
/// as a cycle.
pub fn acyclicity_check(d: &DevelopmentBall) -> Result<bool, DevError> {
    if d.base.dimension() > 1 {
        return Err(DevError::HigherDimensional(d.base.dimension()));
    }
    let mut parent: Vec<usize> = (0..d.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for s in &d.simplices {
        if s.vertices.len() == 2 {
            let (a, b) = (find(&mut parent, s.vertices[0]), find(&mut parent, s.vertices[1]));
            if a == b {
                return Ok(false);
            }
            parent[a] = b;
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures;
    use crate::graph::DistanceMatrix;

    fn ball(text: &str, radius: usize) -> (SimpleComplexOfGroups, Backend, DevelopmentBall) {
        let c = SimpleComplexOfGroups::from_json(text).unwrap();
        let b = Backend::from_cog(&c, 10_000).unwrap();
        let d = develop(&c, &b, radius, DEFAULT_MAX_SIMPLICES, 10_000).unwrap();
        (c, b, d)
    }

    #[test]
    fn single_simplex_has_one_simplex() {
        let (_, b, d) = ball(fixtures::SINGLE_VERTEX, 3);
        assert_eq!(b.kind, BackendKind::CosetTable);
        assert_eq!(d.len(), 1);
        assert!(acyclicity_check(&d).unwrap());
    }

    #[test]
    fn dinfty_is_a_line() {
        let (_, b, d) = ball(fixtures::DINFTY, 4);
        assert_eq!(b.kind, BackendKind::Supplied);
        assert_eq!(d.vertex_indices().len(), 9);
        assert_eq!(d.fibers(), vec![5, 4, 8]);
        assert!(acyclicity_check(&d).unwrap());
        let sk = d.skeleton().unwrap();
        assert!(sk.is_connected());
        let degrees: Vec<usize> = (0..sk.len()).map(|v| sk.degree(v)).collect();
        assert_eq!(degrees.iter().filter(|&&x| x == 1).count(), 2);
        assert_eq!(DistanceMatrix::new(&sk).diameter(), 16);
    }

    #[test]
    fn s3_amalgam_is_a_trivalent_tree() {
        let (_, _, d) = ball(fixtures::S3_AMALGAM, 2);
        assert_eq!(d.vertex_indices().len(), 10);
        assert!(acyclicity_check(&d).unwrap());
        let sk = d.skeleton().unwrap();
        // radius-1 vertices have full degree 3
        for v in 0..sk.len() {
            if d.simplices[d.vertex_indices()[v]].distance < 2 {
                assert_eq!(sk.degree(v), 3);
            }
        }
    }

    #[test]
    fn broken_gluing_is_detected() {
        let (_, _, mut d) = ball(fixtures::DINFTY, 2);
        let verts = d.vertex_indices();
        let (a, z) = (verts[verts.len() - 2], verts[verts.len() - 1]);
        let mut extra = d.simplices.iter().find(|s| s.vertices.len() == 2).unwrap().clone();
        extra.vertices = vec![a, z];
        d.simplices.push(extra);
        d.faces.push(vec![a, z]);
        assert!(!acyclicity_check(&d).unwrap());
    }

    #[test]
    fn triangle_is_refused_by_the_tree_check() {
        let (_, _, d) = ball(fixtures::TRIVIAL_TRIANGLE, 1);
        assert_eq!(d.len(), 7);
        assert!(matches!(acyclicity_check(&d), Err(DevError::HigherDimensional(2))));
    }

    #[test]
    fn faces_are_consistent() {
        for (name, text) in fixtures::ALL {
            if name == "segment" {
                // C2 * C3 is infinite and the cog supplies no model
                let c = SimpleComplexOfGroups::from_json(text).unwrap();
                assert!(Backend::from_cog(&c, 10_000).is_err());
                continue;
            }
            let (c, _, d) = ball(text, 2);
            let fibers = d.fibers();
            assert!(fibers.iter().all(|&f| f > 0), "{name}: {fibers:?}");
            for (i, s) in d.simplices.iter().enumerate() {
                let want = (0..c.complex.len()).filter(|&t| c.complex.is_proper_face(t, s.simplex)).count();
                assert_eq!(d.faces[i].len(), want, "{name}");
                for &j in &d.faces[i] {
                    assert!(c.complex.is_proper_face(d.simplices[j].simplex, s.simplex));
                }
            }
        }
    }

    #[test]
    fn left_action_preserves_adjacency() {
        let (c, b, d) = ball(fixtures::S3_AMALGAM, 3);
        let m = &b.model;
        let store = CosetStore {
            per_simplex: {
                let mut p = vec![Vec::new(); c.complex.len()];
                for (i, s) in d.simplices.iter().enumerate() {
                    p[s.simplex].push((s.rep.clone(), i));
                }
                p
            },
        };
        for gen in 0..m.rank() {
            let x = m.generator(gen);
            for (i, s) in d.simplices.iter().enumerate() {
                let Some(si) = store.find(&b, s.simplex, &m.multiply(&x, &s.rep)) else { continue };
                for &j in &d.faces[i] {
                    let f = &d.simplices[j];
                    if let Some(fj) = store.find(&b, f.simplex, &m.multiply(&x, &f.rep)) {
                        assert!(d.faces[si].contains(&fj));
                    }
                }
            }
        }
    }

    #[test]
    fn coset_table_backend_matches_supplied_on_finite_quotient() {
        // A = B = C = C2 with identity maps: the fundamental group is C2 and
        // the development is a single edge
        let text = r#"{"complex": {"vertices": [0, 1], "simplices": [[0], [1], [0, 1]]},
            "library": {"C2": {"generators": ["x"], "relators": ["aa"]}},
            "groups": {"0": {"ref": "C2"}, "1": {"ref": "C2"}, "2": {"ref": "C2"}},
            "maps": {"0,2": {"x": "a"}, "1,2": {"x": "a"}}}"#;
        let (_, b, d) = ball(text, 5);
        assert_eq!(b.kind, BackendKind::CosetTable);
        assert_eq!(b.model.finite_order(), Some(2));
        assert_eq!(d.fibers(), vec![1, 1, 1]);
    }
}
