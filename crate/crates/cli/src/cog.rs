//! `cog` subcommands.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Subcommand};
use serde::Serialize;

use relhyp_core::complex::{
    all_maximal_trees, fundamental_presentation, maximal_tree, recognize_free_product, tietze_simplify_tracked,
    validate_cog, RelatorCounts, SimpleComplexOfGroups, TietzeMove,
};
use relhyp_core::development::{
    acyclicity_check, acylindricity_report, develop, Backend, BackendKind, DEFAULT_MAX_SIMPLICES,
};
use relhyp_core::graph::{DistanceMatrix, DEFAULT_MAX_VERTICES};
use relhyp_core::group::Presentation;

use crate::failure::Failure;
use crate::groups::DEFAULT_MAX_COSETS;
use crate::manifest::RunManifest;
use crate::Outcome;

#[derive(Subcommand)]
pub enum CogCommand {
    /// Check the axioms of a simple complex of groups.
    Validate(CogFileArg),
    /// Presentation of the fundamental group, before and after Tietze moves.
    Present(PresentArgs),
    /// Ball in the development.
    Develop(DevelopArgs),
    /// Pointwise stabilizer growth on the development.
    Acyl(AcylArgs),
}

impl CogCommand {
    pub fn name(&self) -> &'static str {
        match self {
            CogCommand::Validate(_) => "cog validate",
            CogCommand::Present(_) => "cog present",
            CogCommand::Develop(_) => "cog develop",
            CogCommand::Acyl(_) => "cog acyl",
        }
    }
}

#[derive(Args)]
pub struct CogFileArg {
    #[arg(long)]
    pub cog: PathBuf,
}

impl CogFileArg {
    fn load(&self, m: &mut RunManifest) -> Result<SimpleComplexOfGroups, Failure> {
        let text = m.read("cog", &self.cog)?;
        Ok(SimpleComplexOfGroups::from_json(&text)?)
    }
}

#[derive(Args)]
pub struct PresentArgs {
    #[command(flatten)]
    pub file: CogFileArg,
    /// Index of the maximal tree in enumeration order; the breadth-first
    /// tree when absent.
    #[arg(long)]
    pub tree: Option<usize>,
    /// Most Tietze eliminations.
    #[arg(long, default_value_t = 1000)]
    pub tietze_budget: usize,
}

#[derive(Args)]
pub struct DevelopArgs {
    #[command(flatten)]
    pub file: CogFileArg,
    /// Skeleton radius around the base vertex, in edges.
    #[arg(long)]
    pub radius: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_SIMPLICES)]
    pub max_simplices: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
    pub max_cosets: usize,
}

#[derive(Args)]
pub struct AcylArgs {
    #[command(flatten)]
    pub develop: DevelopArgs,
    /// Least skeleton distance of the probed pairs, in edges.
    #[arg(short, long, default_value_t = 2)]
    pub k: u32,
    /// Length bound on candidate fixers.
    #[arg(long, default_value_t = 8)]
    pub word_length: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
    pub max_vertices: usize,
}

pub fn run(m: &mut RunManifest, c: &CogCommand) -> Result<Outcome, Failure> {
    match c {
        CogCommand::Validate(a) => validate(m, a),
        CogCommand::Present(a) => present(m, a),
        CogCommand::Develop(a) => develop_cmd(m, a),
        CogCommand::Acyl(a) => acyl(m, a),
    }
}

/// An invalid complex is reported in full and exits as an input error.
fn validate(m: &mut RunManifest, a: &CogFileArg) -> Result<Outcome, Failure> {
    let c = a.load(m)?;
    let report = validate_cog(&c);
    if !report.ok {
        let text = serde_json::to_string_pretty(&report.violations).expect("report JSON");
        return Err(Failure::input(format!("complex of groups is invalid:\n{text}")));
    }
    Ok(Outcome::new(report))
}

#[derive(Serialize)]
struct PresentationText {
    generators: Vec<String>,
    relators: Vec<String>,
}

impl From<&Presentation> for PresentationText {
    fn from(p: &Presentation) -> Self {
        PresentationText {
            generators: p.generator_names().to_vec(),
            relators: p.relators().iter().map(|r| r.to_text()).collect(),
        }
    }
}

#[derive(Serialize)]
struct PresentResult {
    /// Tree arrows as `[from, to]` simplex ids.
    tree: Vec<[usize; 2]>,
    counts: RelatorCounts,
    compiled: PresentationText,
    simplified: PresentationText,
    moves: Vec<TietzeMove>,
    /// Model when every simplified relator is a generator power.
    #[serde(skip_serializing_if = "Option::is_none")]
    free_product: Option<String>,
}

fn present(m: &mut RunManifest, a: &PresentArgs) -> Result<Outcome, Failure> {
    let c = a.file.load(m)?;
    let tree = match a.tree {
        None => maximal_tree(&c.scwol)?,
        Some(i) => {
            m.param("tree", i);
            all_maximal_trees(&c.scwol, i + 1)
                .into_iter()
                .nth(i)
                .ok_or_else(|| Failure::input(format!("there is no maximal tree number {i}")))?
        }
    };
    m.budget("tietze_budget", a.tietze_budget);
    let compiled = fundamental_presentation(&c, &tree)?;
    let simplified = tietze_simplify_tracked(&compiled.presentation, a.tietze_budget);
    let result = PresentResult {
        tree: compiled.tree.iter().map(|t| [t.from, t.to]).collect(),
        counts: compiled.counts,
        compiled: (&compiled.presentation).into(),
        simplified: (&simplified.presentation).into(),
        moves: simplified.moves,
        free_product: recognize_free_product(&simplified.presentation).map(|g| g.describe()),
    };
    Ok(Outcome::new(result))
}

#[derive(Serialize)]
struct DevelopResult {
    backend: BackendKind,
    radius: usize,
    simplices: usize,
    vertices: usize,
    /// Lifts of each base simplex.
    fibers: Vec<usize>,
    /// Whether the ball is a forest; absent above dimension one.
    #[serde(skip_serializing_if = "Option::is_none")]
    acyclic: Option<bool>,
    skeleton_edges: usize,
    skeleton_diameter: u32,
    /// Vertex degree to number of vertices in the 1-skeleton.
    degrees: BTreeMap<usize, usize>,
}

fn developed(
    m: &mut RunManifest,
    a: &DevelopArgs,
) -> Result<(SimpleComplexOfGroups, Backend, relhyp_core::development::DevelopmentBall), Failure> {
    let c = a.file.load(m)?;
    m.param("radius", a.radius);
    m.budget("max_simplices", a.max_simplices);
    m.budget("max_cosets", a.max_cosets);
    let b = Backend::from_cog(&c, a.max_cosets)?;
    let d = develop(&c, &b, a.radius, a.max_simplices, a.max_cosets)?;
    Ok((c, b, d))
}

fn develop_cmd(m: &mut RunManifest, a: &DevelopArgs) -> Result<Outcome, Failure> {
    let (c, _, d) = developed(m, a)?;
    let skel = d.skeleton()?;
    let mut degrees = BTreeMap::new();
    for v in 0..skel.len() {
        *degrees.entry(skel.degree(v)).or_insert(0) += 1;
    }
    let result = DevelopResult {
        backend: d.backend,
        radius: d.radius,
        simplices: d.len(),
        vertices: skel.len(),
        fibers: d.fibers(),
        acyclic: if c.complex.dimension() <= 1 {
            Some(acyclicity_check(&d)?)
        } else {
            None
        },
        skeleton_edges: skel.edge_count(),
        skeleton_diameter: DistanceMatrix::new(&skel).diameter(),
        degrees,
    };
    Ok(Outcome::new(result).with_graph(skel))
}

fn acyl(m: &mut RunManifest, a: &AcylArgs) -> Result<Outcome, Failure> {
    let (_, b, d) = developed(m, &a.develop)?;
    m.param("k", a.k);
    m.budget("word_length", a.word_length);
    m.budget("max_vertices", a.max_vertices);
    let report = acylindricity_report(&d, &b, a.k, a.word_length, a.max_vertices)?;
    Ok(Outcome::new(report))
}
