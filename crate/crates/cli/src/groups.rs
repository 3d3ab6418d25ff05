//! Commands on groups and graphs.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use relhyp_core::augmented::{bcp_check, build_augmented, cone_off, enumerate_cosets, BcpBudget};
use relhyp_core::development::fat_coset_families;
use relhyp_core::graph::{cayley_ball, CayleyBall, DistanceMatrix, MetricGraph, DEFAULT_MAX_VERTICES, INF};
use relhyp_core::group::{
    peripheral_subgroup, todd_coxeter, GroupFile, GroupModel, GroupSpec, Presentation, SharedModel, Subgroup,
    Word,
};
use relhyp_core::horoball::{build_horoball, horoball_distance_exact, horoball_distance_fast, Horoball};
use relhyp_core::hyperbolicity::{
    four_point_delta, quasiconvexity_constant, slim_delta, DeltaPolicy, DEFAULT_EXHAUSTIVE_BOUND,
};

use crate::failure::Failure;
use crate::manifest::RunManifest;
use crate::Outcome;

pub const DEFAULT_MAX_COSETS: usize = 10_000;

pub fn load_group(m: &mut RunManifest, path: &Path) -> Result<(GroupFile, SharedModel), Failure> {
    let text = m.read("group", path)?;
    let file = GroupFile::from_json(&text)?;
    let model = file.spec.build()?;
    Ok((file, model))
}

/// `--peripheral` if given, else the group file's `peripheral` list.
fn peripheral(m: &mut RunManifest, file: &GroupFile, flag: &[usize], model: &dyn GroupModel) -> Result<Subgroup, Failure> {
    let gens = if flag.is_empty() { &file.peripheral } else { flag };
    if gens.is_empty() {
        return Err(Failure::input(
            "no peripheral subgroup: pass --peripheral or set \"peripheral\" in the group file",
        ));
    }
    m.param("peripheral", gens);
    Ok(peripheral_subgroup(model, gens)?)
}

fn load_graph(m: &mut RunManifest, path: &Path) -> Result<MetricGraph, Failure> {
    let text = m.read("graph", path)?;
    let g = if path.extension().is_some_and(|e| e == "dot") {
        MetricGraph::from_dot(&text)?
    } else {
        MetricGraph::from_json(&text)?
    };
    Ok(g)
}

fn ball_of(m: &mut RunManifest, model: &dyn GroupModel, radius: usize, max_vertices: usize) -> Result<CayleyBall, Failure> {
    m.param("radius", radius);
    m.budget("max_vertices", max_vertices);
    Ok(cayley_ball(model, radius, max_vertices)?)
}

/// A graph given directly or as a Cayley ball.
#[derive(Args)]
pub struct Source {
    /// Graph file: JSON, or DOT when the name ends in `.dot`.
    #[arg(long, conflicts_with = "group", required_unless_present = "group")]
    pub graph: Option<PathBuf>,
    /// Group spec file; the graph is a ball in its Cayley graph.
    #[arg(long)]
    pub group: Option<PathBuf>,
    /// Ball radius, with --group.
    #[arg(long, requires = "group")]
    pub radius: Option<usize>,
    /// Vertex budget for the ball.
    #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
    pub max_vertices: usize,
}

impl Source {
    fn load(&self, m: &mut RunManifest) -> Result<(MetricGraph, Option<usize>), Failure> {
        match (&self.graph, &self.group) {
            (Some(path), _) => Ok((load_graph(m, path)?, None)),
            (None, Some(path)) => {
                let radius = self.radius.ok_or_else(|| Failure::input("--group needs --radius"))?;
                let (_, model) = load_group(m, path)?;
                let ball = ball_of(m, model.as_ref(), radius, self.max_vertices)?;
                Ok((ball.graph, Some(radius)))
            }
            (None, None) => Err(Failure::input("pass --graph or --group")),
        }
    }
}

#[derive(Args)]
pub struct BallArgs {
    #[arg(long)]
    pub group: PathBuf,
    #[arg(long)]
    pub radius: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
    pub max_vertices: usize,
}

#[derive(Serialize)]
struct BallResult {
    group: String,
    radius: usize,
    vertices: usize,
    edges: usize,
    /// Number of elements of each word length.
    spheres: Vec<usize>,
}

pub fn ball(m: &mut RunManifest, a: &BallArgs) -> Result<Outcome, Failure> {
    let (_, model) = load_group(m, &a.group)?;
    let b = ball_of(m, model.as_ref(), a.radius, a.max_vertices)?;
    let mut spheres = vec![0; a.radius + 1];
    for v in 0..b.graph.len() {
        spheres[b.depth(v)] += 1;
    }
    let result = BallResult {
        group: model.describe(),
        radius: a.radius,
        vertices: b.graph.len(),
        edges: b.graph.edge_count(),
        spheres,
    };
    Ok(Outcome::new(result).with_graph(b.graph))
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Measure {
    Slim,
    FourPoint,
}

#[derive(Args)]
pub struct DeltaArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: Mode,
    #[arg(long, value_enum, default_value = "slim")]
    pub measure: Measure,
    /// Sampled triangles or quadruples, in sampled mode.
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// Largest graph evaluated exhaustively.
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_BOUND)]
    pub exhaustive_bound: usize,
}

pub fn delta(m: &mut RunManifest, a: &DeltaArgs) -> Result<Outcome, Failure> {
    let (g, radius) = a.source.load(m)?;
    let policy = match a.mode {
        Mode::Exhaustive => {
            m.budget("exhaustive_bound", a.exhaustive_bound);
            DeltaPolicy::Exhaustive {
                max_vertices: a.exhaustive_bound,
            }
        }
        Mode::Sampled => {
            m.param("samples", a.samples);
            DeltaPolicy::Sampled {
                seed: m.seed,
                samples: a.samples,
            }
        }
    };
    let report = match a.measure {
        Measure::Slim => slim_delta(&g, policy)?,
        Measure::FourPoint => four_point_delta(&g, policy)?,
    };
    let report = match radius {
        Some(r) => report.with_radius(r),
        None => report,
    };
    Ok(Outcome::new(report))
}

#[derive(Args)]
pub struct HoroballArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub depth: usize,
    /// Horoball vertex budget for the all-pairs check.
    #[arg(long, default_value_t = 5000)]
    pub max_horoball_vertices: usize,
    /// Query endpoint `vertex@level`.
    #[arg(long, requires = "to")]
    pub from: Option<String>,
    #[arg(long, requires = "from")]
    pub to: Option<String>,
}

#[derive(Serialize)]
struct Query {
    from: String,
    to: String,
    fast: u32,
    exact: u32,
    touches_top_level: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: Option<String>,
}

#[derive(Serialize)]
struct HoroballResult {
    base_vertices: usize,
    depth: usize,
    vertices: usize,
    edges: usize,
    pairs: u64,
    /// Least and greatest `fast - exact` over all vertex pairs, half-units.
    gap_min: u32,
    gap_max: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    query: Option<Query>,
}

fn parse_point(h: &Horoball, s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::input(format!("expected vertex@level, got {s:?}"));
    let (v, k) = s.split_once('@').ok_or_else(bad)?;
    let p = (v.parse().map_err(|_| bad())?, k.parse().map_err(|_| bad())?);
    h.vertex(p.0, p.1)?;
    Ok(p)
}

/// Least and greatest `fast - exact` over all pairs, from exact all-pairs
/// distances.
pub fn normal_form_gaps(h: &Horoball) -> Result<(u32, u32, u64), Failure> {
    let g = h.graph();
    let n = g.len();
    let dm = DistanceMatrix::new(g);
    let parts: Vec<Result<(u32, u32, u64), Failure>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let (mut lo, mut hi, mut pairs) = (u32::MAX, 0, 0);
            for y in x..n {
                let fast = horoball_distance_fast(h, h.coords(x), h.coords(y))?;
                let exact = dm.get(x, y);
                if exact == INF || fast < exact {
                    return Err(Failure::input(format!("normal form undercuts the exact distance at {x}, {y}")));
                }
                lo = lo.min(fast - exact);
                hi = hi.max(fast - exact);
                pairs += 1;
            }
            Ok((lo, hi, pairs))
        })
        .collect();
    let (mut lo, mut hi, mut pairs) = (u32::MAX, 0, 0);
    for p in parts {
        let (a, b, c) = p?;
        lo = lo.min(a);
        hi = hi.max(b);
        pairs += c;
    }
    Ok((if pairs == 0 { 0 } else { lo }, hi, pairs))
}

pub fn horoball(m: &mut RunManifest, a: &HoroballArgs) -> Result<Outcome, Failure> {
    let (base, _) = a.source.load(m)?;
    m.param("depth", a.depth);
    m.budget("max_horoball_vertices", a.max_horoball_vertices);
    let needed = base.len() * (a.depth + 1);
    if needed > a.max_horoball_vertices {
        return Err(Failure::Budget(anyhow::anyhow!(
            "horoball needs {needed} vertices, over the budget of {}",
            a.max_horoball_vertices
        )));
    }
    let h = build_horoball(&base, a.depth)?;
    let (gap_min, gap_max, pairs) = normal_form_gaps(&h)?;
    let query = match (&a.from, &a.to) {
        (Some(f), Some(t)) => {
            m.param("from", f);
            m.param("to", t);
            let (p, q) = (parse_point(&h, f)?, parse_point(&h, t)?);
            let exact = horoball_distance_exact(&h, p, q)?;
            Some(Query {
                from: f.clone(),
                to: t.clone(),
                fast: horoball_distance_fast(&h, p, q)?,
                exact: exact.distance,
                touches_top_level: exact.touches_top_level,
                warning: exact
                    .touches_top_level
                    .then(|| "a shortest path reaches the top level; truncation may inflate this distance".into()),
            })
        }
        _ => None,
    };
    let result = HoroballResult {
        base_vertices: base.len(),
        depth: a.depth,
        vertices: h.graph().len(),
        edges: h.graph().edge_count(),
        pairs,
        gap_min,
        gap_max,
        query,
    };
    let g = h.graph().clone();
    Ok(Outcome::new(result).with_graph(g))
}

#[derive(Args)]
pub struct PeripheralArgs {
    #[arg(long)]
    pub group: PathBuf,
    #[arg(long)]
    pub radius: usize,
    /// 1-based generators of the peripheral subgroup, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub peripheral: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
    pub max_vertices: usize,
}

struct Prepared {
    model: SharedModel,
    ball: CayleyBall,
    h: Subgroup,
}

impl PeripheralArgs {
    fn prepare(&self, m: &mut RunManifest) -> Result<Prepared, Failure> {
        let (file, model) = load_group(m, &self.group)?;
        let h = peripheral(m, &file, &self.peripheral, model.as_ref())?;
        let ball = ball_of(m, model.as_ref(), self.radius, self.max_vertices)?;
        Ok(Prepared { model, ball, h })
    }
}

#[derive(Serialize)]
struct CosetSummary {
    representative: String,
    members: usize,
}

#[derive(Args)]
pub struct AugmentArgs {
    #[command(flatten)]
    pub base: PeripheralArgs,
    #[arg(long)]
    pub depth: usize,
}

#[derive(Serialize)]
struct AugmentResult {
    radius: usize,
    depth: usize,
    ball_vertices: usize,
    vertices: usize,
    edges: usize,
    cosets: Vec<CosetSummary>,
}

pub fn augment(m: &mut RunManifest, a: &AugmentArgs) -> Result<Outcome, Failure> {
    let p = a.base.prepare(m)?;
    m.param("depth", a.depth);
    let cosets = enumerate_cosets(&p.ball, p.model.as_ref(), std::slice::from_ref(&p.h))?;
    let aug = build_augmented(&p.ball, &cosets, a.depth, a.base.max_vertices)?;
    let result = AugmentResult {
        radius: a.base.radius,
        depth: a.depth,
        ball_vertices: p.ball.graph.len(),
        vertices: aug.graph.len(),
        edges: aug.graph.edge_count(),
        cosets: cosets
            .iter()
            .map(|c| CosetSummary {
                representative: p.ball.graph.label(c.rep_vertex).to_string(),
                members: c.members.len(),
            })
            .collect(),
    };
    Ok(Outcome::new(result).with_graph(aug.graph))
}

#[derive(Args)]
pub struct ConeoffArgs {
    #[command(flatten)]
    pub base: PeripheralArgs,
}

#[derive(Serialize)]
struct ConeoffResult {
    radius: usize,
    ball_vertices: usize,
    cones: usize,
    vertices: usize,
    edges: usize,
    /// Largest distance between group vertices, before and after coning.
    ball_diameter: u32,
    group_diameter: u32,
}

fn diameter_on(dm: &DistanceMatrix, n: usize) -> u32 {
    (0..n)
        .into_par_iter()
        .map(|u| (0..n).map(|v| dm.get(u, v)).max().unwrap_or(0))
        .max()
        .unwrap_or(0)
}

pub fn coneoff(m: &mut RunManifest, a: &ConeoffArgs) -> Result<Outcome, Failure> {
    let p = a.base.prepare(m)?;
    let cosets = enumerate_cosets(&p.ball, p.model.as_ref(), std::slice::from_ref(&p.h))?;
    let coned = cone_off(&p.ball, &cosets)?;
    let n = p.ball.graph.len();
    let result = ConeoffResult {
        radius: a.base.radius,
        ball_vertices: n,
        cones: coned.cones.len(),
        vertices: coned.graph.len(),
        edges: coned.graph.edge_count(),
        ball_diameter: diameter_on(&DistanceMatrix::new(&p.ball.graph), n),
        group_diameter: diameter_on(&DistanceMatrix::new(&coned.graph), n),
    };
    Ok(Outcome::new(result).with_graph(coned.graph))
}

#[derive(Args)]
pub struct BcpArgs {
    #[command(flatten)]
    pub base: PeripheralArgs,
    /// Geodesics enumerated per endpoint pair.
    #[arg(long, default_value_t = 64)]
    pub max_geodesics: usize,
    /// Geodesic pairs compared before the sweep stops.
    #[arg(long, default_value_t = BcpBudget::default().max_pairs)]
    pub max_pairs: usize,
}

pub fn bcp(m: &mut RunManifest, a: &BcpArgs) -> Result<Outcome, Failure> {
    let (file, model) = load_group(m, &a.base.group)?;
    let h = peripheral(m, &file, &a.base.peripheral, model.as_ref())?;
    m.param("radius", a.base.radius);
    m.budget("max_vertices", a.base.max_vertices);
    m.budget("max_geodesics", a.max_geodesics);
    m.budget("max_pairs", a.max_pairs);
    let budget = BcpBudget {
        max_vertices: a.base.max_vertices,
        max_pairs: a.max_pairs,
        max_geodesics: a.max_geodesics,
    };
    let report = bcp_check(model.as_ref(), &[h], a.base.radius, &budget)?;
    let hit = report.truncated;
    Ok(Outcome::new(report).budget_hit(hit))
}

#[derive(Args)]
pub struct QcArgs {
    /// Graph file; the subset is given by --subset.
    #[arg(long, conflicts_with = "group", required_unless_present = "group", requires = "subset")]
    pub graph: Option<PathBuf>,
    /// Vertex ids of the subset, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub subset: Vec<usize>,
    /// Group spec file; the subset is the horoball over the peripheral
    /// coset through the identity, inside the augmented ball.
    #[arg(long)]
    pub group: Option<PathBuf>,
    #[arg(long, requires = "group")]
    pub radius: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    #[arg(long, value_delimiter = ',')]
    pub peripheral: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
    pub max_vertices: usize,
}

#[derive(Serialize)]
struct QcResult {
    subset_size: usize,
    #[serde(flatten)]
    report: relhyp_core::hyperbolicity::QcReport,
}

pub fn qc(m: &mut RunManifest, a: &QcArgs) -> Result<Outcome, Failure> {
    let (g, subset) = match (&a.graph, &a.group) {
        (Some(path), _) => {
            m.param("subset", &a.subset);
            (load_graph(m, path)?, a.subset.clone())
        }
        (None, Some(path)) => {
            let radius = a.radius.ok_or_else(|| Failure::input("--group needs --radius"))?;
            let (file, model) = load_group(m, path)?;
            let h = peripheral(m, &file, &a.peripheral, model.as_ref())?;
            let ball = ball_of(m, model.as_ref(), radius, a.max_vertices)?;
            m.param("depth", a.depth);
            let cosets = enumerate_cosets(&ball, model.as_ref(), &[h])?;
            let base = ball.graph.base();
            let c = cosets
                .iter()
                .position(|c| c.members.contains(&base))
                .expect("the identity lies in its own coset");
            let aug = build_augmented(&ball, &cosets, a.depth, a.max_vertices)?;
            let subset = aug.horoball_vertices(c);
            (aug.graph, subset)
        }
        (None, None) => return Err(Failure::input("pass --graph with --subset, or --group")),
    };
    let report = quasiconvexity_constant(&g, &subset)?;
    Ok(Outcome::new(QcResult {
        subset_size: subset.len(),
        report,
    }))
}

#[derive(Args)]
pub struct FatArgs {
    #[command(flatten)]
    pub base: PeripheralArgs,
    /// Length bound on elements counted in conjugate intersections.
    #[arg(long, default_value_t = 6)]
    pub word_length: usize,
    /// A family is fat when its intersection has more than this many elements.
    #[arg(long, default_value_t = 1)]
    pub threshold: usize,
}

pub fn fat(m: &mut RunManifest, a: &FatArgs) -> Result<Outcome, Failure> {
    let (file, model) = load_group(m, &a.base.group)?;
    let h = peripheral(m, &file, &a.base.peripheral, model.as_ref())?;
    m.param("radius", a.base.radius);
    m.param("threshold", a.threshold);
    m.budget("word_length", a.word_length);
    m.budget("max_vertices", a.base.max_vertices);
    let report = fat_coset_families(model.as_ref(), &h, a.base.radius, a.word_length, a.threshold, a.base.max_vertices)?;
    Ok(Outcome::new(report))
}

#[derive(Args)]
pub struct TcArgs {
    /// Presentation file: a `presentation` group spec or bare
    /// `{generators, relators}`.
    #[arg(long)]
    pub presentation: PathBuf,
    /// Subgroup generator in text form; repeatable.
    #[arg(long)]
    pub subgroup: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
    pub max_cosets: usize,
    /// Include the coset table rows.
    #[arg(long)]
    pub table: bool,
}

#[derive(Serialize)]
struct TcResult {
    status: relhyp_core::group::CosetStatus,
    cosets: usize,
    definitions: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rows: Option<Vec<Vec<Option<u32>>>>,
}

pub fn load_presentation(text: &str) -> Result<Presentation, Failure> {
    if let Ok(file) = GroupFile::from_json(text) {
        return match file.spec {
            GroupSpec::Presentation { presentation, .. } => Ok(presentation),
            _ => Err(Failure::input("group spec is not a presentation")),
        };
    }
    serde_json::from_str(text).map_err(|e| Failure::input(format!("invalid presentation JSON: {e}")))
}

pub fn tc(m: &mut RunManifest, a: &TcArgs) -> Result<Outcome, Failure> {
    let text = m.read("presentation", &a.presentation)?;
    let p = load_presentation(&text)?;
    let subgroup = a
        .subgroup
        .iter()
        .map(|s| Word::parse_text(s).map_err(|e| Failure::input(format!("subgroup word {s:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    m.param("subgroup", &a.subgroup);
    m.budget("max_cosets", a.max_cosets);
    let t = todd_coxeter(&p, &subgroup, a.max_cosets)?;
    let complete = t.is_complete();
    let result = TcResult {
        status: t.status(),
        cosets: t.len(),
        definitions: t.definitions(),
        index: complete.then(|| t.len()),
        rows: a.table.then(|| t.rows().to_vec()),
    };
    Ok(Outcome::new(result).budget_hit(!complete))
}
