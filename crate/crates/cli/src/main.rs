mod cog;
mod failure;
mod groups;
mod manifest;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use relhyp_core::graph::MetricGraph;

use failure::{Failure, EXIT_BUDGET};
use manifest::{Report, RunManifest};

#[derive(Parser)]
#[command(name = "relhyp", version, about = "Finite-scale experiments on relatively hyperbolic groups and complexes of groups")]
struct Cli {
    /// Worker threads (0 = one per core). Reports do not depend on it.
    #[arg(long, global = true, env = "RELHYP_THREADS")]
    threads: Option<usize>,
    /// Seed for every sampled computation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write the command's graph in DOT form.
    #[arg(long, global = true)]
    dot: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ball in a Cayley graph.
    Ball(groups::BallArgs),
    /// Slim-triangle or four-point hyperbolicity constant.
    Delta(groups::DeltaArgs),
    /// Truncated horoball over a graph, with normal-form distance checks.
    Horoball(groups::HoroballArgs),
    /// Cayley ball with a horoball glued to every peripheral coset.
    Augment(groups::AugmentArgs),
    /// Cayley ball coned off along peripheral cosets.
    Coneoff(groups::ConeoffArgs),
    /// Empirical bounded coset penetration sweep.
    Bcp(groups::BcpArgs),
    /// Quasiconvexity constant of a vertex set.
    Qc(groups::QcArgs),
    /// Families of peripheral cosets with large common intersection.
    Fat(groups::FatArgs),
    /// Todd-Coxeter coset enumeration.
    Tc(groups::TcArgs),
    /// Complexes of groups.
    #[command(subcommand)]
    Cog(cog::CogCommand),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Ball(_) => "ball",
            Command::Delta(_) => "delta",
            Command::Horoball(_) => "horoball",
            Command::Augment(_) => "augment",
            Command::Coneoff(_) => "coneoff",
            Command::Bcp(_) => "bcp",
            Command::Qc(_) => "qc",
            Command::Fat(_) => "fat",
            Command::Tc(_) => "tc",
            Command::Cog(c) => c.name(),
        }
    }
}

/// A command's result. `budget_hit` marks a partial result that is still
/// written out, with exit code 3.
pub struct Outcome {
    pub result: serde_json::Value,
    pub graph: Option<MetricGraph>,
    pub budget_hit: bool,
}

impl Outcome {
    pub fn new(result: impl serde::Serialize) -> Self {
        Outcome {
            result: serde_json::to_value(result).expect("report JSON"),
            graph: None,
            budget_hit: false,
        }
    }

    pub fn with_graph(mut self, g: MetricGraph) -> Self {
        self.graph = Some(g);
        self
    }

    pub fn budget_hit(mut self, hit: bool) -> Self {
        self.budget_hit = hit;
        self
    }
}

fn run(command: &Command, m: &mut RunManifest) -> Result<Outcome, Failure> {
    match command {
        Command::Ball(a) => groups::ball(m, a),
        Command::Delta(a) => groups::delta(m, a),
        Command::Horoball(a) => groups::horoball(m, a),
        Command::Augment(a) => groups::augment(m, a),
        Command::Coneoff(a) => groups::coneoff(m, a),
        Command::Bcp(a) => groups::bcp(m, a),
        Command::Qc(a) => groups::qc(m, a),
        Command::Fat(a) => groups::fat(m, a),
        Command::Tc(a) => groups::tc(m, a),
        Command::Cog(c) => cog::run(m, c),
    }
}

fn write_text(path: Option<&PathBuf>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot set up {n} threads: {e}");
            return ExitCode::from(failure::EXIT_INPUT);
        }
    }
    let mut manifest = RunManifest::new(cli.command.name(), cli.seed);
    let outcome = match run(&cli.command, &mut manifest) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {:#}", f.error());
            return ExitCode::from(f.code());
        }
    };
    let report = Report {
        manifest: &manifest,
        result: &outcome.result,
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report JSON");
    text.push('\n');
    if let Err(e) = write_text(cli.out.as_ref(), &text) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(failure::EXIT_INPUT);
    }
    if let Some(path) = &cli.dot {
        let Some(g) = &outcome.graph else {
            eprintln!("error: {} produces no graph for --dot", manifest.command);
            return ExitCode::from(failure::EXIT_INPUT);
        };
        if let Err(e) = std::fs::write(path, g.to_dot()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(failure::EXIT_INPUT);
        }
    }
    if outcome.budget_hit {
        eprintln!("warning: a budget was exhausted; the report is partial");
        return ExitCode::from(EXIT_BUDGET);
    }
    ExitCode::SUCCESS
}
