//! Command-line front end. Every solver subcommand writes a CSV (stdout or
//! `--out`) and, when a path is available, the assignment as a sidecar of
//! `expert_id<TAB>task_id` lines.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::baselines::{
    best_over_betas, greedy_individual, greedy_individual_search, no_update_greedy, task_greedy, BaselineConfig,
    BETA_GRID,
};
use crate::error::{Error, Result};
use crate::generate::{build_cooccurrence_graph, build_jaccard_graph, generate_instance, GeneratorParams};
use crate::graph::CoordinationGraph;
use crate::io;
use crate::metrics::team_characteristics;
use crate::model::{Assignment, Instance};
use crate::nthreshold::{nthreshold, CandidateMode, Matcher, NThresholdConfig};
use crate::oracle::{brute_force_opt, OracleLimits};
use crate::search::{SearchMode, Solution};
use crate::threshold::{lambda_sweep, threshold_greedy_with, ChainMode, ThresholdOptions};

#[derive(Parser, Debug)]
#[command(name = "teamcover", version, about = "Balanced task coverage and team formation solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// ThresholdGreedy on an expert/task instance.
    SolveBalanced(SolveBalanced),
    /// NThreshold with a radius bound on a coordination graph.
    SolveNetwork(SolveNetwork),
    /// Best τ for each λ of a non-increasing list.
    LambdaSweep(LambdaSweep),
    /// TaskGreedy, NoUpdateGreedy or GreedyIndividual.
    Baseline(Baseline),
    /// Exhaustive optimum of a tiny instance.
    Oracle(OracleCmd),
    /// Team size, radius, density and pairwise distance of an assignment.
    Metrics(MetricsCmd),
    /// Random instance files.
    Generate(Generate),
    /// Coordination-graph edge list from an instance or co-occurrence counts.
    BuildGraph(BuildGraph),
}

#[derive(Args, Debug)]
struct InstanceArgs {
    #[arg(long)]
    experts: PathBuf,
    #[arg(long)]
    tasks: PathBuf,
}

impl InstanceArgs {
    fn load(&self) -> Result<Instance> {
        io::parse_instance(&self.experts, &self.tasks)
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Assignment sidecar; defaults to `<out>.assignment.tsv`.
    #[arg(long)]
    assignment: Option<PathBuf>,
    /// Fill the wall_time_ms column. Off by default so repeated runs are
    /// byte-identical.
    #[arg(long)]
    timing: bool,
}

impl OutputArgs {
    fn sidecar(&self) -> Option<PathBuf> {
        self.assignment.clone().or_else(|| {
            self.out.as_ref().map(|p| {
                let mut s = p.clone().into_os_string();
                s.push(".assignment.tsv");
                PathBuf::from(s)
            })
        })
    }

    fn elapsed(&self, start: Instant) -> Option<f64> {
        self.timing.then(|| start.elapsed().as_secs_f64() * 1e3)
    }

    fn emit(&self, csv: &str, instance: &Instance, assignment: &Assignment) -> Result<()> {
        write_text(self.out.as_deref(), csv)?;
        if let Some(path) = self.sidecar() {
            io::write_assignment(&path, instance, assignment)?;
        }
        Ok(())
    }
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn parse_search(s: &str) -> std::result::Result<SearchMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_chain(s: &str) -> std::result::Result<ChainMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_matcher(s: &str) -> std::result::Result<Matcher, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args, Debug)]
struct SolveBalanced {
    #[command(flatten)]
    input: InstanceArgs,
    #[arg(long)]
    lambda: f64,
    /// linear, exp-linear or full.
    #[arg(long, default_value = "exp-linear", value_parser = parse_search)]
    search: SearchMode,
    /// warm or fresh.
    #[arg(long, default_value = "warm", value_parser = parse_chain)]
    chain: ChainMode,
    /// Accepted for a uniform interface; ThresholdGreedy draws no randomness.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Candidates {
    #[value(name = "r", alias = "R")]
    Radius,
    #[value(name = "allr", alias = "all")]
    AllRadii,
}

#[derive(Args, Debug)]
struct SolveNetwork {
    #[command(flatten)]
    input: InstanceArgs,
    /// Edge list `id<TAB>id<TAB>weight`.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    radius: f64,
    #[arg(long, value_enum, default_value = "r")]
    candidates: Candidates,
    /// Number of radius splits for `--candidates allr`.
    #[arg(long, default_value_t = 5)]
    k: u32,
    /// exact or greedy.
    #[arg(long, default_value = "exact", value_parser = parse_matcher)]
    matcher: Matcher,
    #[arg(long, default_value = "exp-linear", value_parser = parse_search)]
    search: SearchMode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct LambdaSweep {
    #[command(flatten)]
    input: InstanceArgs,
    /// Comma-separated, non-increasing.
    #[arg(long, value_delimiter = ',', required = true)]
    lambdas: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    TaskGreedy,
    #[value(alias = "no-update-greedy")]
    NoUpdate,
    GreedyIndividual,
}

#[derive(Args, Debug)]
struct Baseline {
    #[command(flatten)]
    input: InstanceArgs,
    #[arg(long, value_enum)]
    algo: Algo,
    /// Fixed gain floor; when omitted the best β of `--beta-grid` by
    /// objective is used.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = BETA_GRID.to_vec())]
    beta_grid: Vec<f64>,
    /// Used to score β choices and by the GreedyIndividual τ search.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// GreedyIndividual load cap; searched over when omitted.
    #[arg(long)]
    tau: Option<u32>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct OracleCmd {
    #[command(flatten)]
    input: InstanceArgs,
    #[arg(long)]
    lambda: f64,
    /// Largest n·m to enumerate.
    #[arg(long, default_value_t = OracleLimits::default().max_pairs)]
    max_pairs: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct MetricsCmd {
    #[command(flatten)]
    input: InstanceArgs,
    #[arg(long)]
    graph: PathBuf,
    /// Assignment file `expert_id<TAB>task_id`.
    #[arg(long)]
    assignment: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Generate {
    /// Output path for the experts file.
    #[arg(long)]
    experts: PathBuf,
    /// Output path for the tasks file.
    #[arg(long)]
    tasks: PathBuf,
    #[arg(long)]
    num_experts: usize,
    #[arg(long)]
    num_tasks: usize,
    #[arg(long)]
    num_skills: usize,
    #[arg(long)]
    skills_per_expert: f64,
    #[arg(long)]
    skills_per_task: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GraphKind {
    Jaccard,
    Cooccurrence,
}

#[derive(Args, Debug)]
struct BuildGraph {
    #[command(flatten)]
    input: InstanceArgs,
    #[arg(long, value_enum)]
    kind: GraphKind,
    /// Co-occurrence counts `id<TAB>id<TAB>count`.
    #[arg(long)]
    pairs: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    f: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Runs the CLI on `args` (program name first) and returns the exit code:
/// 0 on success, 1 when a solver fails, 2 for usage, input or parse errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Io { .. } | Error::InvalidInput(_) => 2,
        Error::TooLarge(_) | Error::ScaleOverflow(_) => 1,
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::SolveBalanced(c) => solve_balanced(c),
        Command::SolveNetwork(c) => solve_network(c),
        Command::LambdaSweep(c) => {
            let inst = c.input.load()?;
            let report = lambda_sweep(&inst, &c.lambdas)?;
            write_text(c.out.as_deref(), &io::format_sweep_csv(&report))
        }
        Command::Baseline(c) => baseline(c),
        Command::Oracle(c) => {
            let inst = c.input.load()?;
            let start = Instant::now();
            let limits = OracleLimits {
                max_pairs: c.max_pairs,
                ..OracleLimits::default()
            };
            let (a, _) = brute_force_opt(&inst, c.lambda, &limits)?;
            let csv = io::format_assignment_csv(&inst, &a, c.lambda, None, c.output.elapsed(start));
            c.output.emit(&csv, &inst, &a)
        }
        Command::Metrics(c) => {
            let inst = c.input.load()?;
            let graph = io::parse_graph(&c.graph, &inst)?;
            let a = io::parse_assignment(&c.assignment, &inst)?;
            let report = team_characteristics(&a, &inst, &graph)?;
            write_text(c.out.as_deref(), &io::format_metrics_csv(&inst, &report))
        }
        Command::Generate(c) => {
            let inst = generate_instance(&GeneratorParams {
                experts: c.num_experts,
                tasks: c.num_tasks,
                skills: c.num_skills,
                skills_per_expert: c.skills_per_expert,
                skills_per_task: c.skills_per_task,
                seed: c.seed,
            })?;
            io::write_instance(&inst, &c.experts, &c.tasks)
        }
        Command::BuildGraph(c) => {
            let inst = c.input.load()?;
            let edges = match c.kind {
                GraphKind::Jaccard => build_jaccard_graph(&inst),
                GraphKind::Cooccurrence => {
                    let pairs = c
                        .pairs
                        .as_ref()
                        .ok_or_else(|| Error::invalid("--kind cooccurrence requires --pairs"))?;
                    build_cooccurrence_graph(&io::parse_pair_counts(pairs, &inst)?, c.f)?
                }
            };
            write_text(c.out.as_deref(), &io::format_edges(&inst, &edges))
        }
    }
}

fn emit_solution(output: &OutputArgs, inst: &Instance, solution: &Solution, start: Instant) -> Result<()> {
    let csv = io::format_run_csv(inst, solution, output.elapsed(start));
    output.emit(&csv, inst, &solution.assignment)
}

fn solve_balanced(c: SolveBalanced) -> Result<()> {
    let inst = c.input.load()?;
    let start = Instant::now();
    let options = ThresholdOptions {
        search: c.search,
        chain: c.chain,
    };
    let solution = threshold_greedy_with(&inst, c.lambda, options)?;
    emit_solution(&c.output, &inst, &solution, start)
}

fn load_graph(path: &Path, inst: &Instance) -> Result<CoordinationGraph> {
    io::parse_graph(path, inst)
}

fn solve_network(c: SolveNetwork) -> Result<()> {
    let inst = c.input.load()?;
    let graph = load_graph(&c.graph, &inst)?;
    let start = Instant::now();
    let config = NThresholdConfig {
        radius: c.radius,
        lambda: c.lambda,
        candidates: match c.candidates {
            Candidates::Radius => CandidateMode::Radius,
            Candidates::AllRadii => CandidateMode::AllRadii { splits: c.k },
        },
        matcher: c.matcher,
        search: c.search,
    };
    let out = nthreshold(&inst, &graph, &config)?;
    emit_solution(&c.output, &inst, &out.solution, start)
}

fn baseline(c: Baseline) -> Result<()> {
    let inst = c.input.load()?;
    let betas = match c.beta {
        Some(b) => vec![b],
        None => c.beta_grid.clone(),
    };
    let start = Instant::now();
    match c.algo {
        Algo::TaskGreedy | Algo::NoUpdate => {
            let (_, a) = best_over_betas(&inst, c.lambda, &betas, |beta| {
                let cfg = BaselineConfig {
                    beta,
                    seed: c.seed,
                    ..Default::default()
                };
                match c.algo {
                    Algo::TaskGreedy => task_greedy(&inst, &cfg),
                    _ => no_update_greedy(&inst, &cfg),
                }
            })?;
            let csv = io::format_assignment_csv(&inst, &a, c.lambda, None, c.output.elapsed(start));
            c.output.emit(&csv, &inst, &a)
        }
        Algo::GreedyIndividual => {
            let path = c
                .graph
                .as_ref()
                .ok_or_else(|| Error::invalid("greedy-individual requires --graph"))?;
            let radius = c
                .radius
                .ok_or_else(|| Error::invalid("greedy-individual requires --radius"))?;
            let graph = load_graph(path, &inst)?;
            if let Some(tau) = c.tau {
                let (_, a) = best_over_betas(&inst, c.lambda, &betas, |beta| {
                    let cfg = BaselineConfig {
                        beta,
                        seed: c.seed,
                        tau: Some(tau),
                        radius: Some(radius),
                    };
                    greedy_individual(&inst, &graph, &cfg)
                })?;
                let csv = io::format_assignment_csv(&inst, &a, c.lambda, Some(tau), c.output.elapsed(start));
                return c.output.emit(&csv, &inst, &a);
            }
            let mut best: Option<Solution> = None;
            for &beta in &betas {
                let s = greedy_individual_search(&inst, &graph, c.lambda, radius, beta, SearchMode::ExpLinear)?;
                if best
                    .as_ref()
                    .is_none_or(|b| s.realized_objective(&inst) > b.realized_objective(&inst))
                {
                    best = Some(s);
                }
            }
            let solution = best.ok_or_else(|| Error::invalid("beta grid is empty"))?;
            emit_solution(&c.output, &inst, &solution, start)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["teamcover", "solve-balanced", "--bogus"]), 2);
        assert_eq!(run(["teamcover"]), 2);
    }
}
