//! Command-line interface.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::game::{parse_game, serialize_game, GameDocument, Objective, StochasticGame};
use crate::geometry::DwcSet;
use crate::graph::mec_decomposition;
use crate::oracle::{fixtures, random_game, solve_single_dim_exact, GameParams};
use crate::rational::{format_rational, parse_rational, Q};
use crate::regions::get_regions;
use crate::report::{regions_report, FrontierReport, RegionReport};
use crate::solver::{
    deflatable_mecs, minimizer_scope, mo_bvi, single_dim_solve, Solver, SolverConfig, SolverError, Status,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_ITERATION_CAP: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sgpareto", version, about = "Pareto frontiers of stochastic games with several reachability targets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Approximate the achievable sets and write a frontier report.
    Solve(SolveArgs),
    /// List the maximal end components.
    Mecs(GameArg),
    /// Region partitions of every MEC under the lower bounds of a report.
    Regions(RegionsArgs),
    /// Cross-check the solver against the oracles on random games.
    OracleCheck(OracleCheckArgs),
    /// Write a random game or a built-in fixture.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct GameArg {
    #[arg(long)]
    pub game: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub game: PathBuf,
    /// Exact rational such as `1/1000` or `0.001`.
    #[arg(long)]
    pub epsilon: String,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub no_deflate: bool,
    /// Report path; `-` writes to standard output.
    #[arg(long, default_value = "-")]
    pub out: String,
    /// One tab-separated line per iteration on standard error.
    #[arg(long)]
    pub progress: bool,
}

#[derive(Debug, Args)]
pub struct RegionsArgs {
    #[arg(long)]
    pub game: PathBuf,
    /// A frontier report whose lower bounds are used.
    #[arg(long)]
    pub bounds: PathBuf,
}

#[derive(Debug, Args)]
pub struct OracleCheckArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub count: u64,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub states: usize,
    #[arg(long, default_value_t = 2)]
    pub actions: usize,
    #[arg(long, default_value_t = 2)]
    pub targets: usize,
    #[arg(long, default_value_t = 2)]
    pub branching: usize,
    #[arg(long)]
    pub stopping: bool,
    /// Emit a built-in fixture instead of a random game.
    #[arg(long)]
    pub fixture: Option<String>,
    #[arg(long, default_value = "-")]
    pub out: String,
}

fn read_game(path: &Path) -> anyhow::Result<(StochasticGame, Objective)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_game(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_output(out: &str, text: &str) -> anyhow::Result<()> {
    if out == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(text.as_bytes())?;
        stdout.write_all(b"\n")?;
        Ok(())
    } else {
        fs::write(out, format!("{text}\n")).with_context(|| format!("writing {out}"))
    }
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    write_output("-", &serde_json::to_string_pretty(value)?)
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Mecs(args) => cmd_mecs(&args).map(|_| EXIT_OK),
        Command::Regions(args) => cmd_regions(&args).map(|_| EXIT_OK),
        Command::OracleCheck(args) => cmd_oracle_check(&args),
        Command::Gen(args) => cmd_gen(&args).map(|_| EXIT_OK),
    };
    result.unwrap_or_else(|err| {
        eprintln!("error: {err:#}");
        EXIT_ERROR
    })
}

pub fn cmd_solve(args: &SolveArgs) -> anyhow::Result<i32> {
    let (game, objective) = read_game(&args.game)?;
    let epsilon = parse_rational(&args.epsilon).context("parsing --epsilon")?;
    let config = SolverConfig {
        epsilon,
        max_iterations: args.max_iters,
        deflate: !args.no_deflate,
    };
    let show = args.progress;
    let mut progress = |s: &crate::solver::IterationStats| {
        if show {
            eprintln!("{}\t{}\t{}\t{}", s.iteration, format_rational(&s.gap), s.total_pieces(), s.elapsed_ms);
        }
    };
    let outcome = match mo_bvi(&game, &objective, config, &mut progress) {
        Ok(outcome) => outcome,
        Err(SolverError::Stalled { iteration, gap, bounds }) => {
            eprintln!("solver stalled at iteration {iteration} with gap {gap}");
            if let Some(bounds) = bounds {
                for s in game.state_ids() {
                    eprintln!(
                        "{}\tlower {}\tupper {}",
                        game.name(s),
                        serde_json::to_string(&bounds.lower[s.0].to_repr())?,
                        serde_json::to_string(&bounds.upper[s.0].to_repr())?
                    );
                }
            }
            return Ok(EXIT_ERROR);
        }
        Err(err) => return Err(err.into()),
    };
    let report = FrontierReport::new(&game, &objective, &outcome);
    write_output(&args.out, &serde_json::to_string_pretty(&report)?)?;
    Ok(match outcome.status {
        Status::Converged => EXIT_OK,
        Status::IterationCap => EXIT_ITERATION_CAP,
    })
}

#[derive(Serialize)]
struct MecEntry {
    states: Vec<String>,
    actions: Vec<[String; 2]>,
    absorbing: bool,
}

pub fn cmd_mecs(args: &GameArg) -> anyhow::Result<()> {
    let (game, _) = read_game(&args.game)?;
    let decomposition = mec_decomposition(&game, &game.full_structure());
    let entries: Vec<MecEntry> = decomposition
        .mecs
        .iter()
        .map(|m| MecEntry {
            states: m.states.iter().map(|&s| game.name(s).to_string()).collect(),
            actions: m
                .actions
                .iter()
                .map(|&pair| [game.name(pair.state).to_string(), game.action_name(pair).to_string()])
                .collect(),
            absorbing: m.is_trivial(&game),
        })
        .collect();
    print_json(&entries)
}

#[derive(Serialize)]
struct RegionsEntry {
    states: Vec<String>,
    regions: Vec<RegionReport>,
    classes: usize,
}

pub fn cmd_regions(args: &RegionsArgs) -> anyhow::Result<()> {
    let (game, objective) = read_game(&args.game)?;
    let text = fs::read_to_string(&args.bounds).with_context(|| format!("reading {}", args.bounds.display()))?;
    let report: FrontierReport = serde_json::from_str(&text).context("parsing the bounds report")?;
    let bounds = report.bounds(&game)?;
    let mut entries = Vec::new();
    for mec in deflatable_mecs(&game) {
        let scope = minimizer_scope(&game, &objective, &bounds.lower, &mec);
        let partition = get_regions(objective.dim(), &scope)?;
        let regions = regions_report(&game, &partition);
        let classes = partition.classes().into_iter().max().map_or(0, |c| c + 1);
        entries.push(RegionsEntry {
            states: mec.iter().map(|&s| game.name(s).to_string()).collect(),
            regions,
            classes,
        });
    }
    print_json(&entries)
}

#[derive(Serialize)]
struct Failure {
    seed: u64,
    check: &'static str,
    detail: String,
    game: GameDocument,
}

#[derive(Serialize)]
struct CheckSummary {
    checked: u64,
    passed: u64,
    failures: Vec<Failure>,
}

/// Interval check for one objective against strategy enumeration.
fn check_single_dim(seed: u64) -> anyhow::Result<Option<(StochasticGame, Objective, String)>> {
    let params = GameParams {
        n_states: 2 + (seed % 5) as usize,
        n_actions: 2,
        n_targets: 1,
        stopping: false,
        branching: 2,
        seed,
    };
    let (game, objective) = random_game(&params);
    let exact = solve_single_dim_exact(&game, &objective.targets()[0])?;
    let epsilon = Q::new(1.into(), 1_000_000.into());
    let outcome = single_dim_solve(&game, &objective.targets()[0], &epsilon, 100_000)?;
    for (s, ((lower, upper), value)) in outcome.intervals.iter().zip(&exact).enumerate() {
        if lower > value || value > upper {
            let detail = format!(
                "state {}: exact {} outside [{}, {}]",
                game.name(crate::game::StateId(s)),
                format_rational(value),
                format_rational(lower),
                format_rational(upper)
            );
            return Ok(Some((game, objective, detail)));
        }
    }
    let solved = mo_bvi(&game, &objective, SolverConfig::new(epsilon), &mut |_| {})?;
    let s0 = game.initial().0;
    let point = DwcSet::point(&[exact[s0].clone()]);
    let contained = crate::geometry::is_subset(&solved.bounds.lower[s0], &point)?
        && crate::geometry::is_subset(&point, &solved.bounds.upper[s0])?;
    if !contained {
        return Ok(Some((game, objective, "multi-dimensional solver misses the exact value".into())));
    }
    Ok(None)
}

/// On stopping games deflation must not change a single iterate.
fn check_stopping(seed: u64) -> anyhow::Result<Option<(StochasticGame, Objective, String)>> {
    let params = GameParams {
        n_states: 3 + (seed % 3) as usize,
        n_actions: 2,
        n_targets: 2 + (seed % 2) as usize,
        stopping: true,
        branching: 2,
        seed,
    };
    let (game, objective) = random_game(&params);
    let epsilon = Q::new(1.into(), 1000.into());
    let mut with = Solver::new(&game, &objective, SolverConfig::new(epsilon.clone()))?;
    let mut without = Solver::new(
        &game,
        &objective,
        SolverConfig {
            deflate: false,
            ..SolverConfig::new(epsilon.clone())
        },
    )?;
    for iteration in 1..=40 {
        let a = with.step()?;
        without.step()?;
        if with.bounds() != without.bounds() {
            return Ok(Some((game, objective, format!("bounds differ at iteration {iteration}"))));
        }
        if a.gap < epsilon {
            break;
        }
    }
    Ok(None)
}

pub fn cmd_oracle_check(args: &OracleCheckArgs) -> anyhow::Result<i32> {
    let mut summary = CheckSummary {
        checked: 0,
        passed: 0,
        failures: Vec::new(),
    };
    for seed in args.seed..args.seed + args.count {
        let checks: [(&'static str, fn(u64) -> anyhow::Result<Option<(StochasticGame, Objective, String)>>); 2] =
            [("single-dim", check_single_dim), ("stopping", check_stopping)];
        for (name, check) in checks {
            summary.checked += 1;
            match check(seed)? {
                None => summary.passed += 1,
                Some((game, objective, detail)) => summary.failures.push(Failure {
                    seed,
                    check: name,
                    detail,
                    game: GameDocument::from_game(&game, &objective),
                }),
            }
        }
    }
    eprintln!("{} of {} checks passed", summary.passed, summary.checked);
    print_json(&summary)?;
    Ok(if summary.failures.is_empty() { EXIT_OK } else { EXIT_ERROR })
}

pub fn cmd_gen(args: &GenArgs) -> anyhow::Result<()> {
    let (game, objective) = match &args.fixture {
        Some(name) => {
            let Some(fixture) = fixtures::all().into_iter().find(|f| f.name == name) else {
                let names: Vec<&str> = fixtures::all().iter().map(|f| f.name).collect();
                bail!("unknown fixture `{name}`; available: {}", names.join(", "));
            };
            (fixture.game, fixture.objective)
        }
        None => random_game(&GameParams {
            n_states: args.states,
            n_actions: args.actions,
            n_targets: args.targets,
            stopping: args.stopping,
            branching: args.branching,
            seed: args.seed,
        }),
    };
    write_output(&args.out, &serialize_game(&game, &objective))
}
