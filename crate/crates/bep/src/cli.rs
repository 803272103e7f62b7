//! Command-line front end.

use std::fs;
use std::hash::{BuildHasher, RandomState};
use std::path::{Path, PathBuf};

use bep_core::dynamics::{SearchOptions, DEFAULT_DT};
use bep_core::rational::parse_rational;
use bep_core::stability::VerdictOptions;
use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::commands::{self, EquilibriaConfig, McConfig, SimulateConfig, StabilityConfig};
use crate::config::{parse_candidate, parse_init, parse_ties, GameArgs};
use crate::error::{CliError, CliResult};
use crate::pd_scan;

#[derive(Debug, Parser)]
#[command(name = "bep", version, about = "Best experienced payoff dynamics: integration, rest points, stability, simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the mean dynamic; prints a summary, writes the trajectory CSV.
    Simulate {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Initial shares: `0.9`, `0.2,0.3,0.5`, or `;`-separated blocks.
        #[arg(long)]
        init: Option<String>,
        #[arg(long, default_value_t = 200.0)]
        horizon: f64,
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
        /// `uniform` or `priority:a,b,...` (`;` between players).
        #[arg(long, default_value = "uniform")]
        tie: String,
        /// Trajectory CSV path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate rest points of the mean dynamic.
    Equilibria {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Seed grid resolution per unit.
        #[arg(long, default_value_t = 10)]
        resolution: usize,
        #[arg(long, default_value_t = 2000.0)]
        horizon: f64,
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
        /// Residual accepted for a rest point.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value = "uniform")]
        tie: String,
        /// Report path; stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stability verdict for a strict equilibrium.
    Stability {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Action label, or comma-separated labels per player.
        #[arg(long)]
        candidate: Option<String>,
        /// Skip the perturbation probe.
        #[arg(long)]
        no_probe: bool,
        #[arg(long, default_value_t = 1e-3)]
        epsilon: f64,
        #[arg(long, default_value_t = 100.0)]
        probe_horizon: f64,
        /// Also scan k for the smallest stable value.
        #[arg(long)]
        threshold: bool,
        /// Longest payoff sequences compared in the genericity search.
        #[arg(long, default_value_t = 2)]
        l_max: usize,
        #[arg(long, default_value = "uniform")]
        tie: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify prisoner's dilemma (g, l) pairs into regions.
    PdScan {
        #[arg(long)]
        k: usize,
        /// CSV of pairs with header `g,l`.
        #[arg(long, conflicts_with_all = ["g_range", "l_range"])]
        pairs: Option<PathBuf>,
        /// `lo:hi:step`.
        #[arg(long, requires = "l_range")]
        g_range: Option<String>,
        #[arg(long, requires = "g_range")]
        l_range: Option<String>,
        /// Output CSV path; stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-population agent simulation.
    Mc {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Agents per population.
        #[arg(long, default_value_t = 10_000)]
        agents: usize,
        /// Revision events; 20 per agent by default.
        #[arg(long)]
        revisions: Option<u64>,
        /// Events between recorded states; one per agent count by default.
        #[arg(long)]
        record_every: Option<u64>,
        #[arg(long)]
        init: Option<String>,
        /// Generated and printed when absent.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "uniform")]
        tie: String,
        /// Skip the comparison with the mean dynamic.
        #[arg(long)]
        no_compare: bool,
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
        /// Trajectory CSV path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Manifest path; stdout otherwise.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Effective genericity report for a strict equilibrium.
    Genericity {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        candidate: Option<String>,
        #[arg(long, default_value_t = 2)]
        l_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn positive(name: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("--{name} must be positive, got {v}")))
    }
}

fn check_k(k: usize) -> CliResult<()> {
    if k == 0 {
        Err(CliError::Config("--k must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_range(name: &str, spec: &str) -> CliResult<Vec<bep_core::Rational>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return Err(CliError::Config(format!("--{name} must be lo:hi:step")));
    };
    let p = |s: &str| parse_rational(s.trim()).map_err(|e| CliError::Config(format!("--{name}: {e}")));
    pd_scan::grid(p(lo)?, p(hi)?, p(step)?)
}

/// Sizes the global worker pool from `BEP_THREADS` when set.
pub fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("BEP_THREADS") else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("BEP_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

pub fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Simulate { game, k, init, horizon, dt, tie, out } => {
            check_k(k)?;
            positive("dt", dt)?;
            if !(horizon >= 0.0 && horizon.is_finite()) {
                return Err(CliError::Config("--horizon must be nonnegative".into()));
            }
            let game = game.load()?;
            let cfg = SimulateConfig {
                ties: parse_ties(&tie, &game)?,
                init: parse_init(init.as_deref(), &game.blocks())?,
                game: &game,
                k,
                horizon,
                dt,
                out: out.as_deref(),
            };
            emit(&commands::simulate(&cfg)?, None)
        }
        Command::Equilibria { game, k, resolution, horizon, dt, tol, tie, out } => {
            check_k(k)?;
            positive("dt", dt)?;
            positive("horizon", horizon)?;
            positive("tol", tol)?;
            let game = game.load()?;
            let search = SearchOptions { horizon, dt, tol, ..SearchOptions::default() };
            let cfg = EquilibriaConfig { ties: parse_ties(&tie, &game)?, game: &game, k, resolution, search };
            let report = commands::equilibria(&cfg)?;
            if report.warning {
                eprintln!("warning: {} seeds did not settle at a rest point", report.unresolved.len());
            }
            emit(&report, out.as_deref())
        }
        Command::Stability { game, k, candidate, no_probe, epsilon, probe_horizon, threshold, l_max, tie, out } => {
            check_k(k)?;
            positive("epsilon", epsilon)?;
            positive("probe-horizon", probe_horizon)?;
            let game = game.load()?;
            let ties = parse_ties(&tie, &game)?;
            if ties.iter().any(|t| *t != ties[0]) {
                return Err(CliError::Config("the stability probe takes one tie rule for all players".into()));
            }
            let opts = VerdictOptions {
                probe: !no_probe,
                epsilon,
                probe_horizon,
                tie: ties[0].clone(),
                sequence_bound: l_max,
                ..VerdictOptions::default()
            };
            let cfg = StabilityConfig {
                candidate: parse_candidate(candidate.as_deref(), &game)?,
                game: &game,
                k,
                opts,
                threshold,
            };
            emit(&commands::stability(&cfg)?, out.as_deref())
        }
        Command::PdScan { k, pairs, g_range, l_range, out } => {
            let pairs = match (pairs, g_range, l_range) {
                (Some(path), _, _) => {
                    let file = fs::File::open(&path).map_err(|e| CliError::io(&path, e))?;
                    pd_scan::read_pairs(file)?
                }
                (None, Some(g), Some(l)) => {
                    let (gs, ls) = (parse_range("g-range", &g)?, parse_range("l-range", &l)?);
                    gs.iter().flat_map(|&g| ls.iter().map(move |&l| (g, l))).collect()
                }
                _ => return Err(CliError::Config("give --pairs or both --g-range and --l-range".into())),
            };
            let rows = pd_scan::scan(&pairs, k)?;
            match out {
                Some(path) => {
                    let file = fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
                    pd_scan::write_rows(file, &rows)
                }
                None => pd_scan::write_rows(std::io::stdout().lock(), &rows),
            }
        }
        Command::Mc {
            game,
            k,
            agents,
            revisions,
            record_every,
            init,
            seed,
            tie,
            no_compare,
            dt,
            out,
            manifest,
        } => {
            check_k(k)?;
            positive("dt", dt)?;
            let game = game.load()?;
            let seed = seed.unwrap_or_else(|| {
                let s = RandomState::new().hash_one(std::time::SystemTime::now());
                eprintln!("seed: {s}");
                s
            });
            let populations = game.blocks().len() as u64;
            let cfg = McConfig {
                ties: parse_ties(&tie, &game)?,
                tie_spec: tie,
                init: parse_init(init.as_deref(), &game.blocks())?,
                game: &game,
                k,
                n_agents: agents,
                revisions: revisions.unwrap_or(20 * agents as u64 * populations),
                record_every: record_every.unwrap_or(agents as u64 * populations).max(1),
                seed,
                compare: !no_compare,
                dt,
                out: out.as_deref(),
            };
            let (report, warnings) = commands::mc(&cfg)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            emit(&report, manifest.as_deref())
        }
        Command::Genericity { game, k, candidate, l_max, out } => {
            check_k(k)?;
            let game = game.load()?;
            let candidate = parse_candidate(candidate.as_deref(), &game)?;
            emit(&commands::genericity(&game, &candidate, k, l_max)?, out.as_deref())
        }
    }
}
