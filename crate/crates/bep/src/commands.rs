//! Command implementations. Each returns its JSON report; file outputs are
//! written to the paths given.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use bep_core::dynamics::{
    find_rest_points, integrate_dynamic, interior_grid, numeric_jacobian, AsymmetricDynamic, MeanDynamic,
    SearchOptions, SymmetricDynamic, TerminalReason, Trajectory, DEFAULT_JACOBIAN_STEP,
};
use bep_core::game::genericity::{check_effective_genericity_asymmetric_bounded, check_effective_genericity_bounded};
use bep_core::kernel::TieRule;
use bep_core::sim::{compare_to_mean_dynamic, simulate_agents, simulate_agents_asymmetric, AgentPopulation, SimulationOptions};
use bep_core::stability::{
    asymmetric_k_threshold, asymmetric_stability_verdict_with, k_threshold, stability_verdict_with, VerdictOptions,
};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::game_file::Game;
use crate::manifest::RunManifest;
use crate::trajectory::write_trajectory;
use crate::verdict::{GenericityRecord, VerdictRecord};

pub fn dynamic<'a>(game: &'a Game, k: usize, ties: &[TieRule]) -> CliResult<Box<dyn MeanDynamic + 'a>> {
    Ok(match game {
        Game::Symmetric(g) => Box::new(SymmetricDynamic::new(g, k, ties[0].clone())?),
        Game::Asymmetric(g) => Box::new(AsymmetricDynamic::new(g, k, ties.to_vec())?),
    })
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn write_csv_file(path: &Path, columns: &[String], traj: &Trajectory) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    write_trajectory(BufWriter::new(file), columns, traj)
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SimulateSummary {
    pub columns: Vec<String>,
    pub terminal_time: f64,
    pub terminal_state: Vec<f64>,
    /// Max-norm of the field at the terminal state.
    pub residual: f64,
    pub converged: bool,
    pub steps: usize,
}

pub struct SimulateConfig<'a> {
    pub game: &'a Game,
    pub k: usize,
    pub ties: Vec<TieRule>,
    pub init: Vec<Vec<f64>>,
    pub horizon: f64,
    pub dt: f64,
    pub out: Option<&'a Path>,
}

pub fn simulate(cfg: &SimulateConfig<'_>) -> CliResult<SimulateSummary> {
    let dynamic = dynamic(cfg.game, cfg.k, &cfg.ties)?;
    let x0: Vec<f64> = cfg.init.concat();
    let traj = integrate_dynamic(dynamic.as_ref(), &x0, cfg.horizon, cfg.dt)?;
    let columns = cfg.game.column_labels();
    if let Some(path) = cfg.out {
        write_csv_file(path, &columns, &traj)?;
    }
    let residual = max_norm(&dynamic.field(traj.terminal_state())?);
    Ok(SimulateSummary {
        columns,
        terminal_time: traj.terminal_time(),
        terminal_state: traj.terminal_state().to_vec(),
        residual,
        converged: traj.terminal_reason == TerminalReason::Converged,
        steps: traj.len() - 1,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RestPointRecord {
    pub state: Vec<f64>,
    pub residual: f64,
    pub basin_seeds: usize,
    /// Largest real eigenvalue part of the linearization; absent if it could
    /// not be computed.
    pub jacobian_max_real_eig: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EquilibriaReport {
    pub k: usize,
    pub columns: Vec<String>,
    pub rest_points: Vec<RestPointRecord>,
    pub unresolved: Vec<Vec<f64>>,
    /// Some seeds ended neither at nor near a rest point.
    pub warning: bool,
}

pub struct EquilibriaConfig<'a> {
    pub game: &'a Game,
    pub k: usize,
    pub ties: Vec<TieRule>,
    pub resolution: usize,
    pub search: SearchOptions,
}

pub fn equilibria(cfg: &EquilibriaConfig<'_>) -> CliResult<EquilibriaReport> {
    if cfg.resolution < 2 {
        return Err(CliError::Config("--resolution must be at least 2".into()));
    }
    let dynamic = dynamic(cfg.game, cfg.k, &cfg.ties)?;
    let seeds = interior_grid(&cfg.game.blocks(), cfg.resolution);
    let found = find_rest_points(dynamic.as_ref(), &seeds, &cfg.search)?;
    let rest_points = found
        .rest_points
        .into_iter()
        .map(|p| RestPointRecord {
            jacobian_max_real_eig: numeric_jacobian(dynamic.as_ref(), &p.state, DEFAULT_JACOBIAN_STEP)
                .ok()
                .map(|j| j.max_real_eigenvalue()),
            state: p.state,
            residual: p.residual,
            basin_seeds: p.basin_seeds,
        })
        .collect();
    Ok(EquilibriaReport {
        k: cfg.k,
        columns: cfg.game.column_labels(),
        rest_points,
        warning: !found.unresolved.is_empty(),
        unresolved: found.unresolved,
    })
}

pub struct StabilityConfig<'a> {
    pub game: &'a Game,
    pub candidate: Vec<usize>,
    pub k: usize,
    pub opts: VerdictOptions,
    pub threshold: bool,
}

pub fn stability(cfg: &StabilityConfig<'_>) -> CliResult<VerdictRecord> {
    let (verdict, threshold) = match cfg.game {
        Game::Symmetric(g) => {
            let a = cfg.candidate[0];
            let v = stability_verdict_with(g, a, cfg.k, &cfg.opts)?;
            (v, if cfg.threshold { Some(k_threshold(g, a)?) } else { None })
        }
        Game::Asymmetric(g) => {
            let v = asymmetric_stability_verdict_with(g, &cfg.candidate, cfg.k, &cfg.opts)?;
            (v, if cfg.threshold { Some(asymmetric_k_threshold(g, &cfg.candidate)?) } else { None })
        }
    };
    let mut record = VerdictRecord::from(&verdict);
    record.k_threshold = threshold.as_ref().map(Into::into);
    Ok(record)
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GenericityOutput {
    pub candidate: String,
    pub k: usize,
    #[serde(flatten)]
    pub report: GenericityRecord,
}

pub fn genericity(game: &Game, candidate: &[usize], k: usize, l_max: usize) -> CliResult<GenericityOutput> {
    let (label, report) = match game {
        Game::Symmetric(g) => {
            (g.label(candidate[0]).to_string(), check_effective_genericity_bounded(g, candidate[0], k, l_max))
        }
        Game::Asymmetric(g) => {
            (g.profile_label(candidate), check_effective_genericity_asymmetric_bounded(g, candidate, k, l_max))
        }
    };
    Ok(GenericityOutput { candidate: label, k, report: (&report).into() })
}

pub struct McConfig<'a> {
    pub game: &'a Game,
    pub k: usize,
    pub ties: Vec<TieRule>,
    pub tie_spec: String,
    pub init: Vec<Vec<f64>>,
    pub n_agents: usize,
    pub revisions: u64,
    pub record_every: u64,
    pub seed: u64,
    pub compare: bool,
    pub dt: f64,
    pub out: Option<&'a Path>,
}

/// Runs the agent simulation; the manifest's `deviation` is the gap to the
/// mean dynamic started from the same rounded shares.
pub fn mc(cfg: &McConfig<'_>) -> CliResult<(RunManifest, Vec<String>)> {
    let init = AgentPopulation::from_shares(&cfg.init, cfg.n_agents, cfg.seed)?;
    let opts = SimulationOptions {
        k: cfg.k,
        revisions: cfg.revisions,
        record_every: cfg.record_every,
        tie: cfg.ties[0].clone(),
    };
    let traj = match cfg.game {
        Game::Symmetric(g) => simulate_agents(g, &init, &opts)?,
        Game::Asymmetric(g) => simulate_agents_asymmetric(g, &init, &opts, &cfg.ties)?,
    };
    let columns = cfg.game.column_labels();
    if let Some(path) = cfg.out {
        write_csv_file(path, &columns, &traj)?;
    }
    let mut warnings = Vec::new();
    let deviation = if cfg.compare {
        let ode = dynamic(cfg.game, cfg.k, &cfg.ties)
            .and_then(|d| Ok(integrate_dynamic(d.as_ref(), &init.shares(), traj.terminal_time(), cfg.dt)?));
        match ode {
            Ok(mut ode) => {
                // Integration stops early on convergence; hold the last state.
                if ode.terminal_time() < traj.terminal_time() {
                    let last = ode.terminal_state().to_vec();
                    ode.times.push(traj.terminal_time());
                    ode.states.push(last);
                }
                Some(compare_to_mean_dynamic(&traj, &ode)?)
            }
            Err(CliError::Resource(msg)) => {
                warnings.push(format!("mean dynamic not compared: {msg}"));
                None
            }
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let manifest = RunManifest {
        seed: cfg.seed,
        n_agents: cfg.n_agents,
        revisions: cfg.revisions,
        k: cfg.k,
        tie: cfg.tie_spec.clone(),
        game_hash: cfg.game.hash(),
        record_every: cfg.record_every,
        init: init.shares(),
        terminal_state: traj.terminal_state().to_vec(),
        deviation,
    };
    Ok((manifest, warnings))
}

