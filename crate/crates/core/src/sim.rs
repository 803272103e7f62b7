//! Finite-population agent simulation of the sampling procedure.
//!
//! Every revision event picks one agent uniformly, lets it test each of its
//! actions `k` times against freshly drawn opponents, and switches it to the
//! action with the highest total. Opponents are drawn with replacement from
//! the whole population, the reviser included. Totals are compared exactly on
//! an integer rescaling of the payoffs so borderline ties are real ties.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{TerminalReason, Trajectory};
use crate::error::{BepError, Result};
use crate::game::multiset::multiset_rank;
use crate::game::{AsymmetricGame, SymmetricGame};
use crate::kernel::TieRule;

/// Action counts of `n_agents` agents per population.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentPopulation {
    counts: Vec<Vec<usize>>,
    n_agents: usize,
    rng_seed: u64,
}

impl AgentPopulation {
    /// One population.
    pub fn new(counts: Vec<usize>, rng_seed: u64) -> Result<Self> {
        Self::multi(vec![counts], rng_seed)
    }

    /// One population per player; every population must have the same size.
    pub fn multi(counts: Vec<Vec<usize>>, rng_seed: u64) -> Result<Self> {
        let n_agents = counts.first().map(|c| c.iter().sum()).unwrap_or(0);
        if n_agents == 0 {
            return Err(BepError::InvalidState("population is empty".into()));
        }
        if let Some(c) = counts.iter().find(|c| c.iter().sum::<usize>() != n_agents) {
            return Err(BepError::InvalidState(format!(
                "population sizes differ: {} vs {n_agents}",
                c.iter().sum::<usize>()
            )));
        }
        Ok(AgentPopulation { counts, n_agents, rng_seed })
    }

    /// Rounds shares to counts summing to `n_agents` (largest remainder).
    pub fn from_shares(shares: &[Vec<f64>], n_agents: usize, rng_seed: u64) -> Result<Self> {
        let mut counts = Vec::with_capacity(shares.len());
        for s in shares {
            let total: f64 = s.iter().sum();
            if s.is_empty() || s.iter().any(|x| !x.is_finite() || *x < 0.0) || total <= 0.0 {
                return Err(BepError::InvalidState(format!("bad shares {s:?}")));
            }
            let exact: Vec<f64> = s.iter().map(|x| x / total * n_agents as f64).collect();
            let mut c: Vec<usize> = exact.iter().map(|x| libm::floor(*x) as usize).collect();
            let mut order: Vec<usize> = (0..s.len()).collect();
            order.sort_by(|&a, &b| (exact[b] - c[b] as f64).total_cmp(&(exact[a] - c[a] as f64)));
            let missing = n_agents - c.iter().sum::<usize>();
            for &i in order.iter().cycle().take(missing) {
                c[i] += 1;
            }
            counts.push(c);
        }
        Self::multi(counts, rng_seed)
    }

    pub fn counts(&self) -> &[Vec<usize>] {
        &self.counts
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    pub fn shares(&self) -> Vec<f64> {
        let n = self.n_agents as f64;
        self.counts.iter().flatten().map(|&c| c as f64 / n).collect()
    }

    fn blocks(&self) -> Vec<usize> {
        self.counts.iter().map(Vec::len).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOptions {
    pub k: usize,
    pub revisions: u64,
    pub record_every: u64,
    pub tie: TieRule,
}

/// Draws an action index with probability proportional to `counts`.
fn draw(rng: &mut ChaCha8Rng, counts: &[usize], total: usize) -> usize {
    let mut u = rng.random_range(0..total);
    for (a, &c) in counts.iter().enumerate() {
        if u < c {
            return a;
        }
        u -= c;
    }
    unreachable!("counts sum to total")
}

fn choose(rng: &mut ChaCha8Rng, totals: &[i128], tie: &TieRule) -> usize {
    let best = *totals.iter().max().expect("at least two actions");
    match tie {
        TieRule::Uniform => {
            let winners = totals.iter().filter(|&&t| t == best).count();
            let pick = if winners == 1 { 0 } else { rng.random_range(0..winners) };
            totals.iter().enumerate().filter(|&(_, &t)| t == best).nth(pick).map(|(a, _)| a).unwrap()
        }
        TieRule::Priority(order) => *order.iter().find(|&&a| totals[a] == best).expect("validated permutation"),
    }
}

fn check_run(opts: &SimulationOptions, init: &AgentPopulation, actions: &[usize]) -> Result<()> {
    if opts.k == 0 {
        return Err(BepError::InvalidParameter("k must be at least 1".into()));
    }
    if opts.revisions == 0 {
        return Err(BepError::InvalidParameter("need at least one revision".into()));
    }
    if opts.record_every == 0 {
        return Err(BepError::InvalidParameter("record_every must be at least 1".into()));
    }
    if init.blocks() != actions {
        return Err(BepError::InvalidState(format!(
            "population shape {:?} does not match the game's action counts {actions:?}",
            init.blocks()
        )));
    }
    if let Some(&m) = actions.iter().find(|&&m| init.n_agents < m) {
        return Err(BepError::InvalidParameter(format!(
            "population of {} agents is smaller than {m} actions",
            init.n_agents
        )));
    }
    Ok(())
}

struct Recorder {
    blocks: Vec<usize>,
    times: Vec<f64>,
    states: Vec<Vec<f64>>,
}

impl Recorder {
    fn new(init: &AgentPopulation) -> Self {
        Recorder { blocks: init.blocks(), times: vec![0.0], states: vec![init.shares()] }
    }

    fn push(&mut self, t: f64, counts: &[Vec<usize>], n: usize) {
        self.times.push(t);
        self.states.push(counts.iter().flatten().map(|&c| c as f64 / n as f64).collect());
    }

    fn finish(self) -> Trajectory {
        Trajectory { blocks: self.blocks, times: self.times, states: self.states, terminal_reason: TerminalReason::Horizon }
    }
}

/// One-population simulation of a symmetric game; time advances by `1/N`
/// per revision.
pub fn simulate_agents(game: &SymmetricGame, init: &AgentPopulation, opts: &SimulationOptions) -> Result<Trajectory> {
    let m = game.num_actions();
    check_run(opts, init, &[m])?;
    opts.tie.validate(m)?;
    let (table, _) = game.scaled_payoffs().ok_or(BepError::Overflow)?;
    let opponents = game.players() - 1;
    // dense lookup by ordered opponent tuple
    let tuples = m.pow(opponents as u32);
    let mut dense = vec![0i128; m * tuples];
    for own in 0..m {
        for code in 0..tuples {
            let mut opp: Vec<usize> = (0..opponents).map(|j| code / m.pow(j as u32) % m).collect();
            opp.sort_unstable();
            let pos = own * game.opponent_profiles() + multiset_rank(m, &opp);
            dense[own * tuples + code] = table[pos];
        }
    }

    let n = init.n_agents;
    let mut counts = init.counts[0].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(init.rng_seed);
    let mut rec = Recorder::new(init);
    let mut totals = vec![0i128; m];
    for event in 1..=opts.revisions {
        let current = draw(&mut rng, &counts, n);
        for (a, total) in totals.iter_mut().enumerate() {
            *total = 0;
            for _ in 0..opts.k {
                let mut code = 0;
                let mut place = 1;
                for _ in 0..opponents {
                    code += draw(&mut rng, &counts, n) * place;
                    place *= m;
                }
                *total += dense[a * tuples + code];
            }
        }
        let next = choose(&mut rng, &totals, &opts.tie);
        counts[current] -= 1;
        counts[next] += 1;
        if event % opts.record_every == 0 || event == opts.revisions {
            rec.push(event as f64 / n as f64, core::slice::from_ref(&counts), n);
        }
    }
    Ok(rec.finish())
}

/// One population per player, each of `N` agents. A revision picks one of the
/// `nN` agents uniformly, so time advances by `1/(nN)` and each population
/// revises at unit rate.
pub fn simulate_agents_asymmetric(
    game: &AsymmetricGame,
    init: &AgentPopulation,
    opts: &SimulationOptions,
    ties: &[TieRule],
) -> Result<Trajectory> {
    let players = game.players();
    let actions: Vec<usize> = (0..players).map(|i| game.num_actions(i)).collect();
    check_run(opts, init, &actions)?;
    let ties: Vec<TieRule> = match ties.len() {
        0 => vec![opts.tie.clone(); players],
        1 => vec![ties[0].clone(); players],
        l if l == players => ties.to_vec(),
        l => return Err(BepError::InvalidParameter(format!("{l} tie rules for {players} players"))),
    };
    for (i, t) in ties.iter().enumerate() {
        t.validate(actions[i])?;
    }
    let (tables, _) = game.scaled_payoffs().ok_or(BepError::Overflow)?;

    let n = init.n_agents;
    let mut counts = init.counts.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(init.rng_seed);
    let mut rec = Recorder::new(init);
    let mut profile = vec![0usize; players];
    let step = 1.0 / (players * n) as f64;
    for event in 1..=opts.revisions {
        let i = rng.random_range(0..players);
        let current = draw(&mut rng, &counts[i], n);
        let mut totals = vec![0i128; actions[i]];
        for (a, total) in totals.iter_mut().enumerate() {
            profile[i] = a;
            for _ in 0..opts.k {
                for j in (0..players).filter(|&j| j != i) {
                    profile[j] = draw(&mut rng, &counts[j], n);
                }
                *total += tables[i][game.profile_position(&profile)];
            }
        }
        let next = choose(&mut rng, &totals, &ties[i]);
        counts[i][current] -= 1;
        counts[i][next] += 1;
        if event % opts.record_every == 0 || event == opts.revisions {
            rec.push(event as f64 * step, &counts, n);
        }
    }
    Ok(rec.finish())
}

/// Linear interpolation of a trajectory at time `t` inside its range.
fn state_at(traj: &Trajectory, t: f64) -> Vec<f64> {
    let times = &traj.times;
    let hi = times.partition_point(|&s| s < t).min(times.len() - 1);
    if hi == 0 || times[hi] == t {
        return traj.states[hi].clone();
    }
    let lo = hi - 1;
    let w = (t - times[lo]) / (times[hi] - times[lo]);
    traj.states[lo].iter().zip(&traj.states[hi]).map(|(a, b)| a + w * (b - a)).collect()
}

/// Largest max-norm gap between the two trajectories over the union of their
/// recorded times inside the common time range.
pub fn compare_to_mean_dynamic(empirical: &Trajectory, ode: &Trajectory) -> Result<f64> {
    if empirical.is_empty() || ode.is_empty() {
        return Err(BepError::DisjointTimeRanges);
    }
    if empirical.blocks != ode.blocks {
        return Err(BepError::InvalidState("trajectories have different shapes".into()));
    }
    let start = empirical.times[0].max(ode.times[0]);
    let end = empirical.terminal_time().min(ode.terminal_time());
    if start > end {
        return Err(BepError::DisjointTimeRanges);
    }
    let grid = empirical.times.iter().chain(&ode.times).copied().filter(|&t| t >= start && t <= end);
    let mut worst: f64 = 0.0;
    for t in grid {
        let a = state_at(empirical, t);
        let b = state_at(ode, t);
        worst = a.iter().zip(&b).fold(worst, |m, (x, y)| m.max((x - y).abs()));
    }
    Ok(worst)
}
