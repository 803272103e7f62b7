//! Mean dynamic `x' = w_k(x) - x`: integration, rest points, Jacobians.
//!
//! States are handled as flat vectors made of consecutive simplex blocks,
//! one block per population (a single block for symmetric games).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{BepError, Result};
use crate::game::{AsymmetricGame, SymmetricGame};
use crate::kernel::{
    adoption_probabilities, asymmetric_trial_payoff_distribution, k_trial_total_distribution,
    trial_payoff_distribution, MultiPopulationState, PopulationState, TieRule, DEFAULT_TUPLE_CAP,
};
use crate::linalg::max_real_eigenvalue;

pub const DEFAULT_DT: f64 = 0.05;
/// Integration stops once the field's max-norm falls below this.
pub const FIELD_TOL: f64 = 1e-10;
pub const DEFAULT_JACOBIAN_STEP: f64 = 1e-5;

/// A revision map `w` over a product of simplices.
pub trait MeanDynamic {
    /// Sizes of the simplex blocks making up a state.
    fn blocks(&self) -> &[usize];

    /// `w(x)`; `x` must be a valid flat state.
    fn inflow(&self, x: &[f64]) -> Result<Vec<f64>>;

    fn dim(&self) -> usize {
        self.blocks().iter().sum()
    }

    /// `w(x) - x`.
    fn field(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut w = self.inflow(x)?;
        for (wi, xi) in w.iter_mut().zip(x) {
            *wi -= xi;
        }
        Ok(w)
    }
}

pub struct SymmetricDynamic<'a> {
    game: &'a SymmetricGame,
    k: usize,
    tie: TieRule,
    blocks: [usize; 1],
}

impl<'a> SymmetricDynamic<'a> {
    pub fn new(game: &'a SymmetricGame, k: usize, tie: TieRule) -> Result<Self> {
        if k == 0 {
            return Err(BepError::InvalidParameter("k must be at least 1".into()));
        }
        tie.validate(game.num_actions())?;
        Ok(Self { game, k, tie, blocks: [game.num_actions()] })
    }

    pub fn game(&self) -> &SymmetricGame {
        self.game
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl MeanDynamic for SymmetricDynamic<'_> {
    fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    fn inflow(&self, x: &[f64]) -> Result<Vec<f64>> {
        let state = PopulationState::new(x.to_vec())?;
        let totals = (0..self.game.num_actions())
            .map(|a| k_trial_total_distribution(&trial_payoff_distribution(self.game, a, &state)?, self.k))
            .collect::<Result<Vec<_>>>()?;
        adoption_probabilities(&totals, &self.tie, DEFAULT_TUPLE_CAP)
    }
}

pub struct AsymmetricDynamic<'a> {
    game: &'a AsymmetricGame,
    k: usize,
    ties: Vec<TieRule>,
    blocks: Vec<usize>,
}

impl<'a> AsymmetricDynamic<'a> {
    /// `ties` holds one rule per player, or a single rule for everyone.
    pub fn new(game: &'a AsymmetricGame, k: usize, ties: Vec<TieRule>) -> Result<Self> {
        if k == 0 {
            return Err(BepError::InvalidParameter("k must be at least 1".into()));
        }
        let n = game.players();
        let ties = match ties.len() {
            0 => vec![TieRule::Uniform; n],
            1 => vec![ties[0].clone(); n],
            len if len == n => ties,
            len => {
                return Err(BepError::InvalidParameter(format!("{len} tie rules given for {n} players")));
            }
        };
        for (i, t) in ties.iter().enumerate() {
            t.validate(game.num_actions(i))?;
        }
        let blocks = (0..n).map(|i| game.num_actions(i)).collect();
        Ok(Self { game, k, ties, blocks })
    }

    pub fn game(&self) -> &AsymmetricGame {
        self.game
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl MeanDynamic for AsymmetricDynamic<'_> {
    fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    fn inflow(&self, x: &[f64]) -> Result<Vec<f64>> {
        let state = MultiPopulationState::from_weights(split_blocks(&self.blocks, x))?;
        let mut out = Vec::with_capacity(x.len());
        for i in 0..self.game.players() {
            let totals = (0..self.game.num_actions(i))
                .map(|a| {
                    k_trial_total_distribution(
                        &asymmetric_trial_payoff_distribution(self.game, i, a, &state)?,
                        self.k,
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            out.extend(adoption_probabilities(&totals, &self.ties[i], DEFAULT_TUPLE_CAP)?);
        }
        Ok(out)
    }
}

/// Splits a flat state into per-block vectors.
pub fn split_blocks(blocks: &[usize], x: &[f64]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(blocks.len());
    let mut at = 0;
    for &b in blocks {
        out.push(x[at..at + b].to_vec());
        at += b;
    }
    out
}

/// Clips every block at zero and rescales it to sum one.
fn project(blocks: &[usize], x: &mut [f64]) -> Result<()> {
    let mut at = 0;
    for &b in blocks {
        let block = &mut x[at..at + b];
        for v in block.iter_mut() {
            if !v.is_finite() {
                return Err(BepError::NonFiniteState);
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let s: f64 = block.iter().sum();
        if s <= 0.0 {
            return Err(BepError::NonFiniteState);
        }
        for v in block.iter_mut() {
            *v /= s;
        }
        at += b;
    }
    Ok(())
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Max-norm distance between two states of equal shape.
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalReason {
    /// The field's max-norm dropped below [`FIELD_TOL`].
    Converged,
    Horizon,
    /// An RK4 step went noticeably negative before clipping.
    DivergedFromSimplex,
}

/// Recorded states of one integration run, in flat block layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub blocks: Vec<usize>,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub terminal_reason: TerminalReason,
}

impl Trajectory {
    pub fn terminal_state(&self) -> &[f64] {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn terminal_time(&self) -> f64 {
        *self.times.last().expect("trajectory holds the initial time")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// State at recorded step `i` as a single population.
    pub fn population_state(&self, i: usize) -> Result<PopulationState> {
        PopulationState::new(self.states[i].clone())
    }

    pub fn multi_state(&self, i: usize) -> Result<MultiPopulationState> {
        MultiPopulationState::from_weights(split_blocks(&self.blocks, &self.states[i]))
    }
}

fn check_flat(dynamic: &dyn MeanDynamic, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != dynamic.dim() {
        return Err(BepError::InvalidState(format!(
            "state has {} entries, expected {}",
            x.len(),
            dynamic.dim()
        )));
    }
    let mut x = x.to_vec();
    let mut at = 0;
    for &b in dynamic.blocks() {
        PopulationState::new(x[at..at + b].to_vec())?;
        at += b;
    }
    project(dynamic.blocks(), &mut x)?;
    Ok(x)
}

/// Fixed-step RK4 from `x0` up to time `horizon`, recording every step.
pub fn integrate_dynamic(dynamic: &dyn MeanDynamic, x0: &[f64], horizon: f64, dt: f64) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(BepError::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(BepError::InvalidParameter(format!("horizon must be nonnegative, got {horizon}")));
    }
    let blocks = dynamic.blocks().to_vec();
    let mut x = check_flat(dynamic, x0)?;
    let mut t = 0.0;
    let mut times = vec![t];
    let mut states = vec![x.clone()];
    let n = x.len();
    let mut tmp = vec![0.0; n];
    let steps = libm::ceil(horizon / dt - 1e-9) as u64;
    let mut reason = TerminalReason::Horizon;

    for step in 0..steps {
        let k1 = dynamic.field(&x)?;
        if max_norm(&k1) < FIELD_TOL {
            reason = TerminalReason::Converged;
            break;
        }
        let h = dt.min(horizon - t);
        let stage = |base: &[f64], slope: &[f64], c: f64, out: &mut Vec<f64>| -> Result<Vec<f64>> {
            for i in 0..n {
                out[i] = base[i] + c * slope[i];
            }
            project(&blocks, out)?;
            dynamic.field(out)
        };
        let k2 = stage(&x, &k1, h / 2.0, &mut tmp)?;
        let k3 = stage(&x, &k2, h / 2.0, &mut tmp)?;
        let k4 = stage(&x, &k3, h, &mut tmp)?;
        for i in 0..n {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let lowest = x.iter().copied().fold(f64::INFINITY, f64::min);
        project(&blocks, &mut x)?;
        t = if step + 1 == steps { horizon } else { t + h };
        times.push(t);
        states.push(x.clone());
        if lowest < -1e-6 {
            reason = TerminalReason::DivergedFromSimplex;
            break;
        }
    }
    if reason == TerminalReason::Horizon && max_norm(&dynamic.field(&x)?) < FIELD_TOL {
        reason = TerminalReason::Converged;
    }
    Ok(Trajectory { blocks, times, states, terminal_reason: reason })
}

/// Integrates the one-population dynamic of `game` from `start`.
pub fn integrate(
    game: &SymmetricGame,
    k: usize,
    start: &PopulationState,
    horizon: f64,
    dt: f64,
    tie: &TieRule,
) -> Result<Trajectory> {
    let dynamic = SymmetricDynamic::new(game, k, tie.clone())?;
    integrate_dynamic(&dynamic, start.weights(), horizon, dt)
}

/// Integrates the `n`-population dynamic of `game` from `start`.
pub fn integrate_asymmetric(
    game: &AsymmetricGame,
    k: usize,
    start: &MultiPopulationState,
    horizon: f64,
    dt: f64,
    ties: &[TieRule],
) -> Result<Trajectory> {
    let dynamic = AsymmetricDynamic::new(game, k, ties.to_vec())?;
    integrate_dynamic(&dynamic, &start.flatten(), horizon, dt)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestPoint {
    pub blocks: Vec<usize>,
    pub state: Vec<f64>,
    /// Max-norm of `w(x) - x`.
    pub residual: f64,
    /// Number of seeds that ended at this point.
    pub basin_seeds: usize,
}

impl RestPoint {
    pub fn population_state(&self) -> Result<PopulationState> {
        PopulationState::new(self.state.clone())
    }

    pub fn multi_state(&self) -> Result<MultiPopulationState> {
        MultiPopulationState::from_weights(split_blocks(&self.blocks, &self.state))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestPointSearch {
    /// Sorted lexicographically by state.
    pub rest_points: Vec<RestPoint>,
    /// Seeds whose trajectories neither converged nor ended near a rest point.
    pub unresolved: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    pub horizon: f64,
    pub dt: f64,
    /// Residual accepted for a rest point.
    pub tol: f64,
    /// Rest points closer than this (max-norm) are merged.
    pub dedup: f64,
    /// A non-converged seed ending this close to a rest point is attributed to it.
    pub attach: f64,
    pub damping: f64,
    pub polish_iterations: usize,
    /// Grid points per unit for the root scan of two-action, one-population games.
    pub scan_points: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            horizon: 2000.0,
            dt: DEFAULT_DT,
            tol: 1e-9,
            dedup: 1e-6,
            attach: 1e-3,
            damping: 0.5,
            polish_iterations: 100_000,
            scan_points: 1000,
        }
    }
}

/// Damped fixed-point iteration `x <- (1 - lambda) x + lambda w(x)`.
pub fn polish(dynamic: &dyn MeanDynamic, x: &[f64], damping: f64, tol: f64, iterations: usize) -> Result<(Vec<f64>, f64)> {
    let mut x = check_flat(dynamic, x)?;
    let mut f = dynamic.field(&x)?;
    let mut r = max_norm(&f);
    for _ in 0..iterations {
        if r <= tol * 1e-2 {
            break;
        }
        let mut y: Vec<f64> = x.iter().zip(&f).map(|(xi, fi)| xi + damping * fi).collect();
        project(dynamic.blocks(), &mut y)?;
        let fy = dynamic.field(&y)?;
        let ry = max_norm(&fy);
        if ry >= r && r <= tol {
            break;
        }
        x = y;
        f = fy;
        r = ry;
    }
    Ok((x, r))
}

/// Interior states whose coordinates are multiples of `1/resolution`, each at
/// least `1/resolution`; one list per block, combined as a product.
pub fn interior_grid(blocks: &[usize], resolution: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for &m in blocks {
        let parts = compositions(resolution, m);
        let mut next = Vec::with_capacity(out.len() * parts.len());
        for prefix in &out {
            for p in &parts {
                let mut s = prefix.clone();
                s.extend(p.iter().map(|&c| c as f64 / resolution as f64));
                next.push(s);
            }
        }
        out = next;
    }
    out
}

/// Compositions of `total` into `parts` positive integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return if total >= 1 { vec![vec![total]] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn vertices(blocks: &[usize]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for &m in blocks {
        let mut next = Vec::with_capacity(out.len() * m);
        for prefix in &out {
            for a in 0..m {
                let mut s = prefix.clone();
                s.extend((0..m).map(|b| if a == b { 1.0 } else { 0.0 }));
                next.push(s);
            }
        }
        out = next;
    }
    out
}

/// Roots of `w_0(p) - p` on a grid of `(0, 1)` for two-action, one-population
/// dynamics, refined by bisection.
fn scan_line(dynamic: &dyn MeanDynamic, points: usize) -> Result<Vec<Vec<f64>>> {
    let h = |p: f64| -> Result<f64> { Ok(dynamic.field(&[p, 1.0 - p])?[0]) };
    let mut roots = Vec::new();
    let mut prev_p = 1.0 / points as f64;
    let mut prev = h(prev_p)?;
    for i in 2..points {
        let p = i as f64 / points as f64;
        let cur = h(p)?;
        if prev == 0.0 {
            roots.push(prev_p);
        } else if prev * cur < 0.0 {
            let (mut lo, mut hi, mut flo) = (prev_p, p, prev);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = h(mid)?;
                if fm == 0.0 || hi - lo < 1e-15 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev_p = p;
        prev = cur;
    }
    Ok(roots.into_iter().map(|p| vec![p, 1.0 - p]).collect())
}

/// Locates rest points by integrating from every seed and polishing the end
/// state. Pure vertices are always tested directly, and for two-action,
/// one-population dynamics the line is additionally scanned for sign changes,
/// so unstable rest points are reported too.
pub fn find_rest_points(dynamic: &dyn MeanDynamic, seeds: &[Vec<f64>], opts: &SearchOptions) -> Result<RestPointSearch> {
    if seeds.is_empty() {
        return Err(BepError::InvalidParameter("no seeds given".into()));
    }
    let blocks = dynamic.blocks().to_vec();
    let mut found: Vec<RestPoint> = Vec::new();
    let add = |x: Vec<f64>, r: f64, seeds: usize, found: &mut Vec<RestPoint>| {
        if let Some(p) = found.iter_mut().find(|p| distance(&p.state, &x) <= opts.dedup) {
            p.basin_seeds += seeds;
            if r < p.residual {
                p.state = x;
                p.residual = r;
            }
        } else {
            found.push(RestPoint { blocks: blocks.clone(), state: x, residual: r, basin_seeds: seeds });
        }
    };

    for v in vertices(&blocks) {
        let r = max_norm(&dynamic.field(&v)?);
        if r <= opts.tol {
            add(v, r, 0, &mut found);
        }
    }
    if blocks.len() == 1 && blocks[0] == 2 && opts.scan_points >= 2 {
        for x in scan_line(dynamic, opts.scan_points)? {
            let (x, r) = polish(dynamic, &x, opts.damping, opts.tol, 0)?;
            if r <= opts.tol {
                add(x, r, 0, &mut found);
            }
        }
    }

    let mut pending = Vec::new();
    for seed in seeds {
        let traj = integrate_dynamic(dynamic, seed, opts.horizon, opts.dt)?;
        let end = traj.terminal_state();
        if traj.terminal_reason == TerminalReason::Converged {
            let (x, r) = polish(dynamic, end, opts.damping, opts.tol, opts.polish_iterations)?;
            if r <= opts.tol {
                add(x, r, 1, &mut found);
                continue;
            }
        }
        pending.push((seed.clone(), end.to_vec()));
    }

    let mut unresolved = Vec::new();
    for (seed, end) in pending {
        match found.iter_mut().find(|p| distance(&p.state, &end) <= opts.attach) {
            Some(p) => p.basin_seeds += 1,
            None => unresolved.push(seed),
        }
    }
    found.sort_by(|a, b| a.state.partial_cmp(&b.state).unwrap_or(core::cmp::Ordering::Equal));
    Ok(RestPointSearch { rest_points: found, unresolved })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convergence {
    ConvergedToTarget,
    ConvergedElsewhere,
    NotConverged,
}

pub fn classify_convergence(traj: &Trajectory, target: &[f64], radius: f64) -> Convergence {
    if distance(traj.terminal_state(), target) <= radius {
        Convergence::ConvergedToTarget
    } else if traj.terminal_reason == TerminalReason::Converged {
        Convergence::ConvergedElsewhere
    } else {
        Convergence::NotConverged
    }
}

/// Linearization of the field at a rest point in simplex coordinates.
///
/// In each block the most heavily weighted action serves as the reference
/// coordinate; `index` lists the remaining `(block, action)` pairs. Column
/// `j` is the one-sided difference of the field along `e_j - e_ref(j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jacobian {
    pub index: Vec<(usize, usize)>,
    pub matrix: DMatrix<f64>,
}

impl Jacobian {
    pub fn max_real_eigenvalue(&self) -> f64 {
        max_real_eigenvalue(&self.matrix)
    }
}

pub fn numeric_jacobian(dynamic: &dyn MeanDynamic, x: &[f64], h: f64) -> Result<Jacobian> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(BepError::InvalidParameter(format!("step must be positive, got {h}")));
    }
    let x = check_flat(dynamic, x)?;
    let f0 = dynamic.field(&x)?;
    let residual = max_norm(&f0);
    if residual > 1e-8 {
        return Err(BepError::NotRestPoint { residual });
    }
    let blocks = dynamic.blocks();
    let mut offsets = Vec::with_capacity(blocks.len());
    let mut refs = Vec::with_capacity(blocks.len());
    let mut index = Vec::new();
    let mut at = 0;
    for (b, &m) in blocks.iter().enumerate() {
        let block = &x[at..at + m];
        let r = (0..m).fold(0, |best, a| if block[a] > block[best] { a } else { best });
        offsets.push(at);
        refs.push(r);
        index.extend((0..m).filter(|&a| a != r).map(|a| (b, a)));
        at += m;
    }
    let d = index.len();
    let mut matrix = DMatrix::zeros(d, d);
    for (col, &(b, a)) in index.iter().enumerate() {
        let r = offsets[b] + refs[b];
        if x[r] < h {
            return Err(BepError::StepLeavesSimplex { h });
        }
        let mut y = x.clone();
        y[offsets[b] + a] += h;
        y[r] -= h;
        let fy = dynamic.field(&y)?;
        for (row, &(b2, a2)) in index.iter().enumerate() {
            let i = offsets[b2] + a2;
            matrix[(row, col)] = (fy[i] - f0[i]) / h;
        }
    }
    Ok(Jacobian { index, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::named::{asymmetric_pd, coordination, prisoners_dilemma};
    use crate::rational::{int, ratio};

    fn pd(g: (i128, i128), l: (i128, i128)) -> SymmetricGame {
        prisoners_dilemma(ratio(g.0, g.1), ratio(l.0, l.1)).unwrap()
    }

    #[test]
    fn k1_pd_decays_monotonically() {
        let g = pd((1, 2), (1, 2));
        let traj = integrate(&g, 1, &PopulationState::new(vec![0.5, 0.5]).unwrap(), 20.0, DEFAULT_DT, &TieRule::Uniform)
            .unwrap();
        assert!(traj.states.windows(2).all(|w| w[1][0] < w[0][0]));
        // x' = -x^2 from 1/2 gives x(t) = 1 / (2 + t)
        assert!((traj.terminal_state()[0] - 1.0 / 22.0).abs() < 1e-6);
        assert_eq!(traj.terminal_reason, TerminalReason::Horizon);
        assert!((traj.terminal_time() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn vertex_start_is_stationary() {
        let g = pd((1, 2), (1, 2));
        let traj = integrate(&g, 2, &PopulationState::vertex(2, 1), 10.0, DEFAULT_DT, &TieRule::Uniform).unwrap();
        assert_eq!(traj.terminal_reason, TerminalReason::Converged);
        assert_eq!(traj.len(), 1);
        let c = classify_convergence(&traj, &[0.0, 1.0], 1e-9);
        assert_eq!(c, Convergence::ConvergedToTarget);
    }

    #[test]
    fn pd_k2_converges_inside_bounds() {
        let g = pd((1, 2), (1, 2));
        let traj = integrate(&g, 2, &PopulationState::new(vec![0.9, 0.1]).unwrap(), 500.0, DEFAULT_DT, &TieRule::Uniform)
            .unwrap();
        assert_eq!(traj.terminal_reason, TerminalReason::Converged);
        let p = traj.terminal_state()[0];
        assert!(p > 0.28 && p < 0.5, "{p}");
        let far = classify_convergence(&traj, &[0.0, 1.0], 1e-3);
        assert_eq!(far, Convergence::ConvergedElsewhere);
    }

    #[test]
    fn short_horizon_is_not_converged() {
        let g = pd((1, 2), (1, 2));
        let traj = integrate(&g, 2, &PopulationState::new(vec![0.9, 0.1]).unwrap(), 0.5, DEFAULT_DT, &TieRule::Uniform)
            .unwrap();
        assert_eq!(classify_convergence(&traj, &[0.3, 0.7], 1e-3), Convergence::NotConverged);
    }

    fn rest_values(g: &SymmetricGame, k: usize) -> RestPointSearch {
        let d = SymmetricDynamic::new(g, k, TieRule::Uniform).unwrap();
        find_rest_points(&d, &interior_grid(&[2], 10), &SearchOptions::default()).unwrap()
    }

    #[test]
    fn rest_points_of_pd_cases() {
        let s = rest_values(&pd((1, 2), (1, 2)), 1);
        assert_eq!(s.rest_points.len(), 1);
        assert_eq!(s.rest_points[0].state, vec![0.0, 1.0]);
        assert!(s.unresolved.is_empty());

        let s = rest_values(&pd((2, 1), (1, 2)), 2);
        let ps: Vec<f64> = s.rest_points.iter().map(|r| r.state[0]).collect();
        assert_eq!(ps.len(), 2, "{ps:?}");
        assert_eq!(ps[0], 0.0);
        assert!((ps[1] - 0.245).abs() < 1e-3, "{ps:?}");

        let s = rest_values(&pd((3, 5), (3, 10)), 3);
        let ps: Vec<f64> = s.rest_points.iter().map(|r| r.state[0]).collect();
        assert_eq!(ps.len(), 2, "{ps:?}");
        assert!((ps[1] - 0.323).abs() < 1e-3, "{ps:?}");

        let s = rest_values(&pd((1, 2), (2, 1)), 2);
        assert_eq!(s.rest_points.len(), 1);
    }

    #[test]
    fn grid_has_expected_points() {
        assert_eq!(interior_grid(&[2], 10).len(), 9);
        assert_eq!(interior_grid(&[3], 4).len(), 3);
        assert_eq!(interior_grid(&[2, 2], 4).len(), 9);
        for s in interior_grid(&[3, 2], 6) {
            assert!((s[..3].iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!((s[3..].iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobian_at_defection() {
        let d_state = [0.0, 1.0];
        let g = pd((1, 2), (2, 1));
        let dy = SymmetricDynamic::new(&g, 2, TieRule::Uniform).unwrap();
        let j = numeric_jacobian(&dy, &d_state, DEFAULT_JACOBIAN_STEP).unwrap();
        assert_eq!(j.index, vec![(0, 0)]);
        assert!((j.matrix[(0, 0)] + 1.0).abs() < 1e-4);

        let g = pd((1, 2), (1, 2));
        let dy = SymmetricDynamic::new(&g, 2, TieRule::Uniform).unwrap();
        let j = numeric_jacobian(&dy, &d_state, DEFAULT_JACOBIAN_STEP).unwrap();
        assert!((j.matrix[(0, 0)] - 1.0).abs() < 1e-4);
        assert!(matches!(numeric_jacobian(&dy, &[0.5, 0.5], 1e-5), Err(BepError::NotRestPoint { .. })));
        assert!(matches!(numeric_jacobian(&dy, &d_state, 2.0), Err(BepError::StepLeavesSimplex { .. })));
    }

    #[test]
    fn jacobian_without_support_is_minus_identity() {
        let g = coordination(2, &[int(3), int(2), int(1)]).unwrap();
        let dy = SymmetricDynamic::new(&g, 5, TieRule::Uniform).unwrap();
        let j = numeric_jacobian(&dy, &[1.0, 0.0, 0.0], DEFAULT_JACOBIAN_STEP).unwrap();
        assert_eq!(j.index.len(), 2);
        assert!((j.max_real_eigenvalue() + 1.0).abs() < 1e-4);
    }

    #[test]
    fn asymmetric_pd_defection_rest_point() {
        let g = asymmetric_pd(int(1), int(1), ratio(2, 5), ratio(3, 2)).unwrap();
        let dy = AsymmetricDynamic::new(&g, 2, vec![]).unwrap();
        let s = find_rest_points(&dy, &interior_grid(dy.blocks(), 4), &SearchOptions::default()).unwrap();
        assert!(s.rest_points.iter().any(|r| r.state == vec![0.0, 1.0, 0.0, 1.0]));
        let j = numeric_jacobian(&dy, &[0.0, 1.0, 0.0, 1.0], DEFAULT_JACOBIAN_STEP).unwrap();
        assert_eq!(j.index, vec![(0, 0), (1, 0)]);
        assert!(j.max_real_eigenvalue() < 0.0);
    }
}
