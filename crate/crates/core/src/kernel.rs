//! Revision probabilities of best-experienced-payoff sampling.
//!
//! A revising agent plays every action `k` times, each time against freshly
//! drawn opponents, and adopts the action with the highest total. The
//! probability that action `a` is adopted is computed exactly over the
//! product of per-action total-payoff laws:
//!
//! 1. the law of a single trial's payoff ([`trial_payoff_distribution`]),
//! 2. its `k`-fold convolution ([`k_trial_total_distribution`]),
//! 3. a joint sweep over one total per action, splitting ties by [`TieRule`].
//!
//! Totals are compared instead of means; `k` is the same for every action.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{BepError, Result};
use crate::game::multiset::{counts_of, multinomial, multisets};
use crate::game::{AsymmetricGame, SymmetricGame};
use crate::rational::Rational;

/// Default limit on joint outcome tuples swept per evaluation.
pub const DEFAULT_TUPLE_CAP: u64 = 10_000_000;

/// Action frequencies of one population; a point of the unit simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationState {
    weights: Vec<f64>,
}

impl PopulationState {
    /// Renormalizes `weights` to sum to one. Entries in `[-1e-12, 0)` are
    /// clipped to zero; anything more negative or non-finite is rejected.
    pub fn new(mut weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(BepError::InvalidState("empty weight vector".into()));
        }
        for w in &mut weights {
            if !w.is_finite() || *w < -1e-12 {
                return Err(BepError::InvalidState(format!("weight {w} is not a probability")));
            }
            if *w < 0.0 {
                *w = 0.0;
            }
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(BepError::InvalidState("weights sum to zero".into()));
        }
        for w in &mut weights {
            *w /= total;
        }
        Ok(Self { weights })
    }

    /// Monomorphic state `e_a`.
    pub fn vertex(actions: usize, a: usize) -> Self {
        let mut weights = vec![0.0; actions];
        weights[a] = 1.0;
        Self { weights }
    }

    pub fn uniform(actions: usize) -> Self {
        Self { weights: vec![1.0 / actions as f64; actions] }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, a: usize) -> f64 {
        self.weights[a]
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.weights
    }
}

/// One population state per player.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPopulationState {
    populations: Vec<PopulationState>,
}

impl MultiPopulationState {
    pub fn new(populations: Vec<PopulationState>) -> Self {
        Self { populations }
    }

    pub fn from_weights(weights: Vec<Vec<f64>>) -> Result<Self> {
        let populations = weights.into_iter().map(PopulationState::new).collect::<Result<_>>()?;
        Ok(Self { populations })
    }

    pub fn vertex(sizes: &[usize], profile: &[usize]) -> Self {
        Self {
            populations: sizes
                .iter()
                .zip(profile)
                .map(|(&m, &a)| PopulationState::vertex(m, a))
                .collect(),
        }
    }

    pub fn populations(&self) -> &[PopulationState] {
        &self.populations
    }

    pub fn population(&self, i: usize) -> &PopulationState {
        &self.populations[i]
    }

    pub fn flatten(&self) -> Vec<f64> {
        self.populations.iter().flat_map(|p| p.weights.iter().copied()).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.populations.iter().map(PopulationState::len).collect()
    }
}

/// Probability law over exact payoff values, sorted by value.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffDistribution {
    support: Vec<(Rational, f64)>,
}

impl PayoffDistribution {
    /// Merges equal values and drops zero-probability atoms. The
    /// probabilities must sum to one within `1e-12`.
    pub fn new(atoms: impl IntoIterator<Item = (Rational, f64)>) -> Result<Self> {
        let mut map: BTreeMap<Rational, f64> = BTreeMap::new();
        for (v, p) in atoms {
            if !(0.0..=1.0 + 1e-12).contains(&p) {
                return Err(BepError::InvalidState(format!("probability {p} out of range")));
            }
            *map.entry(v).or_insert(0.0) += p;
        }
        let d = Self::from_map(map);
        let total: f64 = d.support.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(BepError::InvalidState(format!("probabilities sum to {total}")));
        }
        Ok(d)
    }

    fn from_map(map: BTreeMap<Rational, f64>) -> Self {
        Self { support: map.into_iter().filter(|&(_, p)| p > 0.0).collect() }
    }

    pub fn degenerate(value: Rational) -> Self {
        Self { support: vec![(value, 1.0)] }
    }

    pub fn support(&self) -> &[(Rational, f64)] {
        &self.support
    }

    pub fn probability_of(&self, value: &Rational) -> f64 {
        self.support.iter().find(|(v, _)| v == value).map_or(0.0, |a| a.1)
    }

    pub fn total_probability(&self) -> f64 {
        self.support.iter().map(|a| a.1).sum()
    }
}

/// How a revising agent picks among actions whose totals tie for the maximum.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum TieRule {
    /// Each co-winner is chosen with equal probability.
    #[default]
    Uniform,
    /// The co-winner listed earliest wins. Must be a permutation of the actions.
    Priority(Vec<usize>),
}

impl TieRule {
    pub fn validate(&self, actions: usize) -> Result<()> {
        if let TieRule::Priority(order) = self {
            let mut seen = vec![false; actions];
            let ok = order.len() == actions
                && order.iter().all(|&a| a < actions && !core::mem::replace(&mut seen[a], true));
            if !ok {
                return Err(BepError::InvalidParameter(format!(
                    "tie priority {order:?} is not a permutation of {actions} actions"
                )));
            }
        }
        Ok(())
    }

    /// Distributes `mass` over the co-winners (given in increasing index order).
    pub(crate) fn split(&self, winners: &[usize], mass: f64, out: &mut [f64]) {
        match self {
            TieRule::Uniform => {
                let share = mass / winners.len() as f64;
                for &w in winners {
                    out[w] += share;
                }
            }
            TieRule::Priority(order) => {
                let first = order.iter().find(|a| winners.contains(a)).expect("validated permutation");
                out[*first] += mass;
            }
        }
    }
}

fn check_state(state: &PopulationState, actions: usize) -> Result<()> {
    if state.len() != actions {
        return Err(BepError::InvalidState(format!(
            "state has {} entries, game has {actions} actions",
            state.len()
        )));
    }
    Ok(())
}

/// Law of one trial's payoff for `action` when the `n - 1` opponents are drawn
/// i.i.d. from `state`.
pub fn trial_payoff_distribution(
    game: &SymmetricGame,
    action: usize,
    state: &PopulationState,
) -> Result<PayoffDistribution> {
    let m = game.num_actions();
    if action >= m {
        return Err(BepError::UnknownAction(action));
    }
    check_state(state, m)?;
    let mut map = BTreeMap::new();
    for opp in multisets(m, game.players() - 1) {
        let counts = counts_of(m, &opp);
        let mut p = multinomial(&counts);
        for (a, &c) in counts.iter().enumerate() {
            p *= libm::pow(state.get(a), c as f64);
        }
        *map.entry(game.payoff_sorted(action, &opp)).or_insert(0.0) += p;
    }
    Ok(PayoffDistribution::from_map(map))
}

/// Law of player `player`'s payoff from one trial of `action`, drawing one
/// opponent from every other population.
pub fn asymmetric_trial_payoff_distribution(
    game: &AsymmetricGame,
    player: usize,
    action: usize,
    state: &MultiPopulationState,
) -> Result<PayoffDistribution> {
    check_multi_state(game, state)?;
    if action >= game.num_actions(player) {
        return Err(BepError::UnknownAction(action));
    }
    let mut map = BTreeMap::new();
    let n = game.players();
    let mut profile = vec![0usize; n];
    profile[player] = action;
    let others: Vec<usize> = (0..n).filter(|&j| j != player).collect();
    loop {
        let p: f64 = others.iter().map(|&j| state.population(j).get(profile[j])).product();
        if p > 0.0 {
            *map.entry(game.payoff(player, &profile)).or_insert(0.0) += p;
        }
        // odometer over the other players' actions
        let mut advanced = false;
        for &j in others.iter().rev() {
            profile[j] += 1;
            if profile[j] < game.num_actions(j) {
                advanced = true;
                break;
            }
            profile[j] = 0;
        }
        if !advanced {
            break;
        }
    }
    Ok(PayoffDistribution::from_map(map))
}

fn convolve(a: &PayoffDistribution, b: &PayoffDistribution) -> PayoffDistribution {
    let mut map = BTreeMap::new();
    for (va, pa) in &a.support {
        for (vb, pb) in &b.support {
            *map.entry(*va + *vb).or_insert(0.0) += pa * pb;
        }
    }
    PayoffDistribution::from_map(map)
}

/// Law of the total of `k` i.i.d. trials with law `d`.
pub fn k_trial_total_distribution(d: &PayoffDistribution, k: usize) -> Result<PayoffDistribution> {
    if k == 0 {
        return Err(BepError::InvalidParameter("k must be at least 1".into()));
    }
    // binary powering of the convolution
    let mut result: Option<PayoffDistribution> = None;
    let mut base = d.clone();
    let mut e = k;
    loop {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => convolve(&r, &base),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = convolve(&base, &base);
    }
    Ok(result.expect("k >= 1"))
}

/// Sweeps the product of total-payoff laws (one per tested action) and
/// returns the adoption probability of each action.
pub fn adoption_probabilities(totals: &[PayoffDistribution], tie: &TieRule, cap: u64) -> Result<Vec<f64>> {
    let m = totals.len();
    tie.validate(m)?;
    let tuples: u128 = totals.iter().map(|d| d.support.len() as u128).product();
    if tuples > cap as u128 {
        return Err(BepError::ResourceCap { tuples, cap });
    }
    let mut w = vec![0.0; m];
    if totals.iter().any(|d| d.support.is_empty()) {
        return Ok(w);
    }
    let mut idx = vec![0usize; m];
    let mut winners = Vec::with_capacity(m);
    loop {
        let mut p = 1.0;
        let mut best = totals[0].support[idx[0]].0;
        winners.clear();
        for (a, d) in totals.iter().enumerate() {
            let (v, pa) = d.support[idx[a]];
            p *= pa;
            if a == 0 || v > best {
                best = v;
                winners.clear();
                winners.push(a);
            } else if v == best {
                winners.push(a);
            }
        }
        tie.split(&winners, p, &mut w);

        let mut a = m;
        loop {
            if a == 0 {
                return Ok(w);
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] < totals[a].support.len() {
                break;
            }
            idx[a] = 0;
        }
    }
}

/// `w_k(state)`: probability that each action is adopted by a revising agent.
pub fn best_experienced_probabilities(
    game: &SymmetricGame,
    state: &PopulationState,
    k: usize,
    tie: &TieRule,
) -> Result<Vec<f64>> {
    best_experienced_probabilities_capped(game, state, k, tie, DEFAULT_TUPLE_CAP)
}

pub fn best_experienced_probabilities_capped(
    game: &SymmetricGame,
    state: &PopulationState,
    k: usize,
    tie: &TieRule,
    cap: u64,
) -> Result<Vec<f64>> {
    check_state(state, game.num_actions())?;
    let totals = (0..game.num_actions())
        .map(|a| k_trial_total_distribution(&trial_payoff_distribution(game, a, state)?, k))
        .collect::<Result<Vec<_>>>()?;
    adoption_probabilities(&totals, tie, cap)
}

fn check_multi_state(game: &AsymmetricGame, state: &MultiPopulationState) -> Result<()> {
    if state.populations().len() != game.players() {
        return Err(BepError::InvalidState(format!(
            "state has {} populations, game has {} players",
            state.populations().len(),
            game.players()
        )));
    }
    for i in 0..game.players() {
        check_state(state.population(i), game.num_actions(i))?;
    }
    Ok(())
}

/// Per-player adoption probabilities `w^i_k(state)` of the `n`-population
/// dynamic. `ties[i]` applies to player `i`; a single rule is broadcast.
pub fn asymmetric_best_experienced(
    game: &AsymmetricGame,
    state: &MultiPopulationState,
    k: usize,
    ties: &[TieRule],
) -> Result<Vec<Vec<f64>>> {
    check_multi_state(game, state)?;
    (0..game.players())
        .map(|i| {
            let tie = ties.get(i).or(ties.first()).cloned().unwrap_or_default();
            let totals = (0..game.num_actions(i))
                .map(|a| {
                    k_trial_total_distribution(&asymmetric_trial_payoff_distribution(game, i, a, state)?, k)
                })
                .collect::<Result<Vec<_>>>()?;
            adoption_probabilities(&totals, &tie, DEFAULT_TUPLE_CAP)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::named::{asymmetric_hawk_dove, asymmetric_pd, prisoners_dilemma, public_goods};
    use crate::rational::{int, ratio};

    fn pd_half() -> SymmetricGame {
        prisoners_dilemma(ratio(1, 2), ratio(1, 2)).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn pd_trial_law() {
        let p = 0.3;
        let d = trial_payoff_distribution(&pd_half(), 0, &PopulationState::new(vec![p, 1.0 - p]).unwrap()).unwrap();
        assert_eq!(d.support().len(), 2);
        assert!(close(d.probability_of(&int(1)), p, 1e-15));
        assert!(close(d.probability_of(&ratio(-1, 2)), 1.0 - p, 1e-15));
    }

    #[test]
    fn monomorphic_trial_is_degenerate() {
        let g = pd_half();
        let d = trial_payoff_distribution(&g, 0, &PopulationState::vertex(2, 1)).unwrap();
        assert_eq!(d, PayoffDistribution::degenerate(ratio(-1, 2)));
    }

    #[test]
    fn public_goods_three_players_trial_law() {
        let g = public_goods(3, &[int(0), ratio(1, 2), ratio(9, 5), int(2)]).unwrap();
        let d = trial_payoff_distribution(&g, 0, &PopulationState::uniform(2)).unwrap();
        assert!(close(d.probability_of(&int(1)), 0.25, 1e-15));
        assert!(close(d.probability_of(&ratio(4, 5)), 0.5, 1e-15));
        assert!(close(d.probability_of(&ratio(-1, 2)), 0.25, 1e-15));
    }

    #[test]
    fn convolution_cases() {
        let p: f64 = 0.3;
        let d = PayoffDistribution::new([(int(1), p), (ratio(-1, 2), 1.0 - p)]).unwrap();
        assert_eq!(k_trial_total_distribution(&d, 1).unwrap(), d);
        let two = k_trial_total_distribution(&d, 2).unwrap();
        assert!(close(two.probability_of(&int(2)), p * p, 1e-15));
        assert!(close(two.probability_of(&ratio(1, 2)), 2.0 * p * (1.0 - p), 1e-15));
        assert!(close(two.probability_of(&int(-1)), (1.0 - p) * (1.0 - p), 1e-15));
        let point = PayoffDistribution::degenerate(ratio(2, 3));
        assert_eq!(k_trial_total_distribution(&point, 5).unwrap(), PayoffDistribution::degenerate(ratio(10, 3)));
        assert!(k_trial_total_distribution(&d, 0).is_err());
    }

    #[test]
    fn pd_k1_matches_alpha_c_alpha_d() {
        let g = pd_half();
        for p in [0.1, 0.5, 0.77] {
            let w = best_experienced_probabilities(&g, &PopulationState::new(vec![p, 1.0 - p]).unwrap(), 1, &TieRule::Uniform)
                .unwrap();
            assert!(close(w[0], p * (1.0 - p), 1e-15));
            assert!(close(w[0] + w[1], 1.0, 1e-12));
        }
    }

    #[test]
    fn pd_k2_at_028() {
        let p: f64 = 0.28;
        let w = best_experienced_probabilities(&pd_half(), &PopulationState::new(vec![p, 1.0 - p]).unwrap(), 2, &TieRule::Uniform)
            .unwrap();
        let expected = 2.0 * p * (1.0 - p).powi(3) + p * p * (1.0 - p * p);
        assert!(close(w[0], expected, 1e-14));
        assert!(close(w[0], 0.281272, 1e-6));
    }

    #[test]
    fn strict_equilibrium_vertex_is_fixed() {
        let w = best_experienced_probabilities(&pd_half(), &PopulationState::vertex(2, 1), 3, &TieRule::Uniform).unwrap();
        assert_eq!(w, vec![0.0, 1.0]);
    }

    #[test]
    fn resource_cap_reported() {
        let err = best_experienced_probabilities_capped(&pd_half(), &PopulationState::uniform(2), 3, &TieRule::Uniform, 3)
            .unwrap_err();
        assert!(matches!(err, BepError::ResourceCap { tuples: 16, cap: 3 }));
    }

    #[test]
    fn priority_tie_rule_checked_and_applied() {
        assert!(TieRule::Priority(vec![0, 0]).validate(2).is_err());
        assert!(TieRule::Priority(vec![1]).validate(2).is_err());
        // PD with l = 1, k = 2: one cooperator in the c-sample ties with an all-defector d-sample.
        let g = prisoners_dilemma(ratio(1, 2), int(1)).unwrap();
        let s = PopulationState::new(vec![0.1, 0.9]).unwrap();
        let uni = best_experienced_probabilities(&g, &s, 2, &TieRule::Uniform).unwrap();
        let c_first = best_experienced_probabilities(&g, &s, 2, &TieRule::Priority(vec![0, 1])).unwrap();
        let d_first = best_experienced_probabilities(&g, &s, 2, &TieRule::Priority(vec![1, 0])).unwrap();
        let tie_mass = 2.0 * 0.1 * 0.9 * 0.81;
        assert!(close(c_first[0] - d_first[0], tie_mass, 1e-14));
        assert!(close(uni[0], d_first[0] + tie_mass / 2.0, 1e-14));
    }

    #[test]
    fn asymmetric_pd_k1() {
        let g = asymmetric_pd(int(1), int(1), ratio(2, 5), ratio(3, 2)).unwrap();
        let q = 0.35;
        let s = MultiPopulationState::from_weights(vec![vec![0.6, 0.4], vec![q, 1.0 - q]]).unwrap();
        let w = asymmetric_best_experienced(&g, &s, 1, &[TieRule::Uniform]).unwrap();
        assert!(close(w[0][0], q * (1.0 - q), 1e-15));
        assert!(close(w[1][0], 0.6 * 0.4, 1e-15));
    }

    #[test]
    fn asymmetric_monomorphic_cases() {
        let g = asymmetric_pd(int(1), int(1), ratio(2, 5), ratio(3, 2)).unwrap();
        let s = MultiPopulationState::vertex(&[2, 2], &[1, 1]);
        let w = asymmetric_best_experienced(&g, &s, 2, &[TieRule::Uniform]).unwrap();
        assert_eq!(w, vec![vec![0.0, 1.0], vec![0.0, 1.0]]);

        let hd = asymmetric_hawk_dove(int(1), ratio(1, 2), ratio(2, 5), ratio(1, 2)).unwrap();
        let s = MultiPopulationState::from_weights(vec![vec![0.3, 0.7], vec![0.0, 1.0]]).unwrap();
        let w = asymmetric_best_experienced(&hd, &s, 2, &[TieRule::Uniform]).unwrap();
        assert_eq!(w[0], vec![1.0, 0.0]);
    }

    #[test]
    fn state_validation() {
        assert!(PopulationState::new(vec![]).is_err());
        assert!(PopulationState::new(vec![0.5, -0.1]).is_err());
        assert!(PopulationState::new(vec![0.0, 0.0]).is_err());
        assert!(PopulationState::new(vec![f64::NAN, 1.0]).is_err());
        let s = PopulationState::new(vec![2.0, 6.0]).unwrap();
        assert_eq!(s.weights(), &[0.25, 0.75]);
    }
}
