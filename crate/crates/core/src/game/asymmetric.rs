use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::SchemaError;
use crate::rational::{common_denominator, scaled, Rational};

/// One payoff row of an asymmetric game: `u_player` at the profile where the
/// player plays `own` and the others play `opponents` (in player order, the
/// player itself skipped).
#[derive(Debug, Clone, PartialEq)]
pub struct AsymmetricEntry {
    pub player: usize,
    pub own: String,
    pub opponents: Vec<String>,
    pub value: Rational,
}

/// An `n`-player game with per-player action sets and payoff functions over
/// full profiles, stored densely in mixed radix (player 0 most significant).
#[derive(Debug, Clone, PartialEq)]
pub struct AsymmetricGame {
    action_sets: Vec<Vec<String>>,
    strides: Vec<usize>,
    payoffs: Vec<Vec<Rational>>,
}

impl AsymmetricGame {
    pub fn new(
        action_sets: Vec<Vec<String>>,
        entries: impl IntoIterator<Item = AsymmetricEntry>,
    ) -> Result<Self, SchemaError> {
        check_shape(&action_sets)?;
        let strides = strides(&action_sets);
        let size: usize = action_sets.iter().map(Vec::len).product();
        let n = action_sets.len();
        let mut slots: Vec<Vec<Option<Rational>>> = vec![vec![None; size]; n];

        for e in entries {
            if e.player >= n {
                return Err(SchemaError::UnknownPlayer(e.player));
            }
            if e.opponents.len() != n - 1 {
                return Err(SchemaError::OpponentCount {
                    entry: format!("player {} {}", e.player, e.own),
                    got: e.opponents.len(),
                    expected: n - 1,
                });
            }
            let mut profile = Vec::with_capacity(n);
            let mut opp = e.opponents.iter();
            for (j, set) in action_sets.iter().enumerate() {
                let label = if j == e.player { &e.own } else { opp.next().unwrap() };
                let idx = set
                    .iter()
                    .position(|a| a == label)
                    .ok_or_else(|| SchemaError::UnknownAction(label.clone()))?;
                profile.push(idx);
            }
            let at = index(&strides, &profile);
            if slots[e.player][at].is_some() {
                return Err(SchemaError::DuplicateEntry(profile_label(&action_sets, e.player, &profile)));
            }
            slots[e.player][at] = Some(e.value);
        }

        let mut missing = Vec::new();
        for (player, row) in slots.iter().enumerate() {
            for (at, v) in row.iter().enumerate() {
                if v.is_none() {
                    let profile = unindex(&action_sets, at);
                    missing.push(profile_label(&action_sets, player, &profile));
                }
            }
        }
        if !missing.is_empty() {
            return Err(SchemaError::MissingEntries(missing));
        }
        let payoffs = slots
            .into_iter()
            .map(|row| row.into_iter().map(Option::unwrap).collect())
            .collect();
        Ok(Self { action_sets, strides, payoffs })
    }

    /// Builds a game from `rule(player, profile)`.
    pub fn from_fn(
        action_sets: Vec<Vec<String>>,
        mut rule: impl FnMut(usize, &[usize]) -> Rational,
    ) -> Result<Self, SchemaError> {
        check_shape(&action_sets)?;
        let strides = strides(&action_sets);
        let size: usize = action_sets.iter().map(Vec::len).product();
        let payoffs = (0..action_sets.len())
            .map(|player| {
                (0..size)
                    .map(|at| rule(player, &unindex(&action_sets, at)))
                    .collect()
            })
            .collect();
        Ok(Self { action_sets, strides, payoffs })
    }

    pub fn players(&self) -> usize {
        self.action_sets.len()
    }

    pub fn actions(&self, player: usize) -> &[String] {
        &self.action_sets[player]
    }

    pub fn action_sets(&self) -> &[Vec<String>] {
        &self.action_sets
    }

    pub fn num_actions(&self, player: usize) -> usize {
        self.action_sets[player].len()
    }

    pub fn action_index(&self, player: usize, label: &str) -> Option<usize> {
        self.action_sets.get(player)?.iter().position(|a| a == label)
    }

    /// Parses a profile given as one label per player.
    pub fn profile_from_labels(&self, labels: &[&str]) -> Option<Vec<usize>> {
        if labels.len() != self.players() {
            return None;
        }
        labels
            .iter()
            .enumerate()
            .map(|(i, l)| self.action_index(i, l))
            .collect()
    }

    pub fn payoff(&self, player: usize, profile: &[usize]) -> Rational {
        self.payoffs[player][index(&self.strides, profile)]
    }

    pub fn payoff_values(&self, player: usize) -> &[Rational] {
        &self.payoffs[player]
    }

    pub fn profile_count(&self) -> usize {
        self.payoffs[0].len()
    }

    /// Every pure profile in storage order.
    pub fn profiles(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.profile_count()).map(|at| unindex(&self.action_sets, at))
    }

    /// Storage position of a profile.
    pub fn profile_position(&self, profile: &[usize]) -> usize {
        index(&self.strides, profile)
    }

    /// Each player's action is the unique best reply to the others.
    pub fn is_strict_equilibrium(&self, profile: &[usize]) -> bool {
        let mut dev = profile.to_vec();
        (0..self.players()).all(|i| {
            let eq = self.payoff(i, profile);
            (0..self.num_actions(i)).all(|b| {
                if b == profile[i] {
                    return true;
                }
                dev[i] = b;
                let ok = self.payoff(i, &dev) < eq;
                dev[i] = profile[i];
                ok
            })
        })
    }

    pub fn profile_label(&self, profile: &[usize]) -> String {
        let parts: Vec<&str> = profile
            .iter()
            .enumerate()
            .map(|(i, &a)| self.action_sets[i][a].as_str())
            .collect();
        format!("({})", parts.join(","))
    }

    /// Per-player integer payoff tables sharing one scale factor.
    pub fn scaled_payoffs(&self) -> Option<(Vec<Vec<i128>>, i128)> {
        let scale = common_denominator(self.payoffs.iter().flatten())?;
        let tables = self
            .payoffs
            .iter()
            .map(|row| row.iter().map(|v| scaled(v, scale)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some((tables, scale))
    }
}

fn check_shape(action_sets: &[Vec<String>]) -> Result<(), SchemaError> {
    if action_sets.len() < 2 {
        return Err(SchemaError::TooFewPlayers(action_sets.len()));
    }
    for (player, set) in action_sets.iter().enumerate() {
        if set.len() < 2 {
            return Err(SchemaError::TooFewActions { player, count: set.len() });
        }
        for (i, a) in set.iter().enumerate() {
            if set[..i].contains(a) {
                return Err(SchemaError::DuplicateLabel(a.clone()));
            }
        }
    }
    Ok(())
}

fn strides(action_sets: &[Vec<String>]) -> Vec<usize> {
    let mut s = vec![1; action_sets.len()];
    for i in (0..action_sets.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * action_sets[i + 1].len();
    }
    s
}

fn index(strides: &[usize], profile: &[usize]) -> usize {
    strides.iter().zip(profile).map(|(s, a)| s * a).sum()
}

fn unindex(action_sets: &[Vec<String>], mut at: usize) -> Vec<usize> {
    let mut p = vec![0; action_sets.len()];
    for i in (0..action_sets.len()).rev() {
        let m = action_sets[i].len();
        p[i] = at % m;
        at /= m;
    }
    p
}

fn profile_label(action_sets: &[Vec<String>], player: usize, profile: &[usize]) -> String {
    let parts: Vec<&str> = profile
        .iter()
        .enumerate()
        .map(|(i, &a)| action_sets[i][a].as_str())
        .collect();
    format!("u{}({})", player + 1, parts.join(","))
}
