use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::asymmetric::AsymmetricGame;
use super::multiset::{multiset_count, multiset_rank, multisets};
use crate::error::SchemaError;
use crate::rational::{common_denominator, scaled, Rational};

/// One row of a symmetric payoff table: the payoff to `own` against the
/// opponent multiset `opponents` (any order).
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffEntry {
    pub own: String,
    pub opponents: Vec<String>,
    pub value: Rational,
}

impl PayoffEntry {
    pub fn new(own: &str, opponents: &[&str], value: Rational) -> Self {
        Self {
            own: own.into(),
            opponents: opponents.iter().map(|s| (*s).into()).collect(),
            value,
        }
    }
}

/// A symmetric `n`-player game. Payoffs are keyed by the opponent multiset,
/// so lookups are invariant to the order of opponents.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricGame {
    players: usize,
    actions: Vec<String>,
    profiles: usize,
    payoffs: Vec<Rational>,
}

impl SymmetricGame {
    pub fn new(
        players: usize,
        actions: Vec<String>,
        entries: impl IntoIterator<Item = PayoffEntry>,
    ) -> Result<Self, SchemaError> {
        check_shape(players, &actions)?;
        let m = actions.len();
        let profiles = multiset_count(m, players - 1);
        let index: BTreeMap<&str, usize> =
            actions.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
        let lookup = |label: &str| {
            index
                .get(label)
                .copied()
                .ok_or_else(|| SchemaError::UnknownAction(label.into()))
        };

        let mut slots: Vec<Option<Rational>> = alloc::vec![None; m * profiles];
        for entry in entries {
            let own = lookup(&entry.own)?;
            if entry.opponents.len() != players - 1 {
                return Err(SchemaError::OpponentCount {
                    entry: entry_label_str(&entry.own, entry.opponents.iter().map(String::as_str)),
                    got: entry.opponents.len(),
                    expected: players - 1,
                });
            }
            let mut opp = entry
                .opponents
                .iter()
                .map(|o| lookup(o))
                .collect::<Result<Vec<_>, _>>()?;
            opp.sort_unstable();
            let slot = &mut slots[own * profiles + multiset_rank(m, &opp)];
            if slot.is_some() {
                return Err(SchemaError::DuplicateEntry(entry_label(&actions, own, &opp)));
            }
            *slot = Some(entry.value);
        }

        let all = multisets(m, players - 1);
        let missing: Vec<String> = slots
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_none())
            .map(|(i, _)| entry_label(&actions, i / profiles, &all[i % profiles]))
            .collect();
        if !missing.is_empty() {
            return Err(SchemaError::MissingEntries(missing));
        }
        Ok(Self {
            players,
            actions,
            profiles,
            payoffs: slots.into_iter().map(Option::unwrap).collect(),
        })
    }

    /// Builds a game from a payoff rule; `rule` receives the own action and the
    /// sorted opponent multiset.
    pub fn from_fn(
        players: usize,
        actions: Vec<String>,
        mut rule: impl FnMut(usize, &[usize]) -> Rational,
    ) -> Result<Self, SchemaError> {
        check_shape(players, &actions)?;
        let m = actions.len();
        let all = multisets(m, players - 1);
        let payoffs = (0..m)
            .flat_map(|own| all.iter().map(move |opp| (own, opp)))
            .map(|(own, opp)| rule(own, opp))
            .collect();
        Ok(Self { players, actions, profiles: all.len(), payoffs })
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn label(&self, action: usize) -> &str {
        &self.actions[action]
    }

    pub fn action_index(&self, label: &str) -> Option<usize> {
        self.actions.iter().position(|a| a == label)
    }

    /// Number of distinct opponent multisets, `C(m+n-2, n-1)`.
    pub fn opponent_profiles(&self) -> usize {
        self.profiles
    }

    /// Total number of stored payoff entries, `m * C(m+n-2, n-1)`.
    pub fn entry_count(&self) -> usize {
        self.payoffs.len()
    }

    /// Payoff to `own` against `opponents` in any order.
    ///
    /// Panics if an index is out of range or the opponent count is not `n - 1`.
    pub fn payoff(&self, own: usize, opponents: &[usize]) -> Rational {
        assert_eq!(opponents.len(), self.players - 1, "wrong opponent count");
        let mut sorted: Vec<usize> = opponents.to_vec();
        sorted.sort_unstable();
        self.payoff_sorted(own, &sorted)
    }

    /// Payoff lookup for an already sorted opponent multiset.
    pub fn payoff_sorted(&self, own: usize, sorted: &[usize]) -> Rational {
        self.payoffs[own * self.profiles + multiset_rank(self.actions.len(), sorted)]
    }

    /// `u(own, base, ..., base)`.
    pub fn against_all(&self, own: usize, base: usize) -> Rational {
        let opp = alloc::vec![base; self.players - 1];
        self.payoff_sorted(own, &opp)
    }

    /// `u(own, deviant, base, ..., base)`.
    pub fn against_one_deviant(&self, own: usize, deviant: usize, base: usize) -> Rational {
        let mut opp = alloc::vec![base; self.players - 1];
        opp[0] = deviant;
        self.payoff(own, &opp)
    }

    /// All entries as `(own, sorted opponents, value)` in storage order.
    pub fn entries(&self) -> Vec<(usize, Vec<usize>, Rational)> {
        let all = multisets(self.actions.len(), self.players - 1);
        self.payoffs
            .iter()
            .enumerate()
            .map(|(i, v)| (i / self.profiles, all[i % self.profiles].clone(), *v))
            .collect()
    }

    pub fn payoff_values(&self) -> &[Rational] {
        &self.payoffs
    }

    /// `a` is a strict symmetric equilibrium: every deviation against
    /// `(a, ..., a)` pays strictly less.
    pub fn is_strict_equilibrium(&self, a: usize) -> bool {
        let eq = self.against_all(a, a);
        (0..self.num_actions()).all(|b| b == a || self.against_all(b, a) < eq)
    }

    pub fn strict_equilibria(&self) -> Vec<usize> {
        (0..self.num_actions()).filter(|&a| self.is_strict_equilibrium(a)).collect()
    }

    /// Integer payoff table `u * scale` with `scale` the common denominator.
    /// Ordering of totals is unchanged by the scaling.
    pub fn scaled_payoffs(&self) -> Option<(Vec<i128>, i128)> {
        let scale = common_denominator(self.payoffs.iter())?;
        let table = self.payoffs.iter().map(|v| scaled(v, scale)).collect::<Option<Vec<_>>>()?;
        Some((table, scale))
    }

    /// The same game with players numbered: every player has the action set of
    /// this game and `u_i(profile) = u(profile_i, profile_{-i})`.
    pub fn to_asymmetric(&self) -> AsymmetricGame {
        let n = self.players;
        let sets = (0..n)
            .map(|_| self.actions.clone())
            .collect::<Vec<_>>();
        AsymmetricGame::from_fn(sets, |player, profile| {
            let mut opp: Vec<usize> = profile
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != player)
                .map(|(_, &a)| a)
                .collect();
            opp.sort_unstable();
            self.payoff_sorted(profile[player], &opp)
        })
        .expect("symmetric game already validated")
    }

    pub fn entry_label(&self, own: usize, sorted: &[usize]) -> String {
        entry_label(&self.actions, own, sorted)
    }
}

fn check_shape(players: usize, actions: &[String]) -> Result<(), SchemaError> {
    if players < 2 {
        return Err(SchemaError::TooFewPlayers(players));
    }
    if actions.len() < 2 {
        return Err(SchemaError::TooFewActions { player: 0, count: actions.len() });
    }
    for (i, a) in actions.iter().enumerate() {
        if actions[..i].contains(a) {
            return Err(SchemaError::DuplicateLabel(a.clone()));
        }
    }
    Ok(())
}

fn entry_label(actions: &[String], own: usize, sorted: &[usize]) -> String {
    entry_label_str(&actions[own], sorted.iter().map(|&o| actions[o].as_str()))
}

fn entry_label_str<'a>(own: &str, opponents: impl Iterator<Item = &'a str>) -> String {
    let opp: Vec<&str> = opponents.collect();
    format!("({},{{{}}})", own, opp.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::multiset::binomial;
    use crate::rational::{int, ratio};
    use alloc::vec;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| (*s).into()).collect()
    }

    #[test]
    fn builds_pd_from_entries() {
        let g = SymmetricGame::new(
            2,
            labels(&["c", "d"]),
            vec![
                PayoffEntry::new("c", &["c"], int(1)),
                PayoffEntry::new("c", &["d"], ratio(-1, 2)),
                PayoffEntry::new("d", &["c"], ratio(3, 2)),
                PayoffEntry::new("d", &["d"], int(0)),
            ],
        )
        .unwrap();
        assert_eq!(g.payoff(1, &[0]), ratio(3, 2));
        assert!(g.is_strict_equilibrium(1));
        assert!(!g.is_strict_equilibrium(0));
    }

    #[test]
    fn missing_entry_is_named() {
        let err = SymmetricGame::new(
            2,
            labels(&["c", "d"]),
            vec![
                PayoffEntry::new("c", &["c"], int(1)),
                PayoffEntry::new("c", &["d"], int(-1)),
                PayoffEntry::new("d", &["c"], int(2)),
            ],
        )
        .unwrap_err();
        assert_eq!(err, SchemaError::MissingEntries(vec!["(d,{d})".into()]));
    }

    #[test]
    fn duplicate_entry_rejected_regardless_of_order() {
        let err = SymmetricGame::new(
            3,
            labels(&["x", "y"]),
            vec![
                PayoffEntry::new("x", &["x", "y"], int(1)),
                PayoffEntry::new("x", &["y", "x"], int(2)),
            ],
        )
        .unwrap_err();
        assert_eq!(err, SchemaError::DuplicateEntry("(x,{x,y})".into()));
    }

    #[test]
    fn three_player_two_action_needs_six_entries() {
        // m * C(m+n-2, n-1) = 2 * C(3, 2) = 6, and the enumeration agrees.
        assert_eq!(2 * binomial(3, 2), 6);
        let entries: Vec<PayoffEntry> = ["x", "y"]
            .iter()
            .flat_map(|own| {
                [["x", "x"], ["x", "y"], ["y", "y"]]
                    .into_iter()
                    .map(move |opp| PayoffEntry::new(own, &opp, int(opp.len() as i128)))
            })
            .collect();
        assert_eq!(entries.len(), 6);
        let g = SymmetricGame::new(3, labels(&["x", "y"]), entries).unwrap();
        assert_eq!(g.entry_count(), 6);
        assert_eq!(g.opponent_profiles(), 3);
    }

    #[test]
    fn wrong_opponent_count_and_unknown_label() {
        let e = SymmetricGame::new(2, labels(&["a", "b"]), vec![PayoffEntry::new("a", &["a", "b"], int(0))]);
        assert!(matches!(e, Err(SchemaError::OpponentCount { .. })));
        let e = SymmetricGame::new(2, labels(&["a", "b"]), vec![PayoffEntry::new("z", &["a"], int(0))]);
        assert_eq!(e.unwrap_err(), SchemaError::UnknownAction("z".into()));
        assert_eq!(
            SymmetricGame::new(1, labels(&["a", "b"]), vec![]).unwrap_err(),
            SchemaError::TooFewPlayers(1)
        );
    }

    #[test]
    fn to_asymmetric_preserves_payoffs() {
        let g = SymmetricGame::from_fn(3, labels(&["a", "b", "c"]), |own, opp| {
            int((own * 10 + opp[0] * 3 + opp[1]) as i128)
        })
        .unwrap();
        let a = g.to_asymmetric();
        assert_eq!(a.players(), 3);
        for p in a.profiles() {
            for i in 0..3 {
                let opp: Vec<usize> = (0..3).filter(|&j| j != i).map(|j| p[j]).collect();
                assert_eq!(a.payoff(i, &p), g.payoff(p[i], &opp));
            }
        }
    }
}
