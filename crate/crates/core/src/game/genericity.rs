//! Checks of the genericity properties the support theory relies on.
//!
//! Full genericity quantifies over payoff sums of arbitrarily long profile
//! sequences and has no finite certificate. The report holds the three
//! consequences actually used (strictness, a unique second-best reply, no
//! support inequality holding with equality) plus a bounded search over
//! sequences of at most `l_max` profiles.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::multiset::{multiset_count, multisets};
use super::{AsymmetricGame, SymmetricGame};
use crate::rational::Rational;
use crate::stability::support::Candidate;

pub const DEFAULT_SEQUENCE_BOUND: usize = 2;
/// Largest number of sequences the bounded search enumerates per length.
pub const SEQUENCE_SEARCH_CAP: u128 = 2_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum SequenceOutcome {
    /// No two sequences of equal length up to the bound share a payoff sum
    /// while differing in their sets of own actions.
    Passed,
    Failed { length: usize, first: String, second: String },
    /// The enumeration would exceed [`SEQUENCE_SEARCH_CAP`].
    Skipped { sequences: u128 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceCheck {
    pub l_max: usize,
    pub outcome: SequenceOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenericityReport {
    pub is_strict_equilibrium: bool,
    /// Every player's best reply among non-equilibrium actions is unique.
    pub unique_second_best: bool,
    /// No support inequality holds with equality and strict and weak support
    /// coincide for every pair.
    pub no_weak_support_ties: bool,
    /// One line per support comparison that holds with equality.
    pub ties: Vec<String>,
    pub sequence_check: Option<SequenceCheck>,
}

impl GenericityReport {
    /// The three flags together; enough for strict and weak support to agree.
    pub fn effectively_generic(&self) -> bool {
        self.is_strict_equilibrium && self.unique_second_best && self.no_weak_support_ties
    }
}

pub fn check_effective_genericity(game: &SymmetricGame, candidate: usize, k: usize) -> GenericityReport {
    check_effective_genericity_bounded(game, candidate, k, DEFAULT_SEQUENCE_BOUND)
}

pub fn check_effective_genericity_bounded(
    game: &SymmetricGame,
    candidate: usize,
    k: usize,
    l_max: usize,
) -> GenericityReport {
    let mut report = candidate_report(&Candidate::symmetric(game, candidate), k);
    if l_max > 0 {
        let items: Vec<(usize, Rational, String)> = game
            .entries()
            .into_iter()
            .map(|(own, opp, v)| (own, v, game.entry_label(own, &opp)))
            .collect();
        report.sequence_check = Some(SequenceCheck { l_max, outcome: sequence_search(&items, l_max) });
    }
    report
}

pub fn check_effective_genericity_asymmetric(game: &AsymmetricGame, profile: &[usize], k: usize) -> GenericityReport {
    check_effective_genericity_asymmetric_bounded(game, profile, k, DEFAULT_SEQUENCE_BOUND)
}

/// Asymmetric analog: the sequence search runs separately for each player,
/// comparing that player's payoff sums and own-action sets.
pub fn check_effective_genericity_asymmetric_bounded(
    game: &AsymmetricGame,
    profile: &[usize],
    k: usize,
    l_max: usize,
) -> GenericityReport {
    let mut report = candidate_report(&Candidate::asymmetric(game, profile), k);
    if l_max > 0 {
        let mut outcome = SequenceOutcome::Passed;
        for i in 0..game.players() {
            let items: Vec<(usize, Rational, String)> = game
                .profiles()
                .map(|p| (p[i], game.payoff(i, &p), format!("u{}{}", i + 1, game.profile_label(&p))))
                .collect();
            match sequence_search(&items, l_max) {
                SequenceOutcome::Passed => {}
                other => {
                    outcome = other;
                    break;
                }
            }
        }
        report.sequence_check = Some(SequenceCheck { l_max, outcome });
    }
    report
}

fn candidate_report(c: &Candidate<'_>, k: usize) -> GenericityReport {
    let strict = c.validate_indices() && c.is_strict();
    if !strict {
        return GenericityReport {
            is_strict_equilibrium: false,
            unique_second_best: false,
            no_weak_support_ties: false,
            ties: Vec::new(),
            sequence_check: None,
        };
    }
    let elements = c.elements();
    let mut unique_second_best = true;
    for player in 0..c.players() {
        let payoffs: Vec<Rational> = elements
            .iter()
            .filter(|e| e.player == player)
            .map(|&e| c.deviation_payoff(e))
            .collect();
        if let Some(best) = payoffs.iter().max() {
            if payoffs.iter().filter(|v| *v == best).count() > 1 {
                unique_second_best = false;
            }
        }
        if c.is_symmetric() {
            break;
        }
    }
    let mut ties = Vec::new();
    let mut no_ties = true;
    for &supported in &elements {
        for &supporter in &elements {
            let Some(ineq) = c.inequalities(supporter, supported, k) else { continue };
            let (a, b) = (c.element_label(supporter), c.element_label(supported));
            if ineq.direct.is_eq() {
                ties.push(format!("{a} directly supports {b} with equality"));
            }
            if ineq.spoil.is_eq() {
                ties.push(format!("{a} supports {b} by spoiling with equality"));
            }
            if ineq.has_equality() || ineq.strict_kind() != ineq.weak_kind() {
                no_ties = false;
            }
        }
    }
    GenericityReport {
        is_strict_equilibrium: true,
        unique_second_best,
        no_weak_support_ties: no_ties,
        ties,
        sequence_check: None,
    }
}

/// Looks for two multisets of `items` of equal size `<= l_max` with equal
/// payoff sums but different own-action sets.
fn sequence_search(items: &[(usize, Rational, String)], l_max: usize) -> SequenceOutcome {
    for length in 1..=l_max {
        let count = multiset_count(items.len(), length) as u128;
        if count > SEQUENCE_SEARCH_CAP {
            return SequenceOutcome::Skipped { sequences: count };
        }
        let mut seen: BTreeMap<Rational, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for seq in multisets(items.len(), length) {
            let sum: Rational = seq.iter().map(|&i| items[i].1).sum();
            let mut own: Vec<usize> = seq.iter().map(|&i| items[i].0).collect();
            own.sort_unstable();
            own.dedup();
            match seen.get(&sum) {
                None => {
                    seen.insert(sum, (own, seq));
                }
                Some((other_own, other_seq)) if *other_own != own => {
                    let show = |s: &[usize]| {
                        let parts: Vec<&str> = s.iter().map(|&i| items[i].2.as_str()).collect();
                        format!("[{}]", parts.join(", "))
                    };
                    return SequenceOutcome::Failed { length, first: show(other_seq), second: show(&seq) };
                }
                Some(_) => {}
            }
        }
    }
    SequenceOutcome::Passed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::named::{asymmetric_pd, coordination, prisoners_dilemma};
    use crate::rational::{int, ratio};

    #[test]
    fn pd_half_is_effectively_generic() {
        let g = prisoners_dilemma(ratio(1, 2), ratio(1, 2)).unwrap();
        let r = check_effective_genericity(&g, 1, 2);
        assert!(r.is_strict_equilibrium && r.unique_second_best && r.no_weak_support_ties);
        assert!(r.effectively_generic());
    }

    #[test]
    fn borderline_pd_has_tie() {
        let g = prisoners_dilemma(int(1), int(1)).unwrap();
        let r = check_effective_genericity(&g, 1, 2);
        assert!(!r.no_weak_support_ties);
        assert_eq!(r.ties, alloc::vec![String::from("c directly supports c with equality")]);
        // 2 u(c,c) = u(d,c) + u(d,d) with different own-action sets
        assert!(matches!(r.sequence_check.unwrap().outcome, SequenceOutcome::Failed { .. }));
    }

    #[test]
    fn coordination_equality_flagged() {
        let g = coordination(2, &[int(2), int(1)]).unwrap();
        let r = check_effective_genericity(&g, 1, 2);
        assert!(!r.no_weak_support_ties);
        assert!(r.ties.iter().any(|t| t.contains("a1 directly supports a1")));
    }

    #[test]
    fn non_strict_candidate() {
        let g = prisoners_dilemma(int(1), int(1)).unwrap();
        let r = check_effective_genericity(&g, 0, 2);
        assert!(!r.is_strict_equilibrium);
        assert!(!r.effectively_generic());
    }

    #[test]
    fn asymmetric_report() {
        let g = asymmetric_pd(int(1), int(1), ratio(2, 5), ratio(3, 2)).unwrap();
        let r = check_effective_genericity_asymmetric(&g, &[1, 1], 2);
        assert!(r.effectively_generic());
        let r = check_effective_genericity_asymmetric(&g, &[1, 1], 3);
        assert!(r.effectively_generic());
        let g = asymmetric_pd(int(1), int(1), ratio(1, 2), ratio(3, 2)).unwrap();
        let r = check_effective_genericity_asymmetric(&g, &[1, 1], 3);
        assert!(!r.no_weak_support_ties);
    }
}
