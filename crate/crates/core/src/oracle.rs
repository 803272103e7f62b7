//! Exhaustive reference for [`crate::kernel::best_experienced_probabilities`].
//!
//! Enumerates every ordered sequence of opponent draws (one block of `n - 1`
//! opponents per trial, `k` trials per action, all actions tested) and sums
//! the probability of each sequence onto its winning action. Exponential;
//! meant for cross-checking on tiny games only.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{BepError, Result};
use crate::game::SymmetricGame;
use crate::kernel::{PopulationState, TieRule};
use crate::rational::Rational;

/// Largest number of ordered draw sequences the oracle will enumerate.
pub const ORACLE_CAP: u64 = 10_000_000;

/// Number of ordered draw sequences, `m^(k*m*(n-1))`, saturating.
pub fn brute_force_size(actions: usize, players: usize, k: usize) -> u128 {
    let exp = (k * actions * (players - 1)) as u32;
    (actions as u128).checked_pow(exp).unwrap_or(u128::MAX)
}

pub fn brute_force_w(game: &SymmetricGame, state: &PopulationState, k: usize, tie: &TieRule) -> Result<Vec<f64>> {
    let m = game.num_actions();
    let n = game.players();
    if k == 0 {
        return Err(BepError::InvalidParameter("k must be at least 1".into()));
    }
    if state.len() != m {
        return Err(BepError::InvalidState("state length differs from action count".into()));
    }
    tie.validate(m)?;
    let size = brute_force_size(m, n, k);
    if size > ORACLE_CAP as u128 {
        return Err(BepError::ResourceCap { tuples: size, cap: ORACLE_CAP });
    }

    // One trial = an ordered tuple of n-1 opponent actions, coded in base m.
    let tuples = m.pow((n - 1) as u32);
    let mut tuple_prob = vec![1.0; tuples];
    let mut tuple_pay: Vec<Vec<Rational>> = vec![Vec::with_capacity(tuples); m];
    let mut opp = vec![0usize; n - 1];
    for (code, prob) in tuple_prob.iter_mut().enumerate() {
        let mut c = code;
        for slot in opp.iter_mut() {
            *slot = c % m;
            c /= m;
        }
        *prob = opp.iter().map(|&a| state.get(a)).product();
        for (a, row) in tuple_pay.iter_mut().enumerate() {
            row.push(game.payoff(a, &opp));
        }
    }

    let slots = m * k;
    let mut digits = vec![0usize; slots];
    let mut w = vec![0.0; m];
    let mut winners = Vec::with_capacity(m);
    let mut totals = vec![Rational::default(); m];
    loop {
        let mut p = 1.0;
        for t in totals.iter_mut() {
            *t = Rational::default();
        }
        for (s, &d) in digits.iter().enumerate() {
            let a = s / k;
            p *= tuple_prob[d];
            totals[a] += tuple_pay[a][d];
        }
        if p > 0.0 {
            let best = *totals.iter().max().expect("m >= 2");
            winners.clear();
            winners.extend((0..m).filter(|&a| totals[a] == best));
            tie.split(&winners, p, &mut w);
        }

        let mut s = 0;
        loop {
            if s == slots {
                return Ok(w);
            }
            digits[s] += 1;
            if digits[s] < tuples {
                break;
            }
            digits[s] = 0;
            s += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::named::prisoners_dilemma;
    use crate::rational::{int, ratio};

    #[test]
    fn pd_k1_half() {
        let g = prisoners_dilemma(ratio(1, 2), ratio(1, 2)).unwrap();
        let w = brute_force_w(&g, &PopulationState::uniform(2), 1, &TieRule::Uniform).unwrap();
        assert!((w[0] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn borderline_pd_leading_rate() {
        // l = 1/(k-1) with k = 2: w_c ~ (k/2) * eps for small eps.
        let g = prisoners_dilemma(int(1), int(1)).unwrap();
        let eps = 1e-6;
        let w = brute_force_w(&g, &PopulationState::new(vec![eps, 1.0 - eps]).unwrap(), 2, &TieRule::Uniform).unwrap();
        assert!((w[0] / eps - 1.0).abs() < 1e-4, "{}", w[0] / eps);
    }

    #[test]
    fn cap_enforced() {
        let g = crate::game::named::coordination(3, &[int(3), int(2), int(1)]).unwrap();
        assert_eq!(brute_force_size(3, 3, 3), 3u128.pow(18));
        assert!(matches!(
            brute_force_w(&g, &PopulationState::uniform(3), 3, &TieRule::Uniform),
            Err(BepError::ResourceCap { .. })
        ));
    }
}
