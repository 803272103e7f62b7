#![allow(dead_code)]

use bep_core::rational::int;
use bep_core::{AsymmetricGame, PopulationState, SymmetricGame};
use proptest::prelude::*;

/// Symmetric game on `m` actions and `n` players with integer payoffs in
/// `lo..=hi`, one value per stored entry.
pub fn symmetric_game(m: usize, n: usize, lo: i64, hi: i64) -> impl Strategy<Value = SymmetricGame> {
    let entries = m * bep_core::game::multiset::multiset_count(m, n - 1);
    prop::collection::vec(lo..=hi, entries).prop_map(move |values| {
        let labels = (0..m).map(|a| format!("a{a}")).collect();
        let mut it = values.into_iter();
        SymmetricGame::from_fn(n, labels, |_, _| int(it.next().unwrap() as i128)).unwrap()
    })
}

pub fn small_symmetric_game(lo: i64, hi: i64) -> impl Strategy<Value = SymmetricGame> {
    (2usize..=3, 2usize..=3).prop_flat_map(move |(m, n)| symmetric_game(m, n, lo, hi))
}

pub fn two_player_asymmetric_game(lo: i64, hi: i64) -> impl Strategy<Value = AsymmetricGame> {
    (2usize..=3, 2usize..=3).prop_flat_map(move |(m1, m2)| {
        prop::collection::vec(lo..=hi, 2 * m1 * m2).prop_map(move |values| {
            let sets = vec![
                (0..m1).map(|a| format!("x{a}")).collect(),
                (0..m2).map(|a| format!("y{a}")).collect(),
            ];
            let mut it = values.into_iter();
            AsymmetricGame::from_fn(sets, |_, _| int(it.next().unwrap() as i128)).unwrap()
        })
    })
}

/// Interior state on `m` actions.
pub fn interior_state(m: usize) -> impl Strategy<Value = PopulationState> {
    prop::collection::vec(0.02f64..1.0, m).prop_map(|w| {
        let s: f64 = w.iter().sum();
        PopulationState::new(w.iter().map(|x| x / s).collect()).unwrap()
    })
}

pub fn pd_state(p: f64) -> PopulationState {
    PopulationState::new(vec![p, 1.0 - p]).unwrap()
}
