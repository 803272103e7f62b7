mod common;

use bep_core::game::named::{asymmetric_hawk_dove, asymmetric_pd, coordination, prisoners_dilemma, public_goods};
use bep_core::linalg::spectral_radius;
use bep_core::rational::{int, ratio};
use bep_core::stability::{
    asymmetric_stability_verdict, certify, condition_check, stability_verdict, support_matrix, Candidate,
    Conclusion, ProbeOutcome, Removal, StabilityVerdict,
};
use bep_core::{PayoffEntry, SymmetricGame};
use common::{small_symmetric_game, two_player_asymmetric_game};
use proptest::prelude::*;

fn matrix(max: u32) -> impl Strategy<Value = Vec<Vec<u32>>> {
    (1usize..=6).prop_flat_map(move |d| prop::collection::vec(prop::collection::vec(0..=max, d), d))
}

/// Mostly zeros so that both outcomes of the removal conditions show up.
fn sparse_matrix() -> impl Strategy<Value = Vec<Vec<u32>>> {
    (1usize..=6).prop_flat_map(|d| {
        prop::collection::vec(prop::collection::vec(prop_oneof![6 => Just(0u32), 1 => Just(1u32), 1 => Just(2u32)], d), d)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn row_and_column_removal_agree(m in prop_oneof![sparse_matrix(), matrix(2)]) {
        let rows = condition_check(&m, Removal::Rows);
        let cols = condition_check(&m, Removal::Columns);
        prop_assert_eq!(rows.holds, cols.holds);
    }

    #[test]
    fn removal_matches_spectral_dichotomy(m in prop_oneof![sparse_matrix(), matrix(4)]) {
        let holds = condition_check(&m, Removal::Rows).holds;
        let rho = spectral_radius(&m);
        if holds {
            prop_assert!(rho < 1e-9, "rho = {}", rho);
        } else {
            prop_assert!(rho >= 1.0 - 1e-9, "rho = {}", rho);
        }
    }

    #[test]
    fn support_shrinks_with_k(game in small_symmetric_game(-6, 6)) {
        for a in game.strict_equilibria() {
            let mats: Vec<_> = (2..=6).map(|k| support_matrix(&game, a, k).unwrap()).collect();
            for pair in mats.windows(2) {
                for (lo, hi) in [(&pair[0].strict, &pair[1].strict), (&pair[0].weak, &pair[1].weak)] {
                    for (r_lo, r_hi) in lo.iter().zip(hi) {
                        for (x, y) in r_lo.iter().zip(r_hi) {
                            prop_assert!(x >= y);
                        }
                    }
                }
            }
            for m in &mats {
                for (rs, rw) in m.strict.iter().zip(&m.weak) {
                    prop_assert!(rs.iter().zip(rw).all(|(s, w)| s <= w && *w <= 2));
                }
            }
        }
    }

    #[test]
    fn verdict_invariants(game in two_player_asymmetric_game(-6, 6), k in 2usize..=4) {
        for profile in game.profiles().filter(|p| game.is_strict_equilibrium(p)) {
            let c = certify(&Candidate::asymmetric(&game, &profile), k).unwrap();
            match c.conclusion {
                Conclusion::Stable => prop_assert!(c.condition_ii.holds && c.condition_i.holds),
                Conclusion::Unstable => prop_assert!(!c.condition_i.holds),
                Conclusion::Indeterminate => prop_assert!(c.condition_i.holds && !c.condition_ii.holds),
            }
        }
    }

    #[test]
    fn one_population_matches_many(game in small_symmetric_game(-6, 6), k in 2usize..=4) {
        let asym = game.to_asymmetric();
        for a in game.strict_equilibria() {
            let profile = vec![a; game.players()];
            let one = certify(&Candidate::symmetric(&game, a), k).unwrap().conclusion;
            let many = certify(&Candidate::asymmetric(&asym, &profile), k).unwrap().conclusion;
            prop_assert_eq!(one, many);
        }
    }
}

fn spoiling_example() -> SymmetricGame {
    let rows = [("a*", [8, 9, 3]), ("a'", [7, 5, 2]), ("a''", [6, 4, 1])];
    let cols = ["a*", "a'", "a''"];
    let entries = rows
        .iter()
        .flat_map(|(own, vals)| cols.iter().zip(vals).map(move |(col, v)| PayoffEntry::new(own, &[col], int(*v))));
    SymmetricGame::new(2, cols.iter().map(|s| s.to_string()).collect(), entries).unwrap()
}

fn agrees_with_probe(v: &StabilityVerdict) {
    let probe = v.epsilon_probe.as_ref().expect("probe requested");
    match v.conclusion {
        Conclusion::Stable => assert_eq!(probe.outcome, ProbeOutcome::Returned, "{}", v.candidate),
        Conclusion::Unstable => {
            assert_eq!(probe.outcome, ProbeOutcome::Escaped, "{}", v.candidate);
            assert!(probe.max_distance >= 10.0 * probe.initial_distance);
        }
        Conclusion::Indeterminate => {}
    }
}

#[test]
fn verdicts_agree_with_dynamics_on_examples() {
    let pd = |g, l| prisoners_dilemma(g, l).unwrap();
    let coord = coordination(2, &[int(3), int(2), int(1)]).unwrap();
    let pg = public_goods(3, &[int(0), ratio(1, 2), ratio(9, 5), int(2)]).unwrap();
    let cases: Vec<(SymmetricGame, usize, usize, Conclusion)> = vec![
        (pd(ratio(1, 2), ratio(1, 4)), 1, 3, Conclusion::Unstable),
        (pd(ratio(1, 2), ratio(1, 2)), 1, 2, Conclusion::Unstable),
        (pd(ratio(1, 2), int(2)), 1, 2, Conclusion::Stable),
        (coord.clone(), 0, 2, Conclusion::Stable),
        (coord.clone(), 1, 2, Conclusion::Stable),
        (coord, 2, 2, Conclusion::Unstable),
        (pg.clone(), 1, 2, Conclusion::Unstable),
        (pg, 1, 3, Conclusion::Stable),
        (spoiling_example(), 0, 2, Conclusion::Stable),
    ];
    for (game, a, k, want) in cases {
        let v = stability_verdict(&game, a, k).unwrap();
        assert_eq!(v.conclusion, want, "{} at k={k}", v.candidate);
        agrees_with_probe(&v);
    }
    let apd = asymmetric_pd(int(1), int(1), ratio(2, 5), ratio(3, 2)).unwrap();
    agrees_with_probe(&asymmetric_stability_verdict(&apd, &[1, 1], 2).unwrap());
    let apd = asymmetric_pd(int(1), int(1), ratio(2, 5), ratio(2, 5)).unwrap();
    agrees_with_probe(&asymmetric_stability_verdict(&apd, &[1, 1], 2).unwrap());
    let hd = asymmetric_hawk_dove(ratio(3, 2), ratio(1, 3), ratio(3, 4), ratio(1, 2)).unwrap();
    let v = asymmetric_stability_verdict(&hd, &[0, 1], 2).unwrap();
    assert_eq!(v.conclusion, Conclusion::Unstable);
    agrees_with_probe(&v);
}

#[test]
fn self_spoiling_game_needs_only_condition_one() {
    let g = spoiling_example();
    let c = certify(&Candidate::symmetric(&g, 0), 2).unwrap();
    assert_eq!(c.conclusion, Conclusion::Stable);
    // a'' would support itself by spoiling if the second-best requirement were dropped
    let (star, dpp) = (0, 2);
    assert!(int(2) * g.against_all(dpp, star) > g.against_one_deviant(star, dpp, star) + g.against_all(star, star));
    assert_eq!(c.matrix.strict[1][1], 0);
}
