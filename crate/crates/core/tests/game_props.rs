mod common;

use bep_core::game::named::{asymmetric_hawk_dove, asymmetric_pd, coordination, prisoners_dilemma, public_goods};
use bep_core::rational::{int, ratio};
use bep_core::Rational;
use common::symmetric_game;
use proptest::prelude::*;

proptest! {
    #[test]
    fn payoff_ignores_opponent_order(
        game in (2usize..=3, 2usize..=4).prop_flat_map(|(m, n)| symmetric_game(m, n, -5, 5)),
        seed in any::<u64>(),
    ) {
        let m = game.num_actions();
        let n = game.players();
        let mut opp: Vec<usize> = (0..n - 1).map(|j| ((seed >> (4 * j)) as usize) % m).collect();
        for own in 0..m {
            let base = game.payoff(own, &opp);
            for _ in 0..n {
                opp.rotate_left(1);
                prop_assert_eq!(game.payoff(own, &opp), base);
                opp.reverse();
                prop_assert_eq!(game.payoff(own, &opp), base);
            }
        }
    }

    #[test]
    fn pd_matches_its_table(gn in 1i128..40, ln in 1i128..40) {
        let (g, l) = (ratio(gn, 10), ratio(ln, 10));
        let game = prisoners_dilemma(g, l).unwrap();
        prop_assert_eq!(game.payoff(0, &[0]), int(1));
        prop_assert_eq!(game.payoff(0, &[1]), -l);
        prop_assert_eq!(game.payoff(1, &[0]), int(1) + g);
        prop_assert_eq!(game.payoff(1, &[1]), int(0));
    }

    #[test]
    fn asymmetric_families_match_their_tables(a in 1i128..20, b in 1i128..20, c in 1i128..10, d in 1i128..10) {
        let (g1, g2, l1, l2) = (ratio(a, 10), ratio(b, 10), ratio(c, 10), ratio(d, 10));
        let pd = asymmetric_pd(g1, g2, l1, l2).unwrap();
        let hd = asymmetric_hawk_dove(g1, g2, l1, l2).unwrap();
        let one = int(1);
        let zero = int(0);
        let pd_table = [([0, 0], [one, one]), ([0, 1], [-l1, one + g2]), ([1, 0], [one + g1, -l2]), ([1, 1], [zero, zero])];
        let hd_table = [([0, 0], [one, one]), ([0, 1], [l1, one + g2]), ([1, 0], [one + g1, l2]), ([1, 1], [zero, zero])];
        for (profile, values) in pd_table {
            prop_assert_eq!(pd.payoff(0, &profile), values[0]);
            prop_assert_eq!(pd.payoff(1, &profile), values[1]);
        }
        for (profile, values) in hd_table {
            prop_assert_eq!(hd.payoff(0, &profile), values[0]);
            prop_assert_eq!(hd.payoff(1, &profile), values[1]);
        }
    }

    #[test]
    fn public_goods_matches_its_rule(n in 2usize..=4, steps in prop::collection::vec(0i128..10, 4)) {
        // phi(1) < 1, then nondecreasing
        let mut phi: Vec<Rational> = vec![int(0), ratio(steps[0] % 9 + 1, 10)];
        for j in 2..=n {
            let next = phi[j - 1] + ratio(steps[j - 1], 5);
            phi.push(next);
        }
        let game = public_goods(n, &phi).unwrap();
        for own in 0..2 {
            for contributors in 0..n {
                let opp: Vec<usize> = (0..n - 1).map(|j| if j < contributors { 0 } else { 1 }).collect();
                let want = if own == 0 { phi[contributors + 1] - int(1) } else { phi[contributors] };
                prop_assert_eq!(game.payoff(own, &opp), want);
            }
        }
    }

    #[test]
    fn coordination_matches_its_rule(n in 2usize..=3, mut u in prop::collection::vec(1i128..10, 2..=4)) {
        u.sort_unstable_by(|a, b| b.cmp(a));
        let utilities: Vec<Rational> = u.iter().map(|&x| int(x)).collect();
        let game = coordination(n, &utilities).unwrap();
        let m = utilities.len();
        for (own, &u_own) in utilities.iter().enumerate() {
            for code in 0..m.pow(n as u32 - 1) {
                let opp: Vec<usize> = (0..n - 1).map(|j| code / m.pow(j as u32) % m).collect();
                let want = if opp.iter().all(|&b| b == own) { u_own } else { int(0) };
                prop_assert_eq!(game.payoff(own, &opp), want);
            }
        }
    }

    #[test]
    fn symmetric_to_asymmetric_preserves_payoffs(game in (2usize..=3, 2usize..=3).prop_flat_map(|(m, n)| symmetric_game(m, n, -5, 5))) {
        let asym = game.to_asymmetric();
        for profile in asym.profiles() {
            for i in 0..game.players() {
                let opp: Vec<usize> = profile.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &a)| a).collect();
                prop_assert_eq!(asym.payoff(i, &profile), game.payoff(profile[i], &opp));
            }
        }
    }
}
