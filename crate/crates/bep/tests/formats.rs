use bep::game_file::{Game, GameFile};
use bep::manifest::RunManifest;
use bep::numfmt::same_to_12_digits;
use bep::pd_scan::{classify_pair, read_rows, write_rows};
use bep::trajectory::{read_trajectory, write_trajectory};
use bep::verdict::VerdictRecord;
use bep_core::dynamics::{TerminalReason, Trajectory};
use bep_core::game::{AsymmetricGame, SymmetricGame};
use bep_core::rational::{int, ratio};
use bep_core::stability::{asymmetric_stability_verdict, stability_verdict};
use bep_core::Rational;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i128..50, 1i128..12).prop_map(|(n, d)| ratio(n, d))
}

fn symmetric_game() -> impl Strategy<Value = SymmetricGame> {
    (2usize..4, 2usize..4).prop_flat_map(|(n, m)| {
        let len = m * bep_core::game::multiset::multiset_count(m, n - 1);
        proptest::collection::vec(rational(), len).prop_map(move |vals| {
            let mut it = vals.into_iter();
            SymmetricGame::from_fn(n, (0..m).map(|a| format!("a{a}")).collect(), |_, _| it.next().unwrap())
                .unwrap()
        })
    })
}

fn asymmetric_game() -> impl Strategy<Value = AsymmetricGame> {
    (2usize..4, 2usize..4).prop_flat_map(|(m1, m2)| {
        proptest::collection::vec(rational(), 2 * m1 * m2).prop_map(move |vals| {
            let mut it = vals.into_iter();
            let sets = vec![
                (0..m1).map(|a| format!("x{a}")).collect(),
                (0..m2).map(|a| format!("y{a}")).collect(),
            ];
            AsymmetricGame::from_fn(sets, |_, _| it.next().unwrap()).unwrap()
        })
    })
}

fn trajectory() -> impl Strategy<Value = Trajectory> {
    (1usize..4, 2usize..4, 1usize..20).prop_flat_map(|(pops, m, len)| {
        (
            proptest::collection::vec(0.0f64..1e3, len),
            proptest::collection::vec(proptest::collection::vec(1e-9f64..1.0, pops * m), len),
        )
            .prop_map(move |(times, states)| Trajectory {
                blocks: vec![m; pops],
                times,
                states,
                terminal_reason: TerminalReason::Horizon,
            })
    })
}

proptest! {
    #[test]
    fn symmetric_game_files_round_trip(g in symmetric_game()) {
        let game = Game::Symmetric(g);
        let text = serde_json::to_string_pretty(&game.to_file()).unwrap();
        let file: GameFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(Game::from_file(&file).unwrap(), game);
    }

    #[test]
    fn asymmetric_game_files_round_trip(g in asymmetric_game()) {
        let game = Game::Asymmetric(g);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.json");
        game.save(&path).unwrap();
        let back = Game::load(&path).unwrap();
        prop_assert_eq!(back.hash(), game.hash());
        prop_assert_eq!(back, game);
    }

    #[test]
    fn trajectories_round_trip_to_12_digits(traj in trajectory()) {
        let cols: Vec<String> = (0..traj.blocks.iter().sum::<usize>()).map(|i| format!("s{i}")).collect();
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &cols, &traj).unwrap();
        let (back_cols, back) = read_trajectory(buf.as_slice(), &traj.blocks).unwrap();
        prop_assert_eq!(back_cols, cols);
        prop_assert_eq!(back.len(), traj.len());
        for (a, b) in back.times.iter().zip(&traj.times) {
            prop_assert!(same_to_12_digits(*a, *b), "{} vs {}", a, b);
        }
        for (xa, xb) in back.states.iter().zip(&traj.states) {
            for (a, b) in xa.iter().zip(xb) {
                prop_assert!(same_to_12_digits(*a, *b), "{} vs {}", a, b);
            }
        }
    }

    #[test]
    fn scan_rows_round_trip(g in 1i128..40, l in 1i128..40, d in 1i128..10, k in 2usize..4) {
        let row = classify_pair(ratio(g, d), ratio(l, d), k).unwrap();
        let mut buf = Vec::new();
        write_rows(&mut buf, std::slice::from_ref(&row)).unwrap();
        let back = read_rows(buf.as_slice()).unwrap();
        prop_assert_eq!(back, vec![row]);
    }

    #[test]
    fn manifests_round_trip(seed in any::<u64>(), n in 2usize..1_000_000, r in 1u64..1_000_000, dev in proptest::option::of(0.0f64..1.0)) {
        let m = RunManifest {
            seed,
            n_agents: n,
            revisions: r,
            k: 2,
            tie: "priority:d,c".into(),
            game_hash: "ab".repeat(32),
            record_every: 7,
            init: vec![0.25, 0.75],
            terminal_state: vec![0.1, 0.9],
            deviation: dev,
        };
        let text = serde_json::to_string(&m).unwrap();
        prop_assert!(text.contains("\"game-hash\"") && text.contains("\"N\"") && text.contains("\"R\""));
        prop_assert_eq!(serde_json::from_str::<RunManifest>(&text).unwrap(), m);
    }
}

#[test]
fn verdicts_round_trip() {
    let pd = bep_core::game::named::prisoners_dilemma(int(1), ratio(3, 10)).unwrap();
    let hd = bep_core::game::named::asymmetric_hawk_dove(int(1), ratio(1, 2), ratio(2, 5), ratio(1, 3)).unwrap();
    let verdicts = [
        stability_verdict(&pd, 1, 3).unwrap(),
        stability_verdict(&pd, 1, 5).unwrap(),
        asymmetric_stability_verdict(&hd, &[0, 1], 2).unwrap(),
    ];
    for v in &verdicts {
        let record = VerdictRecord::from(v);
        let text = serde_json::to_string(&record).unwrap();
        for key in ["conclusion", "conditionI", "conditionII", "jacobianMaxRealEig", "genericity", "probe"] {
            assert!(text.contains(&format!("\"{key}\"")), "{key} missing");
        }
        assert_eq!(serde_json::from_str::<VerdictRecord>(&text).unwrap(), record);
    }
}
