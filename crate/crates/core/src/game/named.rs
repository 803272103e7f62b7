//! Parametric game families used throughout the crate.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{AsymmetricGame, SymmetricGame};
use crate::error::{BepError, Result};
use crate::rational::{format_rational, int, Rational};

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| (*s).into()).collect()
}

fn require_positive(name: &str, v: &Rational) -> Result<()> {
    if *v > Rational::zero() {
        Ok(())
    } else {
        Err(BepError::InvalidParameter(format!("{name} must be positive, got {}", format_rational(v))))
    }
}

/// Two-player prisoner's dilemma with actions `c`, `d`:
///
/// |     | c       | d     |
/// |-----|---------|-------|
/// | c   | 1       | -l    |
/// | d   | 1 + g   | 0     |
pub fn prisoners_dilemma(g: Rational, l: Rational) -> Result<SymmetricGame> {
    require_positive("g", &g)?;
    require_positive("l", &l)?;
    let one = Rational::one();
    let game = SymmetricGame::from_fn(2, labels(&["c", "d"]), |own, opp| match (own, opp[0]) {
        (0, 0) => one,
        (0, _) => -l,
        (_, 0) => one + g,
        _ => Rational::zero(),
    })?;
    Ok(game)
}

/// `n`-player public goods game over actions `c` (contribute) and `nc`.
///
/// `phi[j]` is the amount produced when `j` players contribute; contributors
/// receive `phi(j) - 1`, non-contributors `phi(j)`. Requires `phi` of length
/// `n + 1`, nondecreasing, `phi(0) = 0` and `phi(1) < 1`.
pub fn public_goods(players: usize, phi: &[Rational]) -> Result<SymmetricGame> {
    if players < 2 {
        return Err(BepError::InvalidParameter(format!("public goods needs n >= 2, got {players}")));
    }
    if phi.len() != players + 1 {
        return Err(BepError::InvalidParameter(format!(
            "phi must list phi(0..={players}) ({} values), got {}",
            players + 1,
            phi.len()
        )));
    }
    if !phi[0].is_zero() {
        return Err(BepError::InvalidParameter("phi(0) must be 0".into()));
    }
    if phi.windows(2).any(|w| w[1] < w[0]) {
        return Err(BepError::InvalidParameter("phi must be nondecreasing".into()));
    }
    if phi[1] >= Rational::one() {
        return Err(BepError::InvalidParameter("phi(1) must be below 1".into()));
    }
    let game = SymmetricGame::from_fn(players, labels(&["c", "nc"]), |own, opp| {
        let others = opp.iter().filter(|&&a| a == 0).count();
        if own == 0 {
            phi[others + 1] - Rational::one()
        } else {
            phi[others]
        }
    })?;
    Ok(game)
}

/// `n`-player coordination game with actions `a1..am`: everyone choosing
/// `a_j` pays `u_j`, any mismatch pays 0. Utilities must be positive and
/// sorted in nonincreasing order.
pub fn coordination(players: usize, utilities: &[Rational]) -> Result<SymmetricGame> {
    if players < 2 {
        return Err(BepError::InvalidParameter(format!("coordination needs n >= 2, got {players}")));
    }
    if utilities.len() < 2 {
        return Err(BepError::InvalidParameter("coordination needs at least 2 actions".into()));
    }
    for (i, u) in utilities.iter().enumerate() {
        require_positive(&format!("u{}", i + 1), u)?;
    }
    if utilities.windows(2).any(|w| w[1] > w[0]) {
        return Err(BepError::InvalidParameter("utilities must be sorted u1 >= u2 >= ... ".into()));
    }
    let names: Vec<String> = (1..=utilities.len()).map(|i| format!("a{i}")).collect();
    let game = SymmetricGame::from_fn(players, names, |own, opp| {
        if opp.iter().all(|&a| a == own) {
            utilities[own]
        } else {
            Rational::zero()
        }
    })?;
    Ok(game)
}

/// Asymmetric prisoner's dilemma; actions `c1,d1` and `c2,d2`.
pub fn asymmetric_pd(g1: Rational, g2: Rational, l1: Rational, l2: Rational) -> Result<AsymmetricGame> {
    for (name, v) in [("g1", &g1), ("g2", &g2), ("l1", &l1), ("l2", &l2)] {
        require_positive(name, v)?;
    }
    let one = Rational::one();
    let game = AsymmetricGame::from_fn(
        alloc::vec![labels(&["c1", "d1"]), labels(&["c2", "d2"])],
        |player, p| match (player, p[0], p[1]) {
            (_, 0, 0) => one,
            (_, 1, 1) => Rational::zero(),
            (0, 0, 1) => -l1,
            (0, 1, 0) => one + g1,
            (1, 0, 1) => one + g2,
            (1, 1, 0) => -l2,
            _ => unreachable!(),
        },
    )?;
    Ok(game)
}

/// Asymmetric hawk-dove; actions `D1,H1` and `D2,H2`. Requires
/// `g1, g2 > 0` and `0 < l1, l2 < 1`.
pub fn asymmetric_hawk_dove(
    g1: Rational,
    g2: Rational,
    l1: Rational,
    l2: Rational,
) -> Result<AsymmetricGame> {
    for (name, v) in [("g1", &g1), ("g2", &g2), ("l1", &l1), ("l2", &l2)] {
        require_positive(name, v)?;
    }
    for (name, v) in [("l1", &l1), ("l2", &l2)] {
        if *v >= int(1) {
            return Err(BepError::InvalidParameter(format!("{name} must be below 1")));
        }
    }
    let one = Rational::one();
    let game = AsymmetricGame::from_fn(
        alloc::vec![labels(&["D1", "H1"]), labels(&["D2", "H2"])],
        |player, p| match (player, p[0], p[1]) {
            (_, 0, 0) => one,
            (_, 1, 1) => Rational::zero(),
            (0, 0, 1) => l1,
            (0, 1, 0) => one + g1,
            (1, 0, 1) => one + g2,
            (1, 1, 0) => l2,
            _ => unreachable!(),
        },
    )?;
    Ok(game)
}
