//! Support relations between non-equilibrium actions at a strict equilibrium.

use core::cmp::Ordering;

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dynamics::{AsymmetricDynamic, MeanDynamic, SymmetricDynamic};
use crate::error::{BepError, Result};
use crate::game::{AsymmetricGame, SymmetricGame};
use crate::kernel::TieRule;
use crate::rational::{int, Rational};

/// A strict-equilibrium candidate: an action of a symmetric game (analysed
/// under the one-population dynamic) or a profile of an asymmetric game.
#[derive(Debug, Clone, Copy)]
pub enum Candidate<'a> {
    Symmetric { game: &'a SymmetricGame, action: usize },
    Asymmetric { game: &'a AsymmetricGame, profile: &'a [usize] },
}

/// A non-equilibrium action; `player` is 0 for symmetric games.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    pub player: usize,
    pub action: usize,
}

/// Outcomes of the comparisons behind one support relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupportInequalities {
    /// Supported action's sample with one supporter draw vs the equilibrium sample.
    pub direct: Ordering,
    /// Clean supported sample vs the equilibrium sample with one supporter draw.
    pub spoil: Ordering,
    /// Supported action vs the best other non-equilibrium reply to the equilibrium.
    pub second_best: Ordering,
}

impl SupportInequalities {
    pub fn strict_kind(&self) -> SupportKind {
        SupportKind::from_flags(self.direct.is_gt(), self.spoil.is_gt() && self.second_best.is_gt())
    }

    pub fn weak_kind(&self) -> SupportKind {
        SupportKind::from_flags(self.direct.is_ge(), self.spoil.is_ge() && self.second_best.is_ge())
    }

    /// Either support inequality holds with equality.
    pub fn has_equality(&self) -> bool {
        self.direct.is_eq() || self.spoil.is_eq()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportKind {
    None,
    Direct,
    Spoiling,
    Double,
}

impl SupportKind {
    fn from_flags(direct: bool, spoil: bool) -> Self {
        match (direct, spoil) {
            (false, false) => SupportKind::None,
            (true, false) => SupportKind::Direct,
            (false, true) => SupportKind::Spoiling,
            (true, true) => SupportKind::Double,
        }
    }

    /// Matrix entry: 2 for double support, 1 for single, 0 otherwise.
    pub fn weight(self) -> u32 {
        match self {
            SupportKind::None => 0,
            SupportKind::Direct | SupportKind::Spoiling => 1,
            SupportKind::Double => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strictness {
    Strict,
    /// The strict and weak readings differ: some inequality is an equality.
    WeakOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportRelation {
    pub supporter: Element,
    pub supported: Element,
    pub kind: SupportKind,
    pub strictness: Strictness,
}

impl<'a> Candidate<'a> {
    pub fn symmetric(game: &'a SymmetricGame, action: usize) -> Self {
        Candidate::Symmetric { game, action }
    }

    pub fn asymmetric(game: &'a AsymmetricGame, profile: &'a [usize]) -> Self {
        Candidate::Asymmetric { game, profile }
    }

    pub fn label(&self) -> String {
        match *self {
            Candidate::Symmetric { game, action } => String::from(game.label(action)),
            Candidate::Asymmetric { game, profile } => game.profile_label(profile),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self, Candidate::Symmetric { .. })
    }

    pub(crate) fn validate_indices(&self) -> bool {
        self.validate().is_ok()
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Candidate::Symmetric { game, action } => {
                if action >= game.num_actions() {
                    return Err(BepError::UnknownAction(action));
                }
            }
            Candidate::Asymmetric { game, profile } => {
                if profile.len() != game.players() {
                    return Err(BepError::InvalidParameter(format!(
                        "profile has {} entries for {} players",
                        profile.len(),
                        game.players()
                    )));
                }
                if let Some(&a) = profile.iter().enumerate().find(|&(i, &a)| a >= game.num_actions(i)).map(|(_, a)| a) {
                    return Err(BepError::UnknownAction(a));
                }
            }
        }
        Ok(())
    }

    pub fn is_strict(&self) -> bool {
        match *self {
            Candidate::Symmetric { game, action } => game.is_strict_equilibrium(action),
            Candidate::Asymmetric { game, profile } => game.is_strict_equilibrium(profile),
        }
    }

    /// Validates indices and strictness.
    pub fn require_strict(&self) -> Result<()> {
        self.validate()?;
        if self.is_strict() {
            Ok(())
        } else {
            Err(BepError::NotStrictEquilibrium(self.label()))
        }
    }

    /// Non-equilibrium actions in index order (player-major for profiles).
    pub fn elements(&self) -> Vec<Element> {
        match *self {
            Candidate::Symmetric { game, action } => (0..game.num_actions())
                .filter(|&a| a != action)
                .map(|a| Element { player: 0, action: a })
                .collect(),
            Candidate::Asymmetric { game, profile } => (0..game.players())
                .flat_map(|i| {
                    (0..game.num_actions(i))
                        .filter(move |&a| a != profile[i])
                        .map(move |a| Element { player: i, action: a })
                })
                .collect(),
        }
    }

    pub fn element_label(&self, e: Element) -> String {
        match *self {
            Candidate::Symmetric { game, .. } => String::from(game.label(e.action)),
            Candidate::Asymmetric { game, .. } => format!("p{}:{}", e.player + 1, game.actions(e.player)[e.action]),
        }
    }

    /// Expected number of opponent draws per tested action's sample that can
    /// carry a given non-equilibrium action: `k(n-1)` with one population,
    /// `k` with one population per player.
    pub fn multiplier(&self, k: usize) -> usize {
        match *self {
            Candidate::Symmetric { game, .. } => k * (game.players() - 1),
            Candidate::Asymmetric { .. } => k,
        }
    }

    /// Whether failure of condition I proves instability: the linearization
    /// then has an eigenvalue of at least `multiplier - 1`, positive only if
    /// the multiplier is 2 or more.
    pub fn necessity_available(&self, k: usize) -> bool {
        self.multiplier(k) >= 2
    }

    pub fn players(&self) -> usize {
        match *self {
            Candidate::Symmetric { game, .. } => game.players(),
            Candidate::Asymmetric { game, .. } => game.players(),
        }
    }

    /// Payoff to the player of `e` when it alone deviates to `e.action`.
    pub(crate) fn deviation_payoff(&self, e: Element) -> Rational {
        match *self {
            Candidate::Symmetric { game, action } => game.against_all(e.action, action),
            Candidate::Asymmetric { game, profile } => {
                let mut p = profile.to_vec();
                p[e.player] = e.action;
                game.payoff(e.player, &p)
            }
        }
    }

    fn equilibrium_payoff(&self, player: usize) -> Rational {
        match *self {
            Candidate::Symmetric { game, action } => game.against_all(action, action),
            Candidate::Asymmetric { game, profile } => game.payoff(player, profile),
        }
    }

    /// Exact comparisons for `supporter` supporting `supported`; `None` when
    /// both belong to the same player of an asymmetric game.
    pub fn inequalities(&self, supporter: Element, supported: Element, k: usize) -> Option<SupportInequalities> {
        let kr = int(k as i128);
        let km1 = int(k as i128 - 1);
        let j = supported.player;
        let eq = self.equilibrium_payoff(j);
        let dev = self.deviation_payoff(supported);
        let (with_supporter, spoiled_eq) = match *self {
            Candidate::Symmetric { game, action } => (
                game.against_one_deviant(supported.action, supporter.action, action),
                game.against_one_deviant(action, supporter.action, action),
            ),
            Candidate::Asymmetric { game, profile } => {
                if supporter.player == supported.player {
                    return None;
                }
                let mut both = profile.to_vec();
                both[supporter.player] = supporter.action;
                both[j] = supported.action;
                let mut spoil = profile.to_vec();
                spoil[supporter.player] = supporter.action;
                (game.payoff(j, &both), game.payoff(j, &spoil))
            }
        };
        let direct = (with_supporter + km1 * dev).cmp(&(kr * eq));
        let spoil = (kr * dev).cmp(&(spoiled_eq + km1 * eq));
        let rival = self
            .elements()
            .into_iter()
            .filter(|b| b.player == j && *b != supported)
            .map(|b| self.deviation_payoff(b))
            .max();
        let second_best = rival.map_or(Ordering::Greater, |r| dev.cmp(&r));
        Some(SupportInequalities { direct, spoil, second_best })
    }

    pub fn relation(&self, supporter: Element, supported: Element, k: usize, weak: bool) -> SupportRelation {
        match self.inequalities(supporter, supported, k) {
            None => SupportRelation { supporter, supported, kind: SupportKind::None, strictness: Strictness::Strict },
            Some(ineq) => {
                let (s, w) = (ineq.strict_kind(), ineq.weak_kind());
                SupportRelation {
                    supporter,
                    supported,
                    kind: if weak { w } else { s },
                    strictness: if s == w { Strictness::Strict } else { Strictness::WeakOnly },
                }
            }
        }
    }

    /// Smallest payoff loss from a unilateral deviation (positive when strict).
    pub fn min_deviation_loss(&self) -> Rational {
        self.elements()
            .into_iter()
            .map(|e| self.equilibrium_payoff(e.player) - self.deviation_payoff(e))
            .min()
            .expect("at least one non-equilibrium action")
    }

    /// `(min, max)` over every payoff of the game.
    pub fn payoff_range(&self) -> (Rational, Rational) {
        let values: Vec<Rational> = match *self {
            Candidate::Symmetric { game, .. } => game.payoff_values().to_vec(),
            Candidate::Asymmetric { game, .. } => {
                (0..game.players()).flat_map(|i| game.payoff_values(i).iter().copied()).collect()
            }
        };
        let lo = *values.iter().min().expect("nonempty game");
        let hi = *values.iter().max().expect("nonempty game");
        (lo, hi)
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        match *self {
            Candidate::Symmetric { game, .. } => vec![game.num_actions()],
            Candidate::Asymmetric { game, .. } => (0..game.players()).map(|i| game.num_actions(i)).collect(),
        }
    }

    /// Offset of `e` in the flat state layout of [`Candidate::dynamic`].
    pub fn flat_index(&self, e: Element) -> usize {
        self.block_sizes()[..e.player].iter().sum::<usize>() + e.action
    }

    /// Monomorphic state at the candidate.
    pub fn vertex(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.block_sizes().iter().sum()];
        match *self {
            Candidate::Symmetric { action, .. } => x[action] = 1.0,
            Candidate::Asymmetric { profile, .. } => {
                for (i, &a) in profile.iter().enumerate() {
                    x[self.flat_index(Element { player: i, action: a })] = 1.0;
                }
            }
        }
        x
    }

    pub fn dynamic(&self, k: usize, tie: &TieRule) -> Result<Box<dyn MeanDynamic + 'a>> {
        Ok(match *self {
            Candidate::Symmetric { game, .. } => Box::new(SymmetricDynamic::new(game, k, tie.clone())?),
            Candidate::Asymmetric { game, .. } => Box::new(AsymmetricDynamic::new(game, k, vec![tie.clone()])?),
        })
    }
}

/// Strict support matrix `T` and its weak completion (weak relations
/// counted like strict ones). Row = supported action, column = supporter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportMatrix {
    pub index: Vec<Element>,
    pub labels: Vec<String>,
    pub strict: Vec<Vec<u32>>,
    pub weak: Vec<Vec<u32>>,
}

impl SupportMatrix {
    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// The strict matrix, or the weak completion when `weak`.
    pub fn entries(&self, weak: bool) -> &[Vec<u32>] {
        if weak {
            &self.weak
        } else {
            &self.strict
        }
    }
}

pub fn candidate_support_matrix(candidate: &Candidate<'_>, k: usize) -> Result<SupportMatrix> {
    candidate.require_strict()?;
    if k == 0 {
        return Err(BepError::InvalidParameter("k must be at least 1".into()));
    }
    let index = candidate.elements();
    let d = index.len();
    let mut strict = vec![vec![0; d]; d];
    let mut weak = vec![vec![0; d]; d];
    for (r, &supported) in index.iter().enumerate() {
        for (c, &supporter) in index.iter().enumerate() {
            if let Some(ineq) = candidate.inequalities(supporter, supported, k) {
                strict[r][c] = ineq.strict_kind().weight();
                weak[r][c] = ineq.weak_kind().weight();
            }
        }
    }
    let labels = index.iter().map(|&e| candidate.element_label(e)).collect();
    Ok(SupportMatrix { index, labels, strict, weak })
}

/// Relation of `a` supporting `a_prime` against the strict equilibrium
/// action `a_star` of a symmetric game.
pub fn support_relation(
    game: &SymmetricGame,
    a_star: usize,
    a: usize,
    a_prime: usize,
    k: usize,
    weak: bool,
) -> Result<SupportRelation> {
    let c = Candidate::symmetric(game, a_star);
    c.require_strict()?;
    for x in [a, a_prime] {
        if x >= game.num_actions() || x == a_star {
            return Err(BepError::InvalidParameter(format!("action {x} is not a non-equilibrium action")));
        }
    }
    Ok(c.relation(Element { player: 0, action: a }, Element { player: 0, action: a_prime }, k, weak))
}

/// Relation of `supporter` supporting `supported` (each `(player, action)`)
/// against the strict equilibrium `profile` of an asymmetric game.
pub fn asymmetric_support_relation(
    game: &AsymmetricGame,
    profile: &[usize],
    supporter: (usize, usize),
    supported: (usize, usize),
    k: usize,
    weak: bool,
) -> Result<SupportRelation> {
    let c = Candidate::asymmetric(game, profile);
    c.require_strict()?;
    for (i, a) in [supporter, supported] {
        if i >= game.players() || a >= game.num_actions(i) || profile[i] == a {
            return Err(BepError::InvalidParameter(format!(
                "(player {i}, action {a}) is not a non-equilibrium action"
            )));
        }
    }
    if supporter.0 == supported.0 {
        return Err(BepError::InvalidParameter("support is defined between different players".into()));
    }
    let e = |(player, action)| Element { player, action };
    Ok(c.relation(e(supporter), e(supported), k, weak))
}

pub fn support_matrix(game: &SymmetricGame, a_star: usize, k: usize) -> Result<SupportMatrix> {
    candidate_support_matrix(&Candidate::symmetric(game, a_star), k)
}

pub fn asymmetric_support_matrix(game: &AsymmetricGame, profile: &[usize], k: usize) -> Result<SupportMatrix> {
    candidate_support_matrix(&Candidate::asymmetric(game, profile), k)
}
