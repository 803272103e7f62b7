//! Stability of strict equilibria under the best-experienced-payoff dynamic.
//!
//! The verdict is combinatorial: build the support matrix, then run the
//! recursive-removal conditions on it. Numeric cross-checks (spectral radius,
//! finite-difference Jacobian, an optional short ODE probe) are attached but
//! never override the combinatorial conclusion.

pub mod condition;
pub mod support;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

pub use condition::{
    condition_check, spectral_radius_cross_check, spectral_radius_with_multiplier, ConditionResult, Removal,
    SpectralCheck, Witness,
};
pub use support::{
    asymmetric_support_matrix, asymmetric_support_relation, candidate_support_matrix, support_matrix,
    support_relation, Candidate, Element, Strictness, SupportInequalities, SupportKind, SupportMatrix,
    SupportRelation,
};

use crate::dynamics::{distance, integrate_dynamic, numeric_jacobian, DEFAULT_DT, DEFAULT_JACOBIAN_STEP};
use crate::error::{BepError, Result};
use crate::game::genericity::{
    check_effective_genericity_asymmetric_bounded, check_effective_genericity_bounded, GenericityReport,
    DEFAULT_SEQUENCE_BOUND,
};
use crate::game::{AsymmetricGame, SymmetricGame};
use crate::kernel::TieRule;
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Conclusion {
    Stable,
    Unstable,
    Indeterminate,
}

impl Conclusion {
    pub fn as_str(self) -> &'static str {
        match self {
            Conclusion::Stable => "stable",
            Conclusion::Unstable => "unstable",
            Conclusion::Indeterminate => "indeterminate",
        }
    }
}

/// Combinatorial part of a verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub k: usize,
    pub conclusion: Conclusion,
    pub matrix: SupportMatrix,
    /// Row removal on the strict matrix.
    pub condition_i: ConditionResult,
    /// Column removal on the strict matrix.
    pub condition_i_prime: ConditionResult,
    /// Row removal on the weak matrix.
    pub condition_ii: ConditionResult,
    /// Column removal on the weak matrix.
    pub condition_ii_prime: ConditionResult,
    pub necessity_available: bool,
}

/// Stable when II holds; unstable when I fails and the failure forces a
/// positive eigenvalue; indeterminate otherwise.
pub fn certify(candidate: &Candidate<'_>, k: usize) -> Result<Certificate> {
    let matrix = candidate_support_matrix(candidate, k)?;
    let condition_i = condition_check(&matrix.strict, Removal::Rows);
    let condition_i_prime = condition_check(&matrix.strict, Removal::Columns);
    let condition_ii = condition_check(&matrix.weak, Removal::Rows);
    let condition_ii_prime = condition_check(&matrix.weak, Removal::Columns);
    let necessity_available = candidate.necessity_available(k);
    let conclusion = if condition_ii.holds {
        Conclusion::Stable
    } else if !condition_i.holds && necessity_available {
        Conclusion::Unstable
    } else {
        Conclusion::Indeterminate
    };
    Ok(Certificate {
        k,
        conclusion,
        matrix,
        condition_i,
        condition_i_prime,
        condition_ii,
        condition_ii_prime,
        necessity_available,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeOutcome {
    /// Ended within half the perturbation and never strayed past ten times it.
    Returned,
    /// Reached ten times the perturbation.
    Escaped,
    Inconclusive,
}

impl ProbeOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            ProbeOutcome::Returned => "returned",
            ProbeOutcome::Escaped => "escaped",
            ProbeOutcome::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub epsilon: f64,
    pub horizon: f64,
    /// Labels of the perturbed non-equilibrium actions.
    pub perturbed: Vec<String>,
    pub outcome: ProbeOutcome,
    pub initial_distance: f64,
    pub final_distance: f64,
    pub max_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerdictOptions {
    pub probe: bool,
    pub epsilon: f64,
    pub probe_horizon: f64,
    pub dt: f64,
    pub jacobian_step: f64,
    pub tie: TieRule,
    pub sequence_bound: usize,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        VerdictOptions {
            probe: true,
            epsilon: 1e-3,
            probe_horizon: 100.0,
            dt: DEFAULT_DT,
            jacobian_step: DEFAULT_JACOBIAN_STEP,
            tie: TieRule::Uniform,
            sequence_bound: DEFAULT_SEQUENCE_BOUND,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityVerdict {
    pub candidate: String,
    pub k: usize,
    pub conclusion: Conclusion,
    pub matrix: SupportMatrix,
    pub condition_i: ConditionResult,
    pub condition_i_prime: ConditionResult,
    pub condition_ii: ConditionResult,
    pub condition_ii_prime: ConditionResult,
    pub necessity_available: bool,
    pub genericity: GenericityReport,
    pub spectral: SpectralCheck,
    /// Largest real part among eigenvalues of the finite-difference Jacobian
    /// at the equilibrium vertex.
    pub jacobian_eigen_max_real: f64,
    pub epsilon_probe: Option<ProbeResult>,
    pub notes: Vec<String>,
}

pub fn stability_verdict(game: &SymmetricGame, a_star: usize, k: usize) -> Result<StabilityVerdict> {
    stability_verdict_with(game, a_star, k, &VerdictOptions::default())
}

pub fn stability_verdict_with(
    game: &SymmetricGame,
    a_star: usize,
    k: usize,
    opts: &VerdictOptions,
) -> Result<StabilityVerdict> {
    let c = Candidate::symmetric(game, a_star);
    c.require_strict()?;
    let genericity = check_effective_genericity_bounded(game, a_star, k, opts.sequence_bound);
    candidate_verdict(&c, k, genericity, opts)
}

pub fn asymmetric_stability_verdict(game: &AsymmetricGame, profile: &[usize], k: usize) -> Result<StabilityVerdict> {
    asymmetric_stability_verdict_with(game, profile, k, &VerdictOptions::default())
}

pub fn asymmetric_stability_verdict_with(
    game: &AsymmetricGame,
    profile: &[usize],
    k: usize,
    opts: &VerdictOptions,
) -> Result<StabilityVerdict> {
    let c = Candidate::asymmetric(game, profile);
    c.require_strict()?;
    let genericity = check_effective_genericity_asymmetric_bounded(game, profile, k, opts.sequence_bound);
    candidate_verdict(&c, k, genericity, opts)
}

fn candidate_verdict(
    c: &Candidate<'_>,
    k: usize,
    genericity: GenericityReport,
    opts: &VerdictOptions,
) -> Result<StabilityVerdict> {
    let cert = certify(c, k)?;
    let spectral = spectral_radius_with_multiplier(&cert.matrix.strict, c.multiplier(k));
    let dynamic = c.dynamic(k, &opts.tie)?;
    let vertex = c.vertex();
    let jacobian = numeric_jacobian(dynamic.as_ref(), &vertex, opts.jacobian_step)?;
    let jacobian_eigen_max_real = if jacobian.index.is_empty() { f64::NEG_INFINITY } else { jacobian.max_real_eigenvalue() };

    let mut notes = Vec::new();
    if !genericity.effectively_generic() {
        notes.push(String::from("game is not effectively generic at this equilibrium; strict and weak support may differ"));
    }
    if !genericity.ties.is_empty() {
        notes.push(String::from(
            "a support inequality holds with equality: the outcome there is sensitive to how ties between equal sample totals are broken",
        ));
    }
    for t in &genericity.ties {
        notes.push(t.clone());
    }
    if cert.condition_i.holds != cert.condition_i_prime.holds || cert.condition_ii.holds != cert.condition_ii_prime.holds {
        notes.push(String::from("row and column removal disagree"));
    }
    if !cert.condition_i.holds && !cert.necessity_available {
        notes.push(format!(
            "condition I fails but each sample carries only {} opponent draw(s); the linearization need not be unstable",
            c.multiplier(k)
        ));
    }

    let epsilon_probe = if opts.probe {
        let set: Vec<usize> = match cert.conclusion {
            Conclusion::Stable => (0..cert.matrix.len()).collect(),
            Conclusion::Unstable => cert.condition_i.stuck_set().map(<[usize]>::to_vec).unwrap_or_default(),
            Conclusion::Indeterminate => cert.condition_ii.stuck_set().map(<[usize]>::to_vec).unwrap_or_default(),
        };
        if set.is_empty() {
            None
        } else {
            let elements: Vec<Element> = set.iter().map(|&i| cert.matrix.index[i]).collect();
            Some(epsilon_probe(c, k, &elements, opts)?)
        }
    } else {
        None
    };

    Ok(StabilityVerdict {
        candidate: c.label(),
        k,
        conclusion: cert.conclusion,
        matrix: cert.matrix,
        condition_i: cert.condition_i,
        condition_i_prime: cert.condition_i_prime,
        condition_ii: cert.condition_ii,
        condition_ii_prime: cert.condition_ii_prime,
        necessity_available: cert.necessity_available,
        genericity,
        spectral,
        jacobian_eigen_max_real,
        epsilon_probe,
        notes,
    })
}

/// Integrates from the vertex with weight `epsilon` moved, in each block that
/// owns a perturbed action, uniformly onto that block's perturbed actions.
pub fn epsilon_probe(c: &Candidate<'_>, k: usize, perturbed: &[Element], opts: &VerdictOptions) -> Result<ProbeResult> {
    let eps = opts.epsilon;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(BepError::InvalidParameter(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    if perturbed.is_empty() {
        return Err(BepError::InvalidParameter("probe needs at least one perturbed action".into()));
    }
    let vertex = c.vertex();
    let mut x0 = vertex.clone();
    for player in 0..c.players() {
        let mine: Vec<Element> = perturbed.iter().copied().filter(|e| e.player == player).collect();
        if mine.is_empty() {
            continue;
        }
        let eq = c.flat_index(equilibrium_element(c, player));
        x0[eq] = 1.0 - eps;
        for &e in &mine {
            x0[c.flat_index(e)] += eps / mine.len() as f64;
        }
    }
    let dynamic = c.dynamic(k, &opts.tie)?;
    let traj = integrate_dynamic(dynamic.as_ref(), &x0, opts.probe_horizon, opts.dt)?;
    let initial_distance = distance(&x0, &vertex);
    let max_distance = traj.states.iter().map(|s| distance(s, &vertex)).fold(0.0, f64::max);
    let final_distance = distance(traj.terminal_state(), &vertex);
    let outcome = if max_distance >= 10.0 * eps {
        ProbeOutcome::Escaped
    } else if final_distance < 0.5 * eps {
        ProbeOutcome::Returned
    } else {
        ProbeOutcome::Inconclusive
    };
    Ok(ProbeResult {
        epsilon: eps,
        horizon: opts.probe_horizon,
        perturbed: perturbed.iter().map(|&e| c.element_label(e)).collect(),
        outcome,
        initial_distance,
        final_distance,
        max_distance,
    })
}

fn equilibrium_element(c: &Candidate<'_>, player: usize) -> Element {
    match *c {
        Candidate::Symmetric { action, .. } => Element { player: 0, action },
        Candidate::Asymmetric { profile, .. } => Element { player, action: profile[player] },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KThreshold {
    /// Smallest `k >= 2` certified stable.
    pub k0: usize,
    /// Smallest `k >= 2` at which no support inequality can hold, even weakly.
    pub k_bar: usize,
    /// Combinatorial conclusion for each `k` in `2..=k_bar`.
    pub by_k: Vec<(usize, Conclusion)>,
    /// Stable at some `k` implies stable at every larger scanned `k`.
    pub monotone: bool,
    pub indeterminate: Vec<usize>,
}

/// Smallest `k >= 2` with `k * (smallest deviation loss) > (payoff range)`.
pub fn k_bar(candidate: &Candidate<'_>) -> Result<usize> {
    candidate.require_strict()?;
    let loss = candidate.min_deviation_loss();
    let (lo, hi) = candidate.payoff_range();
    let span = hi - lo;
    let q: Rational = span / loss;
    let floor = q.floor().to_integer();
    let k = usize::try_from(floor + 1).map_err(|_| BepError::Overflow)?;
    debug_assert!(int(k as i128) * loss > span);
    Ok(k.max(2))
}

pub fn candidate_k_threshold(candidate: &Candidate<'_>) -> Result<KThreshold> {
    let k_bar = k_bar(candidate)?;
    let mut by_k = Vec::with_capacity(k_bar - 1);
    for k in 2..=k_bar {
        by_k.push((k, certify(candidate, k)?.conclusion));
    }
    let k0 = by_k
        .iter()
        .find(|(_, c)| *c == Conclusion::Stable)
        .map(|&(k, _)| k)
        .expect("every support inequality fails at k_bar");
    let monotone = by_k.iter().filter(|(k, _)| *k >= k0).all(|(_, c)| *c == Conclusion::Stable);
    let indeterminate = by_k.iter().filter(|(_, c)| *c == Conclusion::Indeterminate).map(|&(k, _)| k).collect();
    Ok(KThreshold { k0, k_bar, by_k, monotone, indeterminate })
}

pub fn k_threshold(game: &SymmetricGame, a_star: usize) -> Result<KThreshold> {
    candidate_k_threshold(&Candidate::symmetric(game, a_star))
}

pub fn asymmetric_k_threshold(game: &AsymmetricGame, profile: &[usize]) -> Result<KThreshold> {
    candidate_k_threshold(&Candidate::asymmetric(game, profile))
}
