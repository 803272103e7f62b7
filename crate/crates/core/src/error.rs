use alloc::string::String;
use alloc::vec::Vec;

/// Problems with the payoff entries handed to a game constructor.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemaError {
    #[error("a game needs at least 2 players, got {0}")]
    TooFewPlayers(usize),
    #[error("player {player} needs at least 2 actions, got {count}")]
    TooFewActions { player: usize, count: usize },
    #[error("duplicate action label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("unknown player {0}")]
    UnknownPlayer(usize),
    #[error("entry {entry} lists {got} opponents, expected {expected}")]
    OpponentCount { entry: String, got: usize, expected: usize },
    #[error("duplicate payoff entry {0}")]
    DuplicateEntry(String),
    #[error("missing payoff entries: {}", .0.join(", "))]
    MissingEntries(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BepError {
    #[error("schema error: {0}")]
    Schema(#[from] SchemaError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid population state: {0}")]
    InvalidState(String),
    #[error("unknown action index {0}")]
    UnknownAction(usize),
    #[error(
        "joint enumeration needs {tuples} outcome tuples, above the cap of {cap}; \
         use the finite-population simulator instead"
    )]
    ResourceCap { tuples: u128, cap: u64 },
    #[error("`{0}` is not a strict equilibrium")]
    NotStrictEquilibrium(String),
    #[error(
        "(g, l) = ({g}, {l}) lies on a region boundary for k = {k}; behaviour there \
         depends on the tie-breaking rule"
    )]
    RegionBoundary { g: String, l: String, k: usize },
    #[error("state left the simplex or became non-finite")]
    NonFiniteState,
    #[error("finite-difference step {h} leaves the simplex")]
    StepLeavesSimplex { h: f64 },
    #[error("state is not a rest point (residual {residual:e})")]
    NotRestPoint { residual: f64 },
    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("trajectories do not share a time range")]
    DisjointTimeRanges,
    #[error("exact arithmetic overflowed")]
    Overflow,
}

pub type Result<T, E = BepError> = core::result::Result<T, E>;
