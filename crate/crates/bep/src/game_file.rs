//! JSON game files.
//!
//! ```json
//! {"kind": "symmetric", "n": 2, "actions": ["c", "d"],
//!  "payoffs": [{"own": "c", "opponents": ["c"], "value": 1},
//!              {"own": "c", "opponents": ["d"], "value": "-1/2"}, ...]}
//! ```
//!
//! Asymmetric files list `action_sets` per player and tag every payoff with
//! its `player`; `opponents` then holds the other players' actions in player
//! order. Values are integers or strings `"p/q"` (decimals accepted).

use std::fs;
use std::path::Path;

use bep_core::game::{AsymmetricEntry, AsymmetricGame, PayoffEntry, SymmetricGame};
use bep_core::rational::{format_rational, parse_rational};
use bep_core::Rational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GameKind {
    Symmetric,
    Asymmetric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalValue {
    Int(i64),
    Text(String),
}

impl RationalValue {
    pub fn parse(&self) -> CliResult<Rational> {
        match self {
            RationalValue::Int(v) => Ok(Rational::from_integer(*v as i128)),
            RationalValue::Text(s) => parse_rational(s).map_err(|e| CliError::Config(e.to_string())),
        }
    }
}

impl From<&Rational> for RationalValue {
    fn from(r: &Rational) -> Self {
        RationalValue::Text(format_rational(r))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayoffRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub player: Option<usize>,
    pub own: String,
    pub opponents: Vec<String>,
    pub value: RationalValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub kind: GameKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actions: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action_sets: Option<Vec<Vec<String>>>,
    pub payoffs: Vec<PayoffRecord>,
}

/// A game of either kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Game {
    Symmetric(SymmetricGame),
    Asymmetric(AsymmetricGame),
}

impl Game {
    pub fn from_file(file: &GameFile) -> CliResult<Self> {
        match file.kind {
            GameKind::Symmetric => {
                let actions = file
                    .actions
                    .clone()
                    .ok_or_else(|| CliError::Config("symmetric game needs `actions`".into()))?;
                let n = file.n.ok_or_else(|| CliError::Config("symmetric game needs `n`".into()))?;
                if file.action_sets.is_some() {
                    return Err(CliError::Config("symmetric game takes `actions`, not `action_sets`".into()));
                }
                let mut entries = Vec::with_capacity(file.payoffs.len());
                for p in &file.payoffs {
                    if p.player.is_some() {
                        return Err(CliError::Config("symmetric payoffs carry no `player`".into()));
                    }
                    let opp: Vec<&str> = p.opponents.iter().map(String::as_str).collect();
                    entries.push(PayoffEntry::new(&p.own, &opp, p.value.parse()?));
                }
                let game = SymmetricGame::new(n, actions, entries).map_err(|e| CliError::Config(e.to_string()))?;
                Ok(Game::Symmetric(game))
            }
            GameKind::Asymmetric => {
                let sets = file
                    .action_sets
                    .clone()
                    .ok_or_else(|| CliError::Config("asymmetric game needs `action_sets`".into()))?;
                if file.actions.is_some() {
                    return Err(CliError::Config("asymmetric game takes `action_sets`, not `actions`".into()));
                }
                if let Some(n) = file.n {
                    if n != sets.len() {
                        return Err(CliError::Config(format!("n = {n} but {} action sets", sets.len())));
                    }
                }
                let mut entries = Vec::with_capacity(file.payoffs.len());
                for p in &file.payoffs {
                    let player =
                        p.player.ok_or_else(|| CliError::Config(format!("payoff for `{}` lacks `player`", p.own)))?;
                    entries.push(AsymmetricEntry {
                        player,
                        own: p.own.clone(),
                        opponents: p.opponents.clone(),
                        value: p.value.parse()?,
                    });
                }
                let game = AsymmetricGame::new(sets, entries).map_err(|e| CliError::Config(e.to_string()))?;
                Ok(Game::Asymmetric(game))
            }
        }
    }

    pub fn to_file(&self) -> GameFile {
        match self {
            Game::Symmetric(g) => {
                let labels = g.actions();
                let payoffs = g
                    .entries()
                    .into_iter()
                    .map(|(own, opp, v)| PayoffRecord {
                        player: None,
                        own: labels[own].clone(),
                        opponents: opp.iter().map(|&a| labels[a].clone()).collect(),
                        value: (&v).into(),
                    })
                    .collect();
                GameFile {
                    kind: GameKind::Symmetric,
                    n: Some(g.players()),
                    actions: Some(labels.to_vec()),
                    action_sets: None,
                    payoffs,
                }
            }
            Game::Asymmetric(g) => {
                let mut payoffs = Vec::new();
                for i in 0..g.players() {
                    for profile in g.profiles() {
                        payoffs.push(PayoffRecord {
                            player: Some(i),
                            own: g.actions(i)[profile[i]].clone(),
                            opponents: (0..g.players())
                                .filter(|&j| j != i)
                                .map(|j| g.actions(j)[profile[j]].clone())
                                .collect(),
                            value: (&g.payoff(i, &profile)).into(),
                        });
                    }
                }
                GameFile {
                    kind: GameKind::Asymmetric,
                    n: Some(g.players()),
                    actions: None,
                    action_sets: Some(g.action_sets().to_vec()),
                    payoffs,
                }
            }
        }
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let file: GameFile =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_file(&file)
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(&self.to_file())?;
        fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(&self.to_file()).expect("game files serialize");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    pub fn blocks(&self) -> Vec<usize> {
        match self {
            Game::Symmetric(g) => vec![g.num_actions()],
            Game::Asymmetric(g) => (0..g.players()).map(|i| g.num_actions(i)).collect(),
        }
    }

    /// Column names for flat states: action labels, prefixed by `p<i>_` for
    /// asymmetric games.
    pub fn column_labels(&self) -> Vec<String> {
        match self {
            Game::Symmetric(g) => g.actions().to_vec(),
            Game::Asymmetric(g) => (0..g.players())
                .flat_map(|i| g.actions(i).iter().map(move |a| format!("p{}_{a}", i + 1)))
                .collect(),
        }
    }
}
