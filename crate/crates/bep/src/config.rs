//! Parsing of command-line values: games, tie rules, initial states, candidates.

use std::path::PathBuf;

use bep_core::game::named::{asymmetric_hawk_dove, asymmetric_pd, coordination, prisoners_dilemma, public_goods};
use bep_core::kernel::TieRule;
use bep_core::rational::parse_rational;
use bep_core::Rational;
use clap::{Args, ValueEnum};

use crate::error::{CliError, CliResult};
use crate::game_file::Game;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NamedGame {
    /// Prisoner's dilemma (`--g`, `--l`).
    Pd,
    /// Public goods (`--n`, `--phi`).
    Pg,
    /// Coordination (`--n`, `--u`).
    Coord,
    /// Asymmetric prisoner's dilemma (`--g1 --g2 --l1 --l2`).
    Apd,
    /// Asymmetric hawk-dove (`--g1 --g2 --l1 --l2`).
    Ahd,
}

/// Where the game comes from: a JSON file or a named family.
#[derive(Debug, Clone, Args)]
pub struct GameArgs {
    /// JSON game file.
    #[arg(long, value_name = "PATH", conflicts_with = "game", required_unless_present = "game")]
    pub game_file: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub game: Option<NamedGame>,
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<String>,
    /// Number of players.
    #[arg(long)]
    pub n: Option<usize>,
    /// Production levels for 0..=n contributors, comma separated.
    #[arg(long)]
    pub phi: Option<String>,
    /// Coordination utilities, comma separated, nonincreasing.
    #[arg(long)]
    pub u: Option<String>,
    #[arg(long)]
    pub g1: Option<String>,
    #[arg(long)]
    pub g2: Option<String>,
    #[arg(long)]
    pub l1: Option<String>,
    #[arg(long)]
    pub l2: Option<String>,
}

fn rational(name: &str, v: &Option<String>) -> CliResult<Rational> {
    let s = v.as_deref().ok_or_else(|| CliError::Config(format!("--{name} is required for this game")))?;
    parse_rational(s).map_err(|e| CliError::Config(format!("--{name}: {e}")))
}

fn rational_list(name: &str, v: &Option<String>) -> CliResult<Vec<Rational>> {
    let s = v.as_deref().ok_or_else(|| CliError::Config(format!("--{name} is required for this game")))?;
    s.split(',')
        .map(|x| parse_rational(x.trim()).map_err(|e| CliError::Config(format!("--{name}: {e}"))))
        .collect()
}

impl GameArgs {
    pub fn load(&self) -> CliResult<Game> {
        if let Some(path) = &self.game_file {
            return Game::load(path);
        }
        let named = self.game.ok_or_else(|| CliError::Config("give --game or --game-file".into()))?;
        Ok(match named {
            NamedGame::Pd => Game::Symmetric(prisoners_dilemma(rational("g", &self.g)?, rational("l", &self.l)?)?),
            NamedGame::Pg => {
                let n = self.n.ok_or_else(|| CliError::Config("--n is required for this game".into()))?;
                Game::Symmetric(public_goods(n, &rational_list("phi", &self.phi)?)?)
            }
            NamedGame::Coord => Game::Symmetric(coordination(self.n.unwrap_or(2), &rational_list("u", &self.u)?)?),
            NamedGame::Apd => Game::Asymmetric(asymmetric_pd(
                rational("g1", &self.g1)?,
                rational("g2", &self.g2)?,
                rational("l1", &self.l1)?,
                rational("l2", &self.l2)?,
            )?),
            NamedGame::Ahd => Game::Asymmetric(asymmetric_hawk_dove(
                rational("g1", &self.g1)?,
                rational("g2", &self.g2)?,
                rational("l1", &self.l1)?,
                rational("l2", &self.l2)?,
            )?),
        })
    }
}

fn parse_one_tie(spec: &str, labels: &[String]) -> CliResult<TieRule> {
    let spec = spec.trim();
    if spec == "uniform" {
        return Ok(TieRule::Uniform);
    }
    let Some(list) = spec.strip_prefix("priority:") else {
        return Err(CliError::Config(format!("tie rule `{spec}` is neither `uniform` nor `priority:<actions>`")));
    };
    let order = list
        .split(',')
        .map(|a| {
            let a = a.trim();
            labels
                .iter()
                .position(|x| x == a)
                .ok_or_else(|| CliError::Config(format!("unknown action `{a}` in tie rule")))
        })
        .collect::<CliResult<Vec<usize>>>()?;
    let rule = TieRule::Priority(order);
    rule.validate(labels.len())?;
    Ok(rule)
}

/// One rule per population. `uniform` or `priority:a,b,...`; asymmetric
/// games take `;`-separated per-player rules, a single rule applying to all.
pub fn parse_ties(spec: &str, game: &Game) -> CliResult<Vec<TieRule>> {
    match game {
        Game::Symmetric(g) => Ok(vec![parse_one_tie(spec, g.actions())?]),
        Game::Asymmetric(g) => {
            let parts: Vec<&str> = spec.split(';').collect();
            let players = g.players();
            if parts.len() == 1 && parts[0].trim() == "uniform" {
                return Ok(vec![TieRule::Uniform; players]);
            }
            if parts.len() != players {
                return Err(CliError::Config(format!("{} tie rules for {players} players", parts.len())));
            }
            parts.iter().enumerate().map(|(i, p)| parse_one_tie(p, g.actions(i))).collect()
        }
    }
}

fn parse_block(text: &str, m: usize) -> CliResult<Vec<f64>> {
    let vals = text
        .split(',')
        .map(|x| {
            let x = x.trim();
            x.parse::<f64>().map_err(|_| CliError::Config(format!("`{x}` in --init is not a number")))
        })
        .collect::<CliResult<Vec<f64>>>()?;
    match vals.len() {
        1 if m == 2 => Ok(vec![vals[0], 1.0 - vals[0]]),
        len if len == m => Ok(vals),
        len => Err(CliError::Config(format!("--init block has {len} entries for {m} actions"))),
    }
}

/// Initial shares per population. A two-action block may be given by the
/// share of its first action; blocks are separated by `;`. `None` gives
/// uniform shares.
pub fn parse_init(spec: Option<&str>, blocks: &[usize]) -> CliResult<Vec<Vec<f64>>> {
    let Some(spec) = spec else {
        return Ok(blocks.iter().map(|&m| vec![1.0 / m as f64; m]).collect());
    };
    let parts: Vec<&str> = spec.split(';').collect();
    if parts.len() != blocks.len() {
        return Err(CliError::Config(format!("--init has {} blocks for {} populations", parts.len(), blocks.len())));
    }
    let out = parts.iter().zip(blocks).map(|(p, &m)| parse_block(p, m)).collect::<CliResult<Vec<_>>>()?;
    for b in &out {
        if b.iter().any(|&x| !(x >= 0.0 && x.is_finite())) || (b.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(CliError::Config(format!("--init block {b:?} is not a distribution")));
        }
    }
    Ok(out)
}

/// The candidate equilibrium: an action label, or one label per player
/// separated by commas. Without a label the unique strict equilibrium is used.
pub fn parse_candidate(spec: Option<&str>, game: &Game) -> CliResult<Vec<usize>> {
    match (spec, game) {
        (Some(s), Game::Symmetric(g)) => g
            .action_index(s.trim())
            .map(|a| vec![a])
            .ok_or_else(|| CliError::Config(format!("unknown action `{s}`"))),
        (Some(s), Game::Asymmetric(g)) => {
            let labels: Vec<&str> = s.split(',').map(str::trim).collect();
            if labels.len() != g.players() {
                return Err(CliError::Config(format!("candidate `{s}` needs {} actions", g.players())));
            }
            g.profile_from_labels(&labels).ok_or_else(|| CliError::Config(format!("unknown actions in `{s}`")))
        }
        (None, game) => {
            let strict: Vec<Vec<usize>> = match game {
                Game::Symmetric(g) => g.strict_equilibria().into_iter().map(|a| vec![a]).collect(),
                Game::Asymmetric(g) => g.profiles().filter(|p| g.is_strict_equilibrium(p)).collect(),
            };
            match strict.len() {
                1 => Ok(strict.into_iter().next().unwrap()),
                0 => Err(CliError::Precondition("the game has no strict equilibrium".into())),
                _ => Err(CliError::Config("the game has several strict equilibria; choose one with --candidate".into())),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use bep_core::rational::{int, ratio};

    #[test]
    fn init_forms() {
        assert_eq!(parse_init(Some("0.9"), &[2]).unwrap(), vec![vec![0.9, 1.0 - 0.9]]);
        assert_eq!(parse_init(Some("0.2,0.3,0.5"), &[3]).unwrap(), vec![vec![0.2, 0.3, 0.5]]);
        assert_eq!(parse_init(Some("0.5;0.25"), &[2, 2]).unwrap(), vec![vec![0.5, 0.5], vec![0.25, 0.75]]);
        assert_eq!(parse_init(None, &[4]).unwrap(), vec![vec![0.25; 4]]);
        assert!(parse_init(Some("0.9"), &[3]).is_err());
        assert!(parse_init(Some("1.2"), &[2]).is_err());
    }

    #[test]
    fn tie_forms() {
        let pd = Game::Symmetric(prisoners_dilemma(ratio(1, 2), ratio(1, 2)).unwrap());
        assert_eq!(parse_ties("uniform", &pd).unwrap(), vec![TieRule::Uniform]);
        assert_eq!(parse_ties("priority:d,c", &pd).unwrap(), vec![TieRule::Priority(vec![1, 0])]);
        assert!(parse_ties("priority:d", &pd).is_err());
        assert!(parse_ties("random", &pd).is_err());
        let apd = Game::Asymmetric(asymmetric_pd(int(1), int(1), ratio(1, 2), ratio(1, 2)).unwrap());
        assert_eq!(parse_ties("uniform", &apd).unwrap().len(), 2);
        assert_eq!(
            parse_ties("priority:c1,d1;uniform", &apd).unwrap(),
            vec![TieRule::Priority(vec![0, 1]), TieRule::Uniform]
        );
    }

    #[test]
    fn candidates() {
        let pd = Game::Symmetric(prisoners_dilemma(ratio(1, 2), ratio(1, 2)).unwrap());
        assert_eq!(parse_candidate(None, &pd).unwrap(), vec![1]);
        assert_eq!(parse_candidate(Some("c"), &pd).unwrap(), vec![0]);
        let apd = Game::Asymmetric(asymmetric_pd(int(1), int(1), ratio(1, 2), ratio(1, 2)).unwrap());
        assert_eq!(parse_candidate(Some("d1,d2"), &apd).unwrap(), vec![1, 1]);
        assert_eq!(parse_candidate(None, &apd).unwrap(), vec![1, 1]);
    }
}
