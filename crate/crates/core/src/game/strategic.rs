use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::field::Rational;

/// A pure strategy profile: one strategy index per player (player `i` at
/// position `i - 1`).
pub type PureProfile = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayoffEntry {
    pub profile: Vec<String>,
    pub payoffs: Vec<Rational>,
}

/// File form of a strategic game: strategy labels per player and a dense
/// payoff table keyed by label tuples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategicSpec {
    pub players: usize,
    pub strategies: Vec<Vec<String>>,
    pub payoff_table: Vec<PayoffEntry>,
}

/// A finite strategic-form game with rational payoffs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategicGame {
    strategies: Vec<Vec<String>>,
    /// Row-major over profiles, player 1 slowest.
    payoffs: Vec<Vec<Rational>>,
    label_index: HashMap<String, (usize, usize)>,
}

impl StrategicGame {
    pub fn new(spec: &StrategicSpec) -> Result<Self, Error> {
        let invalid = |m: String| Err(Error::InvalidGame(m));
        if spec.players == 0 || spec.strategies.len() != spec.players {
            return invalid(format!(
                "{} strategy lists for {} players",
                spec.strategies.len(),
                spec.players
            ));
        }
        let mut label_index = HashMap::new();
        for (i, labels) in spec.strategies.iter().enumerate() {
            if labels.is_empty() {
                return invalid(format!("player {} has no strategies", i + 1));
            }
            for (k, l) in labels.iter().enumerate() {
                if label_index.insert(l.clone(), (i + 1, k)).is_some() {
                    return invalid(format!("strategy label '{l}' is used twice"));
                }
            }
        }
        let mut game = StrategicGame {
            strategies: spec.strategies.clone(),
            payoffs: Vec::new(),
            label_index,
        };
        let total: usize = game.strategies.iter().map(Vec::len).product();
        let mut table: Vec<Option<Vec<Rational>>> = vec![None; total];
        for entry in &spec.payoff_table {
            let profile = game.parse_profile(&entry.profile)?;
            if entry.payoffs.len() != spec.players {
                return invalid(format!("profile {:?} has {} payoffs", entry.profile, entry.payoffs.len()));
            }
            let slot = &mut table[game.flat_index(&profile)];
            if slot.is_some() {
                return invalid(format!("profile {:?} listed twice", entry.profile));
            }
            *slot = Some(entry.payoffs.clone());
        }
        if let Some(k) = table.iter().position(Option::is_none) {
            let missing = game.labels(&game.unflatten(k));
            return invalid(format!("payoff table misses profile {missing:?}"));
        }
        game.payoffs = table.into_iter().map(Option::unwrap).collect();
        Ok(game)
    }

    /// Builds from per-player labels and a payoff closure over index profiles.
    pub fn from_fn(strategies: &[&[&str]], mut payoff: impl FnMut(&[usize]) -> Vec<Rational>) -> Result<Self, Error> {
        let strategies: Vec<Vec<String>> =
            strategies.iter().map(|s| s.iter().map(|x| x.to_string()).collect()).collect();
        let sizes: Vec<usize> = strategies.iter().map(Vec::len).collect();
        let payoff_table = all_profiles(&sizes)
            .into_iter()
            .map(|p| PayoffEntry {
                profile: p.iter().enumerate().map(|(i, &k)| strategies[i][k].clone()).collect(),
                payoffs: payoff(&p),
            })
            .collect();
        StrategicGame::new(&StrategicSpec { players: strategies.len(), strategies, payoff_table })
    }

    pub fn to_spec(&self) -> StrategicSpec {
        StrategicSpec {
            players: self.players(),
            strategies: self.strategies.clone(),
            payoff_table: self
                .profiles()
                .into_iter()
                .map(|p| PayoffEntry { profile: self.labels(&p), payoffs: self.payoffs[self.flat_index(&p)].clone() })
                .collect(),
        }
    }

    pub fn players(&self) -> usize {
        self.strategies.len()
    }

    /// Labels of player `i`'s strategies (players are 1-based).
    pub fn strategies(&self, player: usize) -> &[String] {
        &self.strategies[player - 1]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.strategies.iter().map(Vec::len).collect()
    }

    pub fn utility(&self, profile: &[usize], player: usize) -> &Rational {
        &self.payoffs[self.flat_index(profile)][player - 1]
    }

    /// All pure profiles in lexicographic order.
    pub fn profiles(&self) -> Vec<PureProfile> {
        all_profiles(&self.sizes())
    }

    pub fn flat_index(&self, profile: &[usize]) -> usize {
        profile
            .iter()
            .zip(&self.strategies)
            .fold(0, |acc, (&k, s)| acc * s.len() + k)
    }

    pub fn unflatten(&self, mut k: usize) -> PureProfile {
        let mut out = vec![0; self.players()];
        for i in (0..self.players()).rev() {
            let n = self.strategies[i].len();
            out[i] = k % n;
            k /= n;
        }
        out
    }

    pub fn labels(&self, profile: &[usize]) -> Vec<String> {
        profile.iter().enumerate().map(|(i, &k)| self.strategies[i][k].clone()).collect()
    }

    /// `(player, index)` of a strategy label.
    pub fn strategy_index(&self, label: &str) -> Result<(usize, usize), Error> {
        self.label_index
            .get(label)
            .copied()
            .ok_or_else(|| Error::Unknown { kind: "strategy", name: label.to_string() })
    }

    pub fn parse_profile<S: AsRef<str>>(&self, labels: &[S]) -> Result<PureProfile, Error> {
        if labels.len() != self.players() {
            return Err(Error::Parse(format!("profile needs {} labels", self.players())));
        }
        labels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let (p, k) = self.strategy_index(l.as_ref())?;
                if p != i + 1 {
                    return Err(Error::Parse(format!(
                        "'{}' belongs to player {p}, not player {}",
                        l.as_ref(),
                        i + 1
                    )));
                }
                Ok(k)
            })
            .collect()
    }

    /// Distinct payoff values of `player`; used by tests for range bounds.
    pub fn payoff_values(&self, player: usize) -> BTreeSet<Rational> {
        self.payoffs.iter().map(|p| p[player - 1].clone()).collect()
    }
}

/// Cartesian product of index ranges, lexicographic.
pub fn all_profiles(sizes: &[usize]) -> Vec<PureProfile> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    out
}
