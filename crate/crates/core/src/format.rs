//! JSON documents for games, profiles, beliefs and models.
//!
//! Internal types index everything by position; the documents here key by
//! player number, information-set name and action label so files stay
//! readable and stable under reordering.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::epistemic::{ExtensiveModel, State, StrategicModel, StrategicState};
use crate::error::Error;
use crate::field::{NonstdNum, Rational};
use crate::game::{Game, GameTree, StrategicGame, StrategicSpec};
use crate::strategy::{BehavioralProfile, CorrelatedDist, MixedProfile};
use crate::valuation::BeliefSystem;

/// A game file, tagged by `"form"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum GameFile {
    Extensive(GameTree),
    Strategic(StrategicSpec),
}

impl GameFile {
    pub fn form(&self) -> &'static str {
        match self {
            GameFile::Extensive(_) => "extensive",
            GameFile::Strategic(_) => "strategic",
        }
    }
}

/// `{player: {infoset: {action: probability}}}`. Omitted actions get 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProfileDoc(pub BTreeMap<usize, BTreeMap<String, BTreeMap<String, NonstdNum>>>);

impl ProfileDoc {
    pub fn from_profile(game: &Game, profile: &BehavioralProfile) -> Self {
        let mut out: BTreeMap<usize, BTreeMap<String, BTreeMap<String, NonstdNum>>> = BTreeMap::new();
        for id in game.infoset_ids() {
            let is = game.infoset(id);
            let dist = is.actions.iter().cloned().zip(profile.dist(id).iter().cloned()).collect();
            out.entry(is.player).or_default().insert(is.name.clone(), dist);
        }
        ProfileDoc(out)
    }

    pub fn to_profile(&self, game: &Game) -> Result<BehavioralProfile, Error> {
        let mut seen = BTreeSet::new();
        let mut dists: Vec<Vec<NonstdNum>> = game.infosets().iter().map(|is| vec![NonstdNum::zero(); is.actions.len()]).collect();
        for (&player, sets) in &self.0 {
            for (name, dist) in sets {
                let id = game.infoset_id(name)?;
                if game.infoset(id).player != player {
                    return Err(Error::WrongPlayer { player, infoset: name.clone() });
                }
                seen.insert(id);
                for (action, p) in dist {
                    let k = game.action_index(id, action)?;
                    dists[id.0][k] = p.clone();
                }
            }
        }
        if let Some(id) = game.infoset_ids().find(|id| !seen.contains(id)) {
            return Err(Error::BadDistribution(format!("no distribution given for '{}'", game.infoset(id).name)));
        }
        BehavioralProfile::new(game, dists)
    }
}

/// `{player: {strategy: probability}}`. Omitted strategies get 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MixedDoc(pub BTreeMap<usize, BTreeMap<String, Rational>>);

impl MixedDoc {
    pub fn from_mixed(game: &StrategicGame, profile: &MixedProfile) -> Self {
        MixedDoc(
            (1..=game.players())
                .map(|i| (i, game.strategies(i).iter().cloned().zip(profile.probs()[i - 1].iter().cloned()).collect()))
                .collect(),
        )
    }

    pub fn to_mixed(&self, game: &StrategicGame) -> Result<MixedProfile, Error> {
        let mut probs: Vec<Vec<Rational>> = game.sizes().into_iter().map(|n| vec![Rational::zero(); n]).collect();
        for (&player, dist) in &self.0 {
            if player == 0 || player > game.players() {
                return Err(Error::Unknown { kind: "player", name: player.to_string() });
            }
            for (label, p) in dist {
                let (owner, k) = game.strategy_index(label)?;
                if owner != player {
                    return Err(Error::WrongPlayer { player, infoset: label.clone() });
                }
                probs[player - 1][k] = p.clone();
            }
        }
        MixedProfile::new(game, probs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelatedEntry {
    pub profile: Vec<String>,
    pub prob: Rational,
}

/// A distribution over pure profiles; unlisted profiles get 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelatedDoc {
    pub distribution: Vec<CorrelatedEntry>,
}

impl CorrelatedDoc {
    /// Lists the positive-probability profiles in lexicographic order.
    pub fn from_dist(game: &StrategicGame, eta: &CorrelatedDist) -> Self {
        let distribution = game
            .profiles()
            .into_iter()
            .zip(eta.probs())
            .filter(|(_, p)| p.is_positive())
            .map(|(s, p)| CorrelatedEntry { profile: game.labels(&s), prob: p.clone() })
            .collect();
        CorrelatedDoc { distribution }
    }

    pub fn to_dist(&self, game: &StrategicGame) -> Result<CorrelatedDist, Error> {
        let entries: Vec<(Vec<String>, Rational)> =
            self.distribution.iter().map(|e| (e.profile.clone(), e.prob.clone())).collect();
        CorrelatedDist::from_entries(game, &entries)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeliefEntry {
    pub history: Vec<String>,
    pub prob: NonstdNum,
}

/// `{infoset: [{history, prob}]}`, members in tree order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BeliefDoc(pub BTreeMap<String, Vec<BeliefEntry>>);

impl BeliefDoc {
    pub fn from_beliefs(game: &Game, mu: &BeliefSystem) -> Self {
        BeliefDoc(
            game.infoset_ids()
                .map(|id| {
                    let is = game.infoset(id);
                    let entries = is
                        .members
                        .iter()
                        .zip(mu.at(id))
                        .map(|(&h, p)| BeliefEntry { history: game.history(h).path, prob: p.clone() })
                        .collect();
                    (is.name.clone(), entries)
                })
                .collect(),
        )
    }

    pub fn to_beliefs(&self, game: &Game) -> Result<BeliefSystem, Error> {
        let mut beliefs: Vec<Vec<NonstdNum>> =
            game.infosets().iter().map(|is| vec![NonstdNum::zero(); is.members.len()]).collect();
        for (name, entries) in &self.0 {
            let id = game.infoset_id(name)?;
            for e in entries {
                let h = game.node_at_path(&e.history)?;
                let pos = game.infoset(id).members.iter().position(|&m| m == h).ok_or_else(|| {
                    Error::BadDistribution(format!("history {} is not in '{name}'", e.history.join(".")))
                })?;
                beliefs[id.0][pos] = e.prob.clone();
            }
        }
        BeliefSystem::new(game, beliefs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensiveStateDoc {
    pub name: String,
    /// Action labels from the root to the state's terminal history.
    pub outcome: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategicStateDoc {
    pub name: String,
    pub profile: Vec<String>,
}

/// A model file. `priors[i]` is player `i + 1`'s prior, aligned with `states`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum ModelDoc {
    Extensive {
        states: Vec<ExtensiveStateDoc>,
        priors: Vec<Vec<NonstdNum>>,
    },
    Strategic {
        states: Vec<StrategicStateDoc>,
        priors: Vec<Vec<NonstdNum>>,
    },
}

impl ModelDoc {
    pub fn from_extensive(game: &Game, model: &ExtensiveModel) -> Self {
        ModelDoc::Extensive {
            states: model
                .states()
                .iter()
                .map(|s| ExtensiveStateDoc { name: s.name.clone(), outcome: game.history(s.outcome).path })
                .collect(),
            priors: model.priors().to_vec(),
        }
    }

    pub fn from_strategic(game: &StrategicGame, model: &StrategicModel) -> Self {
        ModelDoc::Strategic {
            states: model
                .states()
                .iter()
                .map(|s| StrategicStateDoc { name: s.name.clone(), profile: game.labels(&s.profile) })
                .collect(),
            priors: model.priors().to_vec(),
        }
    }

    pub fn to_extensive(&self, game: &Game) -> Result<ExtensiveModel, Error> {
        let ModelDoc::Extensive { states, priors } = self else {
            return Err(Error::FormMismatch { concept: "extensive model".into(), form: "strategic" });
        };
        let states = states
            .iter()
            .map(|s| {
                let outcome = game.node_at_path(&s.outcome)?;
                if !game.terminals().contains(&outcome) {
                    return Err(Error::IncompatibleModel(format!("state '{}' does not end at a terminal node", s.name)));
                }
                Ok(State { name: s.name.clone(), outcome })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        ExtensiveModel::new(game, states, priors.clone())
    }

    pub fn to_strategic(&self, game: &StrategicGame) -> Result<StrategicModel, Error> {
        let ModelDoc::Strategic { states, priors } = self else {
            return Err(Error::FormMismatch { concept: "strategic model".into(), form: "extensive" });
        };
        let states = states
            .iter()
            .map(|s| Ok(StrategicState { name: s.name.clone(), profile: game.parse_profile(&s.profile)? }))
            .collect::<Result<Vec<_>, Error>>()?;
        StrategicModel::new(game, states, priors.clone())
    }
}
