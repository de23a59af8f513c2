use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::field::Rational;

/// An extensive-form game as written in a game file: a flat map of named
/// nodes plus the information sets they point into. Nothing is checked at
/// this level; see [`super::validate`] and [`super::Game::new`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameTree {
    /// Number of players; players are numbered `1..=players`.
    pub players: usize,
    pub root: String,
    pub infosets: BTreeMap<String, InfoSetSpec>,
    pub nodes: BTreeMap<String, NodeSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InfoSetSpec {
    pub player: usize,
    /// Ordered action labels available at every member.
    pub actions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum NodeSpec {
    Decision {
        player: usize,
        infoset: String,
        children: BTreeMap<String, String>,
    },
    Chance {
        dist: BTreeMap<String, Rational>,
        children: BTreeMap<String, String>,
    },
    Terminal {
        payoffs: Vec<Rational>,
    },
}

/// Fluent construction of a [`GameTree`] in code.
///
/// ```
/// use epicheck::game::TreeBuilder;
/// let tree = TreeBuilder::new(1)
///     .infoset("I", 1, &["L", "R"])
///     .decision("root", "I", &[("L", "zl"), ("R", "zr")])
///     .terminal("zl", [1])
///     .terminal("zr", [0])
///     .build("root");
/// assert!(epicheck::game::validate(&tree).is_ok());
/// ```
#[derive(Debug, Clone)]
pub struct TreeBuilder {
    tree: GameTree,
}

impl TreeBuilder {
    pub fn new(players: usize) -> Self {
        TreeBuilder {
            tree: GameTree {
                players,
                root: String::new(),
                infosets: BTreeMap::new(),
                nodes: BTreeMap::new(),
            },
        }
    }

    pub fn infoset(mut self, name: &str, player: usize, actions: &[&str]) -> Self {
        self.tree.infosets.insert(
            name.to_string(),
            InfoSetSpec { player, actions: actions.iter().map(|a| a.to_string()).collect() },
        );
        self
    }

    /// Adds a decision node; the acting player is taken from the information
    /// set, which must already be declared (otherwise player 0 is recorded
    /// and validation reports it).
    pub fn decision(mut self, name: &str, infoset: &str, children: &[(&str, &str)]) -> Self {
        let player = self.tree.infosets.get(infoset).map_or(0, |i| i.player);
        self.tree.nodes.insert(
            name.to_string(),
            NodeSpec::Decision {
                player,
                infoset: infoset.to_string(),
                children: children.iter().map(|(a, c)| (a.to_string(), c.to_string())).collect(),
            },
        );
        self
    }

    pub fn chance(mut self, name: &str, outcomes: &[(&str, Rational, &str)]) -> Self {
        self.tree.nodes.insert(
            name.to_string(),
            NodeSpec::Chance {
                dist: outcomes.iter().map(|(a, p, _)| (a.to_string(), p.clone())).collect(),
                children: outcomes.iter().map(|(a, _, c)| (a.to_string(), c.to_string())).collect(),
            },
        );
        self
    }

    pub fn terminal<I, R>(mut self, name: &str, payoffs: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: Into<Rational>,
    {
        self.tree.nodes.insert(
            name.to_string(),
            NodeSpec::Terminal { payoffs: payoffs.into_iter().map(Into::into).collect() },
        );
        self
    }

    pub fn build(mut self, root: &str) -> GameTree {
        self.tree.root = root.to_string();
        self.tree
    }
}
