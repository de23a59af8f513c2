use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::tree::{GameTree, NodeSpec};
use super::validate::{ordered_children, validate, ValidationReport};
use crate::error::Error;
use crate::field::Rational;

/// Index of a node in preorder (root is 0, children in action order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

/// Index of an information set, ordered by the preorder position of its
/// first member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfoSetId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    /// `children[k]` follows action `k` of the information set.
    Decision { infoset: InfoSetId, children: Vec<NodeId> },
    Chance { labels: Vec<String>, probs: Vec<Rational>, children: Vec<NodeId> },
    Terminal { payoffs: Vec<Rational> },
}

impl Node {
    pub fn children(&self) -> &[NodeId] {
        match self {
            Node::Decision { children, .. } | Node::Chance { children, .. } => children,
            Node::Terminal { .. } => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InformationSet {
    pub name: String,
    pub player: usize,
    pub actions: Vec<String>,
    /// Member decision nodes in preorder.
    pub members: Vec<NodeId>,
}

/// A (partial or terminal) history: the node it ends at and the action
/// labels leading there from the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct History {
    pub node: NodeId,
    pub path: Vec<String>,
}

impl fmt::Display for History {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "{}", self.path.join("·"))
        }
    }
}

/// A validated finite extensive-form game with perfect recall.
///
/// Construction runs [`validate`] and refuses any game with a violation, so
/// every other module can rely on tree shape, exact chance distributions and
/// perfect recall.
#[derive(Debug, Clone)]
pub struct Game {
    tree: GameTree,
    players: usize,
    nodes: Vec<Node>,
    names: Vec<String>,
    parent: Vec<Option<(NodeId, usize)>>,
    depth: Vec<usize>,
    infosets: Vec<InformationSet>,
    by_player: Vec<Vec<InfoSetId>>,
    terminals: Vec<NodeId>,
    heights: Vec<usize>,
    node_index: HashMap<String, NodeId>,
    infoset_index: HashMap<String, InfoSetId>,
}

impl Game {
    pub fn new(tree: GameTree) -> Result<Self, Error> {
        let report = validate(&tree);
        if let Some(issue) = report.first() {
            return Err(Error::InvalidGame(issue.to_string()));
        }
        Ok(Self::build(tree))
    }

    /// Validates and returns the report alongside the game when it is ok.
    pub fn with_report(tree: GameTree) -> (ValidationReport, Option<Game>) {
        let report = validate(&tree);
        let game = report.is_ok().then(|| Self::build(tree));
        (report, game)
    }

    fn build(tree: GameTree) -> Game {
        // preorder numbering
        let mut names = Vec::new();
        let mut stack = vec![tree.root.clone()];
        while let Some(n) = stack.pop() {
            let spec = &tree.nodes[&n];
            for child in ordered_children(&tree, spec).into_iter().rev() {
                stack.push(child.clone());
            }
            names.push(n);
        }
        let node_index: HashMap<String, NodeId> =
            names.iter().enumerate().map(|(k, n)| (n.clone(), NodeId(k))).collect();

        let mut infoset_index: HashMap<String, InfoSetId> = HashMap::new();
        let mut infosets: Vec<InformationSet> = Vec::new();
        let mut nodes = Vec::with_capacity(names.len());
        for name in &names {
            let node = match &tree.nodes[name] {
                NodeSpec::Decision { infoset, children, .. } => {
                    let spec = &tree.infosets[infoset];
                    let id = *infoset_index.entry(infoset.clone()).or_insert_with(|| {
                        infosets.push(InformationSet {
                            name: infoset.clone(),
                            player: spec.player,
                            actions: spec.actions.clone(),
                            members: Vec::new(),
                        });
                        InfoSetId(infosets.len() - 1)
                    });
                    infosets[id.0].members.push(node_index[name]);
                    Node::Decision {
                        infoset: id,
                        children: spec.actions.iter().map(|a| node_index[&children[a]]).collect(),
                    }
                }
                NodeSpec::Chance { dist, children } => Node::Chance {
                    labels: dist.keys().cloned().collect(),
                    probs: dist.values().cloned().collect(),
                    children: children.values().map(|c| node_index[c]).collect(),
                },
                NodeSpec::Terminal { payoffs } => Node::Terminal { payoffs: payoffs.clone() },
            };
            nodes.push(node);
        }

        let mut parent = vec![None; nodes.len()];
        let mut depth = vec![0; nodes.len()];
        for (k, node) in nodes.iter().enumerate() {
            for (a, c) in node.children().iter().enumerate() {
                parent[c.0] = Some((NodeId(k), a));
                depth[c.0] = depth[k] + 1;
            }
        }
        let terminals = (0..nodes.len())
            .filter(|&k| matches!(nodes[k], Node::Terminal { .. }))
            .map(NodeId)
            .collect();
        let mut by_player = vec![Vec::new(); tree.players + 1];
        for (k, is) in infosets.iter().enumerate() {
            by_player[is.player].push(InfoSetId(k));
        }

        let players = tree.players;
        let mut game = Game {
            tree,
            players,
            nodes,
            names,
            parent,
            depth,
            infosets,
            by_player,
            terminals,
            heights: Vec::new(),
            node_index,
            infoset_index,
        };
        game.heights = game.compute_heights();
        game
    }

    pub fn tree(&self) -> &GameTree {
        &self.tree
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_name(&self, id: NodeId) -> &str {
        &self.names[id.0]
    }

    pub fn node_id(&self, name: &str) -> Result<NodeId, Error> {
        self.node_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::Unknown { kind: "node", name: name.to_string() })
    }

    pub fn parent(&self, id: NodeId) -> Option<(NodeId, usize)> {
        self.parent[id.0]
    }

    pub fn depth(&self, id: NodeId) -> usize {
        self.depth[id.0]
    }

    pub fn infosets(&self) -> &[InformationSet] {
        &self.infosets
    }

    pub fn infoset(&self, id: InfoSetId) -> &InformationSet {
        &self.infosets[id.0]
    }

    pub fn infoset_ids(&self) -> impl Iterator<Item = InfoSetId> {
        (0..self.infosets.len()).map(InfoSetId)
    }

    pub fn infoset_id(&self, name: &str) -> Result<InfoSetId, Error> {
        self.infoset_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::Unknown { kind: "information set", name: name.to_string() })
    }

    /// Information sets owned by `player`, in id order.
    pub fn player_infosets(&self, player: usize) -> &[InfoSetId] {
        self.by_player.get(player).map_or(&[], Vec::as_slice)
    }

    pub fn action_index(&self, infoset: InfoSetId, action: &str) -> Result<usize, Error> {
        self.infoset(infoset)
            .actions
            .iter()
            .position(|a| a == action)
            .ok_or_else(|| Error::Unknown { kind: "action", name: action.to_string() })
    }

    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    pub fn payoff(&self, terminal: NodeId, player: usize) -> &Rational {
        match &self.nodes[terminal.0] {
            Node::Terminal { payoffs } => &payoffs[player - 1],
            _ => panic!("node {} is not terminal", self.names[terminal.0]),
        }
    }

    /// Label of the `k`-th action at a non-terminal node.
    pub fn action_label(&self, node: NodeId, k: usize) -> &str {
        match &self.nodes[node.0] {
            Node::Decision { infoset, .. } => &self.infosets[infoset.0].actions[k],
            Node::Chance { labels, .. } => &labels[k],
            Node::Terminal { .. } => panic!("terminal node has no actions"),
        }
    }

    /// `(node, action index)` pairs from the root down to, excluding, `node`.
    pub fn path_steps(&self, node: NodeId) -> Vec<(NodeId, usize)> {
        let mut steps = Vec::with_capacity(self.depth[node.0]);
        let mut cur = node;
        while let Some((p, a)) = self.parent[cur.0] {
            steps.push((p, a));
            cur = p;
        }
        steps.reverse();
        steps
    }

    pub fn history(&self, node: NodeId) -> History {
        History {
            node,
            path: self
                .path_steps(node)
                .into_iter()
                .map(|(n, a)| self.action_label(n, a).to_string())
                .collect(),
        }
    }

    /// Replays an action path from the root.
    pub fn node_at_path<S: AsRef<str>>(&self, path: &[S]) -> Result<NodeId, Error> {
        let mut cur = self.root();
        for label in path {
            let label = label.as_ref();
            let k = match &self.nodes[cur.0] {
                Node::Decision { infoset, .. } => self.infosets[infoset.0].actions.iter().position(|a| a == label),
                Node::Chance { labels, .. } => labels.iter().position(|a| a == label),
                Node::Terminal { .. } => None,
            }
            .ok_or_else(|| Error::Unknown { kind: "history", name: path_string(path) })?;
            cur = self.nodes[cur.0].children()[k];
        }
        Ok(cur)
    }

    /// Every terminal history, in preorder.
    pub fn terminal_histories(&self) -> Vec<History> {
        self.terminals.iter().map(|&z| self.history(z)).collect()
    }

    /// All prefixes of `h` from the empty history down to `h` itself.
    pub fn prefixes(&self, h: &History) -> Vec<History> {
        let mut out = vec![self.history(self.root())];
        out.extend(self.path_steps(h.node).into_iter().skip(1).map(|(n, _)| self.history(n)));
        if h.node != self.root() {
            out.push(self.history(h.node));
        }
        out
    }

    /// True iff `a` is a (non-strict) prefix of `b`.
    pub fn is_prefix(&self, a: NodeId, b: NodeId) -> bool {
        let da = self.depth[a.0];
        let mut cur = b;
        while self.depth[cur.0] > da {
            cur = self.parent[cur.0].expect("non-root has a parent").0;
        }
        cur == a
    }

    /// The information set `I ≻ J` relation: every member of `i` has a strict
    /// ancestor in `j`. Both sets must belong to the same player.
    pub fn succ(&self, i: InfoSetId, j: InfoSetId) -> Result<bool, Error> {
        let (a, b) = (self.infoset(i), self.infoset(j));
        if a.player != b.player {
            return Err(Error::DifferentPlayers(a.name.clone(), b.name.clone()));
        }
        Ok(self.succ_unchecked(i, j))
    }

    fn succ_unchecked(&self, i: InfoSetId, j: InfoSetId) -> bool {
        i != j
            && self.infoset(i).members.iter().all(|&h| {
                self.infoset(j)
                    .members
                    .iter()
                    .any(|&g| g != h && self.is_prefix(g, h))
            })
    }

    /// 1 for information sets with no own set below them, otherwise one more
    /// than the largest height below.
    pub fn height(&self, i: InfoSetId) -> usize {
        self.heights[i.0]
    }

    /// Largest height among `player`'s information sets (0 if none).
    pub fn max_height(&self, player: usize) -> usize {
        self.player_infosets(player).iter().map(|&i| self.height(i)).max().unwrap_or(0)
    }

    fn compute_heights(&self) -> Vec<usize> {
        let mut heights = vec![0; self.infosets.len()];
        // J ≻ I forces min-depth(J) > min-depth(I), so deepest-first order
        // sees every set below I before I itself
        let min_depth = |i: &InfoSetId| self.infoset(*i).members.iter().map(|m| self.depth[m.0]).min();
        let mut order: Vec<InfoSetId> = self.infoset_ids().collect();
        order.sort_by_key(|i| std::cmp::Reverse(min_depth(i)));
        for &i in &order {
            let player = self.infoset(i).player;
            heights[i.0] = self
                .player_infosets(player)
                .iter()
                .filter(|&&j| self.succ_unchecked(j, i))
                .map(|&j| heights[j.0] + 1)
                .max()
                .unwrap_or(1);
        }
        heights
    }
}

fn path_string<S: AsRef<str>>(path: &[S]) -> String {
    path.iter().map(|s| s.as_ref()).collect::<Vec<_>>().join("·")
}
