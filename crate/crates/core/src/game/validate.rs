use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use super::tree::{GameTree, NodeSpec};
use crate::field::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    BadPlayerCount,
    MissingRoot,
    DanglingReference,
    MultipleParents,
    Cycle,
    Unreachable,
    ChanceDistribution,
    PayoffArity,
    ActionMismatch,
    PlayerMismatch,
    UnknownPlayer,
    EmptyInfoSet,
    NestedInfoSet,
    PerfectRecall,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub kind: IssueKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infoset: Option<String>,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.kind)?;
        if let Some(n) = &self.node {
            write!(f, " at node '{n}'")?;
        }
        if let Some(i) = &self.infoset {
            write!(f, " in infoset '{i}'")?;
        }
        write!(f, ": {}", self.message)
    }
}

/// Outcome of [`validate`]. Issues are listed in discovery order, so the
/// first entry localizes the first violation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub nodes: usize,
    pub infosets: usize,
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.ok
    }

    pub fn first(&self) -> Option<&Issue> {
        self.issues.first()
    }
}

struct Checker<'a> {
    tree: &'a GameTree,
    issues: Vec<Issue>,
}

impl Checker<'_> {
    fn push(&mut self, kind: IssueKind, node: Option<&str>, infoset: Option<&str>, message: String) {
        self.issues.push(Issue {
            kind,
            node: node.map(str::to_string),
            infoset: infoset.map(str::to_string),
            message,
        });
    }
}

fn children(spec: &NodeSpec) -> Vec<(&String, &String)> {
    match spec {
        NodeSpec::Decision { children, .. } | NodeSpec::Chance { children, .. } => children.iter().collect(),
        NodeSpec::Terminal { .. } => Vec::new(),
    }
}

/// Checks tree shape, chance distributions, payoff arity, information-set
/// consistency and perfect recall. Pure: the tree is not modified.
pub fn validate(tree: &GameTree) -> ValidationReport {
    let mut c = Checker { tree, issues: Vec::new() };
    if tree.players == 0 {
        c.push(IssueKind::BadPlayerCount, None, None, "a game needs at least one player".into());
    }
    if !tree.nodes.contains_key(&tree.root) {
        c.push(IssueKind::MissingRoot, Some(&tree.root), None, "root node is not defined".into());
        return finish(c);
    }

    check_local(&mut c);
    let Some(order) = check_shape(&mut c) else {
        return finish(c);
    };
    if !c.issues.is_empty() {
        return finish(c);
    }
    check_infosets(&mut c, &order);
    finish(c)
}

fn finish(c: Checker<'_>) -> ValidationReport {
    ValidationReport {
        ok: c.issues.is_empty(),
        nodes: c.tree.nodes.len(),
        infosets: c.tree.infosets.len(),
        issues: c.issues,
    }
}

fn check_local(c: &mut Checker<'_>) {
    let tree = c.tree;
    for (name, is) in &tree.infosets {
        if is.player == 0 || is.player > tree.players {
            c.push(IssueKind::UnknownPlayer, None, Some(name), format!("player {} out of range", is.player));
        }
        let uniq: BTreeSet<_> = is.actions.iter().collect();
        if is.actions.is_empty() || uniq.len() != is.actions.len() {
            c.push(IssueKind::ActionMismatch, None, Some(name), "action list must be nonempty and duplicate-free".into());
        }
    }
    for (name, spec) in &tree.nodes {
        for (action, child) in children(spec) {
            if !tree.nodes.contains_key(child) {
                c.push(
                    IssueKind::DanglingReference,
                    Some(name),
                    None,
                    format!("action '{action}' leads to undefined node '{child}'"),
                );
            }
        }
        match spec {
            NodeSpec::Decision { player, infoset, children } => match tree.infosets.get(infoset) {
                None => c.push(
                    IssueKind::DanglingReference,
                    Some(name),
                    Some(infoset),
                    "information set is not declared".into(),
                ),
                Some(is) => {
                    if is.player != *player {
                        c.push(
                            IssueKind::PlayerMismatch,
                            Some(name),
                            Some(infoset),
                            format!("node says player {player}, information set says player {}", is.player),
                        );
                    }
                    let declared: BTreeSet<&String> = is.actions.iter().collect();
                    let present: BTreeSet<&String> = children.keys().collect();
                    if declared != present {
                        c.push(
                            IssueKind::ActionMismatch,
                            Some(name),
                            Some(infoset),
                            format!("node actions {present:?} differ from information set actions {declared:?}"),
                        );
                    }
                }
            },
            NodeSpec::Chance { dist, children } => {
                let total: Rational = dist.values().sum();
                let keys_match = dist.keys().eq(children.keys());
                if !keys_match || children.is_empty() {
                    c.push(
                        IssueKind::ChanceDistribution,
                        Some(name),
                        None,
                        "chance outcomes and children must have the same nonempty label set".into(),
                    );
                } else if dist.values().any(|p| !p.is_positive()) || !total.is_one() {
                    c.push(
                        IssueKind::ChanceDistribution,
                        Some(name),
                        None,
                        format!("probabilities must be positive and sum to 1 (sum is {total})"),
                    );
                }
            }
            NodeSpec::Terminal { payoffs } => {
                if payoffs.len() != tree.players {
                    c.push(
                        IssueKind::PayoffArity,
                        Some(name),
                        None,
                        format!("{} payoffs for {} players", payoffs.len(), tree.players),
                    );
                }
            }
        }
    }
}

/// Verifies the node graph is a tree rooted at `root`; returns the preorder.
fn check_shape(c: &mut Checker<'_>) -> Option<Vec<String>> {
    let tree = c.tree;
    let mut parents: BTreeMap<&String, Vec<&String>> = BTreeMap::new();
    for (name, spec) in &tree.nodes {
        for (_, child) in children(spec) {
            parents.entry(child).or_default().push(name);
        }
    }
    let mut shape_ok = true;
    if let Some(ps) = parents.get(&tree.root) {
        c.push(IssueKind::Cycle, Some(&tree.root), None, format!("root has parent '{}'", ps[0]));
        shape_ok = false;
    }
    for (child, ps) in &parents {
        if ps.len() > 1 {
            c.push(
                IssueKind::MultipleParents,
                Some(child),
                None,
                format!("node has {} parents", ps.len()),
            );
            shape_ok = false;
        }
    }
    if !shape_ok {
        return None;
    }

    let mut order = Vec::new();
    let mut seen = BTreeSet::new();
    let mut stack = vec![&tree.root];
    while let Some(n) = stack.pop() {
        if !seen.insert(n) {
            c.push(IssueKind::Cycle, Some(n), None, "node visited twice".into());
            return None;
        }
        order.push(n.clone());
        if let Some(spec) = tree.nodes.get(n) {
            let kids = ordered_children(tree, spec);
            for child in kids.into_iter().rev() {
                if tree.nodes.contains_key(child) {
                    stack.push(child);
                }
            }
        }
    }
    for name in tree.nodes.keys() {
        if !seen.contains(name) {
            c.push(IssueKind::Unreachable, Some(name), None, "node is not reachable from the root".into());
        }
    }
    Some(order)
}

/// Children in canonical action order: information-set order for decisions,
/// label order for chance.
pub(crate) fn ordered_children<'a>(tree: &'a GameTree, spec: &'a NodeSpec) -> Vec<&'a String> {
    match spec {
        NodeSpec::Decision { infoset, children, .. } => match tree.infosets.get(infoset) {
            Some(is) => is.actions.iter().filter_map(|a| children.get(a)).collect(),
            None => children.values().collect(),
        },
        NodeSpec::Chance { children, .. } => children.values().collect(),
        NodeSpec::Terminal { .. } => Vec::new(),
    }
}

fn check_infosets(c: &mut Checker<'_>, order: &[String]) {
    let tree = c.tree;
    // own experience of every player at every node: the (infoset, action)
    // pairs of that player's moves along the root path
    type Experience = Vec<(String, String)>;
    let mut experience: HashMap<&String, Vec<Experience>> = HashMap::new();
    let mut ancestors: HashMap<&String, Vec<&String>> = HashMap::new();
    experience.insert(&tree.root, vec![Vec::new(); tree.players + 1]);
    ancestors.insert(&tree.root, Vec::new());
    for name in order {
        let spec = &tree.nodes[name];
        let exp = experience[name].clone();
        let anc = ancestors[name].clone();
        for (action, child) in children(spec) {
            let mut e = exp.clone();
            if let NodeSpec::Decision { player, infoset, .. } = spec {
                e[*player].push((infoset.clone(), action.clone()));
            }
            let mut a = anc.clone();
            a.push(name);
            experience.insert(child, e);
            ancestors.insert(child, a);
        }
    }

    let mut members: BTreeMap<&String, Vec<&String>> = BTreeMap::new();
    for name in order {
        if let NodeSpec::Decision { infoset, .. } = &tree.nodes[name] {
            members.entry(infoset).or_default().push(name);
        }
    }
    for name in tree.infosets.keys() {
        if !members.contains_key(name) {
            c.push(IssueKind::EmptyInfoSet, None, Some(name), "information set has no member nodes".into());
        }
    }
    for (is_name, nodes) in &members {
        let player = tree.infosets[*is_name].player;
        for (k, &n) in nodes.iter().enumerate() {
            for &m in &nodes[k + 1..] {
                if ancestors[m].contains(&n) || ancestors[n].contains(&m) {
                    c.push(
                        IssueKind::NestedInfoSet,
                        Some(m),
                        Some(is_name),
                        format!("members '{n}' and '{m}' lie on one path"),
                    );
                }
            }
        }
        let first = nodes[0];
        for &n in &nodes[1..] {
            if experience[n][player] != experience[first][player] {
                c.push(
                    IssueKind::PerfectRecall,
                    Some(n),
                    Some(is_name),
                    format!(
                        "player {player} has experience {:?} at '{first}' but {:?} at '{n}'",
                        experience[first][player], experience[n][player]
                    ),
                );
            }
        }
    }
}
