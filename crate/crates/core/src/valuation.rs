//! Reach probabilities, induced beliefs and conditional expected utility.

use crate::error::Error;
use crate::field::NonstdNum;
use crate::game::{Game, History, InfoSetId, Node, NodeId};
use crate::strategy::BehavioralProfile;

/// Probability of taking action `k` at `node` under `profile`; chance
/// probabilities enter unchanged.
pub fn action_prob(game: &Game, profile: &BehavioralProfile, node: NodeId, k: usize) -> NonstdNum {
    match game.node(node) {
        Node::Decision { infoset, .. } => profile.prob(*infoset, k).clone(),
        Node::Chance { probs, .. } => NonstdNum::from_rational(probs[k].clone()),
        Node::Terminal { .. } => panic!("terminal node has no actions"),
    }
}

/// `Pr_σ(h)`: product of the action probabilities along the path to `node`.
pub fn reach_prob(game: &Game, profile: &BehavioralProfile, node: NodeId) -> NonstdNum {
    game.path_steps(node)
        .into_iter()
        .map(|(n, k)| action_prob(game, profile, n, k))
        .fold(NonstdNum::one(), |acc, p| &acc * &p)
}

/// Reach probabilities of all nodes, indexed by `NodeId`.
pub fn reach_all(game: &Game, profile: &BehavioralProfile) -> Vec<NonstdNum> {
    let mut out = vec![NonstdNum::zero(); game.node_count()];
    out[0] = NonstdNum::one();
    // preorder: parents come first
    for n in 0..game.node_count() {
        let node = NodeId(n);
        for (k, &c) in game.node(node).children().iter().enumerate() {
            let p = action_prob(game, profile, node, k);
            out[c.0] = if p.is_zero() { NonstdNum::zero() } else { &out[n] * &p };
        }
    }
    out
}

/// `Pr_σ(I)`: total reach probability of the members of `infoset`.
pub fn reach_prob_infoset(game: &Game, profile: &BehavioralProfile, infoset: InfoSetId) -> NonstdNum {
    game.infoset(infoset).members.iter().map(|&h| reach_prob(game, profile, h)).sum()
}

/// `Pr_σ(z | h)`: probability of the segment from `h` to `z`, or 0 when `h`
/// is not a prefix of `z`.
pub fn cond_prob(game: &Game, profile: &BehavioralProfile, h: NodeId, z: NodeId) -> NonstdNum {
    if !game.is_prefix(h, z) {
        return NonstdNum::zero();
    }
    let skip = game.depth(h);
    game.path_steps(z)
        .into_iter()
        .skip(skip)
        .map(|(n, k)| action_prob(game, profile, n, k))
        .fold(NonstdNum::one(), |acc, p| &acc * &p)
}

/// `Σ_z Pr_σ(z | h) u_i(z)` for every node `h`, indexed by `NodeId`.
pub fn continuation_values(game: &Game, profile: &BehavioralProfile, player: usize) -> Vec<NonstdNum> {
    let mut out = vec![NonstdNum::zero(); game.node_count()];
    for n in (0..game.node_count()).rev() {
        let node = NodeId(n);
        out[n] = match game.node(node) {
            Node::Terminal { payoffs } => NonstdNum::from_rational(payoffs[player - 1].clone()),
            other => other
                .children()
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let p = action_prob(game, profile, node, k);
                    if p.is_zero() {
                        NonstdNum::zero()
                    } else {
                        &p * &out[c.0]
                    }
                })
                .sum(),
        };
    }
    out
}

/// Distribution over each information set's members, aligned with
/// `InformationSet::members`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeliefSystem {
    beliefs: Vec<Vec<NonstdNum>>,
}

impl BeliefSystem {
    /// Checks each information set's entries are nonnegative and sum to 1.
    pub fn new(game: &Game, beliefs: Vec<Vec<NonstdNum>>) -> Result<Self, Error> {
        if beliefs.len() != game.infosets().len() {
            return Err(Error::BadDistribution("belief system must cover every information set".into()));
        }
        for (is, b) in game.infosets().iter().zip(&beliefs) {
            let total: NonstdNum = b.iter().sum();
            if b.len() != is.members.len() || b.iter().any(NonstdNum::is_negative) || total != NonstdNum::one() {
                return Err(Error::BadDistribution(format!("beliefs at '{}' are not a distribution", is.name)));
            }
        }
        Ok(BeliefSystem { beliefs })
    }

    pub fn beliefs(&self) -> &[Vec<NonstdNum>] {
        &self.beliefs
    }

    /// Beliefs at `infoset`, aligned with its members.
    pub fn at(&self, infoset: InfoSetId) -> &[NonstdNum] {
        &self.beliefs[infoset.0]
    }

    pub fn belief(&self, game: &Game, infoset: InfoSetId, node: NodeId) -> NonstdNum {
        game.infoset(infoset)
            .members
            .iter()
            .position(|&m| m == node)
            .map_or_else(NonstdNum::zero, |k| self.beliefs[infoset.0][k].clone())
    }

    pub fn standard_part(&self) -> Result<Self, Error> {
        let beliefs = self
            .beliefs
            .iter()
            .map(|b| b.iter().map(|x| x.standard_part().map(NonstdNum::from_rational)).collect())
            .collect::<Result<_, _>>()?;
        Ok(BeliefSystem { beliefs })
    }
}

/// `μ^σ_I(h) = Pr_σ(h) / Pr_σ(I)`, defined for completely mixed profiles.
pub fn induced_beliefs(game: &Game, profile: &BehavioralProfile) -> Result<BeliefSystem, Error> {
    if !profile.is_completely_mixed() {
        return Err(Error::NotCompletelyMixed("induced beliefs need every action played with positive probability".into()));
    }
    let reach = reach_all(game, profile);
    let beliefs = game
        .infosets()
        .iter()
        .map(|is| {
            let total: NonstdNum = is.members.iter().map(|m| reach[m.0].clone()).sum();
            is.members.iter().map(|m| &reach[m.0] / &total).collect()
        })
        .collect();
    Ok(BeliefSystem { beliefs })
}

/// `EU_i((σ, μ) | I) = Σ_{h∈I} Σ_z μ_I(h) Pr_σ(z | h) u_i(z)`.
pub fn cond_eu(game: &Game, player: usize, profile: &BehavioralProfile, mu: &BeliefSystem, infoset: InfoSetId) -> NonstdNum {
    let cont = continuation_values(game, profile, player);
    game.infoset(infoset)
        .members
        .iter()
        .zip(mu.at(infoset))
        .map(|(h, b)| b * &cont[h.0])
        .sum()
}

/// Probability of each terminal history, aligned with
/// [`Game::terminals`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeDistribution {
    pub terminals: Vec<NodeId>,
    pub probs: Vec<NonstdNum>,
}

impl OutcomeDistribution {
    pub fn prob(&self, z: NodeId) -> NonstdNum {
        self.terminals.iter().position(|&t| t == z).map_or_else(NonstdNum::zero, |k| self.probs[k].clone())
    }

    pub fn histories(&self, game: &Game) -> Vec<(History, NonstdNum)> {
        self.terminals.iter().map(|&z| game.history(z)).zip(self.probs.iter().cloned()).collect()
    }

    pub fn total(&self) -> NonstdNum {
        self.probs.iter().sum()
    }
}

/// `Pr_σ` on terminal histories.
pub fn outcome_distribution(game: &Game, profile: &BehavioralProfile) -> OutcomeDistribution {
    let reach = reach_all(game, profile);
    OutcomeDistribution {
        terminals: game.terminals().to_vec(),
        probs: game.terminals().iter().map(|z| reach[z.0].clone()).collect(),
    }
}

/// Ex ante expected utility `Σ_z Pr_σ(z) u_i(z)`.
pub fn expected_utility(game: &Game, profile: &BehavioralProfile, player: usize) -> NonstdNum {
    continuation_values(game, profile, player)[0].clone()
}
