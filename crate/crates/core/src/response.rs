//! ε-best and local ε-best responses against a completely mixed profile.
//!
//! All conditional expectations use the beliefs induced by the tremble σ′:
//! `EU(τ | I) = Σ_{h∈I} Pr_σ′(h) · cont_τ(h) / Pr_σ′(I)`, where `cont_τ`
//! is the continuation value with the player's own moves from `h` onward
//! taken from `τ` and everyone else's from σ′.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::field::{NonstdNum, Rational};
use crate::game::{Game, InfoSetId, Node, NodeId};
use crate::strategy::{BehavioralProfile, BehavioralStrategy};
use crate::valuation::{continuation_values, reach_all};

/// A pure deviation: the action chosen at each listed information set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Deviation {
    pub choices: BTreeMap<InfoSetId, usize>,
}

impl Deviation {
    pub fn action(infoset: InfoSetId, k: usize) -> Self {
        Deviation { choices: BTreeMap::from([(infoset, k)]) }
    }

    /// `(infoset, action label)` pairs.
    pub fn labels<'g>(&self, game: &'g Game) -> Vec<(&'g str, &'g str)> {
        self.choices
            .iter()
            .map(|(&i, &k)| (game.infoset(i).name.as_str(), game.infoset(i).actions[k].as_str()))
            .collect()
    }
}

/// Gain from the best deviation at one information set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shortfall {
    pub player: usize,
    pub infoset: InfoSetId,
    /// Deviation attaining `best`.
    pub deviation: Deviation,
    /// Conditional EU of the candidate.
    pub value: NonstdNum,
    /// Conditional EU of the best deviation.
    pub best: NonstdNum,
    /// `best − value`.
    pub amount: NonstdNum,
}

/// Per-information-set shortfalls and whether all are within the bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortfallReport {
    pub pass: bool,
    pub eps: NonstdNum,
    pub shortfalls: Vec<Shortfall>,
}

impl ShortfallReport {
    fn new(eps: &NonstdNum, shortfalls: Vec<Shortfall>) -> Self {
        let pass = shortfalls.iter().all(|s| &s.amount <= eps);
        ShortfallReport { pass, eps: eps.clone(), shortfalls }
    }

    /// First information set whose shortfall exceeds the bound.
    pub fn first_failure(&self) -> Option<&Shortfall> {
        self.shortfalls.iter().find(|s| s.amount > self.eps)
    }

    /// Largest shortfall, or 0 when the player has no information sets.
    pub fn max_amount(&self) -> NonstdNum {
        self.shortfalls.iter().map(|s| s.amount.clone()).fold(NonstdNum::zero(), NonstdNum::max)
    }
}

/// The bound `d·(ε + ε′)` produced by the local-to-global argument.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalToGlobalCert {
    pub player: usize,
    pub eps: NonstdNum,
    pub eps_prime: NonstdNum,
    pub d: usize,
    pub bound: NonstdNum,
}

/// Shared per-tremble state: reach probabilities under σ′ and per-player
/// continuation values, computed once.
pub struct Responder<'a> {
    game: &'a Game,
    trem: &'a BehavioralProfile,
    reach: Vec<NonstdNum>,
    reach_infoset: Vec<NonstdNum>,
    trem_cont: Vec<Option<Vec<NonstdNum>>>,
}

impl<'a> Responder<'a> {
    pub fn new(game: &'a Game, trem: &'a BehavioralProfile) -> Result<Self, Error> {
        if !trem.is_completely_mixed() {
            return Err(Error::NotCompletelyMixed("the tremble must give every action positive probability".into()));
        }
        let reach = reach_all(game, trem);
        let reach_infoset = game
            .infosets()
            .iter()
            .map(|is| is.members.iter().map(|m| reach[m.0].clone()).sum())
            .collect();
        Ok(Responder { game, trem, reach, reach_infoset, trem_cont: vec![None; game.players() + 1] })
    }

    pub fn game(&self) -> &'a Game {
        self.game
    }

    pub fn trem(&self) -> &'a BehavioralProfile {
        self.trem
    }

    fn trem_cont(&mut self, player: usize) -> &[NonstdNum] {
        if self.trem_cont[player].is_none() {
            self.trem_cont[player] = Some(continuation_values(self.game, self.trem, player));
        }
        self.trem_cont[player].as_deref().expect("just filled")
    }

    /// `Σ_{h∈I} Pr_σ′(h) · f(h) / Pr_σ′(I)`.
    fn conditional(&self, infoset: InfoSetId, f: impl Fn(NodeId) -> NonstdNum) -> NonstdNum {
        let weighted: NonstdNum = self
            .game
            .infoset(infoset)
            .members
            .iter()
            .map(|&h| &self.reach[h.0] * &f(h))
            .sum();
        &weighted / &self.reach_infoset[infoset.0]
    }

    /// Conditional value of taking action `k` at `infoset` and continuing
    /// with the values in `cont`.
    fn action_value(&self, infoset: InfoSetId, k: usize, cont: &[NonstdNum]) -> NonstdNum {
        self.conditional(infoset, |h| cont[self.game.node(h).children()[k].0].clone())
    }

    fn check_owner(&self, player: usize, infoset: InfoSetId) -> Result<(), Error> {
        let is = self.game.infoset(infoset);
        if is.player != player {
            return Err(Error::WrongPlayer { player, infoset: is.name.clone() });
        }
        Ok(())
    }

    /// Continuation values under `(σ_i, σ′_{−i})`.
    pub fn candidate_cont(&self, sigma_i: &BehavioralStrategy) -> Vec<NonstdNum> {
        continuation_values(self.game, &self.trem.with_strategy(sigma_i), sigma_i.player())
    }

    /// Global shortfall at every information set of `sigma_i`'s player.
    pub fn global_report(&self, sigma_i: &BehavioralStrategy, eps: &NonstdNum) -> ShortfallReport {
        let player = sigma_i.player();
        let best = BestReply::compute(self, player);
        let cand = self.candidate_cont(sigma_i);
        let shortfalls = self
            .game
            .player_infosets(player)
            .iter()
            .map(|&i| self.global_at(player, i, &best, &cand))
            .collect();
        ShortfallReport::new(eps, shortfalls)
    }

    /// Global shortfall at one information set.
    pub fn global_shortfall(&self, infoset: InfoSetId, sigma_i: &BehavioralStrategy) -> Result<Shortfall, Error> {
        let player = sigma_i.player();
        self.check_owner(player, infoset)?;
        let best = BestReply::compute(self, player);
        Ok(self.global_at(player, infoset, &best, &self.candidate_cont(sigma_i)))
    }

    fn global_at(&self, player: usize, infoset: InfoSetId, best: &BestReply, cand: &[NonstdNum]) -> Shortfall {
        let value = self.conditional(infoset, |h| cand[h.0].clone());
        let best_value = self.conditional(infoset, |h| best.value[h.0].clone());
        let deviation = Deviation {
            choices: std::iter::once(infoset)
                .chain(self.game.player_infosets(player).iter().copied().filter(|&j| {
                    self.game.succ(j, infoset).unwrap_or(false)
                }))
                .map(|j| (j, best.choice[j.0].expect("own information set")))
                .collect(),
        };
        Shortfall {
            player,
            infoset,
            deviation,
            amount: &best_value - &value,
            value,
            best: best_value,
        }
    }

    /// Local shortfall of `dist` at `infoset`: the continuation stays at
    /// σ′_i and only the action distribution at `infoset` varies.
    pub fn local_shortfall(&mut self, infoset: InfoSetId, dist: &[NonstdNum]) -> Result<Shortfall, Error> {
        let is = self.game.infoset(infoset);
        let player = is.player;
        if dist.len() != is.actions.len() {
            return Err(Error::BadDistribution(format!("'{}' has {} actions", is.name, is.actions.len())));
        }
        let cont = self.trem_cont(player).to_vec();
        let values: Vec<NonstdNum> =
            (0..is.actions.len()).map(|k| self.action_value(infoset, k, &cont)).collect();
        let value: NonstdNum = dist.iter().zip(&values).map(|(p, v)| p * v).sum();
        let (k, best) = argmax(&values);
        Ok(Shortfall {
            player,
            infoset,
            deviation: Deviation::action(infoset, k),
            amount: &best - &value,
            value,
            best,
        })
    }

    /// Local shortfalls of `sigma_i(I)` at each of the player's sets.
    pub fn local_report(&mut self, sigma_i: &BehavioralStrategy, eps: &NonstdNum) -> ShortfallReport {
        let shortfalls = sigma_i
            .choice()
            .iter()
            .map(|(&i, d)| self.local_shortfall(i, d).expect("strategy matches the game"))
            .collect();
        ShortfallReport::new(eps, shortfalls)
    }

    /// `ε′_i`: the largest effect of switching the player's continuation
    /// between σ_i and σ′_i after a fixed first move at any of their sets.
    ///
    /// With `D_I(y) = EU(σ[I/y] | I) − EU(σ′[I/y] | I)` this is the maximum
    /// over `I` and pure `y` of `|D_I(y)|` and `|D_I(y) − D_I(σ(I))|`.
    pub fn substitution_gap(&mut self, sigma_i: &BehavioralStrategy) -> Result<NonstdNum, Error> {
        let player = sigma_i.player();
        let own = self.trem.strategy(self.game, player);
        if !self.trem.with_strategy(sigma_i).differ_infinitesimally(&self.trem.with_strategy(&own)) {
            return Err(Error::NotInfinitesimallyClose(format!(
                "player {player}'s strategy is not infinitesimally close to the tremble"
            )));
        }
        let cand = self.candidate_cont(sigma_i);
        let trem = self.trem_cont(player).to_vec();
        let mut gap = NonstdNum::zero();
        for (&i, dist) in sigma_i.choice() {
            let d: Vec<NonstdNum> = (0..dist.len())
                .map(|k| &self.action_value(i, k, &cand) - &self.action_value(i, k, &trem))
                .collect();
            let d_sigma: NonstdNum = dist.iter().zip(&d).map(|(p, x)| p * x).sum();
            for x in &d {
                gap = gap.max(x.abs()).max((x - &d_sigma).abs());
            }
        }
        if !gap.is_infinitesimal() {
            return Err(Error::NotInfinitesimallyClose(format!("substitution gap {gap} is not infinitesimal")));
        }
        Ok(gap)
    }
}

fn argmax(values: &[NonstdNum]) -> (usize, NonstdNum) {
    let mut k = 0;
    for (j, v) in values.iter().enumerate().skip(1) {
        if v > &values[k] {
            k = j;
        }
    }
    (k, values[k].clone())
}

/// Backward induction over one player's information sets against σ′_{−i}.
///
/// With perfect recall every member of an own set `J` carries the same own
/// reach factor under σ′_i, so the best action at `J` maximizes
/// `Σ_{h∈J} Pr_σ′(h)·value(h·a)` independently of which set above `J` we
/// condition on. One pass therefore yields the best continuation for every
/// set at once.
struct BestReply {
    value: Vec<NonstdNum>,
    choice: Vec<Option<usize>>,
}

impl BestReply {
    fn compute(r: &Responder<'_>, player: usize) -> Self {
        let g = r.game;
        let mut state = BestReply {
            value: vec![NonstdNum::zero(); g.node_count()],
            choice: vec![None; g.infosets().len()],
        };
        let mut done = vec![false; g.node_count()];
        // every node, not just those on best-reply paths: conditioning on a
        // set may start below an action the root-level reply avoids
        for n in 0..g.node_count() {
            state.visit(r, player, NodeId(n), &mut done);
        }
        state
    }

    fn visit(&mut self, r: &Responder<'_>, player: usize, node: NodeId, done: &mut [bool]) {
        if done[node.0] {
            return;
        }
        let g = r.game;
        self.value[node.0] = match g.node(node) {
            Node::Terminal { payoffs } => NonstdNum::from_rational(payoffs[player - 1].clone()),
            Node::Decision { infoset, children } if g.infoset(*infoset).player == player => {
                let k = match self.choice[infoset.0] {
                    Some(k) => k,
                    None => {
                        let k = self.decide(r, player, *infoset, done);
                        self.choice[infoset.0] = Some(k);
                        k
                    }
                };
                let c = children[k];
                self.visit(r, player, c, done);
                self.value[c.0].clone()
            }
            other => {
                let mut total = NonstdNum::zero();
                for (k, &c) in other.children().iter().enumerate() {
                    self.visit(r, player, c, done);
                    let p = crate::valuation::action_prob(g, r.trem, node, k);
                    total = &total + &(&p * &self.value[c.0]);
                }
                total
            }
        };
        done[node.0] = true;
    }

    fn decide(&mut self, r: &Responder<'_>, player: usize, infoset: InfoSetId, done: &mut [bool]) -> usize {
        let g = r.game;
        let is = g.infoset(infoset);
        let mut values = Vec::with_capacity(is.actions.len());
        for k in 0..is.actions.len() {
            let mut total = NonstdNum::zero();
            for &h in &is.members {
                let c = g.node(h).children()[k];
                self.visit(r, player, c, done);
                total = &total + &(&r.reach[h.0] * &self.value[c.0]);
            }
            values.push(total);
        }
        argmax(&values).0
    }
}

/// Shortfall of `sigma_i` at `infoset` against the best pure continuation.
pub fn global_shortfall(
    game: &Game,
    infoset: InfoSetId,
    sigma_i: &BehavioralStrategy,
    trem: &BehavioralProfile,
) -> Result<Shortfall, Error> {
    Responder::new(game, trem)?.global_shortfall(infoset, sigma_i)
}

/// Whether `sigma_i` is an `eps`-best response to σ′ at every one of its
/// player's information sets.
pub fn is_eps_best(
    game: &Game,
    sigma_i: &BehavioralStrategy,
    trem: &BehavioralProfile,
    eps: &NonstdNum,
) -> Result<ShortfallReport, Error> {
    Ok(Responder::new(game, trem)?.global_report(sigma_i, eps))
}

/// Local shortfall of the distribution `dist` at `infoset`.
pub fn local_shortfall(
    game: &Game,
    infoset: InfoSetId,
    dist: &[NonstdNum],
    trem: &BehavioralProfile,
) -> Result<Shortfall, Error> {
    Responder::new(game, trem)?.local_shortfall(infoset, dist)
}

/// Whether `sigma_i(I)` is a local `eps`-best response at each of the
/// player's information sets.
pub fn is_local_eps_best_profile(
    game: &Game,
    sigma_i: &BehavioralStrategy,
    trem: &BehavioralProfile,
    eps: &NonstdNum,
) -> Result<ShortfallReport, Error> {
    Ok(Responder::new(game, trem)?.local_report(sigma_i, eps))
}

pub fn substitution_gap(game: &Game, sigma_i: &BehavioralStrategy, trem: &BehavioralProfile) -> Result<NonstdNum, Error> {
    Responder::new(game, trem)?.substitution_gap(sigma_i)
}

/// Smallest positive entry of a standard profile.
pub fn min_support_prob(sigma: &BehavioralProfile) -> Result<Rational, Error> {
    let mut best: Option<Rational> = None;
    for x in sigma.dists().iter().flatten() {
        let q = x
            .as_rational()
            .ok_or_else(|| Error::PreconditionFailed("minimum support needs a standard profile".into()))?;
        if q.is_positive() && best.as_ref().is_none_or(|b| &q < b) {
            best = Some(q);
        }
    }
    best.ok_or_else(|| Error::PreconditionFailed("profile has no positive entry".into()))
}

/// Turns a local `eps`-best response into a global `d·(eps + ε′)`-best one,
/// where `d` is the player's largest information-set height. The bound is
/// rechecked directly before the certificate is returned.
pub fn local_to_global(
    game: &Game,
    sigma_i: &BehavioralStrategy,
    trem: &BehavioralProfile,
    eps: &NonstdNum,
) -> Result<LocalToGlobalCert, Error> {
    let mut r = Responder::new(game, trem)?;
    let local = r.local_report(sigma_i, eps);
    if let Some(s) = local.first_failure() {
        return Err(Error::PreconditionFailed(format!(
            "not a local {eps}-best response at '{}' (shortfall {})",
            game.infoset(s.infoset).name,
            s.amount
        )));
    }
    let eps_prime = r.substitution_gap(sigma_i)?;
    let player = sigma_i.player();
    let d = game.max_height(player);
    let bound = &NonstdNum::from_int(d as i64) * &(eps + &eps_prime);
    let global = r.global_report(sigma_i, &bound);
    if let Some(s) = global.first_failure() {
        return Err(Error::BoundViolation(format!(
            "shortfall {} at '{}' exceeds {bound}",
            s.amount,
            game.infoset(s.infoset).name
        )));
    }
    Ok(LocalToGlobalCert { player, eps: eps.clone(), eps_prime, d, bound })
}
