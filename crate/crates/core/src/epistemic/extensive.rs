use std::collections::BTreeMap;

use crate::error::Error;
use crate::field::NonstdNum;
use crate::game::{Game, InfoSetId, Node, NodeId};
use crate::response::{Responder, Shortfall};
use crate::strategy::{point_mass, BehavioralProfile};
use crate::valuation::{outcome_distribution, OutcomeDistribution};

/// A state of an extensive-form model and the terminal history it
/// determines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub name: String,
    pub outcome: NodeId,
}

/// A finite model `(Ω, Z, (Pr_i))` of an extensive game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensiveModel {
    states: Vec<State>,
    /// `priors[i - 1][k]`: player `i`'s probability of state `k`.
    priors: Vec<Vec<NonstdNum>>,
}

impl ExtensiveModel {
    pub fn new(game: &Game, states: Vec<State>, priors: Vec<Vec<NonstdNum>>) -> Result<Self, Error> {
        if priors.len() != game.players() {
            return Err(Error::IncompatibleModel(format!("{} priors for {} players", priors.len(), game.players())));
        }
        let mut names = std::collections::BTreeSet::new();
        for s in &states {
            if !names.insert(&s.name) {
                return Err(Error::IncompatibleModel(format!("state '{}' is listed twice", s.name)));
            }
            if s.outcome.0 >= game.node_count() || !matches!(game.node(s.outcome), Node::Terminal { .. }) {
                return Err(Error::IncompatibleModel(format!("state '{}' does not map to a terminal history", s.name)));
            }
        }
        for (i, p) in priors.iter().enumerate() {
            let total: NonstdNum = p.iter().sum();
            if p.len() != states.len() || p.iter().any(NonstdNum::is_negative) || (!states.is_empty() && total != NonstdNum::one()) {
                return Err(Error::BadDistribution(format!("prior of player {} is not a distribution over the states", i + 1)));
            }
        }
        Ok(ExtensiveModel { states, priors })
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn priors(&self) -> &[Vec<NonstdNum>] {
        &self.priors
    }

    pub fn prior(&self, player: usize) -> &[NonstdNum] {
        &self.priors[player - 1]
    }

    pub fn state_index(&self, name: &str) -> Result<usize, Error> {
        self.states
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| Error::Unknown { kind: "state", name: name.to_string() })
    }

    pub fn has_common_prior(&self) -> bool {
        self.priors.windows(2).all(|w| w[0] == w[1])
    }
}

/// `Pr_i^Z`: the distribution on terminal histories induced by player
/// `i`'s prior.
pub fn pushforward(game: &Game, model: &ExtensiveModel, player: usize) -> OutcomeDistribution {
    let mut mass: BTreeMap<NodeId, NonstdNum> = BTreeMap::new();
    for (s, p) in model.states.iter().zip(model.prior(player)) {
        let e = mass.entry(s.outcome).or_default();
        *e = &*e + p;
    }
    OutcomeDistribution {
        terminals: game.terminals().to_vec(),
        probs: game.terminals().iter().map(|z| mass.remove(z).unwrap_or_default()).collect(),
    }
}

/// Every player's pushforward equals `Pr_σ′` exactly.
pub fn is_compatible(game: &Game, model: &ExtensiveModel, trem: &BehavioralProfile) -> bool {
    let target = outcome_distribution(game, trem);
    (1..=game.players()).all(|i| pushforward(game, model, i) == target)
}

/// One state per terminal history, each with prior `Pr_σ′(z)` for every
/// player. State names are `w:` followed by the action path joined by dots.
pub fn canonical_model(game: &Game, trem: &BehavioralProfile) -> ExtensiveModel {
    let dist = outcome_distribution(game, trem);
    let states = game
        .terminals()
        .iter()
        .map(|&z| State { name: format!("w:{}", game.history(z).path.join(".")), outcome: z })
        .collect();
    ExtensiveModel { states, priors: vec![dist.probs; game.players()] }
}

/// Which rationality notion a common-knowledge check uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Each action played with non-infinitesimal probability is a local
    /// ε-best response.
    Local,
    /// The standard part of σ′_i is an ε-best response at each set reached.
    Global,
}

/// A player failing rationality at a state, with the offending shortfall.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateFailure {
    pub player: usize,
    pub state: usize,
    pub shortfall: Shortfall,
}

/// Result of checking that rationality holds at every state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CkReport {
    pub pass: bool,
    pub mode: Mode,
    pub eps: NonstdNum,
    /// Ω is empty, so the universal statement holds vacuously.
    pub degenerate: bool,
    /// The failure with the smallest `(player, state)`.
    pub failure: Option<StateFailure>,
}

/// Evaluates rationality predicates on one model. Shortfalls depend only
/// on the player and information set (and action, for local rationality),
/// so they are computed once and looked up per state.
pub struct ModelChecker<'a> {
    game: &'a Game,
    model: &'a ExtensiveModel,
    sigma: &'a BehavioralProfile,
    responder: Responder<'a>,
    global: Vec<Option<Shortfall>>,
    local: BTreeMap<(InfoSetId, usize), Shortfall>,
}

impl<'a> ModelChecker<'a> {
    pub fn new(
        game: &'a Game,
        model: &'a ExtensiveModel,
        trem: &'a BehavioralProfile,
        sigma: &'a BehavioralProfile,
    ) -> Result<Self, Error> {
        let responder = Responder::new(game, trem)?;
        if !sigma.is_standard() || !sigma.differ_infinitesimally(trem) {
            return Err(Error::NotInfinitesimallyClose("σ must be the standard part of the tremble".into()));
        }
        // an empty Ω pushes forward to the zero measure; the universal
        // statement over it is vacuous, so it is checked rather than refused
        if !model.states.is_empty() && !is_compatible(game, model, trem) {
            return Err(Error::IncompatibleModel("model outcomes do not match the tremble's distribution".into()));
        }
        Ok(ModelChecker { game, model, sigma, responder, global: vec![None; game.infosets().len()], local: BTreeMap::new() })
    }

    /// `(infoset, action)` pairs of `player` along the path to state `w`.
    fn moves(&self, player: usize, w: usize) -> Vec<(InfoSetId, usize)> {
        self.game
            .path_steps(self.model.states[w].outcome)
            .into_iter()
            .filter_map(|(n, k)| match self.game.node(n) {
                Node::Decision { infoset, .. } if self.game.infoset(*infoset).player == player => Some((*infoset, k)),
                _ => None,
            })
            .collect()
    }

    fn global_shortfall(&mut self, infoset: InfoSetId) -> Shortfall {
        if self.global[infoset.0].is_none() {
            let player = self.game.infoset(infoset).player;
            let report = self.responder.global_report(&self.sigma.strategy(self.game, player), &NonstdNum::zero());
            for s in report.shortfalls {
                let k = s.infoset.0;
                self.global[k] = Some(s);
            }
        }
        self.global[infoset.0].clone().expect("filled for every set of the player")
    }

    fn local_shortfall(&mut self, infoset: InfoSetId, k: usize) -> Shortfall {
        if let Some(s) = self.local.get(&(infoset, k)) {
            return s.clone();
        }
        let n = self.game.infoset(infoset).actions.len();
        let s = self.responder.local_shortfall(infoset, &point_mass(n, k)).expect("action exists");
        self.local.insert((infoset, k), s.clone());
        s
    }

    /// Shortfalls that the predicate at `(player, w)` compares against ε.
    fn relevant(&mut self, mode: Mode, player: usize, w: usize) -> Vec<Shortfall> {
        let mut out = Vec::new();
        for (i, k) in self.moves(player, w) {
            match mode {
                Mode::Global => out.push(self.global_shortfall(i)),
                Mode::Local => {
                    if self.sigma.prob(i, k).is_positive() {
                        out.push(self.local_shortfall(i, k));
                    }
                }
            }
        }
        out
    }

    /// First shortfall above `eps` for `player` at state `w`, if any.
    pub fn failure_at(&mut self, mode: Mode, player: usize, w: usize, eps: &NonstdNum) -> Option<Shortfall> {
        self.relevant(mode, player, w).into_iter().find(|s| &s.amount > eps)
    }

    pub fn is_rational_at(&mut self, mode: Mode, player: usize, w: usize, eps: &NonstdNum) -> bool {
        self.failure_at(mode, player, w, eps).is_none()
    }

    /// Rationality of every player at every state.
    pub fn ck(&mut self, mode: Mode, eps: &NonstdNum) -> CkReport {
        let mut failure = None;
        'outer: for player in 1..=self.game.players() {
            for w in 0..self.model.states.len() {
                if let Some(shortfall) = self.failure_at(mode, player, w, eps) {
                    failure = Some(StateFailure { player, state: w, shortfall });
                    break 'outer;
                }
            }
        }
        CkReport {
            pass: failure.is_none(),
            mode,
            eps: eps.clone(),
            degenerate: self.model.states.is_empty(),
            failure,
        }
    }

    /// The smallest ε at which rationality is universal: the largest
    /// relevant shortfall over all players and states (0 if none).
    pub fn required_eps(&mut self, mode: Mode) -> NonstdNum {
        let mut eps = NonstdNum::zero();
        for player in 1..=self.game.players() {
            for w in 0..self.model.states.len() {
                for s in self.relevant(mode, player, w) {
                    eps = eps.max(s.amount);
                }
            }
        }
        eps
    }
}

/// Local rationality of `player` at state `w`.
pub fn is_locally_rational(
    game: &Game,
    model: &ExtensiveModel,
    trem: &BehavioralProfile,
    sigma: &BehavioralProfile,
    player: usize,
    w: usize,
    eps: &NonstdNum,
) -> Result<bool, Error> {
    Ok(ModelChecker::new(game, model, trem, sigma)?.is_rational_at(Mode::Local, player, w, eps))
}

/// ε-rationality of `player` at state `w`.
pub fn is_rational(
    game: &Game,
    model: &ExtensiveModel,
    trem: &BehavioralProfile,
    sigma: &BehavioralProfile,
    player: usize,
    w: usize,
    eps: &NonstdNum,
) -> Result<bool, Error> {
    Ok(ModelChecker::new(game, model, trem, sigma)?.is_rational_at(Mode::Global, player, w, eps))
}

/// Common knowledge of (local) ε-rationality: the predicate holds for every
/// player at every state.
pub fn ck_rationality(
    game: &Game,
    model: &ExtensiveModel,
    trem: &BehavioralProfile,
    sigma: &BehavioralProfile,
    eps: &NonstdNum,
    mode: Mode,
) -> Result<CkReport, Error> {
    Ok(ModelChecker::new(game, model, trem, sigma)?.ck(mode, eps))
}
