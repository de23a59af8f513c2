use std::collections::BTreeMap;

use crate::epistemic::{
    ck_rationality_strategic, has_common_prior, is_product_prior, opponents, with_own, StrategicCkReport, StrategicModel,
    StrategicState,
};
use crate::error::Error;
use crate::field::{NonstdNum, Rational};
use crate::format::{CorrelatedDoc, MixedDoc, ModelDoc};
use crate::game::{all_profiles, PureProfile, StrategicGame};
use crate::lp::feasible_point;
use crate::strategy::{CorrelatedDist, MixedProfile};

use super::{disagreement, Certificate, CkRecord, Concept, Counterexample, DeviationDoc, EpistemicWitness, Route, Verdict};

type Belief = BTreeMap<PureProfile, Rational>;

fn opponent_profiles(game: &StrategicGame, player: usize) -> Vec<PureProfile> {
    let sizes: Vec<usize> = game.sizes().into_iter().enumerate().filter(|(j, _)| *j != player - 1).map(|(_, n)| n).collect();
    all_profiles(&sizes)
}

fn values_against(game: &StrategicGame, player: usize, belief: &Belief) -> Vec<Rational> {
    (0..game.strategies(player).len())
        .map(|k| belief.iter().map(|(o, p)| p * game.utility(&with_own(o, player, k), player)).sum())
        .collect()
}

fn first_argmax(values: &[Rational]) -> usize {
    (1..values.len()).fold(0, |b, k| if values[k] > values[b] { k } else { b })
}

/// A supported strategy that is not a best reply to `belief`, if any.
fn refute(game: &StrategicGame, player: usize, played: usize, belief: &Belief) -> Option<Counterexample> {
    let values = values_against(game, player, belief);
    let best = first_argmax(&values);
    let gain = &values[best] - &values[played];
    gain.is_positive().then(|| Counterexample {
        player,
        infoset: None,
        state: None,
        played: Some(game.strategies(player)[played].clone()),
        deviation: Some(DeviationDoc::Strategy(game.strategies(player)[best].clone())),
        shortfall: Some(NonstdNum::from_rational(gain)),
        round: None,
    })
}

fn ck_counterexample(game: &StrategicGame, model: &StrategicModel, report: &StrategicCkReport) -> Option<Counterexample> {
    report.failure.as_ref().map(|f| Counterexample {
        player: f.player,
        infoset: None,
        state: Some(model.states()[f.state].name.clone()),
        played: Some(game.strategies(f.player)[f.check.played].clone()),
        deviation: Some(DeviationDoc::Strategy(game.strategies(f.player)[f.check.best].clone())),
        shortfall: Some(f.check.gain.clone()),
        round: None,
    })
}

/// Runs the common-knowledge check on `model` and reconciles it with the
/// direct result.
fn epistemic_route(
    concept: Concept,
    game: &StrategicGame,
    model: StrategicModel,
    direct: Option<Counterexample>,
    mut certificate: Certificate,
) -> Result<Verdict, Error> {
    let report = ck_rationality_strategic(game, &model)?;
    if report.pass != direct.is_none() {
        return Err(disagreement(concept, direct.is_none(), report.pass));
    }
    let witness = EpistemicWitness {
        model: ModelDoc::from_strategic(game, &model),
        checks: vec![CkRecord { mode: None, eps: None, pass: report.pass }],
    };
    let mut verdict = match ck_counterexample(game, &model, &report) {
        Some(c) => Verdict::failed(concept, Route::Epistemic, c),
        None => {
            certificate.epistemic = Some(witness);
            Verdict::passed(concept, Route::Epistemic, certificate)
        }
    };
    verdict.degenerate = report.degenerate;
    Ok(verdict)
}

/// Nash equilibrium: every supported pure strategy is a best reply to the
/// others' mixtures. The epistemic route checks rationality on the model
/// whose states are the support of `Pr_σ`, with that distribution as the
/// common (product) prior.
pub fn check_nash(game: &StrategicGame, sigma: &MixedProfile, route: Route) -> Result<Verdict, Error> {
    let mut direct = None;
    'players: for player in 1..=game.players() {
        let belief: Belief = opponent_profiles(game, player)
            .into_iter()
            .map(|o| {
                let p = with_own(&o, player, 0);
                let w = (1..=game.players()).filter(|&j| j != player).map(|j| sigma.prob(j, p[j - 1])).fold(Rational::one(), |a, x| &a * x);
                (o, w)
            })
            .collect();
        for k in 0..game.strategies(player).len() {
            if sigma.prob(player, k).is_positive() {
                if let Some(c) = refute(game, player, k, &belief) {
                    direct = Some(c);
                    break 'players;
                }
            }
        }
    }
    let certificate = Certificate { profile: Some(MixedDoc::from_mixed(game, sigma)), ..Default::default() };
    if route == Route::Direct {
        return Ok(match direct {
            Some(c) => Verdict::failed(Concept::Nash, route, c),
            None => Verdict::passed(Concept::Nash, route, certificate),
        });
    }
    let weights: Vec<NonstdNum> = game.profiles().iter().map(|p| NonstdNum::from_rational(sigma.joint(p))).collect();
    let model = StrategicModel::from_distribution(game, &weights)?;
    if !has_common_prior(&model) || !(1..=game.players()).all(|i| is_product_prior(game, &model, i)) {
        return Err(Error::RouteDisagreement("witness model for a mixed profile must have a common product prior".into()));
    }
    epistemic_route(Concept::Nash, game, model, direct, certificate)
}

/// Correlated equilibrium: obeying each recommendation is a best reply to
/// the conditional distribution of the others' recommendations. The
/// epistemic route uses `Ω = support(η)` with `η` as every player's prior.
pub fn check_correlated(game: &StrategicGame, eta: &CorrelatedDist, route: Route) -> Result<Verdict, Error> {
    let mut direct = None;
    'players: for player in 1..=game.players() {
        for k in 0..game.strategies(player).len() {
            let joint: Belief = opponent_profiles(game, player)
                .into_iter()
                .map(|o| {
                    let p = eta.prob(game, &with_own(&o, player, k)).clone();
                    (o, p)
                })
                .collect();
            let marginal: Rational = joint.values().sum();
            if !marginal.is_positive() {
                continue;
            }
            let belief = joint.into_iter().map(|(o, p)| (o, &p / &marginal)).collect();
            if let Some(c) = refute(game, player, k, &belief) {
                direct = Some(c);
                break 'players;
            }
        }
    }
    let certificate = Certificate { distribution: Some(CorrelatedDoc::from_dist(game, eta)), ..Default::default() };
    if route == Route::Direct {
        return Ok(match direct {
            Some(c) => Verdict::failed(Concept::Correlated, route, c),
            None => Verdict::passed(Concept::Correlated, route, certificate),
        });
    }
    let weights: Vec<NonstdNum> = eta.probs().iter().cloned().map(NonstdNum::from_rational).collect();
    let model = StrategicModel::from_distribution(game, &weights)?;
    epistemic_route(Concept::Correlated, game, model, direct, certificate)
}

/// Result of iterated elimination of never-best replies against
/// correlated beliefs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rationalizable {
    /// Surviving strategy indices per player (0-based players).
    pub sets: Vec<Vec<usize>>,
    /// `(player, strategy, round)` for each eliminated strategy; rounds
    /// start at 1.
    pub eliminated: Vec<(usize, usize, usize)>,
    /// For each survivor, a belief over the others' surviving profiles to
    /// which it is a best reply.
    beliefs: BTreeMap<(usize, usize), Belief>,
}

impl Rationalizable {
    pub fn survives(&self, player: usize, k: usize) -> bool {
        self.sets[player - 1].contains(&k)
    }

    pub fn round_eliminated(&self, player: usize, k: usize) -> Option<usize> {
        self.eliminated.iter().find(|&&(p, s, _)| p == player && s == k).map(|&(_, _, r)| r)
    }

    pub fn belief(&self, player: usize, k: usize) -> Option<&BTreeMap<PureProfile, Rational>> {
        self.beliefs.get(&(player, k))
    }

    pub fn labels(&self, game: &StrategicGame) -> BTreeMap<usize, Vec<String>> {
        self.sets
            .iter()
            .enumerate()
            .map(|(i, s)| (i + 1, s.iter().map(|&k| game.strategies(i + 1)[k].clone()).collect()))
            .collect()
    }

    /// `Ω = ×R_i`; player `i`'s prior puts `b_S(s_{−i}) / |R_i|` on
    /// `(S, s_{−i})`, so conditioning on their own strategy `S` recovers
    /// the belief that rationalizes it.
    pub fn witness_model(&self, game: &StrategicGame) -> Result<StrategicModel, Error> {
        let states: Vec<StrategicState> = all_profiles(&self.sets.iter().map(Vec::len).collect::<Vec<_>>())
            .into_iter()
            .map(|idx| {
                let profile: PureProfile = idx.iter().enumerate().map(|(i, &k)| self.sets[i][k]).collect();
                StrategicState { name: game.labels(&profile).join("."), profile }
            })
            .collect();
        let priors = (1..=game.players())
            .map(|i| {
                let n = Rational::from_integer(self.sets[i - 1].len() as i64);
                states
                    .iter()
                    .map(|s| {
                        let own = s.profile[i - 1];
                        let b = &self.beliefs[&(i, own)];
                        let p = b.get(&opponents(&s.profile, i)).cloned().unwrap_or_else(Rational::zero);
                        NonstdNum::from_rational(&p / &n)
                    })
                    .collect()
            })
            .collect();
        StrategicModel::new(game, states, priors)
    }
}

/// A belief over `others` (profiles of the other players' surviving
/// strategies) against which strategy `k` is a best reply among all of the
/// player's strategies.
fn supporting_belief(game: &StrategicGame, player: usize, k: usize, others: &[PureProfile]) -> Option<Belief> {
    let n = game.strategies(player).len();
    let rivals: Vec<usize> = (0..n).filter(|&j| j != k).collect();
    let cols = others.len() + rivals.len();
    let mut a = Vec::with_capacity(rivals.len() + 1);
    let mut b = Vec::with_capacity(rivals.len() + 1);
    for (r, &j) in rivals.iter().enumerate() {
        // Σ_o b_o (u(k, o) − u(j, o)) − t_j = 0
        let mut row = vec![Rational::zero(); cols];
        for (c, o) in others.iter().enumerate() {
            row[c] = game.utility(&with_own(o, player, k), player) - game.utility(&with_own(o, player, j), player);
        }
        row[others.len() + r] = -Rational::one();
        a.push(row);
        b.push(Rational::zero());
    }
    let mut total = vec![Rational::zero(); cols];
    total[..others.len()].fill(Rational::one());
    a.push(total);
    b.push(Rational::one());
    let x = feasible_point(&a, &b)?;
    Some(others.iter().cloned().zip(x).filter(|(_, p)| p.is_positive()).collect())
}

/// Iterated simultaneous elimination until nothing more is removed.
pub fn rationalizable(game: &StrategicGame) -> Rationalizable {
    let mut sets: Vec<Vec<usize>> = game.sizes().into_iter().map(|n| (0..n).collect()).collect();
    let mut eliminated = Vec::new();
    let mut round = 0;
    loop {
        round += 1;
        let mut beliefs = BTreeMap::new();
        let mut next = sets.clone();
        for player in 1..=game.players() {
            let sizes: Vec<usize> =
                sets.iter().enumerate().filter(|(j, _)| *j != player - 1).map(|(_, s)| s.len()).collect();
            let others: Vec<PureProfile> = all_profiles(&sizes)
                .into_iter()
                .map(|idx| {
                    let mut it = idx.into_iter();
                    (0..game.players())
                        .filter(|&j| j != player - 1)
                        .map(|j| sets[j][it.next().expect("one index per opponent")])
                        .collect()
                })
                .collect();
            for &k in &sets[player - 1] {
                match supporting_belief(game, player, k, &others) {
                    Some(b) => {
                        beliefs.insert((player, k), b);
                    }
                    None => {
                        next[player - 1].retain(|&s| s != k);
                        eliminated.push((player, k, round));
                    }
                }
            }
        }
        if next == sets {
            return Rationalizable { sets, eliminated, beliefs };
        }
        sets = next;
    }
}

/// A model in which rationality is common knowledge and some state has
/// `player` playing `strategy`.
pub fn witness_model(game: &StrategicGame, strategy: &str) -> Result<StrategicModel, Error> {
    let (player, k) = game.strategy_index(strategy)?;
    let r = rationalizable(game);
    if !r.survives(player, k) {
        return Err(Error::NotRationalizable(format!(
            "'{strategy}' (eliminated in round {})",
            r.round_eliminated(player, k).unwrap_or(0)
        )));
    }
    r.witness_model(game)
}

/// Whether every strategy in the support of `sigma` is rationalizable;
/// without `sigma` the check only reports the rationalizable sets. The
/// epistemic route confirms that rationality is common knowledge on the
/// witness model.
pub fn check_rationalizable(game: &StrategicGame, sigma: Option<&MixedProfile>, route: Route) -> Result<Verdict, Error> {
    let r = rationalizable(game);
    let mut failure = None;
    if let Some(sigma) = sigma {
        'players: for player in 1..=game.players() {
            for k in 0..game.strategies(player).len() {
                if sigma.prob(player, k).is_positive() && !r.survives(player, k) {
                    failure = Some(Counterexample {
                        player,
                        infoset: None,
                        state: None,
                        played: Some(game.strategies(player)[k].clone()),
                        deviation: None,
                        shortfall: None,
                        round: r.round_eliminated(player, k),
                    });
                    break 'players;
                }
            }
        }
    }
    if let Some(c) = failure {
        return Ok(Verdict::failed(Concept::Rationalizable, route, c));
    }
    let mut certificate = Certificate {
        profile: sigma.map(|s| MixedDoc::from_mixed(game, s)),
        rationalizable: Some(r.labels(game)),
        ..Default::default()
    };
    if route == Route::Epistemic {
        let model = r.witness_model(game)?;
        let report = ck_rationality_strategic(game, &model)?;
        if !report.pass {
            return Err(disagreement(Concept::Rationalizable, true, false));
        }
        certificate.epistemic = Some(EpistemicWitness {
            model: ModelDoc::from_strategic(game, &model),
            checks: vec![CkRecord { mode: None, eps: None, pass: true }],
        });
    }
    Ok(Verdict::passed(Concept::Rationalizable, route, certificate))
}
