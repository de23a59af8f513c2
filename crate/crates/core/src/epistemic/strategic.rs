use std::collections::BTreeMap;

use crate::error::Error;
use crate::field::NonstdNum;
use crate::game::{PureProfile, StrategicGame};

/// A state of a strategic-form model and the profile played there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategicState {
    pub name: String,
    pub profile: PureProfile,
}

/// A finite model `(Ω, s, (Pr_i))` of a strategic game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategicModel {
    states: Vec<StrategicState>,
    priors: Vec<Vec<NonstdNum>>,
}

impl StrategicModel {
    pub fn new(game: &StrategicGame, states: Vec<StrategicState>, priors: Vec<Vec<NonstdNum>>) -> Result<Self, Error> {
        if priors.len() != game.players() {
            return Err(Error::IncompatibleModel(format!("{} priors for {} players", priors.len(), game.players())));
        }
        let sizes = game.sizes();
        let mut names = std::collections::BTreeSet::new();
        for s in &states {
            if !names.insert(&s.name) {
                return Err(Error::IncompatibleModel(format!("state '{}' is listed twice", s.name)));
            }
            if s.profile.len() != sizes.len() || s.profile.iter().zip(&sizes).any(|(k, n)| k >= n) {
                return Err(Error::IncompatibleModel(format!("state '{}' has an invalid profile", s.name)));
            }
        }
        for (i, p) in priors.iter().enumerate() {
            let total: NonstdNum = p.iter().sum();
            if p.len() != states.len() || p.iter().any(NonstdNum::is_negative) || (!states.is_empty() && total != NonstdNum::one()) {
                return Err(Error::BadDistribution(format!("prior of player {} is not a distribution over the states", i + 1)));
            }
        }
        Ok(StrategicModel { states, priors })
    }

    /// Ω = profiles with positive weight, every prior equal to the weights.
    /// State names are the strategy labels joined by dots.
    pub fn from_distribution(game: &StrategicGame, weights: &[NonstdNum]) -> Result<Self, Error> {
        let mut states = Vec::new();
        let mut prior = Vec::new();
        for (p, w) in game.profiles().into_iter().zip(weights) {
            if w.is_positive() {
                states.push(StrategicState { name: game.labels(&p).join("."), profile: p });
                prior.push(w.clone());
            }
        }
        StrategicModel::new(game, states, vec![prior; game.players()])
    }

    pub fn states(&self) -> &[StrategicState] {
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
}

/// Opponents' part of a profile: player `i`'s entry removed.
pub fn opponents(profile: &[usize], player: usize) -> Vec<usize> {
    profile.iter().enumerate().filter(|(j, _)| *j != player - 1).map(|(_, &k)| k).collect()
}

/// Reinserts player `i`'s strategy into an opponents' profile.
pub fn with_own(others: &[usize], player: usize, own: usize) -> Vec<usize> {
    let mut p = others.to_vec();
    p.insert(player - 1, own);
    p
}

/// `Pr_{i,ω}^𝕊`: player `i`'s prior conditioned on their own strategy at
/// `w`, marginalized onto opponents' profiles.
pub fn condition_prior(model: &StrategicModel, player: usize, w: usize) -> Result<BTreeMap<Vec<usize>, NonstdNum>, Error> {
    let own = model.states[w].profile[player - 1];
    let mut joint: BTreeMap<Vec<usize>, NonstdNum> = BTreeMap::new();
    let mut total = NonstdNum::zero();
    for (s, p) in model.states.iter().zip(model.prior(player)) {
        if s.profile[player - 1] == own && !p.is_zero() {
            let e = joint.entry(opponents(&s.profile, player)).or_default();
            *e = &*e + p;
            total = &total + p;
        }
    }
    if total.is_zero() {
        return Err(Error::ZeroConditioningEvent(format!(
            "player {player} assigns probability 0 to their strategy at state '{}'",
            model.states[w].name
        )));
    }
    Ok(joint.into_iter().map(|(k, v)| (k, &v / &total)).collect())
}

/// Expected utility of each of `player`'s strategies against a belief
/// over opponents' profiles.
pub fn strategy_values(game: &StrategicGame, player: usize, belief: &BTreeMap<Vec<usize>, NonstdNum>) -> Vec<NonstdNum> {
    (0..game.strategies(player).len())
        .map(|k| {
            belief
                .iter()
                .map(|(o, p)| p * &NonstdNum::from_rational(game.utility(&with_own(o, player, k), player).clone()))
                .sum()
        })
        .collect()
}

/// Outcome of the rationality check for one player at one state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategicCheck {
    pub rational: bool,
    pub played: usize,
    /// Best strategy against the conditional belief (the first on ties).
    pub best: usize,
    /// `EU(best) − EU(played)`.
    pub gain: NonstdNum,
}

/// Whether `s_i(ω)` maximizes expected utility against `Pr_{i,ω}^𝕊` among
/// all of player `i`'s strategies.
pub fn is_rational_strategic(game: &StrategicGame, model: &StrategicModel, player: usize, w: usize) -> Result<StrategicCheck, Error> {
    let belief = condition_prior(model, player, w)?;
    let values = strategy_values(game, player, &belief);
    let played = model.states[w].profile[player - 1];
    let mut best = 0;
    for k in 1..values.len() {
        if values[k] > values[best] {
            best = k;
        }
    }
    let gain = &values[best] - &values[played];
    Ok(StrategicCheck { rational: !gain.is_positive(), played, best, gain })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategicFailure {
    pub player: usize,
    pub state: usize,
    pub check: StrategicCheck,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategicCkReport {
    pub pass: bool,
    pub degenerate: bool,
    pub failure: Option<StrategicFailure>,
}

/// Rationality of every player at every state; the reported failure is the
/// smallest `(player, state)`.
pub fn ck_rationality_strategic(game: &StrategicGame, model: &StrategicModel) -> Result<StrategicCkReport, Error> {
    for player in 1..=game.players() {
        for w in 0..model.states.len() {
            let check = is_rational_strategic(game, model, player, w)?;
            if !check.rational {
                return Ok(StrategicCkReport {
                    pass: false,
                    degenerate: false,
                    failure: Some(StrategicFailure { player, state: w, check }),
                });
            }
        }
    }
    Ok(StrategicCkReport { pass: true, degenerate: model.states.is_empty(), failure: None })
}

pub fn has_common_prior(model: &StrategicModel) -> bool {
    model.priors.windows(2).all(|w| w[0] == w[1])
}

/// `Pr_i^𝕊`: player `i`'s prior pushed to pure profiles.
pub fn profile_distribution(game: &StrategicGame, model: &StrategicModel, player: usize) -> Vec<NonstdNum> {
    let mut out = vec![NonstdNum::zero(); game.profiles().len()];
    for (s, p) in model.states.iter().zip(model.prior(player)) {
        let k = game.flat_index(&s.profile);
        out[k] = &out[k] + p;
    }
    out
}

/// Whether `Pr_i^𝕊` is the product of its one-player marginals.
pub fn is_product_prior(game: &StrategicGame, model: &StrategicModel, player: usize) -> bool {
    let dist = profile_distribution(game, model, player);
    let profiles = game.profiles();
    let marginals: Vec<Vec<NonstdNum>> = (0..game.players())
        .map(|j| {
            let mut m = vec![NonstdNum::zero(); game.strategies(j + 1).len()];
            for (p, x) in profiles.iter().zip(&dist) {
                m[p[j]] = &m[p[j]] + x;
            }
            m
        })
        .collect();
    profiles.iter().zip(&dist).all(|(p, x)| {
        let product = p.iter().enumerate().fold(NonstdNum::one(), |acc, (j, &k)| &acc * &marginals[j][k]);
        &product == x
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::samples;

    fn q(n: i64, d: i64) -> NonstdNum {
        NonstdNum::from_rational(Rational::frac(n, d))
    }

    #[test]
    fn matching_pennies_product_prior() {
        let g = samples::matching_pennies();
        let m = StrategicModel::from_distribution(&g, &vec![q(1, 4); 4]).unwrap();
        for w in 0..4 {
            let b = condition_prior(&m, 1, w).unwrap();
            assert_eq!(b.values().cloned().collect::<Vec<_>>(), [q(1, 2), q(1, 2)]);
            for i in 1..=2 {
                let c = is_rational_strategic(&g, &m, i, w).unwrap();
                assert!(c.rational && c.gain.is_zero());
            }
        }
        let r = ck_rationality_strategic(&g, &m).unwrap();
        assert!(r.pass);
        assert!(has_common_prior(&m));
        assert!(is_product_prior(&g, &m, 1) && is_product_prior(&g, &m, 2));
    }

    #[test]
    fn cooperation_is_not_rational() {
        let g = samples::prisoners_dilemma();
        let m = StrategicModel::from_distribution(&g, &[q(1, 1), q(0, 1), q(0, 1), q(0, 1)]).unwrap();
        let b = condition_prior(&m, 1, 0).unwrap();
        assert_eq!(b, BTreeMap::from([(vec![0], q(1, 1))]));
        let c = is_rational_strategic(&g, &m, 1, 0).unwrap();
        assert!(!c.rational);
        assert_eq!(g.strategies(1)[c.best], "D1");
    }

    #[test]
    fn chicken_correlated_model() {
        let g = samples::chicken();
        // profiles in order (D,D), (D,C), (C,D), (C,C)
        let m = StrategicModel::from_distribution(&g, &[q(0, 1), q(1, 3), q(1, 3), q(1, 3)]).unwrap();
        assert!(ck_rationality_strategic(&g, &m).unwrap().pass);
        assert!(has_common_prior(&m));
        assert!(!is_product_prior(&g, &m, 1));
        // told C, player 1 believes (D2, C2) with equal odds: EU(C) = 4, EU(D) = 7/2
        let w = m.state_index("C1.C2").unwrap();
        let b = condition_prior(&m, 1, w).unwrap();
        let v = strategy_values(&g, 1, &b);
        assert_eq!(v, [q(7, 2), q(4, 1)]);
    }

    #[test]
    fn zero_conditioning_event() {
        let g = samples::matching_pennies();
        let states = vec![
            StrategicState { name: "a".into(), profile: vec![0, 0] },
            StrategicState { name: "b".into(), profile: vec![1, 0] },
        ];
        let m = StrategicModel::new(&g, states, vec![vec![q(1, 1), q(0, 1)], vec![q(1, 2), q(1, 2)]]).unwrap();
        assert!(matches!(condition_prior(&m, 1, 1), Err(Error::ZeroConditioningEvent(_))));
        assert!(!has_common_prior(&m));
    }

    #[test]
    fn single_strategy_player_is_rational() {
        let g = StrategicGame::from_fn(&[&["only"], &["l", "r"]], |p| {
            vec![Rational::from_integer(p[1] as i64), Rational::zero()]
        })
        .unwrap();
        let m = StrategicModel::from_distribution(&g, &[q(1, 2), q(1, 2)]).unwrap();
        assert!(is_rational_strategic(&g, &m, 1, 0).unwrap().rational);
    }
}
