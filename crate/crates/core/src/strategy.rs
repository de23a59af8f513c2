//! Behavioral strategies with entries in ℝ(ε), trembles, and mixed or
//! correlated strategy distributions for strategic games.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::field::{EpsPoly, NonstdNum, Rational};
use crate::game::{Game, InfoSetId, StrategicGame};

fn check_distribution(what: &str, dist: &[NonstdNum], arity: usize) -> Result<(), Error> {
    if dist.len() != arity {
        return Err(Error::BadDistribution(format!("{what}: {} entries for {arity} actions", dist.len())));
    }
    if let Some(x) = dist.iter().find(|x| x.is_negative()) {
        return Err(Error::BadDistribution(format!("{what}: negative entry {x}")));
    }
    let total: NonstdNum = dist.iter().sum();
    if total != NonstdNum::one() {
        return Err(Error::BadDistribution(format!("{what}: entries sum to {total}")));
    }
    Ok(())
}

/// One player's part of a behavioral profile: a distribution over the
/// actions of each of their information sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehavioralStrategy {
    player: usize,
    choice: BTreeMap<InfoSetId, Vec<NonstdNum>>,
}

impl BehavioralStrategy {
    pub fn player(&self) -> usize {
        self.player
    }

    pub fn choice(&self) -> &BTreeMap<InfoSetId, Vec<NonstdNum>> {
        &self.choice
    }

    pub fn dist(&self, infoset: InfoSetId) -> Option<&[NonstdNum]> {
        self.choice.get(&infoset).map(Vec::as_slice)
    }

    /// `σ_i[I/a]`: the same strategy except at `infoset`, where `dist` is
    /// played.
    pub fn substitute(&self, game: &Game, infoset: InfoSetId, dist: Vec<NonstdNum>) -> Result<Self, Error> {
        let is = game.infoset(infoset);
        if is.player != self.player {
            return Err(Error::WrongPlayer { player: self.player, infoset: is.name.clone() });
        }
        check_distribution(&is.name, &dist, is.actions.len())?;
        let mut out = self.clone();
        out.choice.insert(infoset, dist);
        Ok(out)
    }
}

/// A behavioral strategy profile covering every information set of a game.
/// Entries are elements of ℝ(ε); standard profiles simply have rational
/// entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehavioralProfile {
    /// Indexed by `InfoSetId`.
    dists: Vec<Vec<NonstdNum>>,
}

impl BehavioralProfile {
    /// Checks that every information set gets a distribution over exactly
    /// its actions: entries nonnegative, summing to exactly 1.
    pub fn new(game: &Game, dists: Vec<Vec<NonstdNum>>) -> Result<Self, Error> {
        if dists.len() != game.infosets().len() {
            return Err(Error::BadDistribution(format!(
                "profile covers {} of {} information sets",
                dists.len(),
                game.infosets().len()
            )));
        }
        for (is, d) in game.infosets().iter().zip(&dists) {
            check_distribution(&is.name, d, is.actions.len())?;
        }
        Ok(BehavioralProfile { dists })
    }

    /// A pure profile from `(infoset, action)` name pairs, one per
    /// information set.
    pub fn pure(game: &Game, choices: &[(&str, &str)]) -> Result<Self, Error> {
        let mut dists: Vec<Option<Vec<NonstdNum>>> = vec![None; game.infosets().len()];
        for (is_name, action) in choices {
            let id = game.infoset_id(is_name)?;
            let k = game.action_index(id, action)?;
            let mut d = vec![NonstdNum::zero(); game.infoset(id).actions.len()];
            d[k] = NonstdNum::one();
            dists[id.0] = Some(d);
        }
        let dists = dists
            .into_iter()
            .enumerate()
            .map(|(k, d)| {
                d.ok_or_else(|| Error::BadDistribution(format!("no action for '{}'", game.infosets()[k].name)))
            })
            .collect::<Result<_, _>>()?;
        BehavioralProfile::new(game, dists)
    }

    /// Every information set plays its actions with equal probability.
    pub fn uniform(game: &Game) -> Self {
        let dists = game
            .infosets()
            .iter()
            .map(|is| {
                let n = is.actions.len() as i64;
                vec![NonstdNum::from_rational(Rational::frac(1, n)); is.actions.len()]
            })
            .collect();
        BehavioralProfile { dists }
    }

    pub fn dists(&self) -> &[Vec<NonstdNum>] {
        &self.dists
    }

    pub fn dist(&self, infoset: InfoSetId) -> &[NonstdNum] {
        &self.dists[infoset.0]
    }

    pub fn prob(&self, infoset: InfoSetId, action: usize) -> &NonstdNum {
        &self.dists[infoset.0][action]
    }

    fn entries(&self) -> impl Iterator<Item = &NonstdNum> {
        self.dists.iter().flatten()
    }

    /// Every action at every information set has positive probability.
    pub fn is_completely_mixed(&self) -> bool {
        self.entries().all(NonstdNum::is_positive)
    }

    /// Every entry is a rational number.
    pub fn is_standard(&self) -> bool {
        self.entries().all(NonstdNum::is_standard)
    }

    /// Entrywise standard part. Unit sums survive because the standard
    /// part is additive on finite elements.
    pub fn standard_part(&self) -> Result<Self, Error> {
        let dists = self
            .dists
            .iter()
            .map(|d| d.iter().map(|x| x.standard_part().map(NonstdNum::from_rational)).collect())
            .collect::<Result<_, _>>()?;
        Ok(BehavioralProfile { dists })
    }

    /// True iff every corresponding pair of entries differs by an
    /// infinitesimal (the difference has standard part 0).
    pub fn differ_infinitesimally(&self, other: &BehavioralProfile) -> bool {
        self.dists.len() == other.dists.len()
            && self.dists.iter().zip(&other.dists).all(|(a, b)| {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).is_infinitesimal())
            })
    }

    /// `σ′(I)(a) = (1 − |A_I|·ε)·σ(I)(a) + ε` at every information set.
    pub fn uniform_tremble(&self) -> Result<Self, Error> {
        if !self.is_standard() {
            return Err(Error::InvalidTremble("uniform tremble needs a standard profile".into()));
        }
        let eps = NonstdNum::epsilon();
        let dists = self
            .dists
            .iter()
            .map(|d| {
                let keep = NonstdNum::one() - &NonstdNum::from_int(d.len() as i64) * &eps;
                d.iter().map(|x| &(&keep * x) + &eps).collect()
            })
            .collect();
        Ok(BehavioralProfile { dists })
    }

    /// Adds the given positive infinitesimal polynomial to selected entries
    /// and renormalizes each information set. The result must be
    /// completely mixed.
    pub fn custom_tremble(&self, game: &Game, spec: &BTreeMap<(InfoSetId, usize), EpsPoly>) -> Result<Self, Error> {
        let mut dists = self.dists.clone();
        for (&(infoset, action), poly) in spec {
            let t = NonstdNum::from_poly(poly.clone());
            let name = &game.infoset(infoset).name;
            if !t.is_positive() || !t.is_infinitesimal() {
                return Err(Error::InvalidTremble(format!(
                    "tremble {t} on '{name}' must be a positive infinitesimal"
                )));
            }
            let slot = dists
                .get_mut(infoset.0)
                .and_then(|d| d.get_mut(action))
                .ok_or_else(|| Error::InvalidTremble(format!("no action {action} at '{name}'")))?;
            *slot = &*slot + &t;
        }
        for (k, d) in dists.iter_mut().enumerate() {
            let total: NonstdNum = d.iter().sum();
            if !total.is_positive() {
                return Err(Error::InvalidTremble(format!("'{}' cannot be normalized", game.infosets()[k].name)));
            }
            for x in d.iter_mut() {
                *x = &*x / &total;
            }
            if d.iter().any(|x| !x.is_positive()) {
                return Err(Error::InvalidTremble(format!(
                    "'{}' is not completely mixed after the tremble",
                    game.infosets()[k].name
                )));
            }
        }
        Ok(BehavioralProfile { dists })
    }

    pub fn strategy(&self, game: &Game, player: usize) -> BehavioralStrategy {
        BehavioralStrategy {
            player,
            choice: game.player_infosets(player).iter().map(|&i| (i, self.dists[i.0].clone())).collect(),
        }
    }

    /// `(σ_i, self_{−i})`: replaces the entries of the strategy's player.
    pub fn with_strategy(&self, s: &BehavioralStrategy) -> Self {
        let mut out = self.clone();
        for (i, d) in &s.choice {
            out.dists[i.0] = d.clone();
        }
        out
    }

    /// Replaces the distribution at one information set.
    pub fn with_dist(&self, infoset: InfoSetId, dist: Vec<NonstdNum>) -> Self {
        let mut out = self.clone();
        out.dists[infoset.0] = dist;
        out
    }

    /// Largest polynomial degree among the entries; a rough size measure.
    pub fn max_degree(&self) -> usize {
        self.entries().map(NonstdNum::max_degree).max().unwrap_or(0)
    }
}

/// A pure-action point mass over `n` actions.
pub fn point_mass(n: usize, k: usize) -> Vec<NonstdNum> {
    (0..n).map(|j| if j == k { NonstdNum::one() } else { NonstdNum::zero() }).collect()
}

fn check_rational_dist(what: &str, dist: &[Rational], arity: usize) -> Result<(), Error> {
    if dist.len() != arity {
        return Err(Error::BadDistribution(format!("{what}: {} entries for {arity} outcomes", dist.len())));
    }
    if let Some(x) = dist.iter().find(|x| x.is_negative()) {
        return Err(Error::BadDistribution(format!("{what}: negative entry {x}")));
    }
    let total: Rational = dist.iter().sum();
    if !total.is_one() {
        return Err(Error::BadDistribution(format!("{what}: entries sum to {total}")));
    }
    Ok(())
}

/// Independent mixed strategies of a strategic game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedProfile {
    /// `probs[i - 1][k]`: probability that player `i` plays strategy `k`.
    probs: Vec<Vec<Rational>>,
}

impl MixedProfile {
    pub fn new(game: &StrategicGame, probs: Vec<Vec<Rational>>) -> Result<Self, Error> {
        if probs.len() != game.players() {
            return Err(Error::BadDistribution(format!("{} mixed strategies for {} players", probs.len(), game.players())));
        }
        for (i, p) in probs.iter().enumerate() {
            check_rational_dist(&format!("player {}", i + 1), p, game.strategies(i + 1).len())?;
        }
        Ok(MixedProfile { probs })
    }

    /// Point masses on the named strategies, one per player in order.
    pub fn pure(game: &StrategicGame, labels: &[&str]) -> Result<Self, Error> {
        let profile = game.parse_profile(labels)?;
        let probs = profile
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                (0..game.strategies(i + 1).len())
                    .map(|j| if j == k { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        Ok(MixedProfile { probs })
    }

    pub fn probs(&self) -> &[Vec<Rational>] {
        &self.probs
    }

    pub fn prob(&self, player: usize, k: usize) -> &Rational {
        &self.probs[player - 1][k]
    }

    /// Probability of a pure profile under independent play.
    pub fn joint(&self, profile: &[usize]) -> Rational {
        profile.iter().enumerate().map(|(i, &k)| &self.probs[i][k]).fold(Rational::one(), |acc, p| &acc * p)
    }

    /// The product distribution `Pr_σ` over pure profiles.
    pub fn to_correlated(&self, game: &StrategicGame) -> CorrelatedDist {
        CorrelatedDist { probs: game.profiles().iter().map(|p| self.joint(p)).collect() }
    }
}

/// A distribution over pure strategy profiles, indexed like
/// [`StrategicGame::profiles`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelatedDist {
    probs: Vec<Rational>,
}

impl CorrelatedDist {
    pub fn new(game: &StrategicGame, probs: Vec<Rational>) -> Result<Self, Error> {
        let n = game.profiles().len();
        check_rational_dist("distribution", &probs, n)?;
        Ok(CorrelatedDist { probs })
    }

    /// From `(label profile, probability)` pairs; unlisted profiles get 0.
    pub fn from_entries<S: AsRef<str>>(game: &StrategicGame, entries: &[(Vec<S>, Rational)]) -> Result<Self, Error> {
        let mut probs = vec![Rational::zero(); game.profiles().len()];
        for (labels, p) in entries {
            let k = game.flat_index(&game.parse_profile(labels)?);
            probs[k] = &probs[k] + p;
        }
        CorrelatedDist::new(game, probs)
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn prob(&self, game: &StrategicGame, profile: &[usize]) -> &Rational {
        &self.probs[game.flat_index(profile)]
    }

    /// Pure profiles with positive probability, in profile order.
    pub fn support(&self, game: &StrategicGame) -> Vec<Vec<usize>> {
        game.profiles().into_iter().zip(&self.probs).filter(|(_, p)| p.is_positive()).map(|(s, _)| s).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn n(s: &str) -> NonstdNum {
        s.parse().unwrap()
    }

    fn eps() -> NonstdNum {
        NonstdNum::epsilon()
    }

    #[test]
    fn uniform_tremble_of_pure_and_half() {
        let g = samples::entry_game();
        let sigma = BehavioralProfile::pure(&g, &[("P1", "In"), ("P2", "Accommodate")]).unwrap();
        assert!(!sigma.is_completely_mixed());
        let t = sigma.uniform_tremble().unwrap();
        let p1 = g.infoset_id("P1").unwrap();
        assert_eq!(t.dist(p1), [&NonstdNum::one() - &eps(), eps()]);
        assert!(t.is_completely_mixed());
        assert!(sigma.differ_infinitesimally(&t));
        assert_eq!(t.standard_part().unwrap(), sigma);

        let half = BehavioralProfile::uniform(&g);
        assert_eq!(half.uniform_tremble().unwrap(), half);
    }

    #[test]
    fn idempotent_through_standard_parts() {
        let g = Game::new(samples::horse_tree()).unwrap();
        let sigma = BehavioralProfile::pure(&g, &[("I1", "C"), ("I2", "d"), ("I3", "R")]).unwrap();
        let t = sigma.uniform_tremble().unwrap();
        assert_eq!(t.standard_part().unwrap().uniform_tremble().unwrap(), t);
    }

    #[test]
    fn partial_mixing_is_not_complete() {
        let g = Game::new(samples::two_stage_tree()).unwrap();
        let p = BehavioralProfile::new(
            &g,
            vec![vec![NonstdNum::one(), NonstdNum::zero()], vec![&NonstdNum::one() - &eps(), eps()]],
        )
        .unwrap();
        assert!(!p.is_completely_mixed());
        assert!(!p.is_standard());
    }

    #[test]
    fn standard_part_of_nonstandard_pair() {
        let g = Game::new(samples::two_stage_tree()).unwrap();
        // ((1 − ε)/2 + ε, (1 + ε)/2 − ε) = (1/2 + ε/2, 1/2 − ε/2)
        let a = &(&(&NonstdNum::one() - &eps()) / &NonstdNum::from_int(2)) + &eps();
        let b = &(&(&NonstdNum::one() + &eps()) / &NonstdNum::from_int(2)) - &eps();
        let p = BehavioralProfile::new(&g, vec![vec![a.clone(), b.clone()], vec![n("1"), n("0")]]).unwrap();
        let st = p.standard_part().unwrap();
        assert_eq!(st.dist(InfoSetId(0)), [n("1/2"), n("1/2")]);
        let e = Rational::frac(1, 1_000_000);
        for (x, s) in [(a, "1/2"), (b, "1/2")] {
            let v = x.eval_at(&e).unwrap();
            let diff = (&v - &s.parse::<Rational>().unwrap()).abs();
            assert!(diff < Rational::frac(1, 1000));
        }
    }

    #[test]
    fn far_profiles_do_not_differ_infinitesimally() {
        let g = Game::new(samples::two_stage_tree()).unwrap();
        let pure = BehavioralProfile::new(&g, vec![vec![n("1"), n("0")], vec![n("1"), n("0")]]).unwrap();
        let half = BehavioralProfile::uniform(&g);
        assert!(!pure.differ_infinitesimally(&half));
        assert!(pure.differ_infinitesimally(&pure));
    }

    #[test]
    fn custom_tremble_keeps_relative_order() {
        let g = Game::new(samples::horse_tree()).unwrap();
        let sigma = BehavioralProfile::pure(&g, &[("I1", "C"), ("I2", "c"), ("I3", "L")]).unwrap();
        let mut spec = BTreeMap::new();
        spec.insert((InfoSetId(0), 1), EpsPoly::monomial(Rational::one(), 2));
        spec.insert((g.infoset_id("I2").unwrap(), 1), EpsPoly::monomial(Rational::one(), 1));
        spec.insert((g.infoset_id("I3").unwrap(), 1), EpsPoly::monomial(Rational::one(), 1));
        let t = sigma.custom_tremble(&g, &spec).unwrap();
        assert!(t.is_completely_mixed());
        assert!(t.differ_infinitesimally(&sigma));
        let d1 = t.prob(InfoSetId(0), 1);
        let d2 = t.prob(g.infoset_id("I2").unwrap(), 1);
        assert!(d1 < d2);
        assert_eq!(d1.order(), 2);

        let mixed = BehavioralProfile::uniform(&g);
        assert_eq!(mixed.custom_tremble(&g, &BTreeMap::new()).unwrap(), mixed);

        let mut neg = BTreeMap::new();
        neg.insert((InfoSetId(0), 1), EpsPoly::monomial(Rational::from_integer(-1), 1));
        assert!(matches!(sigma.custom_tremble(&g, &neg), Err(Error::InvalidTremble(_))));
        assert!(matches!(sigma.custom_tremble(&g, &BTreeMap::new()), Err(Error::InvalidTremble(_))));
    }

    #[test]
    fn substitution() {
        let g = samples::entry_game();
        let sigma = BehavioralProfile::pure(&g, &[("P1", "In"), ("P2", "Accommodate")]).unwrap();
        let p2 = g.infoset_id("P2").unwrap();
        let s2 = sigma.strategy(&g, 2);
        assert_eq!(s2.substitute(&g, p2, sigma.dist(p2).to_vec()).unwrap(), s2);
        let fight = s2.substitute(&g, p2, point_mass(2, 0)).unwrap();
        assert_eq!(fight.dist(p2).unwrap(), point_mass(2, 0));
        let p1 = g.infoset_id("P1").unwrap();
        assert!(matches!(s2.substitute(&g, p1, point_mass(2, 0)), Err(Error::WrongPlayer { .. })));
        assert!(matches!(s2.substitute(&g, p2, vec![n("1/2"), n("1/3")]), Err(Error::BadDistribution(_))));
        let back = sigma.with_strategy(&fight);
        assert_eq!(back.dist(p2), point_mass(2, 0));
        assert_eq!(back.dist(p1), sigma.dist(p1));
    }

    #[test]
    fn mixed_and_correlated() {
        let mp = samples::matching_pennies();
        let half = vec![Rational::frac(1, 2), Rational::frac(1, 2)];
        let m = MixedProfile::new(&mp, vec![half.clone(), half]).unwrap();
        assert_eq!(m.joint(&[0, 1]), Rational::frac(1, 4));
        let c = m.to_correlated(&mp);
        assert_eq!(c.support(&mp).len(), 4);
        assert!(MixedProfile::new(&mp, vec![vec![Rational::one(), Rational::one()], vec![Rational::one(), Rational::zero()]]).is_err());
        let pd = samples::prisoners_dilemma();
        let cc = MixedProfile::pure(&pd, &["C1", "C2"]).unwrap();
        assert_eq!(cc.to_correlated(&pd).support(&pd), vec![vec![0, 0]]);
    }
}
