use std::collections::BTreeMap;

use crate::epistemic::{canonical_model, CkReport, ExtensiveModel, Mode, ModelChecker};
use crate::error::Error;
use crate::field::{EpsPoly, NonstdNum, Rational};
use crate::format::{BeliefDoc, ModelDoc, ProfileDoc};
use crate::game::{Game, InfoSetId};
use crate::response::{local_to_global, min_support_prob, Responder, Shortfall};
use crate::strategy::BehavioralProfile;
use crate::valuation::induced_beliefs;

use super::{disagreement, Certificate, CkRecord, Concept, Counterexample, DeviationDoc, EpistemicWitness, Route, Verdict};

fn preconditions(sigma: &BehavioralProfile, trem: &BehavioralProfile) -> Result<(), Error> {
    if !trem.is_completely_mixed() {
        return Err(Error::NotCompletelyMixed("the tremble must give every action positive probability".into()));
    }
    if !sigma.is_standard() {
        return Err(Error::PreconditionFailed("the candidate profile must be standard".into()));
    }
    if !sigma.differ_infinitesimally(trem) {
        return Err(Error::NotInfinitesimallyClose("the tremble must be infinitesimally close to the candidate".into()));
    }
    Ok(())
}

fn counterexample(game: &Game, s: &Shortfall, state: Option<String>, played: Option<String>) -> Counterexample {
    let moves = s.deviation.labels(game).into_iter().map(|(i, a)| (i.to_string(), a.to_string())).collect();
    Counterexample {
        player: s.player,
        infoset: Some(game.infoset(s.infoset).name.clone()),
        state,
        played,
        deviation: Some(DeviationDoc::Moves(moves)),
        shortfall: Some(s.amount.clone()),
        round: None,
    }
}

/// The single action σ plays at `infoset`, if σ is pure there.
fn pure_action(game: &Game, sigma: &BehavioralProfile, infoset: InfoSetId) -> Option<String> {
    let d = sigma.dist(infoset);
    d.iter().position(|x| x == &NonstdNum::one()).map(|k| game.infoset(infoset).actions[k].clone())
}

fn ck_counterexample(game: &Game, model: &ExtensiveModel, sigma: &BehavioralProfile, report: &CkReport) -> Option<Counterexample> {
    report.failure.as_ref().map(|f| {
        let state = model.states()[f.state].name.clone();
        // the action taken at the failing set on the way to the state
        let played = game
            .path_steps(model.states()[f.state].outcome)
            .into_iter()
            .find(|&(n, _)| matches!(game.node(n), crate::game::Node::Decision { infoset, .. } if *infoset == f.shortfall.infoset))
            .map(|(_, k)| game.infoset(f.shortfall.infoset).actions[k].clone())
            .or_else(|| pure_action(game, sigma, f.shortfall.infoset));
        counterexample(game, &f.shortfall, Some(state), played)
    })
}

fn base_certificate(game: &Game, trem: &BehavioralProfile, eps: NonstdNum) -> Result<Certificate, Error> {
    let mu = induced_beliefs(game, trem)?.standard_part()?;
    Ok(Certificate {
        tremble: Some(ProfileDoc::from_profile(game, trem)),
        eps: Some(eps),
        belief: Some(BeliefDoc::from_beliefs(game, &mu)),
        ..Default::default()
    })
}

fn finish(
    concept: Concept,
    route: Route,
    direct: Option<Counterexample>,
    epistemic: Option<Option<Counterexample>>,
    certificate: impl FnOnce() -> Result<Certificate, Error>,
) -> Result<Verdict, Error> {
    let failure = match epistemic {
        Some(e) => {
            if e.is_none() != direct.is_none() {
                return Err(disagreement(concept, direct.is_none(), e.is_none()));
            }
            e
        }
        None => direct,
    };
    Ok(match failure {
        Some(c) => Verdict::failed(concept, route, c),
        None => Verdict::passed(concept, route, certificate()?),
    })
}

fn witness(game: &Game, model: &ExtensiveModel, checks: Vec<CkRecord>) -> EpistemicWitness {
    EpistemicWitness { model: ModelDoc::from_extensive(game, model), checks }
}

/// Trembling-hand perfection relative to `trem`: at every information set,
/// `σ(I)` is a local best reply. The epistemic route checks that local
/// rationality is common knowledge on the canonical model of `trem`.
pub fn check_perfect(game: &Game, sigma: &BehavioralProfile, trem: &BehavioralProfile, route: Route) -> Result<Verdict, Error> {
    preconditions(sigma, trem)?;
    let mut responder = Responder::new(game, trem)?;
    let mut direct = None;
    for id in game.infoset_ids() {
        let s = responder.local_shortfall(id, sigma.dist(id))?;
        if s.amount.is_positive() {
            direct = Some(counterexample(game, &s, None, pure_action(game, sigma, id)));
            break;
        }
    }
    let mut checks = None;
    let mut model = None;
    let epistemic = if route == Route::Epistemic {
        let m = canonical_model(game, trem);
        let report = ModelChecker::new(game, &m, trem, sigma)?.ck(Mode::Local, &NonstdNum::zero());
        checks = Some(vec![CkRecord { mode: Some(Mode::Local), eps: Some(NonstdNum::zero()), pass: report.pass }]);
        let c = ck_counterexample(game, &m, sigma, &report);
        model = Some(m);
        Some(c)
    } else {
        None
    };
    finish(Concept::Perfect, route, direct, epistemic, || {
        let mut cert = base_certificate(game, trem, NonstdNum::zero())?;
        for player in 1..=game.players() {
            if !game.player_infosets(player).is_empty() {
                cert.bounds.push(local_to_global(game, &sigma.strategy(game, player), trem, &NonstdNum::zero())?);
            }
        }
        if let (Some(m), Some(c)) = (&model, checks) {
            cert.epistemic = Some(witness(game, m, c));
        }
        Ok(cert)
    })
}

/// Quasi-perfection relative to `trem`: each player's σ_i is a best reply
/// at every one of their information sets. The epistemic route checks that
/// rationality is common knowledge on the canonical model.
pub fn check_quasi_perfect(
    game: &Game,
    sigma: &BehavioralProfile,
    trem: &BehavioralProfile,
    route: Route,
) -> Result<Verdict, Error> {
    preconditions(sigma, trem)?;
    let responder = Responder::new(game, trem)?;
    let mut direct = None;
    for player in 1..=game.players() {
        let report = responder.global_report(&sigma.strategy(game, player), &NonstdNum::zero());
        if let Some(s) = report.first_failure() {
            direct = Some(counterexample(game, s, None, pure_action(game, sigma, s.infoset)));
            break;
        }
    }
    let mut checks = None;
    let mut model = None;
    let epistemic = if route == Route::Epistemic {
        let m = canonical_model(game, trem);
        let report = ModelChecker::new(game, &m, trem, sigma)?.ck(Mode::Global, &NonstdNum::zero());
        checks = Some(vec![CkRecord { mode: Some(Mode::Global), eps: Some(NonstdNum::zero()), pass: report.pass }]);
        let c = ck_counterexample(game, &m, sigma, &report);
        model = Some(m);
        Some(c)
    } else {
        None
    };
    finish(Concept::QuasiPerfect, route, direct, epistemic, || {
        let mut cert = base_certificate(game, trem, NonstdNum::zero())?;
        if let (Some(m), Some(c)) = (&model, checks) {
            cert.epistemic = Some(witness(game, m, c));
        }
        Ok(cert)
    })
}

/// Per-player quantities for the sequential cross-checks.
struct PlayerSlack {
    global: NonstdNum,
    local: NonstdNum,
    gap: NonstdNum,
}

/// Sequential equilibrium relative to `trem`: with ε* the largest global
/// shortfall over all information sets, σ passes iff ε* is infinitesimal.
/// The certificate carries ε* and the standard part of the induced beliefs.
///
/// The epistemic route computes the least ε at which ε-rationality, and the
/// least at which local ε-rationality, is common knowledge on the canonical
/// model. All three must agree on infinitesimality, and per player the
/// local and global slacks must respect `ε* ≤ d(ε_loc + ε′)` and
/// `ε_loc ≤ ε′ + ε* + ε*/r`, where ε′ is the substitution gap and `r` the
/// smallest positive probability in σ.
pub fn check_sequential(
    game: &Game,
    sigma: &BehavioralProfile,
    trem: &BehavioralProfile,
    route: Route,
) -> Result<Verdict, Error> {
    preconditions(sigma, trem)?;
    let mut responder = Responder::new(game, trem)?;
    let mut eps_star = NonstdNum::zero();
    let mut direct = None;
    let mut slack = Vec::new();
    for player in 1..=game.players() {
        let report = responder.global_report(&sigma.strategy(game, player), &NonstdNum::zero());
        if direct.is_none() {
            if let Some(s) = report.shortfalls.iter().find(|s| !s.amount.is_infinitesimal()) {
                direct = Some(counterexample(game, s, None, pure_action(game, sigma, s.infoset)));
            }
        }
        let global = report.max_amount();
        eps_star = eps_star.max(global.clone());
        slack.push(global);
    }
    if direct.is_none() != eps_star.is_infinitesimal() {
        return Err(Error::RouteDisagreement("ε* and the per-set shortfalls disagree".into()));
    }

    let mut checks = None;
    let mut model = None;
    let mut bounds_input = None;
    let epistemic = if route == Route::Epistemic {
        let m = canonical_model(game, trem);
        let (eps_b, eps_c, report_b) = {
            let mut checker = ModelChecker::new(game, &m, trem, sigma)?;
            let eps_b = checker.required_eps(Mode::Global);
            let eps_c = checker.required_eps(Mode::Local);
            // the least ε that works is ε* itself; check the failure at 0 if
            // even that is not infinitesimal
            let at = if eps_b.is_infinitesimal() { eps_b.clone() } else { NonstdNum::zero() };
            let report_b = checker.ck(Mode::Global, &at);
            (eps_b, eps_c, report_b)
        };
        if eps_b != eps_star {
            return Err(Error::RouteDisagreement(format!("model route needs ε = {eps_b}, direct route found ε* = {eps_star}")));
        }
        if eps_b.is_infinitesimal() != eps_c.is_infinitesimal() {
            return Err(disagreement(Concept::Sequential, eps_b.is_infinitesimal(), eps_c.is_infinitesimal()));
        }

        let r = min_support_prob(sigma)?;
        let mut per_player = Vec::new();
        for (player, global) in (1..=game.players()).zip(&slack) {
            let sigma_i = sigma.strategy(game, player);
            let gap = responder.substitution_gap(&sigma_i)?;
            let mut local = NonstdNum::zero();
            for &id in game.player_infosets(player) {
                for (k, p) in sigma.dist(id).iter().enumerate() {
                    if p.is_positive() {
                        let n = game.infoset(id).actions.len();
                        local = local.max(responder.local_shortfall(id, &crate::strategy::point_mass(n, k))?.amount);
                    }
                }
            }
            per_player.push(PlayerSlack { global: global.clone(), local, gap });
        }
        check_bounds(game, &per_player, &r)?;
        bounds_input = Some(per_player);

        checks = Some(vec![
            CkRecord { mode: Some(Mode::Global), eps: Some(eps_b.clone()), pass: eps_b.is_infinitesimal() },
            CkRecord { mode: Some(Mode::Local), eps: Some(eps_c.clone()), pass: eps_c.is_infinitesimal() },
        ]);
        let c = if eps_b.is_infinitesimal() { None } else { ck_counterexample(game, &m, sigma, &report_b) };
        model = Some(m);
        Some(c)
    } else {
        None
    };
    finish(Concept::Sequential, route, direct, epistemic, || {
        let mut cert = base_certificate(game, trem, eps_star.clone())?;
        if let Some(per_player) = &bounds_input {
            for (player, ps) in (1..=game.players()).zip(per_player) {
                if !game.player_infosets(player).is_empty() {
                    cert.bounds.push(local_to_global(game, &sigma.strategy(game, player), trem, &ps.local)?);
                }
            }
        }
        if let (Some(m), Some(c)) = (&model, checks) {
            cert.epistemic = Some(witness(game, m, c));
        }
        Ok(cert)
    })
}

fn check_bounds(game: &Game, per_player: &[PlayerSlack], r: &Rational) -> Result<(), Error> {
    let r = NonstdNum::from_rational(r.clone());
    for (player, ps) in (1..=game.players()).zip(per_player) {
        let d = NonstdNum::from_int(game.max_height(player) as i64);
        let upper = &d * &(&ps.local + &ps.gap);
        if ps.global > upper {
            return Err(Error::BoundViolation(format!("player {player}: global slack {} exceeds {upper}", ps.global)));
        }
        let back = &(&ps.gap + &ps.global) + &(&ps.global / &r);
        if ps.local > back {
            return Err(Error::BoundViolation(format!("player {player}: local slack {} exceeds {back}", ps.local)));
        }
    }
    Ok(())
}

/// Limits for [`search_tremble`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    /// Largest exponent `k` in a tremble term `c·ε^k`.
    pub max_exponent: u32,
    /// Coefficients `c` to try.
    pub coefficients: Vec<Rational>,
    /// Most candidate trembles to check.
    pub max_candidates: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_exponent: 2,
            coefficients: vec![Rational::one(), Rational::from_integer(2)],
            max_candidates: 4096,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub tremble: BehavioralProfile,
    /// Largest exponent used.
    pub exponent: u32,
    /// Candidates checked, including the successful one.
    pub tried: usize,
    pub verdict: Verdict,
}

/// Looks for a tremble under which `sigma` passes `concept`.
///
/// The uniform tremble is tried first, then every assignment of a monomial
/// `c·ε^k` to each action outside σ's support (renormalized per set), by
/// increasing largest exponent. Running out of candidates is reported as
/// [`Error::BudgetExhausted`], never as a failing verdict.
pub fn search_tremble(game: &Game, sigma: &BehavioralProfile, concept: Concept, budget: &Budget) -> Result<SearchResult, Error> {
    if concept.is_strategic() {
        return Err(Error::FormMismatch { concept: concept.to_string(), form: "extensive" });
    }
    if !sigma.is_standard() {
        return Err(Error::PreconditionFailed("the candidate profile must be standard".into()));
    }
    let check = |trem: &BehavioralProfile| match concept {
        Concept::Perfect => check_perfect(game, sigma, trem, Route::Direct),
        Concept::QuasiPerfect => check_quasi_perfect(game, sigma, trem, Route::Direct),
        _ => check_sequential(game, sigma, trem, Route::Direct),
    };
    let mut tried = 0;
    if budget.max_candidates == 0 || budget.max_exponent == 0 {
        return Err(Error::BudgetExhausted);
    }
    let uniform = sigma.uniform_tremble()?;
    tried += 1;
    let verdict = check(&uniform)?;
    if verdict.pass {
        return Ok(SearchResult { tremble: uniform, exponent: 1, tried, verdict });
    }

    let off: Vec<(InfoSetId, usize)> = game
        .infoset_ids()
        .flat_map(|id| (0..sigma.dist(id).len()).filter(move |&k| sigma.dist(id)[k].is_zero()).map(move |k| (id, k)))
        .collect();
    if off.is_empty() {
        // σ is already completely mixed; it is its own only tremble
        tried += 1;
        let verdict = check(sigma)?;
        if verdict.pass {
            return Ok(SearchResult { tremble: sigma.clone(), exponent: 0, tried, verdict });
        }
        return Err(Error::BudgetExhausted);
    }
    for top in 1..=budget.max_exponent {
        let terms: Vec<(Rational, u32)> = (1..=top)
            .flat_map(|k| budget.coefficients.iter().filter(|c| c.is_positive()).map(move |c| (c.clone(), k)))
            .collect();
        if terms.is_empty() {
            break;
        }
        let mut digits = vec![0usize; off.len()];
        loop {
            // only assignments that use the new exponent, so each is tried once
            if digits.iter().any(|&d| terms[d].1 == top) {
                if tried >= budget.max_candidates {
                    return Err(Error::BudgetExhausted);
                }
                tried += 1;
                let spec: BTreeMap<(InfoSetId, usize), EpsPoly> = off
                    .iter()
                    .zip(&digits)
                    .map(|(&slot, &d)| (slot, EpsPoly::monomial(terms[d].0.clone(), terms[d].1 as usize)))
                    .collect();
                let trem = sigma.custom_tremble(game, &spec)?;
                let verdict = check(&trem)?;
                if verdict.pass {
                    return Ok(SearchResult { tremble: trem, exponent: top, tried, verdict });
                }
            }
            let mut pos = 0;
            while pos < digits.len() && digits[pos] + 1 == terms.len() {
                digits[pos] = 0;
                pos += 1;
            }
            if pos == digits.len() {
                break;
            }
            digits[pos] += 1;
        }
    }
    Err(Error::BudgetExhausted)
}
