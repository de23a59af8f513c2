//! Property tests for the invariants of each module. Random games come from
//! the seeded generator in `common`; proptest drives the seeds.

mod common;

use epicheck::epistemic::{canonical_model, ck_rationality_strategic, Mode, ModelChecker};
use epicheck::field::{EpsPoly, NonstdNum, Rational};
use epicheck::game::{validate, Game, GameTree, InfoSetId, Node, NodeId, NodeSpec, StrategicGame};
use epicheck::response::{global_shortfall, min_support_prob, substitution_gap};
use epicheck::strategy::{BehavioralProfile, MixedProfile};
use epicheck::valuation::{cond_eu, expected_utility, induced_beliefs, outcome_distribution, reach_prob};
use epicheck::verify::{
    check_correlated, check_nash, check_perfect, check_quasi_perfect, check_rationalizable, check_sequential, rationalizable,
    Route, Verdict,
};
use proptest::prelude::*;
use rand::Rng;

use common::{ex_ante, greedy_profile, pure_strategies, random_game, random_profile, rng};

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::frac(n, d))
}

fn poly(len: usize) -> impl Strategy<Value = EpsPoly> {
    prop::collection::vec(rational(), 0..=len).prop_map(EpsPoly::new)
}

/// `ε^order · num / den` with every polynomial of degree at most 2.
fn nonstd() -> impl Strategy<Value = NonstdNum> {
    (-2i64..=2, poly(3), poly(3)).prop_map(|(order, num, den)| {
        let den = if den.is_zero() { EpsPoly::one() } else { den };
        NonstdNum::from_parts(order, num, den).unwrap()
    })
}

fn finite() -> impl Strategy<Value = NonstdNum> {
    nonstd().prop_filter("finite", NonstdNum::is_finite)
}

fn case(seed: u64) -> (Game, BehavioralProfile) {
    let mut r = rng(seed);
    let g = random_game(&mut r);
    let s = random_profile(&mut r, &g);
    if r.gen_bool(0.5) {
        let greedy = greedy_profile(&g, &s);
        return (g, greedy);
    }
    (g, s)
}

fn map_payoffs(game: &Game, f: impl Fn(usize, &Rational) -> Rational) -> Game {
    let mut tree: GameTree = game.tree().clone();
    for node in tree.nodes.values_mut() {
        if let NodeSpec::Terminal { payoffs } = node {
            *payoffs = payoffs.iter().enumerate().map(|(i, x)| f(i + 1, x)).collect();
        }
    }
    Game::new(tree).unwrap()
}

fn relabel_actions(game: &Game) -> Game {
    let mut tree: GameTree = game.tree().clone();
    let rename = |a: &str| format!("{a}~");
    for is in tree.infosets.values_mut() {
        is.actions = is.actions.iter().map(|a| rename(a)).collect();
    }
    for node in tree.nodes.values_mut() {
        if let NodeSpec::Decision { children, .. } = node {
            *children = children.iter().map(|(a, c)| (rename(a), c.clone())).collect();
        }
    }
    Game::new(tree).unwrap()
}

fn verdicts(g: &Game, s: &BehavioralProfile, route: Route) -> [Verdict; 3] {
    let t = s.uniform_tremble().unwrap();
    [
        check_perfect(g, s, &t, route).unwrap(),
        check_quasi_perfect(g, s, &t, route).unwrap(),
        check_sequential(g, s, &t, route).unwrap(),
    ]
}

/// Own (infoset, action) pairs on the path to `node`, read off the raw nodes.
fn experience(g: &Game, player: usize, node: NodeId) -> Vec<(InfoSetId, usize)> {
    g.path_steps(node)
        .into_iter()
        .filter_map(|(n, k)| match g.node(n) {
            Node::Decision { infoset, .. } if g.infoset(*infoset).player == player => Some((*infoset, k)),
            _ => None,
        })
        .collect()
}

fn strategic(seed: u64) -> (StrategicGame, MixedProfile) {
    let mut r = rng(seed);
    let sizes: Vec<usize> = (0..2).map(|_| r.gen_range(2..=3)).collect();
    let labels: Vec<Vec<String>> =
        sizes.iter().enumerate().map(|(p, &n)| (0..n).map(|k| format!("s{}{}", p + 1, k)).collect()).collect();
    let refs: Vec<Vec<&str>> = labels.iter().map(|l| l.iter().map(String::as_str).collect()).collect();
    let slices: Vec<&[&str]> = refs.iter().map(Vec::as_slice).collect();
    let g = StrategicGame::from_fn(&slices, |_| (0..2).map(|_| Rational::from_integer(r.gen_range(-3..=3))).collect()).unwrap();
    let probs = sizes
        .iter()
        .map(|&n| {
            let mut w: Vec<i64> = (0..n).map(|_| r.gen_range(0..=2)).collect();
            if w.iter().all(|&x| x == 0) {
                w[0] = 1;
            }
            let total: i64 = w.iter().sum();
            w.iter().map(|&x| Rational::frac(x, total)).collect()
        })
        .collect();
    (g.clone(), MixedProfile::new(&g, probs).unwrap())
}

/// Adds `c` to every payoff of player 1.
fn shift_strategic(g: &StrategicGame, c: &Rational) -> StrategicGame {
    let labels: Vec<Vec<&str>> = (1..=g.players()).map(|p| g.strategies(p).iter().map(String::as_str).collect()).collect();
    let slices: Vec<&[&str]> = labels.iter().map(Vec::as_slice).collect();
    StrategicGame::from_fn(&slices, |prof| (1..=g.players()).map(|p| if p == 1 { g.utility(prof, p) + c } else { g.utility(prof, p).clone() }).collect())
        .unwrap()
}

// field

proptest! {
    #[test]
    fn evaluation_is_a_homomorphism(a in nonstd(), b in nonstd()) {
        let e = Rational::frac(1, 1000);
        if let (Ok(x), Ok(y)) = (a.eval_at(&e), b.eval_at(&e)) {
            prop_assert_eq!((&a * &b).eval_at(&e).unwrap(), &x * &y);
            prop_assert_eq!((&a + &b).eval_at(&e).unwrap(), &x + &y);
        }
    }

    #[test]
    fn order_agrees_with_evaluation_near_zero(a in nonstd(), b in nonstd()) {
        let e = Rational::frac(1, 1_000_000);
        if let (Ok(x), Ok(y)) = (a.eval_at(&e), b.eval_at(&e)) {
            prop_assert_eq!(a.cmp(&b), x.cmp(&y));
        }
    }

    #[test]
    fn standard_part_is_additive(a in finite(), b in finite()) {
        let sum = (&a + &b).standard_part().unwrap();
        prop_assert_eq!(sum, a.standard_part().unwrap() + b.standard_part().unwrap());
    }

    #[test]
    fn powers_of_epsilon_lie_below_every_positive_rational(n in 1i64..1000, d in 1i64..1_000_000, k in 1u32..6) {
        let r = NonstdNum::from_rational(Rational::frac(n, d));
        let e = NonstdNum::epsilon().pow(k);
        prop_assert!(e.is_positive() && e < r);
    }

    #[test]
    fn canonical_form_makes_equality_structural(a in nonstd(), b in nonstd()) {
        // (a·b)/b rebuilt through a different route must be identical
        if !b.is_zero() {
            let back = &(&a * &b) / &b;
            prop_assert_eq!(&back, &a);
            prop_assert_eq!(back.order(), a.order());
        }
        if !a.is_zero() {
            prop_assert_eq!(a.den().constant_term(), Rational::one());
            prop_assert!(!a.num().constant_term().is_zero());
        }
    }

    #[test]
    fn numbers_round_trip_through_json(a in nonstd()) {
        let text = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<NonstdNum>(&text).unwrap(), a);
    }
}

// game, strategy, valuation

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn heights_decrease_along_own_sets(seed in any::<u64>()) {
        let (g, _) = case(seed);
        for player in 1..=g.players() {
            for &i in g.player_infosets(player) {
                for &j in g.player_infosets(player) {
                    if g.succ(i, j).unwrap() {
                        prop_assert!(g.height(i) < g.height(j));
                    }
                }
            }
        }
    }

    #[test]
    fn terminal_histories_match_terminal_nodes(seed in any::<u64>()) {
        let (g, _) = case(seed);
        let leaves = (0..g.node_count()).filter(|&n| matches!(g.node(NodeId(n)), Node::Terminal { .. })).count();
        prop_assert_eq!(g.terminal_histories().len(), leaves);
    }

    #[test]
    fn validation_is_idempotent(seed in any::<u64>()) {
        let (g, _) = case(seed);
        let tree = g.tree().clone();
        let first = validate(&tree);
        prop_assert!(first.is_ok());
        prop_assert_eq!(validate(&tree), first);
        prop_assert_eq!(&tree, g.tree());
    }

    #[test]
    fn members_of_a_set_share_experience(seed in any::<u64>()) {
        let (g, _) = case(seed);
        for is in g.infosets() {
            let first = experience(&g, is.player, is.members[0]);
            for &h in &is.members[1..] {
                prop_assert_eq!(&experience(&g, is.player, h), &first);
            }
        }
    }

    #[test]
    fn uniform_tremble_is_close_and_completely_mixed(seed in any::<u64>()) {
        let (_, s) = case(seed);
        let t = s.uniform_tremble().unwrap();
        prop_assert!(t.is_completely_mixed());
        prop_assert!(s.differ_infinitesimally(&t) && t.differ_infinitesimally(&s));
        prop_assert!(t.differ_infinitesimally(&t));
        prop_assert_eq!(t.standard_part().unwrap().uniform_tremble().unwrap(), t.clone());
        prop_assert_eq!(t.standard_part().unwrap(), s);
    }

    #[test]
    fn closeness_is_transitive(seed in any::<u64>()) {
        let (g, s) = case(seed);
        let t = s.uniform_tremble().unwrap();
        let half = NonstdNum::from_rational(Rational::frac(1, 2));
        let mid: Vec<Vec<NonstdNum>> = s
            .dists()
            .iter()
            .zip(t.dists())
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| &half * &(x + y)).collect())
            .collect();
        let mid = BehavioralProfile::new(&g, mid).unwrap();
        prop_assert!(s.differ_infinitesimally(&mid) && mid.differ_infinitesimally(&t) && s.differ_infinitesimally(&t));
    }

    #[test]
    fn outcome_distribution_sums_to_one(seed in any::<u64>()) {
        let (g, s) = case(seed);
        let t = s.uniform_tremble().unwrap();
        prop_assert_eq!(outcome_distribution(&g, &s).total(), NonstdNum::one());
        prop_assert_eq!(outcome_distribution(&g, &t).total(), NonstdNum::one());
    }

    #[test]
    fn reach_probability_splits_over_children(seed in any::<u64>()) {
        let (g, s) = case(seed);
        let t = s.uniform_tremble().unwrap();
        for n in 0..g.node_count() {
            let children = g.node(NodeId(n)).children();
            if !children.is_empty() {
                let split: NonstdNum = children.iter().map(|&c| reach_prob(&g, &t, c)).sum();
                prop_assert_eq!(split, reach_prob(&g, &t, NodeId(n)));
            }
        }
    }

    #[test]
    fn induced_beliefs_are_distributions(seed in any::<u64>()) {
        let (g, s) = case(seed);
        let mu = induced_beliefs(&g, &s.uniform_tremble().unwrap()).unwrap();
        for id in g.infoset_ids() {
            let total: NonstdNum = mu.at(id).iter().sum();
            prop_assert_eq!(total, NonstdNum::one());
            prop_assert!(mu.at(id).iter().all(|x| !x.is_negative()));
        }
    }

    #[test]
    fn conditional_value_at_a_root_set_is_ex_ante_value(seed in any::<u64>()) {
        let (g, s) = case(seed);
        let t = s.uniform_tremble().unwrap();
        if let Node::Decision { infoset, .. } = g.node(g.root()) {
            if g.infoset(*infoset).members.len() == 1 {
                let player = g.infoset(*infoset).player;
                let mu = induced_beliefs(&g, &t).unwrap();
                prop_assert_eq!(cond_eu(&g, player, &t, &mu, *infoset), expected_utility(&g, &t, player));
            }
        }
    }
}

// response, epistemic

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shortfalls_are_nonnegative_and_attained(seed in any::<u64>()) {
        let (g, s) = case(seed);
        let t = s.uniform_tremble().unwrap();
        for id in g.infoset_ids() {
            let sf = global_shortfall(&g, id, &s.strategy(&g, g.infoset(id).player), &t).unwrap();
            prop_assert!(!sf.amount.is_negative());
            prop_assert_eq!(&sf.best - &sf.value, sf.amount);
        }
    }

    #[test]
    fn shortfalls_ignore_translation_and_labels_and_scale_linearly(seed in any::<u64>(), c in rational(), k in 1i64..5) {
        let (g, s) = case(seed);
        let player = 1 + (seed as usize) % g.players();
        let k = Rational::from_integer(k);
        let shifted = map_payoffs(&g, |i, x| if i == player { x + &c } else { x.clone() });
        let scaled = map_payoffs(&g, |i, x| if i == player { x * &k } else { x.clone() });
        let renamed = relabel_actions(&g);
        let t = s.uniform_tremble().unwrap();
        let sigma_i = s.strategy(&g, player);
        for &id in g.player_infosets(player) {
            let base = global_shortfall(&g, id, &sigma_i, &t).unwrap().amount;
            prop_assert_eq!(&global_shortfall(&shifted, id, &sigma_i, &t).unwrap().amount, &base);
            prop_assert_eq!(&global_shortfall(&renamed, id, &sigma_i, &t).unwrap().amount, &base);
            let times = global_shortfall(&scaled, id, &sigma_i, &t).unwrap().amount;
            prop_assert_eq!(times, &base * &NonstdNum::from_rational(k.clone()));
        }
    }

    #[test]
    fn canonical_model_is_compatible_with_a_common_prior(seed in any::<u64>()) {
        let (g, s) = case(seed);
        let t = s.uniform_tremble().unwrap();
        let m = canonical_model(&g, &t);
        prop_assert!(epicheck::epistemic::is_compatible(&g, &m, &t));
        prop_assert!(m.has_common_prior());
        for p in m.priors() {
            prop_assert_eq!(p.iter().sum::<NonstdNum>(), NonstdNum::one());
        }
    }

    #[test]
    fn common_knowledge_is_monotone_in_eps(seed in any::<u64>()) {
        let (g, s) = case(seed);
        let t = s.uniform_tremble().unwrap();
        let m = canonical_model(&g, &t);
        let mut mc = ModelChecker::new(&g, &m, &t, &s).unwrap();
        for mode in [Mode::Local, Mode::Global] {
            let need = mc.required_eps(mode);
            prop_assert!(mc.ck(mode, &need).pass);
            prop_assert!(mc.ck(mode, &(&need + &NonstdNum::epsilon())).pass);
            prop_assert!(mc.ck(mode, &(&need + &NonstdNum::one())).pass);
            if need.is_positive() {
                let below = &need * &NonstdNum::from_rational(Rational::frac(1, 2));
                prop_assert!(!mc.ck(mode, &below).pass);
            }
        }
    }

    #[test]
    fn rationality_and_local_rationality_bound_each_other(seed in any::<u64>()) {
        let (g, s) = case(seed);
        let t = s.uniform_tremble().unwrap();
        let m = canonical_model(&g, &t);
        let mut mc = ModelChecker::new(&g, &m, &t, &s).unwrap();
        let r = NonstdNum::from_rational(min_support_prob(&s).unwrap());
        let eps = NonstdNum::epsilon();
        for player in 1..=g.players() {
            if g.player_infosets(player).is_empty() {
                continue;
            }
            let gap = substitution_gap(&g, &s.strategy(&g, player), &t).unwrap();
            let d = NonstdNum::from_int(g.max_height(player) as i64);
            for e in [NonstdNum::zero(), eps.clone(), eps.pow(2)] {
                let slack = &(&gap + &e) + &(&e / &r);
                let lifted = &d * &(&e + &gap);
                let all_local = (0..m.states().len()).all(|w| mc.is_rational_at(Mode::Local, player, w, &e));
                for w in 0..m.states().len() {
                    if mc.is_rational_at(Mode::Global, player, w, &e) {
                        prop_assert!(mc.is_rational_at(Mode::Local, player, w, &slack));
                    }
                    if all_local {
                        prop_assert!(mc.is_rational_at(Mode::Global, player, w, &lifted));
                    }
                }
            }
        }
    }
}

// verify

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn refinements_imply_sequential_and_routes_agree(seed in any::<u64>()) {
        let (g, s) = case(seed);
        let direct = verdicts(&g, &s, Route::Direct);
        let epistemic = verdicts(&g, &s, Route::Epistemic);
        for (a, b) in direct.iter().zip(&epistemic) {
            prop_assert!(a.is_well_formed() && b.is_well_formed());
            prop_assert_eq!(a.pass, b.pass);
        }
        prop_assert!(!direct[0].pass || direct[2].pass);
        prop_assert!(!direct[1].pass || direct[2].pass);
    }

    #[test]
    fn sequential_profiles_admit_no_profitable_ex_ante_deviation(seed in any::<u64>()) {
        let (g, s) = case(seed);
        let [_, _, seq] = verdicts(&g, &s, Route::Direct);
        if seq.pass {
            for player in 1..=g.players() {
                let Some(pure) = pure_strategies(&g, player, 256) else { continue };
                let value = ex_ante(&g, player, &s, None);
                for choice in &pure {
                    prop_assert!(ex_ante(&g, player, &s, Some(choice)) <= value);
                }
            }
        }
    }

    #[test]
    fn certificates_replay_to_identical_verdicts(seed in any::<u64>()) {
        let (g, s) = case(seed);
        let t = s.uniform_tremble().unwrap();
        for v in verdicts(&g, &s, Route::Epistemic) {
            let parsed: Verdict = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
            prop_assert_eq!(&parsed, &v);
            let trem = match parsed.certificate.as_ref().and_then(|c| c.tremble.as_ref()) {
                Some(doc) => doc.to_profile(&g).unwrap(),
                None => t.clone(),
            };
            let again = match v.concept.name() {
                "perfect" => check_perfect(&g, &s, &trem, Route::Epistemic),
                "quasi-perfect" => check_quasi_perfect(&g, &s, &trem, Route::Epistemic),
                _ => check_sequential(&g, &s, &trem, Route::Epistemic),
            }
            .unwrap();
            prop_assert_eq!(again, parsed);
        }
    }

    #[test]
    fn verdicts_ignore_payoff_translation(seed in any::<u64>(), c in rational()) {
        let (g, s) = case(seed);
        let player = 1 + (seed as usize) % g.players();
        let shifted = map_payoffs(&g, |i, x| if i == player { x + &c } else { x.clone() });
        let before = verdicts(&g, &s, Route::Direct);
        let after = verdicts(&shifted, &s, Route::Direct);
        for (a, b) in before.iter().zip(&after) {
            prop_assert_eq!(a.pass, b.pass);
            prop_assert_eq!(
                a.counterexample.as_ref().map(|x| (x.player, x.infoset.clone())),
                b.counterexample.as_ref().map(|x| (x.player, x.infoset.clone()))
            );
        }
    }

    #[test]
    fn strategic_routes_agree_and_nash_implies_the_weaker_concepts(seed in any::<u64>(), c in rational()) {
        let (g, sigma) = strategic(seed);
        let nash = check_nash(&g, &sigma, Route::Epistemic).unwrap();
        prop_assert_eq!(nash.pass, check_nash(&g, &sigma, Route::Direct).unwrap().pass);
        let eta = sigma.to_correlated(&g);
        let corr = check_correlated(&g, &eta, Route::Epistemic).unwrap();
        prop_assert_eq!(corr.pass, check_correlated(&g, &eta, Route::Direct).unwrap().pass);
        let rat = check_rationalizable(&g, Some(&sigma), Route::Epistemic).unwrap();
        prop_assert_eq!(rat.pass, check_rationalizable(&g, Some(&sigma), Route::Direct).unwrap().pass);
        if nash.pass {
            prop_assert!(corr.pass && rat.pass);
        }
        if corr.pass {
            prop_assert!(rat.pass);
        }

        let shifted = shift_strategic(&g, &c);
        prop_assert_eq!(check_nash(&shifted, &sigma, Route::Direct).unwrap().pass, nash.pass);
        prop_assert_eq!(check_correlated(&shifted, &eta, Route::Direct).unwrap().pass, corr.pass);
        prop_assert_eq!(check_rationalizable(&shifted, Some(&sigma), Route::Direct).unwrap().pass, rat.pass);
    }

    #[test]
    fn rationalizable_sets_have_a_universally_rational_witness(seed in any::<u64>()) {
        let (g, _) = strategic(seed);
        let r = rationalizable(&g);
        let m = r.witness_model(&g).unwrap();
        prop_assert!(ck_rationality_strategic(&g, &m).unwrap().pass);
        for player in 1..=g.players() {
            prop_assert!(!r.sets[player - 1].is_empty());
            for (k, _) in g.strategies(player).iter().enumerate() {
                prop_assert_eq!(r.survives(player, k), m.states().iter().any(|w| w.profile[player - 1] == k));
            }
        }
    }
}
