//! Shared test support: a seeded random game generator and brute-force
//! oracles that only use the raw tree, never the library's valuation code.

#![allow(dead_code)]

use std::collections::BTreeMap;

use epicheck::field::{NonstdNum, Rational};
use epicheck::game::{Game, GameTree, InfoSetId, Node, NodeId, TreeBuilder};
use epicheck::strategy::{point_mass, BehavioralProfile};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Limits for [`random_tree`].
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_players: usize,
    pub max_depth: usize,
    pub max_actions: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { max_players: 3, max_depth: 4, max_actions: 3 }
    }
}

type GroupKey = (usize, usize, Vec<(usize, usize)>);

enum RawKind {
    Decision { player: usize, arity: usize },
    Chance { weights: Vec<i64> },
    Terminal,
}

struct RawNode {
    kind: RawKind,
    depth: usize,
    parent: Option<(usize, usize)>,
    children: Vec<usize>,
}

/// A random game with perfect recall: decision nodes at the same depth,
/// owned by the same player, with the same number of actions and the same
/// own experience are randomly merged into information sets. Payoffs are
/// halves in `[−5, 5]`.
pub fn random_tree(rng: &mut impl Rng, shape: Shape) -> GameTree {
    let players = rng.gen_range(1..=shape.max_players);
    let mut nodes: Vec<RawNode> = Vec::new();
    let mut stack = vec![(0usize, None)];
    while let Some((depth, parent)) = stack.pop() {
        let id = nodes.len();
        let roll: f64 = rng.gen();
        let kind = if depth == shape.max_depth || (depth > 0 && roll < 0.3) {
            RawKind::Terminal
        } else if depth > 0 && roll < 0.38 {
            RawKind::Chance { weights: (0..rng.gen_range(2..=shape.max_actions.max(2))).map(|_| rng.gen_range(1..=3)).collect() }
        } else {
            RawKind::Decision { player: rng.gen_range(1..=players), arity: rng.gen_range(2..=shape.max_actions.max(2)) }
        };
        let arity = match &kind {
            RawKind::Decision { arity, .. } => *arity,
            RawKind::Chance { weights } => weights.len(),
            RawKind::Terminal => 0,
        };
        nodes.push(RawNode { kind, depth, parent, children: Vec::new() });
        if let Some((p, _)) = parent {
            nodes[p].children.push(id);
        }
        for k in (0..arity).rev() {
            stack.push((depth + 1, Some((id, k))));
        }
    }

    // information sets, shallowest first so ancestors' sets are known
    let mut infoset: Vec<Option<usize>> = vec![None; nodes.len()];
    let mut owners: Vec<(usize, usize)> = Vec::new();
    for depth in 0..=shape.max_depth {
        // (player, arity, experience) -> nodes
        let mut groups: BTreeMap<GroupKey, Vec<usize>> = BTreeMap::new();
        for (id, n) in nodes.iter().enumerate() {
            if let (RawKind::Decision { player, arity }, true) = (&n.kind, n.depth == depth) {
                let mut exp = Vec::new();
                let mut cur = id;
                while let Some((p, k)) = nodes[cur].parent {
                    if let RawKind::Decision { player: q, .. } = nodes[p].kind {
                        if q == *player {
                            exp.push((infoset[p].expect("shallower sets assigned"), k));
                        }
                    }
                    cur = p;
                }
                exp.reverse();
                groups.entry((*player, *arity, exp)).or_default().push(id);
            }
        }
        for ((player, arity, _), mut members) in groups {
            members.shuffle(rng);
            let mut local: Vec<usize> = Vec::new();
            for m in members {
                let target = if !local.is_empty() && rng.gen_bool(0.5) {
                    local[rng.gen_range(0..local.len())]
                } else {
                    owners.push((player, arity));
                    local.push(owners.len() - 1);
                    owners.len() - 1
                };
                infoset[m] = Some(target);
            }
        }
    }

    let actions = ["a", "b", "c", "d", "e"];
    let mut b = TreeBuilder::new(players);
    for (k, &(player, arity)) in owners.iter().enumerate() {
        b = b.infoset(&format!("I{k}"), player, &actions[..arity]);
    }
    for (id, n) in nodes.iter().enumerate() {
        let name = format!("n{id}");
        b = match &n.kind {
            RawKind::Decision { .. } => {
                let kids: Vec<(String, String)> =
                    n.children.iter().enumerate().map(|(k, c)| (actions[k].to_string(), format!("n{c}"))).collect();
                let kids: Vec<(&str, &str)> = kids.iter().map(|(a, c)| (a.as_str(), c.as_str())).collect();
                b.decision(&name, &format!("I{}", infoset[id].unwrap()), &kids)
            }
            RawKind::Chance { weights } => {
                let total: i64 = weights.iter().sum();
                let outs: Vec<(String, Rational, String)> = n
                    .children
                    .iter()
                    .zip(weights)
                    .enumerate()
                    .map(|(k, (c, w))| (format!("c{k}"), Rational::frac(*w, total), format!("n{c}")))
                    .collect();
                let outs: Vec<(&str, Rational, &str)> = outs.iter().map(|(l, p, c)| (l.as_str(), p.clone(), c.as_str())).collect();
                b.chance(&name, &outs)
            }
            RawKind::Terminal => {
                let pay: Vec<Rational> = (0..players).map(|_| Rational::frac(rng.gen_range(-10..=10), 2)).collect();
                b.terminal(&name, pay)
            }
        };
    }
    b.build("n0")
}

pub fn random_game(rng: &mut impl Rng) -> Game {
    Game::new(random_tree(rng, Shape::default())).expect("generator emits valid games")
}

/// A random standard profile: pure at about half the sets, otherwise a
/// random mixture with small denominators (possibly leaving actions out).
pub fn random_profile(rng: &mut impl Rng, game: &Game) -> BehavioralProfile {
    let dists = game
        .infosets()
        .iter()
        .map(|is| {
            let n = is.actions.len();
            if rng.gen_bool(0.5) {
                return point_mass(n, rng.gen_range(0..n));
            }
            let mut w: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
            if w.iter().all(|&x| x == 0) {
                w[rng.gen_range(0..n)] = 1;
            }
            let total: i64 = w.iter().sum();
            w.iter().map(|&x| NonstdNum::from_rational(Rational::frac(x, total))).collect()
        })
        .collect();
    BehavioralProfile::new(game, dists).unwrap()
}

/// Repeatedly replaces each set's choice (deepest first) by a pure local
/// best reply against the uniform tremble of the current profile. Often
/// reaches a profile that passes the refinements, which keeps implication
/// tests from being vacuous.
pub fn greedy_profile(game: &Game, start: &BehavioralProfile) -> BehavioralProfile {
    let mut sigma = start.clone();
    for _ in 0..4 {
        let before = sigma.clone();
        let mut ids: Vec<InfoSetId> = game.infoset_ids().collect();
        ids.reverse();
        for id in ids {
            let trem = sigma.uniform_tremble().unwrap();
            let n = game.infoset(id).actions.len();
            let values: Vec<NonstdNum> = (0..n).map(|k| action_value(game, &trem, id, k)).collect();
            let best = (1..n).fold(0, |b, k| if values[k] > values[b] { k } else { b });
            sigma = sigma.with_dist(id, point_mass(n, best));
        }
        if sigma == before {
            break;
        }
    }
    sigma
}

/// Probability of reaching `h` under `p` and chance, by walking the path.
pub fn path_prob(game: &Game, p: &BehavioralProfile, h: NodeId) -> NonstdNum {
    let mut prob = NonstdNum::one();
    for (n, k) in game.path_steps(h) {
        let step = match game.node(n) {
            Node::Decision { infoset, .. } => p.prob(*infoset, k).clone(),
            Node::Chance { probs, .. } => NonstdNum::from_rational(probs[k].clone()),
            Node::Terminal { .. } => unreachable!("terminal nodes have no successors"),
        };
        prob = &prob * &step;
    }
    prob
}

/// Continuation value for `player` from `h`: the player's own sets use
/// `own`, everyone else's use `others`.
pub fn cont(
    game: &Game,
    player: usize,
    h: NodeId,
    own: &dyn Fn(InfoSetId) -> Vec<NonstdNum>,
    others: &BehavioralProfile,
) -> NonstdNum {
    match game.node(h) {
        Node::Terminal { payoffs } => NonstdNum::from_rational(payoffs[player - 1].clone()),
        Node::Chance { probs, children, .. } => probs
            .iter()
            .zip(children)
            .map(|(p, &c)| &NonstdNum::from_rational(p.clone()) * &cont(game, player, c, own, others))
            .sum(),
        Node::Decision { infoset, children } => {
            let dist = if game.infoset(*infoset).player == player { own(*infoset) } else { others.dist(*infoset).to_vec() };
            dist.iter()
                .zip(children)
                .filter(|(p, _)| !p.is_zero())
                .map(|(p, &c)| p * &cont(game, player, c, own, others))
                .sum()
        }
    }
}

/// `Σ_h Pr(h) · cont(h) / Pr(I)` under the tremble.
pub fn conditional(game: &Game, infoset: InfoSetId, trem: &BehavioralProfile, own: &dyn Fn(InfoSetId) -> Vec<NonstdNum>) -> NonstdNum {
    let player = game.infoset(infoset).player;
    let mut num = NonstdNum::zero();
    let mut den = NonstdNum::zero();
    for &h in &game.infoset(infoset).members {
        let r = path_prob(game, trem, h);
        num = &num + &(&r * &cont(game, player, h, own, trem));
        den = &den + &r;
    }
    &num / &den
}

/// Value at `infoset` of playing action `k` there and following the tremble
/// afterwards.
pub fn action_value(game: &Game, trem: &BehavioralProfile, infoset: InfoSetId, k: usize) -> NonstdNum {
    let n = game.infoset(infoset).actions.len();
    let own = |i: InfoSetId| if i == infoset { point_mass(n, k) } else { trem.dist(i).to_vec() };
    conditional(game, infoset, trem, &own)
}

/// Own sets at or below some member of `infoset`, in id order.
pub fn sets_below(game: &Game, infoset: InfoSetId) -> Vec<InfoSetId> {
    let player = game.infoset(infoset).player;
    let members = &game.infoset(infoset).members;
    game.player_infosets(player)
        .iter()
        .copied()
        .filter(|&j| game.infoset(j).members.iter().any(|&n| members.iter().any(|&h| game.is_prefix(h, n))))
        .collect()
}

pub fn continuation_count(game: &Game, infoset: InfoSetId) -> usize {
    sets_below(game, infoset).iter().map(|&j| game.infoset(j).actions.len()).product()
}

/// `(value of σ_i, best value over every pure continuation)` at `infoset`,
/// by enumerating all assignments of actions to the player's sets below it.
pub fn brute_global(
    game: &Game,
    infoset: InfoSetId,
    sigma: &BehavioralProfile,
    trem: &BehavioralProfile,
) -> (NonstdNum, NonstdNum) {
    let value = conditional(game, infoset, trem, &|i| sigma.dist(i).to_vec());
    let below = sets_below(game, infoset);
    let arities: Vec<usize> = below.iter().map(|&j| game.infoset(j).actions.len()).collect();
    let mut digits = vec![0usize; below.len()];
    let mut best: Option<NonstdNum> = None;
    loop {
        let choice: BTreeMap<InfoSetId, usize> = below.iter().copied().zip(digits.iter().copied()).collect();
        let own = |i: InfoSetId| match choice.get(&i) {
            Some(&k) => point_mass(game.infoset(i).actions.len(), k),
            None => sigma.dist(i).to_vec(),
        };
        let v = conditional(game, infoset, trem, &own);
        best = Some(match best {
            Some(b) if b >= v => b,
            _ => v,
        });
        let mut pos = 0;
        while pos < digits.len() && digits[pos] + 1 == arities[pos] {
            digits[pos] = 0;
            pos += 1;
        }
        if pos == digits.len() {
            break;
        }
        digits[pos] += 1;
    }
    (value, best.unwrap())
}

/// Ex-ante expected utility of `player` when they play pure `choice` at
/// their sets and everyone else follows `sigma`.
pub fn ex_ante(game: &Game, player: usize, sigma: &BehavioralProfile, choice: Option<&BTreeMap<InfoSetId, usize>>) -> NonstdNum {
    let own = |i: InfoSetId| match choice.and_then(|c| c.get(&i)) {
        Some(&k) => point_mass(game.infoset(i).actions.len(), k),
        None => sigma.dist(i).to_vec(),
    };
    cont(game, player, game.root(), &own, sigma)
}

/// Every pure strategy of `player`, capped at `limit`.
pub fn pure_strategies(game: &Game, player: usize, limit: usize) -> Option<Vec<BTreeMap<InfoSetId, usize>>> {
    let sets = game.player_infosets(player);
    let mut count = 1usize;
    for &j in sets {
        count = count.checked_mul(game.infoset(j).actions.len())?;
        if count > limit {
            return None;
        }
    }
    let mut out = Vec::with_capacity(count);
    let mut digits = vec![0usize; sets.len()];
    loop {
        out.push(sets.iter().copied().zip(digits.iter().copied()).collect());
        let mut pos = 0;
        while pos < digits.len() && digits[pos] + 1 == game.infoset(sets[pos]).actions.len() {
            digits[pos] = 0;
            pos += 1;
        }
        if pos == digits.len() {
            return Some(out);
        }
        digits[pos] += 1;
    }
}

/// The random extensive corpus used by the implication, bound and route
/// tests: `(game, candidate)` pairs, two candidates per game.
pub fn corpus(seed: u64, games: usize) -> Vec<(Game, BehavioralProfile)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for _ in 0..games {
        let g = random_game(&mut r);
        let s = random_profile(&mut r, &g);
        let greedy = greedy_profile(&g, &s);
        out.push((g.clone(), s));
        out.push((g, greedy));
    }
    out
}

pub fn fixtures_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[derive(serde::Serialize, serde::Deserialize)]
pub struct OracleCase {
    pub game: epicheck::format::GameFile,
    pub profile: epicheck::format::ProfileDoc,
}

pub const ORACLE_FILE: &str = "oracle_games.json";

/// The 50 games behind the enumeration oracle, drawn once from a fixed
/// seed and kept small enough to enumerate every continuation.
pub fn generate_oracle_cases() -> Vec<OracleCase> {
    let mut r = rng(0x0D15_EA5E);
    let mut out = Vec::new();
    while out.len() < 50 {
        let g = random_game(&mut r);
        if g.infosets().len() < 2 || g.infoset_ids().any(|i| continuation_count(&g, i) > 512) {
            continue;
        }
        let mut s = random_profile(&mut r, &g);
        if out.len() % 2 == 1 {
            s = greedy_profile(&g, &s);
        }
        let profile = epicheck::format::ProfileDoc::from_profile(&g, &s);
        out.push(OracleCase { game: epicheck::format::GameFile::Extensive(g.tree().clone()), profile });
    }
    out
}

pub fn oracle_cases() -> Vec<(Game, BehavioralProfile)> {
    let text = std::fs::read_to_string(fixtures_dir().join(ORACLE_FILE)).expect("oracle fixture present");
    let cases: Vec<OracleCase> = serde_json::from_str(&text).unwrap();
    cases
        .into_iter()
        .map(|c| {
            let epicheck::format::GameFile::Extensive(tree) = c.game else { panic!("oracle games are extensive") };
            let g = Game::new(tree).unwrap();
            let s = c.profile.to_profile(&g).unwrap();
            (g, s)
        })
        .collect()
}
