//! Small textbook games used by the examples, the tests and the docs.

use crate::field::Rational;
use crate::game::{Game, GameTree, StrategicGame, TreeBuilder};

fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Entry deterrence. Player 1 chooses `In` or `Out`; after `In`, player 2
/// chooses `Fight` or `Accommodate`. Payoffs: `Out` (0, 2), `In·Fight`
/// (-1, -1), `In·Accommodate` (1, 1).
pub fn entry_tree() -> GameTree {
    TreeBuilder::new(2)
        .infoset("P1", 1, &["In", "Out"])
        .infoset("P2", 2, &["Fight", "Accommodate"])
        .decision("root", "P1", &[("In", "entered"), ("Out", "out")])
        .decision("entered", "P2", &[("Fight", "fight"), ("Accommodate", "acc")])
        .terminal("out", [0, 2])
        .terminal("fight", [-1, -1])
        .terminal("acc", [1, 1])
        .build("root")
}

pub fn entry_game() -> Game {
    Game::new(entry_tree()).expect("entry game is valid")
}

/// Player 1 moves twice in a row (`a`/`b`, then `c`/`d` after `a`), so the
/// second information set succeeds the first.
pub fn two_stage_tree() -> GameTree {
    TreeBuilder::new(1)
        .infoset("first", 1, &["a", "b"])
        .infoset("second", 1, &["c", "d"])
        .decision("root", "first", &[("a", "x"), ("b", "zb")])
        .decision("x", "second", &[("c", "zc"), ("d", "zd")])
        .terminal("zb", [1])
        .terminal("zc", [2])
        .terminal("zd", [0])
        .build("root")
}

/// Player 1 forgets their own first move: both successors share one
/// information set.
pub fn forgetful_tree() -> GameTree {
    TreeBuilder::new(1)
        .infoset("first", 1, &["L", "R"])
        .infoset("later", 1, &["l", "r"])
        .decision("root", "first", &[("L", "xl"), ("R", "xr")])
        .decision("xl", "later", &[("l", "z1"), ("r", "z2")])
        .decision("xr", "later", &[("l", "z3"), ("r", "z4")])
        .terminal("z1", [1])
        .terminal("z2", [0])
        .terminal("z3", [0])
        .terminal("z4", [1])
        .build("root")
}

/// Selten's horse: three players, player 3 cannot tell whether player 1
/// or player 2 moved down.
pub fn horse_tree() -> GameTree {
    TreeBuilder::new(3)
        .infoset("I1", 1, &["C", "D"])
        .infoset("I2", 2, &["c", "d"])
        .infoset("I3", 3, &["L", "R"])
        .decision("root", "I1", &[("C", "n2"), ("D", "n3a")])
        .decision("n2", "I2", &[("c", "top"), ("d", "n3b")])
        .decision("n3a", "I3", &[("L", "zal"), ("R", "zar")])
        .decision("n3b", "I3", &[("L", "zbl"), ("R", "zbr")])
        .terminal("top", [1, 1, 1])
        .terminal("zal", [3, 3, 2])
        .terminal("zar", [0, 0, 0])
        .terminal("zbl", [4, 4, 0])
        .terminal("zbr", [0, 0, 1])
        .build("root")
}

/// Prisoner's dilemma with labels `C1`/`D1` and `C2`/`D2`.
pub fn prisoners_dilemma() -> StrategicGame {
    let table = [[(3, 3), (0, 5)], [(5, 0), (1, 1)]];
    StrategicGame::from_fn(&[&["C1", "D1"], &["C2", "D2"]], |p| {
        let (a, b) = table[p[0]][p[1]];
        vec![q(a), q(b)]
    })
    .expect("valid table")
}

/// Matching pennies; player 1 wins on a match.
pub fn matching_pennies() -> StrategicGame {
    StrategicGame::from_fn(&[&["H1", "T1"], &["H2", "T2"]], |p| {
        let s = if p[0] == p[1] { 1 } else { -1 };
        vec![q(s), q(-s)]
    })
    .expect("valid table")
}

/// Chicken: `u(D,D) = (0,0)`, `u(D,C) = (7,2)`, `u(C,D) = (2,7)`,
/// `u(C,C) = (6,6)`.
pub fn chicken() -> StrategicGame {
    let table = [[(0, 0), (7, 2)], [(2, 7), (6, 6)]];
    StrategicGame::from_fn(&[&["D1", "C1"], &["D2", "C2"]], |p| {
        let (a, b) = table[p[0]][p[1]];
        vec![q(a), q(b)]
    })
    .expect("valid table")
}

/// A 2×2 game solved by two rounds of strict dominance: `B` dominates `T`
/// for player 1, then `L` is the unique reply.
pub fn dominance_solvable() -> StrategicGame {
    let table = [[(1, 2), (0, 1)], [(2, 1), (3, 0)]];
    StrategicGame::from_fn(&[&["T", "B"], &["L", "R"]], |p| {
        let (a, b) = table[p[0]][p[1]];
        vec![q(a), q(b)]
    })
    .expect("valid table")
}
