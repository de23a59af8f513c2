//! Nash, correlated and rationalizable checks on three classic 2×2 games.

use epicheck::epistemic::ck_rationality_strategic;
use epicheck::field::Rational;
use epicheck::samples;
use epicheck::strategy::{CorrelatedDist, MixedProfile};
use epicheck::verify::{check_correlated, check_nash, rationalizable, DeviationDoc, Route};

fn main() {
    let half = Rational::frac(1, 2);
    let pennies = samples::matching_pennies();
    let mixed = MixedProfile::new(&pennies, vec![vec![half.clone(), half.clone()], vec![half.clone(), half]]).unwrap();
    let v = check_nash(&pennies, &mixed, Route::Epistemic).unwrap();
    println!("matching pennies, 50/50 each: nash {}", v.pass);

    let pd = samples::prisoners_dilemma();
    let cc = MixedProfile::pure(&pd, &["C1", "C2"]).unwrap();
    let v = check_nash(&pd, &cc, Route::Direct).unwrap();
    let c = v.counterexample.unwrap();
    if let Some(DeviationDoc::Strategy(s)) = &c.deviation {
        println!("prisoner's dilemma (C, C): nash {}, player {} gains by switching to {s}", v.pass, c.player);
    }

    let chicken = samples::chicken();
    let third = Rational::frac(1, 3);
    let eta = CorrelatedDist::from_entries(
        &chicken,
        &[(vec!["D1", "C2"], third.clone()), (vec!["C1", "D2"], third.clone()), (vec!["C1", "C2"], third)],
    )
    .unwrap();
    for route in [Route::Direct, Route::Epistemic] {
        println!("chicken, uniform on (D,C) (C,D) (C,C): correlated {} ({route:?})", check_correlated(&chicken, &eta, route).unwrap().pass);
    }

    let game = samples::dominance_solvable();
    let r = rationalizable(&game);
    println!("dominance-solvable game: rationalizable sets {:?}", r.labels(&game));
    for (player, k, round) in &r.eliminated {
        println!("  {} eliminated in round {round}", game.strategies(*player)[*k]);
    }
    let model = r.witness_model(&game).unwrap();
    println!("  witness model with {} state(s): universal rationality {}", model.states().len(), ck_rationality_strategic(&game, &model).unwrap().pass);
}
