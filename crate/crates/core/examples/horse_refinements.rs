//! Classifies every pure profile of Selten's horse, loaded from its JSON
//! file, under the three refinements. The uniform tremble certifies none of
//! them; a search over trembles finds one for (C, c, R), where player 3 must
//! believe player 2 erred more likely than player 1.

use epicheck::format::GameFile;
use epicheck::game::Game;
use epicheck::strategy::BehavioralProfile;
use epicheck::format::ProfileDoc;
use epicheck::verify::{check_perfect, check_quasi_perfect, check_sequential, search_tremble, Budget, Concept, Route};

fn main() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/horse.game.json");
    let file: GameFile = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let GameFile::Extensive(tree) = file else { panic!("horse is an extensive game") };
    let game = Game::new(tree).unwrap();

    println!("{:<10} {:>8} {:>14} {:>11}", "profile", "perfect", "quasi-perfect", "sequential");
    for a in ["C", "D"] {
        for b in ["c", "d"] {
            for c in ["L", "R"] {
                let sigma = BehavioralProfile::pure(&game, &[("I1", a), ("I2", b), ("I3", c)]).unwrap();
                let trem = sigma.uniform_tremble().unwrap();
                let mark = |pass: bool| if pass { "yes" } else { "-" };
                println!(
                    "({a}, {b}, {c})  {:>8} {:>14} {:>11}",
                    mark(check_perfect(&game, &sigma, &trem, Route::Direct).unwrap().pass),
                    mark(check_quasi_perfect(&game, &sigma, &trem, Route::Direct).unwrap().pass),
                    mark(check_sequential(&game, &sigma, &trem, Route::Direct).unwrap().pass),
                );
            }
        }
    }

    let sigma = BehavioralProfile::pure(&game, &[("I1", "C"), ("I2", "c"), ("I3", "R")]).unwrap();
    for concept in [Concept::Perfect, Concept::QuasiPerfect, Concept::Sequential] {
        match search_tremble(&game, &sigma, concept, &Budget::default()) {
            Ok(found) => {
                println!("\n(C, c, R) is {} under this tremble ({} tried):", concept.name(), found.tried);
                println!("{}", serde_json::to_string(&ProfileDoc::from_profile(&game, &found.tremble)).unwrap());
            }
            Err(e) => println!("\n(C, c, R) {}: {e}", concept.name()),
        }
    }
}
