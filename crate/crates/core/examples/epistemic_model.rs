//! Builds the canonical model of a tremble and checks common knowledge of
//! rationality state by state.

use epicheck::epistemic::{canonical_model, Mode, ModelChecker};
use epicheck::field::NonstdNum;
use epicheck::format::ModelDoc;
use epicheck::samples;
use epicheck::strategy::BehavioralProfile;

fn main() {
    let game = samples::entry_game();
    let sigma = BehavioralProfile::pure(&game, &[("P1", "Out"), ("P2", "Fight")]).unwrap();
    let trem = sigma.uniform_tremble().unwrap();
    let model = canonical_model(&game, &trem);

    println!("{}", serde_json::to_string_pretty(&ModelDoc::from_extensive(&game, &model)).unwrap());

    let mut checker = ModelChecker::new(&game, &model, &trem, &sigma).unwrap();
    for mode in [Mode::Local, Mode::Global] {
        let report = checker.ck(mode, &NonstdNum::zero());
        match &report.failure {
            Some(f) => println!(
                "{mode:?}: fails for player {} at {} (shortfall {})",
                f.player,
                model.states()[f.state].name,
                f.shortfall.amount
            ),
            None => println!("{mode:?}: rational everywhere"),
        }
        println!("{mode:?}: smallest tolerance that passes is {}", checker.required_eps(mode));
    }
}
