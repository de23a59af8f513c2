//! The entry game: (In, Accommodate) is sequential, perfect and quasi-perfect;
//! (Out, Fight) fails all three at the entrant's threat.

use epicheck::samples;
use epicheck::strategy::BehavioralProfile;
use epicheck::verify::{check_perfect, check_quasi_perfect, check_sequential, Route};

fn main() {
    let game = samples::entry_game();
    for (p1, p2) in [("In", "Accommodate"), ("Out", "Fight")] {
        let sigma = BehavioralProfile::pure(&game, &[("P1", p1), ("P2", p2)]).unwrap();
        let trem = sigma.uniform_tremble().unwrap();
        println!("({p1}, {p2})");
        for route in [Route::Direct, Route::Epistemic] {
            let verdicts = [
                check_perfect(&game, &sigma, &trem, route).unwrap(),
                check_quasi_perfect(&game, &sigma, &trem, route).unwrap(),
                check_sequential(&game, &sigma, &trem, route).unwrap(),
            ];
            for v in &verdicts {
                let why = match &v.counterexample {
                    Some(c) => format!(
                        " at {} (player {}), shortfall {}",
                        c.infoset.as_deref().unwrap_or("?"),
                        c.player,
                        c.shortfall.as_ref().map(ToString::to_string).unwrap_or_default()
                    ),
                    None => String::new(),
                };
                println!("  {:<13} {:<9?} {}{why}", v.concept.name(), route, if v.pass { "pass" } else { "fail" });
            }
        }
    }

    let sigma = BehavioralProfile::pure(&game, &[("P1", "In"), ("P2", "Accommodate")]).unwrap();
    let v = check_sequential(&game, &sigma, &sigma.uniform_tremble().unwrap(), Route::Epistemic).unwrap();
    println!("\n{}", serde_json::to_string_pretty(&v).unwrap());
}
