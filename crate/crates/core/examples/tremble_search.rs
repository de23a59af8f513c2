//! Looks for a tremble that certifies a profile, within a budget.

use epicheck::samples;
use epicheck::strategy::BehavioralProfile;
use epicheck::verify::{search_tremble, Budget, Concept};
use epicheck::Error;

fn main() {
    let game = samples::entry_game();
    let budget = Budget::default();
    for (p1, p2) in [("In", "Accommodate"), ("Out", "Fight")] {
        let sigma = BehavioralProfile::pure(&game, &[("P1", p1), ("P2", p2)]).unwrap();
        for concept in [Concept::Perfect, Concept::QuasiPerfect, Concept::Sequential] {
            match search_tremble(&game, &sigma, concept, &budget) {
                Ok(found) => println!(
                    "({p1}, {p2}) {}: certified after {} candidate(s), top exponent {}",
                    concept.name(),
                    found.tried,
                    found.exponent
                ),
                Err(Error::BudgetExhausted) => println!("({p1}, {p2}) {}: no certificate within the budget", concept.name()),
                Err(e) => println!("({p1}, {p2}) {}: {e}", concept.name()),
            }
        }
    }
}
