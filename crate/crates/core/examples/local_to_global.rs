//! Turns local optimality at each information set into a global bound on a
//! game where one player moves twice.

use epicheck::field::NonstdNum;
use epicheck::game::Game;
use epicheck::response::{is_eps_best, is_local_eps_best_profile, local_to_global};
use epicheck::samples;
use epicheck::strategy::BehavioralProfile;

fn main() {
    let game = Game::new(samples::two_stage_tree()).unwrap();
    let sigma = BehavioralProfile::uniform(&game).standard_part().unwrap();
    let trem = sigma.uniform_tremble().unwrap();
    for player in 1..=game.players() {
        if game.player_infosets(player).is_empty() {
            continue;
        }
        let sigma_i = sigma.strategy(&game, player);
        let zero = NonstdNum::zero();
        let local = is_local_eps_best_profile(&game, &sigma_i, &trem, &zero).unwrap();
        let global = is_eps_best(&game, &sigma_i, &trem, &zero).unwrap();
        println!("player {player}: local best {}, global best {}", local.pass, global.pass);
        let eps = local.max_amount();
        match local_to_global(&game, &sigma_i, &trem, &eps) {
            Ok(cert) => println!(
                "  local {}-best ⇒ global {}-best (depth {}, substitution gap {})",
                cert.eps, cert.bound, cert.d, cert.eps_prime
            ),
            Err(e) => println!("  {e}"),
        }
    }
}
