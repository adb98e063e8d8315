//! The emission process is not Markov: how much the first emission shifts
//! the log-probability of the third, and how correlated two emissions are.

use tunnelinfo::tunneling::{pair_correlation_at, EIGHT_PI};
use tunnelinfo::{markov_violation, pair_correlation, BlackHoleState, Energy};

fn main() -> tunnelinfo::Result<()> {
    let (e1, e3) = (Energy::new(0.05)?, Energy::new(0.02)?);
    println!("8πE1E3 = {:.15}", EIGHT_PI * e1.value() * e3.value());
    println!("{:>6} {:>6} {:>20}", "M", "E2", "markov_violation");
    for mass in [1.0, 3.0, 10.0] {
        let state = BlackHoleState::new(mass)?;
        for e2 in [0.0, 0.1, 0.5] {
            let v = markov_violation(&state, e1, Energy::new(e2)?, e3)?;
            println!("{mass:>6} {e2:>6} {v:>20.15}");
        }
    }

    let (a, b) = (Energy::new(0.3)?, Energy::new(0.2)?);
    println!();
    println!("8πE1E2 = {:.15}", pair_correlation(a, b));
    for mass in [0.6, 2.0, 50.0] {
        let state = BlackHoleState::new(mass)?;
        println!(
            "ln P(E1,E2) - ln P(E1) - ln P(E2) at M = {mass:<4} : {:.15}",
            pair_correlation_at(&state, a, b)?
        );
    }
    Ok(())
}
