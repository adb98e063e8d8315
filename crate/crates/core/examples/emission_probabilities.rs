//! Single and joint emission probabilities at a fixed mass.
//!
//! cargo run --example emission_probabilities -- [mass] [energy]

use tunnelinfo::{delta_s, joint_log_prob, BlackHoleState, Energy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let mass: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1.0);
    let e: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0.1);

    let state = BlackHoleState::new(mass)?;
    println!(
        "M = {mass}, S_BH = {:.6} nats ({:.6} bits)",
        state.bh_entropy(),
        state.bh_entropy_bits()
    );

    let single = delta_s(&state, Energy::new(e)?)?;
    println!("ln P({e})            = {:.12}", single.ln());
    println!(
        "self-information     = {:.12} nats",
        single.self_information()
    );

    // splitting the same energy into pieces does not change the joint weight
    for pieces in [2usize, 5, 50] {
        let parts = vec![e / pieces as f64; pieces];
        let joint = joint_log_prob(&state, &Energy::list(&parts)?)?;
        println!(
            "ln P({pieces:>2} x {:.4})     = {:.12}",
            e / pieces as f64,
            joint.ln()
        );
    }

    let whole = delta_s(&state, Energy::new(mass)?)?;
    println!("ln P(E = M)          = {:.12}  (= -4πM²)", whole.ln());
    Ok(())
}
