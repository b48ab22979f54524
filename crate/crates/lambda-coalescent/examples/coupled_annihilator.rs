//! The coupled coalescent-annihilator pair: one path in detail, then the
//! pathwise inequalities over many replicates.
//!
//! The annihilator removes every marked particle instead of merging them,
//! so its positive decrements form a composition of n, and on every path
//! K_n − K_{n,1} ≤ X_n ≤ K_n + K_{n,0} + X_after and σ_n ≤ τ_n.
//!
//! Run with: cargo run --release --example coupled_annihilator

use lambda_coalescent::rng::replicate_rng;
use lambda_coalescent::simulate::simulate_coupled;
use lambda_coalescent::CharacteristicMeasure;

fn main() -> lambda_coalescent::Result<()> {
    let measure = CharacteristicMeasure::uniform();

    let mut rng = replicate_rng(7, 0);
    let path = simulate_coupled(&measure, 30, &mut rng);
    println!("one coupled path from n = 30:");
    println!("  composition of 30: {:?}", path.composition);
    println!(
        "  X = {}, K = {}, K1 = {}, K0 = {}, U = {}, X_after = {}",
        path.collisions,
        path.annihilator_jumps,
        path.singular_jumps,
        path.idle_epochs,
        path.survivors,
        path.collisions_after,
    );
    println!(
        "  sigma = {:.4} <= tau = {:.4}",
        path.annihilator_absorption_time, path.absorption_time
    );

    let replicates = 20_000u64;
    for spec in ["uniform", "beta:2,1", "logpareto:0.5"] {
        let measure = CharacteristicMeasure::from_spec(spec)?;
        let mut violations = 0u64;
        let mut max_survivors = 0u64;
        for i in 0..replicates {
            let mut rng = replicate_rng(8, i);
            let s = simulate_coupled(&measure, 1_000, &mut rng);
            if !s.pathwise_bounds_hold() {
                violations += 1;
            }
            max_survivors = max_survivors.max(s.survivors);
        }
        println!(
            "\n{spec}: {replicates} replicates at n = 1000, \
             bound violations {violations}, largest U_n seen {max_survivors}"
        );
    }
    Ok(())
}
