//! Monte Carlo sampling of the collision count X_n and absorption time
//! τ_n with both samplers, checked against the closed-form mean
//! E X_n = H_{n−1} available for the uniform measure.
//!
//! Run with: cargo run --release --example collision_counts

use lambda_coalescent::simulate::{monte_carlo, Job};
use lambda_coalescent::{CharacteristicMeasure, RateTable};

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn main() -> lambda_coalescent::Result<()> {
    let measure = CharacteristicMeasure::uniform();
    let replicates = 50_000;
    let seed = 1;

    println!("uniform measure, {replicates} replicates per n");
    for n in [100u64, 1_000, 1_000_000_000] {
        let epoch = monte_carlo(
            &Job::Epoch {
                measure: measure.clone(),
                n,
            },
            replicates,
            seed,
            4,
        )?;
        let h: f64 = (1..n.min(10_000_000)).map(|k| 1.0 / k as f64).sum::<f64>()
            + if n > 10_000_000 {
                ((n - 1) as f64 / 1e7).ln()
            } else {
                0.0
            };
        println!(
            "  n = {n:>10}: mean X = {:>9.4} (harmonic number {h:.4}), mean tau = {:>8.4}",
            mean(&epoch.collisions()),
            mean(&epoch.taus()),
        );
    }

    // The embedded-chain sampler agrees in law; compare means at n = 200.
    let n = 200u64;
    let table = RateTable::build(&measure, n)?;
    let chain = monte_carlo(&Job::Chain { table: &table, n }, replicates, seed + 1, 4)?;
    let epoch = monte_carlo(
        &Job::Epoch {
            measure: measure.clone(),
            n,
        },
        replicates,
        seed + 2,
        4,
    )?;
    println!(
        "\n  n = {n}: chain sampler mean X = {:.4}, epoch sampler mean X = {:.4}",
        mean(&chain.collisions()),
        mean(&epoch.collisions()),
    );
    Ok(())
}
