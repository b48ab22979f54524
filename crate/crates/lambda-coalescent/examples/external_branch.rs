//! The external branch of a tagged particle: its length converges to an
//! Exponential(p) law and the number of collisions up to its merger to a
//! Geometric(p) law, where p = E(1 − η).
//!
//! Run with: cargo run --release --example external_branch

use lambda_coalescent::limits::ks_distance;
use lambda_coalescent::simulate::{monte_carlo, Job};
use lambda_coalescent::CharacteristicMeasure;

fn main() -> lambda_coalescent::Result<()> {
    let measure = CharacteristicMeasure::uniform();
    let p = measure.mean_x()?;
    let n = 1_000_000u64;
    let replicates = 20_000u64;

    let table = monte_carlo(
        &Job::Tagged {
            measure: measure.clone(),
            n,
        },
        replicates,
        5,
        4,
    )?;

    let ks = ks_distance(&table.external_branches(), |x| {
        if x <= 0.0 {
            0.0
        } else {
            -(-p * x).exp_m1()
        }
    });
    println!("uniform measure, n = {n}, {replicates} replicates, p = {p}");
    println!("  KS(Z_n, Exponential({p})) = {ks:.4}");

    let counts = table.collisions_before();
    println!("  collisions before the tagged merger vs Geometric({p}):");
    for j in 1..=6u64 {
        let emp = counts.iter().filter(|&&g| g == j).count() as f64 / counts.len() as f64;
        let geom = p * (1.0 - p).powi(j as i32 - 1);
        println!("    P(G = {j}): empirical {emp:.4}, geometric {geom:.4}");
    }
    Ok(())
}
