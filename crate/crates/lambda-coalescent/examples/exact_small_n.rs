//! The exact law of the collision count for small n, two ways: dynamic
//! programming over the death chain, and (for beta(1, b) measures) the
//! convolution of independent indicators. The two routes agree to
//! floating-point accuracy.
//!
//! Run with: cargo run --example exact_small_n

use lambda_coalescent::oracle::{exact_expected_times, exact_x_distribution, indicator_distribution};
use lambda_coalescent::{CharacteristicMeasure, RateTable};

fn main() -> lambda_coalescent::Result<()> {
    let b = 2.0;
    let n = 10u64;
    let measure = CharacteristicMeasure::beta(1.0, b)?;
    let table = RateTable::build(&measure, n)?;

    let dp = exact_x_distribution(&table, n)?;
    let conv = indicator_distribution(b, n);

    println!("collision-count law for beta(1,{b}) at n = {n}");
    println!("  j    death-chain DP     indicator convolution");
    let mut worst: f64 = 0.0;
    for (j, p) in dp.support.iter().zip(&dp.pmf) {
        let q = conv.prob(*j);
        worst = worst.max((p - q).abs());
        println!("  {j:>2}   {p:.12}     {q:.12}");
    }
    println!("  mean {:.6}, variance {:.6}", dp.mean, dp.variance);
    println!("  worst entrywise difference: {worst:.3e}");

    let times = exact_expected_times(&table, n)?;
    println!("\nexpected absorption times");
    for (m, t) in times.iter().enumerate().skip(1) {
        println!("  E tau_{m} = {t:.6}");
    }
    Ok(())
}
