//! Classify measures into their limit regimes, evaluate the normalizing
//! sequences, and compare normalized Monte Carlo samples against the
//! reference laws: normal KS distance in regime 1, Mittag-Leffler moments
//! in regime 5, stable characteristic function in regime 3.
//!
//! Run with: cargo run --release --example limit_regimes

use lambda_coalescent::limits::{
    cf_distance, classify, default_cf_grid, ks_distance, moment_errors, stable_cf,
    MittagLefflerRef, Regime,
};
use lambda_coalescent::simulate::{monte_carlo, Job};
use lambda_coalescent::special::std_normal_cdf;
use lambda_coalescent::CharacteristicMeasure;

fn main() -> lambda_coalescent::Result<()> {
    let specs = [
        "uniform",
        "beta:2,1",
        "logpareto:2",
        "logpareto:1.5",
        "logpareto:1",
        "logpareto:0.5",
        "loglogpareto",
    ];

    println!("regime classification and normalizing constants:");
    for spec in specs {
        let measure = CharacteristicMeasure::from_spec(spec)?;
        let regime = classify(&measure)?;
        let (a, b) = regime.norm_constants(1e8)?;
        println!(
            "  {spec:<14} -> regime {} ({:<26}) a(1e8) = {a:>8.4}, b(1e8) = {b:>8.4}",
            regime.regime.index(),
            regime.regime.name(),
        );
    }

    let n = 100_000_000u64;
    let replicates = 10_000u64;
    println!("\nnormalized samples at n = {n}, {replicates} replicates:");

    for spec in ["uniform", "logpareto:0.5", "logpareto:1.5"] {
        let measure = CharacteristicMeasure::from_spec(spec)?;
        let regime = classify(&measure)?;
        let (a, b) = regime.norm_constants(n as f64)?;
        let sample = monte_carlo(
            &Job::Epoch {
                measure: measure.clone(),
                n,
            },
            replicates,
            11,
            4,
        )?;
        let normalized: Vec<f64> = sample.collisions().iter().map(|x| (x - b) / a).collect();
        match regime.regime {
            Regime::NormalFiniteVariance | Regime::NormalTruncatedVariance => {
                let d = ks_distance(&normalized, std_normal_cdf);
                println!("  {spec:<14} KS to standard normal: {d:.4}");
            }
            Regime::MittagLeffler => {
                let ml = MittagLefflerRef::new(regime.alpha.unwrap())?;
                let errs = moment_errors(&normalized, &ml, 2);
                println!(
                    "  {spec:<14} Mittag-Leffler moment errors: {:.4}, {:.4}",
                    errs[0], errs[1]
                );
            }
            Regime::StableAlpha | Regime::StableOne => {
                let alpha = regime.alpha.unwrap();
                let d = cf_distance(&normalized, |t| stable_cf(alpha, t), &default_cf_grid());
                println!("  {spec:<14} CF distance to {alpha}-stable: {d:.4}");
            }
        }
    }
    Ok(())
}
