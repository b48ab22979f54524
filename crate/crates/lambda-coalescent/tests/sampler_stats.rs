//! Distributional checks of the samplers beyond the acceptance criteria:
//! the coupled sampler preserves the coalescent marginal, the Monte Carlo
//! law matches the exact oracle at small n, and the survivor count U_n
//! stays tight as n grows.

use lambda_coalescent::limits::ks_two_sample;
use lambda_coalescent::measure::CharacteristicMeasure;
use lambda_coalescent::oracle::exact_x_distribution;
use lambda_coalescent::rates::RateTable;
use lambda_coalescent::simulate::{monte_carlo, Job};
use lambda_coalescent::verify::ks_two_sample_critical;

#[test]
fn coupled_sampler_preserves_the_collision_marginal() {
    let n = 1_000u64;
    let replicates = 100_000u64;
    let measure = CharacteristicMeasure::uniform();
    let coupled = monte_carlo(
        &Job::Coupled {
            measure: measure.clone(),
            n,
        },
        replicates,
        21,
        4,
    )
    .unwrap();
    let epoch = monte_carlo(&Job::Epoch { measure, n }, replicates, 22, 4).unwrap();
    let d = ks_two_sample(&coupled.collisions(), &epoch.collisions());
    let crit = ks_two_sample_critical(replicates as usize, replicates as usize, 0.01);
    assert!(d < crit, "KS {d} vs critical {crit}");
}

#[test]
fn monte_carlo_matches_oracle_in_total_variation() {
    let n = 10u64;
    let replicates = 10_000u64;
    let measure = CharacteristicMeasure::uniform();
    let table = RateTable::build(&measure, n).unwrap();
    let dist = exact_x_distribution(&table, n).unwrap();
    let sample = monte_carlo(&Job::Epoch { measure, n }, replicates, 23, 1).unwrap();
    let xs = sample.collisions();
    let mut tv = 0.0;
    for j in 0..n {
        let emp = xs.iter().filter(|&&x| x == j as f64).count() as f64 / xs.len() as f64;
        tv += (emp - dist.prob(j)).abs();
    }
    tv *= 0.5;
    let bound = 3.0 * ((n - 1) as f64 / replicates as f64).sqrt();
    assert!(tv <= bound, "tv {tv} vs bound {bound}");
}

/// Survivor counts stay stochastically bounded: the 99th percentile at
/// n = 1e8 is within 1.5x of its value at n = 1e4.
#[test]
fn survivor_count_is_tight() {
    let replicates = 10_000u64;
    let measure = CharacteristicMeasure::uniform();
    let mut p99 = Vec::new();
    for (i, &n) in [10_000u64, 100_000_000].iter().enumerate() {
        let table = monte_carlo(
            &Job::Coupled {
                measure: measure.clone(),
                n,
            },
            replicates,
            24 + i as u64,
            4,
        )
        .unwrap();
        let mut survivors: Vec<u64> = table.rows.iter().filter_map(|r| r.survivors).collect();
        survivors.sort_unstable();
        p99.push(survivors[(0.99 * replicates as f64) as usize]);
    }
    assert!(
        (p99[1] as f64) <= 1.5 * p99[0] as f64,
        "p99 grew from {} to {}",
        p99[0],
        p99[1]
    );
}
