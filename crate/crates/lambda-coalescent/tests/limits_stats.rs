//! Validation of the statistical distance machinery against independent
//! samplers: the stable characteristic functions against
//! Chambers–Mallows–Stuck draws, the KS distance against a Gaussian
//! pseudo-sample, and the Mittag-Leffler moment check against
//! exponential draws.

mod common;

use lambda_coalescent::limits::{
    cf_distance, default_cf_grid, ks_distance, moment_errors, stable_cf, MittagLefflerRef,
};
use lambda_coalescent::rng::replicate_rng;
use lambda_coalescent::special::std_normal_cdf;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

#[test]
fn stable_cf_matches_cms_sampler() {
    let mut rng = replicate_rng(0x57AB, 0);
    let sample: Vec<f64> = (0..100_000)
        .map(|_| common::stable_skewed_cms(1.5, &mut rng))
        .collect();
    let d = cf_distance(&sample, |t| stable_cf(1.5, t), &default_cf_grid());
    assert!(d <= 0.02, "alpha = 1.5: cf distance {d}");
}

#[test]
fn one_stable_cf_matches_cms_sampler() {
    let mut rng = replicate_rng(0x57AB, 1);
    let sample: Vec<f64> = (0..100_000)
        .map(|_| common::stable_one_cms(&mut rng))
        .collect();
    let d = cf_distance(&sample, |t| stable_cf(1.0, t), &default_cf_grid());
    assert!(d <= 0.02, "alpha = 1: cf distance {d}");
}

#[test]
fn ks_distance_of_gaussian_pseudo_sample() {
    let mut rng = replicate_rng(0x57AB, 2);
    let sample: Vec<f64> = (0..100_000)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    let d = ks_distance(&sample, std_normal_cdf);
    assert!(d <= 0.01, "KS {d}");
}

#[test]
fn exponential_sample_has_factorial_moments() {
    let mut rng = replicate_rng(0x57AB, 3);
    let sample: Vec<f64> = (0..1_000_000).map(|_| rng.sample(Exp1)).collect();
    let ml = MittagLefflerRef::new(0.0).unwrap();
    let errors = moment_errors(&sample, &ml, 4);
    for (k, e) in errors.iter().enumerate() {
        assert!(*e <= 0.02, "moment {}: relative error {e}", k + 1);
    }
}
