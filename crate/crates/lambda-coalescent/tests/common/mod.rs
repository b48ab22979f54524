//! Shared test oracles, independent of the library's implementation paths.
//!
//! The Chambers–Mallows–Stuck sampler below generates the limit laws of
//! the stable regimes directly, so the characteristic-function machinery
//! can be validated against samples that never touch the coalescent code.

use rand::Rng;
use rand_distr::Exp1;

use lambda_coalescent::special::gamma_one_minus;

/// One draw from the totally left-skewed stable law with characteristic
/// function exp{−|t|^α Γ(1−α)(cos(πα/2) + i sin(πα/2) sgn t)}, α ∈ (1, 2),
/// via the Chambers–Mallows–Stuck representation of S_α(σ, β = −1, 0).
pub fn stable_skewed_cms<R: Rng>(alpha: f64, rng: &mut R) -> f64 {
    assert!(alpha > 1.0 && alpha < 2.0);
    let beta = -1.0f64;
    let tan_term = (std::f64::consts::FRAC_PI_2 * alpha).tan();
    let b = (beta * tan_term).atan() / alpha;
    let s = (1.0 + beta * beta * tan_term * tan_term).powf(1.0 / (2.0 * alpha));
    let v = std::f64::consts::PI * (rng.gen::<f64>() - 0.5);
    let w: f64 = rng.sample(Exp1);
    let x = s * (alpha * (v + b)).sin() / v.cos().powf(1.0 / alpha)
        * ((v - alpha * (v + b)).cos() / w).powf((1.0 - alpha) / alpha);
    // Scale so that sigma^alpha = Gamma(1 - alpha) cos(pi alpha / 2).
    let sigma = (gamma_one_minus(alpha) * (std::f64::consts::FRAC_PI_2 * alpha).cos())
        .powf(1.0 / alpha);
    sigma * x
}

/// One draw from the 1-stable law with characteristic function
/// exp{−|t|(π/2 − i log|t| sgn t)}, i.e. S_1(π/2, −1, 0).
pub fn stable_one_cms<R: Rng>(rng: &mut R) -> f64 {
    let beta = -1.0f64;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let v = std::f64::consts::PI * (rng.gen::<f64>() - 0.5);
    let w: f64 = rng.sample(Exp1);
    let a = half_pi + beta * v;
    let x = (a * v.tan() - beta * (half_pi * w * v.cos() / a).ln()) / half_pi;
    // sigma = pi/2; re-centre so the S1 shift stays zero.
    let sigma = half_pi;
    sigma * x + beta * sigma * (2.0 / std::f64::consts::PI) * sigma.ln()
}
