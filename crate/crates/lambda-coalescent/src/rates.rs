//! Collision rates λ_{m,k}, death-chain rates g_{n,m}, total rates g_n and
//! the embedded jump distributions.
//!
//! All rate arithmetic runs in log space: g_{n,m} couples a binomial
//! coefficient of order n with a λ that is exponentially small in m, so the
//! linear-space product overflows long before the quantities of interest
//! do. Beta-type measures get closed forms through log-gamma; the other
//! families are integrated adaptively against their quantile
//! representation.

use crate::error::{Error, Result};
use crate::measure::CharacteristicMeasure;
use crate::quad;
use crate::special::{ln_beta, ln_gamma};

/// Above this state count the CLI routes simulation to the epoch sampler;
/// a rate table of this size is still practical, larger ones are not.
pub const DEFAULT_N_MAX: u64 = 10_000;

fn ln_choose(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

fn log_lambda_beta(theta: f64, b: f64, m: u64, k: u64) -> f64 {
    ln_beta(k as f64 + theta, (m - k) as f64 + b) - ln_beta(theta, b)
}

/// log λ_{m,k} by adaptive quadrature over the sampling representation:
/// in x-space against the density for beta-type measures, in u-space
/// against the quantile of V = −log η otherwise.
pub fn log_lambda_quadrature(measure: &CharacteristicMeasure, m: u64, k: u64) -> Result<f64> {
    assert!(k >= 1 && k <= m, "need 1 <= k <= m, got k = {k}, m = {m}");
    let (kf, mf) = (k as f64, m as f64);
    if measure.log_density_x(0.5).is_some() {
        return quad::log_integrate(
            |x| kf * x.ln() + (mf - kf) * (-x).ln_1p() + measure.log_density_x(x).unwrap(),
            0.0,
            1.0,
            "lambda (density space)",
        );
    }
    let segments = measure.quadrature_segments();
    let mut parts = Vec::with_capacity(segments.len() - 1);
    for w in segments.windows(2) {
        let part = quad::log_integrate(
            |u| {
                // The quantile may overflow to +inf in the extreme tail;
                // keep 0 * inf out of the exponent when k = m.
                let v = measure.quantile_v(u).expect("quantile family");
                let tails = if m == k { 0.0 } else { -(mf - kf) * v };
                kf * (-(-v).exp_m1()).ln() + tails
            },
            w[0],
            w[1],
            "lambda (quantile space)",
        )?;
        parts.push(part);
    }
    Ok(log_sum_exp(&parts))
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// log λ_{m,k} = log ∫ x^k (1−x)^{m−k} ν(dx), defined for 1 ≤ k ≤ m.
pub fn log_lambda_mk(measure: &CharacteristicMeasure, m: u64, k: u64) -> Result<f64> {
    assert!(k >= 1 && k <= m, "need 1 <= k <= m, got k = {k}, m = {m}");
    match measure.beta_params() {
        Some((theta, b)) => Ok(log_lambda_beta(theta, b, m, k)),
        None => log_lambda_quadrature(measure, m, k),
    }
}

/// λ_{m,k} in linear space.
pub fn lambda_mk(measure: &CharacteristicMeasure, m: u64, k: u64) -> Result<f64> {
    log_lambda_mk(measure, m, k).map(f64::exp)
}

/// log g_{n,m} = log C(n, m−1) + log λ_{n, n−m+1}.
pub fn log_g_nm(measure: &CharacteristicMeasure, n: u64, m: u64) -> Result<f64> {
    assert!(n >= 2 && m >= 1 && m < n, "need n >= 2 and 1 <= m < n");
    Ok(ln_choose(n, m - 1) + log_lambda_mk(measure, n, n - m + 1)?)
}

/// g_{n,m}, the death-chain rate from n to m.
pub fn g_nm(measure: &CharacteristicMeasure, n: u64, m: u64) -> Result<f64> {
    log_g_nm(measure, n, m).map(f64::exp)
}

/// Total rate g_n = ∫ (1 − (1−x)^n − n x (1−x)^{n−1}) ν(dx), evaluated
/// directly (not via the row sum, which serves as an independent check).
pub fn g_total(measure: &CharacteristicMeasure, n: u64) -> Result<f64> {
    assert!(n >= 2, "total rate needs n >= 2, got {n}");
    let nf = n as f64;
    if let Some((theta, b)) = measure.beta_params() {
        let lb = ln_beta(theta, b);
        let t1 = (ln_beta(theta, b + nf) - lb).exp();
        let t2 = (nf.ln() + ln_beta(theta + 1.0, b + nf - 1.0) - lb).exp();
        return Ok(1.0 - t1 - t2);
    }
    let segments = measure.quadrature_segments();
    let mut total = 0.0;
    for w in segments.windows(2) {
        total += quad::integrate(
            |u| {
                let v = measure.quantile_v(u).expect("quantile family");
                let x = -(-v).exp_m1();
                -(-(nf * v)).exp_m1() - nf * x * (-(nf - 1.0) * v).exp()
            },
            w[0],
            w[1],
            "total rate",
        )?;
    }
    Ok(total)
}

/// Cached rates and jump distributions for states up to `n_max`.
///
/// Immutable after construction; shared freely across threads.
#[derive(Debug, Clone)]
pub struct RateTable {
    measure: CharacteristicMeasure,
    n_max: u64,
    /// log λ_{m,k}, triangular, row m ∈ [1, n_max], 1 ≤ k ≤ m.
    log_lambda: Vec<f64>,
    /// log g_n for n ∈ [2, n_max], direct-integral route.
    log_g: Vec<f64>,
    /// Jump probabilities p_{n,m}, triangular, row n ∈ [2, n_max],
    /// 1 ≤ m ≤ n − 1.
    jump: Vec<f64>,
}

#[inline]
fn lambda_offset(m: u64) -> usize {
    let m = m as usize;
    m * (m - 1) / 2
}

#[inline]
fn jump_offset(n: u64) -> usize {
    let n = n as usize;
    (n - 1) * (n - 2) / 2
}

impl RateTable {
    pub fn build(measure: &CharacteristicMeasure, n_max: u64) -> Result<RateTable> {
        if n_max < 2 {
            return Err(Error::InvalidParameter(format!(
                "rate table needs n_max >= 2, got {n_max}"
            )));
        }
        let mut log_lambda = Vec::with_capacity(lambda_offset(n_max + 1));
        match measure.beta_params() {
            Some((theta, b)) => {
                for m in 1..=n_max {
                    let mf = m as f64;
                    let mut ll = ln_beta(1.0 + theta, mf - 1.0 + b) - ln_beta(theta, b);
                    log_lambda.push(ll);
                    for k in 1..m {
                        let kf = k as f64;
                        ll += (kf + theta).ln() - (mf - kf - 1.0 + b).ln();
                        log_lambda.push(ll);
                    }
                }
            }
            None => {
                for m in 1..=n_max {
                    for k in 1..=m {
                        log_lambda.push(log_lambda_quadrature(measure, m, k)?);
                    }
                }
            }
        }

        let mut log_g = Vec::with_capacity((n_max - 1) as usize);
        let mut jump = Vec::with_capacity(jump_offset(n_max + 1));
        let mut scratch = Vec::new();
        for n in 2..=n_max {
            log_g.push(g_total(measure, n)?.ln());
            scratch.clear();
            let base = lambda_offset(n);
            for m in 1..n {
                let k = n - m + 1;
                scratch.push(ln_choose(n, m - 1) + log_lambda[base + (k - 1) as usize]);
            }
            let lse = log_sum_exp(&scratch);
            let mut sum = 0.0;
            for lg in &scratch {
                let p = (lg - lse).exp();
                sum += p;
                jump.push(p);
            }
            let row = &mut jump[jump_offset(n)..];
            for p in row {
                *p /= sum;
            }
        }

        Ok(RateTable {
            measure: measure.clone(),
            n_max,
            log_lambda,
            log_g,
            jump,
        })
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn measure(&self) -> &CharacteristicMeasure {
        &self.measure
    }

    pub fn log_lambda(&self, m: u64, k: u64) -> f64 {
        assert!(m >= 1 && m <= self.n_max && k >= 1 && k <= m);
        self.log_lambda[lambda_offset(m) + (k - 1) as usize]
    }

    pub fn lambda(&self, m: u64, k: u64) -> f64 {
        self.log_lambda(m, k).exp()
    }

    pub fn log_g_nm(&self, n: u64, m: u64) -> f64 {
        assert!(n >= 2 && n <= self.n_max && m >= 1 && m < n);
        ln_choose(n, m - 1) + self.log_lambda(n, n - m + 1)
    }

    pub fn g_nm(&self, n: u64, m: u64) -> f64 {
        self.log_g_nm(n, m).exp()
    }

    pub fn log_g_total(&self, n: u64) -> f64 {
        assert!(n >= 2 && n <= self.n_max);
        self.log_g[(n - 2) as usize]
    }

    pub fn g_total(&self, n: u64) -> f64 {
        self.log_g_total(n).exp()
    }

    /// The embedded-chain jump probabilities p_{n,·} over {1, …, n−1}.
    pub fn jump_distribution(&self, n: u64) -> &[f64] {
        assert!(n >= 2 && n <= self.n_max);
        &self.jump[jump_offset(n)..jump_offset(n) + (n - 1) as usize]
    }

    /// Next state given a uniform draw, by inverse-CDF scan of the jump row.
    pub fn sample_jump(&self, n: u64, u: f64) -> u64 {
        let row = self.jump_distribution(n);
        let mut acc = 0.0;
        for (i, p) in row.iter().enumerate() {
            acc += p;
            if u < acc {
                return i as u64 + 1;
            }
        }
        n - 1
    }

    /// Guard used by consumers that need states up to `n`.
    pub fn check_capacity(&self, n: u64) -> Result<()> {
        if n > self.n_max {
            Err(Error::ExceedsTable {
                n,
                n_max: self.n_max,
            })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform() -> CharacteristicMeasure {
        CharacteristicMeasure::uniform()
    }

    #[test]
    fn lambda_closed_forms() {
        let u = uniform();
        assert!((lambda_mk(&u, 2, 2).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        assert!((lambda_mk(&u, 3, 2).unwrap() - 1.0 / 12.0).abs() < 1e-14);
        let b12 = CharacteristicMeasure::beta(1.0, 2.0).unwrap();
        assert!((lambda_mk(&b12, 2, 2).unwrap() - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn death_rates_uniform() {
        let u = uniform();
        assert!((g_nm(&u, 3, 2).unwrap() - 0.25).abs() < 1e-13);
        assert!((g_nm(&u, 3, 1).unwrap() - 0.25).abs() < 1e-13);
        assert!((g_total(&u, 3).unwrap() - 0.5).abs() < 1e-13);
        assert!((g_total(&u, 2).unwrap() - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn total_rate_is_lambda22_at_two() {
        for m in [
            uniform(),
            CharacteristicMeasure::beta(2.0, 1.0).unwrap(),
            CharacteristicMeasure::log_pareto(0.5).unwrap(),
            CharacteristicMeasure::log_log_pareto(),
        ] {
            let g2 = g_total(&m, 2).unwrap();
            let l22 = lambda_mk(&m, 2, 2).unwrap();
            assert!(
                (g2 - l22).abs() <= 1e-8 * l22,
                "{m}: g_2 = {g2}, lambda_22 = {l22}"
            );
        }
    }

    #[test]
    fn uniform_jump_law() {
        let table = RateTable::build(&uniform(), 40).unwrap();
        for n in 2..=40u64 {
            for &p in table.jump_distribution(n) {
                assert!((p - 1.0 / (n as f64 - 1.0)).abs() < 1e-13, "n = {n}");
            }
        }
        assert_eq!(table.jump_distribution(2), &[1.0]);
        // Example with n = 10: every jump probability equals 1/9.
        let near = table
            .jump_distribution(10)
            .iter()
            .all(|p| (p - 1.0 / 9.0).abs() < 1e-13);
        assert!(near);
    }

    #[test]
    fn beta_one_b_jump_matches_indicator_weights() {
        for b in [0.5, 2.0, 5.0] {
            let m = CharacteristicMeasure::beta(1.0, b).unwrap();
            let table = RateTable::build(&m, 40).unwrap();
            for n in 2..=40u64 {
                let row = table.jump_distribution(n);
                let w: Vec<f64> = (1..n)
                    .map(|k| (ln_gamma(k as f64 + b - 1.0) - ln_gamma(k as f64)).exp())
                    .collect();
                let total: f64 = w.iter().sum();
                for (m_idx, &p) in row.iter().enumerate() {
                    let expect = w[m_idx] / total;
                    assert!(
                        (p - expect).abs() < 1e-10,
                        "b = {b}, n = {n}, m = {}: {p} vs {expect}",
                        m_idx + 1
                    );
                }
            }
        }
    }

    #[test]
    fn jump_rows_sum_to_one() {
        let table = RateTable::build(&CharacteristicMeasure::beta(2.0, 1.0).unwrap(), 60).unwrap();
        for n in 2..=60u64 {
            let s: f64 = table.jump_distribution(n).iter().sum();
            assert!((s - 1.0).abs() < 1e-12, "n = {n}: sum {s}");
        }
    }

    #[test]
    fn recursion_and_row_sum_small_table() {
        for m in [
            uniform(),
            CharacteristicMeasure::beta(2.0, 1.0).unwrap(),
            CharacteristicMeasure::beta(1.0, 2.0).unwrap(),
        ] {
            let table = RateTable::build(&m, 60).unwrap();
            for mm in 1..60u64 {
                for k in 1..=mm {
                    let l0 = table.log_lambda(mm, k);
                    let r = (table.log_lambda(mm + 1, k) - l0).exp()
                        + (table.log_lambda(mm + 1, k + 1) - l0).exp();
                    assert!((r - 1.0).abs() < 1e-10, "{m}: m = {mm}, k = {k}: {r}");
                }
            }
            for n in 2..=60u64 {
                let direct = table.g_total(n);
                let parts: Vec<f64> = (1..n).map(|mm| table.log_g_nm(n, mm)).collect();
                let summed = log_sum_exp(&parts).exp();
                assert!(
                    ((summed - direct) / direct).abs() < 1e-10,
                    "{m}: n = {n}: {summed} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn closed_form_agrees_with_quadrature() {
        for m in [uniform(), CharacteristicMeasure::beta(2.0, 1.0).unwrap()] {
            for mm in 2..=100u64 {
                for &k in &[1u64, 2, mm / 2 + 1, mm - 1, mm] {
                    let lq = log_lambda_quadrature(&m, mm, k).unwrap();
                    let lc = log_lambda_mk(&m, mm, k).unwrap();
                    let rel = ((lq - lc).exp() - 1.0).abs();
                    assert!(rel < 1e-8, "{m}: m = {mm}, k = {k}: rel {rel}");
                }
            }
        }
    }

    #[test]
    fn quadrature_family_table() {
        let m = CharacteristicMeasure::log_pareto(0.5).unwrap();
        let table = RateTable::build(&m, 12).unwrap();
        for n in 2..=12u64 {
            let s: f64 = table.jump_distribution(n).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        // Consistency recursion within three combined quadrature tolerances.
        for mm in 1..12u64 {
            for k in 1..=mm {
                let l0 = table.log_lambda(mm, k);
                let r = (table.log_lambda(mm + 1, k) - l0).exp()
                    + (table.log_lambda(mm + 1, k + 1) - l0).exp();
                assert!((r - 1.0).abs() < 3e-8, "m = {mm}, k = {k}: {r}");
            }
        }
        // Row sum against the direct integral route.
        for n in 2..=12u64 {
            let direct = table.g_total(n);
            let parts: Vec<f64> = (1..n).map(|mm| table.log_g_nm(n, mm)).collect();
            let summed = log_sum_exp(&parts).exp();
            assert!(((summed - direct) / direct).abs() < 3e-8, "n = {n}");
        }
    }

    #[test]
    fn capacity_guard() {
        let table = RateTable::build(&uniform(), 8).unwrap();
        assert!(table.check_capacity(8).is_ok());
        assert!(matches!(
            table.check_capacity(9),
            Err(Error::ExceedsTable { n: 9, n_max: 8 })
        ));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn lambda_recursion_beta(theta in 0.2f64..5.0, b in 0.2f64..5.0,
                                     m in 1u64..30, k_seed in 0u64..30) {
                let k = k_seed % m + 1;
                let meas = CharacteristicMeasure::beta(theta, b).unwrap();
                let l0 = log_lambda_mk(&meas, m, k).unwrap();
                let r = (log_lambda_mk(&meas, m + 1, k).unwrap() - l0).exp()
                    + (log_lambda_mk(&meas, m + 1, k + 1).unwrap() - l0).exp();
                prop_assert!((r - 1.0).abs() < 1e-10);
            }
        }
    }
}
