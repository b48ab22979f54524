//! Exact, simulation-free laws for small n: the distribution of the
//! collision count X_n by dynamic programming over the death chain, the
//! expected absorption times by first-step analysis, and the independent
//! indicator representation available for beta(1, b) measures.
//!
//! These are the ground truth the Monte Carlo samplers are validated
//! against.

use crate::error::{Error, Result};
use crate::rates::RateTable;
use crate::special::ln_gamma;

/// Hard cap on the DP (O(n³) work); the oracle role never needs more.
pub const EXACT_DIST_MAX_N: u64 = 500;

/// A finitely supported distribution with cached moments.
#[derive(Debug, Clone)]
pub struct ExactDistribution {
    pub n: u64,
    pub support: Vec<u64>,
    pub pmf: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
}

impl ExactDistribution {
    fn from_dense(n: u64, dense: &[f64]) -> ExactDistribution {
        let mut support = Vec::new();
        let mut pmf = Vec::new();
        for (j, &p) in dense.iter().enumerate() {
            if p > 0.0 {
                support.push(j as u64);
                pmf.push(p);
            }
        }
        let mean: f64 = support
            .iter()
            .zip(&pmf)
            .map(|(&j, &p)| j as f64 * p)
            .sum();
        let second: f64 = support
            .iter()
            .zip(&pmf)
            .map(|(&j, &p)| (j as f64) * (j as f64) * p)
            .sum();
        ExactDistribution {
            n,
            support,
            pmf,
            mean,
            variance: (second - mean * mean).max(0.0),
        }
    }

    /// P(X = j); zero off the support.
    pub fn prob(&self, j: u64) -> f64 {
        match self.support.binary_search(&j) {
            Ok(i) => self.pmf[i],
            Err(_) => 0.0,
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.pmf.iter().sum()
    }
}

/// Law of the collision count X_n via P(X_n = j) = Σ_m p_{n,m} P(X_m = j−1),
/// X_1 ≡ 0.
pub fn exact_x_distribution(table: &RateTable, n: u64) -> Result<ExactDistribution> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "exact distribution needs n >= 2, got {n}"
        )));
    }
    if n > EXACT_DIST_MAX_N {
        return Err(Error::CostGuard {
            n,
            limit: EXACT_DIST_MAX_N,
        });
    }
    table.check_capacity(n)?;

    // dists[m][j] = P(X_m = j), j = 0..m-1.
    let mut dists: Vec<Vec<f64>> = Vec::with_capacity(n as usize + 1);
    dists.push(vec![]); // state 0, unused
    dists.push(vec![1.0]); // X_1 = 0
    for state in 2..=n {
        let row = table.jump_distribution(state);
        let mut pmf = vec![0.0; state as usize];
        for (m_idx, &p) in row.iter().enumerate() {
            let inner = &dists[m_idx + 1];
            for (j, &q) in inner.iter().enumerate() {
                pmf[j + 1] += p * q;
            }
        }
        dists.push(pmf);
    }
    Ok(ExactDistribution::from_dense(n, &dists[n as usize]))
}

/// E τ_m for every state m ≤ n: E τ_n = 1/g_n + Σ_m p_{n,m} E τ_m with
/// E τ_1 = 0. Index m of the returned vector is the state.
pub fn exact_expected_times(table: &RateTable, n: u64) -> Result<Vec<f64>> {
    if n > EXACT_DIST_MAX_N {
        return Err(Error::CostGuard {
            n,
            limit: EXACT_DIST_MAX_N,
        });
    }
    table.check_capacity(n)?;
    let mut times = vec![0.0; n as usize + 1];
    for state in 2..=n {
        let row = table.jump_distribution(state);
        let mut t = 1.0 / table.g_total(state);
        for (m_idx, &p) in row.iter().enumerate() {
            t += p * times[m_idx + 1];
        }
        times[state as usize] = t;
    }
    Ok(times)
}

/// P(I_k = 1) = w_k / (w_1 + ⋯ + w_k) with w_k = Γ(k + b − 1)/Γ(k), the
/// success probabilities of the indicator representation for beta(1, b).
pub fn indicator_q(b: f64, k_max: u64) -> Vec<f64> {
    let mut qs = Vec::with_capacity(k_max as usize);
    let mut cumulative = 0.0;
    for k in 1..=k_max {
        let w = (ln_gamma(k as f64 + b - 1.0) - ln_gamma(k as f64)).exp();
        cumulative += w;
        qs.push(w / cumulative);
    }
    qs
}

/// Law of X_n for ν = beta(1, b), as the convolution of n − 1 independent
/// indicators.
pub fn indicator_distribution(b: f64, n: u64) -> ExactDistribution {
    assert!(n >= 2, "indicator representation needs n >= 2, got {n}");
    assert!(b > 0.0 && b.is_finite());
    let qs = indicator_q(b, n - 1);
    let mut pmf = vec![0.0; n as usize];
    pmf[0] = 1.0;
    for (i, &q) in qs.iter().enumerate() {
        for j in (0..=i).rev() {
            let stay = pmf[j] * (1.0 - q);
            pmf[j + 1] += pmf[j] * q;
            pmf[j] = stay;
        }
    }
    ExactDistribution::from_dense(n, &pmf)
}
