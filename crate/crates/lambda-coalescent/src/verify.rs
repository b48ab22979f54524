//! The self-contained verification suite behind `lcoal verify`.
//!
//! Twelve criteria cover the rate identities, the small-n oracles, the
//! equality in law of the two coalescent samplers, the pathwise coupling
//! bounds, the limit laws in regimes 1, 3 and 5, the absorption-time
//! variance, the external-branch law, and scheduling determinism. Every
//! claim constructs its own fixtures, draws from seeds derived from the
//! run seed, and reports one or more records with a pinned threshold.
//!
//! All statistics are computed sequentially from replicate-ordered tables,
//! so a report is byte-identical for every `workers` setting.

use serde::Serialize;

use crate::error::Result;
use crate::limits::{
    cf_distance, classify, default_cf_grid, ks_distance, ks_two_sample, moment_errors, stable_cf,
    Functional, MittagLefflerRef,
};
use crate::measure::CharacteristicMeasure;
use crate::oracle::{exact_x_distribution, indicator_distribution};
use crate::rates::RateTable;
use crate::rng::replicate_rng;
use crate::simulate::{monte_carlo, simulate_coupled, Job, SampleTable};
use crate::special::std_normal_cdf;

pub const DEFAULT_SEED: u64 = 0;

// ── Pinned thresholds ───────────────────────────────────────────────────

/// Rate identities (recursion and row sum) are exact modulo log-gamma
/// rounding; 1e-10 relative leaves two orders of headroom over f64 noise
/// at n = 200.
pub const RATE_IDENTITY_REL: f64 = 1e-10;
/// The uniform jump law p_{n,m} = 1/(n−1) is a closed-form cancellation.
pub const UNIFORM_JUMP_ABS: f64 = 1e-12;
/// Death-chain DP versus independent-indicator convolution, entrywise.
pub const ORACLE_ENTRYWISE_ABS: f64 = 1e-10;
/// Monte Carlo mean against the exact mean, in standard errors.
pub const MEAN_Z_MAX: f64 = 3.0;
/// Total variation between the empirical law and the DP law at 1e5
/// replicates.
pub const ORACLE_TV_MAX: f64 = 0.01;
/// Two-sample KS rejection level for the sampler-equivalence checks.
pub const SAMPLER_KS_LEVEL: f64 = 0.01;
/// Pathwise coupling bounds admit no exceptions.
pub const PATHWISE_VIOLATION_MAX: f64 = 0.0;
/// KS distance of the normalized collision count to the standard normal
/// at n = 1e8.
pub const REGIME1_KS_FINAL: f64 = 0.10;
/// |Var(τ_n)/log n − 2| at n = 1e8 (band [1.6, 2.4]).
pub const TAU_VAR_DEV_MAX: f64 = 0.4;
/// Relative error of the first two normalized moments against the
/// Mittag-Leffler reference.
pub const ML_MOMENT_REL_MAX: f64 = 0.15;
/// Empirical-CF distance to the stable reference on the default grid.
pub const STABLE_CF_MAX: f64 = 0.15;
/// KS distance of the external branch length to its exponential limit.
pub const BRANCH_KS_MAX: f64 = 0.05;
/// Total variation of the tagged collision count against its geometric
/// limit on {1, …, 30}.
pub const BRANCH_TV_MAX: f64 = 0.05;

/// One verified claim.
#[derive(Debug, Clone, Serialize)]
pub struct ClaimRecord {
    pub claim_id: String,
    pub regime: Option<String>,
    pub n: Option<u64>,
    pub replicates: Option<u64>,
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl ClaimRecord {
    fn new(
        claim_id: impl Into<String>,
        regime: Option<&str>,
        n: Option<u64>,
        replicates: Option<u64>,
        statistic: f64,
        threshold: f64,
    ) -> ClaimRecord {
        ClaimRecord {
            claim_id: claim_id.into(),
            regime: regime.map(str::to_string),
            n,
            replicates,
            statistic,
            threshold,
            pass: statistic <= threshold,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub pass: bool,
    pub claims: Vec<ClaimRecord>,
}

/// Static description of one criterion.
pub struct Criterion {
    pub index: usize,
    pub id: &'static str,
    pub title: &'static str,
    pub runtime_limit_secs: u64,
}

pub const CRITERIA: [Criterion; 12] = [
    Criterion { index: 1, id: "rate-identities", title: "collision-rate recursion and row sums", runtime_limit_secs: 10 },
    Criterion { index: 2, id: "uniform-jump-law", title: "uniform jump law p = 1/(n-1)", runtime_limit_secs: 1 },
    Criterion { index: 3, id: "oracle-equivalence", title: "death-chain DP equals indicator convolution", runtime_limit_secs: 10 },
    Criterion { index: 4, id: "monte-carlo-vs-oracle", title: "Monte Carlo collision law matches the DP oracle", runtime_limit_secs: 30 },
    Criterion { index: 5, id: "sampler-equivalence", title: "epoch and chain samplers agree in law", runtime_limit_secs: 120 },
    Criterion { index: 6, id: "coupling-pathwise-bounds", title: "pathwise coupling inequalities", runtime_limit_secs: 120 },
    Criterion { index: 7, id: "regime1-normal", title: "normalized collision count approaches the normal law", runtime_limit_secs: 300 },
    Criterion { index: 8, id: "absorption-time-variance", title: "absorption-time variance constant", runtime_limit_secs: 300 },
    Criterion { index: 9, id: "regime5-mittag-leffler", title: "Mittag-Leffler moments of the normalized count", runtime_limit_secs: 300 },
    Criterion { index: 10, id: "regime3-stable", title: "stable characteristic function of the normalized count", runtime_limit_secs: 300 },
    Criterion { index: 11, id: "external-branch", title: "external branch length and tagged collision count", runtime_limit_secs: 120 },
    Criterion { index: 12, id: "determinism", title: "worker-count invariance", runtime_limit_secs: 60 },
];

/// Seed for sub-run `sub` of criterion `criterion`, derived from the run
/// seed. Streams are further separated per replicate by the driver.
fn sub_seed(seed: u64, criterion: u64, sub: u64) -> u64 {
    seed ^ (criterion.wrapping_mul(1_000_003).wrapping_add(sub))
}

fn harmonic(n: u64) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

fn mean_and_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Two-sample KS critical value at level `alpha` for samples of sizes
/// n1, n2 (asymptotic Smirnov form).
pub fn ks_two_sample_critical(n1: usize, n2: usize, alpha: f64) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c * ((n1 + n2) as f64 / (n1 as f64 * n2 as f64)).sqrt()
}

fn criterion_measures() -> Vec<(&'static str, CharacteristicMeasure)> {
    vec![
        ("uniform", CharacteristicMeasure::uniform()),
        ("beta_2_1", CharacteristicMeasure::beta(2.0, 1.0).expect("valid")),
        ("beta_1_2", CharacteristicMeasure::beta(1.0, 2.0).expect("valid")),
    ]
}

// ── Criteria ────────────────────────────────────────────────────────────

/// 1: λ recursion and g row sums at n_max = 200 for three beta measures.
fn rate_identities(_seed: u64, _workers: usize) -> Result<Vec<ClaimRecord>> {
    let n_max = 200u64;
    let mut records = Vec::new();
    for (tag, measure) in criterion_measures() {
        let table = RateTable::build(&measure, n_max)?;
        let mut rec_err: f64 = 0.0;
        for m in 1..n_max {
            for k in 1..=m {
                let l0 = table.log_lambda(m, k);
                let r = (table.log_lambda(m + 1, k) - l0).exp()
                    + (table.log_lambda(m + 1, k + 1) - l0).exp();
                rec_err = rec_err.max((r - 1.0).abs());
            }
        }
        let mut row_err: f64 = 0.0;
        for n in 2..=n_max {
            let direct = table.g_total(n);
            let summed: f64 = (1..n).map(|m| table.g_nm(n, m)).sum();
            row_err = row_err.max(((summed - direct) / direct).abs());
        }
        records.push(ClaimRecord::new(
            format!("c01_recursion_{tag}"),
            None,
            Some(n_max),
            None,
            rec_err,
            RATE_IDENTITY_REL,
        ));
        records.push(ClaimRecord::new(
            format!("c01_rowsum_{tag}"),
            None,
            Some(n_max),
            None,
            row_err,
            RATE_IDENTITY_REL,
        ));
    }
    Ok(records)
}

/// 2: uniform jump law.
fn uniform_jump_law(_seed: u64, _workers: usize) -> Result<Vec<ClaimRecord>> {
    let n_max = 200u64;
    let table = RateTable::build(&CharacteristicMeasure::uniform(), n_max)?;
    let mut err: f64 = 0.0;
    for n in 2..=n_max {
        let expect = 1.0 / (n as f64 - 1.0);
        for &p in table.jump_distribution(n) {
            err = err.max((p - expect).abs());
        }
    }
    Ok(vec![ClaimRecord::new(
        "c02_uniform_jump",
        None,
        Some(n_max),
        None,
        err,
        UNIFORM_JUMP_ABS,
    )])
}

/// 3: DP oracle equals the indicator convolution for beta(1, b).
fn oracle_equivalence(_seed: u64, _workers: usize) -> Result<Vec<ClaimRecord>> {
    let mut records = Vec::new();
    for b in [0.5, 1.0, 2.0, 5.0] {
        let measure = CharacteristicMeasure::beta(1.0, b)?;
        let table = RateTable::build(&measure, 50)?;
        let mut err: f64 = 0.0;
        for n in 2..=50u64 {
            let dp = exact_x_distribution(&table, n)?;
            let conv = indicator_distribution(b, n);
            for j in 0..n {
                err = err.max((dp.prob(j) - conv.prob(j)).abs());
            }
        }
        records.push(ClaimRecord::new(
            format!("c03_indicator_match_b{b}"),
            None,
            Some(50),
            None,
            err,
            ORACLE_ENTRYWISE_ABS,
        ));
    }
    Ok(records)
}

/// 4: Monte Carlo mean and law against the DP oracle at n = 100.
fn monte_carlo_vs_oracle(seed: u64, workers: usize) -> Result<Vec<ClaimRecord>> {
    let n = 100u64;
    let replicates = 100_000u64;
    let measure = CharacteristicMeasure::uniform();
    let table = RateTable::build(&measure, n)?;
    let dp = exact_x_distribution(&table, n)?;

    let sample = monte_carlo(
        &Job::Epoch { measure, n },
        replicates,
        sub_seed(seed, 4, 0),
        workers,
    )?;
    let xs = sample.collisions();
    let (mean, sd) = mean_and_sd(&xs);
    let z = (mean - harmonic(n - 1)).abs() / (sd / (xs.len() as f64).sqrt());

    let mut counts = vec![0u64; n as usize];
    for &x in &xs {
        counts[x as usize] += 1;
    }
    let mut tv = 0.0;
    for j in 0..n {
        let emp = counts[j as usize] as f64 / xs.len() as f64;
        tv += (emp - dp.prob(j)).abs();
    }
    tv *= 0.5;

    Ok(vec![
        ClaimRecord::new("c04_mean_z", None, Some(n), Some(replicates), z, MEAN_Z_MAX),
        ClaimRecord::new(
            "c04_total_variation",
            None,
            Some(n),
            Some(replicates),
            tv,
            ORACLE_TV_MAX,
        ),
    ])
}

/// 5: two-sample KS between the epoch and chain samplers, at three states;
/// the reported statistic is the median distance, so the claim passes when
/// at least two of three states do.
fn sampler_equivalence(seed: u64, workers: usize) -> Result<Vec<ClaimRecord>> {
    let replicates = 100_000u64;
    let measure = CharacteristicMeasure::uniform();
    let crit = ks_two_sample_critical(replicates as usize, replicates as usize, SAMPLER_KS_LEVEL);
    let mut ks_x = Vec::new();
    let mut ks_tau = Vec::new();
    for (i, &n) in [10u64, 50, 200].iter().enumerate() {
        let table = RateTable::build(&measure, n)?;
        let epoch = monte_carlo(
            &Job::Epoch { measure: measure.clone(), n },
            replicates,
            sub_seed(seed, 5, 2 * i as u64),
            workers,
        )?;
        let chain = monte_carlo(
            &Job::Chain { table: &table, n },
            replicates,
            sub_seed(seed, 5, 2 * i as u64 + 1),
            workers,
        )?;
        ks_x.push(ks_two_sample(&epoch.collisions(), &chain.collisions()));
        ks_tau.push(ks_two_sample(&epoch.taus(), &chain.taus()));
    }
    ks_x.sort_by(f64::total_cmp);
    ks_tau.sort_by(f64::total_cmp);
    Ok(vec![
        ClaimRecord::new(
            "c05_collisions_ks_median",
            None,
            None,
            Some(replicates),
            ks_x[1],
            crit,
        ),
        ClaimRecord::new(
            "c05_absorption_ks_median",
            None,
            None,
            Some(replicates),
            ks_tau[1],
            crit,
        ),
    ])
}

/// 6: pathwise coupling bounds on every replicate.
fn coupling_pathwise_bounds(seed: u64, _workers: usize) -> Result<Vec<ClaimRecord>> {
    let n = 1_000u64;
    let replicates = 10_000u64;
    let measures = [
        ("uniform", CharacteristicMeasure::uniform()),
        ("beta_2_1", CharacteristicMeasure::beta(2.0, 1.0)?),
        ("logpareto_05", CharacteristicMeasure::log_pareto(0.5)?),
    ];
    let mut records = Vec::new();
    for (mi, (tag, measure)) in measures.iter().enumerate() {
        let run_seed = sub_seed(seed, 6, mi as u64);
        let mut violations = 0u64;
        for i in 0..replicates {
            let mut rng = replicate_rng(run_seed, i);
            let s = simulate_coupled(measure, n, &mut rng);
            if !s.pathwise_bounds_hold() {
                violations += 1;
            }
        }
        records.push(ClaimRecord::new(
            format!("c06_pathwise_{tag}"),
            None,
            Some(n),
            Some(replicates),
            violations as f64 / replicates as f64,
            PATHWISE_VIOLATION_MAX,
        ));
    }
    Ok(records)
}

fn normalized_ks_to_normal(table: &SampleTable, n: u64) -> f64 {
    let ln_n = (n as f64).ln();
    let normalized: Vec<f64> = table
        .collisions()
        .iter()
        .map(|x| (x - ln_n) / ln_n.sqrt())
        .collect();
    ks_distance(&normalized, std_normal_cdf)
}

/// 7: regime-1 normality of (X_n − log n)/√log n along n = 1e4, 1e6, 1e8.
fn regime1_normal(seed: u64, workers: usize) -> Result<Vec<ClaimRecord>> {
    let replicates = 10_000u64;
    let measure = CharacteristicMeasure::uniform();
    let regime = classify(&measure)?.regime.name();
    let mut distances = Vec::new();
    for (i, &n) in [10_000u64, 1_000_000, 100_000_000].iter().enumerate() {
        let sample = monte_carlo(
            &Job::Epoch { measure: measure.clone(), n },
            replicates,
            sub_seed(seed, 7, i as u64),
            workers,
        )?;
        distances.push(normalized_ks_to_normal(&sample, n));
    }
    let monotone_defect = (distances[1] - distances[0]).max(distances[2] - distances[1]);
    Ok(vec![
        ClaimRecord::new(
            "c07_ks_final",
            Some(regime),
            Some(100_000_000),
            Some(replicates),
            distances[2],
            REGIME1_KS_FINAL,
        ),
        ClaimRecord::new(
            "c07_ks_monotone",
            Some(regime),
            None,
            Some(replicates),
            monotone_defect,
            0.0,
        ),
    ])
}

/// 8: Var(τ_n)/log n near m₁⁻³(m₂ + m₁²) = 2 for the uniform measure.
fn absorption_time_variance(seed: u64, workers: usize) -> Result<Vec<ClaimRecord>> {
    let n = 100_000_000u64;
    let replicates = 10_000u64;
    let measure = CharacteristicMeasure::uniform();
    let regime = classify(&measure)?
        .for_functional(Functional::AbsorptionTime)
        .regime
        .name();
    let sample = monte_carlo(
        &Job::Epoch { measure, n },
        replicates,
        sub_seed(seed, 8, 0),
        workers,
    )?;
    let taus = sample.taus();
    let (_, sd) = mean_and_sd(&taus);
    let ratio = sd * sd / (n as f64).ln();
    Ok(vec![ClaimRecord::new(
        "c08_tau_variance",
        Some(regime),
        Some(n),
        Some(replicates),
        (ratio - 2.0).abs(),
        TAU_VAR_DEV_MAX,
    )])
}

/// 9: Mittag-Leffler moments of X_n/a_n for the log-Pareto(1/2) measure.
fn regime5_mittag_leffler(seed: u64, workers: usize) -> Result<Vec<ClaimRecord>> {
    let replicates = 10_000u64;
    let measure = CharacteristicMeasure::log_pareto(0.5)?;
    let spec = classify(&measure)?;
    let regime = spec.regime.name();
    let ml = MittagLefflerRef::new(0.5)?;
    let mut errors = Vec::new();
    for (i, &n) in [10_000u64, 100_000_000].iter().enumerate() {
        let sample = monte_carlo(
            &Job::Epoch { measure: measure.clone(), n },
            replicates,
            sub_seed(seed, 9, i as u64),
            workers,
        )?;
        let (a, _) = spec.norm_constants(n as f64)?;
        let normalized: Vec<f64> = sample.collisions().iter().map(|x| x / a).collect();
        errors.push(moment_errors(&normalized, &ml, 2));
    }
    Ok(vec![
        ClaimRecord::new(
            "c09_moment1",
            Some(regime),
            Some(100_000_000),
            Some(replicates),
            errors[1][0],
            ML_MOMENT_REL_MAX,
        ),
        ClaimRecord::new(
            "c09_moment2",
            Some(regime),
            Some(100_000_000),
            Some(replicates),
            errors[1][1],
            ML_MOMENT_REL_MAX,
        ),
        ClaimRecord::new(
            "c09_moment1_trend",
            Some(regime),
            None,
            Some(replicates),
            errors[1][0] - errors[0][0],
            0.0,
        ),
    ])
}

/// 10: empirical CF of (X_n − b_n)/a_n against the α-stable reference for
/// the log-Pareto(3/2) measure.
fn regime3_stable(seed: u64, workers: usize) -> Result<Vec<ClaimRecord>> {
    let replicates = 10_000u64;
    let alpha = 1.5;
    let measure = CharacteristicMeasure::log_pareto(alpha)?;
    let spec = classify(&measure)?;
    let regime = spec.regime.name();
    let grid = default_cf_grid();
    let mut distances = Vec::new();
    for (i, &n) in [10_000u64, 100_000_000].iter().enumerate() {
        let sample = monte_carlo(
            &Job::Epoch { measure: measure.clone(), n },
            replicates,
            sub_seed(seed, 10, i as u64),
            workers,
        )?;
        let (a, b) = spec.norm_constants(n as f64)?;
        let normalized: Vec<f64> = sample.collisions().iter().map(|x| (x - b) / a).collect();
        distances.push(cf_distance(&normalized, |t| stable_cf(alpha, t), &grid));
    }
    Ok(vec![
        ClaimRecord::new(
            "c10_cf_distance",
            Some(regime),
            Some(100_000_000),
            Some(replicates),
            distances[1],
            STABLE_CF_MAX,
        ),
        ClaimRecord::new(
            "c10_cf_trend",
            Some(regime),
            None,
            Some(replicates),
            distances[1] - distances[0],
            0.0,
        ),
    ])
}

/// 11: external branch length to Exponential(p) and the tagged collision
/// count to Geometric(p), p = 1/2 for the uniform measure.
fn external_branch(seed: u64, workers: usize) -> Result<Vec<ClaimRecord>> {
    let n = 1_000_000u64;
    let replicates = 10_000u64;
    let measure = CharacteristicMeasure::uniform();
    let p = measure.mean_x()?;
    let sample = monte_carlo(
        &Job::Tagged { measure, n },
        replicates,
        sub_seed(seed, 11, 0),
        workers,
    )?;
    let ks = ks_distance(&sample.external_branches(), |x| {
        if x <= 0.0 {
            0.0
        } else {
            -(-p * x).exp_m1()
        }
    });

    let counts = sample.collisions_before();
    let mut tv = 0.0;
    for j in 1..=30u64 {
        let emp = counts.iter().filter(|&&g| g == j).count() as f64 / counts.len() as f64;
        let geom = p * (1.0 - p).powi(j as i32 - 1);
        tv += (emp - geom).abs();
    }
    tv *= 0.5;

    Ok(vec![
        ClaimRecord::new(
            "c11_branch_ks",
            None,
            Some(n),
            Some(replicates),
            ks,
            BRANCH_KS_MAX,
        ),
        ClaimRecord::new(
            "c11_count_tv",
            None,
            Some(n),
            Some(replicates),
            tv,
            BRANCH_TV_MAX,
        ),
    ])
}

/// 12: a sub-run repeated with different worker counts is byte-identical.
fn determinism(seed: u64, _workers: usize) -> Result<Vec<ClaimRecord>> {
    let job = Job::Coupled {
        measure: CharacteristicMeasure::uniform(),
        n: 1_000,
    };
    let replicates = 2_000u64;
    let run_seed = sub_seed(seed, 12, 0);
    let serial = monte_carlo(&job, replicates, run_seed, 1)?.to_csv_string();
    let parallel = monte_carlo(&job, replicates, run_seed, 4)?.to_csv_string();
    let differs = if serial == parallel { 0.0 } else { 1.0 };
    Ok(vec![ClaimRecord::new(
        "c12_worker_invariance",
        None,
        Some(1_000),
        Some(replicates),
        differs,
        0.0,
    )])
}

/// Run one criterion (1-based index as in [`CRITERIA`]).
pub fn run_criterion(index: usize, seed: u64, workers: usize) -> Result<Vec<ClaimRecord>> {
    match index {
        1 => rate_identities(seed, workers),
        2 => uniform_jump_law(seed, workers),
        3 => oracle_equivalence(seed, workers),
        4 => monte_carlo_vs_oracle(seed, workers),
        5 => sampler_equivalence(seed, workers),
        6 => coupling_pathwise_bounds(seed, workers),
        7 => regime1_normal(seed, workers),
        8 => absorption_time_variance(seed, workers),
        9 => regime5_mittag_leffler(seed, workers),
        10 => regime3_stable(seed, workers),
        11 => external_branch(seed, workers),
        12 => determinism(seed, workers),
        _ => Err(crate::error::Error::InvalidParameter(format!(
            "criterion index must be 1..=12, got {index}"
        ))),
    }
}

/// Run a selection of criteria and assemble the report.
pub fn run_selected(indices: &[usize], seed: u64, workers: usize) -> Result<VerificationReport> {
    let mut claims = Vec::new();
    for &i in indices {
        claims.extend(run_criterion(i, seed, workers)?);
    }
    let pass = claims.iter().all(|c| c.pass);
    Ok(VerificationReport { seed, pass, claims })
}

/// Run the full suite.
pub fn run_all(seed: u64, workers: usize) -> Result<VerificationReport> {
    let all: Vec<usize> = (1..=CRITERIA.len()).collect();
    run_selected(&all, seed, workers)
}
