//! Exact samplers for the coalescent, the coupled annihilator, and the
//! tagged-particle functionals, plus the reproducible Monte Carlo driver.
//!
//! State is kept as particle counts, never as labelled partitions: every
//! functional in scope (X_n, τ_n, the K statistics, Z_n) is measurable
//! from counts, and counts let n go to 10^12.
//!
//! The epoch sampler follows the sequential construction: at each arrival
//! of a unit Poisson process, draw the head probability 1 − η from ν and a
//! binomial number of heads; two or more heads collide into one particle.
//! This is exact in law for the collision-rate dynamics, and an epoch
//! costs O(1) regardless of the particle count because the binomial draw
//! uses inversion for small means and exact rejection otherwise.

use rand::Rng;
use rand_distr::{Binomial, Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::measure::CharacteristicMeasure;
use crate::rates::RateTable;
use crate::rng::replicate_rng;

/// Exact binomial draw by inversion, for small means. Handles any u64 n;
/// expected cost is O(n p).
fn binomial_inversion<R: Rng + ?Sized>(rng: &mut R, n: u64, p: f64) -> u64 {
    let log_q = (-p).ln_1p();
    let s = p / (1.0 - p);
    let a = (n + 1) as f64 * s;
    let mut r = (n as f64 * log_q).exp();
    let mut u: f64 = rng.gen();
    let mut x = 0u64;
    while u > r && x < n {
        u -= r;
        x += 1;
        r *= a / x as f64 - s;
    }
    x
}

/// Exact binomial draw for any n up to 2^63 and p in (0, 1).
///
/// Inversion when n·min(p, 1−p) < 10, the BTPE rejection sampler above
/// that. The split mirrors the classic threshold; routing small means away
/// from BTPE also matters for correctness, because the library sampler's
/// triangle-region setup degenerates when the mean is small and n exceeds
/// i32::MAX.
fn binomial<R: Rng + ?Sized>(rng: &mut R, n: u64, p: f64) -> u64 {
    if n == 0 {
        return 0;
    }
    debug_assert!(p > 0.0 && p < 1.0);
    let flipped = p > 0.5;
    let q = if flipped { 1.0 - p } else { p };
    let draw = if n as f64 * q < 10.0 {
        binomial_inversion(rng, n, q)
    } else {
        Binomial::new(n, q)
            .expect("probability lies in (0, 1)")
            .sample(rng)
    };
    if flipped {
        n - draw
    } else {
        draw
    }
}

/// One realization of the coalescent collision count and absorption time.
#[derive(Debug, Clone, PartialEq)]
pub struct CoalescentSummary {
    pub n: u64,
    /// X_n, the number of collisions on the way from n to 1.
    pub collisions: u64,
    /// τ_n, in units of the driving unit Poisson process.
    pub absorption_time: f64,
    /// Per-collision decrements k − 1, when recording was requested.
    pub merge_sizes: Option<Vec<u64>>,
}

fn epochs_impl<R: Rng + ?Sized>(
    measure: &CharacteristicMeasure,
    n: u64,
    rng: &mut R,
    record: bool,
) -> CoalescentSummary {
    assert!(n >= 1, "the coalescent starts from at least one particle");
    let mut merges = record.then(Vec::new);
    if n == 1 {
        return CoalescentSummary {
            n,
            collisions: 0,
            absorption_time: 0.0,
            merge_sizes: merges,
        };
    }
    let mut m = n;
    let mut t = 0.0;
    let mut collisions = 0u64;
    loop {
        t += rng.sample::<f64, _>(Exp1);
        let x = measure.sample_one_minus_eta(rng);
        let heads = binomial(rng, m, x);
        if heads >= 2 {
            m -= heads - 1;
            collisions += 1;
            if let Some(ms) = merges.as_mut() {
                ms.push(heads - 1);
            }
            if m == 1 {
                break;
            }
        }
    }
    CoalescentSummary {
        n,
        collisions,
        absorption_time: t,
        merge_sizes: merges,
    }
}

/// Epoch-loop sampler of (X_n, τ_n). Works for any n ≥ 1 without a rate
/// table.
pub fn simulate_coalescent_epochs<R: Rng + ?Sized>(
    measure: &CharacteristicMeasure,
    n: u64,
    rng: &mut R,
) -> CoalescentSummary {
    epochs_impl(measure, n, rng, false)
}

/// As [`simulate_coalescent_epochs`], additionally recording the merge
/// decrements (which sum to n − 1).
pub fn simulate_coalescent_epochs_recorded<R: Rng + ?Sized>(
    measure: &CharacteristicMeasure,
    n: u64,
    rng: &mut R,
) -> CoalescentSummary {
    epochs_impl(measure, n, rng, true)
}

/// Embedded-chain sampler: exponential holding time at rate g_m, then a
/// jump from the tabulated distribution. Identical in law to the epoch
/// sampler.
pub fn simulate_coalescent_chain<R: Rng + ?Sized>(
    table: &RateTable,
    n: u64,
    rng: &mut R,
) -> Result<CoalescentSummary> {
    assert!(n >= 1);
    if n > 1 {
        table.check_capacity(n)?;
    }
    let mut m = n;
    let mut t = 0.0;
    let mut collisions = 0u64;
    while m > 1 {
        let e: f64 = rng.sample(Exp1);
        t += e / table.g_total(m);
        m = table.sample_jump(m, rng.gen::<f64>());
        collisions += 1;
    }
    Ok(CoalescentSummary {
        n,
        collisions,
        absorption_time: t,
        merge_sizes: None,
    })
}

/// One pathwise realization of the coupled (coalescent, annihilator) pair.
///
/// The two processes share the Poisson epochs and the η draws. Primary
/// particles are the initial n; whenever k ≥ 1 particles are marked head
/// they are replaced by a single secondary particle, so the annihilator is
/// the primary count and the coalescent is the total count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoupledSample {
    pub n: u64,
    /// X_n, all coalescent collisions.
    pub collisions: u64,
    /// τ_n.
    pub absorption_time: f64,
    /// K_n, annihilator transitions (epochs with at least one primary head).
    pub annihilator_jumps: u64,
    /// K_{n,1}, annihilator jumps of size one (singular collisions).
    pub singular_jumps: u64,
    /// K_{n,0}, epochs before σ_n with no primary head.
    pub idle_epochs: u64,
    /// σ_n, the annihilator absorption time.
    pub annihilator_absorption_time: f64,
    /// U_n, particles alive at σ_n (all secondary).
    pub survivors: u64,
    /// Coalescent collisions strictly after σ_n.
    pub collisions_after: u64,
    /// Ordered positive decrements of the primary count; a composition of n.
    pub composition: Vec<u64>,
    /// Whether the coalescent count dominated the primary count at every
    /// epoch (it must; recorded so verification can assert it pathwise).
    pub dominance_held: bool,
}

pub fn simulate_coupled<R: Rng + ?Sized>(
    measure: &CharacteristicMeasure,
    n: u64,
    rng: &mut R,
) -> CoupledSample {
    assert!(n >= 2, "the coupling needs at least two particles");
    // `total` follows the coalescent update rule, `primary` the
    // annihilator rule; their coherence is checked, not assumed.
    let mut total = n;
    let mut primary = n;
    let mut t = 0.0;
    let mut collisions = 0u64;
    let mut annihilator_jumps = 0u64;
    let mut singular_jumps = 0u64;
    let mut idle_epochs = 0u64;
    let mut composition = Vec::new();
    let mut dominance_held = true;

    while primary > 0 {
        t += rng.sample::<f64, _>(Exp1);
        let x = measure.sample_one_minus_eta(rng);
        let primary_heads = binomial(rng, primary, x);
        let secondary_heads = binomial(rng, total - primary, x);
        let heads = primary_heads + secondary_heads;
        if heads >= 2 {
            total -= heads - 1;
            collisions += 1;
        }
        if primary_heads >= 1 {
            annihilator_jumps += 1;
            composition.push(primary_heads);
            if primary_heads == 1 {
                singular_jumps += 1;
            }
            primary -= primary_heads;
        } else {
            idle_epochs += 1;
        }
        dominance_held &= total >= primary;
    }
    let annihilator_absorption_time = t;
    let survivors = total;

    // The coalescent continues on the remaining (secondary) particles.
    let mut m = survivors;
    let mut collisions_after = 0u64;
    while m > 1 {
        t += rng.sample::<f64, _>(Exp1);
        let x = measure.sample_one_minus_eta(rng);
        let heads = binomial(rng, m, x);
        if heads >= 2 {
            m -= heads - 1;
            collisions_after += 1;
        }
    }

    CoupledSample {
        n,
        collisions: collisions + collisions_after,
        absorption_time: t,
        annihilator_jumps,
        singular_jumps,
        idle_epochs,
        annihilator_absorption_time,
        survivors,
        collisions_after,
        composition,
        dominance_held,
    }
}

impl CoupledSample {
    /// The pathwise coupling inequalities and structural identities.
    pub fn pathwise_bounds_hold(&self) -> bool {
        let lower = self.annihilator_jumps - self.singular_jumps <= self.collisions;
        let upper = self.collisions
            <= self.annihilator_jumps + self.idle_epochs + self.collisions_after;
        let times = self.annihilator_absorption_time <= self.absorption_time;
        let parts: u64 = self.composition.iter().sum();
        let units = self.composition.iter().filter(|&&p| p == 1).count() as u64;
        lower
            && upper
            && times
            && self.dominance_held
            && parts == self.n
            && self.annihilator_jumps == self.composition.len() as u64
            && self.singular_jumps == units
            && self.survivors >= 1
    }
}

/// Z_n and the number of collisions up to and including the one that
/// absorbs the tagged particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaggedSample {
    /// Z_n, the external branch length of the tagged particle.
    pub external_branch_length: f64,
    /// Collisions before and including the tagged one; geometric in the
    /// limit.
    pub collisions_before: u64,
}

pub fn simulate_tagged<R: Rng + ?Sized>(
    measure: &CharacteristicMeasure,
    n: u64,
    rng: &mut R,
) -> TaggedSample {
    assert!(n >= 2, "a tagged particle needs company");
    let mut m = n;
    let mut t = 0.0;
    let mut collisions = 0u64;
    loop {
        t += rng.sample::<f64, _>(Exp1);
        let x = measure.sample_one_minus_eta(rng);
        let tagged_head = rng.gen::<f64>() < x;
        let heads = binomial(rng, m - 1, x) + tagged_head as u64;
        if heads >= 2 {
            collisions += 1;
            if tagged_head {
                return TaggedSample {
                    external_branch_length: t,
                    collisions_before: collisions,
                };
            }
            m -= heads - 1;
        }
    }
}

/// A Monte Carlo job: which sampler to drive and at what initial count.
#[derive(Debug, Clone)]
pub enum Job<'a> {
    Epoch {
        measure: CharacteristicMeasure,
        n: u64,
    },
    Chain {
        table: &'a RateTable,
        n: u64,
    },
    Coupled {
        measure: CharacteristicMeasure,
        n: u64,
    },
    Tagged {
        measure: CharacteristicMeasure,
        n: u64,
    },
}

/// One sample-table row; fields not produced by the job stay empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRow {
    pub replicate: u64,
    pub n: u64,
    #[serde(rename = "X")]
    pub collisions: Option<u64>,
    pub tau: Option<f64>,
    #[serde(rename = "K")]
    pub annihilator_jumps: Option<u64>,
    #[serde(rename = "K1")]
    pub singular_jumps: Option<u64>,
    #[serde(rename = "K0")]
    pub idle_epochs: Option<u64>,
    pub sigma: Option<f64>,
    #[serde(rename = "U")]
    pub survivors: Option<u64>,
    #[serde(rename = "X_after")]
    pub collisions_after: Option<u64>,
    #[serde(rename = "Z")]
    pub external_branch: Option<f64>,
    #[serde(rename = "G")]
    pub collisions_before: Option<u64>,
}

impl SampleRow {
    fn empty(replicate: u64, n: u64) -> SampleRow {
        SampleRow {
            replicate,
            n,
            collisions: None,
            tau: None,
            annihilator_jumps: None,
            singular_jumps: None,
            idle_epochs: None,
            sigma: None,
            survivors: None,
            collisions_after: None,
            external_branch: None,
            collisions_before: None,
        }
    }
}

pub const CSV_HEADER: &str = "replicate,n,X,tau,K,K1,K0,sigma,U,X_after,Z,G";

/// An ordered table of replicate rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleTable {
    pub rows: Vec<SampleRow>,
}

fn fmt_opt_u64(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn fmt_opt_f64(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

impl SampleTable {
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.replicate,
                r.n,
                fmt_opt_u64(r.collisions),
                fmt_opt_f64(r.tau),
                fmt_opt_u64(r.annihilator_jumps),
                fmt_opt_u64(r.singular_jumps),
                fmt_opt_u64(r.idle_epochs),
                fmt_opt_f64(r.sigma),
                fmt_opt_u64(r.survivors),
                fmt_opt_u64(r.collisions_after),
                fmt_opt_f64(r.external_branch),
                fmt_opt_u64(r.collisions_before),
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is ASCII")
    }

    /// Column extractors for statistics; rows lacking the field are skipped.
    pub fn collisions(&self) -> Vec<f64> {
        self.rows
            .iter()
            .filter_map(|r| r.collisions.map(|x| x as f64))
            .collect()
    }

    pub fn taus(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.tau).collect()
    }

    pub fn external_branches(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.external_branch).collect()
    }

    pub fn collisions_before(&self) -> Vec<u64> {
        self.rows.iter().filter_map(|r| r.collisions_before).collect()
    }
}

fn run_replicate(job: &Job<'_>, index: u64, seed: u64) -> Result<SampleRow> {
    let mut rng = replicate_rng(seed, index);
    Ok(match job {
        Job::Epoch { measure, n } => {
            let s = simulate_coalescent_epochs(measure, *n, &mut rng);
            let mut row = SampleRow::empty(index, *n);
            row.collisions = Some(s.collisions);
            row.tau = Some(s.absorption_time);
            row
        }
        Job::Chain { table, n } => {
            let s = simulate_coalescent_chain(table, *n, &mut rng)?;
            let mut row = SampleRow::empty(index, *n);
            row.collisions = Some(s.collisions);
            row.tau = Some(s.absorption_time);
            row
        }
        Job::Coupled { measure, n } => {
            let s = simulate_coupled(measure, *n, &mut rng);
            let mut row = SampleRow::empty(index, *n);
            row.collisions = Some(s.collisions);
            row.tau = Some(s.absorption_time);
            row.annihilator_jumps = Some(s.annihilator_jumps);
            row.singular_jumps = Some(s.singular_jumps);
            row.idle_epochs = Some(s.idle_epochs);
            row.sigma = Some(s.annihilator_absorption_time);
            row.survivors = Some(s.survivors);
            row.collisions_after = Some(s.collisions_after);
            row
        }
        Job::Tagged { measure, n } => {
            let s = simulate_tagged(measure, *n, &mut rng);
            let mut row = SampleRow::empty(index, *n);
            row.external_branch = Some(s.external_branch_length);
            row.collisions_before = Some(s.collisions_before);
            row
        }
    })
}

/// Run `replicates` independent replicates of `job`.
///
/// Replicate i draws from the stream keyed by `(seed, i)`, and rows come
/// back ordered by replicate, so the output is identical for every
/// `workers` setting and scheduling.
pub fn monte_carlo(job: &Job<'_>, replicates: u64, seed: u64, workers: usize) -> Result<SampleTable> {
    assert!(replicates >= 1, "at least one replicate");
    let rows: Result<Vec<SampleRow>> = if workers <= 1 {
        (0..replicates).map(|i| run_replicate(job, i, seed)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("worker pool");
        pool.install(|| {
            (0..replicates)
                .into_par_iter()
                .map(|i| run_replicate(job, i, seed))
                .collect()
        })
    };
    Ok(SampleTable { rows: rows? })
}
