//! Limit-law machinery: regime classification of a measure, the
//! normalizing sequences (a_n, b_n) for the collision count and the
//! absorption time, reference limit distributions (standard normal,
//! α-stable via its characteristic function, Mittag-Leffler via its
//! moments), and the statistical distances used for verification.
//!
//! The five regimes, keyed by the tail of −log η:
//!   1. finite variance of log η — normal;
//!   2. infinite variance with slowly varying truncated second moment —
//!      normal with a slowly-varying scale;
//!   3. tail index α ∈ (1, 2) — α-stable;
//!   4. tail index α = 1 with infinite mean — 1-stable;
//!   5. tail index α ∈ [0, 1) — scaled Mittag-Leffler (exponential at
//!      α = 0).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measure::CharacteristicMeasure;
use crate::special::{gamma, gamma_one_minus};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    NormalFiniteVariance,
    NormalTruncatedVariance,
    StableAlpha,
    StableOne,
    MittagLeffler,
}

impl Regime {
    pub fn index(self) -> u8 {
        match self {
            Regime::NormalFiniteVariance => 1,
            Regime::NormalTruncatedVariance => 2,
            Regime::StableAlpha => 3,
            Regime::StableOne => 4,
            Regime::MittagLeffler => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::NormalFiniteVariance => "normal-finite-variance",
            Regime::NormalTruncatedVariance => "normal-truncated-variance",
            Regime::StableAlpha => "stable-alpha",
            Regime::StableOne => "stable-one",
            Regime::MittagLeffler => "mittag-leffler",
        }
    }
}

/// Which functional the normalization targets. Only regime 1 distinguishes
/// the two: the absorption time picks up an extra m₁² in the variance
/// constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functional {
    Collisions,
    AbsorptionTime,
}

/// The slowly varying factor L in the tail of −log η, for the built-in
/// families.
#[derive(Debug, Clone, Copy, PartialEq)]
enum SlowVariation {
    /// L ≡ 1 (log-Pareto tails).
    One,
    /// L(x) = 2 log x (the α = 2 truncated-variance boundary case).
    TwoLog,
    /// L(x) = 1/(1 + log x) (the α = 0 log-log-Pareto tail).
    InverseOnePlusLog,
}

impl SlowVariation {
    fn eval(self, x: f64) -> f64 {
        match self {
            SlowVariation::One => 1.0,
            SlowVariation::TwoLog => 2.0 * x.ln(),
            SlowVariation::InverseOnePlusLog => 1.0 / (1.0 + x.ln()),
        }
    }
}

/// A classified measure with evaluable normalizing sequences.
#[derive(Debug, Clone)]
pub struct RegimeSpec {
    pub regime: Regime,
    /// Tail index of −log η where applicable (regimes 3–5; 2 sits at the
    /// boundary value 2).
    pub alpha: Option<f64>,
    pub m1: f64,
    pub m2: f64,
    pub functional: Functional,
    slow_variation: SlowVariation,
}

/// Decide the limit regime of a built-in measure. Tabulated measures carry
/// no analytic tail and are rejected.
pub fn classify(measure: &CharacteristicMeasure) -> Result<RegimeSpec> {
    let (m1, m2) = measure.log_moments();
    let spec = match measure {
        CharacteristicMeasure::Uniform | CharacteristicMeasure::Beta { .. } => RegimeSpec {
            regime: Regime::NormalFiniteVariance,
            alpha: None,
            m1,
            m2,
            functional: Functional::Collisions,
            slow_variation: SlowVariation::One,
        },
        CharacteristicMeasure::LogPareto { alpha } => {
            let a = *alpha;
            if a < 1.0 {
                RegimeSpec {
                    regime: Regime::MittagLeffler,
                    alpha: Some(a),
                    m1,
                    m2,
                    functional: Functional::Collisions,
                    slow_variation: SlowVariation::One,
                }
            } else if a == 1.0 {
                RegimeSpec {
                    regime: Regime::StableOne,
                    alpha: Some(1.0),
                    m1,
                    m2,
                    functional: Functional::Collisions,
                    slow_variation: SlowVariation::One,
                }
            } else if a < 2.0 {
                RegimeSpec {
                    regime: Regime::StableAlpha,
                    alpha: Some(a),
                    m1,
                    m2,
                    functional: Functional::Collisions,
                    slow_variation: SlowVariation::One,
                }
            } else {
                // a == 2: truncated second moment grows like 2 log.
                RegimeSpec {
                    regime: Regime::NormalTruncatedVariance,
                    alpha: Some(2.0),
                    m1,
                    m2,
                    functional: Functional::Collisions,
                    slow_variation: SlowVariation::TwoLog,
                }
            }
        }
        CharacteristicMeasure::LogLogPareto => RegimeSpec {
            regime: Regime::MittagLeffler,
            alpha: Some(0.0),
            m1,
            m2,
            functional: Functional::Collisions,
            slow_variation: SlowVariation::InverseOnePlusLog,
        },
        CharacteristicMeasure::Tabulated(_) => return Err(Error::RegimeUnknown),
    };
    Ok(spec)
}

fn bisect(
    mut lo: f64,
    mut hi: f64,
    target: f64,
    f: impl Fn(f64) -> f64,
    what: &str,
) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo <= target && target <= fhi) {
        return Err(Error::RootFinding {
            what: what.to_string(),
            lo,
            hi,
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-10 * hi.abs() {
            return Ok(0.5 * (lo + hi));
        }
    }
    Ok(0.5 * (lo + hi))
}

impl RegimeSpec {
    pub fn for_functional(mut self, functional: Functional) -> RegimeSpec {
        self.functional = functional;
        self
    }

    /// (a_n, b_n) such that (F_n − b_n)/a_n converges; b_n ≡ 0 in regime 5.
    ///
    /// `n` is the particle count as a float, so counts like e^100 stay
    /// representable; for even larger symbolic counts use
    /// [`RegimeSpec::norm_constants_ln`].
    pub fn norm_constants(&self, n: f64) -> Result<(f64, f64)> {
        assert!(n >= 3.0, "normalizing sequences start at n = 3");
        self.norm_constants_ln(n.ln())
    }

    /// As [`RegimeSpec::norm_constants`], parameterized by log n.
    pub fn norm_constants_ln(&self, ln_n: f64) -> Result<(f64, f64)> {
        assert!(ln_n >= 3f64.ln(), "normalizing sequences start at n = 3");
        match self.regime {
            Regime::NormalFiniteVariance => {
                let b = ln_n / self.m1;
                let var_const = match self.functional {
                    Functional::Collisions => self.m2,
                    Functional::AbsorptionTime => self.m2 + self.m1 * self.m1,
                };
                let a = (var_const * ln_n / self.m1.powi(3)).sqrt();
                Ok((a, b))
            }
            Regime::NormalTruncatedVariance => {
                let y = ln_n.floor();
                let sv = self.slow_variation;
                // Large solution of c² / L(c) = y; the map is increasing
                // beyond √e for L = 2 log.
                let c = bisect(
                    std::f64::consts::E.sqrt() + 1e-9,
                    1e12,
                    y,
                    |c| c * c / sv.eval(c),
                    "truncated-variance scale c_n",
                )?;
                Ok((self.m1.powf(-1.5) * c, ln_n / self.m1))
            }
            Regime::StableAlpha => {
                let alpha = self.alpha.expect("stable regime carries alpha");
                let y = ln_n.floor();
                let c = match self.slow_variation {
                    SlowVariation::One => y.powf(1.0 / alpha),
                    sv => bisect(
                        1.0 + 1e-9,
                        1e12,
                        y,
                        |c| c.powf(alpha) / sv.eval(c),
                        "stable scale c_n",
                    )?,
                };
                Ok((self.m1.powf(-(alpha + 1.0) / alpha) * c, ln_n / self.m1))
            }
            Regime::StableOne => {
                // For the log-Pareto(1) family: c(x) = x and
                // ψ(x) = x (log x + 1), inverted numerically.
                let x = ln_n;
                let b = bisect(1.0, x, x, |b| b * (b.ln() + 1.0), "psi inverse")?;
                let a = b * b / x; // c(b) = b
                Ok((a, b))
            }
            Regime::MittagLeffler => {
                let alpha = self.alpha.expect("Mittag-Leffler regime carries alpha");
                let a = ln_n.powf(alpha) / self.slow_variation.eval(ln_n);
                Ok((a, 0.0))
            }
        }
    }

    /// ψ(x) for the regime-4 normalization; exposed for inversion-quality
    /// checks.
    pub fn psi(&self, x: f64) -> f64 {
        x * (x.ln() + 1.0)
    }
}

/// The scaled Mittag-Leffler law θ_α, characterized by its moments.
#[derive(Debug, Clone, Copy)]
pub struct MittagLefflerRef {
    pub alpha: f64,
}

impl MittagLefflerRef {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!(
                "Mittag-Leffler index must lie in [0, 1), got {alpha}"
            )));
        }
        Ok(MittagLefflerRef { alpha })
    }

    /// k-th moment: k! / (Γ(1−α)^k Γ(1+kα)).
    pub fn moment(&self, k: u32) -> f64 {
        let kf = (1..=k).fold(1.0, |acc, i| acc * i as f64);
        kf / (gamma(1.0 - self.alpha).powi(k as i32) * gamma(1.0 + k as f64 * self.alpha))
    }
}

/// Characteristic function of the limit law in regimes 3 (α ∈ (1, 2)) and
/// 4 (α = 1).
pub fn stable_cf(alpha: f64, t: f64) -> Complex64 {
    assert!(
        (1.0..2.0).contains(&alpha),
        "stable characteristic function needs alpha in [1, 2), got {alpha}"
    );
    if t == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let at = t.abs();
    let sgn = t.signum();
    let exponent = if alpha == 1.0 {
        Complex64::new(
            -at * std::f64::consts::FRAC_PI_2,
            at * at.ln() * sgn,
        )
    } else {
        let half = std::f64::consts::FRAC_PI_2 * alpha;
        let scale = -at.powf(alpha) * gamma_one_minus(alpha);
        Complex64::new(scale * half.cos(), scale * half.sin() * sgn)
    };
    exponent.exp()
}

/// Kolmogorov–Smirnov distance between a sample and an evaluable CDF,
/// taking both one-sided gaps at every sample point.
pub fn ks_distance<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    assert!(!sample.is_empty(), "KS distance of an empty sample");
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    d
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let mut i = 0usize;
    let mut j = 0usize;
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let t = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= t {
            i += 1;
        }
        while j < ys.len() && ys[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Default grid for characteristic-function distances: 0.1, 0.2, …, 2.0.
pub fn default_cf_grid() -> Vec<f64> {
    (1..=20).map(|i| i as f64 / 10.0).collect()
}

/// max over the grid of |empirical CF − reference CF|.
pub fn cf_distance<F: Fn(f64) -> Complex64>(sample: &[f64], cf: F, grid: &[f64]) -> f64 {
    assert!(!sample.is_empty() && !grid.is_empty());
    let n = sample.len() as f64;
    let mut worst: f64 = 0.0;
    for &t in grid {
        let mut re = 0.0;
        let mut im = 0.0;
        for &x in sample {
            let (s, c) = (t * x).sin_cos();
            re += c;
            im += s;
        }
        let emp = Complex64::new(re / n, im / n);
        worst = worst.max((emp - cf(t)).norm());
    }
    worst
}

/// Relative errors of the first `k_max` empirical moments against the
/// Mittag-Leffler reference. Empirical moments beyond the fourth are too
/// noisy to be meaningful.
pub fn moment_errors(sample: &[f64], reference: &MittagLefflerRef, k_max: u32) -> Vec<f64> {
    assert!(k_max <= 4, "moments beyond the fourth are not supported");
    let n = sample.len() as f64;
    (1..=k_max)
        .map(|k| {
            let emp: f64 = sample.iter().map(|x| x.powi(k as i32)).sum::<f64>() / n;
            (emp / reference.moment(k) - 1.0).abs()
        })
        .collect()
}
