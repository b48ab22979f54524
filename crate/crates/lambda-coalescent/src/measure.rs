//! The characteristic probability measure ν on (0, 1).
//!
//! A draw from ν is the head probability `1 − η` of one epoch of the
//! sequential construction. The module owns sampling, the tail function
//! of η, the logarithmic moments `m₁ = E(−log η)` and `m₂ = Var(log η)`,
//! the mean `p = E(1 − η)`, and the standing-assumption notes.
//!
//! Families:
//!   * `Uniform` — ν = Lebesgue on (0, 1);
//!   * `Beta(θ, b)` — ν(dx) ∝ x^{θ−1}(1−x)^{b−1} dx;
//!   * `LogPareto(α)` — the law of 1 − e^{−V} with P(V > t) = t^{−α}, t ≥ 1,
//!     α ∈ (0, 2] (α = 2 is the truncated-variance boundary case);
//!   * `LogLogPareto` — the law of 1 − e^{−V} with P(V > t) = 1/(1 + log t);
//!   * `Tabulated` — the quantile function of V = −log η on a finite grid,
//!     linearly interpolated.

use std::fmt;
use std::io::BufRead;

use rand::Rng;

use crate::error::{Error, Result};
use crate::quad;
use crate::special::{digamma, ln_beta, trigamma};

/// Largest f64 strictly below 1; samples of 1 − η are clamped into
/// (0, 1) so downstream binomial draws always see a valid probability.
const ONE_MINUS_ULP: f64 = 0.999_999_999_999_999_9;

pub(crate) fn clamp_open_unit(x: f64) -> f64 {
    if x <= 0.0 {
        f64::MIN_POSITIVE
    } else if x >= 1.0 {
        ONE_MINUS_ULP
    } else {
        x
    }
}

/// Piecewise-linear quantile function of V = −log η on a grid.
///
/// The grid must span the full unit interval: `u` strictly increasing from
/// 0 to 1, `v` finite, non-negative and non-decreasing. Flat stretches of
/// `v` are atoms of V.
#[derive(Debug, Clone)]
pub struct InverseCdf {
    u: Vec<f64>,
    v: Vec<f64>,
}

impl InverseCdf {
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if u.len() != v.len() || u.len() < 2 {
            return Err(Error::InvalidParameter(
                "tabulated grid needs at least two (u, v) pairs of equal length".into(),
            ));
        }
        if u[0] != 0.0 || *u.last().unwrap() != 1.0 {
            return Err(Error::InvalidParameter(
                "tabulated u grid must start at 0 and end at 1".into(),
            ));
        }
        if u.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "tabulated u grid must be strictly increasing".into(),
            ));
        }
        if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidParameter(
                "tabulated v grid must be finite and non-negative".into(),
            ));
        }
        if v.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParameter(
                "tabulated v grid must be non-decreasing".into(),
            ));
        }
        // An atom of V at 0 would put η = 1 with positive probability.
        if v[1] == 0.0 {
            return Err(Error::InvalidParameter(
                "tabulated v may vanish only at u = 0 (no atom at V = 0)".into(),
            ));
        }
        Ok(InverseCdf { u, v })
    }

    /// Parse CSV with mandatory header `u,v`.
    pub fn from_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut u = Vec::new();
        let mut v = Vec::new();
        let mut lines = reader.lines();
        match lines.next() {
            Some(line) => {
                let header = line?;
                if header.trim() != "u,v" {
                    return Err(Error::InvalidParameter(format!(
                        "tabulated CSV must start with the header `u,v`, got `{}`",
                        header.trim()
                    )));
                }
            }
            None => return Err(Error::InvalidParameter("tabulated CSV is empty".into())),
        }
        for line in lines {
            let line = line?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let mut parts = t.split(',');
            let (a, b) = match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "tabulated CSV row `{t}` is not `u,v`"
                    )))
                }
            };
            let pu: f64 = a.trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("tabulated CSV: bad u value `{a}`"))
            })?;
            let pv: f64 = b.trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("tabulated CSV: bad v value `{b}`"))
            })?;
            u.push(pu);
            v.push(pv);
        }
        InverseCdf::new(u, v)
    }

    /// Quantile of V at probability `p` ∈ [0, 1].
    pub fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return self.v[0];
        }
        if p >= 1.0 {
            return *self.v.last().unwrap();
        }
        // Last index i with u[i] <= p.
        let i = self.u.partition_point(|&x| x <= p) - 1;
        let (u0, u1) = (self.u[i], self.u[i + 1]);
        let (v0, v1) = (self.v[i], self.v[i + 1]);
        v0 + (p - u0) / (u1 - u0) * (v1 - v0)
    }

    /// P(V ≥ t). Atoms at t are included.
    pub fn tail_v(&self, t: f64) -> f64 {
        if t <= self.v[0] {
            return 1.0;
        }
        let last = *self.v.last().unwrap();
        if t > last {
            return 0.0;
        }
        // First index with v >= t; the previous segment crosses t.
        let j = self.v.partition_point(|&x| x < t);
        debug_assert!(j >= 1);
        let (u0, u1) = (self.u[j - 1], self.u[j]);
        let (v0, v1) = (self.v[j - 1], self.v[j]);
        let below = if v1 == v0 {
            u0
        } else {
            u0 + (t - v0) / (v1 - v0) * (u1 - u0)
        };
        1.0 - below
    }

    /// Exact (E V, E V²) of the interpolated quantile.
    fn moments_v(&self) -> (f64, f64) {
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for i in 0..self.u.len() - 1 {
            let du = self.u[i + 1] - self.u[i];
            let (a, b) = (self.v[i], self.v[i + 1]);
            m1 += du * 0.5 * (a + b);
            m2 += du * (a * a + a * b + b * b) / 3.0;
        }
        (m1, m2)
    }

    /// Exact ∫₀¹ e^{−Q(u)} du, i.e. E(e^{−V}) = E η.
    fn mean_exp_neg_v(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.u.len() - 1 {
            let du = self.u[i + 1] - self.u[i];
            let (a, b) = (self.v[i], self.v[i + 1]);
            if a == b {
                acc += du * (-a).exp();
            } else {
                acc += du * ((-a).exp() - (-b).exp()) / (b - a);
            }
        }
        acc
    }

    pub fn segments(&self) -> &[f64] {
        &self.u
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Which standing assumption a note refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assumption {
    /// The support of ν is not contained in a geometric sequence
    /// accumulating at 1.
    SupportNotGeometric,
    /// ∫ |log x| ν(dx) < ∞.
    FiniteLogMoment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    UserMustVerify,
}

#[derive(Debug, Clone)]
pub struct AssumptionNote {
    pub assumption: Assumption,
    pub verdict: Verdict,
    pub detail: String,
    /// Value of the checked integral, when one is computed.
    pub value: Option<f64>,
}

#[derive(Debug, Clone)]
pub enum CharacteristicMeasure {
    Uniform,
    Beta { theta: f64, b: f64 },
    LogPareto { alpha: f64 },
    LogLogPareto,
    Tabulated(InverseCdf),
}

impl CharacteristicMeasure {
    pub fn uniform() -> Self {
        CharacteristicMeasure::Uniform
    }

    pub fn beta(theta: f64, b: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite() && b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta measure needs positive finite shapes, got theta = {theta}, b = {b}"
            )));
        }
        Ok(CharacteristicMeasure::Beta { theta, b })
    }

    pub fn log_pareto(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "log-Pareto tail index must lie in (0, 2], got {alpha}"
            )));
        }
        Ok(CharacteristicMeasure::LogPareto { alpha })
    }

    pub fn log_log_pareto() -> Self {
        CharacteristicMeasure::LogLogPareto
    }

    pub fn tabulated(grid: InverseCdf) -> Self {
        CharacteristicMeasure::Tabulated(grid)
    }

    /// Parse a CLI/config measure spec: `uniform`, `beta:<theta>,<b>`,
    /// `logpareto:<alpha>`, `loglogpareto` or `tabulated:<path>`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let s = spec.trim();
        if s.eq_ignore_ascii_case("uniform") {
            return Ok(Self::uniform());
        }
        if s.eq_ignore_ascii_case("loglogpareto") {
            return Ok(Self::log_log_pareto());
        }
        if let Some(rest) = s.strip_prefix("beta:") {
            let mut it = rest.split(',');
            let bad = || Error::InvalidParameter(format!("bad beta spec `{s}`"));
            let theta: f64 = it.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
            let b: f64 = it.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
            if it.next().is_some() {
                return Err(bad());
            }
            return Self::beta(theta, b);
        }
        if let Some(rest) = s.strip_prefix("logpareto:") {
            let alpha: f64 = rest
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad logpareto spec `{s}`")))?;
            return Self::log_pareto(alpha);
        }
        if let Some(path) = s.strip_prefix("tabulated:") {
            let file = std::fs::File::open(path.trim())?;
            let grid = InverseCdf::from_csv(std::io::BufReader::new(file))?;
            return Ok(Self::tabulated(grid));
        }
        Err(Error::InvalidParameter(format!(
            "unknown measure spec `{s}` (expected uniform, beta:<theta>,<b>, logpareto:<alpha>, loglogpareto or tabulated:<path>)"
        )))
    }

    /// One draw of 1 − η, strictly inside (0, 1).
    ///
    /// Heavy-tailed families put visible mass within one ulp of 1; such
    /// draws clamp to the largest double below 1. When the tail matters at
    /// that resolution, work with [`Self::sample_neg_log_eta`] instead.
    pub fn sample_one_minus_eta<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let x = match self {
            CharacteristicMeasure::Uniform => rng.gen::<f64>(),
            CharacteristicMeasure::Beta { theta, b } => {
                use rand_distr::Distribution;
                rand_distr::Beta::new(*theta, *b)
                    .expect("validated at construction")
                    .sample(rng)
            }
            _ => -(-self.sample_neg_log_eta(rng)).exp_m1(),
        };
        clamp_open_unit(x)
    }

    /// One draw of V = −log η, the coordinate the quantile families are
    /// defined in; free of the resolution loss near η = 0. Consumes the
    /// stream exactly like [`Self::sample_one_minus_eta`].
    pub fn sample_neg_log_eta<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            CharacteristicMeasure::Uniform => {
                let x = rng.gen::<f64>();
                -(-x).ln_1p()
            }
            CharacteristicMeasure::Beta { .. } => {
                let x = self.sample_one_minus_eta(rng);
                -(-x).ln_1p()
            }
            CharacteristicMeasure::LogPareto { alpha } => {
                let u: f64 = rng.gen();
                (1.0 - u).powf(-1.0 / alpha)
            }
            CharacteristicMeasure::LogLogPareto => {
                let w = 1.0 - rng.gen::<f64>();
                (1.0 / w - 1.0).exp()
            }
            CharacteristicMeasure::Tabulated(grid) => grid.quantile(rng.gen()),
        }
    }

    /// P(η ≤ x) = ν([1 − x, 1)) for x ∈ (0, 1).
    pub fn tail_eta(&self, x: f64) -> f64 {
        assert!(x > 0.0 && x < 1.0, "tail_eta requires x in (0, 1), got {x}");
        match self {
            CharacteristicMeasure::Uniform => x,
            CharacteristicMeasure::Beta { theta, b } => {
                // η ~ Beta(b, θ) when 1 − η ~ Beta(θ, b).
                crate::special::beta_reg(*b, *theta, x)
            }
            CharacteristicMeasure::LogPareto { alpha } => {
                let t = -x.ln();
                if t <= 1.0 {
                    1.0
                } else {
                    t.powf(-alpha)
                }
            }
            CharacteristicMeasure::LogLogPareto => {
                let t = -x.ln();
                if t <= 1.0 {
                    1.0
                } else {
                    1.0 / (1.0 + t.ln())
                }
            }
            CharacteristicMeasure::Tabulated(grid) => grid.tail_v(-x.ln()),
        }
    }

    /// (m₁, m₂) = (E(−log η), Var(log η)); either may be +∞.
    pub fn log_moments(&self) -> (f64, f64) {
        match self {
            CharacteristicMeasure::Uniform => (1.0, 1.0),
            CharacteristicMeasure::Beta { theta, b } => {
                let m1 = digamma(theta + b) - digamma(*b);
                let m2 = trigamma(*b) - trigamma(theta + b);
                (m1, m2)
            }
            CharacteristicMeasure::LogPareto { alpha } => {
                let m1 = if *alpha > 1.0 {
                    alpha / (alpha - 1.0)
                } else {
                    f64::INFINITY
                };
                (m1, f64::INFINITY)
            }
            CharacteristicMeasure::LogLogPareto => (f64::INFINITY, f64::INFINITY),
            CharacteristicMeasure::Tabulated(grid) => {
                let (m1, raw2) = grid.moments_v();
                (m1, (raw2 - m1 * m1).max(0.0))
            }
        }
    }

    /// p = E(1 − η) = ∫ x ν(dx).
    pub fn mean_x(&self) -> Result<f64> {
        match self {
            CharacteristicMeasure::Uniform => Ok(0.5),
            CharacteristicMeasure::Beta { theta, b } => Ok(theta / (theta + b)),
            CharacteristicMeasure::LogPareto { .. } | CharacteristicMeasure::LogLogPareto => {
                let q = |u: f64| (-self.quantile_v(u).expect("quantile family")).exp();
                let mean_eta = quad::integrate(q, 0.0, 1.0, "E exp(-V)")?;
                Ok(1.0 - mean_eta)
            }
            CharacteristicMeasure::Tabulated(grid) => Ok(1.0 - grid.mean_exp_neg_v()),
        }
    }

    /// Analytic verdicts on the two standing assumptions.
    pub fn validate(&self) -> Result<Vec<AssumptionNote>> {
        let interval_note = AssumptionNote {
            assumption: Assumption::SupportNotGeometric,
            verdict: Verdict::Holds,
            detail: "support is the interval [1 - 1/e, 1), not a geometric sequence".into(),
            value: None,
        };
        let notes = match self {
            CharacteristicMeasure::Uniform => vec![
                AssumptionNote {
                    assumption: Assumption::SupportNotGeometric,
                    verdict: Verdict::Holds,
                    detail: "density is positive on all of (0, 1)".into(),
                    value: None,
                },
                AssumptionNote {
                    assumption: Assumption::FiniteLogMoment,
                    verdict: Verdict::Holds,
                    detail: "closed form: the log-moment integral equals 1".into(),
                    value: Some(1.0),
                },
            ],
            CharacteristicMeasure::Beta { theta, b } => vec![
                AssumptionNote {
                    assumption: Assumption::SupportNotGeometric,
                    verdict: Verdict::Holds,
                    detail: "density is positive on all of (0, 1)".into(),
                    value: None,
                },
                AssumptionNote {
                    assumption: Assumption::FiniteLogMoment,
                    verdict: Verdict::Holds,
                    detail: "closed form: digamma(theta + b) - digamma(theta)".into(),
                    value: Some(digamma(theta + b) - digamma(*theta)),
                },
            ],
            CharacteristicMeasure::LogPareto { .. } | CharacteristicMeasure::LogLogPareto => {
                let integrand = |u: f64| {
                    let v = self.quantile_v(u).expect("quantile family");
                    -(-(-v).exp_m1()).ln()
                };
                let value = quad::integrate(integrand, 0.0, 1.0, "log-moment integral")?;
                vec![
                    interval_note,
                    AssumptionNote {
                        assumption: Assumption::FiniteLogMoment,
                        verdict: Verdict::Holds,
                        detail: "integrand is bounded by -log(1 - 1/e) on the support".into(),
                        value: Some(value),
                    },
                ]
            }
            CharacteristicMeasure::Tabulated(grid) => {
                let mut value = 0.0;
                let us = grid.segments();
                for i in 0..us.len() - 1 {
                    let integrand = |u: f64| {
                        let v = grid.quantile(u);
                        -(-(-v).exp_m1()).ln()
                    };
                    value += quad::integrate(
                        integrand,
                        us[i],
                        us[i + 1],
                        "tabulated log-moment integral",
                    )?;
                }
                vec![
                    AssumptionNote {
                        assumption: Assumption::SupportNotGeometric,
                        verdict: Verdict::UserMustVerify,
                        detail: "not decidable from a quantile grid; the user must check that \
                                 the support is not a geometric sequence accumulating at 1"
                            .into(),
                        value: None,
                    },
                    AssumptionNote {
                        assumption: Assumption::FiniteLogMoment,
                        verdict: Verdict::Holds,
                        detail: "numeric check of the log-moment integral".into(),
                        value: Some(value),
                    },
                ]
            }
        };
        Ok(notes)
    }

    /// Quantile of V = −log η at probability `u`, for the families defined
    /// through V. `None` for beta-type measures.
    pub(crate) fn quantile_v(&self, u: f64) -> Option<f64> {
        match self {
            CharacteristicMeasure::Uniform => Some(-(1.0 - u).max(f64::MIN_POSITIVE).ln()),
            CharacteristicMeasure::Beta { .. } => None,
            CharacteristicMeasure::LogPareto { alpha } => {
                Some((1.0 - u).max(f64::MIN_POSITIVE).powf(-1.0 / alpha))
            }
            CharacteristicMeasure::LogLogPareto => {
                let w = (1.0 - u).max(f64::MIN_POSITIVE);
                Some((1.0 / w - 1.0).exp())
            }
            CharacteristicMeasure::Tabulated(grid) => Some(grid.quantile(u)),
        }
    }

    /// log of the ν-density at x ∈ (0, 1), for families with one.
    pub(crate) fn log_density_x(&self, x: f64) -> Option<f64> {
        match self {
            CharacteristicMeasure::Uniform => Some(0.0),
            CharacteristicMeasure::Beta { theta, b } => {
                Some((theta - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - ln_beta(*theta, *b))
            }
            _ => None,
        }
    }

    /// Shape parameters when the measure is of beta type (uniform included).
    pub(crate) fn beta_params(&self) -> Option<(f64, f64)> {
        match self {
            CharacteristicMeasure::Uniform => Some((1.0, 1.0)),
            CharacteristicMeasure::Beta { theta, b } => Some((*theta, *b)),
            _ => None,
        }
    }

    /// Breakpoints for piecewise quadrature in u-space.
    pub(crate) fn quadrature_segments(&self) -> Vec<f64> {
        match self {
            CharacteristicMeasure::Tabulated(grid) => grid.segments().to_vec(),
            _ => vec![0.0, 1.0],
        }
    }
}

impl fmt::Display for CharacteristicMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharacteristicMeasure::Uniform => write!(f, "uniform"),
            CharacteristicMeasure::Beta { theta, b } => write!(f, "beta:{theta},{b}"),
            CharacteristicMeasure::LogPareto { alpha } => write!(f, "logpareto:{alpha}"),
            CharacteristicMeasure::LogLogPareto => write!(f, "loglogpareto"),
            CharacteristicMeasure::Tabulated(g) => write!(f, "tabulated[{} points]", g.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::replicate_rng;

    fn sample_mean(measure: &CharacteristicMeasure, n: usize, seed: u64) -> (f64, f64) {
        let mut rng = replicate_rng(seed, 0);
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let x = measure.sample_one_minus_eta(&mut rng);
            assert!(x > 0.0 && x < 1.0);
            sum += x;
            sumsq += x * x;
        }
        let mean = sum / n as f64;
        let var = (sumsq / n as f64 - mean * mean).max(0.0);
        (mean, (var / n as f64).sqrt())
    }

    #[test]
    fn uniform_sample_mean() {
        let m = CharacteristicMeasure::uniform();
        let (mean, se) = sample_mean(&m, 1_000_000, 11);
        assert!((mean - 0.5).abs() < 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn beta_sample_mean() {
        let m = CharacteristicMeasure::beta(2.0, 1.0).unwrap();
        let (mean, se) = sample_mean(&m, 1_000_000, 12);
        assert!((mean - 2.0 / 3.0).abs() < 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn log_pareto_support() {
        let m = CharacteristicMeasure::log_pareto(0.5).unwrap();
        let mut rng = replicate_rng(13, 0);
        let floor = -(-1.0f64).exp_m1();
        for _ in 0..100_000 {
            let x = m.sample_one_minus_eta(&mut rng);
            assert!(x >= floor && x < 1.0, "draw {x} outside [1 - 1/e, 1)");
        }
    }

    #[test]
    fn tail_eta_examples() {
        let u = CharacteristicMeasure::uniform();
        assert!((u.tail_eta(0.3) - 0.3).abs() < 1e-15);

        let lp = CharacteristicMeasure::log_pareto(0.5).unwrap();
        assert!((lp.tail_eta((-4.0f64).exp()) - 0.5).abs() < 1e-12);
        assert_eq!(lp.tail_eta(0.9), 1.0);
    }

    #[test]
    fn tail_eta_monotone_with_limits() {
        let measures = vec![
            CharacteristicMeasure::uniform(),
            CharacteristicMeasure::beta(2.0, 1.0).unwrap(),
            CharacteristicMeasure::beta(0.5, 3.0).unwrap(),
            CharacteristicMeasure::log_pareto(0.5).unwrap(),
            CharacteristicMeasure::log_pareto(1.5).unwrap(),
            CharacteristicMeasure::log_log_pareto(),
        ];
        for m in &measures {
            let mut prev = 0.0;
            for i in -300..0 {
                let x = (i as f64 / 10.0).exp(); // log-spaced grid in (0, 1)
                let t = m.tail_eta(x);
                assert!(t >= prev - 1e-15, "{m}: tail not monotone at x = {x}");
                assert!((0.0..=1.0).contains(&t));
                prev = t;
            }
            assert!(m.tail_eta(1e-300) < 1e-2 + 0.9, "{m}: no decay at 0");
            assert!(m.tail_eta(ONE_MINUS_ULP) > 0.999, "{m}: tail(1-) must be 1");
        }
    }

    #[test]
    fn log_moments_closed_forms() {
        let (m1, m2) = CharacteristicMeasure::uniform().log_moments();
        assert!((m1 - 1.0).abs() < 1e-12 && (m2 - 1.0).abs() < 1e-12);

        let (m1, m2) = CharacteristicMeasure::beta(2.0, 1.0).unwrap().log_moments();
        assert!((m1 - 1.5).abs() < 1e-12, "m1 = {m1}");
        assert!((m2 - 1.25).abs() < 1e-12, "m2 = {m2}");

        let (m1, m2) = CharacteristicMeasure::log_pareto(1.5).unwrap().log_moments();
        assert!((m1 - 3.0).abs() < 1e-12);
        assert!(m2.is_infinite());

        let (m1, _) = CharacteristicMeasure::log_pareto(0.5).unwrap().log_moments();
        assert!(m1.is_infinite());

        let (m1, _) = CharacteristicMeasure::log_log_pareto().log_moments();
        assert!(m1.is_infinite());
    }

    /// Exponential(1) quantiles tabulated on a fine grid reproduce the
    /// uniform measure's log-moments (1, 1).
    #[test]
    fn tabulated_uniform_log_moments() {
        // v capped at 25 so consecutive u = 1 - e^{-v} stay distinct in f64;
        // the truncated tail contributes ~1e-11 to either moment.
        let h = 0.002;
        let steps = 12_500usize;
        let mut u = Vec::with_capacity(steps + 2);
        let mut v = Vec::with_capacity(steps + 2);
        for j in 0..=steps {
            let vj = j as f64 * h;
            u.push(-(-vj).exp_m1());
            v.push(vj);
        }
        u.push(1.0);
        v.push(steps as f64 * h);
        let grid = InverseCdf::new(u, v).unwrap();
        let m = CharacteristicMeasure::tabulated(grid);
        let (m1, m2) = m.log_moments();
        assert!((m1 - 1.0).abs() < 1e-6, "m1 = {m1}");
        assert!((m2 - 1.0).abs() < 1e-6, "m2 = {m2}");
    }

    #[test]
    fn mean_x_values() {
        assert_eq!(CharacteristicMeasure::uniform().mean_x().unwrap(), 0.5);
        let b = CharacteristicMeasure::beta(2.0, 1.0).unwrap();
        assert!((b.mean_x().unwrap() - 2.0 / 3.0).abs() < 1e-15);

        // Independent oracle: Simpson integration of E e^{-V} against the
        // Pareto(1/2) density on [1, T].
        let alpha = 0.5;
        let f = |t: f64| (-t).exp() * alpha * t.powf(-alpha - 1.0);
        let (a, b, steps) = (1.0f64, 60.0f64, 200_000usize);
        let h = (b - a) / steps as f64;
        let mut s = f(a) + f(b);
        for i in 1..steps {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        let oracle = 1.0 - s * h / 3.0;
        let got = CharacteristicMeasure::log_pareto(0.5)
            .unwrap()
            .mean_x()
            .unwrap();
        assert!((got - oracle).abs() < 1e-7, "got {got}, oracle {oracle}");
    }

    #[test]
    fn validate_notes() {
        let notes = CharacteristicMeasure::uniform().validate().unwrap();
        assert_eq!(notes.len(), 2);
        assert_eq!(notes[0].verdict, Verdict::Holds);
        assert!((notes[1].value.unwrap() - 1.0).abs() < 1e-9);

        let notes = CharacteristicMeasure::log_pareto(0.5)
            .unwrap()
            .validate()
            .unwrap();
        assert!(notes.iter().all(|n| n.verdict == Verdict::Holds));
        let bound = -(-(-1.0f64).exp_m1()).ln(); // -log(1 - 1/e)
        assert!(notes[1].value.unwrap() <= bound);

        // Point mass at 1 - eta = 0.5, i.e. V = log 2.
        let grid = InverseCdf::new(vec![0.0, 1.0], vec![2f64.ln(), 2f64.ln()]).unwrap();
        let notes = CharacteristicMeasure::tabulated(grid).validate().unwrap();
        assert_eq!(notes[0].verdict, Verdict::UserMustVerify);
        assert_eq!(notes[0].assumption, Assumption::SupportNotGeometric);
        let expect = -(0.5f64).ln(); // |log 0.5|
        assert!((notes[1].value.unwrap() - expect).abs() < 1e-9);
    }

    #[test]
    fn tabulated_point_mass_round_trip() {
        let grid = InverseCdf::new(vec![0.0, 1.0], vec![2f64.ln(), 2f64.ln()]).unwrap();
        let m = CharacteristicMeasure::tabulated(grid);
        let mut rng = replicate_rng(3, 0);
        for _ in 0..100 {
            let x = m.sample_one_minus_eta(&mut rng);
            assert!((x - 0.5).abs() < 1e-15);
        }
        assert_eq!(m.tail_eta(0.4), 0.0);
        assert_eq!(m.tail_eta(0.5), 1.0);
        assert_eq!(m.tail_eta(0.7), 1.0);
        let (m1, m2) = m.log_moments();
        assert!((m1 - 2f64.ln()).abs() < 1e-15);
        assert!(m2.abs() < 1e-15);
    }

    #[test]
    fn tabulated_rejects_bad_grids() {
        assert!(InverseCdf::new(vec![0.0, 0.5], vec![1.0, 2.0]).is_err());
        assert!(InverseCdf::new(vec![0.0, 0.5, 0.4, 1.0], vec![1.0, 2.0, 3.0, 4.0]).is_err());
        assert!(InverseCdf::new(vec![0.0, 0.5, 1.0], vec![1.0, 0.5, 2.0]).is_err());
        assert!(InverseCdf::new(vec![0.0, 0.5, 1.0], vec![0.0, 0.0, 2.0]).is_err());
    }

    #[test]
    fn spec_round_trip() {
        assert!(matches!(
            CharacteristicMeasure::from_spec("uniform").unwrap(),
            CharacteristicMeasure::Uniform
        ));
        match CharacteristicMeasure::from_spec("beta:2,1").unwrap() {
            CharacteristicMeasure::Beta { theta, b } => {
                assert_eq!((theta, b), (2.0, 1.0));
            }
            other => panic!("parsed {other}"),
        }
        assert!(CharacteristicMeasure::from_spec("beta:-1,2").is_err());
        assert!(CharacteristicMeasure::from_spec("logpareto:2.5").is_err());
        assert!(CharacteristicMeasure::from_spec("nonsense").is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_measure() -> impl Strategy<Value = CharacteristicMeasure> {
            prop_oneof![
                Just(CharacteristicMeasure::uniform()),
                (0.2f64..5.0, 0.2f64..5.0)
                    .prop_map(|(t, b)| CharacteristicMeasure::beta(t, b).unwrap()),
                (0.2f64..=2.0).prop_map(|a| CharacteristicMeasure::log_pareto(a).unwrap()),
                Just(CharacteristicMeasure::log_log_pareto()),
            ]
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn tail_eta_is_monotone(m in arb_measure(), x1 in 1e-9f64..0.999, x2 in 1e-9f64..0.999) {
                let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
                prop_assert!(m.tail_eta(lo) <= m.tail_eta(hi) + 1e-14);
            }

            #[test]
            fn samples_live_in_open_unit(m in arb_measure(), seed in 0u64..1000) {
                let mut rng = replicate_rng(seed, 0);
                for _ in 0..64 {
                    let x = m.sample_one_minus_eta(&mut rng);
                    prop_assert!(x > 0.0 && x < 1.0);
                }
            }
        }
    }
}
