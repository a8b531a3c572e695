//! Empirical distributions and Kolmogorov–Smirnov tests against the
//! reference limit laws.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Right-continuous empirical CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return invalid("ECDF of an empty sample");
        }
        if samples.iter().any(|x| x.is_nan()) {
            return invalid("ECDF sample contains NaN");
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// `#{x_i ≤ x} / n`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&s| s <= x) as f64 / self.len() as f64
    }

    /// Left limit `#{x_i < x} / n`.
    pub fn eval_left(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&s| s < x) as f64 / self.len() as f64
    }

    /// Distinct jump locations with the ECDF value just after each.
    pub fn steps(&self) -> Vec<(f64, f64)> {
        let n = self.len() as f64;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, &x) in self.sorted.iter().enumerate() {
            let level = (i + 1) as f64 / n;
            match out.last_mut() {
                Some(last) if last.0 == x => last.1 = level,
                _ => out.push((x, level)),
            }
        }
        out
    }
}

/// The limit laws the experiments compare against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum ReferenceLaw {
    /// Exponential with the given mean.
    ExpMean {
        mean: f64,
    },
    Uniform01,
    /// `scale / U` for `U` uniform on `[0, 1]`: CDF `1 - scale/x` on `[scale, ∞)`.
    ReciprocalUniform {
        scale: f64,
    },
    /// Law of `J(t) - J(s)`: atom `s/t` at zero plus `(1 - s/t)·Exp(t/π)`.
    IncrementMixture {
        s: f64,
        t: f64,
    },
}

impl ReferenceLaw {
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            ReferenceLaw::ExpMean { mean } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-x / mean).exp_m1()
                }
            }
            ReferenceLaw::Uniform01 => x.clamp(0.0, 1.0),
            ReferenceLaw::ReciprocalUniform { scale } => {
                if x <= scale {
                    0.0
                } else {
                    1.0 - scale / x
                }
            }
            ReferenceLaw::IncrementMixture { s, t } => {
                crate::limit::increment_cdf(s, t, x).unwrap_or(f64::NAN)
            }
        }
    }

    /// `P(X < x)`; differs from [`Self::cdf`] only at atoms.
    pub fn cdf_left(&self, x: f64) -> f64 {
        match *self {
            ReferenceLaw::IncrementMixture { .. } if x <= 0.0 => 0.0,
            _ => self.cdf(x),
        }
    }

    /// Inverse-CDF draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        match *self {
            ReferenceLaw::ExpMean { mean } => -mean * (-u).ln_1p(),
            ReferenceLaw::Uniform01 => u,
            ReferenceLaw::ReciprocalUniform { scale } => scale / (1.0 - u),
            ReferenceLaw::IncrementMixture { s, t } => {
                if u < s / t {
                    0.0
                } else {
                    let w: f64 = rng.random();
                    -(t / PI) * (-w).ln_1p()
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub statistic: f64,
    pub sample_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second_sample_size: Option<usize>,
    pub p_value: f64,
    pub band95: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub censored_fraction: Option<f64>,
}

impl KsReport {
    pub fn within_band(&self) -> bool {
        self.statistic <= self.band95
    }
}

/// Asymptotic Kolmogorov tail `P(K > λ)`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    const TERM_EPS: f64 = 1e-10;
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // P(K ≤ λ) = √(2π)/λ Σ_{k≥1} exp(-(2k-1)² π² / (8λ²))
        let mut sum = 0.0;
        for k in 1.. {
            let odd = (2 * k - 1) as f64;
            let term = (-odd * odd * PI * PI / (8.0 * lambda * lambda)).exp();
            sum += term;
            if term < TERM_EPS {
                break;
            }
        }
        (1.0 - (2.0 * PI).sqrt() / lambda * sum).clamp(0.0, 1.0)
    } else {
        // P(K > λ) = 2 Σ_{k≥1} (-1)^{k-1} exp(-2k²λ²)
        let mut sum = 0.0;
        for k in 1.. {
            let kf = k as f64;
            let term = (-2.0 * kf * kf * lambda * lambda).exp();
            sum += if k % 2 == 1 { term } else { -term };
            if term < TERM_EPS {
                break;
            }
        }
        (2.0 * sum).clamp(0.0, 1.0)
    }
}

fn report(statistic: f64, effective: f64, sizes: (usize, Option<usize>)) -> KsReport {
    KsReport {
        statistic,
        sample_size: sizes.0,
        second_sample_size: sizes.1,
        p_value: kolmogorov_survival(effective.sqrt() * statistic),
        band95: 1.36 / effective.sqrt(),
        censored_fraction: None,
    }
}

fn sup_gap<F, G>(ecdf: &Ecdf, cdf: F, cdf_left: G) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let n = ecdf.len() as f64;
    let mut d: f64 = 0.0;
    let mut below = 0.0;
    for (x, level) in ecdf.steps() {
        d = d.max(level - cdf(x)).max(cdf_left(x) - below);
        below = level;
    }
    debug_assert!(below == 1.0 || n == 0.0);
    d.clamp(0.0, 1.0)
}

/// One-sample test against an arbitrary CDF (with its left limits).
pub fn ks_one_sample_with<F, G>(samples: &[f64], cdf: F, cdf_left: G) -> Result<KsReport>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let ecdf = Ecdf::new(samples)?;
    let d = sup_gap(&ecdf, cdf, cdf_left);
    Ok(report(d, ecdf.len() as f64, (ecdf.len(), None)))
}

pub fn ks_one_sample(samples: &[f64], law: &ReferenceLaw) -> Result<KsReport> {
    ks_one_sample_with(samples, |x| law.cdf(x), |x| law.cdf_left(x))
}

/// One-sample test for a sample censored above `upper`.
///
/// `uncensored` holds the observed values (all `≤ upper`) and `censored` the
/// count of draws that exceeded the cap. The ECDF of the observed values is
/// compared with the law conditioned on `X ≤ upper`; the report carries the
/// censored fraction.
pub fn ks_censored(
    uncensored: &[f64],
    censored: usize,
    law: &ReferenceLaw,
    upper: f64,
) -> Result<KsReport> {
    let mass = law.cdf(upper);
    if mass <= 0.0 {
        return invalid(format!("reference law has no mass below the cap {upper}"));
    }
    if let Some(x) = uncensored.iter().find(|&&x| x > upper) {
        return invalid(format!("uncensored value {x} exceeds the cap {upper}"));
    }
    let mut rep = ks_one_sample_with(
        uncensored,
        |x| (law.cdf(x) / mass).min(1.0),
        |x| (law.cdf_left(x) / mass).min(1.0),
    )?;
    rep.censored_fraction = Some(censored as f64 / (censored + uncensored.len()) as f64);
    Ok(rep)
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsReport> {
    let ea = Ecdf::new(a)?;
    let eb = Ecdf::new(b)?;
    let (sa, sb) = (ea.sorted(), eb.sorted());
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < sa.len() && j < sb.len() {
        let x = sa[i].min(sb[j]);
        while i < sa.len() && sa[i] <= x {
            i += 1;
        }
        while j < sb.len() && sb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let effective = na * nb / (na + nb);
    Ok(report(d, effective, (sa.len(), Some(sb.len()))))
}

/// Sample mean and its standard error.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Pearson correlation; NaN when either side is constant.
pub fn correlation(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len()) as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    sxy / (sxx * syy).sqrt()
}
