//! Samplers for the limit process `J`: a nondecreasing pure-jump process on
//! `[0, 1]` with independent increments, where `J(t) - J(s)` is zero with
//! probability `s/t` and otherwise exponential with mean `t/π`.

use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitGridSample {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl LimitGridSample {
    /// Step-function points `(t, J(t))`, starting from `(0, 0)`.
    pub fn points(&self) -> Vec<(f64, f64)> {
        std::iter::once((0.0, 0.0))
            .chain(self.grid.iter().copied().zip(self.values.iter().copied()))
            .collect()
    }

    /// Value of the right-continuous step function through the grid.
    pub fn value_at(&self, t: f64) -> f64 {
        let i = self.grid.partition_point(|&g| g <= t);
        if i == 0 {
            0.0
        } else {
            self.values[i - 1]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JumpTimeSequence {
    pub epsilon: f64,
    pub times: Vec<f64>,
}

fn exponential<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    -mean * (-u).ln_1p()
}

/// Checks a grid is nondecreasing inside `(0, 1]`.
pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return invalid("grid is empty");
    }
    let mut prev = 0.0;
    for &g in grid {
        if !(g > 0.0 && g <= 1.0) {
            return invalid(format!("grid point {g} outside (0, 1]"));
        }
        if g < prev {
            return invalid("grid is not ascending");
        }
        prev = g;
    }
    Ok(())
}

/// Exact draw of `(J(t_1), …, J(t_m))` by independent increments.
pub fn sample_grid<R: Rng + ?Sized>(grid: &[f64], rng: &mut R) -> Result<LimitGridSample> {
    validate_grid(grid)?;
    let mut values = Vec::with_capacity(grid.len());
    let mut prev_t = 0.0;
    let mut level = 0.0;
    for &t in grid {
        let u: f64 = rng.random();
        if u >= prev_t / t {
            level += exponential(t / PI, rng);
        }
        values.push(level);
        prev_t = t;
    }
    Ok(LimitGridSample {
        grid: grid.to_vec(),
        values,
    })
}

/// Conditional CDF of the first jump after `t`, given one occurs in `(t, 1]`:
/// `(1 - t/x) / (1 - t)`.
pub fn first_jump_cdf(t: f64, x: f64) -> f64 {
    if x <= t {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        (1.0 - t / x) / (1.0 - t)
    }
}

/// Inverse of [`first_jump_cdf`]: `t / (1 - (1 - t) u)`.
pub fn conditional_jump_time(t: f64, u: f64) -> f64 {
    t / (1.0 - (1.0 - t) * u)
}

fn check_base(t: f64) -> Result<()> {
    if !(t > 0.0 && t <= 1.0) {
        return invalid(format!("base time {t} outside (0, 1]"));
    }
    Ok(())
}

/// First jump after `t`: none with probability `t`, else the conditional draw.
pub fn first_jump_after<R: Rng + ?Sized>(t: f64, rng: &mut R) -> Result<Option<f64>> {
    check_base(t)?;
    let stay: f64 = rng.random();
    if stay < t {
        return Ok(None);
    }
    Ok(Some(conditional_jump_time(t, rng.random())))
}

/// All jump times in `(epsilon, 1]`, generated forward from `epsilon`.
pub fn sample_jump_times<R: Rng + ?Sized>(epsilon: f64, rng: &mut R) -> Result<JumpTimeSequence> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return invalid(format!("truncation epsilon {epsilon} outside (0, 1)"));
    }
    let mut times = Vec::new();
    let mut base = epsilon;
    while let Some(x) = first_jump_after(base, rng)? {
        // x = base only when u = 0 exactly; keep times strictly increasing
        if x <= base {
            continue;
        }
        times.push(x);
        base = x;
    }
    Ok(JumpTimeSequence { epsilon, times })
}

/// Reference sampler for the time of the last jump: uniform on `[0, 1]`.
pub fn last_jump_time<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random()
}

/// `P(J(t) - J(s) ≤ x) = s/t + (1 - s/t)(1 - e^{-πx/t})` for `x ≥ 0`.
pub fn increment_cdf(s: f64, t: f64, x: f64) -> Result<f64> {
    if t <= 0.0 || t > 1.0 || s < 0.0 || s > t {
        return invalid(format!(
            "increment law needs 0 ≤ s ≤ t ≤ 1, t > 0; got s = {s}, t = {t}"
        ));
    }
    if x < 0.0 {
        return Ok(0.0);
    }
    let atom = s / t;
    Ok(atom + (1.0 - atom) * -(-PI * x / t).exp_m1())
}
