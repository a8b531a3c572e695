//! The local-time path under logarithmic time scaling:
//! `L_n(log k / log n) = N_k / log n` for `1 ≤ k ≤ n`, linear in between.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::walk::ReturnRecord;

/// `L_n` stored by its breakpoints.
///
/// Only `k = 1`, `k = n` and the times on either side of each return are
/// kept; everywhere else the path is flat, so interpolating between the
/// stored points reproduces the full `k = 1..n` table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RescaledPath {
    horizon: u64,
    log_n: f64,
    breakpoints: Vec<(f64, f64)>,
}

impl RescaledPath {
    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn log_horizon(&self) -> f64 {
        self.log_n
    }

    /// `(t_k, v_k)` pairs, `t` strictly increasing from 0 to 1.
    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn terminal_value(&self) -> f64 {
        self.breakpoints.last().map_or(0.0, |p| p.1)
    }
}

pub fn build_rescaled_path(rec: &ReturnRecord) -> Result<RescaledPath> {
    let n = rec.horizon();
    if n < 2 {
        return invalid("rescaled path needs horizon n ≥ 2");
    }
    let log_n = (n as f64).ln();
    let mut ks: Vec<u64> = Vec::with_capacity(2 * rec.returns().len() + 2);
    ks.push(1);
    for &r in rec.returns() {
        // returns are even and ≥ 2, so r - 1 ≥ 1
        if ks.last() != Some(&(r - 1)) {
            ks.push(r - 1);
        }
        ks.push(r);
    }
    if ks.last() != Some(&n) {
        ks.push(n);
    }
    let mut local = 0u64;
    let mut next_return = rec.returns().iter().peekable();
    let breakpoints = ks
        .into_iter()
        .map(|k| {
            while next_return.next_if(|&&r| r <= k).is_some() {
                local += 1;
            }
            let t = if k == n { 1.0 } else { (k as f64).ln() / log_n };
            (t, local as f64 / log_n)
        })
        .collect();
    Ok(RescaledPath {
        horizon: n,
        log_n,
        breakpoints,
    })
}

fn interpolate(points: &[(f64, f64)], t: f64) -> f64 {
    let i = points.partition_point(|p| p.0 <= t);
    if i == 0 {
        return points[0].1;
    }
    if i == points.len() {
        return points[i - 1].1;
    }
    let (t0, v0) = points[i - 1];
    let (t1, v1) = points[i];
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

pub fn eval_path(path: &RescaledPath, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return invalid(format!("path time {t} outside [0, 1]"));
    }
    Ok(interpolate(&path.breakpoints, t))
}

/// `L_n(t) - L_n(s)` for `0 ≤ s ≤ t ≤ 1`.
pub fn path_increment(path: &RescaledPath, s: f64, t: f64) -> Result<f64> {
    if s > t {
        return invalid(format!("increment needs s ≤ t, got s = {s}, t = {t}"));
    }
    Ok((eval_path(path, t)? - eval_path(path, s)?).max(0.0))
}

/// `⌊n^s⌋`, exact when `n^s` is an integer.
pub fn floor_power(n: u64, s: f64) -> u64 {
    let x = (n as f64).powf(s);
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.max(1.0) {
        r as u64
    } else {
        x.floor() as u64
    }
}

/// The event `L_n(t) = L_n(s)` in integer form: no return in `(⌊n^s⌋, ⌊n^t⌋]`.
pub fn zero_increment_event(rec: &ReturnRecord, s: f64, t: f64) -> Result<bool> {
    if !(0.0 <= s && s <= t && t <= 1.0) {
        return invalid(format!("window needs 0 ≤ s ≤ t ≤ 1, got s = {s}, t = {t}"));
    }
    let n = rec.horizon();
    Ok(rec.no_return_in(floor_power(n, s), floor_power(n, t)))
}

/// `t,value` CSV for a list of points.
pub fn points_csv(points: &[(f64, f64)]) -> String {
    let mut out = String::from("t,value\n");
    for (t, v) in points {
        out.push_str(&format!("{t},{v}\n"));
    }
    out
}

/// Evaluates the path at `resolution + 1` equally spaced times.
pub fn path_csv(path: &RescaledPath, resolution: usize) -> String {
    let resolution = resolution.max(1);
    let points: Vec<(f64, f64)> = (0..=resolution)
        .map(|i| {
            let t = i as f64 / resolution as f64;
            (t, interpolate(&path.breakpoints, t))
        })
        .collect();
    points_csv(&points)
}
