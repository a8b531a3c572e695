//! The planar simple random walk: origin returns, excursions, hitting
//! times, and exact small-`n` oracles.

mod kernel;
pub mod oracle;

use std::ops::ControlFlow;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub use kernel::{Kernel, Walker};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { x: 0, y: 0 };

    pub fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub fn l1_norm(&self) -> u64 {
        self.x.unsigned_abs() + self.y.unsigned_abs()
    }

    pub fn euclidean_norm(&self) -> f64 {
        (self.x as f64).hypot(self.y as f64)
    }

    pub fn is_origin(&self) -> bool {
        self.x == 0 && self.y == 0
    }
}

/// Horizon `n` and the ascending times `k ≤ n` with the walk at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReturnRecord {
    horizon: u64,
    returns: Vec<u64>,
}

impl ReturnRecord {
    /// Validates the record: times strictly increasing, even, within `[2, horizon]`.
    pub fn new(horizon: u64, returns: Vec<u64>) -> Result<Self> {
        if horizon == 0 {
            return invalid("horizon must be positive");
        }
        let mut prev = 0;
        for &k in &returns {
            if k <= prev || k % 2 != 0 || k > horizon {
                return Err(Error::InvalidData(format!(
                    "return time {k} violates ordering, parity or horizon {horizon}"
                )));
            }
            prev = k;
        }
        Ok(Self { horizon, returns })
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn returns(&self) -> &[u64] {
        &self.returns
    }

    /// Local time `N_k`: number of returns at times `≤ k`.
    pub fn local_time(&self, k: u64) -> u64 {
        self.returns.partition_point(|&r| r <= k) as u64
    }

    /// `N_n`, the local time at the horizon.
    pub fn total(&self) -> u64 {
        self.returns.len() as u64
    }

    /// True when no return falls in the integer window `(from, to]`.
    pub fn no_return_in(&self, from: u64, to: u64) -> bool {
        self.local_time(to) == self.local_time(from)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcursionStats {
    pub lengths: Vec<u64>,
    pub last_return: u64,
    pub ongoing: u64,
    pub max_interior: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HitResult {
    Hit { time: u64 },
    Censored,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HittingOutcome {
    pub start: LatticePoint,
    pub cap: u64,
    pub result: HitResult,
}

impl HittingOutcome {
    pub fn time(&self) -> Option<u64> {
        match self.result {
            HitResult::Hit { time } => Some(time),
            HitResult::Censored => None,
        }
    }
}

/// Runs a walk from the origin for `n` steps and records its returns.
///
/// Memory is proportional to the number of returns; the trajectory is
/// never stored.
pub fn simulate_walk_returns<R: RngCore>(n: u64, rng: R, kernel: Kernel) -> Result<ReturnRecord> {
    if n == 0 {
        return invalid("walk horizon n must be at least 1");
    }
    let mut walker = Walker::from_origin(rng, kernel);
    let mut returns = Vec::new();
    let _ = walker.advance(n, |t| {
        returns.push(t);
        ControlFlow::Continue(())
    });
    Ok(ReturnRecord {
        horizon: n,
        returns,
    })
}

/// First time a walk started at `start` visits the origin, censored at `cap`.
pub fn simulate_hitting_time<R: RngCore>(
    start: LatticePoint,
    cap: u64,
    rng: R,
    kernel: Kernel,
) -> Result<HittingOutcome> {
    if start.is_origin() {
        return invalid("hitting time start point must differ from the origin");
    }
    if cap < start.l1_norm() {
        return invalid(format!(
            "cap {cap} is below the L1 distance {}",
            start.l1_norm()
        ));
    }
    let mut walker = Walker::from_point(start, rng, kernel);
    let mut hit = None;
    let _ = walker.advance(cap, |t| {
        hit = Some(t);
        ControlFlow::Break(())
    });
    let result = match hit {
        Some(time) => HitResult::Hit { time },
        None => HitResult::Censored,
    };
    Ok(HittingOutcome { start, cap, result })
}

pub fn excursion_stats(rec: &ReturnRecord) -> ExcursionStats {
    let mut prev = 0;
    let lengths: Vec<u64> = rec
        .returns
        .iter()
        .map(|&k| {
            let len = k - prev;
            prev = k;
            len
        })
        .collect();
    let last_return = prev;
    ExcursionStats {
        max_interior: lengths.iter().copied().max().unwrap_or(0),
        lengths,
        last_return,
        ongoing: rec.horizon - last_return,
    }
}

/// Smallest return time strictly after `m`, if any.
pub fn first_return_after(rec: &ReturnRecord, m: u64) -> Option<u64> {
    let idx = rec.returns.partition_point(|&r| r <= m);
    rec.returns.get(idx).copied()
}
