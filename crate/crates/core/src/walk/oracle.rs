//! Exact small-`n` oracles: brute-force path enumeration and the closed
//! form for `P(S_2m = 0)`.

use serde::Serialize;

use crate::error::{invalid, Error, Result};

pub const MAX_ENUMERATION_STEPS: u32 = 12;
pub const MAX_RETURN_PROBABILITY_INDEX: u64 = 500;

/// Exact law of `N_n` as integer path counts over `4^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalTimePmf {
    pub steps: u32,
    /// `counts[k]` = number of length-`n` paths with exactly `k` returns.
    pub counts: Vec<u64>,
}

impl LocalTimePmf {
    pub fn total_paths(&self) -> u64 {
        4u64.pow(self.steps)
    }

    pub fn probability(&self, k: usize) -> f64 {
        self.counts.get(k).copied().unwrap_or(0) as f64 / self.total_paths() as f64
    }

    /// `4^n · E[N_n]`, exact.
    pub fn scaled_mean(&self) -> u128 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| k as u128 * c as u128)
            .sum()
    }

    pub fn mean(&self) -> f64 {
        self.scaled_mean() as f64 / self.total_paths() as f64
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,count,total,probability\n");
        for (k, &c) in self.counts.iter().enumerate() {
            out.push_str(&format!(
                "{k},{c},{},{}\n",
                self.total_paths(),
                self.probability(k)
            ));
        }
        out
    }
}

const STEPS: [(i32, i32); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

fn enumerate(x: i32, y: i32, left: u32, visits: usize, counts: &mut [u64]) {
    if left == 0 {
        counts[visits] += 1;
        return;
    }
    for (dx, dy) in STEPS {
        let (nx, ny) = (x + dx, y + dy);
        let hit = usize::from(nx == 0 && ny == 0);
        enumerate(nx, ny, left - 1, visits + hit, counts);
    }
}

/// Exact pmf of `N_n` by walking all `4^n` paths.
pub fn enumerate_local_time_distribution(n: u32) -> Result<LocalTimePmf> {
    if n == 0 {
        return invalid("enumeration needs n ≥ 1");
    }
    if n > MAX_ENUMERATION_STEPS {
        return invalid(format!(
            "enumeration is limited to n ≤ {MAX_ENUMERATION_STEPS}, got {n}"
        ));
    }
    let mut counts = vec![0u64; n as usize / 2 + 1];
    enumerate(0, 0, n, 0, &mut counts);
    Ok(LocalTimePmf { steps: n, counts })
}

/// Number of length-`2m` paths ending at the origin, `C(2m, m)^2`.
///
/// Exact while the value fits in `u128` (`m ≤ 31`).
pub fn origin_path_count(m: u64) -> Option<u128> {
    let mut binom: u128 = 1;
    for j in 1..=m as u128 {
        // C(2m, j-th partial) stays integral: C(m+j, j) = C(m+j-1, j-1) (m+j) / j
        binom = binom.checked_mul(m as u128 + j)? / j;
    }
    binom.checked_mul(binom)
}

/// `P(S_2m = 0) = (C(2m, m) / 4^m)^2`.
pub fn exact_return_probability(m: u64) -> Result<f64> {
    if m > MAX_RETURN_PROBABILITY_INDEX {
        return Err(Error::ResourceLimit {
            what: "exact_return_probability index",
            needed: m as usize,
            limit: MAX_RETURN_PROBABILITY_INDEX as usize,
        });
    }
    // C(2m,m)/4^m = prod (2j-1)/(2j); the product never leaves (0, 1]
    let central: f64 = (1..=m)
        .map(|j| (2 * j - 1) as f64 / (2 * j) as f64)
        .product();
    Ok(central * central)
}

/// `E[N_n] = Σ_{m=1}^{⌊n/2⌋} P(S_2m = 0)`, summed with Kahan compensation.
pub fn expected_local_time(n: u64) -> Result<f64> {
    let top = n / 2;
    if top > MAX_RETURN_PROBABILITY_INDEX {
        // ratio recurrence stays accurate for any m; only the per-index guard
        // is bounded, so accumulate incrementally here
        let mut central = 1.0f64;
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for j in 1..=top {
            central *= (2 * j - 1) as f64 / (2 * j) as f64;
            let y = central * central - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        return Ok(sum);
    }
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for m in 1..=top {
        let y = exact_return_probability(m)? - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Ok(sum)
}
