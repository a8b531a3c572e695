//! Step engines for the planar simple random walk.
//!
//! The walk is tracked in rotated coordinates `u = x + y`, `v = x - y`.
//! A unit step changes both by ±1 and the two signs are independent fair
//! bits, so one step consumes exactly two random bits.
//!
//! The origin is at L1 distance `max(|u|, |v|)`, so a walk at distance `d`
//! cannot visit it during the next `d - 1` steps. [`Kernel::Skip`] jumps
//! over such stretches by drawing the net displacement of `u` and `v`
//! directly as two independent `2·Bin(m, 1/2) - m` variables, which is exact
//! in law. [`Kernel::Stepwise`] walks every step and is the reference.

use std::ops::ControlFlow;

use rand::RngCore;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::LatticePoint;

/// Below this L1 distance the skip kernel steps one at a time.
const SKIP_MIN_DISTANCE: i64 = 12;

/// Up to this many steps a skip is drawn by counting random bits.
const POPCOUNT_MAX_STEPS: u64 = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    /// Two random bits per step, every step simulated.
    Stepwise,
    /// Stepwise near the origin, exact binomial jumps elsewhere.
    #[default]
    Skip,
}

impl std::fmt::Display for Kernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Kernel::Stepwise => "stepwise",
            Kernel::Skip => "skip",
        })
    }
}

impl std::str::FromStr for Kernel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "stepwise" => Ok(Kernel::Stepwise),
            "skip" => Ok(Kernel::Skip),
            other => Err(format!(
                "unknown kernel '{other}' (expected stepwise or skip)"
            )),
        }
    }
}

/// A walk in progress. Holds only the current position and time.
pub struct Walker<R> {
    rng: R,
    kernel: Kernel,
    u: i64,
    v: i64,
    time: u64,
    bits: u64,
    bits_left: u32,
}

impl<R: RngCore> Walker<R> {
    pub fn from_origin(rng: R, kernel: Kernel) -> Self {
        Self::from_point(LatticePoint::ORIGIN, rng, kernel)
    }

    pub fn from_point(start: LatticePoint, rng: R, kernel: Kernel) -> Self {
        Self {
            rng,
            kernel,
            u: start.x + start.y,
            v: start.x - start.y,
            time: 0,
            bits: 0,
            bits_left: 0,
        }
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn position(&self) -> LatticePoint {
        LatticePoint {
            x: (self.u + self.v) / 2,
            y: (self.u - self.v) / 2,
        }
    }

    #[inline]
    fn next_bits(&mut self) -> u64 {
        if self.bits_left == 0 {
            self.bits = self.rng.next_u64();
            self.bits_left = 32;
        }
        let b = self.bits & 3;
        self.bits >>= 2;
        self.bits_left -= 1;
        b
    }

    #[inline]
    fn step(&mut self) {
        let b = self.next_bits() as i64;
        self.u += ((b & 1) << 1) - 1;
        self.v += (b & 2) - 1;
        self.time += 1;
    }

    fn half_binomial(&mut self, m: u64) -> u64 {
        if m <= POPCOUNT_MAX_STEPS {
            let mut left = m;
            let mut count = 0u64;
            while left >= 64 {
                count += u64::from(self.rng.next_u64().count_ones());
                left -= 64;
            }
            if left > 0 {
                let mask = (1u64 << left) - 1;
                count += u64::from((self.rng.next_u64() & mask).count_ones());
            }
            count
        } else {
            Binomial::new(m, 0.5)
                .expect("p = 1/2 is a valid binomial parameter")
                .sample(&mut self.rng)
        }
    }

    fn jump(&mut self, m: u64) {
        let m_signed = m as i64;
        self.u += 2 * self.half_binomial(m) as i64 - m_signed;
        self.v += 2 * self.half_binomial(m) as i64 - m_signed;
        self.time += m;
    }

    /// Advances the walk to time `until`, calling `on_visit(t)` for every
    /// `t` in `(time, until]` with the walk at the origin. Stops early (and
    /// returns `Break`) as soon as the callback breaks.
    pub fn advance<F>(&mut self, until: u64, mut on_visit: F) -> ControlFlow<()>
    where
        F: FnMut(u64) -> ControlFlow<()>,
    {
        while self.time < until {
            if self.kernel == Kernel::Skip {
                let d = self.u.abs().max(self.v.abs());
                if d >= SKIP_MIN_DISTANCE {
                    let m = ((d - 1) as u64).min(until - self.time);
                    self.jump(m);
                    continue;
                }
            }
            self.step();
            if self.u == 0 && self.v == 0 {
                on_visit(self.time)?;
            }
        }
        ControlFlow::Continue(())
    }
}
