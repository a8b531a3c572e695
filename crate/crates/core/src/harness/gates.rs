//! Pass/fail thresholds used by `--check` and the acceptance suite.

/// Per-atom agreement of a Monte Carlo pmf with the enumeration oracle, in
/// binomial standard deviations.
pub const PMF_SIGMA: f64 = 4.0;

/// Monte Carlo mean against the exact mean, in standard errors.
pub const MEAN_SE: f64 = 3.0;

/// KS distance of `N_n / log n` against `Exp(1/π)` at the top of the ladder.
pub const MARGINAL_FINAL_KS: f64 = 0.20;

/// Allowed deviation of the zero-increment frequency from `s/t`.
pub const ZERO_FREQUENCY_TOL: f64 = 0.05;

/// KS distance of the first-return statistic against `1 - s/u`.
pub const FIRST_RETURN_KS: f64 = 0.10;

/// Censored KS distance of the hitting-time statistic at the largest radius.
pub const HITTING_FINAL_KS: f64 = 0.10;

/// KS distance of the excursion statistics against Uniform[0,1].
pub const EXCURSION_FINAL_KS: f64 = 0.15;

/// M1 distance of the staircase from the unit step, before resolution slack.
pub const STAIRCASE_M1: f64 = 0.011;

/// J1 lower bound of the staircase against the unit step.
pub const STAIRCASE_J1: f64 = 0.49;

/// Tightness probe `P(L_n(δ) ≥ η)` at the smallest δ.
pub const TIGHTNESS_FINAL: f64 = 0.05;

/// Two-sample / sampler p-value floor.
pub const P_VALUE_FLOOR: f64 = 0.01;
