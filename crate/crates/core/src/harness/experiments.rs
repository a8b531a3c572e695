//! The six canonical experiments.

use std::f64::consts::PI;
use std::ops::ControlFlow;

use serde::Serialize;

use super::{
    gates, non_increasing, strictly_decreasing, Check, ExperimentConfig, ExperimentParams,
};
use super::{ExperimentRun, ExperimentSummary, SampleRow, LIBRARY_VERSION};
use crate::error::Result;
use crate::limit::sample_grid;
use crate::metrics::{
    j1_jump_gap_lower_bound, m1_distance, uniform_distance, MetricReport, StepPath,
    DEFAULT_MAX_VERTICES,
};
use crate::parallel::map_replicas;
use crate::scaling::{build_rescaled_path, eval_path, floor_power, path_increment};
use crate::stats::{correlation, ks_censored, ks_one_sample, mean_and_se, KsReport, ReferenceLaw};
use crate::walk::oracle::{
    enumerate_local_time_distribution, expected_local_time, MAX_ENUMERATION_STEPS,
};
use crate::walk::{
    excursion_stats, first_return_after, simulate_hitting_time, simulate_walk_returns,
    LatticePoint, ReturnRecord, Walker,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginalRung {
    pub n: u64,
    pub ks: KsReport,
    pub mean_local_time: f64,
    pub mean_se: f64,
    pub exact_mean: f64,
    /// `(mean - exact) / se`.
    pub mean_z: f64,
    /// Largest per-atom deviation from the enumerated pmf, in binomial sd
    /// (only for `n` small enough to enumerate).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pmf_max_z: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IncrementRung {
    pub n: u64,
    pub window: (u64, u64),
    pub zero_frequency: f64,
    pub zero_frequency_se: f64,
    pub expected_zero_frequency: f64,
    pub nonzero_count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonzero_ks: Option<KsReport>,
    /// `log σ / log n` against `1 - s/u` on `(s, 1]`, censored at `u = 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_return_ks: Option<KsReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HittingRung {
    pub radius: u64,
    pub cap: u64,
    pub hits: u64,
    pub censored: u64,
    pub censored_fraction: f64,
    /// `1 - 2 log r / log cap`, recorded for comparison only.
    pub heuristic_censored_fraction: f64,
    pub statistic_cap: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks: Option<KsReport>,
    pub fraction_below_0_9: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcursionRung {
    pub n: u64,
    pub without_returns: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_excursion_ks: Option<KsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub last_return_ks: Option<KsReport>,
    pub dominance_mean: f64,
    /// `P(max excursion / last return < 0.9)` among replicas with a return.
    pub dominance_below_0_9: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusRung {
    pub n: u64,
    pub time: u64,
    pub target: f64,
    pub coverage: f64,
    pub at_origin: u64,
    pub local_time_ks: KsReport,
    pub correlation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessRow {
    pub n: u64,
    pub delta: f64,
    /// `P(L_n(δ) ≥ η)`.
    pub left: f64,
    /// `P(L_n(1) - L_n(1-δ) ≥ η)`.
    pub right: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaircaseRow {
    pub steps: usize,
    pub window: f64,
    pub m1: MetricReport,
    pub j1: MetricReport,
    pub uniform: MetricReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftedStepRow {
    pub a: f64,
    pub b: f64,
    pub m1: MetricReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingStats {
    pub n: u64,
    pub count: u64,
    pub mean: f64,
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopologyResults {
    pub eta: f64,
    pub tightness: Vec<TightnessRow>,
    pub staircase: Vec<StaircaseRow>,
    pub shifted_steps: Vec<ShiftedStepRow>,
    pub pairing: PairingStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ExperimentResults {
    Marginal(Vec<MarginalRung>),
    Increments(Vec<IncrementRung>),
    Hitting(Vec<HittingRung>),
    Excursions(Vec<ExcursionRung>),
    Radius(Vec<RadiusRung>),
    Topology(TopologyResults),
}

fn simulate_rung(config: &ExperimentConfig, rung: usize, n: u64) -> Vec<ReturnRecord> {
    let streams = config.streams(rung);
    let kernel = config.kernel;
    map_replicas(config.replicas, move |i| {
        simulate_walk_returns(n, streams.stream(i), kernel).expect("horizon validated")
    })
}

fn rows(statistic: String, values: impl IntoIterator<Item = (u64, f64)>) -> Vec<SampleRow> {
    values
        .into_iter()
        .map(|(replica, value)| SampleRow {
            replica,
            statistic: statistic.clone(),
            value,
        })
        .collect()
}

fn finish(
    config: &ExperimentConfig,
    results: ExperimentResults,
    checks: Vec<Check>,
    samples: Vec<SampleRow>,
) -> ExperimentRun {
    ExperimentRun {
        summary: ExperimentSummary {
            library_version: LIBRARY_VERSION,
            config: config.clone(),
            results,
            checks,
        },
        samples,
    }
}

fn ks_list(values: &[Option<&KsReport>]) -> Vec<f64> {
    values
        .iter()
        .map(|r| r.map_or(f64::NAN, |r| r.statistic))
        .collect()
}

fn fmt_list(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:.4}")).collect();
    format!("[{}]", parts.join(", "))
}

/// `N_n / log n` against `Exp(1/π)` along the ladder.
pub fn run_e1_marginal(config: &ExperimentConfig) -> Result<ExperimentRun> {
    let ExperimentParams::E1 { n: ladder } = &config.params else {
        unreachable!("dispatched by id")
    };
    let law = ReferenceLaw::ExpMean { mean: 1.0 / PI };
    let mut rungs = Vec::new();
    let mut samples = Vec::new();
    for (rung, &n) in ladder.iter().enumerate() {
        let records = simulate_rung(config, rung, n);
        let log_n = (n as f64).ln();
        let counts: Vec<f64> = records.iter().map(|r| r.total() as f64).collect();
        let scaled: Vec<f64> = counts.iter().map(|c| c / log_n).collect();
        let ks = ks_one_sample(&scaled, &law)?;
        let (mean, se) = mean_and_se(&counts);
        let exact_mean = expected_local_time(n)?;
        let pmf_max_z = if n <= u64::from(MAX_ENUMERATION_STEPS) {
            let pmf = enumerate_local_time_distribution(n as u32)?;
            let reps = config.replicas as f64;
            let worst = (0..pmf.counts.len())
                .map(|k| {
                    let p = pmf.probability(k);
                    let observed = counts.iter().filter(|&&c| c as usize == k).count() as f64;
                    let sd = (reps * p * (1.0 - p)).sqrt();
                    let dev = observed - reps * p;
                    if sd > 0.0 {
                        (dev / sd).abs()
                    } else if dev == 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                })
                .fold(0.0, f64::max);
            Some(worst)
        } else {
            None
        };
        samples.extend(rows(
            format!("N_n/log_n|n={n}"),
            scaled
                .iter()
                .copied()
                .enumerate()
                .map(|(i, v)| (i as u64, v)),
        ));
        rungs.push(MarginalRung {
            n,
            ks,
            mean_local_time: mean,
            mean_se: se,
            exact_mean,
            mean_z: if se > 0.0 {
                (mean - exact_mean) / se
            } else {
                0.0
            },
            pmf_max_z,
        });
    }
    let ks: Vec<f64> = rungs.iter().map(|r| r.ks.statistic).collect();
    let mut checks = vec![
        Check::new(
            "ks_strictly_decreasing",
            strictly_decreasing(&ks),
            fmt_list(&ks),
        ),
        Check::new(
            "final_ks",
            ks.last().is_some_and(|&d| d <= gates::MARGINAL_FINAL_KS),
            format!(
                "D = {:.4}, limit {}",
                ks.last().copied().unwrap_or(f64::NAN),
                gates::MARGINAL_FINAL_KS
            ),
        ),
    ];
    for r in &rungs {
        if r.mean_se > 0.0 {
            checks.push(Check::new(
                format!("mean_within_3se|n={}", r.n),
                r.mean_z.abs() <= gates::MEAN_SE,
                format!("z = {:.3}", r.mean_z),
            ));
        }
        if let Some(z) = r.pmf_max_z {
            checks.push(Check::new(
                format!("pmf_within_4sd|n={}", r.n),
                z <= gates::PMF_SIGMA,
                format!("max |z| = {z:.3}"),
            ));
        }
    }
    Ok(finish(
        config,
        ExperimentResults::Marginal(rungs),
        checks,
        samples,
    ))
}

/// Increments over `(s, t]`: zero frequency, nonzero law, first return after `n^s`.
pub fn run_e2_increments(config: &ExperimentConfig) -> Result<ExperimentRun> {
    let ExperimentParams::E2 { n: ladder, s, t } = &config.params else {
        unreachable!("dispatched by id")
    };
    let (s, t) = (*s, *t);
    let increment_law = ReferenceLaw::ExpMean { mean: t / PI };
    let sigma_law = ReferenceLaw::ReciprocalUniform { scale: s };
    let mut rungs = Vec::new();
    let mut samples = Vec::new();
    for (rung, &n) in ladder.iter().enumerate() {
        let records = simulate_rung(config, rung, n);
        let log_n = (n as f64).ln();
        let window = (floor_power(n, s), floor_power(n, t));
        let mut zeros = 0u64;
        let mut nonzero = Vec::new();
        let mut sigma = Vec::new();
        for (i, rec) in records.iter().enumerate() {
            let path = build_rescaled_path(rec)?;
            if rec.no_return_in(window.0, window.1) {
                zeros += 1;
            } else {
                let inc = path_increment(&path, s, t)?;
                nonzero.push(inc);
                samples.push(SampleRow {
                    replica: i as u64,
                    statistic: format!("increment|n={n}"),
                    value: inc,
                });
            }
            if let Some(first) = first_return_after(rec, window.0) {
                let stat = (first as f64).ln() / log_n;
                sigma.push(stat);
                samples.push(SampleRow {
                    replica: i as u64,
                    statistic: format!("log_sigma/log_n|n={n}"),
                    value: stat,
                });
            }
        }
        let reps = config.replicas as f64;
        let freq = zeros as f64 / reps;
        let censored = records.len() - sigma.len();
        rungs.push(IncrementRung {
            n,
            window,
            zero_frequency: freq,
            zero_frequency_se: (freq * (1.0 - freq) / reps).sqrt(),
            expected_zero_frequency: s / t,
            nonzero_count: nonzero.len() as u64,
            nonzero_ks: if nonzero.is_empty() {
                None
            } else {
                Some(ks_one_sample(&nonzero, &increment_law)?)
            },
            first_return_ks: if sigma.is_empty() || s >= 1.0 {
                None
            } else {
                Some(ks_censored(&sigma, censored, &sigma_law, 1.0)?)
            },
        });
    }
    let last = rungs.last().expect("ladder validated nonempty");
    let nonzero_ks = ks_list(
        &rungs
            .iter()
            .map(|r| r.nonzero_ks.as_ref())
            .collect::<Vec<_>>(),
    );
    let mut checks = vec![
        Check::new(
            "zero_frequency",
            (last.zero_frequency - last.expected_zero_frequency).abs() <= gates::ZERO_FREQUENCY_TOL,
            format!(
                "{:.4} vs s/t = {:.4} at n = {}",
                last.zero_frequency, last.expected_zero_frequency, last.n
            ),
        ),
        Check::new(
            "nonzero_ks_strictly_decreasing",
            strictly_decreasing(&nonzero_ks),
            fmt_list(&nonzero_ks),
        ),
    ];
    if let Some(ks) = &last.first_return_ks {
        checks.push(Check::new(
            "first_return_ks",
            ks.statistic <= gates::FIRST_RETURN_KS,
            format!("D = {:.4} at n = {}", ks.statistic, last.n),
        ));
    }
    Ok(finish(
        config,
        ExperimentResults::Increments(rungs),
        checks,
        samples,
    ))
}

/// `log τ_v / (2 log r)` from `v = (r, 0)` against `1 - 1/x`, censored at the cap.
pub fn run_e3_hitting(config: &ExperimentConfig) -> Result<ExperimentRun> {
    let ExperimentParams::E3 { radius, cap } = &config.params else {
        unreachable!("dispatched by id")
    };
    let cap = *cap;
    let law = ReferenceLaw::ReciprocalUniform { scale: 1.0 };
    let mut rungs = Vec::new();
    let mut samples = Vec::new();
    for (rung, &r) in radius.iter().enumerate() {
        let streams = config.streams(rung);
        let kernel = config.kernel;
        let start = LatticePoint::new(r as i64, 0);
        let outcomes = map_replicas(config.replicas, move |i| {
            simulate_hitting_time(start, cap, streams.stream(i), kernel).expect("start validated")
        });
        let scale = 2.0 * (r as f64).ln();
        let statistic_cap = (cap as f64).ln() / scale;
        let hits: Vec<f64> = outcomes
            .iter()
            .filter_map(|o| o.time())
            .map(|tau| (tau as f64).ln() / scale)
            .collect();
        for (i, o) in outcomes.iter().enumerate() {
            if let Some(tau) = o.time() {
                samples.push(SampleRow {
                    replica: i as u64,
                    statistic: format!("log_tau/2log_r|r={r}"),
                    value: (tau as f64).ln() / scale,
                });
            }
        }
        let censored = outcomes.len() - hits.len();
        let below = hits.iter().filter(|&&x| x < 0.9).count();
        rungs.push(HittingRung {
            radius: r,
            cap,
            hits: hits.len() as u64,
            censored: censored as u64,
            censored_fraction: censored as f64 / outcomes.len() as f64,
            heuristic_censored_fraction: 1.0 - scale / (cap as f64).ln(),
            statistic_cap,
            ks: if hits.is_empty() {
                None
            } else {
                Some(ks_censored(&hits, censored, &law, statistic_cap)?)
            },
            fraction_below_0_9: below as f64 / outcomes.len() as f64,
        });
    }
    let ks = ks_list(&rungs.iter().map(|r| r.ks.as_ref()).collect::<Vec<_>>());
    let below: Vec<f64> = rungs.iter().map(|r| r.fraction_below_0_9).collect();
    let checks = vec![
        Check::new(
            "ks_strictly_decreasing",
            strictly_decreasing(&ks),
            fmt_list(&ks),
        ),
        Check::new(
            "final_ks",
            ks.last().is_some_and(|&d| d <= gates::HITTING_FINAL_KS),
            format!(
                "D = {:.4}, limit {}",
                ks.last().copied().unwrap_or(f64::NAN),
                gates::HITTING_FINAL_KS
            ),
        ),
        Check::new(
            "below_0_9_non_increasing",
            non_increasing(&below),
            fmt_list(&below),
        ),
    ];
    Ok(finish(
        config,
        ExperimentResults::Hitting(rungs),
        checks,
        samples,
    ))
}

/// Longest interior excursion and last return, against Uniform[0,1].
pub fn run_e4_excursions(config: &ExperimentConfig) -> Result<ExperimentRun> {
    let ExperimentParams::E4 { n: ladder } = &config.params else {
        unreachable!("dispatched by id")
    };
    let mut rungs = Vec::new();
    let mut samples = Vec::new();
    for (rung, &n) in ladder.iter().enumerate() {
        let records = simulate_rung(config, rung, n);
        let log_n = (n as f64).ln();
        let (mut longest, mut last, mut ratio) = (Vec::new(), Vec::new(), Vec::new());
        for (i, rec) in records.iter().enumerate() {
            let ex = excursion_stats(rec);
            if ex.last_return == 0 {
                continue;
            }
            let a = (ex.max_interior as f64).ln() / log_n;
            let b = (ex.last_return as f64).ln() / log_n;
            let c = ex.max_interior as f64 / ex.last_return as f64;
            longest.push(a);
            last.push(b);
            ratio.push(c);
            for (name, v) in [
                ("log_max_excursion/log_n", a),
                ("log_last_return/log_n", b),
                ("max_excursion/last_return", c),
            ] {
                samples.push(SampleRow {
                    replica: i as u64,
                    statistic: format!("{name}|n={n}"),
                    value: v,
                });
            }
        }
        let kept = ratio.len();
        rungs.push(ExcursionRung {
            n,
            without_returns: (records.len() - kept) as u64,
            max_excursion_ks: if kept == 0 {
                None
            } else {
                Some(ks_one_sample(&longest, &ReferenceLaw::Uniform01)?)
            },
            last_return_ks: if kept == 0 {
                None
            } else {
                Some(ks_one_sample(&last, &ReferenceLaw::Uniform01)?)
            },
            dominance_mean: mean_and_se(&ratio).0,
            dominance_below_0_9: ratio.iter().filter(|&&c| c < 0.9).count() as f64
                / kept.max(1) as f64,
        });
    }
    let longest = ks_list(
        &rungs
            .iter()
            .map(|r| r.max_excursion_ks.as_ref())
            .collect::<Vec<_>>(),
    );
    let last = ks_list(
        &rungs
            .iter()
            .map(|r| r.last_return_ks.as_ref())
            .collect::<Vec<_>>(),
    );
    let dominance: Vec<f64> = rungs.iter().map(|r| r.dominance_below_0_9).collect();
    let final_ok = |v: &[f64]| v.last().is_some_and(|&d| d <= gates::EXCURSION_FINAL_KS);
    let checks = vec![
        Check::new(
            "max_excursion_ks_strictly_decreasing",
            strictly_decreasing(&longest),
            fmt_list(&longest),
        ),
        Check::new(
            "last_return_ks_strictly_decreasing",
            strictly_decreasing(&last),
            fmt_list(&last),
        ),
        Check::new(
            "max_excursion_final_ks",
            final_ok(&longest),
            fmt_list(&longest),
        ),
        Check::new("last_return_final_ks", final_ok(&last), fmt_list(&last)),
        Check::new(
            "dominance_strictly_decreasing",
            strictly_decreasing(&dominance),
            fmt_list(&dominance),
        ),
    ];
    Ok(finish(
        config,
        ExperimentResults::Excursions(rungs),
        checks,
        samples,
    ))
}

/// Joint behaviour of `N_m / log n` and `log ‖S_m‖ / log n` at `m = ⌊n^s⌋`.
pub fn run_e5_radius(config: &ExperimentConfig) -> Result<ExperimentRun> {
    let ExperimentParams::E5 {
        n: ladder,
        s,
        epsilon,
    } = &config.params
    else {
        unreachable!("dispatched by id")
    };
    let (s, epsilon) = (*s, *epsilon);
    let law = ReferenceLaw::ExpMean { mean: s / PI };
    let target = s / 2.0;
    let mut rungs = Vec::new();
    let mut samples = Vec::new();
    for (rung, &n) in ladder.iter().enumerate() {
        let m = floor_power(n, s);
        let streams = config.streams(rung);
        let kernel = config.kernel;
        let draws = map_replicas(config.replicas, move |i| {
            let mut walker = Walker::from_origin(streams.stream(i), kernel);
            let mut visits = 0u64;
            let _ = walker.advance(m, |_| {
                visits += 1;
                ControlFlow::Continue(())
            });
            (visits, walker.position())
        });
        let log_n = (n as f64).ln();
        let local: Vec<f64> = draws.iter().map(|d| d.0 as f64 / log_n).collect();
        let radius: Vec<f64> = draws
            .iter()
            .map(|d| d.1.euclidean_norm().ln() / log_n)
            .collect();
        let covered = radius
            .iter()
            .filter(|&&x| (x - target).abs() <= epsilon)
            .count();
        let finite: Vec<(f64, f64)> = local
            .iter()
            .zip(&radius)
            .filter(|(_, r)| r.is_finite())
            .map(|(&a, &b)| (a, b))
            .collect();
        let (xs, ys): (Vec<f64>, Vec<f64>) = finite.into_iter().unzip();
        for (i, (&a, &b)) in local.iter().zip(&radius).enumerate() {
            samples.push(SampleRow {
                replica: i as u64,
                statistic: format!("N_m/log_n|n={n}"),
                value: a,
            });
            samples.push(SampleRow {
                replica: i as u64,
                statistic: format!("log_radius/log_n|n={n}"),
                value: b,
            });
        }
        rungs.push(RadiusRung {
            n,
            time: m,
            target,
            coverage: covered as f64 / draws.len() as f64,
            at_origin: draws.iter().filter(|d| d.1.is_origin()).count() as u64,
            local_time_ks: ks_one_sample(&local, &law)?,
            correlation: correlation(&xs, &ys),
        });
    }
    let last = rungs.last().expect("ladder validated nonempty");
    let coverage: Vec<f64> = rungs.iter().map(|r| r.coverage).collect();
    let checks = vec![Check::new(
        "coverage",
        last.coverage >= 1.0 - epsilon,
        format!("{} vs 1 - ε = {}", fmt_list(&coverage), 1.0 - epsilon),
    )];
    Ok(finish(
        config,
        ExperimentResults::Radius(rungs),
        checks,
        samples,
    ))
}

const LIMIT_RUNG: usize = 0xffff;

/// Tightness probes, the staircase M1/J1 dichotomy, and sampled path pairings.
pub fn run_e6_topology(config: &ExperimentConfig) -> Result<ExperimentRun> {
    let ExperimentParams::E6 {
        n: ladder,
        delta,
        eta,
        staircase,
        resolution,
        mesh,
        grid,
        pairings,
    } = &config.params
    else {
        unreachable!("dispatched by id")
    };
    let mut samples = Vec::new();
    let mut tightness = Vec::new();
    let mut last_paths = Vec::new();
    for (rung, &n) in ladder.iter().enumerate() {
        let records = simulate_rung(config, rung, n);
        let paths = records
            .iter()
            .map(build_rescaled_path)
            .collect::<Result<Vec<_>>>()?;
        for &d in delta {
            let (mut left, mut right) = (0u64, 0u64);
            for (i, p) in paths.iter().enumerate() {
                let at_delta = eval_path(p, d)?;
                let tail = path_increment(p, 1.0 - d, 1.0)?;
                left += u64::from(at_delta >= *eta);
                right += u64::from(tail >= *eta);
                samples.push(SampleRow {
                    replica: i as u64,
                    statistic: format!("L_n(delta)|n={n},delta={d}"),
                    value: at_delta,
                });
            }
            let reps = paths.len() as f64;
            tightness.push(TightnessRow {
                n,
                delta: d,
                left: left as f64 / reps,
                right: right as f64 / reps,
            });
        }
        last_paths = paths;
    }

    let step = StepPath::unit_step(0.5);
    let sup_grid: Vec<f64> = (0..=10_000).map(|i| i as f64 / 10_000.0).collect();
    let mut stairs = Vec::new();
    for &m in staircase {
        let window = 1.0 / m as f64;
        let path = StepPath::staircase(0.5, window, m);
        stairs.push(StaircaseRow {
            steps: m,
            window,
            m1: m1_distance(&step, &path, *resolution, DEFAULT_MAX_VERTICES)?,
            j1: j1_jump_gap_lower_bound(&step, &path, *mesh)?,
            uniform: uniform_distance(&step, &path, &sup_grid)?,
        });
    }
    let mut shifted = Vec::new();
    for (a, b) in [(0.4, 0.5), (0.1, 0.9)] {
        shifted.push(ShiftedStepRow {
            a,
            b,
            m1: m1_distance(
                &StepPath::unit_step(a),
                &StepPath::unit_step(b),
                *resolution,
                DEFAULT_MAX_VERTICES,
            )?,
        });
    }

    let top_n = *ladder.last().expect("ladder validated nonempty");
    let count = (*pairings).min(last_paths.len() as u64);
    let limit_streams = config.streams(LIMIT_RUNG);
    let bounds = map_replicas(count, |i| -> Result<f64> {
        let j = sample_grid(grid, &mut limit_streams.stream(i))?;
        Ok(j1_jump_gap_lower_bound(&last_paths[i as usize], &j, *mesh)?.value)
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    samples.extend(rows(
        format!("j1_bound_L_n_vs_J|n={top_n}"),
        bounds
            .iter()
            .copied()
            .enumerate()
            .map(|(i, v)| (i as u64, v)),
    ));
    let mut sorted = bounds.clone();
    sorted.sort_by(f64::total_cmp);
    let pairing = PairingStats {
        n: top_n,
        count,
        mean: mean_and_se(&bounds).0,
        min: sorted.first().copied().unwrap_or(f64::NAN),
        median: sorted.get(sorted.len() / 2).copied().unwrap_or(f64::NAN),
        max: sorted.last().copied().unwrap_or(f64::NAN),
    };

    let mut checks = Vec::new();
    for &n in ladder {
        let mut rows: Vec<&TightnessRow> = tightness.iter().filter(|r| r.n == n).collect();
        rows.sort_by(|a, b| b.delta.total_cmp(&a.delta));
        let left: Vec<f64> = rows.iter().map(|r| r.left).collect();
        checks.push(Check::new(
            format!("tightness_non_increasing|n={n}"),
            non_increasing(&left),
            fmt_list(&left),
        ));
        if let Some(smallest) = rows.last() {
            checks.push(Check::new(
                format!("tightness_final|n={n}"),
                smallest.left <= gates::TIGHTNESS_FINAL,
                format!("P = {:.4} at δ = {}", smallest.left, smallest.delta),
            ));
        }
    }
    for row in &stairs {
        let m = row.steps as f64;
        checks.push(Check::new(
            format!("staircase_m1|m={}", row.steps),
            row.m1.value <= row.window.max(0.5 / m) + row.m1.error_bound,
            format!("{:.5}", row.m1.value),
        ));
        checks.push(Check::new(
            format!("staircase_j1|m={}", row.steps),
            row.j1.value >= 0.5 - 0.5 / m - 1e-12,
            format!("{:.5}", row.j1.value),
        ));
    }
    let results = TopologyResults {
        eta: *eta,
        tightness,
        staircase: stairs,
        shifted_steps: shifted,
        pairing,
    };
    Ok(finish(
        config,
        ExperimentResults::Topology(results),
        checks,
        samples,
    ))
}

#[cfg(test)]
mod tests {
    use super::super::{run_experiment, ExperimentId};
    use super::*;

    fn small(id: ExperimentId) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(id, 300, 11);
        c.params = match id {
            ExperimentId::E1 => ExperimentParams::E1 { n: vec![8, 1_000] },
            ExperimentId::E2 => ExperimentParams::E2 {
                n: vec![1_000, 10_000],
                s: 0.5,
                t: 1.0,
            },
            ExperimentId::E3 => ExperimentParams::E3 {
                radius: vec![5, 10],
                cap: 100_000,
            },
            ExperimentId::E4 => ExperimentParams::E4 {
                n: vec![1_000, 10_000],
            },
            ExperimentId::E5 => ExperimentParams::E5 {
                n: vec![10_000],
                s: 0.5,
                epsilon: 0.1,
            },
            ExperimentId::E6 => ExperimentParams::E6 {
                n: vec![10_000],
                delta: vec![0.1, 0.0],
                eta: 0.2,
                staircase: vec![10],
                resolution: 1e-2,
                mesh: 1e-4,
                grid: vec![0.25, 0.5, 1.0],
                pairings: 20,
            },
        };
        c
    }

    #[test]
    fn every_experiment_runs_and_echoes_config() {
        for id in ExperimentId::ALL {
            let c = small(id);
            let run = run_experiment(&c).unwrap();
            assert_eq!(run.summary.config, c);
            let json = run.summary.to_json().unwrap();
            assert!(json.contains(&format!("\"experiment\": \"{id}\"")));
            assert!(!run.summary.checks.is_empty());
        }
    }

    #[test]
    fn equal_window_has_no_increments() {
        let mut c = small(ExperimentId::E2);
        c.params = ExperimentParams::E2 {
            n: vec![1_000],
            s: 0.7,
            t: 0.7,
        };
        let run = run_experiment(&c).unwrap();
        let ExperimentResults::Increments(rungs) = &run.summary.results else {
            panic!()
        };
        assert_eq!(rungs[0].zero_frequency, 1.0);
        assert_eq!(rungs[0].nonzero_count, 0);
    }

    #[test]
    fn zero_delta_probe_is_zero() {
        let run = run_experiment(&small(ExperimentId::E6)).unwrap();
        let ExperimentResults::Topology(t) = &run.summary.results else {
            panic!()
        };
        let zero = t.tightness.iter().find(|r| r.delta == 0.0).unwrap();
        assert_eq!(zero.left, 0.0);
        assert_eq!(zero.right, 0.0);
    }

    #[test]
    fn zero_replicas_rejected() {
        let mut c = small(ExperimentId::E1);
        c.replicas = 0;
        assert!(run_experiment(&c).is_err());
    }

    #[test]
    fn excursion_exclusions_are_counted() {
        let run = run_experiment(&small(ExperimentId::E4)).unwrap();
        let ExperimentResults::Excursions(rungs) = &run.summary.results else {
            panic!()
        };
        for r in rungs {
            let kept = run
                .samples
                .iter()
                .filter(|s| s.statistic == format!("log_last_return/log_n|n={}", r.n))
                .count() as u64;
            assert_eq!(kept + r.without_returns, 300);
        }
    }
}
