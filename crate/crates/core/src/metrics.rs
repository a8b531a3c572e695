//! Distances between nondecreasing paths on `[0, 1]`.
//!
//! The M1 distance of two monotone paths is computed as the Fréchet
//! distance between their completed graphs (the graph with every jump
//! filled in by a vertical segment) under the planar metric
//! `max(|Δt|, |Δvalue|)`. The Fréchet distance is approximated by the
//! discrete Fréchet distance of densified polylines; the densification step
//! is reported as the error bound.
//!
//! J1 is only bounded from below: a time change cannot split one big jump
//! into several small ones, so the largest short-window increments of the
//! two paths must be close.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::limit::LimitGridSample;
use crate::scaling::RescaledPath;

pub const DEFAULT_MAX_VERTICES: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub t: f64,
    pub value: f64,
}

impl Vertex {
    pub fn new(t: f64, value: f64) -> Self {
        Self { t, value }
    }

    fn dist(&self, other: &Vertex) -> f64 {
        (self.t - other.t)
            .abs()
            .max((self.value - other.value).abs())
    }
}

/// A planar polyline. When it is the completed graph of a càdlàg path,
/// consecutive vertices sharing a time coordinate form a jump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    vertices: Vec<Vertex>,
}

impl Polyline {
    /// Drops consecutive duplicates; needs at least two distinct vertices.
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        if vertices
            .iter()
            .any(|v| !v.t.is_finite() || !v.value.is_finite())
        {
            return invalid("polyline vertex is not finite");
        }
        let mut clean: Vec<Vertex> = Vec::with_capacity(vertices.len());
        for v in vertices {
            if clean.last() != Some(&v) {
                clean.push(v);
            }
        }
        if clean.len() < 2 {
            // a constant path over a degenerate interval still needs two ends
            return invalid("polyline needs at least two distinct vertices");
        }
        Ok(Self { vertices: clean })
    }

    /// Completed graph of a monotone path; rejects decreasing coordinates.
    pub fn monotone(vertices: Vec<Vertex>) -> Result<Self> {
        let line = Self::new(vertices)?;
        for w in line.vertices.windows(2) {
            if w[1].t < w[0].t || w[1].value < w[0].value {
                return invalid(format!(
                    "path is not monotone between ({}, {}) and ({}, {})",
                    w[0].t, w[0].value, w[1].t, w[1].value
                ));
            }
        }
        Ok(line)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn is_monotone(&self) -> bool {
        self.vertices
            .windows(2)
            .all(|w| w[1].t >= w[0].t && w[1].value >= w[0].value)
    }

    /// Right-continuous value of the path at time `t`.
    pub fn eval(&self, t: f64) -> f64 {
        let vs = &self.vertices;
        let i = vs.partition_point(|v| v.t <= t);
        if i == 0 {
            return vs[0].value;
        }
        if i == vs.len() {
            return vs[i - 1].value;
        }
        let (a, b) = (vs[i - 1], vs[i]);
        a.value + (b.value - a.value) * (t - a.t) / (b.t - a.t)
    }

    /// Left limit of the path at time `t`.
    pub fn eval_left(&self, t: f64) -> f64 {
        let vs = &self.vertices;
        let j = vs.partition_point(|v| v.t < t);
        if j == 0 {
            return vs[0].value;
        }
        if j == vs.len() {
            return vs[j - 1].value;
        }
        let (a, b) = (vs[j - 1], vs[j]);
        a.value + (b.value - a.value) * (t - a.t) / (b.t - a.t)
    }

    /// Splits every edge so no piece is longer than `resolution`.
    pub fn densify(&self, resolution: f64) -> Vec<Vertex> {
        let mut out = vec![self.vertices[0]];
        for w in self.vertices.windows(2) {
            let pieces = (w[0].dist(&w[1]) / resolution).ceil().max(1.0) as usize;
            for k in 1..=pieces {
                let f = k as f64 / pieces as f64;
                out.push(Vertex::new(
                    w[0].t + (w[1].t - w[0].t) * f,
                    w[0].value + (w[1].value - w[0].value) * f,
                ));
            }
        }
        out
    }

    /// Number of vertices [`Self::densify`] would produce.
    pub fn densified_len(&self, resolution: f64) -> usize {
        1 + self
            .vertices
            .windows(2)
            .map(|w| (w[0].dist(&w[1]) / resolution).ceil().max(1.0) as usize)
            .sum::<usize>()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,value\n");
        for v in &self.vertices {
            out.push_str(&format!("{},{}\n", v.t, v.value));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut vertices = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with('t')) {
                continue;
            }
            let mut parts = line.split(',');
            let parse = |p: Option<&str>| -> Result<f64> {
                p.and_then(|s| s.trim().parse().ok()).ok_or_else(|| {
                    Error::InvalidData(format!("line {}: expected 't,value'", lineno + 1))
                })
            };
            let t = parse(parts.next())?;
            let value = parse(parts.next())?;
            vertices.push(Vertex::new(t, value));
        }
        Self::new(vertices)
    }
}

/// Anything with a completed graph on `[0, 1]`.
pub trait MonotonePath {
    fn completed_graph(&self) -> Result<Polyline>;
}

impl MonotonePath for Polyline {
    fn completed_graph(&self) -> Result<Polyline> {
        if !self.is_monotone() {
            return invalid("path is not monotone");
        }
        Ok(self.clone())
    }
}

impl MonotonePath for RescaledPath {
    fn completed_graph(&self) -> Result<Polyline> {
        Polyline::monotone(
            self.breakpoints()
                .iter()
                .map(|&(t, v)| Vertex::new(t, v))
                .collect(),
        )
    }
}

impl MonotonePath for LimitGridSample {
    /// The right-continuous step function through the grid values.
    fn completed_graph(&self) -> Result<Polyline> {
        let points = self.points();
        step_graph(&points)
    }
}

/// Completed graph of the step function that is `0` before the first point
/// and jumps to `value_i` at `t_i`.
fn step_graph(points: &[(f64, f64)]) -> Result<Polyline> {
    let mut vs = vec![Vertex::new(0.0, points.first().map_or(0.0, |p| p.1))];
    let mut level = vs[0].value;
    for &(t, v) in points {
        if v != level {
            vs.push(Vertex::new(t, level));
            vs.push(Vertex::new(t, v));
            level = v;
        }
    }
    vs.push(Vertex::new(1.0, level));
    Polyline::monotone(vs)
}

/// A càdlàg step function on `[0, 1]` starting at 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepPath {
    /// `(time, size)` with nondecreasing times and nonnegative sizes.
    pub jumps: Vec<(f64, f64)>,
}

impl StepPath {
    pub fn unit_step(at: f64) -> Self {
        Self {
            jumps: vec![(at, 1.0)],
        }
    }

    /// `steps` jumps of `1/steps` at `start + j·window/steps`, `j = 0..steps`.
    pub fn staircase(start: f64, window: f64, steps: usize) -> Self {
        let h = 1.0 / steps as f64;
        Self {
            jumps: (0..steps)
                .map(|j| (start + j as f64 * window / steps as f64, h))
                .collect(),
        }
    }
}

impl MonotonePath for StepPath {
    fn completed_graph(&self) -> Result<Polyline> {
        if self
            .jumps
            .iter()
            .any(|&(t, h)| h < 0.0 || !(0.0..=1.0).contains(&t))
        {
            return invalid("step path needs nonnegative jumps inside [0, 1]");
        }
        let mut level = 0.0;
        let mut points = vec![(0.0, 0.0)];
        for &(t, h) in &self.jumps {
            level += h;
            points.push((t, level));
        }
        step_graph(&points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    M1Approx,
    J1LowerBound,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub value: f64,
    pub error_bound: f64,
    pub kind: MetricKind,
}

/// Discrete Fréchet distance of two vertex sequences, O(|p|·|q|) time,
/// O(|q|) memory.
fn discrete_frechet(p: &[Vertex], q: &[Vertex]) -> f64 {
    let mut prev = vec![f64::INFINITY; q.len()];
    let mut cur = vec![0.0; q.len()];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            let d = a.dist(b);
            let reach = match (i, j) {
                (0, 0) => d,
                (0, _) => cur[j - 1],
                (_, 0) => prev[0],
                _ => prev[j].min(prev[j - 1]).min(cur[j - 1]),
            };
            cur[j] = reach.max(d);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[q.len() - 1]
}

/// Fréchet distance of two polylines, approximated on densified copies.
pub fn frechet_distance(
    p: &Polyline,
    q: &Polyline,
    resolution: f64,
    max_vertices: usize,
) -> Result<MetricReport> {
    if resolution.is_nan() || resolution <= 0.0 {
        return invalid(format!("resolution must be positive, got {resolution}"));
    }
    for line in [p, q] {
        let needed = line.densified_len(resolution);
        if needed > max_vertices {
            return Err(Error::ResourceLimit {
                what: "densified polyline vertices",
                needed,
                limit: max_vertices,
            });
        }
    }
    let value = discrete_frechet(&p.densify(resolution), &q.densify(resolution));
    Ok(MetricReport {
        value,
        error_bound: resolution,
        kind: MetricKind::M1Approx,
    })
}

pub fn m1_distance<F, G>(f: &F, g: &G, resolution: f64, max_vertices: usize) -> Result<MetricReport>
where
    F: MonotonePath + ?Sized,
    G: MonotonePath + ?Sized,
{
    frechet_distance(
        &f.completed_graph()?,
        &g.completed_graph()?,
        resolution,
        max_vertices,
    )
}

/// Largest increment `f(a + mesh) - f(a-)` over `a ∈ [0, 1 - mesh]`.
///
/// Exact for polylines: the window function is piecewise linear between
/// vertex times and vertex times shifted by `mesh`, and dominates its
/// one-sided limits at those points.
pub fn max_window_increment(path: &Polyline, mesh: f64) -> f64 {
    let last = path.vertices().last().map_or(1.0, |v| v.t);
    let first = path.vertices()[0].t;
    if mesh >= last - first {
        return path.eval(last) - path.eval_left(first);
    }
    let hi = last - mesh;
    let mut best: f64 = 0.0;
    let mut consider = |a: f64| {
        if a >= first && a <= hi {
            best = best.max(path.eval(a + mesh) - path.eval_left(a));
        }
    };
    consider(first);
    consider(hi);
    for v in path.vertices() {
        consider(v.t);
        consider(v.t - mesh);
    }
    best
}

/// Lower bound on the J1 distance from mismatched largest short-window
/// increments: `|Jmax(f) - Jmax(g)| / 2`.
pub fn j1_jump_gap_lower_bound<F, G>(f: &F, g: &G, mesh: f64) -> Result<MetricReport>
where
    F: MonotonePath + ?Sized,
    G: MonotonePath + ?Sized,
{
    if mesh.is_nan() || mesh <= 0.0 {
        return invalid(format!("mesh must be positive, got {mesh}"));
    }
    let jf = max_window_increment(&f.completed_graph()?, mesh);
    let jg = max_window_increment(&g.completed_graph()?, mesh);
    Ok(MetricReport {
        value: (jf - jg).abs() / 2.0,
        error_bound: 0.0,
        kind: MetricKind::J1LowerBound,
    })
}

/// `max |f - g|` over the grid, using right-continuous values.
pub fn uniform_distance<F, G>(f: &F, g: &G, grid: &[f64]) -> Result<MetricReport>
where
    F: MonotonePath + ?Sized,
    G: MonotonePath + ?Sized,
{
    if grid.is_empty() {
        return invalid("uniform distance needs a nonempty grid");
    }
    let (pf, pg) = (f.completed_graph()?, g.completed_graph()?);
    let value = grid
        .iter()
        .map(|&t| (pf.eval(t) - pg.eval(t)).abs())
        .fold(0.0, f64::max);
    Ok(MetricReport {
        value,
        error_bound: 0.0,
        kind: MetricKind::Uniform,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::ReturnRecord;
    use proptest::prelude::*;

    const RES: f64 = 1e-3;

    fn m1(f: &impl MonotonePath, g: &impl MonotonePath, res: f64) -> f64 {
        m1_distance(f, g, res, 200_000).unwrap().value
    }

    /// Independent oracle: memoized recursion over a uniformly resampled
    /// parametrisation (by arc length in the max metric).
    fn oracle_frechet(p: &Polyline, q: &Polyline, samples: usize) -> f64 {
        fn resample(line: &Polyline, samples: usize) -> Vec<(f64, f64)> {
            let vs = line.vertices();
            let lens: Vec<f64> = vs
                .windows(2)
                .map(|w| (w[1].t - w[0].t).abs().max((w[1].value - w[0].value).abs()))
                .collect();
            let total: f64 = lens.iter().sum();
            let mut out = Vec::with_capacity(samples + 1);
            for k in 0..=samples {
                let mut s = total * k as f64 / samples as f64;
                let mut e = 0;
                while e + 1 < lens.len() && s > lens[e] {
                    s -= lens[e];
                    e += 1;
                }
                let f = if lens[e] > 0.0 {
                    (s / lens[e]).min(1.0)
                } else {
                    0.0
                };
                out.push((
                    vs[e].t + (vs[e + 1].t - vs[e].t) * f,
                    vs[e].value + (vs[e + 1].value - vs[e].value) * f,
                ));
            }
            out
        }
        let a = resample(p, samples);
        let b = resample(q, samples);
        let d = |i: usize, j: usize| (a[i].0 - b[j].0).abs().max((a[i].1 - b[j].1).abs());
        let mut table = vec![vec![f64::NAN; b.len()]; a.len()];
        for i in 0..a.len() {
            for j in 0..b.len() {
                let best = if i == 0 && j == 0 {
                    f64::NEG_INFINITY
                } else {
                    let mut m = f64::INFINITY;
                    if i > 0 {
                        m = m.min(table[i - 1][j]);
                    }
                    if j > 0 {
                        m = m.min(table[i][j - 1]);
                    }
                    if i > 0 && j > 0 {
                        m = m.min(table[i - 1][j - 1]);
                    }
                    m
                };
                table[i][j] = best.max(d(i, j));
            }
        }
        table[a.len() - 1][b.len() - 1]
    }

    #[test]
    fn identical_paths_are_at_zero() {
        let s = StepPath::staircase(0.3, 0.2, 7);
        assert_eq!(m1(&s, &s, RES), 0.0);
        assert_eq!(j1_jump_gap_lower_bound(&s, &s, 1e-4).unwrap().value, 0.0);
        assert_eq!(
            uniform_distance(&s, &s, &[0.0, 0.3, 0.5, 1.0])
                .unwrap()
                .value,
            0.0
        );
    }

    #[test]
    fn zero_function_graph() {
        let rec = ReturnRecord::new(100, vec![]).unwrap();
        let path = crate::scaling::build_rescaled_path(&rec).unwrap();
        let g = path.completed_graph().unwrap();
        assert_eq!(
            g.vertices(),
            &[Vertex::new(0.0, 0.0), Vertex::new(1.0, 0.0)]
        );
    }

    #[test]
    fn unit_step_graph() {
        let g = StepPath::unit_step(0.5).completed_graph().unwrap();
        let want = [(0.0, 0.0), (0.5, 0.0), (0.5, 1.0), (1.0, 1.0)];
        let got: Vec<(f64, f64)> = g.vertices().iter().map(|v| (v.t, v.value)).collect();
        assert_eq!(got, want);
        assert_eq!(g.eval(0.5), 1.0);
        assert_eq!(g.eval_left(0.5), 0.0);
    }

    #[test]
    fn continuous_path_keeps_its_vertices() {
        let rec = ReturnRecord::new(50, vec![2, 8, 10]).unwrap();
        let path = crate::scaling::build_rescaled_path(&rec).unwrap();
        let g = path.completed_graph().unwrap();
        assert_eq!(g.vertices().len(), path.breakpoints().len());
    }

    #[test]
    fn grid_sample_step_graph() {
        let s = LimitGridSample {
            grid: vec![0.25, 0.5, 1.0],
            values: vec![0.0, 0.4, 0.4],
        };
        let g = s.completed_graph().unwrap();
        let got: Vec<(f64, f64)> = g.vertices().iter().map(|v| (v.t, v.value)).collect();
        assert_eq!(got, vec![(0.0, 0.0), (0.5, 0.0), (0.5, 0.4), (1.0, 0.4)]);
    }

    #[test]
    fn rejects_decreasing_paths() {
        let bad = Polyline::new(vec![Vertex::new(0.0, 1.0), Vertex::new(1.0, 0.0)]).unwrap();
        assert!(bad.completed_graph().is_err());
        assert!(Polyline::monotone(vec![Vertex::new(0.5, 0.0), Vertex::new(0.4, 1.0)]).is_err());
        assert!(Polyline::new(vec![Vertex::new(0.5, 0.0)]).is_err());
    }

    #[test]
    fn nearby_unit_steps() {
        // vertical segments pair up; horizontal offset 0.1
        let a = StepPath::unit_step(0.4);
        let b = StepPath::unit_step(0.5);
        let oracle = oracle_frechet(
            &a.completed_graph().unwrap(),
            &b.completed_graph().unwrap(),
            3000,
        );
        assert!((oracle - 0.1).abs() < 2e-3, "oracle {oracle}");
        assert!((m1(&a, &b, RES) - 0.1).abs() <= RES);
    }

    #[test]
    fn distant_unit_steps() {
        // When the step at 0.9 leaves (0.9, 0), the other curve is either at
        // time ≤ 0.1 or already at height 1, so the value is |a - b| = 0.8.
        let a = StepPath::unit_step(0.1);
        let b = StepPath::unit_step(0.9);
        let oracle = oracle_frechet(
            &a.completed_graph().unwrap(),
            &b.completed_graph().unwrap(),
            3000,
        );
        assert!((oracle - 0.8).abs() < 2e-3, "oracle {oracle}");
        assert!((m1(&a, &b, RES) - 0.8).abs() <= RES);
    }

    #[test]
    fn staircase_is_m1_close_but_j1_far() {
        for (m, delta) in [(10usize, 0.1), (100, 0.01)] {
            let step = StepPath::unit_step(0.5);
            let stairs = StepPath::staircase(0.5, delta, m);
            let d = m1(&step, &stairs, RES);
            assert!(d <= delta.max(0.5 / m as f64) + RES, "m={m}: {d}");
            let mesh = delta / (2.0 * m as f64);
            let j1 = j1_jump_gap_lower_bound(&step, &stairs, mesh).unwrap().value;
            assert!((j1 - (0.5 - 0.5 / m as f64)).abs() < 1e-12, "m={m}: {j1}");
            let grid: Vec<f64> = (0..=10_000).map(|i| i as f64 / 10_000.0).collect();
            assert!(uniform_distance(&step, &stairs, &grid).unwrap().value >= 0.5);
        }
    }

    #[test]
    fn staircase_oracle_agrees() {
        let step = StepPath::unit_step(0.5);
        let stairs = StepPath::staircase(0.5, 0.05, 5);
        let (p, q) = (
            step.completed_graph().unwrap(),
            stairs.completed_graph().unwrap(),
        );
        let oracle = oracle_frechet(&p, &q, 2000);
        let dp = frechet_distance(&p, &q, RES, 100_000).unwrap().value;
        assert!((oracle - dp).abs() <= 2.0 * RES, "oracle {oracle} dp {dp}");
    }

    #[test]
    fn resource_limit_is_explicit() {
        let a = StepPath::unit_step(0.4);
        let err = m1_distance(&a, &a, 1e-6, 10_000).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { .. }));
        assert!(m1_distance(&a, &a, 0.0, 10_000).is_err());
    }

    #[test]
    fn window_increment_of_continuous_ramp() {
        let ramp = Polyline::monotone(vec![Vertex::new(0.0, 0.0), Vertex::new(1.0, 2.0)]).unwrap();
        assert!((max_window_increment(&ramp, 0.1) - 0.2).abs() < 1e-12);
        assert!((max_window_increment(&ramp, 5.0) - 2.0).abs() < 1e-12);
        let step = StepPath::unit_step(0.7).completed_graph().unwrap();
        assert_eq!(max_window_increment(&step, 1e-6), 1.0);
    }

    #[test]
    fn j1_bound_one_sided_for_shifted_steps() {
        let b = j1_jump_gap_lower_bound(&StepPath::unit_step(0.2), &StepPath::unit_step(0.6), 1e-3)
            .unwrap();
        assert_eq!(b.value, 0.0);
    }

    /// Upper bound on d_J1 by searching piecewise-linear time changes with
    /// one interior knot on a grid.
    fn brute_j1_upper(f: &Polyline, g: &Polyline) -> f64 {
        let ts: Vec<f64> = (0..=400).map(|i| i as f64 / 400.0).collect();
        let mut best = f64::INFINITY;
        for a in 1..40 {
            for b in 1..40 {
                let (x, y) = (a as f64 / 40.0, b as f64 / 40.0);
                let lam = |t: f64| {
                    if t <= x {
                        t * y / x
                    } else {
                        y + (t - x) * (1.0 - y) / (1.0 - x)
                    }
                };
                let mut worst: f64 = 0.0;
                for &t in &ts {
                    worst = worst
                        .max((lam(t) - t).abs())
                        .max((f.eval(t) - g.eval(lam(t))).abs());
                }
                best = best.min(worst);
            }
        }
        best
    }

    #[test]
    fn j1_bound_below_brute_force_search() {
        let ramp = Polyline::monotone(vec![
            Vertex::new(0.0, 0.0),
            Vertex::new(0.45, 0.0),
            Vertex::new(0.55, 1.0),
            Vertex::new(1.0, 1.0),
        ])
        .unwrap();
        let step = StepPath::unit_step(0.5).completed_graph().unwrap();
        let lower = j1_jump_gap_lower_bound(&ramp, &step, 1e-3).unwrap().value;
        let upper = brute_j1_upper(&ramp, &step);
        assert!(lower <= upper + 1e-9, "{lower} > {upper}");
        // a continuous ramp cannot absorb the jump: both near 1/2
        assert!(lower > 0.49 && upper >= 0.49);
    }

    #[test]
    fn csv_round_trip() {
        let g = StepPath::staircase(0.2, 0.3, 4).completed_graph().unwrap();
        assert_eq!(Polyline::from_csv(&g.to_csv()).unwrap(), g);
        assert!(Polyline::from_csv("t,value\n0,x\n").is_err());
    }

    fn monotone_path() -> impl Strategy<Value = Polyline> {
        prop::collection::vec((0.0f64..1.0, 0.0f64..0.5, prop::bool::ANY), 1..6).prop_map(|raw| {
            let mut times: Vec<f64> = raw.iter().map(|r| r.0).collect();
            times.sort_by(f64::total_cmp);
            let mut vs = vec![Vertex::new(0.0, 0.0)];
            let mut level = 0.0;
            for (t, (_, h, jump)) in times.into_iter().zip(raw) {
                if jump {
                    vs.push(Vertex::new(t, level));
                }
                level += h;
                vs.push(Vertex::new(t, level));
            }
            vs.push(Vertex::new(1.0, level));
            Polyline::monotone(vs).unwrap_or_else(|_| {
                Polyline::monotone(vec![Vertex::new(0.0, 0.0), Vertex::new(1.0, 0.0)]).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn frechet_symmetric_and_nonnegative(p in monotone_path(), q in monotone_path()) {
            let a = m1(&p, &q, 0.01);
            let b = m1(&q, &p, 0.01);
            prop_assert!(a >= 0.0);
            prop_assert!((a - b).abs() < 1e-12);
        }

        #[test]
        fn frechet_triangle(p in monotone_path(), q in monotone_path(), r in monotone_path()) {
            let res = 0.01;
            let pq = m1(&p, &q, res);
            let qr = m1(&q, &r, res);
            let pr = m1(&p, &r, res);
            prop_assert!(pr <= pq + qr + 2.0 * res);
        }

        #[test]
        fn refinement_never_jumps_up(p in monotone_path(), q in monotone_path()) {
            let coarse = m1(&p, &q, 0.02);
            let fine = m1(&p, &q, 0.005);
            prop_assert!(fine <= coarse + 0.02);
        }
    }
}
