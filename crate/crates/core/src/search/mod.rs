//! Independent numerical certification of the closed forms.
//!
//! Every search evaluates candidates through the exact engine in
//! [`crate::sections`], and every candidate it evaluates is feasible by
//! construction: lines are built as `t·u + s·d` with `u ⊥ d` unit, normals
//! are normalized. Reported optima are therefore attained values, never
//! relaxations, so a maximize search can only undershoot the true maximum.
//!
//! Starts are independent. Start `i` draws from ChaCha8 stream `i` under the
//! configured seed and the per-start results are reduced in start order, so
//! a report is bit-identical however the starts are scheduled.

mod edges;
pub mod nelder_mead;

pub use edges::{
    all_edge_pairs, representative_edge_pairs, search_edge_pair_lines, search_edge_pairs_with, Edge, EdgePair,
};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::geometry::{normalize, Dim, HyperplaneSpec, LineSpec, SlabSpec};
use crate::mc::stream_rng;
use crate::sections::{self, ChoppedPyramid, Witness};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Maximize,
    Minimize,
}

impl Mode {
    /// Converts a value into a cost to minimize.
    fn cost(self, value: f64) -> f64 {
        match self {
            Mode::Maximize => -value,
            Mode::Minimize => value,
        }
    }

    fn value(self, cost: f64) -> f64 {
        match self {
            Mode::Maximize => -cost,
            Mode::Minimize => cost,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub starts: usize,
    pub max_iters: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub mode: Mode,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            starts: 256,
            max_iters: 500,
            tolerance: 1e-10,
            seed: 0,
            mode: Mode::Maximize,
        }
    }
}

impl SearchConfig {
    pub fn maximize(seed: u64) -> Self {
        SearchConfig {
            seed,
            mode: Mode::Maximize,
            ..Self::default()
        }
    }

    pub fn minimize(seed: u64) -> Self {
        SearchConfig {
            seed,
            mode: Mode::Minimize,
            ..Self::default()
        }
    }

    pub fn with_starts(mut self, starts: usize) -> Self {
        self.starts = starts;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.starts == 0 || self.max_iters == 0 {
            return Err(Error::Degenerate("search needs at least one start and one iteration"));
        }
        Ok(())
    }

    fn nm_options(&self) -> nelder_mead::Options {
        nelder_mead::Options {
            max_iters: self.max_iters,
            ftol: self.tolerance,
            ..Default::default()
        }
    }
}

/// Outcome of one start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartResult {
    pub start: usize,
    /// Whether the start came from the structured seed list rather than the RNG.
    pub seeded: bool,
    /// Best value reached, `None` when the start found nothing feasible.
    pub value: Option<f64>,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub mode: Mode,
    pub best_value: f64,
    pub best_witness: Option<Witness>,
    pub history: Vec<StartResult>,
    /// `best_value − reference` once a closed form has been attached.
    pub gap: Option<f64>,
}

impl SearchReport {
    /// Records the gap to a closed-form value.
    pub fn certify_against(mut self, closed_form: f64) -> Self {
        self.gap = Some(self.best_value - closed_form);
        self
    }

    pub fn evaluations(&self) -> usize {
        self.history.iter().map(|s| s.evaluations).sum()
    }
}

/// Runs `starts` local searches over a parameter space and reduces them in order.
///
/// `seeds` are used first as starting points; remaining starts come from
/// `draw`. `evaluate` maps parameters to `(value, witness)` or `None` when
/// the parameters are rejected.
fn multistart<D, E>(config: &SearchConfig, seeds: Vec<Vec<f64>>, draw: D, evaluate: E) -> SearchReport
where
    D: Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync,
    E: Fn(&[f64]) -> Option<(f64, Witness)> + Sync,
{
    multistart_scaled(config, seeds, draw, evaluate, Scale::Linear)
}

/// How values are turned into costs before the local search sees them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scale {
    Linear,
    /// Optimize `ln(value)`: relative precision for values spanning many decades.
    Log,
}

fn multistart_scaled<D, E>(config: &SearchConfig, seeds: Vec<Vec<f64>>, draw: D, evaluate: E, scale: Scale) -> SearchReport
where
    D: Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync,
    E: Fn(&[f64]) -> Option<(f64, Witness)> + Sync,
{
    let mode = config.mode;
    let opts = config.nm_options();
    let cost = |p: &[f64]| match evaluate(p) {
        Some((v, _)) => {
            let c = mode.cost(match scale {
                Scale::Linear => v,
                Scale::Log => v.ln(),
            });
            // ln 0 = −∞ must read as the worst value, not the best.
            if c.is_nan() || c == f64::NEG_INFINITY && scale == Scale::Log {
                f64::INFINITY
            } else {
                c
            }
        }
        None => f64::INFINITY,
    };
    let run = |i: usize| -> (StartResult, Vec<f64>, f64) {
        let (x0, seeded) = match seeds.get(i) {
            Some(s) => (s.clone(), true),
            None => (draw(&mut stream_rng(config.seed, i as u64)), false),
        };
        let m = nelder_mead::minimize(cost, &x0, &opts);
        let value = Some(mode.value(m.value)).filter(|v| v.is_finite()).map(|v| match scale {
            Scale::Linear => v,
            Scale::Log => v.exp(),
        });
        (
            StartResult {
                start: i,
                seeded,
                value,
                evaluations: m.evals,
            },
            m.x,
            m.value,
        )
    };

    let total = config.starts.max(seeds.len());
    #[cfg(feature = "parallel")]
    let results: Vec<_> = {
        use rayon::prelude::*;
        (0..total).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = (0..total).map(run).collect();

    let mut best: Option<(f64, &Vec<f64>)> = None;
    for (_, x, c) in &results {
        if c.is_finite() && best.is_none_or(|(bc, _)| *c < bc) {
            best = Some((*c, x));
        }
    }
    let (best_value, best_witness) = match best.and_then(|(_, x)| evaluate(x)) {
        Some((v, w)) => (v, Some(w)),
        None => (f64::NAN, None),
    };
    SearchReport {
        mode,
        best_value,
        best_witness,
        history: results.into_iter().map(|(s, _, _)| s).collect(),
        gap: None,
    }
}

fn gaussian(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| StandardNormal.sample(rng)).collect()
}

/// Line `t·u + s·d` from raw parameters `(d̃, ũ) ∈ ℝ²ⁿ`.
fn line_from_params(t: f64, p: &[f64]) -> Option<LineSpec> {
    let n = p.len() / 2;
    LineSpec::at_distance(t, &p[n..], &p[..n]).ok()
}

fn in_plane(n: usize, i: usize, j: usize, x: f64, y: f64) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = x;
    v[j] = y;
    v
}

/// Structured starting lines: lines of `span{e₁, e₂}` with normal angle
/// `kπ/16`, and lines running along `(1, …, 1)` and along `(1,…,1,−1,…,−1)`.
fn line_seeds(n: usize) -> Vec<Vec<f64>> {
    let mut seeds = Vec::new();
    for k in 0..16 {
        let phi = k as f64 * std::f64::consts::PI / 16.0;
        let (s, c) = phi.sin_cos();
        let mut p = in_plane(n, 0, 1, -s, c);
        p.extend(in_plane(n, 0, 1, c, s));
        seeds.push(p);
    }
    for k in 0..n {
        let d: Vec<f64> = (0..n).map(|i| if i < n - k { 1.0 } else { -1.0 }).collect();
        // Offset direction: a nonconstant vector, made orthogonal later.
        let u: Vec<f64> = (0..n).map(|i| (i as f64) - (n as f64 - 1.0) / 2.0 + 0.5 * (k as f64)).collect();
        let mut p = d;
        p.extend(u);
        seeds.push(p);
    }
    seeds
}

/// Multi-start search for the longest (maximize) or shortest (minimize)
/// chord over lines at distance `t` from the origin.
///
/// In minimize mode and `t > 1/√n` there are lines missing the body and the
/// report is the value `0` with no witness search.
pub fn search_lines_at_distance(n: Dim, t: f64, config: &SearchConfig) -> Result<SearchReport> {
    config.validate()?;
    let nn = n.require(2)?.get();
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            lo: 0.0,
            hi: 1.0,
        });
    }
    if config.mode == Mode::Minimize && t > 1.0 / (nn as f64).sqrt() {
        return Ok(SearchReport {
            mode: Mode::Minimize,
            best_value: 0.0,
            best_witness: None,
            history: Vec::new(),
            gap: None,
        });
    }
    let mode = config.mode;
    let evaluate = |p: &[f64]| -> Option<(f64, Witness)> {
        let line = line_from_params(t, p)?;
        let r = sections::line_section_length(&line, n).ok()?;
        // Minimize only over lines that meet the body.
        if mode == Mode::Minimize && r.value == 0.0 && !r.tangent {
            return None;
        }
        Some((r.value, Witness::Line(line)))
    };
    let draw = |rng: &mut ChaCha8Rng| loop {
        let p = gaussian(rng, 2 * nn);
        if evaluate(&p).is_some() {
            return p;
        }
    };
    Ok(multistart(config, line_seeds(nn), draw, evaluate))
}

/// What a hyperplane search optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HyperplaneObjective {
    /// `(n−1)`-volume of `B₁ⁿ ∩ {⟨x, a⟩ = t}`.
    SectionVolume,
    /// Volume of `B₁ⁿ ∩ {|⟨x, a⟩| ≤ t}`.
    SlabVolume,
}

/// A normal with `max|aᵢ| ∈ (t, 1]`: pick the leading axis and sign, then
/// spread the remaining mass in a random direction.
fn feasible_normal(rng: &mut ChaCha8Rng, n: usize, t: f64) -> Vec<f64> {
    let lead = rng.random_range(0..n);
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    let a1 = t + (1.0 - t) * rng.random::<f64>();
    let mut rest = gaussian(rng, n - 1);
    let len = rest.iter().map(|x| x * x).sum::<f64>().sqrt();
    let scale = if len > 0.0 { (1.0 - a1 * a1).max(0.0).sqrt() / len } else { 0.0 };
    rest.iter_mut().for_each(|x| *x *= scale);
    rest.insert(lead, sign * a1);
    rest
}

/// Multi-start search over unit normals for the largest hyperplane section
/// or the smallest slab at distance/half-width `t ∈ (1/√2, 1)`.
///
/// Normals with `max|aᵢ| ≤ t` are feasible and contribute their exact value
/// (an empty section, or the whole body for a slab).
pub fn search_hyperplanes_at_distance(
    n: Dim,
    t: f64,
    config: &SearchConfig,
    objective: HyperplaneObjective,
) -> Result<SearchReport> {
    config.validate()?;
    let nn = n.require(3)?.get();
    if !(t > std::f64::consts::FRAC_1_SQRT_2 && t < 1.0) {
        return Err(Error::UnsupportedRegime { t });
    }
    let evaluate = |p: &[f64]| -> Option<(f64, Witness)> {
        let a = normalize(p).ok()?;
        match objective {
            HyperplaneObjective::SectionVolume => {
                let h = HyperplaneSpec::new(a, t).ok()?;
                let v = sections::hyperplane_section_volume(&h, n).ok()?.value;
                Some((v, Witness::Hyperplane(h)))
            }
            HyperplaneObjective::SlabVolume => {
                let s = SlabSpec::new(a, t).ok()?;
                let v = sections::slab_volume(&s, n).ok()?.value;
                Some((v, Witness::Slab(s)))
            }
        }
    };
    let draw = |rng: &mut ChaCha8Rng| feasible_normal(rng, nn, t);
    // Section volumes scale like (1 − t)ⁿ⁻¹ and reach 1e-11 on the acceptance grid.
    let scale = match objective {
        HyperplaneObjective::SectionVolume => Scale::Log,
        HyperplaneObjective::SlabVolume => Scale::Linear,
    };
    Ok(multistart_scaled(config, Vec::new(), draw, evaluate, scale))
}

/// Direction in the simplex hyperplane `Σvᵢ = 0`, normalized.
fn simplex_direction(p: &[f64]) -> Option<Vec<f64>> {
    let mean = p.iter().sum::<f64>() / p.len() as f64;
    let centered: Vec<f64> = p.iter().map(|x| x - mean).collect();
    let v = normalize(&centered).ok()?;
    // Recentre once more so the sum is zero to rounding.
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    Some(v.iter().map(|x| x - mean).collect())
}

/// Multi-start search over central lines of `S_n = conv{e₁, …, eₙ}`.
pub fn search_simplex_central_lines(n: Dim, config: &SearchConfig) -> Result<SearchReport> {
    config.validate()?;
    let nn = n.require(3)?.get();
    let evaluate = |p: &[f64]| -> Option<(f64, Witness)> {
        let v = simplex_direction(p)?;
        let len = sections::simplex_central_line_length(&v).ok()?;
        Some((len, Witness::SimplexChord(v)))
    };
    let draw = |rng: &mut ChaCha8Rng| gaussian(rng, nn);
    Ok(multistart(config, Vec::new(), draw, evaluate))
}

/// Re-evaluates a witness through the exact engine.
pub fn reevaluate(witness: &Witness) -> Result<f64> {
    crate::closed_forms::evaluate_witness(witness)
}

/// Hyperplane normals `a` in the chopped-pyramid frame (`a₁ > t`), used by
/// random tests of the volume inequality.
pub fn random_feasible_normal(rng: &mut ChaCha8Rng, n: usize, t: f64) -> Vec<f64> {
    feasible_normal(rng, n, t)
}

/// `a₁ⁿ⁻²(a₁−t)ⁿ⁻¹ ≤ (1−t)ⁿ⁻¹ ∏_{i≥2}(a₁² − aᵢ²)` for a single-vertex
/// normal. Returns `(lhs, rhs)` in the canonical frame.
pub fn section_inequality_sides(normal: &[f64], t: f64) -> Result<(f64, f64)> {
    let c = ChoppedPyramid::new(normal, t)?;
    let a = c.canonical_normal();
    let n = a.len() as i32;
    let a1 = a[0];
    let lhs = a1.powi(n - 2) * (a1 - t).max(0.0).powi(n - 1);
    let prod: f64 = a[1..].iter().map(|ai| a1 * a1 - ai * ai).product();
    Ok((lhs, (1.0 - t).powi(n - 1) * prod))
}
