//! The certification suite: every closed form is checked against the exact
//! engine, the search oracles and Monte Carlo.
//!
//! A [`Plan`] fixes the grids, budgets and seed; [`run`] executes it and
//! returns a [`VerifyReport`] whose JSON and text renderings depend only on
//! the plan, so equal plans give byte-identical reports.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::closed_forms::{
    self, max_hyperplane_volume, max_line_length, min_line_length, min_slab_volume, mk, simplex_extremes,
    ThresholdTable,
};
use crate::geometry::{basis, dot, line_distance_to_origin, normalize, scale, Dim, HyperplaneSpec, SlabSpec};
use crate::mc::{self, stream_rng};
use crate::search::{self, HyperplaneObjective, Mode, SearchConfig, SearchReport};
use crate::sections::{self, isosceles_min_chord, ChoppedPyramid, Witness};
use crate::{Error, Result};

const LINE_TOL: f64 = 1e-5;
const BOUND_SLACK: f64 = 1e-9;
const HYP_REL_TOL: f64 = 1e-6;
const SIMPLEX_TOL: f64 = 1e-6;
const MC_SIGMAS: f64 = 3.0;
/// Failure messages kept per criterion; the count is always complete.
const MAX_MESSAGES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Level::Quick => "quick",
            Level::Full => "full",
        }
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            _ => Err(Error::Degenerate("level must be `quick` or `full`")),
        }
    }
}

/// Grids and budgets for one verification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub level: Level,
    pub seed: u64,
    pub line_dims: Vec<usize>,
    pub line_ts: Vec<f64>,
    pub line_starts: usize,
    pub max_iters: usize,
    pub hyperplane_dims: Vec<usize>,
    pub hyperplane_ts: Vec<f64>,
    pub hyperplane_starts: usize,
    pub inequality_normals: usize,
    pub slab_normals: usize,
    pub mc_dims: Vec<usize>,
    pub mc_configs: usize,
    pub mc_samples: u64,
    pub simplex_dims: Vec<usize>,
    pub simplex_starts: usize,
    /// Central simplex chords are nonsmooth at their optima; `n = 8` needs a longer budget.
    pub simplex_max_iters: usize,
    pub probe_n: usize,
    pub probe_ts: Vec<f64>,
    pub probe_starts: usize,
    /// Negative control: inflates the maximal-line closed form by 0.1 %.
    #[serde(default)]
    pub tamper: bool,
}

fn line_grid() -> Vec<f64> {
    let mut ts: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    ts.extend([FRAC_1_SQRT_2, 0.75]);
    ts.sort_by(f64::total_cmp);
    ts
}

impl Plan {
    /// The acceptance grids: lines for `n ≤ 5`, hyperplanes for `n ≤ 6`,
    /// simplices for `n ≤ 8`, `10⁶` Monte Carlo samples.
    pub fn full(seed: u64) -> Self {
        Plan {
            level: Level::Full,
            seed,
            line_dims: (2..=5).collect(),
            line_ts: line_grid(),
            line_starts: 256,
            max_iters: 500,
            hyperplane_dims: (3..=6).collect(),
            hyperplane_ts: vec![0.72, 0.8, 0.9, 0.99],
            hyperplane_starts: 256,
            inequality_normals: 10_000,
            slab_normals: 1_000,
            mc_dims: vec![3, 4, 5],
            mc_configs: 20,
            mc_samples: 1_000_000,
            simplex_dims: (3..=8).collect(),
            simplex_starts: 256,
            simplex_max_iters: 2_000,
            probe_n: 3,
            probe_ts: (700..=760).map(|k| k as f64 / 1000.0).collect(),
            probe_starts: 256,
            tamper: false,
        }
    }

    /// The same checks restricted to `n ≤ 4`, with `10⁵` Monte Carlo samples
    /// and 5 configurations per dimension instead of 20.
    pub fn quick(seed: u64) -> Self {
        let cap = |v: Vec<usize>| v.into_iter().filter(|&n| n <= 4).collect();
        let full = Self::full(seed);
        Plan {
            level: Level::Quick,
            line_dims: cap(full.line_dims),
            hyperplane_dims: cap(full.hyperplane_dims),
            mc_dims: cap(full.mc_dims),
            mc_configs: 5,
            mc_samples: 100_000,
            simplex_dims: cap(full.simplex_dims),
            ..full
        }
    }

    pub fn for_level(level: Level, seed: u64) -> Self {
        match level {
            Level::Quick => Self::quick(seed),
            Level::Full => Self::full(seed),
        }
    }

    pub fn tampered(mut self) -> Self {
        self.tamper = true;
        self
    }

    fn search(&self, starts: usize, mode: Mode) -> SearchConfig {
        SearchConfig {
            starts,
            max_iters: self.max_iters,
            seed: self.seed,
            mode,
            ..Default::default()
        }
    }

    /// Independent stream for one random sub-task.
    fn rng(&self, criterion: u64, a: u64, b: u64) -> rand_chacha::ChaCha8Rng {
        stream_rng(self.seed, (criterion << 48) | (a << 24) | b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    /// Informational criteria always pass once they run; their content is the notes.
    pub gate: bool,
    pub checks: usize,
    pub failures: usize,
    /// Largest deviation observed, in the unit named by `gap_unit`.
    pub max_gap: f64,
    pub gap_unit: String,
    pub messages: Vec<String>,
    pub notes: Vec<String>,
}

impl CriterionReport {
    fn new(id: u8, name: &str, gap_unit: &str) -> Self {
        CriterionReport {
            id,
            name: name.to_string(),
            passed: true,
            gate: true,
            checks: 0,
            failures: 0,
            max_gap: 0.0,
            gap_unit: gap_unit.to_string(),
            messages: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Records one check with deviation `gap` (larger is worse).
    fn check(&mut self, ok: bool, gap: f64, what: impl FnOnce() -> String) {
        self.checks += 1;
        if gap.is_finite() {
            self.max_gap = self.max_gap.max(gap);
        }
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, message: String) {
        self.failures += 1;
        self.passed = false;
        if self.messages.len() < MAX_MESSAGES {
            self.messages.push(message);
        }
    }

    fn guard<T>(&mut self, r: Result<T>, context: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.fail(format!("{}: {e}", context()));
                None
            }
        }
    }
}

/// Located jump in a sampled curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub t_before: f64,
    pub t_after: f64,
    pub value_before: f64,
    pub value_after: f64,
    pub magnitude: f64,
}

fn largest_jump(ts: &[f64], values: &[f64]) -> Option<Jump> {
    ts.windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| Jump {
            t_before: t[0],
            t_after: t[1],
            value_before: v[0],
            value_after: v[1],
            magnitude: (v[1] - v[0]).abs(),
        })
        .max_by(|a, b| a.magnitude.total_cmp(&b.magnitude))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub t: f64,
    pub branch: String,
    pub closed_form: f64,
    pub search: f64,
}

/// The maximal-line curve sampled across both branch points `1/√2` and `3/4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscontinuityProbe {
    pub n: usize,
    pub rows: Vec<ProbeRow>,
    pub search_jump: Option<Jump>,
    pub closed_form_jump: Option<Jump>,
    /// `(left, right)` branch values at `t = 1/√2`.
    pub branches_at_inv_sqrt2: (f64, f64),
    /// `(left, right)` branch values at `t = 3/4`.
    pub branches_at_three_quarters: (f64, f64),
    /// Largest step of the searched curve between neighbours straddling `3/4`.
    pub search_step_at_three_quarters: f64,
    pub max_search_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub level: Level,
    pub seed: u64,
    pub plan: Plan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub manifest: Manifest,
    pub criteria: Vec<CriterionReport>,
    pub probe: Option<DiscontinuityProbe>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn criterion(&self, id: u8) -> Option<&CriterionReport> {
        self.criteria.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let m = &self.manifest;
        let _ = writeln!(out, "{} {} verify: level={} seed={}", m.tool, m.version, m.level.as_str(), m.seed);
        for c in &self.criteria {
            let status = match (c.gate, c.passed) {
                (false, true) => "INFO",
                (_, true) => "PASS",
                (_, false) => "FAIL",
            };
            let _ = writeln!(
                out,
                "[{status}] {:>2} {}: {} checks, {} failures, max {} {:.3e}",
                c.id, c.name, c.checks, c.failures, c.gap_unit, c.max_gap
            );
            for msg in &c.messages {
                let _ = writeln!(out, "       ! {msg}");
            }
            for note in &c.notes {
                let _ = writeln!(out, "       - {note}");
            }
        }
        let _ = writeln!(out, "overall: {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

fn dim(n: usize) -> Result<Dim> {
    Dim::new(n)
}

fn witness_line_check(c: &mut CriterionReport, r: &SearchReport, label: &str) {
    match &r.best_witness {
        Some(w) => match closed_forms::evaluate_witness(w) {
            Ok(v) => {
                let gap = (v - r.best_value).abs();
                c.check(gap <= BOUND_SLACK, 0.0, || {
                    format!("{label}: witness re-evaluates to {v} but search reported {}", r.best_value)
                });
            }
            Err(e) => c.fail(format!("{label}: witness does not evaluate: {e}")),
        },
        None => c.fail(format!("{label}: search returned no witness")),
    }
}

fn check_max_lines(plan: &Plan) -> CriterionReport {
    let mut c = CriterionReport::new(1, "maximal line sections", "|search - closed form|");
    let cfg = plan.search(plan.line_starts, Mode::Maximize);
    for &n in &plan.line_dims {
        for &t in &plan.line_ts {
            let Some(d) = c.guard(dim(n), || format!("n={n}")) else { continue };
            let Some(answer) = c.guard(max_line_length(d, t), || format!("closed form n={n} t={t}")) else {
                continue;
            };
            let cf = if plan.tamper { answer.value * 1.001 } else { answer.value };
            let runs = [
                ("line search", search::search_lines_at_distance(d, t, &cfg)),
                ("edge pairs", search::search_edge_pair_lines(d, t, &cfg)),
            ];
            for (label, run) in runs {
                let Some(r) = c.guard(run, || format!("{label} n={n} t={t}")) else { continue };
                let gap = (r.best_value - cf).abs();
                c.check(gap <= LINE_TOL, gap, || {
                    format!("{label} n={n} t={t:.6}: {:.12} vs closed form {cf:.12}", r.best_value)
                });
                c.check(r.best_value <= cf + BOUND_SLACK, 0.0, || {
                    format!("{label} n={n} t={t:.6}: feasible line of length {:.12} beats {cf:.12}", r.best_value)
                });
                witness_line_check(&mut c, &r, &format!("{label} n={n} t={t:.6}"));
            }
        }
    }
    c.notes.push(format!("grid: n in {:?}, {} values of t", plan.line_dims, plan.line_ts.len()));
    c
}

fn check_min_lines(plan: &Plan) -> CriterionReport {
    let mut c = CriterionReport::new(2, "minimal line sections", "|search - closed form|");
    let cfg = plan.search(plan.line_starts, Mode::Minimize);
    for &n in &plan.line_dims {
        let limit = 1.0 / (n as f64).sqrt();
        for &t in plan.line_ts.iter().filter(|&&t| t <= limit) {
            let Some(d) = c.guard(dim(n), || format!("n={n}")) else { continue };
            let Some(answer) = c.guard(min_line_length(d, t), || format!("closed form n={n} t={t}")) else {
                continue;
            };
            let cf = answer.value;
            if let Some(r) = c.guard(search::search_lines_at_distance(d, t, &cfg), || format!("search n={n} t={t}")) {
                c.check(r.best_value >= cf - LINE_TOL, (r.best_value - cf).abs(), || {
                    format!("n={n} t={t:.6}: search found {:.12} below closed form {cf:.12}", r.best_value)
                });
                witness_line_check(&mut c, &r, &format!("n={n} t={t:.6}"));
            }
            if let Witness::Line(l) = &answer.witness {
                let v = closed_forms::evaluate_witness(&answer.witness).unwrap_or(f64::NAN);
                c.check((v - cf).abs() <= BOUND_SLACK, 0.0, || {
                    format!("n={n} t={t:.6} branch {}: witness length {v} vs {cf}", answer.branch)
                });
                let far = crate::geometry::add(l.base(), l.direction());
                let dist = line_distance_to_origin(l.base(), &far).unwrap_or(f64::NAN);
                c.check((dist - t).abs() <= 1e-12, 0.0, || {
                    format!("n={n} t={t:.6} branch {}: witness at distance {dist}", answer.branch)
                });
            } else {
                c.fail(format!("n={n} t={t}: closed form returned a non-line witness"));
            }
        }
    }
    c
}

fn coordinate_normals(n: usize) -> impl Iterator<Item = Vec<f64>> {
    (0..n).flat_map(move |i| [1.0, -1.0].map(|s| scale(&basis(n, i), s)))
}

fn check_max_hyperplanes(plan: &Plan) -> CriterionReport {
    let mut c = CriterionReport::new(3, "maximal hyperplane sections", "relative gap");
    let cfg = plan.search(plan.hyperplane_starts, Mode::Maximize);
    let mut worst_ratio: f64 = 0.0;
    for &n in &plan.hyperplane_dims {
        for (ti, &t) in plan.hyperplane_ts.iter().enumerate() {
            let Some(d) = c.guard(dim(n), || format!("n={n}")) else { continue };
            let Some(answer) = c.guard(max_hyperplane_volume(d, t), || format!("closed form n={n} t={t}")) else {
                continue;
            };
            let cf = answer.value;
            let formula = 2f64.powi(n as i32 - 1) * (1.0 - t).powi(n as i32 - 1)
                / (1..n).map(|i| i as f64).product::<f64>();
            c.check((formula - cf).abs() <= 1e-12 * cf, 0.0, || format!("n={n} t={t}: closed form {cf} vs {formula}"));
            let search = search::search_hyperplanes_at_distance(d, t, &cfg, HyperplaneObjective::SectionVolume);
            if let Some(r) = c.guard(search, || format!("search n={n} t={t}")) {
                let rel = (r.best_value - cf).abs() / cf;
                c.check(rel <= HYP_REL_TOL, rel, || format!("n={n} t={t}: search {:.12e} vs {cf:.12e}", r.best_value));
                c.check(r.best_value <= cf * (1.0 + 1e-12), 0.0, || {
                    format!("n={n} t={t}: a hyperplane section {:.12e} beats {cf:.12e}", r.best_value)
                });
                witness_line_check(&mut c, &r, &format!("n={n} t={t}"));
                if let Some(Witness::Hyperplane(h)) = &r.best_witness {
                    let lead = h.normal().iter().fold(0.0f64, |m, a| m.max(a.abs()));
                    c.check(lead >= 1.0 - 1e-4, 0.0, || {
                        format!("n={n} t={t}: best normal {:?} is not near a coordinate axis", h.normal())
                    });
                }
            }
            for a in coordinate_normals(n) {
                let v = HyperplaneSpec::new(a, t).and_then(|h| sections::hyperplane_section_volume(&h, d));
                if let Some(v) = c.guard(v, || format!("coordinate normal n={n} t={t}")) {
                    c.check((v.value - cf).abs() <= 1e-12 * cf, 0.0, || {
                        format!("n={n} t={t}: coordinate section {} vs {cf}", v.value)
                    });
                }
            }
            let mut rng = plan.rng(3, n as u64, ti as u64);
            for _ in 0..plan.inequality_normals {
                let a = search::random_feasible_normal(&mut rng, n, t);
                if let Some((lhs, rhs)) = c.guard(search::section_inequality_sides(&a, t), || format!("n={n} t={t}")) {
                    if rhs > 0.0 {
                        worst_ratio = worst_ratio.max(lhs / rhs);
                    }
                    c.check(lhs <= rhs * (1.0 + 1e-12), 0.0, || {
                        format!("n={n} t={t}: inequality fails at {a:?}: {lhs:e} > {rhs:e}")
                    });
                }
            }
        }
    }
    c.notes.push(format!(
        "{} random feasible normals per (n, t); largest lhs/rhs ratio {worst_ratio:.6}",
        plan.inequality_normals
    ));
    c
}

fn random_unit(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        if let Ok(v) = normalize(&g) {
            return v;
        }
    }
}

fn check_min_slabs(plan: &Plan) -> CriterionReport {
    let mut c = CriterionReport::new(4, "minimal slabs", "|slab - bound| at coordinate normals");
    let mut closest: f64 = f64::INFINITY;
    for &n in &plan.hyperplane_dims {
        for (ti, &t) in plan.hyperplane_ts.iter().enumerate() {
            let Some(d) = c.guard(dim(n), || format!("n={n}")) else { continue };
            let Some(answer) = c.guard(min_slab_volume(d, t), || format!("closed form n={n} t={t}")) else {
                continue;
            };
            let bound = d.cross_polytope_volume() * (1.0 - (1.0 - t).powi(n as i32));
            c.check((answer.value - bound).abs() <= 1e-12, 0.0, || format!("n={n} t={t}: closed form {}", answer.value));
            for a in coordinate_normals(n) {
                let v = SlabSpec::new(a, t).and_then(|s| sections::slab_volume(&s, d));
                if let Some(v) = c.guard(v, || format!("coordinate slab n={n} t={t}")) {
                    let gap = (v.value - bound).abs();
                    c.check(gap <= 1e-12, gap, || format!("n={n} t={t}: coordinate slab {} vs {bound}", v.value));
                }
            }
            let mut rng = plan.rng(4, n as u64, ti as u64);
            for i in 0..plan.slab_normals {
                // Alternate uniform directions with normals that cut off a vertex.
                let a = if i % 2 == 0 {
                    random_unit(&mut rng, n)
                } else {
                    search::random_feasible_normal(&mut rng, n, t)
                };
                let v = SlabSpec::new(a.clone(), t).and_then(|s| sections::slab_volume(&s, d));
                if let Some(v) = c.guard(v, || format!("random slab n={n} t={t} a={a:?}")) {
                    closest = closest.min(v.value - bound);
                    c.check(v.value >= bound - BOUND_SLACK, 0.0, || {
                        format!("n={n} t={t}: slab {} below bound {bound} at {a:?}", v.value)
                    });
                }
            }
        }
    }
    c.notes.push(format!(
        "{} random normals per (n, t); smallest excess over the bound {closest:.3e}",
        plan.slab_normals
    ));
    c
}

/// Fewest expected sample hits in a cap for its Monte Carlo estimate to be
/// meaningful at the 3σ level.
const MIN_EXPECTED_HITS: f64 = 100.0;

/// A random configuration in the single-vertex regime whose cap the given
/// sample budget can resolve.
fn mc_configuration(rng: &mut rand_chacha::ChaCha8Rng, n: usize, samples: u64) -> (Vec<f64>, f64) {
    let body = Dim::new(n).map(|d| d.cross_polytope_volume()).unwrap_or(1.0);
    loop {
        let t = rng.random_range(0.72..0.95);
        let a = search::random_feasible_normal(rng, n, t);
        let Ok(cap) = ChoppedPyramid::new(&a, t) else { continue };
        if let Ok(v) = cap.volume() {
            if v / body * samples as f64 >= MIN_EXPECTED_HITS {
                return (a, t);
            }
        }
    }
}

fn check_monte_carlo(plan: &Plan) -> CriterionReport {
    let mut c = CriterionReport::new(5, "Monte Carlo cross-checks", "|z|");
    let mut seed_counter = 0u64;
    let mut next_seed = || {
        seed_counter += 1;
        plan.seed.wrapping_mul(1_000_003).wrapping_add(seed_counter)
    };
    for &n in &plan.mc_dims {
        let Some(d) = c.guard(dim(n), || format!("n={n}")) else { continue };
        let mut rng = plan.rng(5, n as u64, 0);
        for k in 0..plan.mc_configs {
            let (a, t) = mc_configuration(&mut rng, n, plan.mc_samples);
            let label = format!("n={n} config {k} (t={t:.4})");
            let Some(cap) = c.guard(ChoppedPyramid::new(&a, t), || label.clone()) else { continue };

            let seed = next_seed();
            let exact = cap.volume();
            let est = mc::mc_body_fraction(|x| dot(x, &a) >= t, d, plan.mc_samples, seed);
            if let (Some(exact), Some(est)) = (c.guard(exact, || label.clone()), c.guard(est, || label.clone())) {
                let z = est.z_score(exact);
                c.check(z <= MC_SIGMAS, z, || format!("{label} chopped volume {exact:.8e}, MC {:.8e} ± {:.2e}", est.mean, est.stderr));
            }

            let seed = next_seed();
            let h = HyperplaneSpec::new(a.clone(), t);
            if let Some(h) = c.guard(h, || label.clone()) {
                let exact = sections::hyperplane_section_volume(&h, d).map(|r| r.value);
                let est = mc::mc_hyperplane_section_volume(&h, d, plan.mc_samples, seed);
                if let (Some(exact), Some(est)) = (c.guard(exact, || label.clone()), c.guard(est, || label.clone())) {
                    let z = est.z_score(exact);
                    c.check(z <= MC_SIGMAS, z, || format!("{label} section volume {exact:.8e}, MC {:.8e} ± {:.2e}", est.mean, est.stderr));
                }
            }

            let seed = next_seed();
            let s = SlabSpec::new(a.clone(), t);
            if let Some(s) = c.guard(s, || label.clone()) {
                let exact = sections::slab_volume(&s, d).map(|r| r.value);
                let est = mc::mc_body_fraction(|x| dot(x, &a).abs() <= t, d, plan.mc_samples, seed);
                if let (Some(exact), Some(est)) = (c.guard(exact, || label.clone()), c.guard(est, || label.clone())) {
                    let z = est.z_score(exact);
                    c.check(z <= MC_SIGMAS, z, || format!("{label} slab volume {exact:.8e}, MC {:.8e} ± {:.2e}", est.mean, est.stderr));
                }
            }
        }
    }

    // Standard error shrinks like 1/√samples.
    if let Some(&n) = plan.mc_dims.first() {
        let d = dim(n).expect("mc dims are valid");
        let mut rng = plan.rng(5, 0, 1);
        let (a, t) = mc_configuration(&mut rng, n, plan.mc_samples);
        let seed = next_seed();
        let one = mc::mc_body_fraction(|x| dot(x, &a).abs() <= t, d, plan.mc_samples, seed);
        let two = mc::mc_body_fraction(|x| dot(x, &a).abs() <= t, d, 2 * plan.mc_samples, seed);
        if let (Ok(one), Ok(two)) = (one, two) {
            let ratio = two.stderr / one.stderr;
            let rel = (ratio * SQRT_2 - 1.0).abs();
            c.check(rel <= 0.2, 0.0, || format!("stderr ratio {ratio:.4} for doubled samples"));
            c.notes.push(format!("doubling samples scales stderr by {ratio:.4} (1/sqrt 2 = {:.4})", FRAC_1_SQRT_2));
        }
    }
    c.notes.push(format!(
        "{} configurations per n in {:?} (caps with at least {MIN_EXPECTED_HITS} expected hits), {} samples each, {MC_SIGMAS} sigma",
        plan.mc_configs, plan.mc_dims, plan.mc_samples
    ));
    c
}

fn check_simplex(plan: &Plan) -> CriterionReport {
    let mut c = CriterionReport::new(6, "central simplex sections", "|search - closed form|");
    for &n in &plan.simplex_dims {
        let Some(d) = c.guard(dim(n), || format!("n={n}")) else { continue };
        let Some((min, max)) = c.guard(simplex_extremes(d), || format!("n={n}")) else { continue };
        for (mode, target) in [(Mode::Minimize, min), (Mode::Maximize, max)] {
            let cfg = SearchConfig {
                max_iters: plan.simplex_max_iters,
                ..plan.search(plan.simplex_starts, mode)
            };
            if let Some(r) = c.guard(search::search_simplex_central_lines(d, &cfg), || format!("n={n}")) {
                let gap = (r.best_value - target).abs();
                c.check(gap <= SIMPLEX_TOL, gap, || format!("n={n} {mode:?}: search {:.12} vs {target:.12}", r.best_value));
                witness_line_check(&mut c, &r, &format!("n={n} {mode:?}"));
            }
        }
        let edge = closed_forms::simplex_min_direction(d).and_then(|v| sections::simplex_central_line_length(&v));
        if let Some(v) = c.guard(edge, || format!("edge witness n={n}")) {
            c.check((v - min).abs() <= 1e-12, 0.0, || format!("n={n}: edge-parallel chord {v} vs {min}"));
        }
        let vertex = closed_forms::simplex_max_direction(d).and_then(|v| sections::simplex_central_line_length(&v));
        if let Some(v) = c.guard(vertex, || format!("vertex witness n={n}")) {
            c.check((v - max).abs() <= 1e-12, 0.0, || format!("n={n}: vertex chord {v} vs {max}"));
        }
        let through = sections::simplex_chord_through_centroid(&basis(n, 0));
        if let Some(v) = c.guard(through, || format!("vertex chord n={n}")) {
            c.check((v - max).abs() <= 1e-12, 0.0, || format!("n={n}: chord from e1 through the centroid {v} vs {max}"));
        }
    }
    c
}

fn check_identities(plan: &Plan) -> CriterionReport {
    let mut c = CriterionReport::new(7, "structural identities", "absolute error");
    for n in 3..=8usize {
        let mut rng = plan.rng(7, n as u64, 0);
        for _ in 0..200 {
            let t = rng.random_range(0.71..0.999);
            let a = search::random_feasible_normal(&mut rng, n, t);
            let Some(cap) = c.guard(ChoppedPyramid::new(&a, t), || format!("n={n}")) else { continue };
            if let (Ok(vol), Ok(sec)) = (cap.volume(), cap.section_volume()) {
                let err = (n as f64 * vol - sec * cap.height()).abs();
                c.check(err <= 1e-12, err, || format!("n={n} t={t}: n|S| = {} vs section x height {}", n as f64 * vol, sec * cap.height()));
            } else {
                c.fail(format!("n={n} t={t}: cap volumes failed for {a:?}"));
            }
        }
    }
    for n in 2..=12usize {
        let Some(d) = c.guard(dim(n), || format!("n={n}")) else { continue };
        let limit = 1.0 / (n as f64).sqrt();
        for k in 1..n {
            for i in 0..=20 {
                let t = limit * i as f64 / 20.0;
                let lhs = mk(d, k, t);
                let rhs = isosceles_min_chord(1.0 / (k as f64).sqrt(), 1.0 / ((n - k) as f64).sqrt(), t);
                if let (Some(l), Some(r)) = (c.guard(lhs, || format!("mk n={n} k={k}")), c.guard(rhs, || format!("isosceles n={n} k={k}"))) {
                    let err = (l - r).abs();
                    c.check(err <= 1e-14, err, || format!("n={n} k={k} t={t}: m_k {l} vs isosceles {r}"));
                }
            }
        }
    }
    for n in 2..=40usize {
        let Some(table) = c.guard(dim(n).and_then(ThresholdTable::new), || format!("n={n}")) else { continue };
        let err = (table.get(0) - 1.0 / (n as f64).sqrt()).abs();
        c.check(err <= 1e-14, err, || format!("n={n}: T(0) = {} vs 1/sqrt(n)", table.get(0)));
        c.check(table.values().windows(2).all(|w| w[0] > w[1]), 0.0, || format!("n={n}: thresholds not strictly decreasing"));
        let d = dim(n).expect("checked");
        for k in 1..n {
            let t = table.get(k);
            let left = if k + 1 < n { mk(d, k + 1, t) } else { Ok(2.0 / (n as f64).sqrt()) };
            if let (Ok(a), Ok(b)) = (mk(d, k, t), left) {
                let err = (a - b).abs();
                c.check(err <= 1e-12, err, || format!("n={n}: branches k={k} and k+1 differ by {err:e} at T({k})"));
            } else {
                c.fail(format!("n={n} k={k}: branch evaluation failed"));
            }
        }
    }
    c
}

fn check_probe(plan: &Plan) -> (CriterionReport, Option<DiscontinuityProbe>) {
    let mut c = CriterionReport::new(8, "maximal line discontinuity probe", "|search - closed form|");
    c.gate = false;
    let n = plan.probe_n;
    let Some(d) = c.guard(dim(n), || format!("n={n}")) else { return (c, None) };
    let cfg = plan.search(plan.probe_starts, Mode::Maximize);
    let mut rows = Vec::with_capacity(plan.probe_ts.len());
    for &t in &plan.probe_ts {
        let answer = max_line_length(d, t);
        let run = search::search_lines_at_distance(d, t, &cfg);
        if let (Some(a), Some(r)) = (c.guard(answer, || format!("t={t}")), c.guard(run, || format!("t={t}"))) {
            let gap = (r.best_value - a.value).abs();
            c.check(true, gap, String::new);
            rows.push(ProbeRow {
                t,
                branch: a.branch,
                closed_form: a.value,
                search: r.best_value,
            });
        }
    }
    let ts: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let searched: Vec<f64> = rows.iter().map(|r| r.search).collect();
    let formula: Vec<f64> = rows.iter().map(|r| r.closed_form).collect();
    let search_jump = largest_jump(&ts, &searched);
    let closed_form_jump = largest_jump(&ts, &formula);

    let s = FRAC_1_SQRT_2;
    let at_inv_sqrt2 = (2.0 / (s + (1.0 - s * s).sqrt()), s);
    let at_three_quarters = (0.75 - (0.75f64 * 0.75 - 0.5).sqrt(), 2.0 - 2.0 * 0.75);
    let step_at_three_quarters = ts
        .windows(2)
        .zip(searched.windows(2))
        .filter(|(t, _)| t[0] <= 0.75 + 1e-12 && t[1] >= 0.75 - 1e-12)
        .map(|(_, v)| (v[1] - v[0]).abs())
        .fold(0.0, f64::max);

    if let Some(j) = &search_jump {
        c.notes.push(format!(
            "search: largest jump between t={:.3} and t={:.3}, from {:.10} to {:.10} (magnitude {:.10})",
            j.t_before, j.t_after, j.value_before, j.value_after, j.magnitude
        ));
    }
    if let Some(j) = &closed_form_jump {
        c.notes.push(format!(
            "closed form: largest jump between t={:.3} and t={:.3} (magnitude {:.10})",
            j.t_before, j.t_after, j.magnitude
        ));
    }
    c.notes.push(format!(
        "branch values at 1/sqrt 2: left {:.10}, right {:.10}; at 3/4: left {:.10}, right {:.10}",
        at_inv_sqrt2.0, at_inv_sqrt2.1, at_three_quarters.0, at_three_quarters.1
    ));
    c.notes.push(format!(
        "searched curve step across t=3/4: {step_at_three_quarters:.3e}; the only jump is at 1/sqrt 2, not at 3/4"
    ));
    let probe = DiscontinuityProbe {
        n,
        rows,
        search_jump,
        closed_form_jump,
        branches_at_inv_sqrt2: at_inv_sqrt2,
        branches_at_three_quarters: at_three_quarters,
        search_step_at_three_quarters: step_at_three_quarters,
        max_search_gap: c.max_gap,
    };
    (c, Some(probe))
}

/// Searches and Monte Carlo reruns with the same seed must agree bit for bit.
fn check_determinism(plan: &Plan) -> CriterionReport {
    let mut c = CriterionReport::new(9, "determinism", "mismatches");
    let d = dim(3).expect("3 is a valid dimension");
    let cfg = SearchConfig {
        starts: 16,
        ..plan.search(16, Mode::Maximize)
    };
    let a = search::search_lines_at_distance(d, 0.4, &cfg);
    let b = search::search_lines_at_distance(d, 0.4, &cfg);
    c.check(a.is_ok() && a == b, 0.0, || "line search differs between identical runs".to_string());
    let e1 = basis(3, 0);
    let x = mc::mc_body_fraction(|p| dot(p, &e1) >= 0.8, d, 200_000, plan.seed);
    let y = mc::mc_body_fraction(|p| dot(p, &e1) >= 0.8, d, 200_000, plan.seed);
    c.check(x.is_ok() && x == y, 0.0, || "Monte Carlo differs between identical runs".to_string());
    c.notes.push("whole-report byte identity is checked by running the suite twice".to_string());
    c
}

/// Runs every criterion of the plan.
pub fn run(plan: &Plan) -> VerifyReport {
    let (probe_report, probe) = check_probe(plan);
    let criteria = vec![
        check_max_lines(plan),
        check_min_lines(plan),
        check_max_hyperplanes(plan),
        check_min_slabs(plan),
        check_monte_carlo(plan),
        check_simplex(plan),
        check_identities(plan),
        probe_report,
        check_determinism(plan),
    ];
    VerifyReport {
        manifest: Manifest {
            tool: "crosspoly".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            level: plan.level,
            seed: plan.seed,
            plan: plan.clone(),
        },
        criteria,
        probe,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(seed: u64) -> Plan {
        Plan {
            line_dims: vec![3],
            line_ts: vec![0.3, 0.72],
            line_starts: 24,
            max_iters: 200,
            hyperplane_dims: vec![3],
            hyperplane_ts: vec![0.8],
            hyperplane_starts: 24,
            inequality_normals: 200,
            slab_normals: 100,
            mc_dims: vec![3],
            mc_configs: 2,
            mc_samples: 20_000,
            simplex_dims: vec![3],
            simplex_starts: 24,
            probe_ts: vec![0.705, 0.706, 0.707, 0.708, 0.709],
            probe_starts: 24,
            ..Plan::quick(seed)
        }
    }

    #[test]
    fn tiny_plan_passes_and_is_deterministic() {
        let a = run(&tiny(42));
        assert!(a.passed(), "{}", a.render_text());
        let b = run(&tiny(42));
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.render_text(), b.render_text());
        assert_eq!(a.criteria.len(), 9);
    }

    #[test]
    fn tamper_fails_first_criterion() {
        let r = run(&tiny(42).tampered());
        assert!(!r.criterion(1).unwrap().passed);
        assert!(!r.passed());
    }

    #[test]
    fn probe_finds_jump_at_inv_sqrt2() {
        let r = run(&tiny(1));
        let probe = r.probe.unwrap();
        let j = probe.search_jump.unwrap();
        let cf = probe.closed_form_jump.unwrap();
        assert_eq!((j.t_before, j.t_after), (0.707, 0.708));
        assert_eq!((cf.t_before, cf.t_after), (0.707, 0.708));
        assert!((j.magnitude - cf.magnitude).abs() < 1e-5);
    }

    #[test]
    fn level_round_trip() {
        for l in [Level::Quick, Level::Full] {
            assert_eq!(l.as_str().parse::<Level>().unwrap(), l);
        }
        assert!("medium".parse::<Level>().is_err());
    }

    #[test]
    fn report_json_round_trips() {
        let r = run(&tiny(3));
        let back: VerifyReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back.to_json(), r.to_json());
    }
}
