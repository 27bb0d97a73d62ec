//! Maximal chords through two edges of `B₁ⁿ`.
//!
//! A longest chord in `𝓛_t` can be moved until both endpoints lie on edges
//! of the body, so it suffices to scan lines meeting two edges. For a point
//! `a(α)` on the first edge, the points `b(β)` of the second edge with
//! `dist(line(a, b), 0) = t` solve a quadratic in `β`, which leaves a
//! one-parameter family per edge pair.

use serde::{Deserialize, Serialize};

use super::{Mode, SearchConfig, SearchReport, StartResult};
use crate::geometry::{dot, sub, Dim, LineSpec};
use crate::sections::{self, Witness};
use crate::{Error, Result, EXACT_TOL};

/// The edge `[sᵢ·e_i, sⱼ·e_j]` (`i ≠ j`, signs `±1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub si: i8,
    pub j: usize,
    pub sj: i8,
}

impl Edge {
    pub fn new(i: usize, si: i8, j: usize, sj: i8) -> Self {
        Edge { i, si, j, sj }
    }

    pub fn endpoints(&self, n: usize) -> (Vec<f64>, Vec<f64>) {
        let mut p = vec![0.0; n];
        let mut q = vec![0.0; n];
        p[self.i] = self.si as f64;
        q[self.j] = self.sj as f64;
        (p, q)
    }

    fn same_as(&self, other: &Edge) -> bool {
        self == other || (self.i == other.j && self.si == other.sj && self.j == other.i && self.sj == other.si)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgePair {
    pub first: Edge,
    pub second: Edge,
    pub label: String,
}

/// One representative of every symmetry class of edge pairs, classified by
/// the number of distinct coordinates involved.
pub fn representative_edge_pairs(n: Dim) -> Vec<EdgePair> {
    let n = n.get();
    let e12 = Edge::new(0, 1, 1, 1);
    let mut pairs = vec![
        (e12, e12, "same-edge"),
        (e12, Edge::new(0, -1, 1, 1), "adjacent-in-plane"),
        (e12, Edge::new(0, -1, 1, -1), "opposite-in-plane"),
    ];
    if n >= 3 {
        pairs.push((e12, Edge::new(0, 1, 2, 1), "shared-vertex"));
        pairs.push((e12, Edge::new(0, -1, 2, 1), "antipodal-vertex"));
    }
    if n >= 4 {
        pairs.push((e12, Edge::new(2, 1, 3, 1), "disjoint-coordinates"));
    }
    pairs
        .into_iter()
        .map(|(first, second, label)| EdgePair {
            first,
            second,
            label: label.to_string(),
        })
        .collect()
}

/// Every unordered pair of edges of `B₁ⁿ`, including an edge with itself.
pub fn all_edge_pairs(n: Dim) -> Vec<EdgePair> {
    let n = n.get();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for si in [1, -1] {
                for sj in [1, -1] {
                    edges.push(Edge::new(i, si, j, sj));
                }
            }
        }
    }
    let mut pairs = Vec::new();
    for (x, a) in edges.iter().enumerate() {
        for b in &edges[x..] {
            pairs.push(EdgePair {
                first: *a,
                second: *b,
                label: format!("[{},{}]x[{},{}]", a.i, a.j, b.i, b.j),
            });
        }
    }
    pairs
}

/// Real roots of `c₂β² + c₁β + c₀` in `[0, 1]`; `None` if the polynomial vanishes.
fn unit_roots(c2: f64, c1: f64, c0: f64) -> Option<Vec<f64>> {
    let scale = c2.abs().max(c1.abs()).max(c0.abs());
    if scale <= 1e-14 {
        return None;
    }
    let (c2, c1, c0) = (c2 / scale, c1 / scale, c0 / scale);
    let mut roots = Vec::with_capacity(2);
    if c2.abs() <= 1e-12 {
        if c1.abs() > 1e-12 {
            roots.push(-c0 / c1);
        }
    } else {
        let mut disc = c1 * c1 - 4.0 * c2 * c0;
        // A double root shows up as a slightly negative discriminant.
        if disc < 0.0 && disc > -1e-12 {
            disc = 0.0;
        }
        if disc >= 0.0 {
            let sq = disc.sqrt();
            // Numerically stable pair.
            let q = -0.5 * (c1 + c1.signum() * sq);
            if q != 0.0 {
                roots.push(q / c2);
                roots.push(c0 / q);
            } else {
                roots.push(0.0);
            }
        }
    }
    Some(roots.into_iter().filter(|b| (-1e-12..=1.0 + 1e-12).contains(b)).map(|b| b.clamp(0.0, 1.0)).collect())
}

struct PairScan {
    n: Dim,
    t: f64,
    a0: Vec<f64>,
    a_dir: Vec<f64>,
    b0: Vec<f64>,
    b_dir: Vec<f64>,
    same_edge: bool,
}

impl PairScan {
    fn new(n: Dim, t: f64, pair: &EdgePair) -> Self {
        let (p0, p1) = pair.first.endpoints(n.get());
        let (q0, q1) = pair.second.endpoints(n.get());
        PairScan {
            n,
            t,
            a_dir: sub(&p1, &p0),
            a0: p0,
            b_dir: sub(&q1, &q0),
            b0: q0,
            same_edge: pair.first.same_as(&pair.second),
        }
    }

    /// Feasible line through `a` and `b`, rebuilt exactly at distance `t`.
    fn line(&self, a: &[f64], b: &[f64]) -> Option<LineSpec> {
        let w = sub(b, a);
        if dot(&w, &w) <= 1e-18 {
            return None;
        }
        let through = LineSpec::through_points(a, b).ok()?;
        if (through.distance() - self.t).abs() > 1e-9 {
            return None;
        }
        LineSpec::at_distance(self.t, through.base(), through.direction()).ok()
    }

    fn evaluate(&self, line: LineSpec) -> Option<(f64, Witness)> {
        let r = sections::line_section_length(&line, self.n).ok()?;
        Some((r.value, Witness::Line(line)))
    }

    /// Best feasible line through `a(α)` and the second edge.
    fn best_at(&self, alpha: f64) -> Option<(f64, Witness)> {
        let a: Vec<f64> = self.a0.iter().zip(&self.a_dir).map(|(p, d)| p + alpha * d).collect();
        let q = sub(&self.b0, &a);
        let aa = dot(&a, &a) - self.t * self.t;
        let (ad, aq) = (dot(&a, &self.b_dir), dot(&a, &q));
        let c2 = aa * dot(&self.b_dir, &self.b_dir) - ad * ad;
        let c1 = 2.0 * aa * dot(&q, &self.b_dir) - 2.0 * aq * ad;
        let c0 = aa * dot(&q, &q) - aq * aq;
        let betas = unit_roots(c2, c1, c0).unwrap_or_else(|| vec![0.0, 0.5, 1.0]);
        let through = betas.into_iter().filter_map(|beta| {
            let b: Vec<f64> = self.b0.iter().zip(&self.b_dir).map(|(p, d)| p + beta * d).collect();
            self.line(&a, &b).and_then(|l| self.evaluate(l))
        });
        // With |a| = t the line through a is tangent to the sphere at a; the
        // only root may then be b = a, so also try the tangent lines along
        // either edge direction.
        let tangent = (aa.abs() <= EXACT_TOL)
            .then_some([&self.a_dir, &self.b_dir])
            .into_iter()
            .flatten()
            .filter_map(|d| LineSpec::at_distance(self.t, &a, d).ok())
            .filter_map(|l| self.evaluate(l));
        through.chain(tangent).max_by(|x, y| x.0.total_cmp(&y.0))
    }

    /// The edge itself, which lies in `𝓛_t` only for `t = 1/√2`.
    fn edge_line(&self) -> Option<(f64, Witness)> {
        if (self.t - std::f64::consts::FRAC_1_SQRT_2).abs() > EXACT_TOL {
            return None;
        }
        let mid: Vec<f64> = self.a0.iter().zip(&self.a_dir).map(|(p, d)| p + 0.5 * d).collect();
        let line = LineSpec::at_distance(self.t, &mid, &self.a_dir).ok()?;
        self.evaluate(line)
    }

    /// Grid over `α`, then golden-section refinement around the best node.
    fn run(&self, grid: usize, evals: &mut usize) -> Option<(f64, Witness)> {
        if self.same_edge {
            *evals += 1;
            return self.edge_line();
        }
        let mut best: Option<(f64, Witness, f64)> = None;
        let consider = |alpha: f64, best: &mut Option<(f64, Witness, f64)>, evals: &mut usize| -> f64 {
            *evals += 1;
            match self.best_at(alpha) {
                Some((v, w)) => {
                    if best.as_ref().is_none_or(|b| v > b.0) {
                        *best = Some((v, w, alpha));
                    }
                    v
                }
                None => f64::NEG_INFINITY,
            }
        };
        for k in 0..=grid {
            consider(k as f64 / grid as f64, &mut best, evals);
        }
        let center = best.as_ref()?.2;
        let h = 1.0 / grid as f64;
        let (mut lo, mut hi) = ((center - h).max(0.0), (center + h).min(1.0));
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = hi - phi * (hi - lo);
        let mut x2 = lo + phi * (hi - lo);
        let mut f1 = consider(x1, &mut best, evals);
        let mut f2 = consider(x2, &mut best, evals);
        for _ in 0..60 {
            if hi - lo < 1e-15 {
                break;
            }
            if f1 >= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = consider(x1, &mut best, evals);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = consider(x2, &mut best, evals);
            }
        }
        best.map(|(v, w, _)| (v, w))
    }
}

/// Longest chord in `𝓛_t` among lines meeting two edges, scanning the given
/// pairs.
pub fn search_edge_pairs_with(n: Dim, t: f64, config: &SearchConfig, pairs: &[EdgePair]) -> Result<SearchReport> {
    config.validate()?;
    n.require(2)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            lo: 0.0,
            hi: 1.0,
        });
    }
    if config.mode != Mode::Maximize {
        return Err(Error::Degenerate("edge-pair enumeration only maximizes"));
    }
    let grid = 8 * config.max_iters;
    let run = |(idx, pair): (usize, &EdgePair)| {
        let mut evals = 0;
        let best = PairScan::new(n, t, pair).run(grid, &mut evals);
        (idx, best, evals)
    };
    #[cfg(feature = "parallel")]
    let results: Vec<_> = {
        use rayon::prelude::*;
        pairs.par_iter().enumerate().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = pairs.iter().enumerate().map(run).collect();

    let mut best: Option<(f64, Witness)> = None;
    let mut history = Vec::with_capacity(results.len());
    for (idx, res, evals) in results {
        history.push(StartResult {
            start: idx,
            seeded: true,
            value: res.as_ref().map(|r| r.0),
            evaluations: evals,
        });
        if let Some((v, w)) = res {
            if best.as_ref().is_none_or(|b| v > b.0) {
                best = Some((v, w));
            }
        }
    }
    let (best_value, best_witness) = match best {
        Some((v, w)) => (v, Some(w)),
        None => (0.0, None),
    };
    Ok(SearchReport {
        mode: Mode::Maximize,
        best_value,
        best_witness,
        history,
        gap: None,
    })
}

/// Longest chord in `𝓛_t` over the symmetry representatives of edge pairs.
pub fn search_edge_pair_lines(n: Dim, t: f64, config: &SearchConfig) -> Result<SearchReport> {
    search_edge_pairs_with(n, t, config, &representative_edge_pairs(n))
}
