//! Extremal section sizes as explicit functions of `(n, t)`, each paired with
//! a line or hyperplane that realizes it.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use crate::geometry::{basis, normalize, scale, Dim, HyperplaneSpec, LineSpec, SlabSpec};
use crate::sections::{self, Witness};
use crate::{Error, Result, EXACT_TOL};

/// An extremal value, the piece of the piecewise formula it came from, and a witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalAnswer {
    pub value: f64,
    pub branch: String,
    pub witness: Witness,
}

fn check_unit_interval(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(())
}

fn check_hyperplane_regime(n: Dim, t: f64) -> Result<()> {
    n.require(3)?;
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    if t <= FRAC_1_SQRT_2 {
        return Err(Error::UnsupportedRegime { t });
    }
    if t > 1.0 {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            lo: FRAC_1_SQRT_2,
            hi: 1.0,
        });
    }
    Ok(())
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

/// `T_n(k) = (√((k+1)(n−k)) + √(k(n−k−1))) / (n(√k + √(k+1)))` for `k = 0..n−1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdTable {
    n: usize,
    values: Vec<f64>,
}

impl ThresholdTable {
    pub fn new(n: Dim) -> Result<Self> {
        let n = n.require(2)?.get();
        let nf = n as f64;
        let values = (0..n)
            .map(|k| {
                let k = k as f64;
                (((k + 1.0) * (nf - k)).sqrt() + (k * (nf - k - 1.0)).sqrt())
                    / (nf * (k.sqrt() + (k + 1.0).sqrt()))
            })
            .collect();
        Ok(ThresholdTable { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, k: usize) -> f64 {
        self.values[k]
    }

    /// The piece of the minimal-line formula that applies at `t ≤ 1/√n`:
    /// `None` for the facet-to-facet piece `t < T_n(n−1)`, otherwise the `k`
    /// with `t ∈ [T_n(k), T_n(k−1)]` (an exact threshold value goes to the
    /// piece on its right).
    pub fn branch_for(&self, t: f64) -> Option<usize> {
        (1..self.n).find(|&k| t >= self.values[k])
    }
}

/// The projection plane `span{u_k, v_k}` and its diamond `conv{±u_k, ±v_k}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiamondData {
    pub n: usize,
    pub k: usize,
    /// `(e₁ + … + e_k)/k`
    pub u: Vec<f64>,
    /// `(e_{k+1} + … + eₙ)/(n − k)`
    pub v: Vec<f64>,
}

impl DiamondData {
    pub fn new(n: Dim, k: usize) -> Result<Self> {
        let n = n.require(2)?.get();
        if k == 0 || k >= n {
            return Err(Error::OutOfRange {
                name: "k",
                value: k as f64,
                lo: 1.0,
                hi: (n - 1) as f64,
            });
        }
        let u = (0..n).map(|i| if i < k { 1.0 / k as f64 } else { 0.0 }).collect();
        let v = (0..n)
            .map(|i| if i >= k { 1.0 / (n - k) as f64 } else { 0.0 })
            .collect();
        Ok(DiamondData { n, k, u, v })
    }

    /// `|u_k| = 1/√k`
    pub fn u_norm(&self) -> f64 {
        1.0 / (self.k as f64).sqrt()
    }

    /// `|v_k| = 1/√(n−k)`
    pub fn v_norm(&self) -> f64 {
        1.0 / ((self.n - self.k) as f64).sqrt()
    }

    /// `α·u_k + β·v_k`
    pub fn combine(&self, alpha: f64, beta: f64) -> Vec<f64> {
        self.u.iter().zip(&self.v).map(|(u, v)| alpha * u + beta * v).collect()
    }
}

/// Longest chord of `B₁ⁿ` over lines at distance `t`:
///
/// ```text
/// 2/(t + √(1−t²))   t ∈ [0, 1/√2]
/// t − √(t² − 1/2)   t ∈ (1/√2, 3/4]
/// 2 − 2t            t ∈ (3/4, 1]
/// ```
///
/// Every witness lies in `span{e₁, e₂}`.
pub fn max_line_length(n: Dim, t: f64) -> Result<ExtremalAnswer> {
    let n = n.require(2)?.get();
    check_unit_interval(t)?;
    let e1 = basis(n, 0);
    let in_plane = |x: f64, y: f64| {
        let mut p = vec![0.0; n];
        p[0] = x;
        p[1] = y;
        p
    };
    let (value, branch, line) = if t <= FRAC_1_SQRT_2 {
        // Chord from the vertex e₁ to the opposite edge [−e₁, e₂].
        let c = (1.0 - t * t).sqrt();
        let line = LineSpec::from_base_direction(&e1, &in_plane(-c, t))?;
        (2.0 / (t + c), "vertex-chord", line)
    } else if t <= 0.75 {
        // Corner chord at e₁ whose normal makes cos γ = t + √(t² − 1/2) with e₁.
        let r = (t * t - 0.5).sqrt();
        let x = (t + r).min(1.0);
        let y = (1.0 - x * x).max(0.0).sqrt();
        let line = LineSpec::at_distance(t, &in_plane(x, y), &in_plane(-y, x))?;
        (t - r, "tilted-corner", line)
    } else {
        let line = LineSpec::at_distance(t, &e1, &in_plane(0.0, 1.0))?;
        (2.0 - 2.0 * t, "perpendicular-corner", line)
    };
    Ok(ExtremalAnswer {
        value,
        branch: branch.to_string(),
        witness: Witness::Line(line),
    })
}

/// `m_k(t) = 2(1 − t√(n−k))/√k`, the shortest chord of the diamond
/// `conv{±u_k, ±v_k}` crossing its two upper edges at distance `t`.
pub fn mk(n: Dim, k: usize, t: f64) -> Result<f64> {
    let n = n.require(2)?.get();
    if k == 0 || k >= n {
        return Err(Error::OutOfRange {
            name: "k",
            value: k as f64,
            lo: 1.0,
            hi: (n - 1) as f64,
        });
    }
    let limit = 1.0 / (n as f64).sqrt();
    if !(t >= 0.0 && t <= limit + EXACT_TOL) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            lo: 0.0,
            hi: limit,
        });
    }
    Ok(2.0 * (1.0 - t * ((n - k) as f64).sqrt()) / (k as f64).sqrt())
}

/// Shortest chord of `B₁ⁿ` over lines at distance `t`:
///
/// ```text
/// 2/√n                    t ∈ [0, T_n(n−1)]
/// 2(1 − t√(n−k))/√k       t ∈ [T_n(k), T_n(k−1)],  k = n−1, …, 1
/// 0                       t ∈ (1/√n, 1]
/// ```
pub fn min_line_length(n: Dim, t: f64) -> Result<ExtremalAnswer> {
    let nn = n.require(2)?.get();
    check_unit_interval(t)?;
    let nf = nn as f64;
    let ones = vec![1.0; nn];
    let table = ThresholdTable::new(n)?;

    if t > 1.0 / nf.sqrt() {
        // Inside the hyperplane Σxᵢ = t√n > 1, hence disjoint from the body.
        let u = scale(&ones, 1.0 / nf.sqrt());
        let mut d = vec![0.0; nn];
        d[0] = 1.0;
        d[1] = -1.0;
        let line = LineSpec::at_distance(t, &u, &d)?;
        return Ok(ExtremalAnswer {
            value: 0.0,
            branch: "disjoint".to_string(),
            witness: Witness::Line(line),
        });
    }

    match table.branch_for(t) {
        None => {
            // Perpendicular crossing of the parallel facets x ≥ 0 and x ≤ 0.
            let theta = t * (nf * (nf - 1.0)).sqrt();
            let a: Vec<f64> = (0..nn)
                .map(|i| {
                    let head = if i + 1 < nn { theta / (nf - 1.0) } else { 0.0 };
                    head + (1.0 - theta) / nf
                })
                .collect();
            let b: Vec<f64> = a.iter().map(|x| x - 2.0 / nf).collect();
            Ok(ExtremalAnswer {
                value: 2.0 / nf.sqrt(),
                branch: "facet-to-facet".to_string(),
                witness: Witness::Line(LineSpec::through_points(&a, &b)?),
            })
        }
        Some(k) => {
            let diamond = DiamondData::new(n, k)?;
            let theta = t * ((nn - k) as f64).sqrt();
            let a = diamond.combine(1.0 - theta, theta);
            let b = diamond.combine(-(1.0 - theta), theta);
            Ok(ExtremalAnswer {
                value: mk(n, k, t)?,
                branch: format!("k={k}"),
                witness: Witness::Line(LineSpec::through_points(&a, &b)?),
            })
        }
    }
}

/// Largest `(n−1)`-volume of `B₁ⁿ ∩ H` over hyperplanes at distance
/// `t ∈ (1/√2, 1]`: `2ⁿ⁻¹(1−t)ⁿ⁻¹/(n−1)!`, attained at `H = {x₁ = t}`.
pub fn max_hyperplane_volume(n: Dim, t: f64) -> Result<ExtremalAnswer> {
    check_hyperplane_regime(n, t)?;
    let n = n.get();
    let value = 2f64.powi(n as i32 - 1) * (1.0 - t).powi(n as i32 - 1) / factorial(n - 1);
    Ok(ExtremalAnswer {
        value,
        branch: "coordinate".to_string(),
        witness: Witness::Hyperplane(HyperplaneSpec::new(basis(n, 0), t)?),
    })
}

/// Smallest volume of `B₁ⁿ ∩ {|⟨x, a⟩| ≤ t}` for `t ∈ (1/√2, 1]`:
/// `(2ⁿ/n!)(1 − (1−t)ⁿ)`, attained at `a = e₁`.
pub fn min_slab_volume(n: Dim, t: f64) -> Result<ExtremalAnswer> {
    check_hyperplane_regime(n, t)?;
    let value = n.cross_polytope_volume() * (1.0 - (1.0 - t).powi(n.get() as i32));
    Ok(ExtremalAnswer {
        value,
        branch: "coordinate".to_string(),
        witness: Witness::Slab(SlabSpec::new(basis(n.get(), 0), t)?),
    })
}

/// `(min, max)` chord lengths of `S_n = conv{e₁, …, eₙ}` over lines in its
/// hyperplane through the centroid: `(2√2/n, √(n/(n−1)))`.
pub fn simplex_extremes(n: Dim) -> Result<(f64, f64)> {
    let nf = n.require(3)?.get() as f64;
    Ok((2.0 * SQRT_2 / nf, (nf / (nf - 1.0)).sqrt()))
}

/// Edge direction `(e₁ − e₂)/√2`, a minimizer for the central simplex chord.
pub fn simplex_min_direction(n: Dim) -> Result<Vec<f64>> {
    let n = n.require(3)?.get();
    let mut v = vec![0.0; n];
    v[0] = FRAC_1_SQRT_2;
    v[1] = -FRAC_1_SQRT_2;
    Ok(v)
}

/// Direction from the centroid towards the vertex `e₁`, a maximizer.
pub fn simplex_max_direction(n: Dim) -> Result<Vec<f64>> {
    let nn = n.require(3)?.get();
    let nf = nn as f64;
    let raw: Vec<f64> = (0..nn).map(|i| if i == 0 { 1.0 - 1.0 / nf } else { -1.0 / nf }).collect();
    normalize(&raw)
}

/// Evaluates a witness through the exact section engine.
pub fn evaluate_witness(witness: &Witness) -> Result<f64> {
    match witness {
        Witness::Line(l) => Ok(sections::line_section_length(l, Dim::new(l.dim())?)?.value),
        Witness::Hyperplane(h) => Ok(sections::hyperplane_section_volume(h, Dim::new(h.dim())?)?.value),
        Witness::Slab(s) => Ok(sections::slab_volume(s, Dim::new(s.dim())?)?.value),
        Witness::SimplexChord(v) => sections::simplex_central_line_length(v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::line_distance_to_origin;
    use crate::sections::{isosceles_min_chord, simplex_central_line_length, simplex_chord_through_centroid};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn dim(n: usize) -> Dim {
        Dim::new(n).unwrap()
    }

    fn witness_line(a: &ExtremalAnswer) -> &LineSpec {
        match &a.witness {
            Witness::Line(l) => l,
            other => panic!("expected a line witness, got {other:?}"),
        }
    }

    #[test]
    fn max_line_examples() {
        assert_abs_diff_eq!(max_line_length(dim(3), 0.0).unwrap().value, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(max_line_length(dim(3), FRAC_1_SQRT_2).unwrap().value, SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(max_line_length(dim(3), 0.9).unwrap().value, 0.2, epsilon = 1e-15);
        let v = max_line_length(dim(3), 0.74).unwrap().value;
        assert_abs_diff_eq!(v, 0.74 - (0.74f64 * 0.74 - 0.5).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(v, 0.5218257577, epsilon = 1e-10);
        assert!(max_line_length(dim(3), 1.1).is_err());
        assert!(max_line_length(dim(3), -0.1).is_err());
        assert!(max_line_length(dim(1), 0.5).is_err());
    }

    #[test]
    fn min_line_examples() {
        assert_abs_diff_eq!(min_line_length(dim(3), 0.1).unwrap().value, 2.0 / 3f64.sqrt(), epsilon = 1e-15);
        let a = min_line_length(dim(3), 0.5).unwrap();
        assert_eq!(a.branch, "k=1");
        assert_abs_diff_eq!(a.value, 2.0 - SQRT_2, epsilon = 1e-15);
        assert_eq!(min_line_length(dim(3), 0.7).unwrap().value, 0.0);

        let table = ThresholdTable::new(dim(5)).unwrap();
        let k = table.branch_for(0.3).unwrap();
        // T_5(2) ≈ 0.31784 > 0.3 ≥ T_5(3) ≈ 0.24437.
        assert_eq!(k, 3);
        let want = 2.0 * (1.0 - 0.3 * 2f64.sqrt()) / 3f64.sqrt();
        assert_abs_diff_eq!(min_line_length(dim(5), 0.3).unwrap().value, want, epsilon = 1e-15);
    }

    #[test]
    fn thresholds_n3() {
        let t = ThresholdTable::new(dim(3)).unwrap();
        assert_abs_diff_eq!(t.get(0), 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(t.get(1), SQRT_2 - 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.get(2), 0.1835, epsilon = 1e-4);
    }

    #[test]
    fn thresholds_strictly_decrease() {
        for n in 2..=40 {
            let t = ThresholdTable::new(dim(n)).unwrap();
            assert_abs_diff_eq!(t.get(0), 1.0 / (n as f64).sqrt(), epsilon = 1e-14);
            assert!(t.values().windows(2).all(|w| w[0] > w[1]), "n = {n}");
            assert!(t.get(n - 1) > 0.0);
        }
    }

    #[test]
    fn branches_agree_at_thresholds() {
        for n in 2..=12 {
            let table = ThresholdTable::new(dim(n)).unwrap();
            // At T_n(k) the k and k+1 pieces meet; m_n ≡ 2/√n closes the chain.
            for k in 1..n {
                let t = table.get(k);
                let left = if k + 1 < n { mk(dim(n), k + 1, t).unwrap() } else { 2.0 / (n as f64).sqrt() };
                assert_abs_diff_eq!(mk(dim(n), k, t).unwrap(), left, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn min_line_jump_at_inradius() {
        for n in 2..=8 {
            let nf = n as f64;
            let edge = 1.0 / nf.sqrt();
            let at = min_line_length(dim(n), edge).unwrap().value;
            assert_abs_diff_eq!(at, 2.0 * (1.0 - ((nf - 1.0) / nf).sqrt()), epsilon = 1e-14);
            let after = min_line_length(dim(n), edge + 1e-12).unwrap().value;
            assert_eq!(after, 0.0);
            // Continuity on [0, 1/√n]: small steps make small changes.
            let mut prev = min_line_length(dim(n), 0.0).unwrap().value;
            let steps = 20_000;
            for i in 1..=steps {
                let t = edge * i as f64 / steps as f64;
                let cur = min_line_length(dim(n), t).unwrap().value;
                assert!((cur - prev).abs() < 1e-3, "n = {n}, t = {t}");
                prev = cur;
            }
        }
    }

    #[test]
    fn mk_matches_isosceles_chord() {
        for n in 2..=9 {
            for k in 1..n {
                for i in 0..=50 {
                    let t = i as f64 / 50.0 / (n as f64).sqrt();
                    let via_triangle =
                        isosceles_min_chord(1.0 / (k as f64).sqrt(), 1.0 / ((n - k) as f64).sqrt(), t).unwrap();
                    assert_abs_diff_eq!(mk(dim(n), k, t).unwrap(), via_triangle, epsilon = 1e-14);
                }
            }
        }
        assert_abs_diff_eq!(mk(dim(3), 1, 0.5).unwrap(), 2.0 - SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(mk(dim(4), 2, 0.0).unwrap(), SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(mk(dim(4), 3, 0.25).unwrap(), 0.8660254, epsilon = 1e-7);
        assert!(mk(dim(4), 4, 0.1).is_err());
        assert!(mk(dim(4), 2, 0.6).is_err());
    }

    /// Minimizes the tilted-chord formula over θ by dense sampling; independent of `mk`.
    #[test]
    fn mk_matches_tilted_chord_minimum() {
        let (n, k, t) = (4usize, 3usize, 0.25);
        let (u, v) = (1.0 / (k as f64).sqrt(), 1.0 / ((n - k) as f64).sqrt());
        let alpha = (u / v).atan();
        let limit = std::f64::consts::FRAC_PI_2 - alpha;
        let best = (0..100_000)
            .map(|i| limit * i as f64 / 100_000.0)
            .map(|theta| sections::isosceles_tilted_chord(u, v, t, theta).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert_abs_diff_eq!(best, mk(dim(n), k, t).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn line_witnesses_reproduce_values() {
        for n in 2..=7 {
            for i in 0..=400 {
                let t = i as f64 / 400.0;
                for answer in [max_line_length(dim(n), t).unwrap(), min_line_length(dim(n), t).unwrap()] {
                    let line = witness_line(&answer);
                    assert_abs_diff_eq!(line.distance(), t, epsilon = 1e-12);
                    let got = evaluate_witness(&answer.witness).unwrap();
                    assert!(
                        (got - answer.value).abs() <= 1e-9,
                        "n = {n}, t = {t}, branch {}: witness {got} vs {}",
                        answer.branch,
                        answer.value
                    );
                }
            }
        }
    }

    #[test]
    fn min_line_witness_endpoints_at_distance_t() {
        // Gram distance of the two constructed endpoints.
        for n in 2..=6 {
            let table = ThresholdTable::new(dim(n)).unwrap();
            for k in 1..n {
                let t = 0.5 * (table.get(k) + table.get(k - 1));
                let diamond = DiamondData::new(dim(n), k).unwrap();
                let theta = t * ((n - k) as f64).sqrt();
                let a = diamond.combine(1.0 - theta, theta);
                let b = diamond.combine(theta - 1.0, theta);
                assert_abs_diff_eq!(line_distance_to_origin(&a, &b).unwrap(), t, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn max_line_nonincreasing_on_branches() {
        for (lo, hi) in [(0.0, FRAC_1_SQRT_2), (FRAC_1_SQRT_2 + 1e-9, 0.75), (0.75 + 1e-9, 1.0)] {
            let mut prev = f64::INFINITY;
            for i in 0..=1000 {
                let t = lo + (hi - lo) * i as f64 / 1000.0;
                let v = max_line_length(dim(3), t).unwrap().value;
                assert!(v <= prev + 1e-15);
                prev = v;
            }
        }
    }

    #[test]
    fn hyperplane_and_slab_examples() {
        let a = max_hyperplane_volume(dim(3), 0.8).unwrap();
        assert_relative_eq!(a.value, 0.08, max_relative = 1e-13);
        assert_relative_eq!(evaluate_witness(&a.witness).unwrap(), a.value, max_relative = 1e-12);
        assert_abs_diff_eq!(max_hyperplane_volume(dim(4), 0.9).unwrap().value, 0.0013333333, epsilon = 1e-10);
        assert_eq!(max_hyperplane_volume(dim(3), 1.0).unwrap().value, 0.0);
        assert!(max_hyperplane_volume(dim(3), 0.7).is_err());
        assert!(max_hyperplane_volume(dim(2), 0.8).is_err());

        let s = min_slab_volume(dim(3), 0.8).unwrap();
        assert_abs_diff_eq!(s.value, 1.3226667, epsilon = 1e-7);
        assert_abs_diff_eq!(evaluate_witness(&s.witness).unwrap(), s.value, epsilon = 1e-12);
        assert_abs_diff_eq!(min_slab_volume(dim(3), 1.0).unwrap().value, 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            min_slab_volume(dim(5), 0.75).unwrap().value,
            (32.0 / 120.0) * (1.0 - 0.25f64.powi(5)),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(min_slab_volume(dim(5), 0.75).unwrap().value, 0.2664063, epsilon = 1e-7);
        assert!(min_slab_volume(dim(3), 0.5).is_err());
    }

    #[test]
    fn simplex_extreme_values_and_witnesses() {
        let (lo, hi) = simplex_extremes(dim(3)).unwrap();
        assert_abs_diff_eq!(lo, 0.9428090, epsilon = 1e-7);
        assert_abs_diff_eq!(hi, 1.2247449, epsilon = 1e-7);
        let (lo, hi) = simplex_extremes(dim(4)).unwrap();
        assert_abs_diff_eq!(lo, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-7);
        assert_abs_diff_eq!(hi, 1.1547005, epsilon = 1e-7);
        let (lo, hi) = simplex_extremes(dim(10_000)).unwrap();
        assert!(lo < 1e-3 && (hi - 1.0).abs() < 1e-4);
        assert!(simplex_extremes(dim(2)).is_err());

        for n in 3..=10 {
            let (lo, hi) = simplex_extremes(dim(n)).unwrap();
            let vmin = simplex_min_direction(dim(n)).unwrap();
            assert_abs_diff_eq!(simplex_central_line_length(&vmin).unwrap(), lo, epsilon = 1e-14);
            let vmax = simplex_max_direction(dim(n)).unwrap();
            assert_abs_diff_eq!(simplex_central_line_length(&vmax).unwrap(), hi, epsilon = 1e-14);
            assert_abs_diff_eq!(simplex_chord_through_centroid(&basis(n, 0)).unwrap(), hi, epsilon = 1e-14);
        }
    }

    #[test]
    fn diamond_vectors() {
        let d = DiamondData::new(dim(5), 2).unwrap();
        assert_abs_diff_eq!(crate::geometry::norm(&d.u), d.u_norm(), epsilon = 1e-15);
        assert_abs_diff_eq!(crate::geometry::norm(&d.v), d.v_norm(), epsilon = 1e-15);
        assert_abs_diff_eq!(crate::geometry::dot(&d.u, &d.v), 0.0, epsilon = 1e-15);
        // Q_k e_i lands on ±u_k or ±v_k.
        for i in 0..5 {
            let q = crate::geometry::project_qk(&basis(5, i), 2).unwrap();
            let want = if i < 2 { &d.u } else { &d.v };
            assert_eq!(&q, want);
        }
        assert!(DiamondData::new(dim(5), 5).is_err());
    }
}
