//! Plain hit-or-miss Monte Carlo volume oracles.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`), seeded with
//! `seed_from_u64(seed)`. Samples are drawn in fixed batches of
//! [`BATCH`]; batch `b` uses stream `b` of that generator, so results are
//! bit-identical across platforms and independent of thread scheduling.
//!
//! Uniform points of `B₁ⁿ` are drawn as `xᵢ = ±Eᵢ / (E₁ + … + Eₙ₊₁)` with
//! i.i.d. `Eⱼ ~ Exp(1)` and independent fair signs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::geometry::{check_len, dot, l1_norm, normalize, Dim, HyperplaneSpec};
use crate::{Error, Result};

/// Samples per independently seeded batch.
pub const BATCH: u64 = 1 << 16;

/// Smallest sample count accepted by the estimators.
pub const MIN_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√samples`.
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// Estimate `scale · p̂` from `hits` successes in `samples` Bernoulli trials.
    fn from_hits(hits: u64, samples: u64, scale: f64, seed: u64) -> Self {
        let n = samples as f64;
        let p = hits as f64 / n;
        let var = if samples > 1 { p * (1.0 - p) * n / (n - 1.0) } else { 0.0 };
        McEstimate {
            mean: scale * p,
            stderr: scale * (var / n).sqrt(),
            samples,
            seed,
        }
    }

    /// `|mean − value|` in units of the standard error (0 when both agree exactly).
    pub fn z_score(&self, value: f64) -> f64 {
        let diff = (self.mean - value).abs();
        if diff == 0.0 {
            0.0
        } else if self.stderr == 0.0 {
            f64::INFINITY
        } else {
            diff / self.stderr
        }
    }

    pub fn agrees_with(&self, value: f64, sigmas: f64) -> bool {
        self.z_score(value) <= sigmas
    }
}

/// The generator for batch/start `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A uniform point of `B₁ⁿ`.
pub fn sample_cross_polytope<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut x: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let extra: f64 = Exp1.sample(rng);
    let total: f64 = x.iter().sum::<f64>() + extra;
    for xi in x.iter_mut() {
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        *xi = sign * *xi / total;
    }
    x
}

/// A uniform point of the centred Euclidean ball of radius `r` in `ℝᵏ`.
pub fn sample_ball<R: Rng + ?Sized>(rng: &mut R, k: usize, r: f64) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..k).map(|_| StandardNormal.sample(rng)).collect();
        if let Ok(dir) = normalize(&g) {
            let u: f64 = rng.random();
            let radius = r * u.powf(1.0 / k as f64);
            return dir.into_iter().map(|v| v * radius).collect();
        }
    }
}

/// Volume of the Euclidean ball of radius `r` in `ℝᵏ`, `π^{k/2} rᵏ / Γ(k/2 + 1)`.
pub fn ball_volume(k: usize, r: f64) -> f64 {
    // V₀ = 1, V₁ = 2, Vₖ = (2π/k) Vₖ₋₂ for the unit ball.
    let mut even = 1.0;
    let mut odd = 2.0;
    for j in 2..=k {
        let next = if j % 2 == 0 { even } else { odd } * 2.0 * std::f64::consts::PI / j as f64;
        if j % 2 == 0 {
            even = next;
        } else {
            odd = next;
        }
    }
    let unit = if k.is_multiple_of(2) { even } else { odd };
    unit * r.powi(k as i32)
}

fn check_samples(samples: u64) -> Result<()> {
    if samples < MIN_SAMPLES {
        return Err(Error::OutOfRange {
            name: "samples",
            value: samples as f64,
            lo: MIN_SAMPLES as f64,
            hi: f64::INFINITY,
        });
    }
    Ok(())
}

/// Counts hits of `trial` over `samples` draws, batch by batch.
fn count_hits<F>(samples: u64, seed: u64, trial: F) -> u64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    let batches = samples.div_ceil(BATCH);
    let run = |b: u64| -> u64 {
        let mut rng = stream_rng(seed, b);
        let len = BATCH.min(samples - b * BATCH);
        (0..len).filter(|_| trial(&mut rng)).count() as u64
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..batches).into_par_iter().map(run).sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..batches).map(run).sum()
    }
}

/// `|B₁ⁿ ∩ {x : predicate(x)}|` estimated from uniform samples of `B₁ⁿ`.
pub fn mc_body_fraction<P>(predicate: P, n: Dim, samples: u64, seed: u64) -> Result<McEstimate>
where
    P: Fn(&[f64]) -> bool + Sync,
{
    check_samples(samples)?;
    let nn = n.get();
    let hits = count_hits(samples, seed, |rng| predicate(&sample_cross_polytope(rng, nn)));
    Ok(McEstimate::from_hits(hits, samples, n.cross_polytope_volume(), seed))
}

/// Orthonormal basis of `a⊥` by Gram–Schmidt on the coordinate vectors.
pub fn orthonormal_complement(a: &[f64]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n.saturating_sub(1));
    // Start from the coordinate axes least aligned with `a`.
    let mut axes: Vec<usize> = (0..n).collect();
    axes.sort_by(|&i, &j| a[i].abs().total_cmp(&a[j].abs()));
    for i in axes {
        if basis.len() + 1 == n {
            break;
        }
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        for _ in 0..2 {
            for q in std::iter::once(a).chain(basis.iter().map(|b| b.as_slice())) {
                let c = dot(&v, q);
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        if dot(&v, &v) > 1e-12 {
            basis.push(normalize(&v).expect("nonzero after the norm check"));
        }
    }
    basis
}

/// `(n−1)`-volume of `B₁ⁿ ∩ H`, sampling the disc of radius `√(1−t²)` about
/// the foot point `t·a` (it contains the section because `B₁ⁿ` lies in the
/// Euclidean unit ball). Works for every offset, including `t ≤ 1/√2`.
pub fn mc_hyperplane_section_volume(h: &HyperplaneSpec, n: Dim, samples: u64, seed: u64) -> Result<McEstimate> {
    check_len(h.normal(), n.get())?;
    check_samples(samples)?;
    let t = h.offset();
    if t >= 1.0 {
        return Ok(McEstimate {
            mean: 0.0,
            stderr: 0.0,
            samples,
            seed,
        });
    }
    let nn = n.get();
    let a = h.normal();
    let frame = orthonormal_complement(a);
    let radius = (1.0 - t * t).sqrt();
    let hits = count_hits(samples, seed, |rng| {
        let y = sample_ball(rng, nn - 1, radius);
        let mut x: Vec<f64> = a.iter().map(|ai| t * ai).collect();
        for (yi, b) in y.iter().zip(&frame) {
            x.iter_mut().zip(b).for_each(|(xj, bj)| *xj += yi * bj);
        }
        l1_norm(&x).map(|v| v <= 1.0).unwrap_or(false)
    });
    Ok(McEstimate::from_hits(hits, samples, ball_volume(nn - 1, radius), seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::basis;

    fn dim(n: usize) -> Dim {
        Dim::new(n).unwrap()
    }

    #[test]
    fn ball_volumes() {
        use std::f64::consts::PI;
        assert!((ball_volume(1, 1.0) - 2.0).abs() < 1e-15);
        assert!((ball_volume(2, 1.0) - PI).abs() < 1e-15);
        assert!((ball_volume(3, 2.0) - 4.0 / 3.0 * PI * 8.0).abs() < 1e-12);
        assert!((ball_volume(4, 1.0) - PI * PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn always_true_is_exact() {
        let est = mc_body_fraction(|_| true, dim(3), 20_000, 1).unwrap();
        assert_eq!(est.mean, 4.0 / 3.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn samples_stay_inside_body() {
        let mut rng = stream_rng(5, 0);
        for _ in 0..10_000 {
            let x = sample_cross_polytope(&mut rng, 4);
            assert!(l1_norm(&x).unwrap() <= 1.0);
        }
    }

    #[test]
    fn rejects_too_few_samples() {
        assert!(mc_body_fraction(|_| true, dim(3), 100, 1).is_err());
    }

    #[test]
    fn complement_is_orthonormal() {
        let a = normalize(&[0.3, -0.5, 0.1, 0.8]).unwrap();
        let b = orthonormal_complement(&a);
        assert_eq!(b.len(), 3);
        for (i, u) in b.iter().enumerate() {
            assert!(dot(u, &a).abs() < 1e-14);
            assert!((dot(u, u) - 1.0).abs() < 1e-14);
            for w in &b[i + 1..] {
                assert!(dot(u, w).abs() < 1e-14);
            }
        }
        assert_eq!(orthonormal_complement(&basis(3, 0)).len(), 2);
    }

    #[test]
    fn deterministic_under_seed() {
        let a = mc_body_fraction(|x| x[0] > 0.3, dim(3), 200_000, 42).unwrap();
        let b = mc_body_fraction(|x| x[0] > 0.3, dim(3), 200_000, 42).unwrap();
        assert_eq!(a, b);
        let c = mc_body_fraction(|x| x[0] > 0.3, dim(3), 200_000, 43).unwrap();
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn empty_hyperplane_section() {
        let h = HyperplaneSpec::new(basis(3, 0), 1.0).unwrap();
        let est = mc_hyperplane_section_volume(&h, dim(3), 10_000, 0).unwrap();
        assert_eq!(est.mean, 0.0);
    }
}
