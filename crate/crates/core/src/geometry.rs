//! Points, lines, hyperplanes and slabs in `ℝⁿ`, plus the elementary
//! predicates the section code is built on.

use serde::{Deserialize, Serialize};

use crate::{Error, Result, EXACT_TOL};

/// Ambient dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Dim(usize);

impl Dim {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionTooSmall { n, min: 1 });
        }
        Ok(Dim(n))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Fails unless `n >= min`.
    pub fn require(self, min: usize) -> Result<Self> {
        if self.0 < min {
            Err(Error::DimensionTooSmall { n: self.0, min })
        } else {
            Ok(self)
        }
    }

    /// Volume of `B₁ⁿ`, `2ⁿ/n!`.
    pub fn cross_polytope_volume(self) -> f64 {
        (1..=self.0).fold(1.0, |acc, i| acc * 2.0 / i as f64)
    }
}

impl std::fmt::Display for Dim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `a + s·b`
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

/// Unit vector `eᵢ` in `ℝⁿ` (zero-based index).
pub fn basis(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

pub fn normalize(a: &[f64]) -> Result<Vec<f64>> {
    check_finite(a)?;
    let len = norm(a);
    if len == 0.0 {
        return Err(Error::Degenerate("zero vector cannot be normalized"));
    }
    Ok(scale(a, 1.0 / len))
}

pub(crate) fn check_finite(x: &[f64]) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub(crate) fn check_unit(v: &[f64]) -> Result<()> {
    check_finite(v)?;
    let len = norm(v);
    if (len - 1.0).abs() > EXACT_TOL {
        return Err(Error::NotUnit { norm: len });
    }
    Ok(())
}

pub(crate) fn check_len(x: &[f64], n: usize) -> Result<()> {
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    Ok(())
}

/// `Σ|xᵢ|`; `x ∈ B₁ⁿ` iff this is at most one.
pub fn l1_norm(x: &[f64]) -> Result<f64> {
    check_finite(x)?;
    Ok(x.iter().map(|v| v.abs()).sum())
}

/// Distance from the origin to the line through `a` and `b`,
/// `√(|a|²|b|² − ⟨a,b⟩²) / |a − b|`.
pub fn line_distance_to_origin(a: &[f64], b: &[f64]) -> Result<f64> {
    check_finite(a)?;
    check_finite(b)?;
    check_len(b, a.len())?;
    let diff = sub(a, b);
    let gap = norm(&diff);
    if gap == 0.0 {
        return Err(Error::Degenerate("line through two coincident points"));
    }
    let ab = dot(a, b);
    // Gram determinant; clamp the cancellation noise for nearly collinear-with-origin pairs.
    let gram = (dot(a, a) * dot(b, b) - ab * ab).max(0.0);
    Ok(gram.sqrt() / gap)
}

/// A line `{base + s·direction}` in canonical form: `direction` is a unit
/// vector whose first nonzero coordinate is positive and `base ⊥ direction`,
/// so `|base|` is the distance of the line to the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineSpec {
    base: Vec<f64>,
    direction: Vec<f64>,
}

/// Unnormalized ways of describing a line.
#[derive(Debug, Clone, PartialEq)]
pub enum RawLine {
    Points(Vec<f64>, Vec<f64>),
    BaseDirection(Vec<f64>, Vec<f64>),
}

impl LineSpec {
    /// The line through two distinct points.
    pub fn through_points(a: &[f64], b: &[f64]) -> Result<Self> {
        check_finite(a)?;
        check_finite(b)?;
        check_len(b, a.len())?;
        let d = sub(b, a);
        if norm(&d) == 0.0 {
            return Err(Error::Degenerate("line through two coincident points"));
        }
        Self::from_base_direction(a, &d)
    }

    /// Any point on the line plus any nonzero direction.
    pub fn from_base_direction(point: &[f64], direction: &[f64]) -> Result<Self> {
        check_finite(point)?;
        check_len(direction, point.len())?;
        let d = orient(normalize(direction)?);
        let foot = axpy(point, -dot(point, &d), &d);
        Ok(LineSpec {
            base: foot,
            direction: d,
        })
    }

    /// The line `{t·u + s·d}` for unit `u ⊥ d`. Both vectors are re-orthonormalized
    /// so that the stored base has norm `t` up to rounding of `t·uᵢ`; `u` is
    /// ignored when `t = 0`.
    pub fn at_distance(t: f64, u: &[f64], d: &[f64]) -> Result<Self> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::OutOfRange {
                name: "t",
                value: t,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        check_len(d, u.len())?;
        let d = orient(normalize(d)?);
        check_finite(u)?;
        if t == 0.0 {
            return Ok(LineSpec {
                base: vec![0.0; d.len()],
                direction: d,
            });
        }
        let u_perp = axpy(u, -dot(u, &d), &d);
        if norm(&u_perp) <= EXACT_TOL * norm(u) {
            return Err(Error::Degenerate("offset direction parallel to line direction"));
        }
        let u_hat = normalize(&u_perp)?;
        Ok(LineSpec {
            base: scale(&u_hat, t),
            direction: d,
        })
    }

    pub fn canonicalize(raw: &RawLine) -> Result<Self> {
        match raw {
            RawLine::Points(a, b) => Self::through_points(a, b),
            RawLine::BaseDirection(p, d) => Self::from_base_direction(p, d),
        }
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    /// Distance to the origin; the stored base is the perpendicular foot.
    pub fn distance(&self) -> f64 {
        norm(&self.base)
    }

    pub fn point_at(&self, s: f64) -> Vec<f64> {
        axpy(&self.base, s, &self.direction)
    }

    /// Distance recomputed by projecting the origin onto the line, independent of
    /// the stored canonical form.
    pub fn projected_distance(&self) -> f64 {
        let s = -dot(&self.base, &self.direction) / dot(&self.direction, &self.direction);
        norm(&self.point_at(s))
    }
}

/// Flip `d` so its first nonzero coordinate is positive.
fn orient(mut d: Vec<f64>) -> Vec<f64> {
    if let Some(first) = d.iter().copied().find(|v| *v != 0.0) {
        if first < 0.0 {
            d.iter_mut().for_each(|v| *v = -*v);
        }
    }
    d
}

/// The hyperplane `⟨normal, x⟩ = offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperplaneSpec {
    normal: Vec<f64>,
    offset: f64,
}

impl HyperplaneSpec {
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        check_unit(&normal)?;
        check_offset(offset)?;
        Ok(HyperplaneSpec { normal, offset })
    }

    /// Normalizes `normal` first; for user-typed coordinates.
    pub fn normalized(normal: &[f64], offset: f64) -> Result<Self> {
        Self::new(normalize(normal)?, offset)
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }
}

/// The symmetric slab `{x : |⟨normal, x⟩| ≤ half_width}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlabSpec {
    normal: Vec<f64>,
    half_width: f64,
}

impl SlabSpec {
    pub fn new(normal: Vec<f64>, half_width: f64) -> Result<Self> {
        check_unit(&normal)?;
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::OutOfRange {
                name: "half-width",
                value: half_width,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        Ok(SlabSpec { normal, half_width })
    }

    pub fn normalized(normal: &[f64], half_width: f64) -> Result<Self> {
        Self::new(normalize(normal)?, half_width)
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// The bounding hyperplane `⟨normal, x⟩ = half_width`.
    pub fn upper_face(&self) -> HyperplaneSpec {
        HyperplaneSpec {
            normal: self.normal.clone(),
            offset: self.half_width,
        }
    }
}

fn check_offset(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::OutOfRange {
            name: "offset",
            value: t,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    Ok(())
}

/// Orthogonal projection onto `span{u_k, v_k}`: the first `k` coordinates are
/// replaced by their mean, the remaining `n − k` by theirs.
pub fn project_qk(x: &[f64], k: usize) -> Result<Vec<f64>> {
    check_finite(x)?;
    let n = x.len();
    if k == 0 || k >= n {
        return Err(Error::OutOfRange {
            name: "k",
            value: k as f64,
            lo: 1.0,
            hi: (n as f64 - 1.0).max(1.0),
        });
    }
    let head = x[..k].iter().sum::<f64>() / k as f64;
    let tail = x[k..].iter().sum::<f64>() / (n - k) as f64;
    Ok((0..n).map(|i| if i < k { head } else { tail }).collect())
}
