//! Exact section lengths and volumes.
//!
//! Nothing here searches or samples: line sections come from breakpoint
//! enumeration of the piecewise-linear function `s ↦ ‖base + s·dir‖₁`, and
//! hyperplane/slab volumes from the chopped-pyramid formula, which is valid
//! whenever the hyperplane separates a single vertex (offset `t > 1/√2`).

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

use crate::geometry::{check_finite, check_len, check_unit, Dim, HyperplaneSpec, LineSpec, SlabSpec};
use crate::{Error, Result, EXACT_TOL};

/// How a [`SectionResult`] value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    ExactGeometry,
    MonteCarlo,
    Search,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::ExactGeometry => "exact-geometry",
            Method::MonteCarlo => "monte-carlo",
            Method::Search => "search",
        }
    }
}

/// The object realizing a section value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Witness {
    Line(LineSpec),
    Hyperplane(HyperplaneSpec),
    Slab(SlabSpec),
    /// Unit direction `v` (`Σvᵢ = 0`) of a line through the centroid of `conv{e₁, …, eₙ}`.
    SimplexChord(Vec<f64>),
}

/// A length or `(n−1)`-volume plus where it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionResult {
    pub value: f64,
    pub witness: Option<Witness>,
    pub method: Method,
    /// Set when the body is only touched (line or hyperplane in a supporting position).
    pub tangent: bool,
}

impl SectionResult {
    fn exact(value: f64, witness: Witness, tangent: bool) -> Self {
        SectionResult {
            value,
            witness: Some(witness),
            method: Method::ExactGeometry,
            tangent,
        }
    }
}

/// Parameter interval `[lo, hi]` of `B₁ⁿ ∩ line` along the unit direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub lo: f64,
    pub hi: f64,
    pub tangent: bool,
}

impl Chord {
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Intersects a line with `B₁ⁿ`. Returns `None` when the line misses the body.
///
/// `f(s) = ‖base + s·dir‖₁` is convex and piecewise linear with kinks at
/// `s = −baseᵢ/dirᵢ`. Its minimum sits at a kink; from there the level set
/// `f = 1` is found by walking outward along the sorted kinks and solving on
/// the first linear piece that crosses level one. When the minimum equals one
/// the line is a supporting line and the chord is the set where `f` is
/// minimal: a single point, or a segment lying in a face.
pub fn line_chord(line: &LineSpec) -> Option<Chord> {
    let base = line.base();
    let dir = line.direction();
    let mut kinks: Vec<f64> = base
        .iter()
        .zip(dir)
        .filter(|(_, d)| **d != 0.0)
        .map(|(b, d)| -b / d)
        .collect();
    kinks.sort_by(|a, b| a.total_cmp(b));
    kinks.dedup();
    if kinks.is_empty() {
        return None;
    }

    let f = |s: f64| -> f64 { base.iter().zip(dir).map(|(b, d)| (b + s * d).abs()).sum() };
    let values: Vec<f64> = kinks.iter().map(|&s| f(s)).collect();
    let (argmin, fmin) = values
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one kink");

    if fmin > 1.0 + EXACT_TOL {
        return None;
    }
    if fmin >= 1.0 - EXACT_TOL {
        let flat = fmin + EXACT_TOL;
        let mut lo = argmin;
        while lo > 0 && values[lo - 1] <= flat {
            lo -= 1;
        }
        let mut hi = argmin;
        while hi + 1 < kinks.len() && values[hi + 1] <= flat {
            hi += 1;
        }
        return Some(Chord {
            lo: kinks[lo],
            hi: kinks[hi],
            tangent: true,
        });
    }

    // Beyond the outermost kinks every coordinate term is monotone, so f has slope Σ|dᵢ|.
    let outer_slope: f64 = dir.iter().map(|d| d.abs()).sum();

    let mut j = argmin;
    while j + 1 < kinks.len() && values[j + 1] < 1.0 {
        j += 1;
    }
    let hi = if j + 1 < kinks.len() {
        let (s0, s1, f0, f1) = (kinks[j], kinks[j + 1], values[j], values[j + 1]);
        s0 + (1.0 - f0) * (s1 - s0) / (f1 - f0)
    } else {
        kinks[j] + (1.0 - values[j]) / outer_slope
    };

    let mut j = argmin;
    while j > 0 && values[j - 1] < 1.0 {
        j -= 1;
    }
    let lo = if j > 0 {
        let (s0, s1, f0, f1) = (kinks[j], kinks[j - 1], values[j], values[j - 1]);
        s0 + (1.0 - f0) * (s1 - s0) / (f1 - f0)
    } else {
        kinks[j] - (1.0 - values[j]) / outer_slope
    };

    Some(Chord {
        lo,
        hi,
        tangent: false,
    })
}

/// Length of `B₁ⁿ ∩ line`; zero for lines that miss the body or only touch it at a point.
pub fn line_section_length(line: &LineSpec, n: Dim) -> Result<SectionResult> {
    check_len(line.base(), n.get())?;
    let (value, tangent) = match line_chord(line) {
        Some(chord) => (chord.length(), chord.tangent),
        None => (0.0, false),
    };
    Ok(SectionResult::exact(value, Witness::Line(line.clone()), tangent))
}

/// Signed permutation moving the vertex cut off by a hyperplane to `e₁`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexFrame {
    /// `order[0]` is the original index of the separated vertex's axis.
    pub order: Vec<usize>,
    /// Original signs of the normal's coordinates, `±1`.
    pub signs: Vec<f64>,
}

impl VertexFrame {
    fn for_normal(a: &[f64]) -> (Self, Vec<f64>) {
        let lead = a
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()).then(y.0.cmp(&x.0)))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let order: Vec<usize> = std::iter::once(lead)
            .chain((0..a.len()).filter(|&i| i != lead))
            .collect();
        let signs = a.iter().map(|v| if *v < 0.0 { -1.0 } else { 1.0 }).collect();
        let canonical = order.iter().map(|&i| a[i].abs()).collect();
        (VertexFrame { order, signs }, canonical)
    }

    /// The separated vertex `±e_j` in original coordinates.
    pub fn separated_vertex(&self) -> Vec<f64> {
        let j = self.order[0];
        let mut v = vec![0.0; self.order.len()];
        v[j] = self.signs[j];
        v
    }

    /// Maps a point from the canonical frame back to the original coordinates.
    pub fn to_original(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        for (slot, &orig) in self.order.iter().enumerate() {
            out[orig] = self.signs[orig] * x[slot];
        }
        out
    }
}

/// `S = B₁ⁿ ∩ {⟨x, a⟩ ≥ t}` for `t ∈ (1/√2, 1]`, stored in the frame where
/// the separated vertex is `e₁` and `a` has nonnegative coordinates with
/// `a₁ = max|aᵢ|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChoppedPyramid {
    normal: Vec<f64>,
    offset: f64,
    frame: VertexFrame,
}

impl ChoppedPyramid {
    pub fn new(normal: &[f64], offset: f64) -> Result<Self> {
        let n = Dim::new(normal.len())?.require(3)?;
        check_unit(normal)?;
        check_single_vertex_regime(offset)?;
        let (frame, canonical) = VertexFrame::for_normal(normal);
        debug_assert_eq!(canonical.len(), n.get());
        Ok(ChoppedPyramid {
            normal: canonical,
            offset,
            frame,
        })
    }

    /// Canonical-frame normal, `a₁ ≥ a₂, …, aₙ ≥ 0`.
    pub fn canonical_normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn frame(&self) -> &VertexFrame {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// `a₁ − t`, the distance from the separated vertex to the cutting hyperplane.
    pub fn height(&self) -> f64 {
        self.normal[0] - self.offset
    }

    pub fn is_empty(&self) -> bool {
        self.height() <= 0.0
    }

    /// `∏_{i≥2} (a₁² − aᵢ²)`, rejecting near-ties with `a₁`.
    fn denominator(&self) -> Result<f64> {
        let a1sq = self.normal[0] * self.normal[0];
        let mut prod = 1.0;
        for (i, ai) in self.normal.iter().enumerate().skip(1) {
            let gap = a1sq - ai * ai;
            if gap <= EXACT_TOL {
                return Err(Error::Conditioning { index: i + 1, gap });
            }
            prod *= gap;
        }
        Ok(prod)
    }

    /// `|S| = 2ⁿ⁻¹ (a₁−t)ⁿ a₁ⁿ⁻² / (n! ∏_{i≥2}(a₁² − aᵢ²))`.
    pub fn volume(&self) -> Result<f64> {
        if self.is_empty() {
            return Ok(0.0);
        }
        let n = self.dim() as i32;
        let a1 = self.normal[0];
        let h = self.height();
        let factorial: f64 = (1..=n).map(f64::from).product();
        Ok(2f64.powi(n - 1) * h.powi(n) * a1.powi(n - 2) / (factorial * self.denominator()?))
    }

    /// `(n−1)`-volume of `B₁ⁿ ∩ {⟨x, a⟩ = t}`:
    /// `(2ⁿ⁻¹/(n−1)!) a₁ⁿ⁻² (a₁−t)ⁿ⁻¹ / ∏_{i≥2}(a₁² − aᵢ²)`.
    pub fn section_volume(&self) -> Result<f64> {
        if self.is_empty() {
            return Ok(0.0);
        }
        let n = self.dim() as i32;
        let a1 = self.normal[0];
        let h = self.height();
        let factorial: f64 = (1..n).map(f64::from).product();
        Ok(2f64.powi(n - 1) * a1.powi(n - 2) * h.powi(n - 1) / (factorial * self.denominator()?))
    }

    /// Where the cutting hyperplane meets the edge `[e₁, ε·e_k]` (canonical
    /// frame, zero-based `k ≥ 1`).
    pub fn edge_point(&self, k: usize, eps: f64) -> Vec<f64> {
        let a1 = self.normal[0];
        let ak = self.normal[k];
        let t = self.offset;
        let mut v = vec![0.0; self.dim()];
        v[0] = (t - eps * ak) / (a1 - eps * ak);
        v[k] = eps * (a1 - t) / (a1 - eps * ak);
        v
    }
}

fn check_single_vertex_regime(t: f64) -> Result<()> {
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

/// Volume of the chopped-off pyramid.
pub fn chopped_volume(c: &ChoppedPyramid) -> Result<f64> {
    c.volume()
}

/// `(n−1)`-volume of `B₁ⁿ ∩ H` for `H` at distance `t ∈ (1/√2, 1]`.
pub fn hyperplane_section_volume(h: &HyperplaneSpec, n: Dim) -> Result<SectionResult> {
    check_len(h.normal(), n.get())?;
    let c = ChoppedPyramid::new(h.normal(), h.offset())?;
    let a1 = c.canonical_normal()[0];
    let value = c.section_volume()?;
    let tangent = (a1 - h.offset()).abs() <= EXACT_TOL;
    Ok(SectionResult::exact(value, Witness::Hyperplane(h.clone()), tangent))
}

/// Volume of `B₁ⁿ ∩ {|⟨x, a⟩| ≤ t}` for `t ∈ (1/√2, 1]`, as `|B₁ⁿ| − 2|S|`.
pub fn slab_volume(s: &SlabSpec, n: Dim) -> Result<SectionResult> {
    check_len(s.normal(), n.get())?;
    let full = n.require(3)?.cross_polytope_volume();
    let c = ChoppedPyramid::new(s.normal(), s.half_width())?;
    let value = full - 2.0 * c.volume()?;
    Ok(SectionResult::exact(value, Witness::Slab(s.clone()), false))
}

/// Length of the section of `S_n = conv{e₁, …, eₙ}` by the line through its
/// centroid in direction `v` (`|v| = 1`, `Σvᵢ = 0`):
/// `(1/n)(1/max vᵢ − 1/min vᵢ)`.
pub fn simplex_central_line_length(v: &[f64]) -> Result<f64> {
    let n = Dim::new(v.len())?.require(2)?.get();
    check_unit(v)?;
    let total: f64 = v.iter().sum();
    if total.abs() > EXACT_TOL {
        return Err(Error::Degenerate("direction must lie in the simplex hyperplane (sum of coordinates 0)"));
    }
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((1.0 / max - 1.0 / min) / n as f64)
}

/// Length of the chord of `S_n` from a boundary point `x ∈ conv{e₁, …, eₙ₋₁}`
/// through the centroid `z` to the opposite side of the boundary.
pub fn simplex_chord_through_centroid(x: &[f64]) -> Result<f64> {
    check_finite(x)?;
    let n = Dim::new(x.len())?.require(2)?.get();
    let (face, last) = x.split_at(n - 1);
    if last[0].abs() > EXACT_TOL {
        return Err(Error::Degenerate("boundary point must have last coordinate 0"));
    }
    if face.iter().any(|v| *v < -EXACT_TOL) || (face.iter().sum::<f64>() - 1.0).abs() > EXACT_TOL {
        return Err(Error::Degenerate("boundary point must be a convex combination of e1..e(n-1)"));
    }
    let nf = n as f64;
    let max = face.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let denom = nf * max - 1.0;
    if denom <= EXACT_TOL {
        return Err(Error::Degenerate("chord direction parallel to the face"));
    }
    let spread: f64 = face.iter().map(|xi| (1.0 / nf - xi).powi(2)).sum::<f64>() + 1.0 / (nf * nf);
    Ok((1.0 + 1.0 / denom) * spread.sqrt())
}

fn isosceles_height_limit(u: f64, v: f64) -> f64 {
    u * v / (u * u + v * v).sqrt()
}

fn check_isosceles(u: f64, v: f64, t: f64) -> Result<()> {
    if !(u.is_finite() && v.is_finite() && t.is_finite()) {
        return Err(Error::NonFinite);
    }
    if u <= 0.0 || v <= 0.0 {
        return Err(Error::Degenerate("triangle legs need u, v > 0"));
    }
    let limit = isosceles_height_limit(u, v);
    if t < 0.0 || t > limit + EXACT_TOL {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            lo: 0.0,
            hi: limit,
        });
    }
    Ok(())
}

/// Shortest segment with endpoints on the legs of `conv{±u·e₁, v·e₂}` whose
/// line is at distance `t` from the origin: `2(v − t)·u/v`.
pub fn isosceles_min_chord(u: f64, v: f64, t: f64) -> Result<f64> {
    check_isosceles(u, v, t)?;
    Ok(2.0 * (v - t) * u / v)
}

/// The same segment length when the tangent point is rotated by `theta` away
/// from the apex axis, `θ ∈ [0, π/2 − α)` with `tan α = u/v`.
pub fn isosceles_tilted_chord(u: f64, v: f64, t: f64, theta: f64) -> Result<f64> {
    check_isosceles(u, v, t)?;
    let alpha = (u / v).atan();
    if !(0.0..std::f64::consts::FRAC_PI_2 - alpha).contains(&theta) {
        return Err(Error::OutOfRange {
            name: "theta",
            value: theta,
            lo: 0.0,
            hi: std::f64::consts::FRAC_PI_2 - alpha,
        });
    }
    let (ca, sa) = (alpha.cos(), alpha.sin());
    let ct = theta.cos();
    Ok(2.0 * (v * ct - t) * sa * ca / (ca * ca + ct * ct - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{self, basis, dot, norm, sub};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::SQRT_2;

    fn dim(n: usize) -> Dim {
        Dim::new(n).unwrap()
    }

    #[test]
    fn line_examples() {
        let l = LineSpec::through_points(&[1.0, 0.0, 0.0], &[-1.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(line_section_length(&l, dim(3)).unwrap().value, 2.0, epsilon = 1e-15);

        // An edge of B₁²: a supporting line whose contact set is the whole edge.
        let l = LineSpec::through_points(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        let r = line_section_length(&l, dim(2)).unwrap();
        assert_abs_diff_eq!(r.value, SQRT_2, epsilon = 1e-12);
        assert!(r.tangent);

        let l = LineSpec::from_base_direction(&[0.9, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(line_section_length(&l, dim(3)).unwrap().value, 0.2, epsilon = 1e-15);
    }

    #[test]
    fn min_line_construction_k1() {
        // (1−θ)u₁ + θv₁ and −(1−θ)u₁ + θv₁ with n = 3, t = 0.5, θ = t√2.
        let theta = 0.5 * SQRT_2;
        let a = [1.0 - theta, theta / 2.0, theta / 2.0];
        let b = [-(1.0 - theta), theta / 2.0, theta / 2.0];
        let l = LineSpec::through_points(&a, &b).unwrap();
        assert_abs_diff_eq!(l.distance(), 0.5, epsilon = 1e-15);
        let len = line_section_length(&l, dim(3)).unwrap().value;
        assert_abs_diff_eq!(len, 2.0 - SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(len, 0.5857864376, epsilon = 1e-10);
    }

    #[test]
    fn line_missing_body() {
        let l = LineSpec::from_base_direction(&[0.8, 0.8, 0.0], &[1.0, -1.0, 0.0]).unwrap();
        let r = line_section_length(&l, dim(3)).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(!r.tangent);
    }

    #[test]
    fn line_touching_vertex() {
        let l = LineSpec::from_base_direction(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap();
        let r = line_section_length(&l, dim(3)).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.tangent);
    }

    #[test]
    fn line_dimension_mismatch() {
        let l = LineSpec::through_points(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!(matches!(
            line_section_length(&l, dim(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    /// Sum of `|det|/n!` over the `2ⁿ⁻²` simplices `conv{e₁, v_{ε₂e₂}, …, v_{−eₙ}, v_{eₙ}}`.
    fn chopped_by_simplices(c: &ChoppedPyramid) -> f64 {
        let n = c.dim();
        let e1 = basis(n, 0);
        let mut total = 0.0;
        for mask in 0..(1usize << (n - 2)) {
            let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
            for k in 1..n - 1 {
                let eps = if mask >> (k - 1) & 1 == 1 { -1.0 } else { 1.0 };
                rows.push(sub(&c.edge_point(k, eps), &e1));
            }
            rows.push(sub(&c.edge_point(n - 1, -1.0), &e1));
            rows.push(sub(&c.edge_point(n - 1, 1.0), &e1));
            total += determinant(rows).abs();
        }
        let factorial: f64 = (1..=n).map(|i| i as f64).product();
        total / factorial
    }

    fn determinant(mut m: Vec<Vec<f64>>) -> f64 {
        let n = m.len();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
                .unwrap();
            if m[pivot][col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                m.swap(pivot, col);
                det = -det;
            }
            det *= m[col][col];
            for row in col + 1..n {
                let f = m[row][col] / m[col][col];
                let (top, bottom) = m.split_at_mut(row);
                for (x, p) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                    *x -= f * p;
                }
            }
        }
        det
    }

    #[test]
    fn chopped_volume_examples() {
        let c = ChoppedPyramid::new(&[1.0, 0.0, 0.0], 0.8).unwrap();
        let v = chopped_volume(&c).unwrap();
        assert_relative_eq!(v, 4.0 * 0.2f64.powi(3) / 6.0, max_relative = 1e-13);
        assert_relative_eq!(v, chopped_by_simplices(&c), max_relative = 1e-12);

        let c = ChoppedPyramid::new(&[0.9, 0.3, 0.1f64.sqrt()], 0.75).unwrap();
        let v = chopped_volume(&c).unwrap();
        assert_relative_eq!(v, 4.0 * 0.15f64.powi(3) * 0.9 / (6.0 * 0.72 * 0.71), max_relative = 1e-12);
        assert_abs_diff_eq!(v, 0.0039613, epsilon = 5e-8);
        assert_relative_eq!(v, chopped_by_simplices(&c), max_relative = 1e-12);
    }

    #[test]
    fn chopped_volume_by_simplices_in_higher_dims() {
        for normal in [
            vec![0.95, 0.2, -0.1, 0.2111871208],
            vec![-0.1, 0.05, 0.97, 0.1, 0.18],
        ] {
            let a = geometry::normalize(&normal).unwrap();
            let c = ChoppedPyramid::new(&a, 0.8).unwrap();
            assert_relative_eq!(chopped_volume(&c).unwrap(), chopped_by_simplices(&c), max_relative = 1e-11);
        }
    }

    #[test]
    fn chop_vanishes_at_vertex() {
        let a = geometry::normalize(&[0.9, 0.3, 0.2]).unwrap();
        let a1 = a[0];
        let near = ChoppedPyramid::new(&a, a1 - 1e-6).unwrap();
        assert!(chopped_volume(&near).unwrap() < 1e-15);
        let past = ChoppedPyramid::new(&a, (a1 + 0.01).min(1.0)).unwrap();
        assert_eq!(chopped_volume(&past).unwrap(), 0.0);
    }

    #[test]
    fn chopped_rejects_bad_regime() {
        assert!(matches!(
            ChoppedPyramid::new(&[1.0, 0.0, 0.0], 0.7),
            Err(Error::UnsupportedRegime { .. })
        ));
        assert!(matches!(
            ChoppedPyramid::new(&[1.0, 0.0], 0.8),
            Err(Error::DimensionTooSmall { .. })
        ));
        // Two tied leading coordinates (only reachable with a non-unit-ball-feasible t).
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = ChoppedPyramid::new(&[h, h, 0.0], 0.71).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn conditioning_guard() {
        let c = ChoppedPyramid {
            normal: vec![0.8, 0.8 - 1e-14, 0.0],
            offset: 0.75,
            frame: VertexFrame {
                order: vec![0, 1, 2],
                signs: vec![1.0; 3],
            },
        };
        assert!(matches!(c.volume(), Err(Error::Conditioning { index: 2, .. })));
    }

    #[test]
    fn hyperplane_examples() {
        let h = HyperplaneSpec::new(vec![1.0, 0.0, 0.0], 0.8).unwrap();
        let v = hyperplane_section_volume(&h, dim(3)).unwrap().value;
        assert_relative_eq!(v, 0.08, max_relative = 1e-13);

        let a = vec![0.9, 0.3, 0.1f64.sqrt()];
        let h = HyperplaneSpec::new(a.clone(), 0.75).unwrap();
        let v = hyperplane_section_volume(&h, dim(3)).unwrap().value;
        let c = ChoppedPyramid::new(&a, 0.75).unwrap();
        assert_relative_eq!(v, 3.0 * c.volume().unwrap() / 0.15, max_relative = 1e-12);
        assert_abs_diff_eq!(v, 0.0792254, epsilon = 5e-7);

        let h = HyperplaneSpec::new(vec![0.0, 1.0, 0.0, 0.0], 0.9).unwrap();
        let v = hyperplane_section_volume(&h, dim(4)).unwrap().value;
        assert_relative_eq!(v, 8.0 * 0.1f64.powi(3) / 6.0, max_relative = 1e-12);
    }

    #[test]
    fn hyperplane_edge_cases() {
        let h = HyperplaneSpec::new(vec![1.0, 0.0, 0.0], 1.0).unwrap();
        let r = hyperplane_section_volume(&h, dim(3)).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.tangent);

        let h = HyperplaneSpec::new(vec![1.0, 0.0, 0.0], 0.5).unwrap();
        assert!(matches!(
            hyperplane_section_volume(&h, dim(3)),
            Err(Error::UnsupportedRegime { .. })
        ));

        // max|aᵢ| = 0.8 < t: the hyperplane misses the body.
        let h = HyperplaneSpec::normalized(&[0.8, 0.6, 0.0], 0.85).unwrap();
        assert_eq!(hyperplane_section_volume(&h, dim(3)).unwrap().value, 0.0);

        let h = HyperplaneSpec::new(vec![1.0, 0.0], 0.8).unwrap();
        assert!(hyperplane_section_volume(&h, dim(2)).is_err());
    }

    #[test]
    fn frame_maps_vertex_back() {
        let a = geometry::normalize(&[0.1, -0.95, 0.2, 0.05]).unwrap();
        let c = ChoppedPyramid::new(&a, 0.8).unwrap();
        assert_eq!(c.frame().separated_vertex(), vec![0.0, -1.0, 0.0, 0.0]);
        // Canonical edge points land on the plane ⟨a, x⟩ = t in the original frame.
        for k in 1..4 {
            for eps in [-1.0, 1.0] {
                let p = c.frame().to_original(&c.edge_point(k, eps));
                assert_abs_diff_eq!(dot(&a, &p), 0.8, epsilon = 1e-14);
                assert_abs_diff_eq!(geometry::l1_norm(&p).unwrap(), 1.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn slab_examples() {
        let s = SlabSpec::new(vec![1.0, 0.0, 0.0], 0.8).unwrap();
        let v = slab_volume(&s, dim(3)).unwrap().value;
        assert_relative_eq!(v, (8.0 / 6.0) * (1.0 - 0.2f64.powi(3)), max_relative = 1e-14);
        assert_abs_diff_eq!(v, 1.3226666666666667, epsilon = 1e-12);

        let s = SlabSpec::normalized(&[0.3, -0.2, 0.5], 1.0).unwrap();
        assert_abs_diff_eq!(slab_volume(&s, dim(3)).unwrap().value, 4.0 / 3.0, epsilon = 1e-15);

        let s = SlabSpec::new(vec![0.9, 0.3, 0.1f64.sqrt()], 0.75).unwrap();
        let v = slab_volume(&s, dim(3)).unwrap().value;
        assert_abs_diff_eq!(v, 1.3254107, epsilon = 5e-7);

        // Slab wider than every vertex coordinate of the normal swallows the body.
        let s = SlabSpec::normalized(&[0.6, 0.6, 0.52915026], 0.8).unwrap();
        assert_abs_diff_eq!(slab_volume(&s, dim(3)).unwrap().value, 4.0 / 3.0, epsilon = 1e-15);

        let s = SlabSpec::new(vec![1.0, 0.0, 0.0], 0.6).unwrap();
        assert!(matches!(slab_volume(&s, dim(3)), Err(Error::UnsupportedRegime { .. })));
    }

    #[test]
    fn simplex_direction_examples() {
        let v = [1.0 / SQRT_2, -1.0 / SQRT_2, 0.0];
        assert_abs_diff_eq!(simplex_central_line_length(&v).unwrap(), 2.0 * SQRT_2 / 3.0, epsilon = 1e-14);
        let s6 = 6f64.sqrt();
        let v = [2.0 / s6, -1.0 / s6, -1.0 / s6];
        assert_abs_diff_eq!(simplex_central_line_length(&v).unwrap(), s6 / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(simplex_central_line_length(&v).unwrap(), 1.224745, epsilon = 1e-6);
        let v = [1.0 / SQRT_2, -1.0 / SQRT_2, 0.0, 0.0];
        assert_abs_diff_eq!(simplex_central_line_length(&v).unwrap(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-7);

        let bad = geometry::normalize(&[1.0, 0.0, 0.0]).unwrap();
        assert!(simplex_central_line_length(&bad).is_err());
    }

    /// Independent chord: intersect `z + s(z − x)` with the facets `{yᵢ = 0}` of `S_n`.
    fn brute_force_chord(x: &[f64]) -> f64 {
        let n = x.len();
        let z = vec![1.0 / n as f64; n];
        let dir = sub(&z, x);
        let mut s_max = f64::INFINITY;
        for i in 0..n {
            if dir[i] < 0.0 {
                s_max = s_max.min(-z[i] / dir[i]);
            }
        }
        (1.0 + s_max) * norm(&dir)
    }

    #[test]
    fn simplex_chord_examples() {
        let want = 1.5f64.sqrt();
        assert_abs_diff_eq!(simplex_chord_through_centroid(&[1.0, 0.0, 0.0]).unwrap(), want, epsilon = 1e-14);
        assert_abs_diff_eq!(simplex_chord_through_centroid(&[0.5, 0.5, 0.0]).unwrap(), want, epsilon = 1e-14);
        let x = [0.7, 0.3, 0.0];
        let got = simplex_chord_through_centroid(&x).unwrap();
        assert_abs_diff_eq!(got, brute_force_chord(&x), epsilon = 1e-14);
        assert_abs_diff_eq!(got, 0.9481604635, epsilon = 1e-10);

        assert!(simplex_chord_through_centroid(&[0.7, 0.3, 0.1]).is_err());
        assert!(simplex_chord_through_centroid(&[0.7, 0.2, 0.0]).is_err());
        assert!(simplex_chord_through_centroid(&[1.2, -0.2, 0.0]).is_err());
    }

    #[test]
    fn isosceles_examples() {
        assert_abs_diff_eq!(isosceles_min_chord(1.0, 1.0, 0.0).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            isosceles_min_chord(1.0, 1.0, 1.0 / SQRT_2).unwrap(),
            2.0 * (1.0 - 1.0 / SQRT_2),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            isosceles_min_chord(1.0, 1.0 / SQRT_2, 0.5).unwrap(),
            2.0 - SQRT_2,
            epsilon = 1e-15
        );
        assert!(isosceles_min_chord(1.0, 1.0, 0.8).is_err());
        assert!(isosceles_min_chord(1.0, 1.0, -0.1).is_err());
        assert!(isosceles_min_chord(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn tilted_chord_matches_min_at_zero_tilt() {
        let (u, v, t) = (0.8, 0.6, 0.3);
        assert_abs_diff_eq!(
            isosceles_tilted_chord(u, v, t, 0.0).unwrap(),
            isosceles_min_chord(u, v, t).unwrap(),
            epsilon = 1e-14
        );
        let alpha = (u / v).atan();
        assert!(isosceles_tilted_chord(u, v, t, std::f64::consts::FRAC_PI_2 - alpha).is_err());
    }

    /// Tilted chord length measured directly: the tangent line to the circle of
    /// radius t at angle θ from the apex axis, clipped against the two legs.
    #[test]
    fn tilted_chord_matches_direct_geometry() {
        let (u, v, t) = (1.0, 0.7, 0.35);
        for theta in [0.0, 0.1, 0.3, 0.5] {
            let p = [t * f64::sin(theta), t * f64::cos(theta)];
            let d = [f64::cos(theta), -f64::sin(theta)];
            // Leg from (u,0) to (0,v): x/u + y/v = 1; right leg and left leg (−x/u + y/v = 1).
            let hit = |sx: f64| {
                let num = 1.0 - (sx * p[0] / u + p[1] / v);
                let den = sx * d[0] / u + d[1] / v;
                num / den
            };
            let direct = (hit(1.0) - hit(-1.0)).abs();
            assert_abs_diff_eq!(isosceles_tilted_chord(u, v, t, theta).unwrap(), direct, epsilon = 1e-12);
        }
    }
}
