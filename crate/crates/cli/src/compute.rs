//! `crosspoly compute`: one exact section value.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

use crosspoly::geometry::normalize;
use crosspoly::sections::{self, ChoppedPyramid};
use crosspoly::{Dim, HyperplaneSpec, LineSpec, Method, SlabSpec, Witness};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComputeKind {
    /// Length of the chord of a line (`--p1/--p2` or `--base/--dir`).
    LineLength,
    /// (n−1)-volume of the section by `⟨normal, x⟩ = t`, t > 1/√2.
    HypVolume,
    /// Volume of `|⟨normal, x⟩| ≤ t`, t > 1/√2.
    SlabVolume,
    /// Volume of the cap `⟨normal, x⟩ ≥ t`, t > 1/√2.
    ChoppedVolume,
    /// Central simplex chord, from a direction `--v` or a boundary point `--x`.
    SimplexChord,
}

/// Geometry flags; which ones are needed depends on the kind.
#[derive(Debug, Clone, Default)]
pub struct Geometry {
    pub n: Option<usize>,
    pub p1: Option<Vec<f64>>,
    pub p2: Option<Vec<f64>>,
    pub base: Option<Vec<f64>>,
    pub dir: Option<Vec<f64>>,
    pub normal: Option<Vec<f64>>,
    pub t: Option<f64>,
    pub v: Option<Vec<f64>>,
    pub x: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComputeOutput {
    pub kind: ComputeKind,
    pub value: f64,
    pub method: Method,
    pub tangent: bool,
    pub witness: Option<Witness>,
    /// Set when an input was rescaled, for instance a normal that was not unit.
    pub note: Option<String>,
}

fn need<T: Clone>(v: &Option<T>, flag: &str, kind: &str) -> Result<T> {
    v.clone().ok_or_else(|| CliError::Usage(format!("{kind} needs --{flag}")))
}

fn dim_for(g: &Geometry, len: usize) -> Result<Dim> {
    let n = g.n.unwrap_or(len);
    if n != len {
        return Err(CliError::Usage(format!("--n {n} does not match {len} coordinates")));
    }
    Ok(Dim::new(n)?)
}

/// Normal as typed, rescaled to unit length (typed decimals are rarely unit to 1e-12).
fn unit_normal(g: &Geometry, kind: &str) -> Result<(Vec<f64>, Option<String>)> {
    let raw = need(&g.normal, "normal", kind)?;
    let unit = normalize(&raw)?;
    let len = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    let note = ((len - 1.0).abs() > 1e-15).then(|| format!("normal rescaled by 1/{len:.16}"));
    Ok((unit, note))
}

pub fn compute(kind: ComputeKind, g: &Geometry) -> Result<ComputeOutput> {
    let label = kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let label = label.as_str();
    match kind {
        ComputeKind::LineLength => {
            let line = match (&g.p1, &g.p2, &g.base, &g.dir) {
                (Some(a), Some(b), None, None) => LineSpec::through_points(a, b)?,
                (None, None, Some(p), Some(d)) => LineSpec::from_base_direction(p, d)?,
                _ => return Err(CliError::Usage("line-length needs either --p1 and --p2, or --base and --dir".into())),
            };
            let n = dim_for(g, line.dim())?;
            let r = sections::line_section_length(&line, n)?;
            Ok(ComputeOutput {
                kind,
                value: r.value,
                method: r.method,
                tangent: r.tangent,
                witness: r.witness,
                note: None,
            })
        }
        ComputeKind::HypVolume => {
            let (a, note) = unit_normal(g, label)?;
            let n = dim_for(g, a.len())?;
            let h = HyperplaneSpec::new(a, need(&g.t, "t", label)?)?;
            let r = sections::hyperplane_section_volume(&h, n)?;
            Ok(ComputeOutput {
                kind,
                value: r.value,
                method: r.method,
                tangent: r.tangent,
                witness: r.witness,
                note,
            })
        }
        ComputeKind::SlabVolume => {
            let (a, note) = unit_normal(g, label)?;
            let n = dim_for(g, a.len())?;
            let s = SlabSpec::new(a, need(&g.t, "t", label)?)?;
            let r = sections::slab_volume(&s, n)?;
            Ok(ComputeOutput {
                kind,
                value: r.value,
                method: r.method,
                tangent: r.tangent,
                witness: r.witness,
                note,
            })
        }
        ComputeKind::ChoppedVolume => {
            let (a, note) = unit_normal(g, label)?;
            dim_for(g, a.len())?;
            let t = need(&g.t, "t", label)?;
            let cap = ChoppedPyramid::new(&a, t)?;
            Ok(ComputeOutput {
                kind,
                value: sections::chopped_volume(&cap)?,
                method: Method::ExactGeometry,
                tangent: cap.is_empty(),
                witness: Some(Witness::Hyperplane(HyperplaneSpec::new(a, t)?)),
                note,
            })
        }
        ComputeKind::SimplexChord => match (&g.v, &g.x) {
            (Some(v), None) => {
                dim_for(g, v.len())?;
                let unit = normalize(v)?;
                let sum: f64 = unit.iter().sum();
                if sum.abs() > 1e-9 {
                    return Err(CliError::Usage(format!("--v must have coordinate sum 0 (got {sum:e} after normalizing)")));
                }
                let mean = sum / unit.len() as f64;
                let unit: Vec<f64> = unit.iter().map(|x| x - mean).collect();
                Ok(ComputeOutput {
                    kind,
                    value: sections::simplex_central_line_length(&unit)?,
                    method: Method::ExactGeometry,
                    tangent: false,
                    witness: Some(Witness::SimplexChord(unit)),
                    note: None,
                })
            }
            (None, Some(x)) => {
                dim_for(g, x.len())?;
                Ok(ComputeOutput {
                    kind,
                    value: sections::simplex_chord_through_centroid(x)?,
                    method: Method::ExactGeometry,
                    tangent: false,
                    witness: None,
                    note: None,
                })
            }
            _ => Err(CliError::Usage("simplex-chord needs exactly one of --v or --x".into())),
        },
    }
}

fn coords(v: &[f64]) -> String {
    v.iter().map(|x| format!("{}", x + 0.0)).collect::<Vec<_>>().join(",")
}

pub fn render_text(out: &ComputeOutput) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "value    {:.16e}", out.value);
    let _ = writeln!(s, "method   {}", out.method.as_str());
    let _ = writeln!(s, "tangent  {}", out.tangent);
    match &out.witness {
        Some(Witness::Line(l)) => {
            let _ = writeln!(s, "witness  line base={} direction={}", coords(l.base()), coords(l.direction()));
        }
        Some(Witness::Hyperplane(h)) => {
            let _ = writeln!(s, "witness  hyperplane normal={} offset={}", coords(h.normal()), h.offset());
        }
        Some(Witness::Slab(sl)) => {
            let _ = writeln!(s, "witness  slab normal={} half-width={}", coords(sl.normal()), sl.half_width());
        }
        Some(Witness::SimplexChord(v)) => {
            let _ = writeln!(s, "witness  simplex direction={}", coords(v));
        }
        None => {}
    }
    if let Some(note) = &out.note {
        let _ = writeln!(s, "note     {note}");
    }
    s
}
