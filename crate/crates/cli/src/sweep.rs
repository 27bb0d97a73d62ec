//! `crosspoly sweep`: closed-form curves over an `(n, t)` grid, optionally
//! certified by the search oracles.
//!
//! CSV columns are fixed: `quantity,n,t,branch,closed_form,oracle_value,gap,status`.
//! Numbers are written as `{:.16e}` (17 significant digits, so parsing and
//! re-emitting a file is byte-identical); absent values are empty fields.
//! Rows outside a quantity's regime are kept with status `out-of-regime`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::io::{Read, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crosspoly::closed_forms::{self, ExtremalAnswer};
use crosspoly::search::{self, HyperplaneObjective, Mode, SearchConfig, SearchReport};
use crosspoly::Dim;

use crate::{CliError, Result};

pub const CSV_HEADER: [&str; 8] = ["quantity", "n", "t", "branch", "closed_form", "oracle_value", "gap", "status"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    MaxLine,
    MinLine,
    MaxHyp,
    MinSlab,
    SimplexMin,
    SimplexMax,
}

impl Quantity {
    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::MaxLine => "max-line",
            Quantity::MinLine => "min-line",
            Quantity::MaxHyp => "max-hyp",
            Quantity::MinSlab => "min-slab",
            Quantity::SimplexMin => "simplex-min",
            Quantity::SimplexMax => "simplex-max",
        }
    }

    fn uses_t(self) -> bool {
        !matches!(self, Quantity::SimplexMin | Quantity::SimplexMax)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Closed form only.
    Ok,
    /// Oracle agrees with the closed form within tolerance.
    Certified,
    GapExceeded,
    OutOfRegime,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Certified => "certified",
            Status::GapExceeded => "gap-exceeded",
            Status::OutOfRegime => "out-of-regime",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "ok" => Status::Ok,
            "certified" => Status::Certified,
            "gap-exceeded" => Status::GapExceeded,
            "out-of-regime" => Status::OutOfRegime,
            other => return Err(CliError::Usage(format!("unknown status `{other}`"))),
        })
    }
}

/// A sweep request after merging flags over the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub quantity: Quantity,
    pub dims: Vec<usize>,
    pub t_start: f64,
    pub t_stop: f64,
    pub t_step: f64,
    pub certify: bool,
    pub format: Format,
    pub seed: u64,
    pub starts: usize,
    pub max_iters: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_step > 0.0 && self.t_step.is_finite()) {
            return Err(CliError::Usage(format!("t step must be positive, got {}", self.t_step)));
        }
        if !(self.t_start.is_finite() && self.t_stop.is_finite() && self.t_start <= self.t_stop) {
            return Err(CliError::Usage(format!("empty t range {}..{}", self.t_start, self.t_stop)));
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(CliError::Usage("dimensions must be positive".into()));
        }
        if self.starts == 0 || self.max_iters == 0 {
            return Err(CliError::Usage("starts and max-iters must be positive".into()));
        }
        if (self.t_stop - self.t_start) / self.t_step > 1e6 {
            return Err(CliError::Usage("more than a million t values".into()));
        }
        Ok(())
    }

    /// `t_start + i·t_step` up to `t_stop` (inclusive up to rounding).
    pub fn ts(&self) -> Vec<f64> {
        let count = ((self.t_stop - self.t_start) / self.t_step + 1e-9).floor() as usize;
        (0..=count).map(|i| self.t_start + i as f64 * self.t_step).collect()
    }
}

/// Optional sweep settings from a TOML file; flags override them.
///
/// ```toml
/// quantity = "min-line"
/// n = [3, 4]          # or a single integer
/// t_start = 0.0
/// t_stop = 0.6
/// t_step = 0.01
/// certify = true
/// format = "csv"
/// seed = 7
/// starts = 64
/// max_iters = 500
/// ```
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub quantity: Option<Quantity>,
    pub n: Option<DimsValue>,
    pub t_start: Option<f64>,
    pub t_stop: Option<f64>,
    pub t_step: Option<f64>,
    pub certify: Option<bool>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub starts: Option<usize>,
    pub max_iters: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum DimsValue {
    One(usize),
    Many(Vec<usize>),
}

impl DimsValue {
    pub fn into_vec(self) -> Vec<usize> {
        match self {
            DimsValue::One(n) => vec![n],
            DimsValue::Many(v) => v,
        }
    }
}

impl SweepFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| CliError::Config {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub quantity: Quantity,
    pub n: usize,
    pub t: Option<f64>,
    pub branch: Option<String>,
    pub closed_form: Option<f64>,
    pub oracle_value: Option<f64>,
    pub gap: Option<f64>,
    pub status: Status,
}

impl Row {
    fn out_of_regime(quantity: Quantity, n: usize, t: Option<f64>) -> Self {
        Row {
            quantity,
            n,
            t,
            branch: None,
            closed_form: None,
            oracle_value: None,
            gap: None,
            status: Status::OutOfRegime,
        }
    }

    /// Where each value came from.
    pub fn provenance(&self) -> &'static str {
        match (self.closed_form.is_some(), self.oracle_value.is_some()) {
            (true, true) => "closed-form+search",
            (true, false) => "closed-form",
            _ => "none",
        }
    }
}

fn in_regime(q: Quantity, n: usize, t: f64) -> bool {
    match q {
        Quantity::MaxLine | Quantity::MinLine => n >= 2 && (0.0..=1.0).contains(&t),
        Quantity::MaxHyp | Quantity::MinSlab => n >= 3 && t > FRAC_1_SQRT_2 && t <= 1.0,
        Quantity::SimplexMin | Quantity::SimplexMax => n >= 3,
    }
}

fn search_config(spec: &SweepSpec, mode: Mode) -> SearchConfig {
    SearchConfig {
        starts: spec.starts,
        max_iters: spec.max_iters,
        seed: spec.seed,
        mode,
        ..Default::default()
    }
}

/// Oracle value for one row and whether it certifies the closed form.
fn certify(spec: &SweepSpec, n: Dim, t: f64, cf: f64) -> crosspoly::Result<Option<(f64, bool)>> {
    let rel = |v: f64| (v - cf).abs() <= 1e-6 * cf.abs().max(f64::MIN_POSITIVE);
    let value = |r: SearchReport| r.best_value;
    Ok(Some(match spec.quantity {
        Quantity::MaxLine => {
            let v = value(search::search_lines_at_distance(n, t, &search_config(spec, Mode::Maximize))?);
            (v, (v - cf).abs() <= 1e-5)
        }
        Quantity::MinLine => {
            let v = value(search::search_lines_at_distance(n, t, &search_config(spec, Mode::Minimize))?);
            (v, v >= cf - 1e-5 && (v - cf).abs() <= 1e-5)
        }
        Quantity::MaxHyp | Quantity::MinSlab if t >= 1.0 => return Ok(None),
        Quantity::MaxHyp => {
            let cfg = search_config(spec, Mode::Maximize);
            let v = value(search::search_hyperplanes_at_distance(n, t, &cfg, HyperplaneObjective::SectionVolume)?);
            (v, rel(v) || (v - cf).abs() <= 1e-15)
        }
        Quantity::MinSlab => {
            let cfg = search_config(spec, Mode::Minimize);
            let v = value(search::search_hyperplanes_at_distance(n, t, &cfg, HyperplaneObjective::SlabVolume)?);
            (v, rel(v))
        }
        Quantity::SimplexMin | Quantity::SimplexMax => {
            let mode = if spec.quantity == Quantity::SimplexMin { Mode::Minimize } else { Mode::Maximize };
            let v = value(search::search_simplex_central_lines(n, &search_config(spec, mode))?);
            (v, (v - cf).abs() <= 1e-6)
        }
    }))
}

fn closed_form(q: Quantity, n: Dim, t: f64) -> crosspoly::Result<(f64, String)> {
    let answer = |a: ExtremalAnswer| (a.value, a.branch);
    Ok(match q {
        Quantity::MaxLine => answer(closed_forms::max_line_length(n, t)?),
        Quantity::MinLine => answer(closed_forms::min_line_length(n, t)?),
        Quantity::MaxHyp => answer(closed_forms::max_hyperplane_volume(n, t)?),
        Quantity::MinSlab => answer(closed_forms::min_slab_volume(n, t)?),
        Quantity::SimplexMin => (closed_forms::simplex_extremes(n)?.0, "edge-parallel".into()),
        Quantity::SimplexMax => (closed_forms::simplex_extremes(n)?.1, "vertex".into()),
    })
}

fn row(spec: &SweepSpec, n: usize, t: Option<f64>) -> Row {
    let q = spec.quantity;
    let tv = t.unwrap_or(0.0);
    let Some(dim) = Dim::new(n).ok().filter(|_| in_regime(q, n, tv)) else {
        return Row::out_of_regime(q, n, t);
    };
    let Ok((cf, branch)) = closed_form(q, dim, tv) else {
        return Row::out_of_regime(q, n, t);
    };
    let mut r = Row {
        quantity: q,
        n,
        t,
        branch: Some(branch),
        closed_form: Some(cf),
        oracle_value: None,
        gap: None,
        status: Status::Ok,
    };
    if spec.certify {
        if let Ok(Some((v, ok))) = certify(spec, dim, tv, cf) {
            r.oracle_value = Some(v);
            r.gap = Some(v - cf);
            r.status = if ok { Status::Certified } else { Status::GapExceeded };
        }
    }
    r
}

/// Rows ordered by `(n, t)`.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<Row>> {
    spec.validate()?;
    let ts: Vec<Option<f64>> = if spec.quantity.uses_t() {
        spec.ts().into_iter().map(Some).collect()
    } else {
        vec![None]
    };
    Ok(spec
        .dims
        .iter()
        .flat_map(|&n| ts.iter().map(move |&t| (n, t)))
        .map(|(n, t)| row(spec, n, t))
        .collect())
}

fn num(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.quantity.as_str().to_string(),
            r.n.to_string(),
            num(r.t),
            r.branch.clone().unwrap_or_default(),
            num(r.closed_form),
            num(r.oracle_value),
            num(r.gap),
            r.status.as_str().to_string(),
        ])?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: "<csv output>".into(),
        source,
    })?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<Row>> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(CliError::Usage(format!("unexpected CSV header {header:?}")));
    }
    let opt_num = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| CliError::Usage(format!("bad number `{s}`")))
        }
    };
    reader
        .records()
        .map(|rec| {
            let rec = rec?;
            let field = |i: usize| rec.get(i).unwrap_or("");
            let quantity = Quantity::from_str(field(0), false)
                .map_err(|_| CliError::Usage(format!("unknown quantity `{}`", field(0))))?;
            Ok(Row {
                quantity,
                n: field(1).parse().map_err(|_| CliError::Usage(format!("bad n `{}`", field(1))))?,
                t: opt_num(field(2))?,
                branch: Some(field(3).to_string()).filter(|s| !s.is_empty()),
                closed_form: opt_num(field(4))?,
                oracle_value: opt_num(field(5))?,
                gap: opt_num(field(6))?,
                status: Status::parse(field(7))?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowProvenance {
    pub n: usize,
    pub t: Option<f64>,
    pub source: String,
}

/// Everything needed to reproduce a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub config: SweepSpec,
    pub timestamp: String,
    pub provenance: Vec<RowProvenance>,
}

pub fn manifest(spec: &SweepSpec, rows: &[Row]) -> RunManifest {
    RunManifest {
        tool: "crosspoly".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: spec.seed,
        config: spec.clone(),
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        provenance: rows
            .iter()
            .map(|r| RowProvenance {
                n: r.n,
                t: r.t,
                source: r.provenance().into(),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub manifest: RunManifest,
    pub rows: Vec<Row>,
}

pub fn to_json(manifest: RunManifest, rows: Vec<Row>) -> String {
    serde_json::to_string_pretty(&SweepDocument { manifest, rows }).expect("sweep serializes")
}
