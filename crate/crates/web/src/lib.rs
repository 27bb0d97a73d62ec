//! wasm-bindgen exports behind `www/index.html`.
//!
//! Every function returns plain numbers or flat `Vec<f64>` buffers so the page
//! needs no generated TypeScript glue beyond the default `--target web` output.

use wasm_bindgen::prelude::*;

use crosspoly::closed_forms::{max_line_length, min_line_length};
use crosspoly::sections::{hyperplane_section_volume, line_chord};
use crosspoly::{Dim, HyperplaneSpec, LineSpec};

fn js(e: crosspoly::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Extremal chord lengths at `steps + 1` evenly spaced `t ∈ [0, 1]`, as rows
/// `[t, max, min]` flattened into one buffer.
#[wasm_bindgen]
pub fn line_curves(n: usize, steps: usize) -> Result<Vec<f64>, JsError> {
    let d = Dim::new(n).and_then(|d| d.require(2)).map_err(js)?;
    let steps = steps.max(1);
    let mut out = Vec::with_capacity(3 * (steps + 1));
    for i in 0..=steps {
        let t = i as f64 / steps as f64;
        out.push(t);
        out.push(max_line_length(d, t).map_err(js)?.value);
        out.push(min_line_length(d, t).map_err(js)?.value);
    }
    Ok(out)
}

/// The chord of the square `|x| + |y| ≤ 1` cut by the line at distance `t`
/// whose unit normal makes angle `angle` with the x-axis.
/// Returns `[x₁, y₁, x₂, y₂, length]`, or an empty buffer when the line misses.
#[wasm_bindgen]
pub fn square_chord(t: f64, angle: f64) -> Result<Vec<f64>, JsError> {
    let (s, c) = angle.sin_cos();
    let line = LineSpec::at_distance(t, &[c, s], &[-s, c]).map_err(js)?;
    Ok(match line_chord(&line) {
        Some(ch) => {
            let (p, q) = (line.point_at(ch.lo), line.point_at(ch.hi));
            vec![p[0], p[1], q[0], q[1], ch.length()]
        }
        None => Vec::new(),
    })
}

/// `(n−1)`-volume of `B₁ⁿ ∩ {⟨a, x⟩ = t}` for `t > 1/√2`; `a` is rescaled to unit length.
#[wasm_bindgen]
pub fn hyperplane_volume(normal: Vec<f64>, t: f64) -> Result<f64, JsError> {
    let h = HyperplaneSpec::normalized(&normal, t).map_err(js)?;
    let d = Dim::new(normal.len()).map_err(js)?;
    hyperplane_section_volume(&h, d).map(|r| r.value).map_err(js)
}
