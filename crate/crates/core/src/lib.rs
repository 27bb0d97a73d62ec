//! Sections of the cross-polytope `B₁ⁿ = {x : Σ|xᵢ| ≤ 1}` by lines, hyperplanes
//! and symmetric slabs.
//!
//! The crate is organized bottom-up:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`geometry`] | vectors, lines, hyperplanes, slabs, the `Q_k` projection |
//! | [`sections`] | exact line-section lengths, chopped-pyramid and hyperplane-section volumes, slabs, simplex chords |
//! | [`closed_forms`] | extremal answers as functions of `(n, t)` together with witness lines and hyperplanes |
//! | [`mc`] | Monte Carlo volume oracles |
//! | [`search`] | multi-start searches over lines/hyperplanes at a fixed distance, edge-pair enumeration |
//! | [`verify`] | the certification suite shared by the CLI and the acceptance tests |
//!
//! All quantities are `f64`. Exact identities are checked at [`EXACT_TOL`],
//! formula-versus-geometry agreements at [`GEOMETRY_TOL`].

pub mod closed_forms;
pub mod error;
pub mod geometry;
pub mod mc;
pub mod search;
pub mod sections;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{Dim, HyperplaneSpec, LineSpec, SlabSpec};
pub use sections::{Method, SectionResult, Witness};

/// Tolerance for identities that hold exactly in real arithmetic.
pub const EXACT_TOL: f64 = 1e-12;

/// Tolerance for agreement between a closed formula and an exact geometric evaluation.
pub const GEOMETRY_TOL: f64 = 1e-9;
