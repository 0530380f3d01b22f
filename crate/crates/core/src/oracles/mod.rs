//! Brute-force checks of the functional inequalities and of the a priori
//! bounds along computed trajectories.
//!
//! Every check reports both sides and `margin = rhs - lhs`; a check passes
//! when `margin >= -tol * scale`. None of this proves anything: the oracles
//! only look for counterexamples on concrete data.

mod bounds;
mod chemin;
mod corpus;
mod hlp;
mod hls;
mod lemma36;

pub use bounds::{
    verify_energy_bounds, verify_internal_energy_bounds, verify_moment_bounds, BoundCheck, BoundTolerances,
};
pub use chemin::{verify_chemin, CheminReport};
pub use corpus::{corpus, CorpusEntry, CorpusOptions};
pub use hlp::{spherical_transform, verify_hlp, HlpReport, HlpSettings};
pub use lemma36::{lemma36_constant, verify_lemma36, Lemma36Branch, Lemma36Report};
pub use hls::{verify_hls, verify_hls_at, HlsReport};

use serde::Serialize;

/// Default relative slack for static inequalities.
pub const TOL_NUM: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Margin {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub margin: f64,
    pub scale: f64,
    pub tol: f64,
    pub passed: bool,
}

impl Margin {
    /// `lhs <= rhs` with tolerance `tol * scale`.
    pub fn new(lhs: f64, rhs: f64, scale: f64, tol: f64) -> Self {
        let margin = rhs - lhs;
        Self { lhs, rhs, margin, scale, tol, passed: margin >= -tol * scale }
    }

    /// Tolerance scaled by `|rhs|`.
    pub fn relative(lhs: f64, rhs: f64) -> Self {
        Self::new(lhs, rhs, rhs.abs(), TOL_NUM)
    }

    /// `margin / scale`, or 0 when the scale vanishes.
    pub fn relative_margin(&self) -> f64 {
        if self.scale > 0.0 {
            self.margin / self.scale
        } else {
            0.0
        }
    }
}
