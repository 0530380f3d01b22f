//! Radial reductions of `n`-dimensional integrals.
//!
//! Profiles are cell averages, so the midpoint rule `sum f_i V_i` is the
//! exact integral of the piecewise-constant reconstruction. The Simpson rule
//! treats the values as point samples at cell centres and is fourth order on
//! smooth point data; it is kept as a cross-check.

use alloc::vec::Vec;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{RadialGrid, Shells};
use crate::math::{ln, powf, powi};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadratureRule {
    #[default]
    Midpoint,
    Simpson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSettings {
    pub rule: QuadratureRule,
    /// Number of 2x refinements performed by [`convergence_study`].
    pub refinement: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rule: QuadratureRule::Midpoint,
            refinement: 3,
            abs_tol: 1e-12,
            rel_tol: 1e-8,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidArgument("quadrature tolerances must be > 0".into()));
        }
        Ok(())
    }
}

pub(crate) fn check_finite(f: &[f64]) -> Result<()> {
    match f.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

/// `integral over R^n of f(|x|) dx` for a profile on `grid`.
pub fn integrate_radial(f: &[f64], grid: &RadialGrid, n: usize, rule: QuadratureRule) -> Result<f64> {
    grid.check_len(f.len())?;
    check_finite(f)?;
    let shells = Shells::new(grid, n);
    Ok(match rule {
        QuadratureRule::Midpoint => integrate_cells(f, &shells),
        QuadratureRule::Simpson => simpson(f, &shells),
    })
}

/// `sum f_i V_i` without validation; shared by the diagnostics.
pub(crate) fn integrate_cells(f: &[f64], shells: &Shells) -> f64 {
    f.iter().zip(&shells.volumes).map(|(f, v)| f * v).sum()
}

fn simpson(f: &[f64], shells: &Shells) -> f64 {
    let h = shells.dr;
    let m = f.len();
    let nw = shells.sphere_area();
    let ni = shells.n as i32;
    let g: Vec<f64> = f
        .iter()
        .zip(&shells.centers)
        .map(|(f, &r)| nw * powi(r, ni - 1) * f)
        .collect();

    // [0, c_0]: quadratic through (0, 0), (c_0, g_0), (c_1, g_1).
    let left = h * (7.0 / 24.0 * g[0] - 1.0 / 72.0 * g[1]);
    // [c_{m-1}, r_max]: quadratic through the last three centres.
    let right = h * (g[m - 3] / 12.0 - 7.0 / 24.0 * g[m - 2] + 17.0 / 24.0 * g[m - 1]);

    let intervals = m - 1;
    let (simpson_end, tail) = if intervals.is_multiple_of(2) {
        (intervals, 0.0)
    } else {
        let k = intervals - 3;
        (k, 3.0 * h / 8.0 * (g[k] + 3.0 * g[k + 1] + 3.0 * g[k + 2] + g[k + 3]))
    };
    let mut middle = 0.0;
    for j in (0..simpson_end).step_by(2) {
        middle += g[j] + 4.0 * g[j + 1] + g[j + 2];
    }
    left + middle * h / 3.0 + tail + right
}

/// Newtonian self-interaction `integral integral rho(x) |x - y|^(2-n) rho(y) dx dy`.
///
/// Uses the shell reduction with kernel `max(r, r')^(2-n)` and integrates the
/// piecewise-constant density exactly, so the result is `-integral rho Phi`
/// for the exact potential of the same density.
pub fn interaction_integral(rho: &[f64], grid: &RadialGrid, n: usize) -> Result<f64> {
    grid.check_len(rho.len())?;
    check_finite(rho)?;
    Ok(interaction_cells(rho, &Shells::new(grid, n)))
}

pub(crate) fn interaction_cells(rho: &[f64], shells: &Shells) -> f64 {
    let nw = shells.sphere_area();
    let nf = shells.n as f64;
    let ni = shells.n as i32;
    let mut inner_mass = 0.0;
    let mut total = 0.0;
    for (j, &r) in rho.iter().enumerate() {
        let (a, b) = (shells.edges[j], shells.edges[j + 1]);
        let (a2, b2) = (a * a, b * b);
        let an = powi(a, ni);
        let shell = (powi(b, ni + 2) - an * a2) / (nf + 2.0) - an * (b2 - a2) / 2.0;
        total += inner_mass * r * nw * (b2 - a2) + 2.0 * r * r * nw * nw / nf * shell;
        inner_mass += r * shells.volumes[j];
    }
    total
}

/// `(integral |f|^p)^(1/p)` for `p >= 1`, exact on piecewise-constant data.
pub fn lp_norm(f: &[f64], grid: &RadialGrid, n: usize, p: f64) -> Result<f64> {
    grid.check_len(f.len())?;
    check_finite(f)?;
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(alloc::format!("L^p exponent must be >= 1, got {p}")));
    }
    Ok(lp_norm_cells(f, &Shells::new(grid, n), p))
}

pub(crate) fn lp_norm_cells(f: &[f64], shells: &Shells, p: f64) -> f64 {
    let s: f64 = f.iter().zip(&shells.volumes).map(|(f, v)| powf(f.abs(), p) * v).sum();
    if s == 0.0 {
        0.0
    } else {
        powf(s, 1.0 / p)
    }
}

/// One level of a refinement study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceLevel {
    pub cells: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub levels: Vec<ConvergenceLevel>,
    /// Observed order from the last three levels, when defined.
    pub order: Option<f64>,
    /// Whether the last two levels agree within the settings' tolerances.
    pub converged: bool,
}

/// Integrate `f` sampled at cell centres on `grid` refined `0..=refinement`
/// times by 2x.
pub fn convergence_study(
    f: impl Fn(f64) -> f64,
    grid: &RadialGrid,
    n: usize,
    settings: &QuadratureSettings,
) -> Result<ConvergenceReport> {
    settings.validate()?;
    let mut levels = Vec::with_capacity(settings.refinement + 1);
    for k in 0..=settings.refinement {
        let g = grid.refined(1 << k);
        let samples: Vec<f64> = g.centers().into_iter().map(&f).collect();
        levels.push(ConvergenceLevel {
            cells: g.cells(),
            value: integrate_radial(&samples, &g, n, settings.rule)?,
        });
    }
    let v: Vec<f64> = levels.iter().map(|l| l.value).collect();
    let k = v.len();
    let order = (k >= 3)
        .then(|| {
            let (d1, d2) = ((v[k - 2] - v[k - 3]).abs(), (v[k - 1] - v[k - 2]).abs());
            (d1 > 0.0 && d2 > 0.0).then(|| ln(d1 / d2) / core::f64::consts::LN_2)
        })
        .flatten();
    let converged = k >= 2 && {
        let diff = (v[k - 1] - v[k - 2]).abs();
        diff <= settings.abs_tol.max(settings.rel_tol * v[k - 1].abs())
    };
    Ok(ConvergenceReport { levels, order, converged })
}
