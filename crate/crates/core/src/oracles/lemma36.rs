//! `W(rho) <= eps I + C(eps, n, omega_n, M)` with `I = integral rho^gamma / (gamma - 1)`.
//!
//! The statement only asserts that `C` exists. The constant used here comes
//! from splitting the Fourier integral of `|F rho|^2 |xi|^-2` at radius `r`
//! and choosing `r` so that the coefficient of `I` is exactly `eps`:
//!
//! * `gamma < 2`: `W <= A r^-a I + B r^(n-2)` with
//!   `A = n(n-2) omega_n M^(2-gamma) C_HLP^gamma`, `a = 2 + n(gamma-2)`,
//!   `B = n^2 (n-2) omega_n^2 M^2`; `r = (A/eps)^(1/a)`.
//! * `gamma >= 2`: `W <= n(n-2) omega_n r^-2 (I + (gamma-2) M/(gamma-1)) + B r^(n-2)`;
//!   `r^2 = n(n-2) omega_n / eps`.
//!
//! When `gamma > n/2` the HLS route `W <= C1 ||rho||_gamma^theta`, `theta < 1`,
//! plus Young's inequality gives a second constant, reported alongside.

use alloc::format;
use serde::Serialize;

use super::hls::check_density;
use super::{Margin, TOL_NUM};
use crate::constants::{c2, c2_gamma_bound, hls_theta, minimize_hls, unit_ball_measure, OmegaConvention};
use crate::error::{Error, Result};
use crate::grid::{RadialGrid, Shells};
use crate::math::{powf, sqrt};
use crate::model::ModelParams;
use crate::quadrature::{integrate_cells, interaction_cells, lp_norm_cells};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma36Branch {
    /// `2(1 - 1/n) < gamma < 2`: Hardy-Littlewood-Paley on high frequencies.
    Fourier,
    /// `gamma >= 2`: `rho^2 <= ((gamma-2) rho + rho^gamma)/(gamma-1)`.
    Interpolation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma36Report {
    pub epsilon: f64,
    pub branch: Lemma36Branch,
    pub c_hlp: f64,
    /// Splitting radius in frequency space.
    pub radius: f64,
    pub c_eps: f64,
    pub interaction: f64,
    pub internal: f64,
    pub mass: f64,
    /// `W <= eps I + C(eps)`.
    pub constructive: Margin,
    /// `W <= I + C2`: the `eps = 1` form with the printed constant.
    pub printed: Option<Margin>,
    /// Constant from the `gamma > n/2` route, when available.
    pub remark_c: Option<f64>,
    pub remark: Option<Margin>,
}

/// `C(eps)` for mass `m`, the branch and the splitting radius.
pub fn lemma36_constant(n: usize, gamma: f64, mass: f64, c_hlp: f64, epsilon: f64) -> (f64, Lemma36Branch, f64) {
    let nf = n as f64;
    let w = unit_ball_measure(n);
    let big_b = nf * nf * (nf - 2.0) * w * w * mass * mass;
    if gamma < 2.0 {
        let a_coef = nf * (nf - 2.0) * w * powf(mass, 2.0 - gamma) * powf(c_hlp, gamma);
        let a = 2.0 + nf * (gamma - 2.0);
        let r = powf(a_coef / epsilon, 1.0 / a);
        (big_b * powf(r, nf - 2.0), Lemma36Branch::Fourier, r)
    } else {
        let r = sqrt(nf * (nf - 2.0) * w / epsilon);
        let c = epsilon * (gamma - 2.0) * mass / (gamma - 1.0) + big_b * powf(r, nf - 2.0);
        (c, Lemma36Branch::Interpolation, r)
    }
}

pub fn verify_lemma36(
    rho: &[f64],
    grid: &RadialGrid,
    params: &ModelParams,
    epsilon: f64,
    c_hlp: f64,
    convention: OmegaConvention,
) -> Result<Lemma36Report> {
    let n = params.n();
    let g = params.gamma();
    let bound = c2_gamma_bound(n);
    if !(g > bound) {
        return Err(Error::InfeasibleGamma { gamma: g, bound });
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon must be > 0, got {epsilon}")));
    }
    check_density(rho, grid)?;
    let sh = Shells::new(grid, n);
    let mass = integrate_cells(rho, &sh);
    let w = interaction_cells(rho, &sh);
    let internal = powf(lp_norm_cells(rho, &sh, g), g) / (g - 1.0);
    let (c_eps, branch, radius) = lemma36_constant(n, g, mass, c_hlp, epsilon);
    let rhs = epsilon * internal + c_eps;
    let printed = c2(n, g, mass, c_hlp).map(|(c, _)| Margin::relative(w, internal + c));

    let (remark_c, remark) = if g > n as f64 / 2.0 {
        let c1 = minimize_hls(n, g, convention)?.c_hls * powf(mass, 2.0 - hls_theta(n, g));
        let s = hls_theta(n, g) / g;
        // max_I (K I^s - eps I) with K = C1 (gamma-1)^s
        let k = c1 * powf(g - 1.0, s);
        let c = epsilon * (1.0 - s) / s * powf(k * s / epsilon, 1.0 / (1.0 - s));
        (Some(c), Some(Margin::relative(w, epsilon * internal + c)))
    } else {
        (None, None)
    };

    Ok(Lemma36Report {
        epsilon,
        branch,
        c_hlp,
        radius,
        c_eps,
        interaction: w,
        internal,
        mass,
        constructive: Margin::new(w, rhs, rhs.abs(), TOL_NUM),
        printed,
        remark_c,
        remark,
    })
}
