//! Chemin's interpolation inequality
//! `||rho||_1 <= C8 ||rho||_gamma^a (integral rho |x|^2)^b` and the internal
//! energy lower bound it feeds.

use serde::Serialize;

use super::hls::check_density;
use super::Margin;
use crate::constants::{c10, chemin_c8};
use crate::error::Result;
use crate::grid::{RadialGrid, Shells};
use crate::math::powf;
use crate::model::ModelParams;
use crate::quadrature::{integrate_cells, lp_norm_cells};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheminReport {
    pub c8: f64,
    pub mass: f64,
    pub norm_gamma: f64,
    /// `integral rho |x|^2 = 2 G`.
    pub second_moment: f64,
    /// `lhs / rhs` of the Chemin inequality; invariant under dilations.
    pub ratio: f64,
    pub chemin: Margin,
    /// `I >= C10 / G^(n(gamma-1)/2)` with `I = integral rho^gamma / (gamma - 1)`
    /// and `C10` as printed.
    pub internal_printed: Margin,
    /// The same with the factor `2^(-n(gamma-1)/2)` that the derivation from
    /// the Chemin inequality produces.
    pub internal_derived: Margin,
}

pub fn verify_chemin(rho: &[f64], grid: &RadialGrid, params: &ModelParams) -> Result<CheminReport> {
    check_density(rho, grid)?;
    let n = params.n();
    let nf = params.n_f64();
    let g = params.gamma();
    let sh = Shells::new(grid, n);
    let mass = integrate_cells(rho, &sh);
    let norm_gamma = lp_norm_cells(rho, &sh, g);
    let moment: f64 = rho.iter().zip(&sh.volumes).zip(&sh.centers).map(|((r, v), c)| r * c * c * v).sum();
    let den = (nf + 2.0) * g - nf;
    let (a, b) = (2.0 * g / den, nf * (g - 1.0) / den);
    let c8 = chemin_c8(n, g);
    let rhs = c8 * powf(norm_gamma, a) * powf(moment, b);
    let ratio = if rhs > 0.0 { mass / rhs } else { 0.0 };

    let internal = powf(norm_gamma, g) / (g - 1.0);
    let k = nf * (g - 1.0) / 2.0;
    let big_g = 0.5 * moment;
    let floor = if big_g > 0.0 { c10(n, g, mass) / powf(big_g, k) } else { 0.0 };
    let derived = floor * powf(2.0, -k);
    Ok(CheminReport {
        c8,
        mass,
        norm_gamma,
        second_moment: moment,
        ratio,
        chemin: Margin::relative(mass, rhs),
        internal_printed: Margin::new(floor, internal, internal.abs(), super::TOL_NUM),
        internal_derived: Margin::new(derived, internal, internal.abs(), super::TOL_NUM),
    })
}
