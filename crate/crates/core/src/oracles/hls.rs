//! Hardy-Littlewood-Sobolev check and its interpolated form
//! `W(rho) <= C_HLS M^(2 - theta) ||rho||_gamma^theta`.

use alloc::format;
use serde::Serialize;

use super::Margin;
use crate::constants::{hls_constant, hls_interval, hls_theta, minimize_hls, OmegaConvention};
use crate::error::{Error, Result};
use crate::grid::{RadialGrid, Shells};
use crate::math::powf;
use crate::model::ModelParams;
use crate::quadrature::{integrate_cells, interaction_cells, lp_norm_cells};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HlsReport {
    pub p: f64,
    pub q: f64,
    pub c_hls: f64,
    pub theta: f64,
    pub mass: f64,
    pub norm_gamma: f64,
    pub norm_p: f64,
    pub norm_q: f64,
    /// `integral integral rho |x - y|^(2-n) rho`.
    pub interaction: f64,
    /// `W <= C_HLS ||rho||_p ||rho||_q`.
    pub direct: Margin,
    /// `W <= C_HLS M^(2 - theta) ||rho||_gamma^theta`; with the minimising
    /// `(p, q)` the constant is `C1`.
    pub interpolated: Margin,
}

pub(crate) fn check_density(rho: &[f64], grid: &RadialGrid) -> Result<()> {
    grid.check_len(rho.len())?;
    for (i, &r) in rho.iter().enumerate() {
        if !r.is_finite() {
            return Err(Error::NonFinite(i));
        }
        if r < 0.0 {
            return Err(Error::InvalidProfile(format!("negative density {r} at cell {i}")));
        }
    }
    Ok(())
}

/// Check with the minimising exponents, i.e. with the constant `C1`.
pub fn verify_hls(rho: &[f64], grid: &RadialGrid, params: &ModelParams, convention: OmegaConvention) -> Result<HlsReport> {
    let best = minimize_hls(params.n(), params.gamma(), convention)?;
    report(rho, grid, params, best.p, best.q, best.c_hls)
}

/// Check at a given `p` on the constraint curve `1/p + 1/q = (n + 2)/n`.
pub fn verify_hls_at(
    rho: &[f64],
    grid: &RadialGrid,
    params: &ModelParams,
    p: f64,
    convention: OmegaConvention,
) -> Result<HlsReport> {
    let n = params.n();
    let nf = n as f64;
    let iv = hls_interval(n, params.gamma())?;
    let x = 1.0 / p;
    let inside = x > iv.lo - 1e-12 && x < iv.hi + 1e-12 && !(iv.lo_open && x <= iv.lo) && !(iv.hi_open && x >= iv.hi);
    if !inside {
        return Err(Error::ExponentConstraint(format!(
            "1/p = {x} outside the admissible range [{}, {}]",
            iv.lo, iv.hi
        )));
    }
    let q = 1.0 / ((nf + 2.0) / nf - x);
    let c = hls_constant(p, q, nf - 2.0, n, convention)?;
    report(rho, grid, params, p, q, c)
}

fn report(rho: &[f64], grid: &RadialGrid, params: &ModelParams, p: f64, q: f64, c_hls: f64) -> Result<HlsReport> {
    check_density(rho, grid)?;
    let g = params.gamma();
    let sh = Shells::new(grid, params.n());
    let theta = hls_theta(params.n(), g);
    let mass = integrate_cells(rho, &sh);
    let norm_gamma = lp_norm_cells(rho, &sh, g);
    let norm_p = lp_norm_cells(rho, &sh, p);
    let norm_q = lp_norm_cells(rho, &sh, q);
    let w = interaction_cells(rho, &sh);
    let rhs_direct = c_hls * norm_p * norm_q;
    let rhs_interp = c_hls * powf(mass, 2.0 - theta) * powf(norm_gamma, theta);
    Ok(HlsReport {
        p,
        q,
        c_hls,
        theta,
        mass,
        norm_gamma,
        norm_p,
        norm_q,
        interaction: w,
        direct: Margin::relative(w, rhs_direct),
        interpolated: Margin::relative(w, rhs_interp),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ForceSign, System};
    use crate::profile::ball_averages;
    use core::f64::consts::PI;

    fn params(gamma: f64) -> ModelParams {
        ModelParams::new(3, gamma, ForceSign::Attractive, System::Isentropic).unwrap()
    }

    #[test]
    fn unit_ball_both_sides() {
        let grid = RadialGrid::new(2.0, 256).unwrap();
        let rho = ball_averages(&grid, 3, 1.0, 1.0);
        let r = verify_hls(&rho, &grid, &params(5.0 / 3.0), OmegaConvention::default()).unwrap();
        assert!((r.interaction - 32.0 * PI * PI / 15.0).abs() < 1e-10);
        // ||1_B||_gamma = |B|^(1/gamma)
        let vol = 4.0 * PI / 3.0;
        assert!((r.norm_gamma - vol.powf(0.6)).abs() < 1e-12);
        assert!((r.mass - vol).abs() < 1e-12);
        assert!(r.direct.passed && r.interpolated.passed);
        assert!(r.interpolated.margin > 0.0);
    }

    #[test]
    fn zero_density_gives_zero_margin() {
        let grid = RadialGrid::new(1.0, 16).unwrap();
        let r = verify_hls(&[0.0; 16], &grid, &params(5.0 / 3.0), OmegaConvention::default()).unwrap();
        assert_eq!(r.interaction, 0.0);
        assert_eq!(r.interpolated.margin, 0.0);
        assert!(r.interpolated.passed);
    }

    #[test]
    fn minimiser_gives_the_smallest_margin() {
        let grid = RadialGrid::new(3.0, 128).unwrap();
        let rho = ball_averages(&grid, 3, 2.0, 1.5);
        let prm = params(1.5);
        let best = verify_hls(&rho, &grid, &prm, OmegaConvention::default()).unwrap();
        let iv = hls_interval(3, 1.5).unwrap();
        for k in 1..10 {
            let x = iv.lo + (iv.hi - iv.lo) * k as f64 / 10.0;
            let other = verify_hls_at(&rho, &grid, &prm, 1.0 / x, OmegaConvention::default()).unwrap();
            assert!(best.interpolated.margin <= other.interpolated.margin + 1e-12);
        }
    }

    #[test]
    fn rejects_infeasible_gamma_and_bad_exponent() {
        let grid = RadialGrid::new(1.0, 8).unwrap();
        let rho = [1.0; 8];
        assert!(matches!(
            verify_hls(&rho, &grid, &params(1.1), OmegaConvention::default()),
            Err(Error::InfeasibleGamma { .. })
        ));
        assert!(verify_hls_at(&rho, &grid, &params(5.0 / 3.0), 3.0, OmegaConvention::default()).is_err());
        assert!(verify_hls(&[-1.0; 8], &grid, &params(5.0 / 3.0), OmegaConvention::default()).is_err());
    }
}
