//! Physical quantities, virial functionals and their finite-difference rates.

use alloc::vec;
use alloc::vec::Vec;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{RadialGrid, Shells};
use crate::model::ModelParams;
use crate::state::RadialState;

/// Mass, moments and energies of one state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantitySet {
    pub t: f64,
    #[serde(rename = "M")]
    pub m: f64,
    /// Total momentum; identically zero for radial flows.
    #[serde(rename = "P")]
    pub p: Vec<f64>,
    /// `int rho u . x`.
    #[serde(rename = "F")]
    pub f: f64,
    /// `(1/2) int rho |x|^2`.
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "E_k")]
    pub e_k: f64,
    /// `int rho e` with `e = p / ((gamma - 1) rho)`.
    #[serde(rename = "E_i")]
    pub e_i: f64,
    /// `(1 / (gamma - 1)) int p`.
    #[serde(rename = "I")]
    pub i: f64,
    /// `int rho Phi`.
    pub rho_phi: f64,
    /// `-(delta / 2) int rho Phi`.
    #[serde(rename = "E_p")]
    pub e_p: f64,
    #[serde(rename = "E_delta")]
    pub e_delta: f64,
    #[serde(rename = "IE_delta")]
    pub ie_delta: f64,
}

impl QuantitySet {
    /// `4 G E_k - F^2`, nonnegative by Cauchy-Schwarz.
    pub fn cauchy_schwarz_margin(&self) -> f64 {
        4.0 * self.g * self.e_k - self.f * self.f
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionalSet {
    pub t: f64,
    #[serde(rename = "H")]
    pub h_delta: f64,
    #[serde(rename = "IH")]
    pub ih_delta: f64,
    #[serde(rename = "J")]
    pub j_delta: f64,
    #[serde(rename = "IJ")]
    pub ij_delta: f64,
}

/// One row of a diagnostics time series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub quantities: QuantitySet,
    pub functionals: FunctionalSet,
}

impl Sample {
    pub fn new(state: &RadialState, grid: &RadialGrid, params: &ModelParams) -> Result<Self> {
        let quantities = compute_quantities(state, grid, params)?;
        let functionals = compute_functionals(&quantities, params);
        Ok(Self { quantities, functionals })
    }
}

/// Midpoint-rule quantities; `F`, `G` and `E_k` use the same centre weights
/// so that `F^2 <= 4 G E_k` holds exactly in the discrete sums.
pub fn compute_quantities(state: &RadialState, grid: &RadialGrid, params: &ModelParams) -> Result<QuantitySet> {
    let phi = state.phi.as_ref().ok_or(Error::MissingPotential)?;
    grid.check_len(state.rho.len())?;
    grid.check_len(state.u_r.len())?;
    grid.check_len(phi.len())?;
    let shells = Shells::new(grid, params.n());
    let pressure = state.pressure(params);
    grid.check_len(pressure.len())?;

    let (mut m, mut f, mut g2, mut u2, mut pv, mut rho_phi) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for k in 0..grid.cells() {
        let v = shells.volumes[k];
        let (rho, u, r) = (state.rho[k], state.u_r[k], shells.centers[k]);
        m += rho * v;
        f += rho * u * r * v;
        g2 += rho * r * r * v;
        u2 += rho * u * u * v;
        pv += pressure[k] * v;
        rho_phi += rho * phi[k] * v;
    }
    let i = pv / (params.gamma() - 1.0);
    let e_k = 0.5 * u2;
    let e_p = -0.5 * params.delta() * rho_phi;
    let q = QuantitySet {
        t: state.time,
        m,
        p: vec![0.0; params.n()],
        f,
        g: 0.5 * g2,
        e_k,
        e_i: i,
        i,
        rho_phi,
        e_p,
        e_delta: e_k + i + e_p,
        ie_delta: e_k + i + e_p,
    };
    let all = [q.m, q.f, q.g, q.e_k, q.i, q.rho_phi];
    if let Some(k) = all.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite(k));
    }
    Ok(q)
}

pub fn compute_functionals(q: &QuantitySet, params: &ModelParams) -> FunctionalSet {
    let n = params.n_f64();
    let potential = -params.delta() * (n - 2.0) / 2.0 * q.rho_phi;
    let s = q.t + 1.0;
    FunctionalSet {
        t: q.t,
        h_delta: 2.0 * q.e_k + n * (params.gamma() - 1.0) * q.e_i + potential,
        ih_delta: 2.0 * q.e_k + n * (params.gamma() - 1.0) * q.i + potential,
        j_delta: q.g - s * q.f + s * s * q.e_delta,
        ij_delta: q.g - s * q.f + s * s * q.ie_delta,
    }
}

/// `int |d u_r / dr|^2 dx`, monitored but never gated on.
pub fn velocity_gradient_l2(state: &RadialState, grid: &RadialGrid, n: usize) -> Result<f64> {
    grid.check_len(state.u_r.len())?;
    let shells = Shells::new(grid, n);
    let u = &state.u_r;
    let h = grid.dr();
    let m = u.len();
    // u is odd in r, so the ghost value behind the centre is -u_0.
    let total = (0..m)
        .map(|k| {
            let du = match k {
                0 => (u[1] + u[0]) / (2.0 * h),
                k if k == m - 1 => (u[k] - u[k - 1]) / h,
                k => (u[k + 1] - u[k - 1]) / (2.0 * h),
            };
            du * du * shells.volumes[k]
        })
        .sum();
    Ok(total)
}

/// Central-difference time derivatives of the conserved and virial
/// quantities at interior samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rates {
    pub t: f64,
    pub dm: f64,
    pub df: f64,
    pub dg: f64,
    pub de_delta: f64,
    pub die_delta: f64,
    /// `d(E_k + E_i)/dt`.
    pub de_kinetic_internal: f64,
    /// Values at the same sample, for residuals `dG/dt - F` and `dF/dt - IH`.
    pub f: f64,
    pub h_delta: f64,
    pub ih_delta: f64,
}

impl Rates {
    pub fn moment_residual(&self) -> f64 {
        self.dg - self.f
    }

    pub fn momentum_weight_residual(&self) -> f64 {
        self.df - self.ih_delta
    }
}

/// Relative spacing tolerance for "uniform" sample times.
pub const SPACING_TOL: f64 = 1e-9;

/// Series must have at least 3 samples with uniform spacing; returns
/// `len - 2` rates.
pub fn finite_difference_rates(series: &[Sample]) -> Result<Vec<Rates>> {
    if series.len() < 3 {
        return Err(Error::SeriesTooShort { needed: 3, got: series.len() });
    }
    let t = |k: usize| series[k].quantities.t;
    let dt = t(1) - t(0);
    if !(dt > 0.0) {
        return Err(Error::NonUniformSpacing { index: 1 });
    }
    for k in 2..series.len() {
        if ((t(k) - t(k - 1)) - dt).abs() > SPACING_TOL * dt.abs().max(t(k).abs()) {
            return Err(Error::NonUniformSpacing { index: k });
        }
    }
    Ok(series
        .windows(3)
        .map(|w| {
            let (a, c, b) = (&w[0].quantities, &w[1], &w[2].quantities);
            let d = |x: f64, y: f64| (y - x) / (b.t - a.t);
            Rates {
                t: c.quantities.t,
                dm: d(a.m, b.m),
                df: d(a.f, b.f),
                dg: d(a.g, b.g),
                de_delta: d(a.e_delta, b.e_delta),
                die_delta: d(a.ie_delta, b.ie_delta),
                de_kinetic_internal: d(a.e_k + a.e_i, b.e_k + b.e_i),
                f: c.quantities.f,
                h_delta: c.functionals.h_delta,
                ih_delta: c.functionals.ih_delta,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ForceSign, System};
    use crate::poisson::solve_potential;
    use crate::profile::{build_profile, EntropyLaw, ProfileSpec, VelocityLaw};
    use core::f64::consts::PI;

    fn sample_at(t: f64, g: f64) -> Sample {
        let q = QuantitySet {
            t,
            m: 1.0,
            p: vec![0.0; 3],
            f: 0.0,
            g,
            e_k: 0.0,
            e_i: 0.0,
            i: 0.0,
            rho_phi: 0.0,
            e_p: 0.0,
            e_delta: 0.0,
            ie_delta: 0.0,
        };
        let params = ModelParams::new(3, 2.0, ForceSign::Repulsive, System::Isentropic).unwrap();
        let functionals = compute_functionals(&q, &params);
        Sample { quantities: q, functionals }
    }

    #[test]
    fn ball_quantities() {
        let params = ModelParams::new(3, 5.0 / 3.0, ForceSign::Attractive, System::Full).unwrap();
        let grid = RadialGrid::new(2.0, 1024).unwrap();
        let spec = ProfileSpec::ball(1.0, 1.0).with_entropy(EntropyLaw::from_pressure_scale(0.5, &params).unwrap());
        let mut state = build_profile(&spec, &grid, &params).unwrap();
        state.phi = Some(solve_potential(&state.rho, &grid, 3).unwrap());
        let q = compute_quantities(&state, &grid, &params).unwrap();
        assert!((q.m - 4.0 * PI / 3.0).abs() < 1e-12);
        assert!((q.g - 2.0 * PI / 5.0).abs() < 1e-5);
        assert_eq!(q.e_k, 0.0);
        assert!((q.e_i - PI).abs() < 1e-12);
        assert!((q.e_p + 16.0 * PI * PI / 15.0).abs() < 1e-10);
        assert_eq!(q.e_delta, q.e_k + q.e_i + q.e_p);
        let h = compute_functionals(&q, &params);
        assert!((h.ij_delta - (q.g + q.ie_delta)).abs() < 1e-14);
    }

    #[test]
    fn linear_velocity_saturates_cauchy_schwarz() {
        let params = ModelParams::new(3, 5.0 / 3.0, ForceSign::Attractive, System::Isentropic).unwrap();
        let grid = RadialGrid::new(6.0, 600).unwrap();
        let spec = ProfileSpec::gaussian(1.0, 1.0).with_velocity(VelocityLaw::Linear { alpha: 1.0 });
        let mut state = build_profile(&spec, &grid, &params).unwrap();
        state.phi = Some(solve_potential(&state.rho, &grid, 3).unwrap());
        let q = compute_quantities(&state, &grid, &params).unwrap();
        let target = 1.5 * PI.powf(1.5);
        assert!((q.f - target).abs() < 1e-4 * target);
        assert!((q.e_k - 0.75 * PI.powf(1.5)).abs() < 1e-4 * target);
        assert!(q.cauchy_schwarz_margin().abs() <= 1e-12 * 4.0 * q.g * q.e_k);
    }

    #[test]
    fn potential_is_required() {
        let params = ModelParams::new(3, 2.0, ForceSign::Attractive, System::Isentropic).unwrap();
        let grid = RadialGrid::new(2.0, 16).unwrap();
        let state = build_profile(&ProfileSpec::ball(1.0, 1.0), &grid, &params).unwrap();
        assert_eq!(compute_quantities(&state, &grid, &params), Err(Error::MissingPotential));
    }

    #[test]
    fn quadratic_rate_is_exact() {
        let series: Vec<Sample> = (0..21).map(|k| {
            let t = k as f64 * 0.1;
            sample_at(t, t * t)
        }).collect();
        let rates = finite_difference_rates(&series).unwrap();
        assert_eq!(rates.len(), 19);
        let at_one = rates.iter().find(|r| (r.t - 1.0).abs() < 1e-12).unwrap();
        assert!((at_one.dg - 2.0).abs() < 1e-12);
        assert!(rates.iter().all(|r| r.dm == 0.0));
    }

    #[test]
    fn spacing_errors() {
        let short = vec![sample_at(0.0, 0.0), sample_at(0.1, 0.0)];
        assert!(matches!(finite_difference_rates(&short), Err(Error::SeriesTooShort { .. })));
        let uneven = vec![sample_at(0.0, 0.0), sample_at(0.1, 0.0), sample_at(0.3, 0.0)];
        assert_eq!(finite_difference_rates(&uneven), Err(Error::NonUniformSpacing { index: 2 }));
    }

    #[test]
    fn velocity_gradient_of_linear_field() {
        let params = ModelParams::new(3, 2.0, ForceSign::Attractive, System::Isentropic).unwrap();
        let grid = RadialGrid::new(2.0, 64).unwrap();
        let spec = ProfileSpec::ball(1.0, 1.0).with_velocity(VelocityLaw::Linear { alpha: 1.0 });
        let state = build_profile(&spec, &grid, &params).unwrap();
        let v = velocity_gradient_l2(&state, &grid, 3).unwrap();
        assert!((v - 4.0 * PI / 3.0 * 8.0).abs() < 1e-10, "{v}");
    }
}
