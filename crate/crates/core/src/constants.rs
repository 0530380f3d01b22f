//! Inequality constants and the certificate table `C0..C11`.

use alloc::format;
use serde::Serialize;

use crate::diagnostics::QuantitySet;
use crate::error::{Error, Result};
use crate::math::{exp, powf};
use crate::model::{ModelParams, System};
use crate::special::gamma as gamma_fn;

pub use crate::special::unit_ball_measure;

/// Meaning of `omega_{n-1}` inside the HLS constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmegaConvention {
    /// Unit-ball measure in `R^(n-1)`, the same normalisation as `omega_n`.
    #[default]
    BallMeasure,
    /// Surface area of the unit sphere `S^(n-1)`, i.e. `n omega_n`.
    SphereArea,
}

impl OmegaConvention {
    fn omega(self, n: usize) -> f64 {
        match self {
            Self::BallMeasure => unit_ball_measure(n - 1),
            Self::SphereArea => crate::special::unit_sphere_area(n),
        }
    }
}

const CONSTRAINT_TOL: f64 = 1e-12;

/// `C_HLS = (1/(pq)) (n/(n-l)) (w/n)^(l/n) [((l/n)/(1-1/p))^(l/n) + ((l/n)/(1-1/q))^(l/n)]`.
pub fn hls_constant(p: f64, q: f64, lambda: f64, n: usize, convention: OmegaConvention) -> Result<f64> {
    let nf = n as f64;
    if !(p > 1.0 && p.is_finite() && q > 1.0 && q.is_finite()) {
        return Err(Error::ExponentConstraint(format!("need 1 < p, q < inf, got p={p}, q={q}")));
    }
    if !(lambda > 0.0 && lambda < nf) {
        return Err(Error::ExponentConstraint(format!("need 0 < lambda < n, got {lambda}")));
    }
    let sum = 1.0 / p + 1.0 / q + lambda / nf;
    if (sum - 2.0).abs() > CONSTRAINT_TOL {
        return Err(Error::ExponentConstraint(format!("1/p + 1/q + lambda/n = {sum}, expected 2")));
    }
    Ok(hls_unchecked(p, q, lambda, n, convention))
}

fn hls_unchecked(p: f64, q: f64, lambda: f64, n: usize, convention: OmegaConvention) -> f64 {
    let nf = n as f64;
    let l = lambda / nf;
    1.0 / (p * q) * nf / (nf - lambda)
        * powf(convention.omega(n) / nf, l)
        * (powf(l / (1.0 - 1.0 / p), l) + powf(l / (1.0 - 1.0 / q), l))
}

/// `theta = (n-2) gamma / (n (gamma - 1))`.
pub fn hls_theta(n: usize, gamma: f64) -> f64 {
    let nf = n as f64;
    (nf - 2.0) * gamma / (nf * (gamma - 1.0))
}

/// Smallest `gamma` for which the HLS route is feasible: `2n / (n + 2)`.
pub fn hls_gamma_bound(n: usize) -> f64 {
    2.0 * n as f64 / (n as f64 + 2.0)
}

/// Admissible range of `x = 1/p` with `lambda = n - 2`: both `p` and `q`
/// interpolate between `L^1` and `L^gamma`, and `1/p + 1/q = (n+2)/n`.
/// The ends are closed except where `p` or `q` would equal 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HlsInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

pub fn hls_interval(n: usize, gamma: f64) -> Result<HlsInterval> {
    let nf = n as f64;
    let bound = hls_gamma_bound(n);
    if !(gamma > bound) {
        return Err(Error::InfeasibleGamma { gamma, bound });
    }
    let s = (nf + 2.0) / nf;
    let (a, b) = (1.0 / gamma, 2.0 / nf);
    let (c, d) = (1.0_f64, s - 1.0 / gamma);
    Ok(HlsInterval {
        lo: a.max(b),
        lo_open: b >= a,
        hi: c.min(d),
        hi_open: c <= d,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HlsMinimum {
    pub p: f64,
    pub q: f64,
    pub c_hls: f64,
}

/// Golden-section minimisation of `C_HLS` over the admissible `1/p`.
pub fn minimize_hls(n: usize, gamma: f64, convention: OmegaConvention) -> Result<HlsMinimum> {
    let iv = hls_interval(n, gamma)?;
    let nf = n as f64;
    let s = (nf + 2.0) / nf;
    let lambda = nf - 2.0;
    let eval = |x: f64| hls_unchecked(1.0 / x, 1.0 / (s - x), lambda, n, convention);
    let width = iv.hi - iv.lo;
    let pad = 1e-12 * width.max(1e-300);
    let (mut a, mut b) = (
        if iv.lo_open { iv.lo + pad } else { iv.lo },
        if iv.hi_open { iv.hi - pad } else { iv.hi },
    );
    let phi = 0.5 * (crate::math::sqrt(5.0) - 1.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (eval(c), eval(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-14 * width.max(1.0) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = eval(d);
        }
    }
    let mut best = 0.5 * (a + b);
    let mut best_f = eval(best);
    // Closed endpoints are candidates too.
    for (x, closed) in [(iv.lo, !iv.lo_open), (iv.hi, !iv.hi_open)] {
        if closed && eval(x) < best_f {
            best = x;
            best_f = eval(x);
        }
    }
    Ok(HlsMinimum { p: 1.0 / best, q: 1.0 / (s - best), c_hls: best_f })
}

/// `C8 = 2 omega_n^(2(gamma-1)/((n+2)gamma - n))`.
pub fn chemin_c8(n: usize, gamma: f64) -> f64 {
    let nf = n as f64;
    2.0 * powf(unit_ball_measure(n), 2.0 * (gamma - 1.0) / ((nf + 2.0) * gamma - nf))
}

/// Marcinkiewicz-interpolation bound for the weighted Fourier inequality at
/// exponent `p`: weak (1,1) with constant `omega_n` against `mu = |xi|^(-2n)`,
/// strong (2,2) with constant 1. Returns 1 at `p = 2` (Plancherel).
pub fn hlp_constant_bound(n: usize, p: f64) -> Result<f64> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::ExponentConstraint(format!("need 1 < p <= 2, got {p}")));
    }
    if p == 2.0 {
        return Ok(1.0);
    }
    Ok(2.0 * powf(p / (p - 1.0) + p / (2.0 - p), 1.0 / p) * powf(unit_ball_measure(n), 2.0 / p - 1.0))
}

/// Default `C_HLP` for given parameters: the interpolation bound at
/// `p = gamma` when `gamma < 2` (the only case in which it is used).
pub fn default_c_hlp(params: &ModelParams) -> f64 {
    let g = params.gamma();
    if g < 2.0 {
        hlp_constant_bound(params.n(), g).unwrap_or(1.0)
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum C2Branch {
    /// `2(1 - 1/n) < gamma < 2`, uses `C_HLP`.
    Subquadratic,
    /// `gamma >= 2`.
    Quadratic,
}

/// Lower limit `2(1 - 1/n)` for the energy upper bound.
pub fn c2_gamma_bound(n: usize) -> f64 {
    2.0 * (1.0 - 1.0 / n as f64)
}

/// `C2` as printed; `None` when `gamma <= 2(1 - 1/n)`.
pub fn c2(n: usize, gamma: f64, mass: f64, c_hlp: f64) -> Option<(f64, C2Branch)> {
    let nf = n as f64;
    let w = unit_ball_measure(n);
    if gamma <= c2_gamma_bound(n) {
        return None;
    }
    if gamma < 2.0 {
        let den = 2.0 + nf * (gamma - 1.0);
        let a = (nf - 2.0) / den;
        let b = (nf - 2.0) * (2.0 - gamma) / den;
        let v = 2.0
            * powf(nf, 2.0 + a)
            * powf(nf - 2.0, 1.0 + a)
            * powf(w, 2.0 + a)
            * powf(mass, 2.0 + b)
            * powf(c_hlp, b);
        Some((v, C2Branch::Subquadratic))
    } else {
        let v = 2.0 * mass * (gamma - 2.0)
            + 2.0
                * mass
                * mass
                * powf(nf, 1.0 + nf / 2.0)
                * powf(nf - 2.0, nf / 2.0)
                * powf(w, 1.0 + nf / 2.0)
                * powf(gamma - 1.0, 1.0 - nf / 2.0);
        Some((v, C2Branch::Quadratic))
    }
}

/// Shared factor of `C9` and `C10`.
pub fn c10(n: usize, gamma: f64, mass: f64) -> f64 {
    let nf = n as f64;
    let e = ((nf + 2.0) * gamma - nf) / 2.0;
    powf(gamma_fn(nf / 2.0 + 1.0) / powf(core::f64::consts::PI, nf / 2.0), gamma - 1.0) * powf(mass, e)
        / (powf(2.0, e) * (gamma - 1.0))
}

/// Options for [`build_table`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableOptions {
    pub c_hlp: f64,
    pub omega_convention: OmegaConvention,
}

impl TableOptions {
    pub fn for_params(params: &ModelParams) -> Self {
        Self {
            c_hlp: default_c_hlp(params),
            omega_convention: OmegaConvention::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsTable {
    pub n: usize,
    pub gamma: f64,
    pub delta: f64,
    #[serde(rename = "M0")]
    pub m0: f64,
    #[serde(rename = "F0")]
    pub f0: f64,
    #[serde(rename = "G0")]
    pub g0: f64,
    #[serde(rename = "E_k0")]
    pub e_k0: f64,
    #[serde(rename = "E_i0")]
    pub e_i0: f64,
    #[serde(rename = "E_delta0")]
    pub e_delta0: f64,
    pub omega_n: f64,
    pub s1: f64,
    pub c_nu: f64,
    /// `None` when `gamma <= 2n/(n+2)`.
    pub theta: Option<f64>,
    pub hls_min: Option<HlsMinimum>,
    pub omega_convention: OmegaConvention,
    #[serde(rename = "C_HLP")]
    pub c_hlp: f64,
    #[serde(rename = "C0")]
    pub c0: f64,
    #[serde(rename = "C1")]
    pub c1: Option<f64>,
    #[serde(rename = "C2")]
    pub c2: Option<f64>,
    pub c2_branch: Option<C2Branch>,
    #[serde(rename = "C3")]
    pub c3: Option<f64>,
    /// `min{2, n(gamma-1)} C0`, the lower-bound coefficient.
    #[serde(rename = "C4")]
    pub c4: f64,
    /// `max{2, n(gamma-1)} C0`, the variant printed in the symbol list.
    #[serde(rename = "C4_max")]
    pub c4_max: f64,
    #[serde(rename = "C5")]
    pub c5: f64,
    #[serde(rename = "C6")]
    pub c6: f64,
    #[serde(rename = "C7")]
    pub c7: f64,
    #[serde(rename = "C8")]
    pub c8: f64,
    #[serde(rename = "C9")]
    pub c9: f64,
    #[serde(rename = "C10")]
    pub c10: f64,
    #[serde(rename = "C11")]
    pub c11: f64,
    /// `J_delta(0) = G(0) - F(0) + E_delta(0)`. Both `J(0)` and `IJ(0) = C11`
    /// can be negative when `delta = -1`.
    #[serde(rename = "J0")]
    pub j0: f64,
}

/// Every constant from the initial quantities `q0`, the minimum initial
/// entropy `s1` and the options.
pub fn build_table(q0: &QuantitySet, s1: f64, params: &ModelParams, options: &TableOptions) -> Result<ConstantsTable> {
    if !(options.c_hlp > 0.0) || !options.c_hlp.is_finite() {
        return Err(Error::InvalidArgument(format!("C_HLP must be > 0, got {}", options.c_hlp)));
    }
    if !(q0.m > 0.0) {
        return Err(Error::InvalidArgument(format!("initial mass must be > 0, got {}", q0.m)));
    }
    let n = params.n();
    let nf = params.n_f64();
    let g = params.gamma();
    let m = q0.m;
    let c0 = q0.ie_delta;

    let (theta, hls_min, c1) = match minimize_hls(n, g, options.omega_convention) {
        Ok(h) => {
            let theta = hls_theta(n, g);
            (Some(theta), Some(h), Some(h.c_hls * powf(m, 2.0 - theta)))
        }
        Err(Error::InfeasibleGamma { .. }) => (None, None, None),
        Err(e) => return Err(e),
    };
    let c2 = c2(n, g, m, options.c_hlp);
    let c3 = c2.map(|(c2, _)| {
        (6.0 - nf).max(nf * (2.0 * g - 3.0) + 2.0) * c0 + (4.0 - nf).max(nf * (g - 2.0) + 2.0) * c2
    });
    let ki = q0.e_k + q0.e_i;
    let (lo, hi) = (4.0 - nf, nf * (g - 2.0) + 2.0);
    let c10 = c10(n, g, m);
    let ij0 = q0.g - q0.f + q0.ie_delta;
    Ok(ConstantsTable {
        n,
        gamma: g,
        delta: params.delta(),
        m0: m,
        f0: q0.f,
        g0: q0.g,
        e_k0: q0.e_k,
        e_i0: q0.e_i,
        e_delta0: q0.e_delta,
        omega_n: unit_ball_measure(n),
        s1,
        c_nu: params.c_nu(),
        theta,
        hls_min,
        omega_convention: options.omega_convention,
        c_hlp: options.c_hlp,
        c0,
        c1,
        c2: c2.map(|c| c.0),
        c2_branch: c2.map(|c| c.1),
        c3,
        c4: 2f64.min(nf * (g - 1.0)) * c0,
        c4_max: 2f64.max(nf * (g - 1.0)) * c0,
        c5: 2f64.max(nf * (g - 1.0)) * c0,
        c6: lo.min(hi) * ki + (nf - 2.0) * q0.e_delta,
        c7: lo.max(hi) * ki + (nf - 2.0) * q0.e_delta,
        c8: chemin_c8(n, g),
        c9: exp(s1 / params.c_nu()) * c10,
        c10,
        c11: ij0,
        j0: q0.g - q0.f + q0.e_delta,
    })
}

/// Minimum initial entropy used for `s1`: the minimum of `s0` over the
/// support of the density in the full system, `0` in the isentropic system
/// (`p = rho^gamma`, i.e. `A = 1`).
pub fn initial_entropy_floor(state: &crate::state::RadialState, params: &ModelParams) -> f64 {
    match params.system() {
        System::Full => state.min_entropy(params).unwrap_or(0.0),
        System::Isentropic => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn ball_measures() {
        assert!((unit_ball_measure(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((unit_ball_measure(4) - PI * PI / 2.0).abs() < 1e-14);
        assert!((unit_ball_measure(2) - PI).abs() < 1e-14);
    }

    #[test]
    fn hls_at_symmetric_point() {
        let c = hls_constant(1.2, 1.2, 1.0, 3, OmegaConvention::BallMeasure).unwrap();
        let exact = 25.0 / 36.0 * 1.5 * (PI / 3.0).cbrt() * 2.0 * 2f64.cbrt();
        assert!((c - exact).abs() < 1e-13 * exact);
        assert!((c - 2.6655).abs() < 1e-4);
    }

    #[test]
    fn hls_rejects_bad_exponents() {
        assert!(hls_constant(1.2, 1.3, 1.0, 3, OmegaConvention::BallMeasure).is_err());
        assert!(hls_constant(1.0, 1.5, 1.0, 3, OmegaConvention::BallMeasure).is_err());
        assert!(hls_constant(1.5, 1.5, 3.0, 3, OmegaConvention::BallMeasure).is_err());
    }

    #[test]
    fn hls_minimum_beats_grid_scan() {
        for &(n, g) in &[(3usize, 5.0 / 3.0), (3, 1.3), (4, 1.5), (5, 2.5), (6, 3.0)] {
            let min = minimize_hls(n, g, OmegaConvention::BallMeasure).unwrap();
            let iv = hls_interval(n, g).unwrap();
            let s = (n as f64 + 2.0) / n as f64;
            let scan = (1..10_000)
                .map(|k| iv.lo + (iv.hi - iv.lo) * k as f64 / 10_000.0)
                .map(|x| hls_unchecked(1.0 / x, 1.0 / (s - x), n as f64 - 2.0, n, OmegaConvention::BallMeasure))
                .fold(f64::INFINITY, f64::min);
            assert!(min.c_hls <= scan * (1.0 + 1e-12), "n={n} g={g}: {} vs {scan}", min.c_hls);
            assert!(min.p <= g * (1.0 + 1e-12) && min.q <= g * (1.0 + 1e-12));
        }
    }

    #[test]
    fn hls_infeasible_at_lower_bound() {
        assert!(matches!(
            minimize_hls(3, 1.2, OmegaConvention::BallMeasure),
            Err(Error::InfeasibleGamma { .. })
        ));
    }

    #[test]
    fn chemin_values() {
        assert!((chemin_c8(3, 5.0 / 3.0) - 2.0 * (4.0 * PI / 3.0).powf(0.25)).abs() < 1e-13);
        assert!((chemin_c8(3, 5.0 / 3.0) - 2.8612).abs() < 1e-4);
        assert!((chemin_c8(3, 2.0) - 2.0 * (4.0 * PI / 3.0).powf(2.0 / 7.0)).abs() < 1e-13);
        assert!((chemin_c8(3, 1.0 + 1e-12) - 2.0).abs() < 1e-10);
    }

    #[test]
    fn hlp_bound_endpoints() {
        assert_eq!(hlp_constant_bound(3, 2.0).unwrap(), 1.0);
        assert!(hlp_constant_bound(3, 1.0).is_err());
        let b = hlp_constant_bound(3, 1.5).unwrap();
        let exact = 2.0 * 6f64.powf(2.0 / 3.0) * (4.0 * PI / 3.0).powf(1.0 / 3.0);
        assert!((b - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn c2_branches() {
        assert!(c2(3, 4.0 / 3.0, 1.0, 1.0).is_none());
        assert_eq!(c2(3, 1.5, 1.0, 1.0).unwrap().1, C2Branch::Subquadratic);
        let (v, b) = c2(3, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(b, C2Branch::Quadratic);
        let w = 4.0 * PI / 3.0;
        let exact = 2.0 * 3f64.powf(2.5) * w.powf(2.5);
        assert!((v - exact).abs() < 1e-12 * exact);
    }
}
