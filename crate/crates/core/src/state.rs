//! Radial states and their admissibility checks.

use alloc::vec::Vec;
use serde::Serialize;

use crate::grid::{RadialGrid, Shells};
use crate::math::{exp, ln, powf};
use crate::model::{ModelParams, System};

/// Default relative tail tolerance: `rho <= 1e-6 * max(rho)` near `r_max`.
pub const DEFAULT_TAIL_TOL: f64 = 1e-6;

/// Fraction of outermost cells covered by the tail check.
pub const TAIL_FRACTION: f64 = 0.05;

/// Thermodynamic profile carried alongside density and velocity.
#[derive(Debug, Clone, PartialEq)]
pub enum Thermo {
    /// Pressure per cell.
    Pressure(Vec<f64>),
    /// Entropy per cell; pressure is `exp(s / c_nu) rho^gamma` (full system)
    /// or `rho^gamma` (isentropic system).
    Entropy(Vec<f64>),
}

/// Cell-averaged radial state.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialState {
    pub rho: Vec<f64>,
    pub u_r: Vec<f64>,
    pub thermo: Thermo,
    /// Potential at cell centres, filled by [`crate::poisson::solve_potential`].
    pub phi: Option<Vec<f64>>,
    pub time: f64,
}

impl RadialState {
    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    /// Pressure profile implied by the thermodynamic field.
    pub fn pressure(&self, params: &ModelParams) -> Vec<f64> {
        let gamma = params.gamma();
        match (&self.thermo, params.system()) {
            (Thermo::Pressure(p), _) => p.clone(),
            (Thermo::Entropy(s), System::Full) => self
                .rho
                .iter()
                .zip(s)
                .map(|(&rho, &s)| exp(s / params.c_nu()) * powf(rho.max(0.0), gamma))
                .collect(),
            (Thermo::Entropy(_), System::Isentropic) => {
                self.rho.iter().map(|&rho| powf(rho.max(0.0), gamma)).collect()
            }
        }
    }

    /// Entropy `c_nu ln(p / rho^gamma)` on cells with positive density and
    /// pressure; `None` elsewhere.
    pub fn entropy(&self, params: &ModelParams) -> Vec<Option<f64>> {
        if let (Thermo::Entropy(s), System::Full) = (&self.thermo, params.system()) {
            return self
                .rho
                .iter()
                .zip(s)
                .map(|(&rho, &s)| (rho > 0.0).then_some(s))
                .collect();
        }
        let p = self.pressure(params);
        self.rho
            .iter()
            .zip(&p)
            .map(|(&rho, &p)| {
                (rho > 0.0 && p > 0.0).then(|| params.c_nu() * ln(p / powf(rho, params.gamma())))
            })
            .collect()
    }

    /// Minimum entropy over the support of the density.
    pub fn min_entropy(&self, params: &ModelParams) -> Option<f64> {
        self.entropy(params)
            .into_iter()
            .flatten()
            .fold(None, |acc: Option<f64>, s| Some(acc.map_or(s, |a| a.min(s))))
    }

    pub fn max_density(&self) -> f64 {
        self.rho.iter().copied().fold(0.0, f64::max)
    }
}

/// One admissibility violation reported by [`validate_state`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    LengthMismatch { field: &'static str, expected: usize, got: usize },
    NonFinite { field: &'static str, cell: usize },
    NegativeDensity { cell: usize },
    NegativePressure { cell: usize },
    TailNotNegligible { cell: usize, ratio: f64 },
    InfiniteIntegral { quantity: &'static str },
}

/// Index of the first cell in the tail window (outermost 5%, at least one cell).
pub fn tail_start(cells: usize) -> usize {
    let width = crate::math::ceil(TAIL_FRACTION * cells as f64) as usize;
    cells - width.clamp(1, cells)
}

/// Check the state invariants and the finiteness of `rho |x|^2`, `p`,
/// `rho |u|^2` and (when present) `rho Phi` integrals. Never fails; an empty
/// list means the state is admissible.
pub fn validate_state(
    state: &RadialState,
    grid: &RadialGrid,
    params: &ModelParams,
    tail_tol: f64,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let cells = grid.cells();
    let mut lengths_ok = true;
    let mut check_len = |field: &'static str, got: usize, out: &mut Vec<Violation>| {
        if got != cells {
            out.push(Violation::LengthMismatch { field, expected: cells, got });
            lengths_ok = false;
        }
    };
    check_len("rho", state.rho.len(), &mut out);
    check_len("u_r", state.u_r.len(), &mut out);
    let thermo_len = match &state.thermo {
        Thermo::Pressure(p) => p.len(),
        Thermo::Entropy(s) => s.len(),
    };
    check_len("thermo", thermo_len, &mut out);
    if let Some(phi) = &state.phi {
        check_len("phi", phi.len(), &mut out);
    }
    if !lengths_ok {
        return out;
    }

    let mut finite = true;
    let mut scan = |field: &'static str, v: &[f64], out: &mut Vec<Violation>| {
        for (cell, x) in v.iter().enumerate() {
            if !x.is_finite() {
                out.push(Violation::NonFinite { field, cell });
                finite = false;
            }
        }
    };
    scan("rho", &state.rho, &mut out);
    scan("u_r", &state.u_r, &mut out);
    match &state.thermo {
        Thermo::Pressure(p) => scan("pressure", p, &mut out),
        Thermo::Entropy(s) => scan("entropy", s, &mut out),
    }
    if let Some(phi) = &state.phi {
        scan("phi", phi, &mut out);
    }
    if !finite {
        return out;
    }

    for (cell, &rho) in state.rho.iter().enumerate() {
        if rho < 0.0 {
            out.push(Violation::NegativeDensity { cell });
        }
    }
    let p = state.pressure(params);
    for (cell, &p) in p.iter().enumerate() {
        if p < 0.0 {
            out.push(Violation::NegativePressure { cell });
        }
    }

    let peak = state.max_density();
    if peak > 0.0 {
        for cell in tail_start(cells)..cells {
            let ratio = state.rho[cell] / peak;
            if ratio > tail_tol {
                out.push(Violation::TailNotNegligible { cell, ratio });
            }
        }
    }

    let shells = Shells::new(grid, params.n());
    let integral = |f: &dyn Fn(usize) -> f64| -> f64 {
        (0..cells).map(|i| f(i) * shells.volumes[i]).sum()
    };
    let checks: [(&'static str, f64); 3] = [
        ("rho |x|^2", integral(&|i| state.rho[i] * shells.centers[i] * shells.centers[i])),
        ("p", integral(&|i| p[i])),
        ("rho |u|^2", integral(&|i| state.rho[i] * state.u_r[i] * state.u_r[i])),
    ];
    for (quantity, value) in checks {
        if !value.is_finite() {
            out.push(Violation::InfiniteIntegral { quantity });
        }
    }
    if let Some(phi) = &state.phi {
        if !integral(&|i| state.rho[i] * phi[i]).is_finite() {
            out.push(Violation::InfiniteIntegral { quantity: "rho Phi" });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ForceSign;
    use alloc::vec;

    fn params() -> ModelParams {
        ModelParams::new(3, 5.0 / 3.0, ForceSign::Attractive, System::Full).unwrap()
    }

    #[test]
    fn tail_window_is_outer_five_percent() {
        assert_eq!(tail_start(100), 95);
        assert_eq!(tail_start(8), 7);
        assert_eq!(tail_start(1024), 1024 - 52);
    }

    #[test]
    fn negative_density_is_reported() {
        let grid = RadialGrid::new(1.0, 8).unwrap();
        let mut rho = vec![1.0, 1.0, 1.0, 0.5, 0.0, 0.0, 0.0, 0.0];
        rho[2] = -0.1;
        let state = RadialState {
            rho,
            u_r: vec![0.0; 8],
            thermo: Thermo::Pressure(vec![0.1; 8]),
            phi: None,
            time: 0.0,
        };
        let v = validate_state(&state, &grid, &params(), DEFAULT_TAIL_TOL);
        assert_eq!(v, vec![Violation::NegativeDensity { cell: 2 }]);
    }

    #[test]
    fn nan_is_reported_before_sign_checks() {
        let grid = RadialGrid::new(1.0, 8).unwrap();
        let mut u = vec![0.0; 8];
        u[3] = f64::NAN;
        let state = RadialState {
            rho: vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            u_r: u,
            thermo: Thermo::Pressure(vec![0.0; 8]),
            phi: None,
            time: 0.0,
        };
        let v = validate_state(&state, &grid, &params(), DEFAULT_TAIL_TOL);
        assert_eq!(v, vec![Violation::NonFinite { field: "u_r", cell: 3 }]);
    }

    #[test]
    fn entropy_of_polytropic_state() {
        let p = params();
        let state = RadialState {
            rho: vec![2.0, 0.0],
            u_r: vec![0.0; 2],
            thermo: Thermo::Pressure(vec![2f64.powf(5.0 / 3.0) * 0.5, 0.0]),
            phi: None,
            time: 0.0,
        };
        let s = state.entropy(&p);
        assert!((s[0].unwrap() - 1.5 * 0.5f64.ln()).abs() < 1e-12);
        assert!(s[1].is_none());
    }
}
