//! Initial-data profiles: density, velocity and entropy laws sampled onto a
//! radial grid.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::math::{exp, ln, powi};
use crate::model::ModelParams;
use crate::state::{tail_start, RadialState, Thermo, DEFAULT_TAIL_TOL};

/// Piecewise-linear table `r -> value` covering `[0, r_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    r: Vec<f64>,
    values: Vec<f64>,
}

impl Table {
    /// Abscissae must be strictly increasing with at least two points.
    pub fn new(r: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if r.len() != values.len() || r.len() < 2 {
            return Err(Error::InvalidProfile(format!(
                "table needs matching columns of length >= 2 (got {} and {})",
                r.len(),
                values.len()
            )));
        }
        if r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidProfile("table radii must be strictly increasing".into()));
        }
        if r.iter().chain(&values).any(|x| !x.is_finite()) {
            return Err(Error::InvalidProfile("table contains non-finite entries".into()));
        }
        Ok(Self { r, values })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = self.r.partition_point(|&r| r <= x);
        if k == 0 {
            return self.values[0];
        }
        if k == self.r.len() {
            return self.values[k - 1];
        }
        let (r0, r1) = (self.r[k - 1], self.r[k]);
        let w = (x - r0) / (r1 - r0);
        self.values[k - 1] * (1.0 - w) + self.values[k] * w
    }

    fn covers(&self, r_max: f64) -> bool {
        self.r[0] <= 0.0 && *self.r.last().unwrap() >= r_max
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DensityLaw {
    /// `amplitude * exp(-(r / width)^2)`.
    Gaussian { amplitude: f64, width: f64 },
    /// `amplitude` on `r <= radius`, zero beyond.
    Ball { amplitude: f64, radius: f64 },
    Tabulated(Table),
}

#[derive(Debug, Clone, PartialEq)]
pub enum VelocityLaw {
    Zero,
    /// `u_r = alpha * r`.
    Linear { alpha: f64 },
    Tabulated(Table),
}

#[derive(Debug, Clone, PartialEq)]
pub enum EntropyLaw {
    Constant(f64),
    Tabulated(Table),
}

impl EntropyLaw {
    /// Constant entropy giving `p = k rho^gamma` in the full system.
    pub fn from_pressure_scale(k: f64, params: &ModelParams) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::InvalidProfile(format!("pressure scale must be > 0, got {k}")));
        }
        Ok(Self::Constant(params.c_nu() * ln(k)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSpec {
    pub density: DensityLaw,
    pub velocity: VelocityLaw,
    pub entropy: EntropyLaw,
    pub tail_tol: f64,
}

impl ProfileSpec {
    pub fn new(density: DensityLaw) -> Self {
        Self {
            density,
            velocity: VelocityLaw::Zero,
            entropy: EntropyLaw::Constant(0.0),
            tail_tol: DEFAULT_TAIL_TOL,
        }
    }

    pub fn gaussian(amplitude: f64, width: f64) -> Self {
        Self::new(DensityLaw::Gaussian { amplitude, width })
    }

    pub fn ball(amplitude: f64, radius: f64) -> Self {
        Self::new(DensityLaw::Ball { amplitude, radius })
    }

    pub fn with_velocity(mut self, velocity: VelocityLaw) -> Self {
        self.velocity = velocity;
        self
    }

    pub fn with_entropy(mut self, entropy: EntropyLaw) -> Self {
        self.entropy = entropy;
        self
    }

    pub fn with_tail_tol(mut self, tail_tol: f64) -> Self {
        self.tail_tol = tail_tol;
        self
    }

    pub fn validate(&self, grid: &RadialGrid) -> Result<()> {
        match &self.density {
            DensityLaw::Gaussian { amplitude, width: size } | DensityLaw::Ball { amplitude, radius: size } => {
                if !(*amplitude > 0.0) || !amplitude.is_finite() {
                    return Err(Error::NonPositiveAmplitude(*amplitude));
                }
                if !(*size > 0.0) || !size.is_finite() {
                    return Err(Error::InvalidProfile(format!("width/radius must be > 0, got {size}")));
                }
            }
            DensityLaw::Tabulated(t) => {
                if !t.covers(grid.r_max()) {
                    return Err(Error::InvalidProfile("density table must cover [0, r_max]".into()));
                }
                if t.values.iter().any(|&v| v < 0.0) {
                    return Err(Error::InvalidProfile("tabulated density must be nonnegative".into()));
                }
                if t.values.iter().all(|&v| v == 0.0) {
                    return Err(Error::NonPositiveAmplitude(0.0));
                }
            }
        }
        for table in [
            match &self.velocity {
                VelocityLaw::Tabulated(t) => Some(t),
                _ => None,
            },
            match &self.entropy {
                EntropyLaw::Tabulated(t) => Some(t),
                _ => None,
            },
        ]
        .into_iter()
        .flatten()
        {
            if !table.covers(grid.r_max()) {
                return Err(Error::InvalidProfile("tables must cover [0, r_max]".into()));
            }
        }
        if !(self.tail_tol > 0.0) {
            return Err(Error::InvalidProfile(format!("tail_tol must be > 0, got {}", self.tail_tol)));
        }
        Ok(())
    }
}

const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Shell averages `(1 / V_i) * integral of f over cell i` in `R^n`, using
/// five-point Gauss-Legendre on `r^(n-1) f(r)` per cell.
pub fn cell_averages(grid: &RadialGrid, n: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let ni = n as i32;
    (0..grid.cells())
        .map(|i| {
            let (a, b) = (grid.edge(i), grid.edge(i + 1));
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            let integral: f64 = GL_NODES
                .iter()
                .zip(GL_WEIGHTS)
                .map(|(&x, w)| {
                    let r = mid + half * x;
                    w * powi(r, ni - 1) * f(r)
                })
                .sum::<f64>()
                * half;
            integral * n as f64 / (powi(b, ni) - powi(a, ni))
        })
        .collect()
}

/// Exact shell averages of `amplitude * 1[r <= radius]`.
pub fn ball_averages(grid: &RadialGrid, n: usize, amplitude: f64, radius: f64) -> Vec<f64> {
    let ni = n as i32;
    (0..grid.cells())
        .map(|i| {
            let (a, b) = (grid.edge(i), grid.edge(i + 1));
            if b <= radius {
                amplitude
            } else if a >= radius {
                0.0
            } else {
                amplitude * (powi(radius, ni) - powi(a, ni)) / (powi(b, ni) - powi(a, ni))
            }
        })
        .collect()
}

/// Density as shell averages, velocity and entropy sampled at cell centres.
pub fn build_profile(spec: &ProfileSpec, grid: &RadialGrid, params: &ModelParams) -> Result<RadialState> {
    spec.validate(grid)?;
    let n = params.n();
    let rho = match &spec.density {
        DensityLaw::Gaussian { amplitude, width } => {
            let (a, w) = (*amplitude, *width);
            cell_averages(grid, n, |r| a * exp(-(r / w) * (r / w)))
        }
        DensityLaw::Ball { amplitude, radius } => ball_averages(grid, n, *amplitude, *radius),
        DensityLaw::Tabulated(t) => cell_averages(grid, n, |r| t.eval(r).max(0.0)),
    };
    check_tail(&rho, grid, spec.tail_tol)?;

    let centers = grid.centers();
    let u_r = match &spec.velocity {
        VelocityLaw::Zero => alloc::vec![0.0; grid.cells()],
        VelocityLaw::Linear { alpha } => centers.iter().map(|r| alpha * r).collect(),
        VelocityLaw::Tabulated(t) => centers.iter().map(|&r| t.eval(r)).collect(),
    };
    let s = match &spec.entropy {
        EntropyLaw::Constant(s0) => alloc::vec![*s0; grid.cells()],
        EntropyLaw::Tabulated(t) => centers.iter().map(|&r| t.eval(r)).collect(),
    };
    Ok(RadialState {
        rho,
        u_r,
        thermo: Thermo::Entropy(s),
        phi: None,
        time: 0.0,
    })
}

/// Fails when density in the outermost 5% of cells exceeds `tail_tol * max`.
pub fn check_tail(rho: &[f64], grid: &RadialGrid, tail_tol: f64) -> Result<()> {
    let peak = rho.iter().copied().fold(0.0, f64::max);
    if peak <= 0.0 {
        return Ok(());
    }
    let start = tail_start(rho.len());
    let (cell, ratio) = (start..rho.len())
        .map(|i| (i, rho[i] / peak))
        .fold((start, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    if ratio > tail_tol {
        return Err(Error::TailViolation {
            ratio,
            tol: tail_tol,
            radius: grid.center(cell),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ForceSign, System};
    use alloc::vec;
    use approx::assert_relative_eq;

    fn params() -> ModelParams {
        ModelParams::new(3, 5.0 / 3.0, ForceSign::Attractive, System::Full).unwrap()
    }

    #[test]
    fn gaussian_tracks_exp_minus_r_squared() {
        let grid = RadialGrid::new(6.0, 600).unwrap();
        let state = build_profile(&ProfileSpec::gaussian(1.0, 1.0), &grid, &params()).unwrap();
        for (rho, r) in state.rho.iter().zip(grid.centers()) {
            assert!((rho - (-r * r).exp()).abs() < 1e-4);
        }
        assert!(state.u_r.iter().all(|&u| u == 0.0));
    }

    #[test]
    fn ball_is_exact_volume_fraction() {
        let grid = RadialGrid::new(2.0, 10).unwrap();
        let state = build_profile(&ProfileSpec::ball(1.0, 0.9), &grid, &params()).unwrap();
        assert_eq!(state.rho[..4], [1.0; 4]);
        assert_relative_eq!(state.rho[4], (0.729 - 0.512) / (1.0 - 0.512), epsilon = 1e-14);
        assert!(state.rho[5..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn wide_gaussian_violates_tail() {
        let grid = RadialGrid::new(3.0, 300).unwrap();
        let err = build_profile(&ProfileSpec::gaussian(1.0, 1.0), &grid, &params()).unwrap_err();
        assert!(matches!(err, Error::TailViolation { .. }));
    }

    #[test]
    fn amplitude_must_be_positive() {
        let grid = RadialGrid::new(3.0, 30).unwrap();
        let err = build_profile(&ProfileSpec::ball(0.0, 1.0), &grid, &params()).unwrap_err();
        assert_eq!(err, Error::NonPositiveAmplitude(0.0));
    }

    #[test]
    fn linear_velocity_and_pressure_scale() {
        let grid = RadialGrid::new(2.0, 16).unwrap();
        let p = params();
        let spec = ProfileSpec::ball(1.0, 1.0)
            .with_velocity(VelocityLaw::Linear { alpha: 1.0 })
            .with_entropy(EntropyLaw::from_pressure_scale(0.5, &p).unwrap());
        let state = build_profile(&spec, &grid, &p).unwrap();
        assert_eq!(state.u_r, grid.centers());
        let pressure = state.pressure(&p);
        assert_relative_eq!(pressure[0], 0.5, epsilon = 1e-14);
        assert_eq!(pressure[15], 0.0);
    }

    #[test]
    fn tables_interpolate_and_clamp() {
        let t = Table::new(vec![0.0, 1.0, 2.0], vec![1.0, 3.0, 0.0]).unwrap();
        assert_eq!(t.eval(0.5), 2.0);
        assert_eq!(t.eval(1.5), 1.5);
        assert_eq!(t.eval(5.0), 0.0);
        assert!(Table::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn tabulated_density_must_cover_domain() {
        let grid = RadialGrid::new(3.0, 30).unwrap();
        let t = Table::new(vec![0.0, 1.0], vec![1.0, 0.0]).unwrap();
        let err = build_profile(&ProfileSpec::new(DensityLaw::Tabulated(t)), &grid, &params());
        assert!(matches!(err, Err(Error::InvalidProfile(_))));
    }
}
