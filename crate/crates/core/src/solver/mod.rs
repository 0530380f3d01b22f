//! Radial finite-volume integrator for the full and isentropic systems.
//!
//! Conservative variables `(rho, rho u, E)` on shells, Rusanov fluxes on
//! MUSCL-reconstructed primitives, SSP-RK2 in time. The potential force is
//! the exact enclosed-mass force of the current density at every stage.

mod flux;

pub use flux::{rusanov, Limiter, Primitive};

use alloc::vec;
use alloc::vec::Vec;
use serde::Serialize;

use crate::diagnostics::{velocity_gradient_l2, Sample};
use crate::error::{Error, Result};
use crate::grid::{RadialGrid, Shells};
use crate::math::{ceil, powf};
use crate::model::{ModelParams, System};
use crate::poisson::{force_cells, potential_cells};
use crate::state::{RadialState, Thermo};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FluxKind {
    #[default]
    Rusanov,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    pub cfl: f64,
    pub t_end: f64,
    /// Density floor relative to the initial peak density.
    pub density_floor: f64,
    pub flux: FluxKind,
    pub limiter: Limiter,
    /// Diagnostics are sampled every `output_stride` macro steps.
    pub output_stride: usize,
    /// Number of equal macro steps; derived from the initial CFL bound when
    /// `None` (rounded up to a multiple of `output_stride`).
    pub macro_steps: Option<usize>,
    /// Gradient blow-up threshold as a multiple of the initial gradient scale.
    pub blowup_factor: f64,
    /// Cells below this fraction of the current peak density count as vacuum.
    pub vacuum_fraction: f64,
    /// The blow-up detector ignores cells below this fraction of the peak.
    pub detector_fraction: f64,
    /// Add the work term `delta rho u dPhi/dr` to the energy equation
    /// (not part of the printed system; for comparison runs only).
    pub potential_work: bool,
    /// Switch off the potential force entirely (pure Euler), a test hook.
    pub force_enabled: bool,
    pub max_substeps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            cfl: 0.4,
            t_end: 0.2,
            density_floor: 1e-14,
            flux: FluxKind::Rusanov,
            limiter: Limiter::MonotonizedCentral,
            output_stride: 1,
            macro_steps: None,
            blowup_factor: 1e3,
            vacuum_fraction: 1e-6,
            detector_fraction: 1e-3,
            potential_work: false,
            force_enabled: true,
            max_substeps: 100_000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.into()));
        if !(self.cfl > 0.0 && self.cfl <= 0.9) {
            return bad("cfl must lie in (0, 0.9]");
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return bad("t_end must be > 0");
        }
        if !(self.density_floor > 0.0 && self.density_floor <= 1e-10) {
            return bad("density_floor must lie in (0, 1e-10] (relative to the peak density)");
        }
        if self.output_stride == 0 {
            return bad("output_stride must be >= 1");
        }
        if self.macro_steps == Some(0) {
            return bad("macro_steps must be >= 1");
        }
        if !(self.blowup_factor > 1.0) {
            return bad("blowup_factor must be > 1");
        }
        if !(self.vacuum_fraction > 0.0 && self.vacuum_fraction < 1.0) {
            return bad("vacuum_fraction must lie in (0, 1)");
        }
        if !(self.detector_fraction > 0.0 && self.detector_fraction < 1.0) {
            return bad("detector_fraction must lie in (0, 1)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum StopReason {
    TEndReached,
    GradientBlowUp { max_gradient: f64, threshold: f64 },
    PositivityFailure { cell: usize },
    CflFailure,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub series: Vec<Sample>,
    /// `int |d u / dr|^2` at each sample.
    pub velocity_gradient_l2: Vec<f64>,
    /// Minimum entropy over the support at each sample (full system).
    pub min_entropy: Vec<Option<f64>>,
    pub stop_reason: StopReason,
    #[serde(skip)]
    pub final_state: RadialState,
    pub final_time: f64,
    pub macro_steps: usize,
    pub macro_dt: f64,
    pub substeps: usize,
    /// Mass that left through `r_max`.
    pub outflow_mass: f64,
    /// Net internal energy added by the pressure floor (full system only).
    pub floor_energy: f64,
    /// Largest density, relative to the peak, of a cell where the pressure
    /// floor acted on a negative internal energy.
    pub floor_max_density: f64,
}

/// Conservative state on the grid. `energy` is empty in the isentropic system.
#[derive(Debug, Clone, PartialEq)]
struct Conserved {
    rho: Vec<f64>,
    mom: Vec<f64>,
    energy: Vec<f64>,
}

const JUMP_RATIO: f64 = 10.0;

struct Integrator<'a> {
    params: &'a ModelParams,
    cfg: &'a SolverConfig,
    shells: Shells,
    floor: f64,
    entropy_floor: f64,
}

struct Rhs {
    d: Conserved,
    outflow: f64,
}

struct Advanced {
    state: Conserved,
    outflow: f64,
    injected: f64,
    floor_density: f64,
}

impl<'a> Integrator<'a> {
    fn full(&self) -> bool {
        self.params.system() == System::Full
    }

    fn cells(&self) -> usize {
        self.shells.len()
    }

    fn primitive(&self, u: &Conserved, i: usize) -> Primitive {
        let g = self.params.gamma();
        let rho = u.rho[i];
        let vel = if rho > 0.0 { u.mom[i] / rho } else { 0.0 };
        let p = if self.full() {
            (g - 1.0) * (u.energy[i] - 0.5 * u.mom[i] * vel)
        } else {
            powf(rho.max(0.0), g)
        };
        Primitive { rho, u: vel, p }
    }

    fn primitives(&self, u: &Conserved) -> Vec<Primitive> {
        (0..self.cells()).map(|i| self.primitive(u, i)).collect()
    }

    fn max_speed(&self, u: &Conserved) -> f64 {
        let g = self.params.gamma();
        self.primitives(u).iter().map(|q| q.signal_speed(g)).fold(0.0, f64::max)
    }

    fn rhs(&self, u: &Conserved) -> Rhs {
        let g = self.params.gamma();
        let m = self.cells();
        let full = self.full();
        let q = self.primitives(u);
        let limiter = self.cfg.limiter;

        // Ghosts: reflection at the centre, zero gradient at r_max.
        let at = |k: isize| -> Primitive {
            if k < 0 {
                Primitive { u: -q[0].u, ..q[0] }
            } else if k as usize >= m {
                q[m - 1]
            } else {
                q[k as usize]
            }
        };
        let mut left_face = Vec::with_capacity(m);
        let mut right_face = Vec::with_capacity(m);
        for i in 0..m {
            let k = i as isize;
            let (a, b, c) = (at(k - 1), at(k), at(k + 1));
            let s_rho = limiter.slope(b.rho - a.rho, c.rho - b.rho);
            let s_u = limiter.slope(b.u - a.u, c.u - b.u);
            let s_p = if full { limiter.slope(b.p - a.p, c.p - b.p) } else { 0.0 };
            let make = |sign: f64| {
                let rho = b.rho + sign * 0.5 * s_rho;
                let p = if full { b.p + sign * 0.5 * s_p } else { powf(rho.max(0.0), g) };
                Primitive { rho, u: b.u + sign * 0.5 * s_u, p }
            };
            let (lo, hi) = (make(-1.0), make(1.0));
            // Vacuum fronts: adjacent densities differing by more than
            // JUMP_RATIO get piecewise-constant data.
            let smooth = a.rho.min(c.rho) * JUMP_RATIO > a.rho.max(b.rho).max(c.rho);
            if smooth && lo.rho > 0.0 && hi.rho > 0.0 && lo.p >= 0.0 && hi.p >= 0.0 {
                left_face.push(lo);
                right_face.push(hi);
            } else {
                left_face.push(b);
                right_face.push(b);
            }
        }

        // fluxes[j] is the flux through edge j (area 0 at j = 0).
        let mut fluxes = vec![[0.0; 3]; m + 1];
        for j in 1..=m {
            let l = right_face[j - 1];
            let r = if j < m { left_face[j] } else { q[m - 1] };
            fluxes[j] = rusanov(&l, &r, g).0;
        }

        let force = if self.cfg.force_enabled {
            force_cells(&u.rho, &self.shells)
        } else {
            vec![0.0; m]
        };
        let delta = self.params.delta();
        let sh = &self.shells;
        let mut d = Conserved {
            rho: vec![0.0; m],
            mom: vec![0.0; m],
            energy: if full { vec![0.0; m] } else { Vec::new() },
        };
        for i in 0..m {
            let (al, ar, v) = (sh.areas[i], sh.areas[i + 1], sh.volumes[i]);
            let div = |k: usize| (ar * fluxes[i + 1][k] - al * fluxes[i][k]) / v;
            d.rho[i] = -div(0);
            d.mom[i] = -div(1) + q[i].p * (ar - al) / v + delta * u.rho[i] * force[i];
            if full {
                d.energy[i] = -div(2);
                if self.cfg.potential_work {
                    d.energy[i] += delta * u.mom[i] * force[i];
                }
            }
        }
        Rhs { d, outflow: sh.areas[m] * fluxes[m][0] }
    }

    /// `a * x + b * (y + dt * dy)` with floors. Returns the state and the
    /// internal energy added by the pressure floor; fails on genuine
    /// negativity of the density.
    fn combine(
        &self,
        x: &Conserved,
        y: &Conserved,
        dy: &Conserved,
        a: f64,
        b: f64,
        dt: f64,
    ) -> core::result::Result<(Conserved, f64, f64), usize> {
        let m = self.cells();
        let g = self.params.gamma();
        let lin = |xs: &[f64], ys: &[f64], ds: &[f64]| -> Vec<f64> {
            (0..xs.len()).map(|i| a * xs[i] + b * (ys[i] + dt * ds[i])).collect()
        };
        let mut out = Conserved {
            rho: lin(&x.rho, &y.rho, &dy.rho),
            mom: lin(&x.mom, &y.mom, &dy.mom),
            energy: lin(&x.energy, &y.energy, &dy.energy),
        };
        let peak = out.rho.iter().copied().fold(0.0, f64::max);
        let vacuum = self.cfg.vacuum_fraction * peak;
        let mut injected = 0.0;
        let mut floor_density: f64 = 0.0;
        for i in 0..m {
            let finite = out.rho[i].is_finite() && out.mom[i].is_finite() && (!self.full() || out.energy[i].is_finite());
            if !finite || out.rho[i] < -vacuum {
                return Err(i);
            }
            let floored = out.rho[i] < self.floor;
            if floored {
                out.rho[i] = self.floor;
                out.mom[i] = 0.0;
            }
            if self.full() {
                let kinetic = if out.rho[i] > 0.0 { 0.5 * out.mom[i] * out.mom[i] / out.rho[i] } else { 0.0 };
                let internal = out.energy[i] - kinetic;
                let min_internal = self.floor_pressure(out.rho[i]) / (g - 1.0);
                if !floored && internal < 0.0 && out.rho[i] > self.cfg.detector_fraction * peak {
                    return Err(i);
                }
                if (floored || internal < 0.0) && self.floor > 0.0 {
                    injected += (min_internal - internal) * self.shells.volumes[i];
                    if !floored && peak > 0.0 {
                        floor_density = floor_density.max(out.rho[i] / peak);
                    }
                    out.energy[i] = kinetic + min_internal;
                }
            }
        }
        Ok((out, injected, floor_density))
    }

    fn floor_pressure(&self, rho: f64) -> f64 {
        self.entropy_floor * powf(rho, self.params.gamma())
    }

    /// One SSP-RK2 step.
    fn advance(&self, u: &Conserved, dt: f64) -> core::result::Result<Advanced, usize> {
        let k0 = self.rhs(u);
        let (u1, e1, d1) = self.combine(u, u, &k0.d, 0.0, 1.0, dt)?;
        let k1 = self.rhs(&u1);
        let (u2, e2, d2) = self.combine(u, &u1, &k1.d, 0.5, 0.5, dt)?;
        Ok(Advanced {
            state: u2,
            outflow: 0.5 * dt * (k0.outflow + k1.outflow),
            injected: 0.5 * e1 + e2,
            floor_density: d1.max(d2),
        })
    }

    fn to_state(&self, u: &Conserved, t: f64) -> RadialState {
        let q = self.primitives(u);
        RadialState {
            rho: u.rho.clone(),
            u_r: q.iter().map(|q| q.u).collect(),
            thermo: Thermo::Pressure(q.iter().map(|q| q.p.max(0.0)).collect()),
            phi: Some(potential_cells(&u.rho, &self.shells)),
            time: t,
        }
    }

    /// Largest compressive gradient `max(-du/dr)` over cells above the vacuum
    /// threshold. Expansion into vacuum has unbounded `du/dr > 0` at early
    /// times without any loss of regularity, so only compression counts.
    fn max_gradient(&self, u: &Conserved) -> f64 {
        let q = self.primitives(u);
        let m = q.len();
        let h = self.shells.dr;
        let peak = u.rho.iter().copied().fold(0.0, f64::max);
        let cut = self.cfg.detector_fraction * peak;
        (0..m)
            .filter(|&i| u.rho[i] > cut)
            .map(|i| {
                let d = match i {
                    0 => (q[1].u + q[0].u) / (2.0 * h),
                    i if i == m - 1 => (q[i].u - q[i - 1].u) / h,
                    i => (q[i + 1].u - q[i - 1].u) / (2.0 * h),
                };
                -d
            })
            .fold(0.0, f64::max)
    }
}

fn conserved_from_state(state: &RadialState, params: &ModelParams, floor: f64, entropy_floor: f64) -> Conserved {
    let g = params.gamma();
    let p = state.pressure(params);
    let mut c = Conserved { rho: Vec::new(), mom: Vec::new(), energy: Vec::new() };
    for i in 0..state.rho.len() {
        let (rho, u) = if state.rho[i] < floor { (floor, 0.0) } else { (state.rho[i], state.u_r[i]) };
        c.rho.push(rho);
        c.mom.push(rho * u);
        if params.system() == System::Full {
            let p = if state.rho[i] < floor { entropy_floor * powf(floor, g) } else { p[i] };
            c.energy.push(0.5 * rho * u * u + p / (g - 1.0));
        }
    }
    c
}

fn prepare<'a>(state: &RadialState, grid: &RadialGrid, params: &'a ModelParams, cfg: &'a SolverConfig) -> Result<(Integrator<'a>, Conserved)> {
    cfg.validate()?;
    grid.check_len(state.rho.len())?;
    grid.check_len(state.u_r.len())?;
    let peak = state.max_density();
    if !(peak >= 0.0) || !peak.is_finite() {
        return Err(Error::InvalidProfile("initial density is not finite".into()));
    }
    let floor = cfg.density_floor * peak;
    let entropy_floor = match params.system() {
        System::Full => {
            let s1 = state.min_entropy(params).unwrap_or(0.0);
            crate::math::exp(s1 / params.c_nu())
        }
        System::Isentropic => 1.0,
    };
    let integrator = Integrator { params, cfg, shells: Shells::new(grid, params.n()), floor, entropy_floor };
    let u = conserved_from_state(state, params, floor, entropy_floor);
    Ok((integrator, u))
}

/// A single SSP-RK2 step with the CFL time step of the current state.
pub fn step(state: &RadialState, grid: &RadialGrid, params: &ModelParams, cfg: &SolverConfig) -> Result<RadialState> {
    let (it, u) = prepare(state, grid, params, cfg)?;
    let speed = it.max_speed(&u);
    if !(speed > 0.0) {
        return Ok(it.to_state(&u, state.time));
    }
    let dt = cfg.cfl * grid.dr() / speed;
    match it.advance(&u, dt) {
        Ok(next) => Ok(it.to_state(&next.state, state.time + dt)),
        Err(cell) => Err(Error::PositivityFailure { cell, t: state.time + dt }),
    }
}

/// Integrate to `cfg.t_end` or until the classical-solution proxy fails.
pub fn run(state0: &RadialState, grid: &RadialGrid, params: &ModelParams, cfg: &SolverConfig) -> Result<RunResult> {
    let (it, mut u) = prepare(state0, grid, params, cfg)?;
    let h = grid.dr();
    let t0 = state0.time;
    let speed0 = it.max_speed(&u);
    let stride = cfg.output_stride;
    let macro_steps = match cfg.macro_steps {
        Some(k) => k.div_ceil(stride) * stride,
        None => {
            let dt_cfl = cfg.cfl * h / speed0.max(1e-300);
            let k = (ceil(cfg.t_end / dt_cfl) as usize).max(1);
            k.div_ceil(stride) * stride
        }
    };
    let dt = cfg.t_end / macro_steps as f64;

    let c_max0 = it.primitives(&u).iter().map(|q| q.sound_speed(params.gamma())).fold(0.0, f64::max);
    let threshold = cfg.blowup_factor * it.max_gradient(&u).max(c_max0 / grid.r_max());

    let mut series = Vec::new();
    let mut grad_l2 = Vec::new();
    let mut min_entropy = Vec::new();
    let mut record = |state: &RadialState| -> Result<()> {
        series.push(Sample::new(state, grid, params)?);
        grad_l2.push(velocity_gradient_l2(state, grid, params.n())?);
        min_entropy.push(match params.system() {
            System::Full => state.min_entropy(params),
            System::Isentropic => None,
        });
        Ok(())
    };
    record(&it.to_state(&u, t0))?;

    let mut t = t0;
    let mut substeps = 0usize;
    let mut outflow = 0.0;
    let mut injected = 0.0;
    let mut floor_density: f64 = 0.0;
    let mut stop = StopReason::TEndReached;
    'outer: for k in 1..=macro_steps {
        let target = t0 + dt * k as f64;
        let mut taken = 0usize;
        while target - t > 1e-14 * dt {
            let speed = it.max_speed(&u);
            let dt_cfl = if speed > 0.0 { cfg.cfl * h / speed } else { f64::INFINITY };
            let rem = target - t;
            let n_sub = ceil(rem / dt_cfl).max(1.0);
            if !(n_sub.is_finite()) || taken as f64 + n_sub > cfg.max_substeps as f64 || rem / n_sub < 1e-15 * dt {
                stop = StopReason::CflFailure;
                break 'outer;
            }
            let dts = rem / n_sub;
            match it.advance(&u, dts) {
                Ok(next) => {
                    u = next.state;
                    outflow += next.outflow;
                    injected += next.injected;
                    floor_density = floor_density.max(next.floor_density);
                }
                Err(cell) => {
                    stop = StopReason::PositivityFailure { cell };
                    break 'outer;
                }
            }
            t = if n_sub == 1.0 { target } else { t + dts };
            taken += 1;
            substeps += 1;
        }
        t = target;
        let grad = it.max_gradient(&u);
        if k % stride == 0 {
            record(&it.to_state(&u, t))?;
        }
        if grad > threshold {
            stop = StopReason::GradientBlowUp { max_gradient: grad, threshold };
            break;
        }
    }
    let final_state = it.to_state(&u, t);
    Ok(RunResult {
        series,
        velocity_gradient_l2: grad_l2,
        min_entropy,
        stop_reason: stop,
        final_state,
        final_time: t,
        macro_steps,
        macro_dt: dt,
        substeps,
        outflow_mass: outflow,
        floor_energy: injected,
        floor_max_density: floor_density,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ForceSign;
    use crate::profile::{build_profile, EntropyLaw, ProfileSpec};

    fn iep() -> ModelParams {
        ModelParams::new(3, 5.0 / 3.0, ForceSign::Attractive, System::Isentropic).unwrap()
    }

    fn full() -> ModelParams {
        ModelParams::new(3, 5.0 / 3.0, ForceSign::Attractive, System::Full).unwrap()
    }

    fn gaussian(grid: &RadialGrid, params: &ModelParams) -> RadialState {
        build_profile(&ProfileSpec::gaussian(1.0, 1.0), grid, params).unwrap()
    }

    fn mass(state: &RadialState, grid: &RadialGrid) -> f64 {
        let sh = Shells::new(grid, 3);
        state.rho.iter().zip(&sh.volumes).map(|(r, v)| r * v).sum()
    }

    #[test]
    fn vacuum_is_a_fixed_point() {
        let grid = RadialGrid::new(2.0, 32).unwrap();
        for params in [iep(), full()] {
            let state = RadialState {
                rho: vec![0.0; 32],
                u_r: vec![0.0; 32],
                thermo: Thermo::Pressure(vec![0.0; 32]),
                phi: None,
                time: 0.0,
            };
            let next = step(&state, &grid, &params, &SolverConfig::default()).unwrap();
            assert!(next.rho.iter().chain(&next.u_r).all(|&x| x == 0.0));
        }
    }

    #[test]
    fn uniform_rest_state_is_preserved_without_force() {
        let grid = RadialGrid::new(1.0, 40).unwrap();
        let state = RadialState {
            rho: vec![1.3; 40],
            u_r: vec![0.0; 40],
            thermo: Thermo::Pressure(vec![0.7; 40]),
            phi: None,
            time: 0.0,
        };
        let cfg = SolverConfig { force_enabled: false, ..Default::default() };
        let next = step(&state, &grid, &full(), &cfg).unwrap();
        let p = next.pressure(&full());
        for ((rho, u), p) in next.rho.iter().zip(&next.u_r).zip(&p) {
            assert!((rho - 1.3).abs() < 1e-13);
            assert!(u.abs() < 1e-13);
            assert!((p - 0.7).abs() < 1e-13);
        }
    }

    #[test]
    fn force_free_step_conserves_mass() {
        // r_max = 5 keeps every cell above the density floor
        let grid = RadialGrid::new(5.0, 200).unwrap();
        let params = full();
        let state = gaussian(&grid, &params);
        let cfg = SolverConfig { force_enabled: false, ..Default::default() };
        let next = step(&state, &grid, &params, &cfg).unwrap();
        assert!(next.time > 0.0);
        let (m0, m1) = (mass(&state, &grid), mass(&next, &grid));
        assert!((m1 - m0).abs() <= 1e-14 * m0, "{m0} {m1}");
        // pressure gradient pushes the gas outwards
        assert!(next.u_r[50] > 0.0);
    }

    #[test]
    fn attractive_force_pulls_gas_inwards() {
        let grid = RadialGrid::new(6.0, 200).unwrap();
        let params = ModelParams::new(3, 1.2, ForceSign::Attractive, System::Isentropic).unwrap();
        let state = build_profile(&ProfileSpec::gaussian(4.0, 1.0), &grid, &params).unwrap();
        let next = step(&state, &grid, &params, &SolverConfig::default()).unwrap();
        assert!(next.u_r[30] < 0.0);
    }

    #[test]
    fn self_convergence_on_smooth_data() {
        let params = iep();
        let cfg = SolverConfig { t_end: 0.05, ..Default::default() };
        let solve = |cells: usize| {
            let grid = RadialGrid::new(6.0, cells).unwrap();
            let res = run(&gaussian(&grid, &params), &grid, &params, &cfg).unwrap();
            assert_eq!(res.stop_reason, StopReason::TEndReached);
            res.final_state.rho
        };
        let reference = solve(1024);
        let coarse_error = |cells: usize| {
            let rho = solve(cells);
            let k = 1024 / cells;
            let h = 6.0 / cells as f64;
            (0..cells)
                .map(|i| {
                    let avg: f64 = reference[i * k..(i + 1) * k].iter().sum::<f64>() / k as f64;
                    (rho[i] - avg).abs() * h
                })
                .sum::<f64>()
        };
        let e = [coarse_error(64), coarse_error(128), coarse_error(256)];
        assert!(e[0] / e[1] > 3.0 && e[1] / e[2] > 3.0, "{e:?}");
    }

    #[test]
    fn run_samples_are_uniform_and_conserve_mass() {
        let grid = RadialGrid::new(6.0, 256).unwrap();
        let params = iep();
        let cfg = SolverConfig { output_stride: 3, ..Default::default() };
        let res = run(&gaussian(&grid, &params), &grid, &params, &cfg).unwrap();
        assert_eq!(res.stop_reason, StopReason::TEndReached);
        assert_eq!(res.macro_steps % 3, 0);
        assert_eq!(res.series.len(), res.macro_steps / 3 + 1);
        assert!((res.final_time - 0.2).abs() < 1e-14);
        let m0 = res.series[0].quantities.m;
        for w in res.series.windows(2) {
            assert!(w[1].quantities.t > w[0].quantities.t);
            assert!((w[1].quantities.m - m0).abs() <= 1e-12 * m0);
        }
        assert!(res.outflow_mass.abs() < 1e-12);
    }

    #[test]
    fn work_term_conserves_total_energy() {
        let grid = RadialGrid::new(6.0, 256).unwrap();
        let params = full();
        let cfg = SolverConfig { potential_work: true, ..Default::default() };
        let res = run(&gaussian(&grid, &params), &grid, &params, &cfg).unwrap();
        assert_eq!(res.stop_reason, StopReason::TEndReached);
        let e0 = res.series[0].quantities.e_delta;
        let drift = res.series.iter().map(|s| (s.quantities.e_delta - e0).abs()).fold(0.0, f64::max);
        assert!(drift < 1e-3 * e0.abs(), "{drift}");
    }

    #[test]
    fn printed_collapse_loses_positivity() {
        let params = full();
        let grid = RadialGrid::new(2.0, 128).unwrap();
        let spec = ProfileSpec::ball(1.0, 1.0).with_entropy(EntropyLaw::from_pressure_scale(0.5, &params).unwrap());
        let state = build_profile(&spec, &grid, &params).unwrap();
        let cfg = SolverConfig { t_end: 1.0, ..Default::default() };
        let res = run(&state, &grid, &params, &cfg).unwrap();
        assert!(matches!(res.stop_reason, StopReason::PositivityFailure { .. }), "{:?}", res.stop_reason);
        assert!(res.final_time > 0.3 && res.final_time < 0.36, "{}", res.final_time);
    }

    #[test]
    fn config_validation() {
        let bad = [
            SolverConfig { cfl: 0.95, ..Default::default() },
            SolverConfig { t_end: 0.0, ..Default::default() },
            SolverConfig { density_floor: 1e-9, ..Default::default() },
            SolverConfig { output_stride: 0, ..Default::default() },
            SolverConfig { macro_steps: Some(0), ..Default::default() },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err());
        }
        assert!(SolverConfig::default().validate().is_ok());
    }
}
