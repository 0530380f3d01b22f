//! Radial potential `Phi = G * rho` with `G(x) = -|x|^(2-n)`, so that
//! `Laplacian Phi = n (n - 2) omega_n rho`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::grid::{RadialGrid, Shells};
use crate::math::{powi, sqrt};
use crate::quadrature::check_finite;

/// Potential as shell averages over each cell, exact for the
/// piecewise-constant density, so `sum rho_i Phi_i V_i = -interaction_integral`.
///
/// `Phi(r) = -n omega_n [ r^(2-n) int_0^r s^(n-1) rho ds + int_r^inf s rho ds ]`,
/// with no mass beyond `r_max`.
pub fn solve_potential(rho: &[f64], grid: &RadialGrid, n: usize) -> Result<Vec<f64>> {
    grid.check_len(rho.len())?;
    check_finite(rho)?;
    Ok(potential_cells(rho, &Shells::new(grid, n)))
}

/// Point values of the same potential at cell centres.
pub fn potential_at_centers(rho: &[f64], grid: &RadialGrid, n: usize) -> Result<Vec<f64>> {
    grid.check_len(rho.len())?;
    check_finite(rho)?;
    Ok(potential_points(rho, &Shells::new(grid, n)))
}

// outer[i] = sum_{k > i} rho_k (b_k^2 - a_k^2) / 2
fn outer_sums(rho: &[f64], e: &[f64]) -> Vec<f64> {
    let m = rho.len();
    let mut outer = vec![0.0; m];
    for i in (0..m.saturating_sub(1)).rev() {
        let k = i + 1;
        outer[i] = outer[k] + rho[k] * (e[k + 1] * e[k + 1] - e[k] * e[k]) / 2.0;
    }
    outer
}

pub(crate) fn potential_cells(rho: &[f64], shells: &Shells) -> Vec<f64> {
    let nf = shells.n as f64;
    let ni = shells.n as i32;
    let e = &shells.edges;
    let outer = outer_sums(rho, e);
    let mut inner = 0.0;
    let mut phi = Vec::with_capacity(rho.len());
    for (i, &r) in rho.iter().enumerate() {
        let (a, b) = (e[i], e[i + 1]);
        let (a2, b2) = (a * a, b * b);
        let (an, bn) = (powi(a, ni), powi(b, ni));
        let top = (powi(b, ni + 2) - an * a2) / (nf + 2.0);
        // int_a^b r m(r) dr and int_a^b r^(n-1) (exterior part) dr
        let enclosed = inner * (b2 - a2) / 2.0 + r / nf * (top - an * (b2 - a2) / 2.0);
        let exterior = outer[i] * (bn - an) / nf + r / 2.0 * (b2 * (bn - an) / nf - top);
        phi.push(-nf * nf * shells.omega_n * (enclosed + exterior) / (bn - an));
        inner += r * (bn - an) / nf;
    }
    phi
}

fn potential_points(rho: &[f64], shells: &Shells) -> Vec<f64> {
    let nw = shells.sphere_area();
    let nf = shells.n as f64;
    let ni = shells.n as i32;
    let e = &shells.edges;

    let outer = outer_sums(rho, e);
    let mut inner = 0.0;
    let mut phi = Vec::with_capacity(rho.len());
    for i in 0..rho.len() {
        let (a, b, c) = (e[i], e[i + 1], shells.centers[i]);
        let an = powi(a, ni);
        let enclosed = inner + rho[i] * (powi(c, ni) - an) / nf;
        let exterior = rho[i] * (b * b - c * c) / 2.0 + outer[i];
        phi.push(-nw * (powi(c, 2 - ni) * enclosed + exterior));
        inner += rho[i] * (powi(b, ni) - an) / nf;
    }
    phi
}

/// Exact `d Phi / dr = (n - 2) n omega_n r^(1-n) int_0^r s^(n-1) rho ds` at
/// cell centres.
pub fn enclosed_mass_force(rho: &[f64], grid: &RadialGrid, n: usize) -> Result<Vec<f64>> {
    grid.check_len(rho.len())?;
    check_finite(rho)?;
    Ok(force_cells(rho, &Shells::new(grid, n)))
}

pub(crate) fn force_cells(rho: &[f64], shells: &Shells) -> Vec<f64> {
    let nf = shells.n as f64;
    let ni = shells.n as i32;
    let coef = (nf - 2.0) * shells.sphere_area() / nf;
    let e = &shells.edges;
    let mut inner = 0.0;
    let mut force = Vec::with_capacity(rho.len());
    for (i, &r) in rho.iter().enumerate() {
        let (a, c) = (e[i], shells.centers[i]);
        let an = powi(a, ni);
        force.push(coef * (inner + r * (powi(c, ni) - an)) / powi(c, ni - 1));
        inner += r * (powi(e[i + 1], ni) - an);
    }
    force
}

/// Relative L^2 residual of the conservative radial Laplacian of `phi`
/// against `n (n - 2) omega_n rho`, over all cells except the outermost.
pub fn laplacian_residual(rho: &[f64], phi: &[f64], grid: &RadialGrid, n: usize) -> Result<f64> {
    grid.check_len(rho.len())?;
    grid.check_len(phi.len())?;
    check_finite(rho)?;
    check_finite(phi)?;
    let shells = Shells::new(grid, n);
    let h = shells.dr;
    let kappa = n as f64 * (n as f64 - 2.0) * shells.omega_n;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..rho.len() - 1 {
        let right = shells.areas[i + 1] * (phi[i + 1] - phi[i]) / h;
        let left = if i == 0 { 0.0 } else { shells.areas[i] * (phi[i] - phi[i - 1]) / h };
        let lap = (right - left) / shells.volumes[i];
        let source = kappa * rho[i];
        num += (lap - source) * (lap - source) * shells.volumes[i];
        den += source * source * shells.volumes[i];
    }
    if num == 0.0 {
        return Ok(0.0);
    }
    Ok(if den > 0.0 { sqrt(num / den) } else { sqrt(num) })
}

/// `d Phi / dr` by second-order central differences, one-sided at both ends.
pub fn radial_force(phi: &[f64], grid: &RadialGrid) -> Result<Vec<f64>> {
    grid.check_len(phi.len())?;
    let h = grid.dr();
    let m = phi.len();
    Ok((0..m)
        .map(|i| match i {
            0 => (-3.0 * phi[0] + 4.0 * phi[1] - phi[2]) / (2.0 * h),
            i if i == m - 1 => (3.0 * phi[i] - 4.0 * phi[i - 1] + phi[i - 2]) / (2.0 * h),
            i => (phi[i + 1] - phi[i - 1]) / (2.0 * h),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{ball_averages, cell_averages};
    use crate::quadrature::interaction_integral;
    use core::f64::consts::PI;

    #[test]
    fn uniform_ball_potential() {
        let grid = RadialGrid::new(2.0, 200).unwrap();
        let rho = ball_averages(&grid, 3, 1.0, 1.0);
        let phi = potential_at_centers(&rho, &grid, 3).unwrap();
        for (r, p) in grid.centers().into_iter().zip(&phi) {
            let exact = if r < 1.0 { -2.0 * PI + 2.0 * PI / 3.0 * r * r } else { -4.0 * PI / 3.0 / r };
            assert!((p - exact).abs() < 1e-12, "r={r}: {p} vs {exact}");
        }
    }

    #[test]
    fn shell_averages_bracket_centre_values() {
        let grid = RadialGrid::new(2.0, 400).unwrap();
        let rho = ball_averages(&grid, 3, 1.0, 1.0);
        let avg = solve_potential(&rho, &grid, 3).unwrap();
        assert!((avg[0] + 2.0 * PI).abs() < 1e-4);
        let ctr = potential_at_centers(&rho, &grid, 3).unwrap();
        let gap = avg.iter().zip(&ctr).map(|(a, c)| (a - c).abs()).fold(0.0, f64::max);
        assert!(gap < 1e-4, "{gap}");
        assert!(avg.iter().all(|&p| p < 0.0));
    }

    #[test]
    fn zero_density_gives_zero_potential() {
        let grid = RadialGrid::new(1.0, 16).unwrap();
        let rho = vec![0.0; 16];
        assert!(solve_potential(&rho, &grid, 3).unwrap().iter().all(|&p| p == 0.0));
        assert_eq!(laplacian_residual(&rho, &rho, &grid, 3).unwrap(), 0.0);
    }

    #[test]
    fn exact_force_matches_closed_form() {
        let grid = RadialGrid::new(2.0, 100).unwrap();
        let rho = ball_averages(&grid, 3, 1.0, 1.0);
        let f = enclosed_mass_force(&rho, &grid, 3).unwrap();
        for (r, f) in grid.centers().into_iter().zip(f) {
            let exact = if r < 1.0 { 4.0 * PI / 3.0 * r } else { 4.0 * PI / 3.0 / (r * r) };
            assert!((f - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn difference_force_is_second_order() {
        let grid = RadialGrid::new(8.0, 400).unwrap();
        let rho = cell_averages(&grid, 3, |r| (-r * r).exp());
        let phi = potential_at_centers(&rho, &grid, 3).unwrap();
        let fd = radial_force(&phi, &grid).unwrap();
        let exact = enclosed_mass_force(&rho, &grid, 3).unwrap();
        let err = fd.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-3, "{err}");
    }

    #[test]
    fn constant_shift_leaves_residual() {
        let grid = RadialGrid::new(8.0, 256).unwrap();
        let rho = cell_averages(&grid, 3, |r| (-r * r).exp());
        let phi = solve_potential(&rho, &grid, 3).unwrap();
        let shifted: Vec<f64> = phi.iter().map(|p| p + 1.0).collect();
        let a = laplacian_residual(&rho, &phi, &grid, 3).unwrap();
        let b = laplacian_residual(&rho, &shifted, &grid, 3).unwrap();
        assert!((a - b).abs() <= 1e-9 * a.max(1e-12));
    }

    #[test]
    fn potential_energy_matches_interaction() {
        let grid = RadialGrid::new(8.0, 256).unwrap();
        let rho = cell_averages(&grid, 4, |r| (-r * r).exp());
        let phi = solve_potential(&rho, &grid, 4).unwrap();
        let shells = Shells::new(&grid, 4);
        let rho_phi: f64 = (0..256).map(|i| rho[i] * phi[i] * shells.volumes[i]).sum();
        let w = interaction_integral(&rho, &grid, 4).unwrap();
        assert!(((w + rho_phi) / w).abs() < 1e-12, "{w} {rho_phi}");
    }
}
