//! Uniform radial grids and their `n`-dimensional shell geometry.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::powi;
use crate::special::unit_ball_measure;

/// Uniform cell-centred grid on `[0, r_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    r_max: f64,
    cells: usize,
}

impl RadialGrid {
    pub const MIN_CELLS: usize = 8;

    pub fn new(r_max: f64, cells: usize) -> Result<Self> {
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::InvalidGrid(format!("r_max must be > 0, got {r_max}")));
        }
        if cells < Self::MIN_CELLS {
            return Err(Error::InvalidGrid(format!(
                "need at least {} cells, got {cells}",
                Self::MIN_CELLS
            )));
        }
        Ok(Self { r_max, cells })
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn dr(&self) -> f64 {
        self.r_max / self.cells as f64
    }

    /// Edge `i` for `i in 0..=cells`; `edge(0) == 0`, `edge(cells) == r_max`.
    pub fn edge(&self, i: usize) -> f64 {
        if i == self.cells {
            self.r_max
        } else {
            i as f64 * self.dr()
        }
    }

    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dr()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.cells).map(|i| self.center(i)).collect()
    }

    pub fn edges(&self) -> Vec<f64> {
        (0..=self.cells).map(|i| self.edge(i)).collect()
    }

    /// Same domain with `factor` times as many cells.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            r_max: self.r_max,
            cells: self.cells * factor.max(1),
        }
    }

    /// Same cell count on `[0, lambda * r_max]`.
    pub fn dilated(&self, lambda: f64) -> Result<Self> {
        Self::new(self.r_max * lambda, self.cells)
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if len != self.cells {
            return Err(Error::GridMismatch {
                expected: self.cells,
                got: len,
            });
        }
        Ok(())
    }
}

/// Shell volumes and face areas of a radial grid embedded in `R^n`.
#[derive(Debug, Clone)]
pub struct Shells {
    pub n: usize,
    pub omega_n: f64,
    pub dr: f64,
    pub centers: Vec<f64>,
    pub edges: Vec<f64>,
    /// `omega_n (b^n - a^n)` for each cell `[a, b]`.
    pub volumes: Vec<f64>,
    /// `n omega_n r^(n-1)` at each edge.
    pub areas: Vec<f64>,
}

impl Shells {
    pub fn new(grid: &RadialGrid, n: usize) -> Self {
        let omega_n = unit_ball_measure(n);
        let edges = grid.edges();
        let ni = n as i32;
        let volumes = edges
            .windows(2)
            .map(|w| omega_n * (powi(w[1], ni) - powi(w[0], ni)))
            .collect();
        let areas = edges
            .iter()
            .map(|&r| n as f64 * omega_n * powi(r, ni - 1))
            .collect();
        Self {
            n,
            omega_n,
            dr: grid.dr(),
            centers: grid.centers(),
            edges,
            volumes,
            areas,
        }
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Surface area of the unit sphere, `n omega_n`.
    pub fn sphere_area(&self) -> f64 {
        self.n as f64 * self.omega_n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn rejects_bad_grids() {
        assert!(RadialGrid::new(0.0, 16).is_err());
        assert!(RadialGrid::new(1.0, 7).is_err());
        assert!(RadialGrid::new(f64::INFINITY, 16).is_err());
    }

    #[test]
    fn edges_are_strictly_increasing_and_span_domain() {
        let g = RadialGrid::new(3.7, 37).unwrap();
        let e = g.edges();
        assert_eq!(e[0], 0.0);
        assert_eq!(*e.last().unwrap(), 3.7);
        assert!(e.windows(2).all(|w| w[1] > w[0]));
        assert!((g.center(0) - g.dr() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn shell_volumes_sum_to_ball() {
        let g = RadialGrid::new(2.0, 64).unwrap();
        let s = Shells::new(&g, 3);
        let total: f64 = s.volumes.iter().sum();
        assert!((total - 4.0 * PI / 3.0 * 8.0).abs() < 1e-11);
        assert_eq!(s.areas[0], 0.0);
        assert!((s.areas[64] - 4.0 * PI * 4.0).abs() < 1e-12);
    }
}
