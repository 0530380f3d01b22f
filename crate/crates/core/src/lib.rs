//! Numerical toolkit for blow-up certificates of compressible Euler–Poisson
//! flows in `n >= 3` dimensions.
//!
//! The crate is `no_std` (it needs `alloc`). Everything operates on radially
//! symmetric profiles stored as cell averages on a uniform radial grid:
//!
//! * [`grid`], [`model`], [`state`], [`profile`]: parameters, grids and states.
//! * [`quadrature`], [`poisson`]: exact shell reductions of `n`-dimensional
//!   integrals, the Newtonian interaction energy and the potential.
//! * [`diagnostics`]: mass, moments, energies and the virial functionals.
//! * [`constants`], [`criteria`]: the certificate constants `C0..C11` and the
//!   theorem-by-theorem blow-up verdicts with lifespan bounds.
//! * [`solver`]: a radial finite-volume Euler–Poisson integrator.
//! * [`oracles`]: brute-force checks of the functional inequalities.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod math;

pub mod constants;
pub mod criteria;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod model;
pub mod oracles;
pub mod poisson;
pub mod profile;
pub mod quadrature;
pub mod roots;
pub mod solver;
pub mod special;
pub mod state;

pub use error::{Error, Result};
pub use grid::RadialGrid;
pub use model::{ForceSign, ModelParams, System};
pub use state::{RadialState, Thermo};
