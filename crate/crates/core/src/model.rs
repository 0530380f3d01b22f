//! Model parameters shared by every module.

use alloc::format;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sign of the Poisson force term `delta * rho * grad(Phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForceSign {
    /// `delta = -1`: self-gravitating gas.
    Attractive,
    /// `delta = +1`: repulsive (plasma / semiconductor) forces.
    Repulsive,
}

impl ForceSign {
    pub fn delta(self) -> f64 {
        match self {
            ForceSign::Attractive => -1.0,
            ForceSign::Repulsive => 1.0,
        }
    }

    pub fn from_delta(delta: i32) -> Result<Self> {
        match delta {
            -1 => Ok(ForceSign::Attractive),
            1 => Ok(ForceSign::Repulsive),
            other => Err(Error::InvalidParams(format!("delta must be -1 or +1, got {other}"))),
        }
    }
}

/// Which Euler–Poisson system is modelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    /// Full system with an energy equation (pressure carries entropy).
    Full,
    /// Isentropic system, `p = rho^gamma`.
    Isentropic,
}

/// Dimension, adiabatic index, force sign and gas constant. The
/// gravitational constant and the pressure constant are both fixed to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n: usize,
    gamma: f64,
    force: ForceSign,
    system: System,
    gas_constant: f64,
}

impl ModelParams {
    pub fn new(n: usize, gamma: f64, force: ForceSign, system: System) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParams(format!("dimension must be >= 3, got {n}")));
        }
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::InvalidParams(format!("gamma must be > 1, got {gamma}")));
        }
        Ok(Self {
            n,
            gamma,
            force,
            system,
            gas_constant: 1.0,
        })
    }

    /// Replace the gas constant `R` (default 1).
    pub fn with_gas_constant(mut self, r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidParams(format!("gas constant must be > 0, got {r}")));
        }
        self.gas_constant = r;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_f64(&self) -> f64 {
        self.n as f64
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn force(&self) -> ForceSign {
        self.force
    }

    pub fn delta(&self) -> f64 {
        self.force.delta()
    }

    pub fn system(&self) -> System {
        self.system
    }

    pub fn gas_constant(&self) -> f64 {
        self.gas_constant
    }

    /// Specific heat `c_nu = R / (gamma - 1)`.
    pub fn c_nu(&self) -> f64 {
        self.gas_constant / (self.gamma - 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_low_dimension_and_gamma() {
        assert!(ModelParams::new(2, 1.5, ForceSign::Attractive, System::Isentropic).is_err());
        assert!(ModelParams::new(3, 1.0, ForceSign::Attractive, System::Isentropic).is_err());
        assert!(ModelParams::new(3, f64::NAN, ForceSign::Attractive, System::Isentropic).is_err());
        assert!(ForceSign::from_delta(0).is_err());
    }

    #[test]
    fn c_nu_default_gas_constant() {
        let p = ModelParams::new(3, 5.0 / 3.0, ForceSign::Repulsive, System::Full).unwrap();
        assert!((p.c_nu() - 1.5).abs() < 1e-15);
        assert_eq!(p.delta(), 1.0);
        let p = p.with_gas_constant(2.0).unwrap();
        assert!((p.c_nu() - 3.0).abs() < 1e-15);
    }
}
