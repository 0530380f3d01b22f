//! Slope limiters and the Rusanov (local Lax-Friedrichs) flux.

use serde::Serialize;

use crate::math::sqrt;

/// Primitive state at a face or cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl Primitive {
    pub fn sound_speed(&self, gamma: f64) -> f64 {
        if self.rho > 0.0 && self.p > 0.0 {
            sqrt(gamma * self.p / self.rho)
        } else {
            0.0
        }
    }

    /// `|u| + c`.
    pub fn signal_speed(&self, gamma: f64) -> f64 {
        self.u.abs() + self.sound_speed(gamma)
    }

    /// Conserved `(rho, rho u, E)` with `E = rho u^2 / 2 + p / (gamma - 1)`.
    pub fn conserved(&self, gamma: f64) -> [f64; 3] {
        let m = self.rho * self.u;
        [self.rho, m, 0.5 * m * self.u + self.p / (gamma - 1.0)]
    }

    /// Physical flux `(rho u, rho u^2 + p, (E + p) u)`.
    pub fn flux(&self, gamma: f64) -> [f64; 3] {
        let [_, m, e] = self.conserved(gamma);
        [m, m * self.u + self.p, (e + self.p) * self.u]
    }
}

/// Rusanov flux and the local wave-speed bound.
pub fn rusanov(left: &Primitive, right: &Primitive, gamma: f64) -> ([f64; 3], f64) {
    let a = left.signal_speed(gamma).max(right.signal_speed(gamma));
    let (fl, fr) = (left.flux(gamma), right.flux(gamma));
    let (ul, ur) = (left.conserved(gamma), right.conserved(gamma));
    let mut f = [0.0; 3];
    for k in 0..3 {
        f[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * a * (ur[k] - ul[k]);
    }
    (f, a)
}

/// Slope limiter for MUSCL reconstruction of primitive variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Limiter {
    /// Piecewise-constant reconstruction (first order).
    FirstOrder,
    Minmod,
    /// Monotonised central.
    #[default]
    MonotonizedCentral,
}

impl Limiter {
    /// Limited cell slope (difference per cell) from backward/forward differences.
    pub fn slope(self, back: f64, fwd: f64) -> f64 {
        if back * fwd <= 0.0 {
            return 0.0;
        }
        let s = back.signum();
        match self {
            Self::FirstOrder => 0.0,
            Self::Minmod => s * back.abs().min(fwd.abs()),
            Self::MonotonizedCentral => {
                s * (2.0 * back.abs()).min(2.0 * fwd.abs()).min(0.5 * (back + fwd).abs())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn consistent_flux_for_equal_states() {
        let q = Primitive { rho: 1.3, u: -0.4, p: 0.7 };
        let (f, a) = rusanov(&q, &q, 1.4);
        assert_eq!(f, q.flux(1.4));
        assert!((a - (0.4 + (1.4f64 * 0.7 / 1.3).sqrt())).abs() < 1e-15);
    }

    #[test]
    fn limiters_vanish_at_extrema() {
        for l in [Limiter::Minmod, Limiter::MonotonizedCentral, Limiter::FirstOrder] {
            assert_eq!(l.slope(1.0, -2.0), 0.0);
        }
        assert_eq!(Limiter::Minmod.slope(1.0, 3.0), 1.0);
        assert_eq!(Limiter::MonotonizedCentral.slope(1.0, 3.0), 2.0);
        assert_eq!(Limiter::MonotonizedCentral.slope(1.0, 1.2), 1.1);
    }
}
