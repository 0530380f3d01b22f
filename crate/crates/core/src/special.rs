//! Gamma function and unit-ball measures.

use core::f64::consts::PI;

use crate::math::{exp, powf, sin, sqrt};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function by the Lanczos approximation (g = 7, nine terms), with the
/// reflection formula below 1/2. Relative accuracy is better than 1e-13 on
/// the positive axis.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / (sin(PI * x) * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (k, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (x + k as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    sqrt(2.0 * PI) * powf(t, x + 0.5) * exp(-t) * series
}

/// Lebesgue measure of the unit ball in `R^n`: `pi^(n/2) / Gamma(n/2 + 1)`.
pub fn unit_ball_measure(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    powf(PI, half) / gamma(half + 1.0)
}

/// Surface area of the unit sphere `S^(n-1)` in `R^n`, i.e. `n * omega_n`.
pub fn unit_sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_measure(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(k: u32) -> f64 {
        (1..=k).map(f64::from).product()
    }

    #[test]
    fn gamma_at_integers_is_factorial() {
        for k in 1..=20u32 {
            let exact = factorial(k - 1);
            let rel = (gamma(k as f64) - exact).abs() / exact;
            assert!(rel < 1e-12, "Gamma({k}) rel err {rel:e}");
        }
    }

    #[test]
    fn gamma_at_half_integers() {
        // Gamma(m + 1/2) = (2m)! sqrt(pi) / (4^m m!)
        for m in 0..=12u32 {
            let exact = factorial(2 * m) * PI.sqrt() / (4f64.powi(m as i32) * factorial(m));
            let rel = (gamma(m as f64 + 0.5) - exact).abs() / exact;
            assert!(rel < 1e-12, "Gamma({m}+1/2) rel err {rel:e}");
        }
    }

    #[test]
    fn gamma_reflection_branch() {
        // Gamma(1/4) Gamma(3/4) = pi sqrt(2)
        let prod = gamma(0.25) * gamma(0.75);
        assert!((prod - PI * 2f64.sqrt()).abs() < 1e-12);
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ball_measures() {
        assert!((unit_ball_measure(1) - 2.0).abs() < 1e-14);
        assert!((unit_ball_measure(2) - PI).abs() < 1e-14);
        assert!((unit_ball_measure(3) - 4.0 * PI / 3.0).abs() < 1e-13);
        assert!((unit_ball_measure(4) - PI * PI / 2.0).abs() < 1e-13);
        assert!((unit_ball_measure(5) - 8.0 * PI * PI / 15.0).abs() < 1e-13);
        assert!((unit_sphere_area(3) - 4.0 * PI).abs() < 1e-13);
    }
}
