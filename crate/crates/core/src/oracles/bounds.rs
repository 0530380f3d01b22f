//! A priori bounds checked along a computed time series: the energy bounds,
//! the moment parabolas and the internal energy sandwich.
//!
//! The moment parabolas come from integrating `G'' <= C` (or `>= C`) twice,
//! which gives `(C/2) t^2`; the printed bounds carry `C t^2`. The printed
//! form is implied when it is weaker (upper bound with `C >= 0`, lower bound
//! with `C <= 0`). Both forms are checked; the printed one is flagged as not
//! implied otherwise.

use alloc::string::String;
use alloc::vec::Vec;
use serde::Serialize;

use crate::constants::ConstantsTable;
use crate::diagnostics::{QuantitySet, Sample};
use crate::math::powf;
use crate::model::{ForceSign, ModelParams, System};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundTolerances {
    /// Relative slack for inequalities.
    pub bound: f64,
    /// Relative slack for the conservation law of the full system.
    pub conservation: f64,
}

impl Default for BoundTolerances {
    fn default() -> Self {
        Self { bound: 1e-6, conservation: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub statement: String,
    pub applicable: bool,
    /// Whether the bound follows from the identities it is derived from; the
    /// printed parabola with the "wrong" sign of its coefficient does not.
    pub implied: bool,
    pub passed: bool,
    /// Smallest `rhs - lhs` over the series.
    pub worst_margin: f64,
    pub worst_time: f64,
    pub scale: f64,
    pub tol: f64,
    pub note: Option<String>,
}

impl BoundCheck {
    fn skipped(name: &str, statement: &str, note: &str) -> Self {
        Self {
            name: name.into(),
            statement: statement.into(),
            applicable: false,
            implied: true,
            passed: true,
            worst_margin: 0.0,
            worst_time: 0.0,
            scale: 0.0,
            tol: 0.0,
            note: Some(note.into()),
        }
    }

    /// Evaluate `margin(q, t)` (>= 0 when the bound holds) over the series.
    fn over(
        name: &str,
        statement: &str,
        series: &[Sample],
        scale: f64,
        tol: f64,
        margin: impl Fn(&QuantitySet, f64) -> f64,
    ) -> Self {
        let t0 = series.first().map_or(0.0, |s| s.quantities.t);
        let mut worst = f64::INFINITY;
        let mut worst_time = t0;
        for s in series {
            let m = margin(&s.quantities, s.quantities.t - t0);
            if m < worst || m.is_nan() {
                worst = m;
                worst_time = s.quantities.t;
            }
        }
        if series.is_empty() {
            worst = 0.0;
        }
        Self {
            name: name.into(),
            statement: statement.into(),
            applicable: true,
            implied: true,
            passed: worst >= -tol * scale,
            worst_margin: worst,
            worst_time,
            scale,
            tol,
            note: None,
        }
    }

    fn not_implied(mut self, note: &str) -> Self {
        self.implied = false;
        self.note = Some(note.into());
        self
    }
}

fn first(series: &[Sample]) -> Option<&QuantitySet> {
    series.first().map(|s| &s.quantities)
}

/// Energy bounds applicable to the run's system and force sign.
pub fn verify_energy_bounds(
    series: &[Sample],
    table: &ConstantsTable,
    params: &ModelParams,
    tol: &BoundTolerances,
) -> Vec<BoundCheck> {
    let Some(q0) = first(series) else { return Vec::new() };
    let mut out = Vec::new();
    let c0 = table.c0;
    let scale = (q0.e_k + q0.i).abs().max(c0.abs());
    match (params.system(), params.force()) {
        (System::Isentropic, ForceSign::Attractive) => {
            out.push(match table.c2 {
                Some(c2) => BoundCheck::over("energy-upper", "E_k + I <= 2 C0 + C2", series, scale, tol.bound, |q, _| {
                    2.0 * c0 + c2 - (q.e_k + q.i)
                }),
                None => BoundCheck::skipped("energy-upper", "E_k + I <= 2 C0 + C2", "needs gamma > 2(1 - 1/n)"),
            });
            out.push(BoundCheck::over("energy-lower", "E_k + I >= C0", series, scale, tol.bound, |q, _| {
                q.e_k + q.i - c0
            }));
        }
        (System::Isentropic, ForceSign::Repulsive) => {
            out.push(BoundCheck::over("energy-repulsive", "E_k + I <= C0", series, scale, tol.bound, |q, _| {
                c0 - (q.e_k + q.i)
            }));
        }
        (System::Full, _) => {
            let k0 = q0.e_k + q0.e_i;
            // |drift| <= tol * K0, expressed as a margin
            out.push(BoundCheck::over(
                "kinetic-internal-conservation",
                "E_k + E_i = E_k(0) + E_i(0)",
                series,
                k0.abs(),
                0.0,
                |q, _| tol.conservation * k0.abs() - (q.e_k + q.e_i - k0).abs(),
            ));
        }
    }
    out
}

/// The parabolas bounding `G(t)`; each in printed and integrated form.
pub fn verify_moment_bounds(
    series: &[Sample],
    table: &ConstantsTable,
    params: &ModelParams,
    tol: &BoundTolerances,
) -> Vec<BoundCheck> {
    let Some(q0) = first(series) else { return Vec::new() };
    let (f0, g0) = (q0.f, q0.g);
    let scale = g0.abs();
    let mut out = Vec::new();
    let mut push = |name: &str, label: &str, coef: Option<f64>, upper: bool| {
        let rel = if upper { "<=" } else { ">=" };
        let Some(c) = coef else {
            out.push(BoundCheck::skipped(name, label, "needs gamma > 2(1 - 1/n)"));
            return;
        };
        for (suffix, factor) in [("", 1.0), ("-integrated", 0.5)] {
            let statement = alloc::format!("G {rel} {}{label} t^2 + F(0) t + G(0)", if factor == 0.5 { "(1/2) " } else { "" });
            let check = BoundCheck::over(&alloc::format!("{name}{suffix}"), &statement, series, scale, tol.bound, |q, t| {
                let parabola = factor * c * t * t + f0 * t + g0;
                if upper {
                    parabola - q.g
                } else {
                    q.g - parabola
                }
            });
            let implied = factor == 0.5 || (upper && c >= 0.0) || (!upper && c <= 0.0);
            out.push(if implied {
                check
            } else {
                check.not_implied("integrating G'' gives the coefficient C/2; C t^2 is stronger here")
            });
        }
    };
    match (params.system(), params.force()) {
        (System::Isentropic, ForceSign::Attractive) => {
            push("moment-upper", "C3", table.c3, true);
            push("moment-lower", "C4", Some(table.c4), false);
        }
        (System::Isentropic, ForceSign::Repulsive) => push("moment-upper", "C5", Some(table.c5), true),
        (System::Full, _) => {
            push("moment-lower", "C6", Some(table.c6), false);
            push("moment-upper", "C7", Some(table.c7), true);
        }
    }
    out
}

/// Lower bound `I >= C10 / G^(n(gamma-1)/2)` (and `E_i >= C9 / ...` in the
/// full system), printed and derived forms, plus the upper bound
/// `I <= C11 / (t+1)^(n(gamma-1))` where its hypotheses hold.
pub fn verify_internal_energy_bounds(
    series: &[Sample],
    table: &ConstantsTable,
    params: &ModelParams,
    tol: &BoundTolerances,
) -> Vec<BoundCheck> {
    let Some(q0) = first(series) else { return Vec::new() };
    let nf = params.n_f64();
    let g = params.gamma();
    let k = nf * (g - 1.0) / 2.0;
    let scale = q0.i.abs();
    let mut out = Vec::new();
    let derived = powf(2.0, -k);
    let (c9, c10, c11) = (table.c9, table.c10, table.c11);
    out.push(BoundCheck::over("internal-lower", "I >= C10 / G^(n(gamma-1)/2)", series, scale, tol.bound, |q, _| {
        q.i - c10 / powf(q.g, k)
    }));
    out.push(BoundCheck::over(
        "internal-lower-derived",
        "I >= 2^(-n(gamma-1)/2) C10 / G^(n(gamma-1)/2)",
        series,
        scale,
        tol.bound,
        |q, _| q.i - derived * c10 / powf(q.g, k),
    ));
    if params.system() == System::Full {
        let scale_ei = q0.e_i.abs();
        out.push(BoundCheck::over("internal-lower-entropy", "E_i >= C9 / G^(n(gamma-1)/2)", series, scale_ei, tol.bound, |q, _| {
            q.e_i - c9 / powf(q.g, k)
        }));
    }
    let statement = "I <= C11 / (t+1)^(n(gamma-1))";
    let n = params.n();
    let hypotheses = params.system() == System::Isentropic
        && g <= 1.0 + 2.0 / nf
        && match params.force() {
            ForceSign::Attractive => n == 3 || n == 4,
            ForceSign::Repulsive => n >= 4,
        };
    out.push(if hypotheses {
        let check = BoundCheck::over("internal-upper", statement, series, scale, tol.bound, |q, t| {
            c11 / powf(t + 1.0, 2.0 * k) - q.i
        });
        // G - (t+1)F + (t+1)^2 E_k >= 0 only gives I <= IJ/(t+1)^2 - E_p, and
        // E_p < 0 for attracting forces.
        if params.force() == ForceSign::Attractive {
            check.not_implied("I <= IJ/(t+1)^2 needs E_p >= 0; fails at t = 0 when G(0) - F(0) + E_k(0) + E_p(0) < 0")
        } else {
            check
        }
    } else {
        BoundCheck::skipped(
            "internal-upper",
            statement,
            "needs the isentropic system, gamma <= 1 + 2/n and n in {3, 4} (attractive) or n >= 4 (repulsive)",
        )
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{build_table, initial_entropy_floor, TableOptions};
    use crate::grid::RadialGrid;
    use crate::profile::{build_profile, EntropyLaw, ProfileSpec};
    use crate::solver::{run, SolverConfig};

    fn trajectory(params: &ModelParams, spec: ProfileSpec, r_max: f64, t_end: f64) -> (Vec<Sample>, ConstantsTable) {
        let grid = RadialGrid::new(r_max, 128).unwrap();
        let state = build_profile(&spec, &grid, params).unwrap();
        let res = run(&state, &grid, params, &SolverConfig { t_end, ..Default::default() }).unwrap();
        let s1 = initial_entropy_floor(&state, params);
        let table = build_table(&res.series[0].quantities, s1, params, &TableOptions::for_params(params)).unwrap();
        (res.series, table)
    }

    fn all(series: &[Sample], table: &ConstantsTable, params: &ModelParams) -> Vec<BoundCheck> {
        let tol = BoundTolerances::default();
        let mut v = verify_energy_bounds(series, table, params, &tol);
        v.extend(verify_moment_bounds(series, table, params, &tol));
        v.extend(verify_internal_energy_bounds(series, table, params, &tol));
        v
    }

    #[test]
    fn attractive_isentropic_run_respects_the_bounds() {
        let params = ModelParams::new(3, 5.0 / 3.0, ForceSign::Attractive, System::Isentropic).unwrap();
        let (series, table) = trajectory(&params, ProfileSpec::gaussian(1.0, 1.0), 6.0, 0.5);
        let checks = all(&series, &table, &params);
        let names: Vec<&str> = checks.iter().map(|c| c.name.as_str()).collect();
        for name in ["energy-upper", "energy-lower", "moment-upper", "moment-lower-integrated", "internal-lower"] {
            assert!(names.contains(&name), "{name} missing from {names:?}");
        }
        for c in checks.iter().filter(|c| c.applicable && c.implied) {
            assert!(c.passed, "{c:?}");
        }
        // gamma = 5/3 is outside gamma <= 1 + 2/n
        let upper = checks.iter().find(|c| c.name == "internal-upper").unwrap();
        assert!(!upper.applicable);
    }

    #[test]
    fn repulsive_isentropic_run_respects_the_bounds() {
        let params = ModelParams::new(4, 1.25, ForceSign::Repulsive, System::Isentropic).unwrap();
        let (series, table) = trajectory(&params, ProfileSpec::gaussian(1.0, 1.0), 6.0, 0.5);
        let checks = all(&series, &table, &params);
        let upper = checks.iter().find(|c| c.name == "internal-upper").unwrap();
        assert!(upper.applicable && upper.implied && upper.passed, "{upper:?}");
        for c in checks.iter().filter(|c| c.implied) {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn attractive_upper_bound_is_flagged_and_fails_on_concentrated_data() {
        let params = ModelParams::new(3, 1.5, ForceSign::Attractive, System::Isentropic).unwrap();
        let (series, table) = trajectory(&params, ProfileSpec::gaussian(1.0, 1.0), 6.0, 0.1);
        assert!(table.c11 < 0.0);
        let checks = verify_internal_energy_bounds(&series, &table, &params, &BoundTolerances::default());
        let upper = checks.iter().find(|c| c.name == "internal-upper").unwrap();
        assert!(upper.applicable && !upper.implied && !upper.passed);
        // already at t = 0: I(0) > IJ(0)
        let q0 = &series[0].quantities;
        assert!(q0.i > series[0].functionals.ij_delta);
        assert!(q0.g - q0.f + q0.e_k + q0.e_p < 0.0);
    }

    #[test]
    fn printed_collapse_parabola_is_not_implied() {
        let params = ModelParams::new(3, 5.0 / 3.0, ForceSign::Attractive, System::Full).unwrap();
        let spec = ProfileSpec::ball(1.0, 1.0).with_entropy(EntropyLaw::from_pressure_scale(0.5, &params).unwrap());
        let (series, table) = trajectory(&params, spec, 2.0, 0.3);
        assert!(table.c7 < 0.0);
        let checks = verify_moment_bounds(&series, &table, &params, &BoundTolerances::default());
        let printed = checks.iter().find(|c| c.name == "moment-upper").unwrap();
        let integrated = checks.iter().find(|c| c.name == "moment-upper-integrated").unwrap();
        assert!(!printed.implied && !printed.passed);
        assert!(integrated.implied && integrated.worst_margin > printed.worst_margin);
    }

    #[test]
    fn empty_series_gives_no_checks() {
        let params = ModelParams::new(3, 1.5, ForceSign::Attractive, System::Isentropic).unwrap();
        let grid = RadialGrid::new(6.0, 32).unwrap();
        let mut state = build_profile(&ProfileSpec::gaussian(1.0, 1.0), &grid, &params).unwrap();
        state.phi = Some(crate::poisson::solve_potential(&state.rho, &grid, 3).unwrap());
        let s = Sample::new(&state, &grid, &params).unwrap();
        let table = build_table(&s.quantities, 0.0, &params, &TableOptions::for_params(&params)).unwrap();
        assert!(verify_moment_bounds(&[], &table, &params, &BoundTolerances::default()).is_empty());
    }
}
