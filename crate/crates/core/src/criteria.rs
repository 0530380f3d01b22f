//! Blow-up verdicts for the three theorems and the lifespan bounds.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use serde::Serialize;

use crate::constants::{c2_gamma_bound, ConstantsTable};
use crate::error::{Error, Result};
use crate::math::powf;
use crate::model::{ForceSign, ModelParams, System};
use crate::roots::{first_negative, Bracketing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Theorem {
    #[serde(rename = "2.1i")]
    IepAttractiveNegative,
    #[serde(rename = "2.1ii")]
    IepAttractiveZero,
    #[serde(rename = "2.1iii")]
    IepAttractiveLifespan,
    #[serde(rename = "2.2")]
    IepRepulsive,
    #[serde(rename = "2.3i")]
    EpAttractiveNegative,
    #[serde(rename = "2.3ii")]
    EpAttractiveZero,
}

impl Theorem {
    pub fn label(self) -> &'static str {
        match self {
            Self::IepAttractiveNegative => "2.1i",
            Self::IepAttractiveZero => "2.1ii",
            Self::IepAttractiveLifespan => "2.1iii",
            Self::IepRepulsive => "2.2",
            Self::EpAttractiveNegative => "2.3i",
            Self::EpAttractiveZero => "2.3ii",
        }
    }
}

/// A named number entering a verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    pub name: &'static str,
    pub value: f64,
}

fn term(name: &'static str, value: f64) -> Term {
    Term { name, value }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub theorem: Theorem,
    pub applicable: bool,
    pub satisfied: bool,
    pub lifespan_bound: Option<f64>,
    pub details: Vec<Term>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    fn not_applicable(theorem: Theorem, note: String) -> Self {
        Self {
            theorem,
            applicable: false,
            satisfied: false,
            lifespan_bound: None,
            details: Vec::new(),
            note: Some(note),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriteriaOptions {
    /// `|C| <= zero_tol * scale` counts as `C = 0`.
    pub zero_tol: f64,
    pub bracketing: Bracketing,
}

impl Default for CriteriaOptions {
    fn default() -> Self {
        Self { zero_tol: 1e-10, bracketing: Bracketing::default() }
    }
}

fn require(params: &ModelParams, force: ForceSign, system: System) -> Result<()> {
    if params.force() != force {
        return Err(Error::WrongForceSign(format!("expected delta = {}", force.delta())));
    }
    if params.system() != system {
        return Err(Error::WrongSystem(format!("expected the {system:?} system")));
    }
    Ok(())
}

/// Which upper parabola for `G(t)` a lifespan bound uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LifespanMode {
    /// `G <= (3 C0 + C2) t^2 + F(0) t + G(0)`, exponent `3(gamma-1)/2`.
    IepAttractive,
    /// `G <= C5 t^2 + F(0) t + G(0)`, exponent `n(gamma-1)/2`.
    IepRepulsive,
}

/// Coefficients of the crossing problem
/// `C10 / P(t)^k > C11 / (t+1)^(2k)` with `P(t) = a t^2 + b t + c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingProblem {
    pub c10: f64,
    pub c11: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub k: f64,
}

impl CrossingProblem {
    pub fn from_table(table: &ConstantsTable, mode: LifespanMode) -> Result<Self> {
        let (a, k) = match mode {
            LifespanMode::IepAttractive => {
                let c2 = table.c2.ok_or_else(|| {
                    Error::InvalidArgument("C2 undefined for this gamma".into())
                })?;
                (3.0 * table.c0 + c2, 1.5 * (table.gamma - 1.0))
            }
            LifespanMode::IepRepulsive => (table.c5, table.n as f64 * (table.gamma - 1.0) / 2.0),
        };
        Ok(Self { c10: table.c10, c11: table.c11, a, b: table.f0, c: table.g0, k })
    }

    pub fn parabola(&self, t: f64) -> f64 {
        (self.a * t + self.b) * t + self.c
    }

    /// `C11 / (t+1)^(2k) - C10 / P(t)^k`; negative exactly where the strict
    /// inequality holds. `P(t) <= 0` counts as `-inf`.
    pub fn phi(&self, t: f64) -> f64 {
        let p = self.parabola(t);
        if p <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.c11 / powf(t + 1.0, 2.0 * self.k) - self.c10 / powf(p, self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lifespan {
    pub t_star: f64,
    /// `phi(t* + 1e-6)`, negative when the post-check passes.
    pub phi_after: f64,
}

/// Offset used by the post-check.
pub const POST_CHECK_STEP: f64 = 1e-6;

/// Smallest `t >= 0` where the crossing inequality holds strictly.
pub fn solve_crossing(problem: &CrossingProblem, bracketing: Bracketing) -> Result<Lifespan> {
    let t_star = first_negative(|t| problem.phi(t), bracketing)?;
    let phi_after = problem.phi(t_star + POST_CHECK_STEP);
    if !(phi_after < 0.0) {
        return Err(Error::NoCrossing { t_cap: t_star + POST_CHECK_STEP });
    }
    Ok(Lifespan { t_star, phi_after })
}

/// Lifespan bound `T*` for the given mode from a table.
pub fn lifespan_bound(table: &ConstantsTable, mode: LifespanMode, bracketing: Bracketing) -> Result<Lifespan> {
    solve_crossing(&CrossingProblem::from_table(table, mode)?, bracketing)
}

fn near_zero(value: f64, scale: f64, tol: f64) -> bool {
    value.abs() <= tol * scale
}

/// Conditions of the isentropic attractive theorem.
pub fn check_iep_attractive(
    table: &ConstantsTable,
    params: &ModelParams,
    options: &CriteriaOptions,
) -> Result<Vec<Verdict>> {
    require(params, ForceSign::Attractive, System::Isentropic)?;
    let n = params.n();
    let g = params.gamma();
    let mut out = Vec::with_capacity(3);

    let gate = g > c2_gamma_bound(n);
    match (gate, table.c3, table.c2) {
        (true, Some(c3), Some(c2)) => {
            let scale = table.c0.abs() + c2.abs();
            let zero = near_zero(c3, scale, options.zero_tol);
            out.push(Verdict {
                theorem: Theorem::IepAttractiveNegative,
                applicable: true,
                satisfied: c3 < 0.0 && !zero,
                lifespan_bound: None,
                details: vec![term("C3", c3), term("zero_scale", scale)],
                note: zero.then(|| "C3 is zero within tolerance".into()),
            });
            out.push(Verdict {
                theorem: Theorem::IepAttractiveZero,
                applicable: true,
                satisfied: zero && table.f0 < 0.0,
                lifespan_bound: None,
                details: vec![term("C3", c3), term("zero_scale", scale), term("F0", table.f0)],
                note: None,
            });
        }
        _ => {
            let note = format!("requires gamma > 2(1 - 1/n) = {}", c2_gamma_bound(n));
            out.push(Verdict::not_applicable(Theorem::IepAttractiveNegative, note.clone()));
            out.push(Verdict::not_applicable(Theorem::IepAttractiveZero, note));
        }
    }

    if n == 3 && g > 4.0 / 3.0 && g <= 5.0 / 3.0 {
        let c2 = table.c2.expect("C2 defined above 4/3 in three dimensions");
        let a = 3.0 * table.c0 + c2;
        let k = 1.5 * (g - 1.0);
        let rhs = if a > 0.0 { table.c11 * powf(a, k) } else { f64::NAN };
        let satisfied = a > 0.0 && table.c10 > rhs;
        let mut verdict = Verdict {
            theorem: Theorem::IepAttractiveLifespan,
            applicable: true,
            satisfied,
            lifespan_bound: None,
            details: vec![
                term("3C0+C2", a),
                term("C10", table.c10),
                term("C11*(3C0+C2)^(3(gamma-1)/2)", rhs),
            ],
            note: (table.c11 <= 0.0).then(|| {
                "C11 = IJ(0) <= 0: the condition holds trivially, but I <= C11/(t+1)^(3(gamma-1)) \
                 cannot hold then, so the certificate is vacuous"
                    .into()
            }),
        };
        if satisfied {
            match lifespan_bound(table, LifespanMode::IepAttractive, options.bracketing) {
                Ok(l) => verdict.lifespan_bound = Some(l.t_star),
                Err(e) => verdict.note = Some(format!("lifespan root not found: {e}")),
            }
        }
        out.push(verdict);
    } else {
        out.push(Verdict::not_applicable(
            Theorem::IepAttractiveLifespan,
            "requires n = 3 and 4/3 < gamma <= 5/3".into(),
        ));
    }
    Ok(out)
}

/// Condition of the isentropic repulsive theorem, plus the `C5`-based
/// asymptotic variant in the details.
pub fn check_iep_repulsive(table: &ConstantsTable, params: &ModelParams, options: &CriteriaOptions) -> Result<Verdict> {
    require(params, ForceSign::Repulsive, System::Isentropic)?;
    let n = params.n();
    let nf = params.n_f64();
    let g = params.gamma();
    if n < 4 || g > 1.0 + 2.0 / nf {
        return Ok(Verdict::not_applicable(
            Theorem::IepRepulsive,
            "requires n >= 4 and 1 < gamma <= 1 + 2/n".into(),
        ));
    }
    let k = nf * (g - 1.0) / 2.0;
    let rhs = powf(2.0, k) * table.c11;
    let variant_rhs = if table.c5 > 0.0 { table.c11 * powf(table.c5, k) } else { f64::NAN };
    let satisfied = table.c10 > rhs;
    let mut verdict = Verdict {
        theorem: Theorem::IepRepulsive,
        applicable: true,
        satisfied,
        lifespan_bound: None,
        details: vec![
            term("C10", table.c10),
            term("2^(n(gamma-1)/2)*C11", rhs),
            term("C5", table.c5),
            term("C11*C5^(n(gamma-1)/2)", variant_rhs),
            term("C5_variant_satisfied", f64::from(u8::from(table.c5 > 0.0 && table.c10 > variant_rhs))),
        ],
        note: Some("lifespan from the analogue of the crossing argument with G <= C5 t^2 + F(0) t + G(0)".into()),
    };
    if satisfied {
        match lifespan_bound(table, LifespanMode::IepRepulsive, options.bracketing) {
            Ok(l) => verdict.lifespan_bound = Some(l.t_star),
            Err(e) => verdict.note = Some(format!("lifespan root not found: {e}")),
        }
    }
    Ok(verdict)
}

/// Conditions of the full-system attractive theorem (no lifespan bound).
pub fn check_ep_attractive(table: &ConstantsTable, params: &ModelParams, options: &CriteriaOptions) -> Result<Vec<Verdict>> {
    require(params, ForceSign::Attractive, System::Full)?;
    let nf = params.n_f64();
    let g = params.gamma();
    let coef = (4.0 - nf).max(nf * (g - 2.0) + 2.0);
    let scale = coef.abs() * (table.e_k0 + table.e_i0).abs() + (nf - 2.0) * table.e_delta0.abs();
    let zero = near_zero(table.c7, scale, options.zero_tol);
    Ok(vec![
        Verdict {
            theorem: Theorem::EpAttractiveNegative,
            applicable: true,
            satisfied: table.c7 < 0.0 && !zero,
            lifespan_bound: None,
            details: vec![term("C7", table.c7), term("zero_scale", scale)],
            note: zero.then(|| "C7 is zero within tolerance".into()),
        },
        Verdict {
            theorem: Theorem::EpAttractiveZero,
            applicable: true,
            satisfied: zero && table.f0 < 0.0,
            lifespan_bound: None,
            details: vec![term("C7", table.c7), term("zero_scale", scale), term("F0", table.f0)],
            note: None,
        },
    ])
}

/// Every theorem, with those not matching `(system, delta)` marked not
/// applicable.
pub fn check_all(table: &ConstantsTable, params: &ModelParams, options: &CriteriaOptions) -> Result<Vec<Verdict>> {
    let mismatch = |t: Theorem, what: &str| Verdict::not_applicable(t, format!("requires {what}"));
    let mut out = Vec::with_capacity(6);
    match (params.system(), params.force()) {
        (System::Isentropic, ForceSign::Attractive) => {
            out.extend(check_iep_attractive(table, params, options)?);
            out.push(mismatch(Theorem::IepRepulsive, "the isentropic system with delta = +1"));
        }
        (System::Isentropic, ForceSign::Repulsive) => {
            for t in [Theorem::IepAttractiveNegative, Theorem::IepAttractiveZero, Theorem::IepAttractiveLifespan] {
                out.push(mismatch(t, "the isentropic system with delta = -1"));
            }
            out.push(check_iep_repulsive(table, params, options)?);
        }
        (System::Full, _) => {
            for t in [
                Theorem::IepAttractiveNegative,
                Theorem::IepAttractiveZero,
                Theorem::IepAttractiveLifespan,
                Theorem::IepRepulsive,
            ] {
                out.push(mismatch(t, "the isentropic system"));
            }
        }
    }
    match (params.system(), params.force()) {
        (System::Full, ForceSign::Attractive) => out.extend(check_ep_attractive(table, params, options)?),
        _ => {
            for t in [Theorem::EpAttractiveNegative, Theorem::EpAttractiveZero] {
                out.push(mismatch(t, "the full system with delta = -1"));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(c10: f64, c11: f64) -> CrossingProblem {
        CrossingProblem { c10, c11, a: 1.0, b: 0.0, c: 1.0, k: 1.0 }
    }

    #[test]
    fn synthetic_set_crosses_at_zero() {
        let l = solve_crossing(&problem(2.0, 1.0), Bracketing::default()).unwrap();
        assert_eq!(l.t_star, 0.0);
        assert!(l.phi_after < 0.0);
    }

    #[test]
    fn asymptotically_impossible_has_no_crossing() {
        // C10 < C11 a^k: phi stays positive for all t.
        let err = solve_crossing(&problem(0.5, 1.0), Bracketing::default()).unwrap_err();
        assert!(matches!(err, Error::NoCrossing { .. }));
    }

    #[test]
    fn nonpositive_parabola_counts_as_crossed() {
        let p = CrossingProblem { c10: 1.0, c11: 1.0, a: -1.0, b: 0.0, c: 1.0, k: 1.0 };
        assert_eq!(p.phi(2.0), f64::NEG_INFINITY);
    }
}
