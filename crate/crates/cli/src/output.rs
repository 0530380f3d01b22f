//! CSV time series, run summaries and the human-readable verdict table.

use std::io::{self, Write};

use serde::Serialize;

use ep_core::criteria::Verdict;
use ep_core::diagnostics::{finite_difference_rates, Sample};
use ep_core::solver::{RunResult, StopReason};
use ep_core::System;

use crate::config::Config;

/// First line of every CSV file; bump the version when columns change.
pub const CSV_HEADER: &str = "# euler-poisson diagnostics v1";
pub const CSV_COLUMNS: &str = "t,M,F,G,E_k,E_i,I,E_p,E_delta,IE_delta,H,IH,J,IJ";

/// Values use Rust's shortest round-trip formatting, so they parse back to
/// the same `f64`.
pub fn write_csv(w: &mut dyn Write, series: &[Sample]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    writeln!(w, "{CSV_COLUMNS}")?;
    for s in series {
        let (q, f) = (&s.quantities, &s.functionals);
        let row = [
            q.t, q.m, q.f, q.g, q.e_k, q.e_i, q.i, q.e_p, q.e_delta, q.ie_delta, f.h_delta, f.ih_delta, f.j_delta,
            f.ij_delta,
        ];
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Largest central-difference residual of each identity along the run.
#[derive(Debug, Clone, Serialize)]
pub struct Residuals {
    /// `max |dM/dt| / M(0)`.
    pub mass: f64,
    /// `max |dG/dt - F|`.
    pub moment: f64,
    /// `max |dF/dt - IH_delta|`.
    pub momentum_weight: f64,
    /// `max |d IE_delta/dt|` (isentropic) or `max |d(E_k + E_i)/dt|` (full).
    pub energy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub stop_reason: StopReason,
    pub final_time: f64,
    pub samples: usize,
    pub cells: usize,
    pub r_max: f64,
    pub macro_steps: usize,
    pub macro_dt: f64,
    pub substeps: usize,
    pub outflow_mass: f64,
    pub floor_energy: f64,
    pub floor_max_density: f64,
    /// `None` with fewer than three samples.
    pub residuals: Option<Residuals>,
    pub max_velocity_gradient_l2: f64,
    /// Minimum entropy over the support, first and last sample (full system).
    pub min_entropy: Option<(f64, f64)>,
    pub potential_work: bool,
}

pub fn run_summary(result: &RunResult, cfg: &Config) -> anyhow::Result<RunSummary> {
    let residuals = if result.series.len() >= 3 {
        let rates = finite_difference_rates(&result.series)?;
        let m0 = result.series[0].quantities.m;
        let max = |f: &dyn Fn(&ep_core::diagnostics::Rates) -> f64| rates.iter().map(|r| f(r).abs()).fold(0.0, f64::max);
        let full = cfg.params.system() == System::Full;
        Some(Residuals {
            mass: max(&|r| r.dm) / m0,
            moment: max(&|r| r.moment_residual()),
            momentum_weight: max(&|r| r.momentum_weight_residual()),
            energy: max(&|r| if full { r.de_kinetic_internal } else { r.die_delta }),
        })
    } else {
        None
    };
    let entropy: Vec<f64> = result.min_entropy.iter().flatten().copied().collect();
    Ok(RunSummary {
        stop_reason: result.stop_reason,
        final_time: result.final_time,
        samples: result.series.len(),
        cells: cfg.grid.cells(),
        r_max: cfg.grid.r_max(),
        macro_steps: result.macro_steps,
        macro_dt: result.macro_dt,
        substeps: result.substeps,
        outflow_mass: result.outflow_mass,
        floor_energy: result.floor_energy,
        floor_max_density: result.floor_max_density,
        residuals,
        max_velocity_gradient_l2: result.velocity_gradient_l2.iter().copied().fold(0.0, f64::max),
        min_entropy: entropy.first().zip(entropy.last()).map(|(a, b)| (*a, *b)),
        potential_work: cfg.solver.potential_work,
    })
}

pub fn verdict_table(w: &mut dyn Write, verdicts: &[Verdict]) -> io::Result<()> {
    writeln!(w, "{:<8} {:<10} {:<9} {:<14} details", "theorem", "applies", "holds", "lifespan")?;
    for v in verdicts {
        let lifespan = v.lifespan_bound.map_or_else(|| "-".to_string(), |t| format!("{t:.6}"));
        let details: Vec<String> = v.details.iter().map(|t| format!("{}={:.6e}", t.name, t.value)).collect();
        let mut line = details.join(" ");
        if let Some(note) = &v.note {
            if !line.is_empty() {
                line.push_str("; ");
            }
            line.push_str(note);
        }
        writeln!(w, "{:<8} {:<10} {:<9} {:<14} {line}", v.theorem.label(), v.applicable, v.satisfied, lifespan)?;
    }
    Ok(())
}
