//! Command-line front end for `ep_core`: configuration files, the four
//! subcommands and their CSV/JSON output.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ep_core::constants::{build_table, default_c_hlp, initial_entropy_floor, ConstantsTable, TableOptions};
use ep_core::criteria::{check_all, CriteriaOptions};
use ep_core::diagnostics::Sample;
use ep_core::oracles::{
    corpus, verify_chemin, verify_energy_bounds, verify_hlp, verify_hls, verify_internal_energy_bounds, verify_lemma36,
    verify_moment_bounds, BoundTolerances, HlpSettings,
};
use ep_core::poisson::solve_potential;
use ep_core::profile::build_profile;
use ep_core::solver::{run, StopReason};
use ep_core::RadialState;

pub use config::{Config, ConfigError};

/// Environment variable overriding `C_HLP`.
pub const CHLP_ENV: &str = "EP_CHLP";

#[derive(Debug, Parser)]
#[command(name = "ep-blowup", version, about = "Blow-up certificates and virial diagnostics for radial Euler-Poisson flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the constant table C0..C11 as JSON.
    Constants { config: PathBuf },
    /// Evaluate the blow-up theorems. Exit 0 if a certificate holds, 1 if none does.
    Check { config: PathBuf },
    /// Run the radial solver and write the diagnostics time series.
    Simulate {
        config: PathBuf,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        cells: Option<usize>,
        #[arg(long)]
        cfl: Option<f64>,
        /// CSV destination; the JSON summary goes next to it (`.json`).
        /// Without it the CSV goes to stdout and the summary to stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the inequality oracles. Exit 0 if every check passes.
    Verify {
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Also run the static oracles over the seeded corpus.
        #[arg(long)]
        corpus: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Hls,
    Hlp,
    Chemin,
    Bounds,
    Lemma36,
    All,
}

/// Parse `args` (including the program name), run, and return the exit
/// code. Usage and input errors give 2.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    match command {
        Command::Constants { config } => {
            let setup = Setup::load(&config)?;
            let mut v = serde_json::to_value(&setup.table)?;
            v["C_HLP_source"] = json!(setup.c_hlp_source);
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
            Ok(0)
        }
        Command::Check { config } => check(&config, out, err),
        Command::Simulate { config, t_end, cells, cfl, out: path } => {
            simulate(&config, Overrides { t_end, cells, cfl }, path.as_deref(), out, err)
        }
        Command::Verify { config, suite, corpus } => verify(&config, suite, corpus, out),
    }
}

/// Where the `C_HLP` value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChlpSource {
    Env,
    Config,
    Default,
}

fn resolve_c_hlp(cfg: &Config) -> anyhow::Result<(f64, ChlpSource)> {
    if let Some(v) = std::env::var_os(CHLP_ENV) {
        let s = v.to_string_lossy();
        let c: f64 = s.trim().parse().with_context(|| format!("{CHLP_ENV}={s:?} is not a number"))?;
        if !(c > 0.0 && c.is_finite()) {
            bail!("{CHLP_ENV} must be a positive number, got {c}");
        }
        return Ok((c, ChlpSource::Env));
    }
    Ok(match cfg.c_hlp {
        Some(c) => (c, ChlpSource::Config),
        None => (default_c_hlp(&cfg.params), ChlpSource::Default),
    })
}

/// Configuration, initial state (with potential), first sample and table.
struct Setup {
    cfg: Config,
    state: RadialState,
    c_hlp: f64,
    c_hlp_source: ChlpSource,
    table: ConstantsTable,
}

impl Setup {
    fn load(path: &Path) -> anyhow::Result<Self> {
        Self::from_config(Config::load(path)?)
    }

    fn from_config(cfg: Config) -> anyhow::Result<Self> {
        let (c_hlp, c_hlp_source) = resolve_c_hlp(&cfg)?;
        let mut state = build_profile(&cfg.profile, &cfg.grid, &cfg.params)?;
        state.phi = Some(solve_potential(&state.rho, &cfg.grid, cfg.params.n())?);
        let q0 = Sample::new(&state, &cfg.grid, &cfg.params)?.quantities;
        let options = TableOptions { c_hlp, omega_convention: cfg.omega };
        let table = build_table(&q0, initial_entropy_floor(&state, &cfg.params), &cfg.params, &options)?;
        Ok(Self { cfg, state, c_hlp, c_hlp_source, table })
    }
}

fn check(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    let setup = Setup::load(path)?;
    let verdicts = check_all(&setup.table, &setup.cfg.params, &CriteriaOptions::default())?;
    output::verdict_table(err, &verdicts)?;
    let report = json!({
        "verdicts": verdicts,
        "C_HLP": setup.c_hlp,
        "C_HLP_source": setup.c_hlp_source,
        "C11": setup.table.c11,
        "J0": setup.table.j0,
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    Ok(if verdicts.iter().any(|v| v.applicable && v.satisfied) { 0 } else { 1 })
}

struct Overrides {
    t_end: Option<f64>,
    cells: Option<usize>,
    cfl: Option<f64>,
}

fn simulate(path: &Path, o: Overrides, csv_path: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    let mut cfg = Config::load(path)?;
    if let Some(t) = o.t_end {
        cfg.solver.t_end = t;
    }
    if let Some(c) = o.cfl {
        cfg.solver.cfl = c;
    }
    if let Some(cells) = o.cells {
        cfg.grid = ep_core::RadialGrid::new(cfg.grid.r_max(), cells)?;
    }
    cfg.solver.validate()?;
    let setup = Setup::from_config(cfg)?;
    let cfg = &setup.cfg;
    let result = run(&setup.state, &cfg.grid, &cfg.params, &cfg.solver)?;
    let summary = output::run_summary(&result, cfg)?;
    let summary = serde_json::to_string_pretty(&summary)?;
    match csv_path {
        Some(p) => {
            let mut f = std::io::BufWriter::new(
                std::fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
            );
            output::write_csv(&mut f, &result.series)?;
            f.flush()?;
            let json_path = p.with_extension("json");
            std::fs::write(&json_path, format!("{summary}\n"))
                .with_context(|| format!("cannot write {}", json_path.display()))?;
            writeln!(out, "{summary}")?;
        }
        None => {
            output::write_csv(out, &result.series)?;
            writeln!(err, "{summary}")?;
        }
    }
    Ok(if result.stop_reason == StopReason::TEndReached { 0 } else { 1 })
}

#[derive(Serialize)]
struct CheckReport {
    name: String,
    passed: bool,
    skipped: bool,
    report: Value,
}

impl CheckReport {
    fn done(name: &str, passed: bool, report: impl Serialize) -> anyhow::Result<Self> {
        Ok(Self { name: name.into(), passed, skipped: false, report: serde_json::to_value(report)? })
    }

    fn skipped(name: &str, why: impl std::fmt::Display) -> Self {
        Self { name: name.into(), passed: true, skipped: true, report: json!({ "note": why.to_string() }) }
    }
}

fn verify(path: &Path, suite: Suite, with_corpus: bool, out: &mut dyn Write) -> anyhow::Result<i32> {
    let setup = Setup::load(path)?;
    let cfg = &setup.cfg;
    let (params, grid, rho) = (&cfg.params, &cfg.grid, &setup.state.rho);
    let want = |s: Suite| suite == s || suite == Suite::All;
    let strict = |s: Suite| suite == s;
    let mut checks = Vec::new();

    // an explicitly requested suite that cannot run is an input error;
    // inside `all` it is reported as skipped
    let skip_or_fail = |s: Suite, name: &str, e: ep_core::Error, checks: &mut Vec<CheckReport>| -> anyhow::Result<()> {
        if strict(s) {
            bail!("{name}: {e}");
        }
        checks.push(CheckReport::skipped(name, e));
        Ok(())
    };

    if want(Suite::Hls) {
        match verify_hls(rho, grid, params, cfg.omega) {
            Ok(r) => checks.push(CheckReport::done("hls", r.direct.passed && r.interpolated.passed, &r)?),
            Err(e) => skip_or_fail(Suite::Hls, "hls", e, &mut checks)?,
        }
    }
    if want(Suite::Hlp) {
        match verify_hlp(rho, grid, params.n(), params.gamma().min(2.0), setup.c_hlp, &HlpSettings::default()) {
            Ok(r) => checks.push(CheckReport::done("hlp", r.margin.passed, &r)?),
            Err(e) => skip_or_fail(Suite::Hlp, "hlp", e, &mut checks)?,
        }
    }
    if want(Suite::Chemin) {
        let r = verify_chemin(rho, grid, params)?;
        let passed = r.chemin.passed && r.internal_derived.passed;
        checks.push(CheckReport::done("chemin", passed, &r)?);
    }
    if want(Suite::Lemma36) {
        match verify_lemma36(rho, grid, params, cfg.epsilon, setup.c_hlp, cfg.omega) {
            Ok(r) => {
                let passed = r.constructive.passed && r.printed.as_ref().is_none_or(|m| m.passed);
                checks.push(CheckReport::done("lemma36", passed, &r)?)
            }
            Err(e) => skip_or_fail(Suite::Lemma36, "lemma36", e, &mut checks)?,
        }
    }
    if want(Suite::Bounds) {
        let result = run(&setup.state, grid, params, &cfg.solver)?;
        let tol = BoundTolerances::default();
        let t = &setup.table;
        let s = &result.series;
        let mut bounds = verify_energy_bounds(s, t, params, &tol);
        bounds.extend(verify_moment_bounds(s, t, params, &tol));
        bounds.extend(verify_internal_energy_bounds(s, t, params, &tol));
        // bounds that do not follow for this data are reported, not gated on
        let passed = bounds.iter().filter(|b| b.applicable && b.implied).all(|b| b.passed);
        let report = json!({
            "stop_reason": result.stop_reason,
            "final_time": result.final_time,
            "samples": s.len(),
            "checks": bounds,
        });
        checks.push(CheckReport::done("bounds", passed, report)?);
    }
    if with_corpus && suite != Suite::Bounds {
        checks.push(corpus_check(&setup, suite)?);
    }

    let passed = checks.iter().all(|c| c.passed);
    let report = json!({
        "config": path.display().to_string(),
        "passed": passed,
        "C_HLP": setup.c_hlp,
        "C_HLP_source": setup.c_hlp_source,
        "checks": checks,
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    Ok(if passed { 0 } else { 1 })
}

/// Worst relative margin of each static oracle over the seeded corpus, with
/// the model parameters of the configuration (dimension 3).
fn corpus_check(setup: &Setup, suite: Suite) -> anyhow::Result<CheckReport> {
    let cfg = &setup.cfg;
    let params = &cfg.params;
    if params.n() != 3 {
        return Ok(CheckReport::skipped("corpus", "the corpus is three-dimensional"));
    }
    let want = |s: Suite| suite == s || suite == Suite::All;
    let entries = corpus(&cfg.corpus);
    let mut worst: Vec<(&str, f64, String)> = Vec::new();
    let mut note = |name: &'static str, margin: f64, entry: &str| match worst.iter_mut().find(|w| w.0 == name) {
        Some(w) if margin < w.1 => *w = (name, margin, entry.to_string()),
        Some(_) => {}
        None => worst.push((name, margin, entry.to_string())),
    };
    for e in &entries {
        if want(Suite::Hls) {
            if let Ok(r) = verify_hls(&e.rho, &e.grid, params, cfg.omega) {
                note("hls", r.direct.relative_margin().min(r.interpolated.relative_margin()), &e.name);
            }
        }
        if want(Suite::Hlp) && params.gamma() <= 2.0 {
            let r = verify_hlp(&e.rho, &e.grid, 3, params.gamma(), setup.c_hlp, &HlpSettings::default())?;
            note("hlp", r.margin.relative_margin(), &e.name);
        }
        if want(Suite::Chemin) {
            note("chemin", verify_chemin(&e.rho, &e.grid, params)?.chemin.relative_margin(), &e.name);
        }
        if want(Suite::Lemma36) {
            if let Ok(r) = verify_lemma36(&e.rho, &e.grid, params, cfg.epsilon, setup.c_hlp, cfg.omega) {
                note("lemma36", r.constructive.relative_margin(), &e.name);
            }
        }
    }
    let tol = ep_core::oracles::TOL_NUM;
    let passed = worst.iter().all(|w| w.1 >= -tol);
    let report: Vec<Value> =
        worst.iter().map(|(n, m, e)| json!({ "oracle": n, "worst_relative_margin": m, "density": e })).collect();
    CheckReport::done("corpus", passed, json!({ "densities": entries.len(), "seed": cfg.corpus.seed, "worst": report }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn unknown_flag_is_a_usage_error() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = main_with(["ep-blowup", "simulate", "x.cfg", "--bogus"], &mut out, &mut err);
        assert_eq!(code, 2);
        assert!(String::from_utf8(err).unwrap().contains("--bogus"));
    }

    #[test]
    fn help_exits_zero() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(main_with(["ep-blowup", "--help"], &mut out, &mut err), 0);
        assert!(String::from_utf8(out).unwrap().contains("simulate"));
    }
}
