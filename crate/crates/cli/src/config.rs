//! Plain `key = value` configuration files.
//!
//! `#` starts a comment, blank lines are ignored, every key may appear once.
//! Lists (table columns) are comma separated. See the README for the key
//! reference.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ep_core::constants::OmegaConvention;
use ep_core::oracles::CorpusOptions;
use ep_core::profile::{DensityLaw, EntropyLaw, ProfileSpec, Table, VelocityLaw};
use ep_core::solver::{Limiter, SolverConfig};
use ep_core::{ForceSign, ModelParams, RadialGrid, System};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{key}` already set on line {first}")]
    Duplicate { line: usize, key: String, first: usize },
    #[error("line {line}: `{key}`: {message}")]
    Value { line: usize, key: String, message: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("{0}")]
    Model(#[from] ep_core::Error),
}

const KEYS: &[&str] = &[
    "kind",
    "amplitude",
    "width",
    "radius",
    "table.r",
    "table.rho",
    "velocity.kind",
    "velocity.alpha",
    "entropy.s0",
    "entropy.pressure_scale",
    "tail_tol",
    "grid.r_max",
    "grid.cells",
    "model.n",
    "model.gamma",
    "model.delta",
    "model.system",
    "model.gas_constant",
    "c_hlp",
    "hls.omega",
    "solver.t_end",
    "solver.cfl",
    "solver.output_stride",
    "solver.limiter",
    "solver.blowup_factor",
    "solver.density_floor",
    "solver.potential_work",
    "verify.epsilon",
    "corpus.cells",
    "corpus.r_max",
    "corpus.random",
    "corpus.seed",
];

/// Everything a subcommand may need from one file.
#[derive(Debug, Clone)]
pub struct Config {
    pub params: ModelParams,
    pub grid: RadialGrid,
    pub profile: ProfileSpec,
    /// `c_hlp` from the file, before the environment override.
    pub c_hlp: Option<f64>,
    pub omega: OmegaConvention,
    pub solver: SolverConfig,
    pub epsilon: f64,
    pub corpus: CorpusOptions,
}

struct Entry {
    line: usize,
    value: String,
    used: bool,
}

struct Raw(BTreeMap<String, Entry>);

impl Raw {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut map: BTreeMap<String, Entry> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((k, v)) = body.split_once('=') else {
                return Err(ConfigError::Syntax { line, text: raw.trim().to_string() });
            };
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() {
                return Err(ConfigError::Syntax { line, text: raw.trim().to_string() });
            }
            if !KEYS.contains(&k) {
                return Err(ConfigError::UnknownKey { line, key: k.to_string() });
            }
            if let Some(prev) = map.get(k) {
                return Err(ConfigError::Duplicate { line, key: k.to_string(), first: prev.line });
            }
            map.insert(k.to_string(), Entry { line, value: v.to_string(), used: false });
        }
        Ok(Self(map))
    }

    fn bad(&self, key: &str, message: impl Into<String>) -> ConfigError {
        let line = self.0.get(key).map_or(0, |e| e.line);
        ConfigError::Value { line, key: key.to_string(), message: message.into() }
    }

    fn text(&mut self, key: &str) -> Option<String> {
        self.0.get_mut(key).map(|e| {
            e.used = true;
            e.value.clone()
        })
    }

    fn num<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.text(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| self.bad(key, format!("cannot parse {v:?} as a number"))),
        }
    }

    fn num_or<T: std::str::FromStr>(&mut self, key: &str, default: T) -> Result<T, ConfigError> {
        Ok(self.num(key)?.unwrap_or(default))
    }

    fn required<T: std::str::FromStr>(&mut self, key: &'static str) -> Result<T, ConfigError> {
        self.num(key)?.ok_or(ConfigError::Missing(key))
    }

    fn list(&mut self, key: &'static str) -> Result<Vec<f64>, ConfigError> {
        let v = self.text(key).ok_or(ConfigError::Missing(key))?;
        v.split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| self.bad(key, format!("cannot parse {:?} as a number", x.trim()))))
            .collect()
    }

    fn flag(&mut self, key: &str) -> Result<Option<bool>, ConfigError> {
        match self.text(key).as_deref() {
            None => Ok(None),
            Some("true" | "yes" | "1") => Ok(Some(true)),
            Some("false" | "no" | "0") => Ok(Some(false)),
            Some(v) => Err(self.bad(key, format!("expected true or false, got {v:?}"))),
        }
    }

    /// Keys that are valid but irrelevant for the chosen profile kind.
    fn unused(&self) -> Option<(&str, usize)> {
        self.0.iter().find(|(_, e)| !e.used).map(|(k, e)| (k.as_str(), e.line))
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut raw = Raw::parse(text)?;

        let n: usize = raw.num_or("model.n", 3)?;
        let gamma: f64 = raw.required("model.gamma")?;
        let delta: i32 = raw.num_or("model.delta", -1)?;
        let force = ForceSign::from_delta(delta).map_err(|e| raw.bad("model.delta", e.to_string()))?;
        let system = match raw.text("model.system").as_deref() {
            None | Some("isentropic" | "iep") => System::Isentropic,
            Some("full" | "ep") => System::Full,
            Some(v) => return Err(raw.bad("model.system", format!("expected isentropic or full, got {v:?}"))),
        };
        let mut params = ModelParams::new(n, gamma, force, system).map_err(|e| raw.bad("model.gamma", e.to_string()))?;
        if let Some(r) = raw.num("model.gas_constant")? {
            params = params.with_gas_constant(r).map_err(|e| raw.bad("model.gas_constant", e.to_string()))?;
        }

        let r_max: f64 = raw.required("grid.r_max")?;
        let cells: usize = raw.required("grid.cells")?;
        let grid = RadialGrid::new(r_max, cells).map_err(|e| raw.bad("grid.cells", e.to_string()))?;

        let kind = raw.text("kind").ok_or(ConfigError::Missing("kind"))?;
        let density = match kind.as_str() {
            "gaussian" => DensityLaw::Gaussian { amplitude: raw.required("amplitude")?, width: raw.required("width")? },
            "ball" => DensityLaw::Ball { amplitude: raw.required("amplitude")?, radius: raw.required("radius")? },
            "table" => {
                let (r, rho) = (raw.list("table.r")?, raw.list("table.rho")?);
                DensityLaw::Tabulated(Table::new(r, rho).map_err(|e| raw.bad("table.rho", e.to_string()))?)
            }
            other => return Err(raw.bad("kind", format!("expected gaussian, ball or table, got {other:?}"))),
        };
        let velocity = match raw.text("velocity.kind").as_deref() {
            None | Some("zero") => VelocityLaw::Zero,
            Some("linear") => VelocityLaw::Linear { alpha: raw.required("velocity.alpha")? },
            Some(v) => return Err(raw.bad("velocity.kind", format!("expected zero or linear, got {v:?}"))),
        };
        let entropy = match (raw.num::<f64>("entropy.s0")?, raw.num::<f64>("entropy.pressure_scale")?) {
            (Some(_), Some(_)) => {
                return Err(raw.bad("entropy.pressure_scale", "set either entropy.s0 or entropy.pressure_scale, not both"))
            }
            (Some(s0), None) => EntropyLaw::Constant(s0),
            (None, Some(k)) => {
                EntropyLaw::from_pressure_scale(k, &params).map_err(|e| raw.bad("entropy.pressure_scale", e.to_string()))?
            }
            (None, None) => EntropyLaw::Constant(0.0),
        };
        let mut profile = ProfileSpec::new(density).with_velocity(velocity).with_entropy(entropy);
        if let Some(t) = raw.num("tail_tol")? {
            profile = profile.with_tail_tol(t);
        }
        profile.validate(&grid)?;

        let c_hlp = raw.num::<f64>("c_hlp")?;
        if let Some(c) = c_hlp {
            if !(c > 0.0 && c.is_finite()) {
                return Err(raw.bad("c_hlp", "must be a positive number"));
            }
        }
        let omega = match raw.text("hls.omega").as_deref() {
            None | Some("ball") => OmegaConvention::BallMeasure,
            Some("sphere") => OmegaConvention::SphereArea,
            Some(v) => return Err(raw.bad("hls.omega", format!("expected ball or sphere, got {v:?}"))),
        };

        let d = SolverConfig::default();
        let limiter = match raw.text("solver.limiter").as_deref() {
            None | Some("mc") => Limiter::MonotonizedCentral,
            Some("minmod") => Limiter::Minmod,
            Some("first-order") => Limiter::FirstOrder,
            Some(v) => return Err(raw.bad("solver.limiter", format!("expected mc, minmod or first-order, got {v:?}"))),
        };
        let solver = SolverConfig {
            t_end: raw.num_or("solver.t_end", d.t_end)?,
            cfl: raw.num_or("solver.cfl", d.cfl)?,
            output_stride: raw.num_or("solver.output_stride", d.output_stride)?,
            blowup_factor: raw.num_or("solver.blowup_factor", d.blowup_factor)?,
            density_floor: raw.num_or("solver.density_floor", d.density_floor)?,
            potential_work: raw.flag("solver.potential_work")?.unwrap_or(d.potential_work),
            limiter,
            ..d
        };
        solver.validate()?;

        let epsilon = raw.num_or("verify.epsilon", 1.0)?;
        if !(epsilon > 0.0 && f64::is_finite(epsilon)) {
            return Err(raw.bad("verify.epsilon", "must be a positive number"));
        }
        let c = CorpusOptions::default();
        let corpus = CorpusOptions {
            n: 3,
            cells: raw.num_or("corpus.cells", c.cells)?,
            r_max: raw.num_or("corpus.r_max", c.r_max)?,
            random: raw.num_or("corpus.random", c.random)?,
            seed: raw.num_or("corpus.seed", c.seed)?,
        };
        if corpus.cells < 16 || !(corpus.r_max > 0.0) {
            return Err(raw.bad("corpus.cells", "corpus needs at least 16 cells and r_max > 0"));
        }

        if let Some((key, line)) = raw.unused() {
            return Err(ConfigError::Value {
                line,
                key: key.to_string(),
                message: format!("not used with kind = {kind} and the given velocity/entropy settings"),
            });
        }
        Ok(Self { params, grid, profile, c_hlp, omega, solver, epsilon, corpus })
    }
}
