use alloc::string::String;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("amplitude must be positive, got {0}")]
    NonPositiveAmplitude(f64),
    #[error("density tail not negligible: rho/max(rho) = {ratio:e} exceeds tail tolerance {tol:e} at r = {radius}")]
    TailViolation { ratio: f64, tol: f64, radius: f64 },
    #[error("non-finite sample at cell {0}")]
    NonFinite(usize),
    #[error("profile has {got} samples but the grid has {expected} cells")]
    GridMismatch { expected: usize, got: usize },
    #[error("state has no potential; solve the Poisson equation first")]
    MissingPotential,
    #[error("exponent constraint violated: {0}")]
    ExponentConstraint(String),
    #[error("gamma = {gamma} is infeasible here: requires gamma > {bound}")]
    InfeasibleGamma { gamma: f64, bound: f64 },
    #[error("wrong force sign: {0}")]
    WrongForceSign(String),
    #[error("wrong system: {0}")]
    WrongSystem(String),
    #[error("no crossing found on [0, {t_cap:e}]")]
    NoCrossing { t_cap: f64 },
    #[error("time series spacing is not uniform at sample {index}")]
    NonUniformSpacing { index: usize },
    #[error("time series needs at least {needed} samples, got {got}")]
    SeriesTooShort { needed: usize, got: usize },
    #[error("positivity failure at cell {cell}, t = {t}")]
    PositivityFailure { cell: usize, t: f64 },
    #[error("CFL failure at t = {t}: time step underflow")]
    CflFailure { t: f64 },
    #[error("unsupported dimension n = {0}")]
    UnsupportedDimension(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
