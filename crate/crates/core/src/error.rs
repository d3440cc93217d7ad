use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("initial state is not finite in cell {cell} (x = {x})")]
    NonFiniteInitialState { cell: usize, x: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("shape parameter {s} outside the admissible range |s| <= {limit}")]
    ShapeOutOfRange { s: f64, limit: f64 },

    #[error("degenerate stencil coefficients: {0}")]
    DegenerateCoefficients(String),

    #[error("inadmissible state (rho = {rho}, p = {p})")]
    InadmissibleState { rho: f64, p: f64 },

    #[error("degenerate characteristic basis (sound speed {c})")]
    DegenerateEigensystem { c: f64 },

    #[error("failure at interface {interface}: {source}")]
    AtInterface {
        interface: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("non-finite value in Runge-Kutta stage {stage}")]
    NonFiniteStage { stage: usize },

    #[error("time step collapsed to {dt:e} at t = {t}")]
    TimeStepCollapse { t: f64, dt: f64 },

    #[error("step limit {steps} reached at t = {t}")]
    StepLimit { steps: usize, t: f64 },

    #[error("root solve did not converge for x = {x} after {iterations} iterations")]
    NoConvergence { x: f64, iterations: usize },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("problem `{0}` has no exact solution")]
    NoExactSolution(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn at_interface(self, interface: usize) -> Self {
        Error::AtInterface {
            interface,
            source: Box::new(self),
        }
    }

    /// True for errors caused by bad user input rather than a solver failure.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig(_)
                | Error::InvalidGrid(_)
                | Error::Unknown { .. }
                | Error::NoExactSolution(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
