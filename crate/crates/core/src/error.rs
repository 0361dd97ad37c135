use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LambertError {
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("operation requires a nonflat triangle")]
    WrongClass,
    #[error("angular momentum must be nonzero")]
    ZeroMomentum,
    #[error("b = {b} lies outside the admissible window ]{lo}, {hi}[ of type {k}")]
    OutOfWindow { k: u32, b: f64, lo: f64, hi: f64 },
    #[error("type {k} does not occur on the {branch} branch")]
    WrongParity { k: u32, branch: &'static str },
    #[error("type {0} has no minimal flight time; only types 2 and above do")]
    NotMultirevolution(u32),
    #[error("energy {0} is not negative")]
    NotElliptic(f64),
    #[error("flight time {target} is below the minimum {minimum} of type {k}")]
    NoSolution { k: u32, target: f64, minimum: f64 },
    #[error("root finding did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("step size control stalled at t = {0}")]
    ToleranceFailure(f64),
    #[error("no collision: the body escapes")]
    NoCollision,
}

pub type Result<T> = std::result::Result<T, LambertError>;
