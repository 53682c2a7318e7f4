use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("interaction model has no applicable law at r = {r:e} m")]
    NoApplicableLaw { r: f64 },
    #[error("interaction laws disagree by {mismatch:.3e} (relative) at the crossover radius")]
    Discontinuous { mismatch: f64 },
    #[error("no separation in range gives a shift of {target:e} rad/s")]
    OutOfRange { target: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BudgetError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("k = {0} is not supported (maximum {max})", max = crate::MAX_CONTROLS)]
    UnsupportedK(u32),
    #[error("error term {term} is not finite")]
    NonFinite { term: &'static str },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizeError {
    #[error("objective is not finite at {x:e}")]
    NonFinite { x: f64 },
    #[error("invalid bracket [{lo:e}, {hi:e}]")]
    InvalidBracket { lo: f64, hi: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("{atoms} atoms exceed the simulator cap of {cap}")]
    TooManyAtoms { atoms: usize, cap: usize },
    #[error("invalid simulation input: {0}")]
    Invalid(&'static str),
}
