use alloc::string::String;

/// Everything that can go wrong inside the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("element index {index} out of range for {count} elements")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("invalid radius: {0}")]
    InvalidRadius(String),
    #[error("stencil reach {reach} exceeds extent {extent} along a mirrored axis")]
    StencilExceedsDomain { reach: usize, extent: usize },
    #[error("operator would need about {needed} bytes, budget is {budget}")]
    MemoryBudget { needed: usize, budget: usize },
    #[error("invalid thresholds: {0}")]
    InvalidThresholds(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("invalid material: {0}")]
    InvalidMaterial(String),
    #[error("stiffness matrix is singular (insufficient supports?)")]
    Singular,
    #[error("iterative solver did not converge after {iterations} iterations (residual {residual:e})")]
    SolverNonConvergence { iterations: usize, residual: f64 },
    #[error("infeasible length scales: r_max {r_max} is below the bound {bound}")]
    Infeasible { r_max: f64, bound: f64 },
    #[error("no root in bracket for {0}")]
    NoRoot(String),
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("MMA subproblem failed: {0}")]
    Mma(String),
}

pub type Result<T> = core::result::Result<T, Error>;
