use std::path::PathBuf;

use lenscale_core::Error as CoreError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const SOLVER: i32 = 3;
    pub const INFEASIBLE: i32 = 4;
    pub const VIOLATION: i32 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{origin}: {message}")]
    Config { origin: String, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{count} length-scale check(s) failed")]
    Violations { count: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(origin: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { origin: origin.into(), message: message.into() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format { path: path.into(), message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::Io { .. } | Error::Format { .. } => exit::CONFIG,
            Error::Violations { .. } => exit::VIOLATION,
            Error::Core(e) => match e {
                CoreError::Infeasible { .. } => exit::INFEASIBLE,
                CoreError::Singular
                | CoreError::SolverNonConvergence { .. }
                | CoreError::Mma(_)
                | CoreError::NoRoot(_)
                | CoreError::Calibration(_) => exit::SOLVER,
                CoreError::InvalidGrid(_)
                | CoreError::IndexOutOfRange { .. }
                | CoreError::InvalidRadius(_)
                | CoreError::StencilExceedsDomain { .. }
                | CoreError::MemoryBudget { .. }
                | CoreError::InvalidThresholds(_)
                | CoreError::LengthMismatch { .. }
                | CoreError::OutOfRange(_)
                | CoreError::InvalidMaterial(_)
                | CoreError::InvalidConfig(_) => exit::CONFIG,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_category() {
        assert_eq!(Error::config("x", "y").exit_code(), 2);
        assert_eq!(Error::Core(CoreError::Singular).exit_code(), 3);
        assert_eq!(Error::Core(CoreError::Infeasible { r_max: 5.0, bound: 6.0 }).exit_code(), 4);
        assert_eq!(Error::Core(CoreError::InvalidRadius("r".into())).exit_code(), 2);
        assert_eq!(Error::Violations { count: 1 }.exit_code(), 5);
    }
}
