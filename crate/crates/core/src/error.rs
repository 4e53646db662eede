use thiserror::Error;

/// Errors produced by the numerical pipeline.
///
/// Obstructions are never errors: a verdict of "obstructed" is an ordinary
/// result. Only malformed input and numerical breakdown end up here.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid covector point: {0}")]
    InvalidPoint(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported geometry {geometry} for {operation}")]
    UnsupportedGeometry {
        geometry: &'static str,
        operation: &'static str,
    },

    #[error("invalid mesh '{label}': {reason}")]
    InvalidMesh { label: String, reason: String },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("degenerate spectrum: relative gap {min_rel_gap:e} below {gap_tol:e}")]
    DegenerateSpectrum { min_rel_gap: f64, gap_tol: f64 },

    #[error("inadmissible plaquette on '{probe}': {reason}")]
    Inadmissible { probe: String, reason: String },

    #[error("under-resolved graph: {0}")]
    UnderResolved(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::DegenerateSpectrum { .. }
                | Error::Inadmissible { .. }
                | Error::UnderResolved(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
