use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension n = {n}: must be at least {min}")]
    InvalidDimension { n: usize, min: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("degenerate plane: normalized Gram determinant {0:.3e} is below tolerance")]
    DegeneratePlane(f64),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("no sign change of F(t) on (0, {t_max}] for C1 = {c1}, C2 = {c2}")]
    NoRoot { c1: f64, c2: f64, t_max: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("value not tabulated for n = {0}")]
    NotTabulated(usize),

    #[error("numerical overflow: {0}")]
    Overflow(String),
}

impl Error {
    /// True for failures of a numerical procedure (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoRoot { .. } | Error::Overflow(_) | Error::DegeneratePlane(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
