//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its admissible range (s, t, lambda, grids, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A grid or cube is malformed (non-finite values, size mismatch, out of range).
    #[error("invalid field: {0}")]
    InvalidField(String),

    /// A dyadic cube with a single cell per side (or odd side) cannot be split.
    #[error("cube of {len} cells per side cannot be subdivided")]
    IndivisibleCube { len: usize },

    /// A cube or pair family exceeds the configured enumeration cap.
    #[error("family of {count} members exceeds cap {cap}; choose a sparser family")]
    FamilyTooLarge { count: usize, cap: usize },

    /// The two cubes of a pair have overlapping interiors.
    #[error("cube pair has overlapping interiors")]
    OverlappingPair,

    /// A decomposition was started on a cube violating its median hypothesis.
    #[error("decomposition hypothesis violated: {0}")]
    HypothesisViolated(String),

    /// The two-threshold refinement requires beta to dominate the sharp field.
    #[error("beta {beta} is below the sharp field maximum {sharp_max}")]
    BetaTooSmall { beta: f64, sharp_max: f64 },

    /// The modulus vanishes where a positive value is required.
    #[error("degenerate modulus: {0}")]
    DegenerateModulus(String),

    /// An argument lies outside the domain of the integral transform.
    #[error("domain error: {0}")]
    DomainError(String),

    /// The integral transform is not strictly decreasing and cannot be inverted.
    #[error("transform not invertible: {0}")]
    NonInvertible(String),

    /// A field file or CSV could not be parsed.
    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::InvalidField(_) => "invalid-field",
            Error::IndivisibleCube { .. } => "indivisible-cube",
            Error::FamilyTooLarge { .. } => "family-too-large",
            Error::OverlappingPair => "overlapping-pair",
            Error::HypothesisViolated(_) => "hypothesis-violated",
            Error::BetaTooSmall { .. } => "beta-too-small",
            Error::DegenerateModulus(_) => "degenerate-modulus",
            Error::DomainError(_) => "domain-error",
            Error::NonInvertible(_) => "non-invertible",
            Error::Format(_) => "malformed-input",
            Error::Io(_) => "io",
        }
    }

    /// Machine-readable form used by the CLI for stderr reporting.
    pub fn to_json(&self) -> String {
        format!(
            "{{\"error\":\"{}\",\"message\":{}}}",
            self.kind(),
            serde_json::Value::String(self.to_string())
        )
    }

    /// True for errors caused by bad parameter values rather than bad input data.
    pub fn is_parameter_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::IndivisibleCube { .. }
                | Error::FamilyTooLarge { .. }
                | Error::OverlappingPair
                | Error::HypothesisViolated(_)
                | Error::BetaTooSmall { .. }
                | Error::DegenerateModulus(_)
                | Error::DomainError(_)
                | Error::NonInvertible(_)
        )
    }
}
