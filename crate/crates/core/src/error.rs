use thiserror::Error;

/// Every failure the laboratory reports. [`LevyError::code`] gives the
/// stable kebab-case identifier used in reports and CLI diagnostics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LevyError {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("model spec error at `{field}`: {message}")]
    Spec { field: String, message: String },

    #[error("symbol quadrature did not converge (error estimate {error_estimate:e})")]
    SymbolQuadratureFailed { error_estimate: f64 },

    #[error("operation needs a Lévy measure; model `{0}` has none")]
    NoLevyMeasure(String),

    #[error("degenerate profile: φ vanishes on the whole tabulated range")]
    DegenerateProfile,

    #[error("{value:e} is outside the admissible interval [{lo:e}, {hi:e}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("divergent moment: {0}")]
    DivergentMoment(String),

    #[error("incomparable measures: {0}")]
    IncomparableMeasures(String),

    #[error("grid under-resolved: {0}")]
    GridUnderresolved(String),

    #[error("Hartman–Wintner diagnostic violated: t = {t:e} is below the absolute-continuity threshold {threshold:e}")]
    HwViolated { t: f64, threshold: f64 },

    #[error("integral does not converge: {0}")]
    Nonintegrable(String),

    #[error("shift {shift} exceeds the wrap-around guard {limit}")]
    ShiftTooLarge { shift: f64, limit: f64 },

    #[error("insufficient span: {0}")]
    InsufficientSpan(String),

    #[error("Poisson mean {mean:e} exceeds the sampler limit")]
    RateOverflow { mean: f64 },

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl LevyError {
    pub fn code(&self) -> &'static str {
        match self {
            LevyError::InvalidModel(_) => "invalid-model",
            LevyError::Spec { .. } => "spec-error",
            LevyError::SymbolQuadratureFailed { .. } => "symbol-quadrature-failed",
            LevyError::NoLevyMeasure(_) => "no-levy-measure",
            LevyError::DegenerateProfile => "degenerate-profile",
            LevyError::OutOfRange { .. } => "out-of-range",
            LevyError::DivergentMoment(_) => "divergent-moment",
            LevyError::IncomparableMeasures(_) => "incomparable-measures",
            LevyError::GridUnderresolved(_) => "grid-underresolved",
            LevyError::HwViolated { .. } => "hw-violated",
            LevyError::Nonintegrable(_) => "nonintegrable",
            LevyError::ShiftTooLarge { .. } => "shift-too-large",
            LevyError::InsufficientSpan(_) => "insufficient-span",
            LevyError::RateOverflow { .. } => "rate-overflow",
            LevyError::InsufficientSamples(_) => "insufficient-samples",
            LevyError::InvalidArgument(_) => "invalid-argument",
        }
    }

    pub(crate) fn spec(field: impl Into<String>, message: impl Into<String>) -> Self {
        LevyError::Spec {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = LevyError> = std::result::Result<T, E>;
