use thiserror::Error;

/// Errors raised by the geometry, jet and audit layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("division by a jet with zero value")]
    DivisionByZero,

    #[error("{func} is undefined at {value}")]
    Domain { func: &'static str, value: f64 },

    #[error("point ({v1}, {v2}) lies outside the patch domain")]
    OutsideDomain { v1: f64, v2: f64 },

    #[error("lightlike normal: W = {w:e} below admissibility threshold")]
    LightlikeNormal { w: f64 },

    #[error("inadmissible point: both tangent x-components vanish")]
    InadmissiblePoint,

    #[error("normal has N·N = {value}, expected ±1")]
    NonUnitNormal { value: f64 },

    #[error("degenerate second fundamental form: |LN - M²| = {det:e}")]
    DegenerateSecondForm { det: f64 },

    #[error("need at least {needed} valid points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("grid is empty")]
    EmptyGrid,

    #[error("factor product vanishes at ({v1}, {v2})")]
    VanishingFactor { v1: f64, v2: f64 },

    #[error("null-K classifier conflict: structural {structural}, numeric max|D| = {max_d:e}")]
    ClassifierConflict { structural: String, max_d: f64 },

    #[error("unknown audit case `{0}`")]
    UnknownCase(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl GeomError {
    /// Short machine-readable tag used in report rows.
    pub fn kind(&self) -> &'static str {
        match self {
            GeomError::DivisionByZero => "DivisionByZero",
            GeomError::Domain { .. } => "DomainError",
            GeomError::OutsideDomain { .. } => "OutsideDomain",
            GeomError::LightlikeNormal { .. } => "LightlikeNormal",
            GeomError::InadmissiblePoint => "InadmissiblePoint",
            GeomError::NonUnitNormal { .. } => "NonUnitNormal",
            GeomError::DegenerateSecondForm { .. } => "DegenerateSecondForm",
            GeomError::InsufficientData { .. } => "InsufficientData",
            GeomError::EmptyGrid => "EmptyGrid",
            GeomError::VanishingFactor { .. } => "VanishingFactor",
            GeomError::ClassifierConflict { .. } => "ClassifierConflict",
            GeomError::UnknownCase(_) => "UnknownCase",
            GeomError::InvalidParameter { .. } => "InvalidParameter",
            GeomError::Parse(_) => "ParseError",
        }
    }
}

/// Factor-function grammar error, with the byte offset where parsing stopped.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: expected {expected}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
}

impl ParseError {
    pub(crate) fn new(offset: usize, expected: impl Into<String>) -> Self {
        Self {
            offset,
            expected: expected.into(),
        }
    }
}
