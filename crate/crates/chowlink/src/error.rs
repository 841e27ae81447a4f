use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("curve data has no intersection number with `{0}`")]
    IncompleteCurveData(String),
    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),
    #[error("degree underflow: {0}")]
    DegreeUnderflow(String),
    #[error("boundary is not of the form xi + aF: {0}")]
    BadBoundaryShape(String),
    #[error("not a section: {0}")]
    NotASection(String),
    #[error("not a ruling: {0}")]
    NotARuling(String),
    #[error("inconsistent flags: {0}")]
    InconsistentFlags(String),
    #[error("parity violation: delta + e = {0} is odd with boundary F_0")]
    ParityViolation(String),
    #[error("type is already 0")]
    TypeZero,
    #[error("Hirzebruch degree is already 0")]
    DegreeZero,
    #[error("not the standard model: {0}")]
    NotStandard(String),
    #[error("wrong model kind: {0}")]
    WrongModel(String),
    #[error("syntax error at offset {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("degree mismatch: product of degree {found}, model dimension {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("invalid descriptor: {0}")]
    Descriptor(String),
    #[error("undetermined: missing {0:?}")]
    Undetermined(Vec<String>),
    #[error("not a compactification of A^3: {0}")]
    NotA3(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Variant name, stable across message changes.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnknownGenerator(_) => "UnknownGenerator",
            Error::IncompleteCurveData(_) => "IncompleteCurveData",
            Error::PatternMismatch(_) => "PatternMismatch",
            Error::DegreeUnderflow(_) => "DegreeUnderflow",
            Error::BadBoundaryShape(_) => "BadBoundaryShape",
            Error::NotASection(_) => "NotASection",
            Error::NotARuling(_) => "NotARuling",
            Error::InconsistentFlags(_) => "InconsistentFlags",
            Error::ParityViolation(_) => "ParityViolation",
            Error::TypeZero => "TypeZero",
            Error::DegreeZero => "DegreeZero",
            Error::NotStandard(_) => "NotStandard",
            Error::WrongModel(_) => "WrongModel",
            Error::Syntax { .. } => "Syntax",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::UnknownName(_) => "UnknownName",
            Error::Descriptor(_) => "Descriptor",
            Error::Undetermined(_) => "Undetermined",
            Error::NotA3(_) => "NotA3",
        }
    }
}
