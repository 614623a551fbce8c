use thiserror::Error;

/// Errors raised by the algebra, frame, syntax and search layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid construction: {0}")]
    Construction(String),

    #[error("{0}")]
    Precondition(String),

    #[error("not separable: {0}")]
    NotSeparable(String),

    #[error("syntax error at {position}: expected one of [{}], found {found}", expected.join(", "))]
    Syntax {
        position: usize,
        expected: Vec<String>,
        found: String,
    },

    #[error("language error: {0}")]
    Language(String),

    #[error("missing assignment for variable `{0}`")]
    MissingAssignment(String),

    #[error("arity mismatch for `{name}`: expected {expected}, found {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable snake_case name of the variant, used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Construction(_) => "construction",
            Error::Precondition(_) => "precondition",
            Error::NotSeparable(_) => "not_separable",
            Error::Syntax { .. } => "syntax",
            Error::Language(_) => "language",
            Error::MissingAssignment(_) => "missing_assignment",
            Error::Arity { .. } => "arity",
            Error::Resource(_) => "resource",
            Error::Json(_) => "json",
        }
    }
}
