use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("matrix is empty")]
    Empty,

    #[error("rank deficient: sigma_min/sigma_max = {ratio:e} is below the rank tolerance")]
    RankDeficient { ratio: f64 },

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("vectors {k} and {l} are collinear; the system is not minimal")]
    Collinear { k: usize, l: usize },

    #[error("vector {index} has zero norm")]
    ZeroVector { index: usize },

    /// An argument outside the domain of an operation in `module`.
    #[error("domain error: {message}")]
    Domain { module: &'static str, message: String },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("measure has no atoms")]
    EmptyMeasure,

    #[error("vector is not cyclic: coordinate {atom} (t = {t}) is zero")]
    NotCyclic { atom: usize, t: f64 },

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code, `<module>.<kind>`.
    pub fn code(&self) -> String {
        if let Error::Domain { module, .. } = self {
            return format!("{module}.domain");
        }
        let code = match self {
            Error::NonFinite { .. } => "numerics.non_finite",
            Error::ShapeMismatch { .. } => "numerics.shape_mismatch",
            Error::Empty => "numerics.empty",
            Error::RankDeficient { .. } => "numerics.rank_deficient",
            Error::IndexOutOfRange { .. } => "schauder.index_out_of_range",
            Error::Collinear { .. } => "schauder.collinear",
            Error::ZeroVector { .. } => "schauder.zero_vector",
            Error::Domain { .. } => unreachable!("handled above"),
            Error::InvalidMeasure(_) => "measure.invalid",
            Error::EmptyMeasure => "measure.empty",
            Error::NotCyclic { .. } => "shiftrep.not_cyclic",
            Error::Parse(_) => "io.parse",
        };
        code.to_string()
    }

    pub(crate) fn domain(module: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            module,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
