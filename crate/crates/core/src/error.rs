use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the engine can report.
///
/// Each variant has a stable snake-case [`code`](Error::code) which the CLI
/// prints as `error: <code>: <detail>`.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown primitive relation `{0}`")]
    UnknownRelation(String),

    #[error("unknown dimension `{0}`")]
    UnknownDimension(String),

    #[error("invalid concept sense: {0}")]
    InvalidSense(String),

    #[error("invalid property: {0}")]
    InvalidProperty(String),

    #[error("weight {0} is outside [0, 1]")]
    InvalidWeight(f64),

    #[error("invalid assertion: {0}")]
    InvalidAssertion(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("snapshot contains no assertions")]
    EmptySnapshot,

    #[error("theta {0} is outside [0, 1]")]
    InvalidTheta(f64),

    #[error("sense `{0}` does not occur in the type graph")]
    UnknownSense(String),

    #[error("no nominalization for `{0}`")]
    MissingNominalization(String),

    #[error("HasValue filler `{0}` must have the form `attribute:value`")]
    InvalidValueFiller(String),

    #[error("dimension list is empty")]
    EmptyDimensionList,

    #[error("invalid dimension weights: {0}")]
    InvalidDimensionWeights(String),

    #[error("no signature for relation `{0}`")]
    UnknownRelationSignature(String),

    #[error("no bridge relation from `{expected}` to `{actual}`")]
    NoBridgeRelation { expected: String, actual: String },

    #[error("cannot resolve `{0}`: both arguments mismatch and at least one has no bridge")]
    UnresolvableApplication(String),

    #[error("invalid template: {0}")]
    InvalidTemplate(String),

    #[error("completion contained no fillers")]
    EmptyCompletion,

    #[error("rank {rank} is outside 1..={n}")]
    RankOutOfRange { rank: usize, n: usize },

    #[error("provider error: {0}")]
    Provider(String),

    #[error("usage: {0}")]
    Usage(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnknownRelation(_) => "unknown_relation",
            Error::UnknownDimension(_) => "unknown_dimension",
            Error::InvalidSense(_) => "invalid_sense",
            Error::InvalidProperty(_) => "invalid_property",
            Error::InvalidWeight(_) => "invalid_weight",
            Error::InvalidAssertion(_) => "invalid_assertion",
            Error::Parse { .. } => "parse_error",
            Error::Io { .. } => "io_error",
            Error::EmptySnapshot => "empty_snapshot",
            Error::InvalidTheta(_) => "invalid_theta",
            Error::UnknownSense(_) => "unknown_sense",
            Error::MissingNominalization(_) => "missing_nominalization",
            Error::InvalidValueFiller(_) => "invalid_value_filler",
            Error::EmptyDimensionList => "empty_dimension_list",
            Error::InvalidDimensionWeights(_) => "invalid_dimension_weights",
            Error::UnknownRelationSignature(_) => "unknown_relation_signature",
            Error::NoBridgeRelation { .. } => "no_bridge_relation",
            Error::UnresolvableApplication(_) => "unresolvable_application",
            Error::InvalidTemplate(_) => "invalid_template",
            Error::EmptyCompletion => "empty_completion",
            Error::RankOutOfRange { .. } => "rank_out_of_range",
            Error::Provider(_) => "provider_error",
            Error::Usage(_) => "usage",
        }
    }

    /// Parse and usage failures, as opposed to domain failures.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Usage(_)
                | Error::Parse { .. }
                | Error::InvalidSense(_)
                | Error::UnknownDimension(_)
                | Error::InvalidTheta(_)
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
