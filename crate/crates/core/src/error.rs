use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("counts CSV is empty")]
    EmptyInput,
    #[error("header must name at least one factor followed by a final `count` column")]
    BadHeader,
    #[error("line {line}: expected {expected} fields, found {found}")]
    FieldCount { line: usize, expected: usize, found: usize },
    #[error("line {line}: duplicate cell")]
    DuplicateCell { line: usize },
    #[error("line {line}: count `{value}` is not a number")]
    InvalidCount { line: usize, value: String },
    #[error("line {line}: negative count {value}")]
    NegativeCount { line: usize, value: f64 },
    #[error("line {line}: empty level label")]
    EmptyLabel { line: usize },
    #[error("factor `{0}` has fewer than two levels")]
    TooFewLevels(String),
    #[error("duplicate factor name `{0}`")]
    DuplicateFactor(String),
    #[error("duplicate level `{level}` in factor `{factor}`")]
    DuplicateLevel { factor: String, level: String },
    #[error("table total must be positive")]
    ZeroTotal,
    #[error("expected {expected} counts, got {found}")]
    CountLength { expected: usize, found: usize },
    #[error("cell has {found} ordinals but the table has {expected} factors")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ordinal {ordinal} out of range for factor `{factor}` with {levels} levels")]
    OrdinalOutOfRange { factor: String, ordinal: usize, levels: usize },
    #[error("unknown factor `{0}`")]
    UnknownFactor(String),
    #[error("factor set must not be empty")]
    EmptyFactorSet,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self-loop on vertex `{0}`")]
    SelfLoop(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("graphs are limited to {max} vertices, got {found}")]
    TooManyVertices { max: usize, found: usize },
    #[error("vertex `{0}` is not covered by any set")]
    UncoveredVertex(String),
    #[error("edge {0}--{1} is already present")]
    EdgePresent(String, String),
    #[error("model `{0}` is not a valid generating class: {1}")]
    InvalidModel(String, String),
    #[error("cannot parse model `{0}`: {1}")]
    ModelParse(String, String),
    #[error("IPF tolerance must be positive and max_iter at least 1")]
    InvalidIpfSettings,
    #[error("fit of `{0}` did not converge")]
    NotConverged(String),
    #[error("chi-square statistic must be non-negative, got {0}")]
    NegativeStatistic(f64),
    #[error("chi-square degrees of freedom must be at least 1")]
    ZeroDf,
    #[error("significance level must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("models are not nested: {0}")]
    NotNested(String),
    #[error("table must have at least {0} factors")]
    TooFewFactors(usize),
}
