use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid election: {0}")]
    InvalidElection(String),

    #[error("invalid rule: {0}")]
    InvalidRule(String),

    #[error("unknown candidate `{0}`")]
    UnknownCandidate(String),

    #[error("unknown target candidate `{0}`")]
    UnknownTarget(String),

    #[error("vulnerable vote {0} has no price")]
    MissingPrice(usize),

    #[error("uniform variant requires all finite vulnerable prices to be equal")]
    NonUniformPrices,

    #[error("priced variant requires a budget")]
    MissingBudget,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("budget {budget} exceeds the constant-budget cap {cap}")]
    BudgetTooLarge { budget: u64, cap: u64 },

    #[error("invalid source instance: {0}")]
    InvalidSource(String),

    #[error("condition violated: {0}")]
    ConditionViolated(String),

    #[error("partition source contains 2K and is trivially a no instance")]
    TriviallyNo,

    #[error("score realization needs at least one dummy candidate")]
    EmptyDummySet,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: ranking lists {found} of {expected} candidates")]
    IncompleteRanking {
        line: usize,
        found: usize,
        expected: usize,
    },

    #[error("unknown reduction `{0}`")]
    UnknownReduction(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
