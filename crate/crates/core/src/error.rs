use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid character {ch:?} at position {position}")]
    InvalidCharacter { position: usize, ch: char },

    #[error("record {record:?} line {line}: invalid character {ch:?}")]
    InvalidRecord { record: String, line: usize, ch: char },

    #[error("empty sequence")]
    EmptySequence,

    #[error("stem span {d} does not exceed half the sequence length {len}")]
    NotAcceptorCandidate { d: u32, len: u32 },

    #[error("clique budget exceeded after {found} cliques")]
    BudgetExceeded { found: usize },

    #[error("invalid stem pattern {0:?}")]
    InvalidPattern(String),

    #[error("invalid interval {0:?}")]
    InvalidInterval(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("unknown profile {0:?}")]
    UnknownProfile(String),

    #[error("pair ({p}, {q}) outside sequence of length {len}")]
    IndexOutOfRange { p: u32, q: u32, len: u32 },

    #[error("position {0} claims partner {1} but {1} does not claim {0}")]
    AsymmetricPair(u32, u32),

    #[error("position {0} appears in more than one pair")]
    DuplicateIndex(u32),

    #[error("structure needs more than four bracket tiers")]
    TooManyLayers,

    #[error("length mismatch: sequence has {sequence} residues, reference has {reference}")]
    LengthMismatch { sequence: u32, reference: u32 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
