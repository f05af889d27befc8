use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("reduction exceeded the step budget of {0}")]
    StepBudgetExceeded(u64),

    #[error("normal form is not an ordered-linear B-form: {0}")]
    NotBFormShape(String),

    #[error("no cycle found within {0} steps")]
    NotFound(u64),

    #[error("degree arithmetic overflowed")]
    Overflow,

    #[error("every degree is zero")]
    AllZero,

    #[error("invalid degree sequence: {0}")]
    InvalidSeq(String),

    #[error("checkpoint i/o: {0}")]
    CheckpointIo(String),

    #[error("unsupported or malformed checkpoint: {0}")]
    FormatVersionMismatch(String),
}
