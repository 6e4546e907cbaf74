use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operands live in different cyclotomic fields Q(zeta_{0}) and Q(zeta_{1})")]
    FieldMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("group closure exceeded {0} elements")]
    ClosureOverflow(usize),
    #[error("polynomial is not invariant under the group")]
    NotInvariant,
    #[error("no syzygy found among the invariants")]
    NoSyzygy,
    #[error("degenerate parameter: {0}")]
    Degenerate(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("character table computation failed: {0}")]
    CharacterTable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
