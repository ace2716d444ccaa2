use num_bigint::BigUint;
use thiserror::Error;

use crate::channel::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(usize),
    #[error("symbol {0} is not an input of this channel")]
    UnknownSymbol(Symbol),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("word {0:?} violates the run constraint")]
    ConstraintViolation(Vec<Symbol>),
    #[error("index {index} out of range, only {count} words")]
    IndexOutOfRange { index: BigUint, count: BigUint },
    #[error("message {message} out of range, strategy has {count} messages")]
    MessageOutOfRange { message: BigUint, count: BigUint },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(
        "strategy emitted symbol {symbol} outside the alphabet of size {q} at position {position}"
    )]
    SymbolOutOfAlphabet {
        symbol: Symbol,
        q: usize,
        position: usize,
    },
    #[error(
        "adversary chose inadmissible output {output} for input {input} at position {position}"
    )]
    InadmissibleOutput {
        input: Symbol,
        output: Symbol,
        position: usize,
    },
    #[error("adversary exceeded the error budget of {budget}")]
    BudgetExceeded { budget: usize },
    #[error("received word has length {got}, block length is {block}")]
    LengthMismatch { got: usize, block: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
