use thiserror::Error;

/// Errors raised by the library. Every variant is a domain error: the
/// input was understood but violates a precondition of the operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid substitution: {0}")]
    Construction(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("word {0} is not in the language of the substitution")]
    NotInLanguage(String),

    #[error("image of letter {0} does not begin with {0}; no fixed point starts there")]
    NotAFixedPoint(u8),

    #[error("no synchronization delay found up to cap {0} (substitution may be periodic; raise the cap)")]
    CapExceeded(usize),

    #[error("length {len} is below the required minimum {min}")]
    LengthOutOfRange { len: usize, min: usize },

    #[error("parameters b={b}, m={m} give a periodic word (b ≡ 1 (mod m))")]
    Periodic { b: usize, m: usize },

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
