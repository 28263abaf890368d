use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at position {position}: expected {expected}, found {found}")]
    Parse {
        position: usize,
        expected: String,
        found: String,
    },

    #[error("group order {order} exceeds the cap of {cap}")]
    OrderCap { order: usize, cap: usize },

    #[error("coset enumeration exceeded {limit} cosets without closing")]
    EnumerationLimit { limit: usize },

    #[error("relator `{relator}` is inconsistent with the presentation: {detail}")]
    InconsistentRelator { relator: String, detail: String },

    #[error("invalid group table: {0}")]
    InvalidTable(String),

    #[error("operands belong to different group rings")]
    RingMismatch,

    #[error("the ideal contains 1 (improper ideal)")]
    ImproperIdeal,

    #[error("the ideal basis has not been verified to be closed")]
    UnclosedIdeal,

    #[error("element is not a unit")]
    NotUnit,

    #[error("group is not abelian")]
    NotAbelian,

    #[error("{what} has size {size}, above the cap of {cap}")]
    SizeCap {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("isomorphism test undecided after {nodes} backtrack nodes")]
    Undecided { nodes: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(position: usize, expected: impl Into<String>, found: impl Into<String>) -> Self {
        Error::Parse {
            position,
            expected: expected.into(),
            found: found.into(),
        }
    }
}
