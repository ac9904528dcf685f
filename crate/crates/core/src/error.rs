use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in Q(zeta_{order})")]
    DivisionByZero { order: u32 },

    #[error("cyclotomic order {order} exceeds the configured bound {bound}")]
    OrderTooLarge { order: u32, bound: u32 },

    #[error("invalid cyclotomic value: {0}")]
    InvalidCyclotomic(String),

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("generators act on different degrees ({expected} vs {found})")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("group order exceeds the enumeration bound {bound}")]
    GroupTooLarge { bound: usize },

    #[error("element set is not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("class functions live on different groups")]
    GroupMismatch,

    #[error("class function has {found} values but the group has {expected} classes")]
    LengthMismatch { expected: usize, found: usize },

    #[error("character table consistency failure: {0}")]
    TableInconsistent(String),

    #[error("expected a genuine character, got a virtual class function")]
    VirtualCharacter,

    #[error("degree {degree} exceeds the configured characteristic-polynomial bound {bound}")]
    DegreeTooLarge { degree: usize, bound: usize },

    #[error("inner product of characters is not rational: {0}")]
    NonRationalInnerProduct(String),

    #[error("invalid representation spec: {0}")]
    InvalidRepSpec(String),

    #[error("decision procedures disagree: {0}")]
    OracleDisagreement(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("invalid Weil polynomial: {0}")]
    InvalidWeilPolynomial(String),

    #[error("Weil polynomials are over different fields or dimensions: {0}")]
    WeilMismatch(String),

    #[error("resultant normalization failed: constant term {0} is not a unit")]
    Normalization(String),

    #[error("fingerprint mismatch for {group}: {fingerprint} expected {expected}, found {found}")]
    Fingerprint {
        group: String,
        fingerprint: String,
        expected: String,
        found: String,
    },

    #[error("unknown group: {0}")]
    UnknownGroup(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("remote fetching is disabled (build with the `remote` feature and enable it explicitly)")]
    FeatureDisabled,

    #[error("remote group not found: {0}")]
    NotFound(String),

    #[error("remote request failed: {0}")]
    Remote(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
