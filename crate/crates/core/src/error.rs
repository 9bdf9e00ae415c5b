use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("row rank {rank} is smaller than the {rows} rows supplied")]
    RankDeficient { rank: usize, rows: usize },

    #[error("generator rows are not orthonormal (max deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("bad dimensions: {0}")]
    BadDimensions(String),

    #[error("need at least two subspaces, got {0}")]
    TooFewSubspaces(usize),

    #[error("canonical pair requires n <= m/2 (m = {m}, n = {n})")]
    RequiresSmallHalf { m: usize, n: usize },

    #[error("expected a plane in G(4,2), got G({m},{n})")]
    NotAPlane { m: usize, n: usize },

    #[error("vector is not a unit vector (norm {0})")]
    NotUnit(f64),

    #[error("no builtin packing for N = {0}")]
    UnsupportedN(usize),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("orbit exceeded {cap} elements")]
    OrbitOverflow { cap: usize },

    #[error("closure exceeded {cap} elements")]
    ClosureOverflow { cap: usize },

    #[error("exhaustive enumeration limited to i <= 3, got i = {0}")]
    TooLarge(usize),

    #[error("no catalog record for G({m},{n}), N = {count}, metric {metric}")]
    NoRecord {
        m: usize,
        n: usize,
        count: usize,
        metric: String,
    },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
