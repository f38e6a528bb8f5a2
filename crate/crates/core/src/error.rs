use std::path::PathBuf;

use thiserror::Error;

use crate::construction::AttemptRecord;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no prime strictly between {lo} and {hi}")]
    NoPrimeInRange { lo: u64, hi: u64 },

    #[error("point ({x}, {y}) lies outside the {n}x{n} grid")]
    OutOfGrid { x: i64, y: i64, n: u32 },

    #[error("duplicate point ({x}, {y})")]
    DuplicatePoint { x: i64, y: i64 },

    #[error("parameter sampling gave up after {0} degenerate draws")]
    SamplingExhausted(u32),

    #[error("construction failed after {} attempts", .attempts.len())]
    RetriesExhausted { attempts: Vec<AttemptRecord> },

    #[error("{what} exceeds the exhaustive bound {bound} (got {got})")]
    BeyondExhaustiveBound { what: &'static str, bound: u64, got: u64 },

    #[error("malformed points file: {0}")]
    Format(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
