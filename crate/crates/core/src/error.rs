use thiserror::Error;

use crate::model::ArcId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid surface parameters (g={g}, s={s}, m={m}): need 2g+s>2 and 1<=m<=s")]
    InvalidSpec { g: u32, s: u32, m: u32 },

    #[error("(g={g}, s={s}) is outside the vcd table")]
    OutOfTable { g: u32, s: u32 },

    #[error("presentation has no arcs")]
    NoArcs,

    #[error("Euler count {euler} is odd, no integer genus")]
    NonIntegerGenus { euler: i64 },

    #[error("cannot delete the last arc of a system")]
    LastArc,

    #[error("arc {0} is not part of the system")]
    UnknownArc(ArcId),

    #[error("malformed presentation: {0}")]
    Malformed(String),

    #[error("piece {index} is not a subdividable triangle: {reason}")]
    NotASubdividableTriangle { index: usize, reason: String },

    #[error("Mod-mode equivalence needs m = s (got m={m}, s={s})")]
    ModModeUnavailable { m: u32, s: u32 },

    #[error("enumeration needs {arcs} arcs per maximal system, budget is {budget}")]
    BudgetExceeded { arcs: u32, budget: u32 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("unsupported schema {found:?}, expected {expected:?}")]
    SchemaVersionMismatch { found: String, expected: String },
}
