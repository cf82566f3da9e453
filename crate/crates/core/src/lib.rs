//! Combinatorial arc systems on surfaces with decorated points and punctures.
//!
//! An arc system is stored as the splitting of the surface along its arcs: a
//! list of complementary pieces, each carrying its topology and the cyclic
//! words of arc sides around its boundary components. Everything else in the
//! crate (deletion surgery, canonical forms, exhaustive enumeration of the
//! filling poset, explicit constructions) works on that representation.

pub mod canonical;
mod darts;
pub mod constructions;
pub mod enumeration;
pub mod error;
pub mod formulas;
pub mod io;
pub mod model;
pub mod predicates;
pub mod surgery;

pub use canonical::{canonical_code, CanonicalCode, Mode};
pub use error::{Error, Result};
pub use model::{
    Arc, ArcId, BoundaryCycle, Dir, Label, Piece, Side, SplitPresentation, SurfaceSpec,
};
pub use predicates::{
    classify_piece, derive_invariants, doubled_euler, fills_up, is_maximal, rank, validate,
    Check, Invariants, PieceClass, ValidationReport,
};
