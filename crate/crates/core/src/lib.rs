//! Facial non-repetitive list colouring of plane graphs.
//!
//! A colouring of a plane graph is facially non-repetitive when no path
//! along a face boundary reads `r_1 .. r_n r_1 .. r_n`. The crate contains
//! the randomized colouring loop with its execution record and decoder,
//! deterministic colourers for several graph families, the counting
//! analysis that fixes the list size, and an exact backtracking oracle.

pub mod analysis;
pub mod embed;
pub mod engine;
pub mod families;
pub mod generators;
pub mod io;
pub mod oracle;
pub mod repetition;

/// A colour; `0` means uncoloured.
pub type Colour = u32;

pub use embed::{EmbedError, Face, FacialPath, PlaneGraph, Vertex};
pub use engine::{reconstruct, run, EngineError, ListAssignment, Record, RecordEntry, RunOutcome, Status};
pub use families::{colour_family, FamilyColouring, FamilyError, FamilyInstance};
pub use generators::{generate_family, Family, GenError};
pub use oracle::{feasible_for_lists, pi_f_exact, OracleBudget, OracleError};
pub use repetition::{find_repetition_through, is_repetition, verify_facial_nonrepetitive, Violation};
