//! Recurrence generation: type enumeration, atom tables and the reduction
//! into one polynomial per `(family, h)`.

pub mod checkpoint;
pub mod eval;
mod generate;
pub mod psi;
pub mod system;
pub mod types;

pub use checkpoint::{Checkpoint, CheckpointError};
pub use eval::{atoms, eval_type, eval_type_with, Atom};
pub use generate::{
    fast_generate_system, generate, generate_system, unit_keys, GenOptions, Generated, ListedType, Strategy,
    UnitKey, UnitResult,
};
pub use psi::{eta_case, psi, Bar, EtaCase, Nu, PsiTable, PsiValue};
pub use system::{normalize_text, parse_line, Entry, RecurrenceSystem};
pub use types::{enumerate_types, Direction, Kind, TypeSpace, TypeWord};
