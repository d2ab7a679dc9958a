//! Finite, machine-checkable verification of a family of constructions in
//! symbolic dynamics: block-code involutions on a 13-letter alphabet, the
//! action of `(Z2 * Z2 * Z2)^2` on forbidden-word subshifts, and a uniquely
//! readable 22-bit binary substitution together with the conjugacy map it
//! induces between one-sided binary subshifts.

pub mod alphabet;
pub mod blockcode;
pub mod codec;
pub mod error;
pub mod group;
pub mod par;
pub mod report;
pub mod subshift;

pub use alphabet::{parse_word, format_word, BinaryWord, Symbol, SymbolKind, Word};
pub use error::{Error, Result};
pub use par::Exec;
pub use report::{Report, Status};
