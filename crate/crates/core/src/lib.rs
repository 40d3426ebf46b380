//! Words over `Z_q`, tandem duplication and deduplication, duplication
//! roots, codes that correct duplication errors, capacity of the
//! associated constrained systems, and a channel simulator.

pub mod capacity;
pub mod classify;
pub mod codes;
pub mod error;
pub mod roots;
pub mod sim;
pub mod transform;
pub mod word;

pub use error::{Error, Result};
pub use word::{LengthKind, LengthSet, Square, Steps, Symbol, Word};
