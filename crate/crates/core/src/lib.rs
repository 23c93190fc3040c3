//! Statevector simulation of interference-based quantum search.
//!
//! A decision function marks invalid states with a sign flip on one arm of a
//! two-arm interferometer. Overlapping that arm with an unmarked copy cancels
//! every non-solution, so post-selection exposes only solutions. Repeating
//! with found solutions excluded enumerates the whole solution set. The
//! [`robustness`] module puts amplitude-level and bit-flip noise on that
//! pipeline and compares it against a Grover baseline.

pub mod enumeration;
pub mod error;
pub mod interferometer;
pub mod oracle;
pub mod report;
pub mod robustness;
pub mod state;

#[doc(hidden)]
pub mod cli;

pub use error::{Error, Result};
pub use oracle::{Oracle, SolutionSet};
pub use state::{BasisState, ShotHistogram, Statevector};
