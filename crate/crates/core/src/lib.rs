//! Verification and bound computation for mixed-level orthogonal arrays.
//!
//! The crate checks array strength by exact counting, certifies the
//! equivalent spectral characterizations in the product multigraph
//! (algebraic designs, covering-radius-1 complete regularity), computes the
//! harmonic-mean lower bound with its rounding and comparison bounds, audits
//! GF(p)-additive arrays against the multispread equivalences, and solves the
//! exact-rational polynomial/LP refinement for pure-level Hamming graphs.

pub mod alphabet;
pub mod bounds;
pub mod design;
pub mod additive;
pub mod error;
mod gf;
pub mod multigraph;
pub mod polybound;
mod simplex;

pub use alphabet::{ArrayMultiset, MixedAlphabet, StrengthReport, StrengthWitness, Word};
pub use additive::{AdditiveAuditReport, AuditVerdicts, CheckMatrix, Subspace};
pub use bounds::{BoundKind, BoundReport, TightnessVerdict};
pub use design::{CharacterIndex, DesignReport, FourierProfile};
pub use error::{Error, Result};
pub use polybound::{KrawtchoukContext, PolyBoundResult};
pub use multigraph::{CrReport, MultigraphParams};
