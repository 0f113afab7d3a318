//! Truncated-Fock-space simulation of parity-pseudospin nonlocality.
//!
//! Each mode carries a pseudospin built from photon-number parity. On top of
//! that sit GHZ and NOPA state preparation, Bell and Mermin operators, local
//! hidden-variable enumeration, and settings optimization.

pub mod bell;
pub mod correlation;
pub mod error;
pub mod fock;
pub mod lhv;
pub mod optimize;
pub mod pseudospin;
pub mod states;

pub use error::{Error, Result};
pub use fock::{ModeSpace, SparseOperator, StateVector, C64};
