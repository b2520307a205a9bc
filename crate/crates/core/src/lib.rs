//! Exponential sums over digit-defined sets of integers (palindromes,
//! integers with a missing digit, reversible pairs), the L1 and L-infinity
//! bounds they satisfy, and k-th powerfree counting over those sets.

pub mod bounds;
pub mod digits;
pub mod error;
pub mod expsum;
pub mod phase;
pub mod powerfree;

pub use digits::{Base, DigitVector, SetDescriptor, SetKind};
pub use error::{Error, Result};
pub use phase::Phase;
