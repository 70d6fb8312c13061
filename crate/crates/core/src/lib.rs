//! Exact computations on jet schemes, arc spaces and contact loci of
//! affine varieties over Q, and minimal log discrepancies of pairs.

pub mod contact;
pub mod error;
pub mod groebner;
pub mod jetcalc;
pub mod lifting;
pub mod mldjets;
pub mod mldres;
pub mod polycore;
pub mod singloci;

pub use error::{Error, Result};
