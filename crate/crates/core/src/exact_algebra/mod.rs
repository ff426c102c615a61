//! Exact scalar and polynomial arithmetic shared by the rest of the crate.

mod cyclo;
mod exponent;
mod laurent;
mod multi_index;
mod rat;

pub use cyclo::{CycloError, CycloRat};
pub use exponent::RamifiedExponent;
pub use laurent::Laurent;
pub use multi_index::MultiIndex;
pub use rat::{ParseRatError, Rat};
