//! Exact calculus of slopes and nearby cycles for formal meromorphic
//! differential modules.
//!
//! * [`exact_algebra`]: rationals, cyclotomic numbers, ramified exponents.
//! * [`elementary`]: elementary modules `El(p, φ, R)` in one variable.
//! * [`monomial`]: monomial good formal structures in several variables.
//! * [`blowup`]: multiplicity bookkeeping along sequences of blow-ups.

pub mod blowup;
pub mod elementary;
pub mod exact_algebra;
pub mod monomial;
