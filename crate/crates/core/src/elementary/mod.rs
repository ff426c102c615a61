//! The one-variable calculus of elementary modules `El(p, φ, R)`: functorial
//! operations, slope multisets, ψ-dimension and nearby slopes.

mod module;
mod nearby;
mod newton;
mod regular;

pub use module::{ElementaryModule, FormalModule};
pub use nearby::{
    candidate_slopes, certify_nearby_slopes, exclude_slope, exhaustion_coefficients,
    nearby_members, nearby_slopes, psi_dim, twisted_psi_dim, witness_twist, Exclusion,
    ExhaustionBounds, MemberWitness, NearbyCertificate,
};
pub use newton::{operator_slopes, slopes_from_operator, DiffOperator};
pub use regular::RegularPart;

use crate::exact_algebra::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CalcError {
    #[error("ramification must be ≥ 1, got {0}")]
    InvalidRamification(u32),
    #[error("exponent of ramification {exponent_ram} cannot live on a cover of degree {ram}")]
    RamificationMismatch { ram: u32, exponent_ram: u32 },
    #[error("no factor of slope {0}")]
    NoFactorOfSlope(Rat),
    #[error("witness twists need a positive slope, got {0}")]
    NonPositiveSlope(Rat),
    #[error("the zero operator has no slopes")]
    ZeroOperator,
    #[error("witness for nearby slope {slope} along x^{p} gave ψ = 0")]
    WitnessFailed { slope: Rat, p: u32 },
    #[error("twist {twist} of non-nearby slope {slope} gave ψ ≠ 0")]
    ExhaustionFailed { slope: Rat, twist: String },
}

/// `El(ram, c·u^{-pole}, rank)` with trivial regular part; a test and fixture shorthand.
pub fn el_monomial(ram: u32, pole: u32, c: i64, rank: u32) -> FormalModule {
    use crate::exact_algebra::CycloRat;
    let el = ElementaryModule::from_terms(
        ram,
        [(-(pole as i64), CycloRat::from_integer(c))],
        RegularPart::trivial(rank),
    )
    .expect("ram ≥ 1");
    FormalModule::elementary(el)
}

/// `rank` copies of the trivial connection.
pub fn trivial(rank: u32) -> FormalModule {
    FormalModule::regular(RegularPart::trivial(rank))
}
