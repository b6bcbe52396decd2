//! Group rings of Z^d and of the discrete Heisenberg group, their finite
//! quotients, and square matrices over both.

mod finite;
mod laurent;
mod matrix;

pub use finite::{build_quotient_group, reduce_poly, FiniteGroup, GroupRingElem, Limits, QuotientSpec};
pub use laurent::{Coeff, Exponent, Law, LaurentPoly, MAX_VARS};
pub use matrix::{reduce_to_quotient, rho_matrix, symmetric_mod, RingElement, RingMatrix};

/// A matrix over the integral group ring of Z^d or the Heisenberg group.
pub type PolyMatrix = RingMatrix<LaurentPoly>;
/// A matrix over the integral group ring of a finite group.
pub type FiniteMatrix = RingMatrix<GroupRingElem>;
