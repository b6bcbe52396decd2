//! p-adic entropy of principal algebraic actions.
//!
//! For `f` in the integral group ring of Z^d or of the discrete Heisenberg
//! group (or a square matrix over it) this crate computes the p-adic
//! entropy of the associated action in three independent ways:
//!
//! * [`entropy::entropy_sequence`]: normalized `log_p` of fixed-point
//!   counts `|det rho(f~)|` over a family of finite quotients;
//! * [`detlog`]: the trace of the p-adic logarithm (the p-adic
//!   Fuglede-Kadison determinant), directly on 1-units;
//! * [`mahler::mahler_1d`]: for one variable, the Newton-polygon formula
//!   in terms of the roots inside the unit disk.
//!
//! All arithmetic is exact; p-adic results carry explicit precision.

pub mod arith;
pub mod detlog;
pub mod entropy;
pub mod error;
pub mod fixcount;
pub mod groupring;
pub mod mahler;
pub mod padic;
pub mod selftest;
pub mod text;

pub use error::{Error, Result};
pub use fixcount::{det_exact, fix_count, fix_count_char_crt, FixCountRecord, IntMatrix};
pub use groupring::{
    build_quotient_group, reduce_to_quotient, rho_matrix, Exponent, FiniteGroup, FiniteMatrix, GroupRingElem, Law,
    LaurentPoly, Limits, PolyMatrix, QuotientSpec, RingElement, RingMatrix,
};
pub use padic::PadicScalar;
pub use text::{parse_matrix, parse_poly, print_matrix, print_poly};
pub use detlog::{c0_unit_normalize, det_laurent_matrix, logdet_finite, logdet_unit, tr_log_one_unit, UnitDecomposition};
pub use entropy::{
    convergence_report, default_family, entropy_sequence, parse_family, snirelman_mahler, ConvergenceReport,
    ReportOptions, Verdict,
};
pub use mahler::{mahler_1d, newton_polygon, slope_split, NewtonPolygon};
