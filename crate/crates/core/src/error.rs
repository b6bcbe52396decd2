use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variants split into two families: usage errors (malformed input, bad
/// parameters) and refusals, where the input is well formed but the
/// mathematics does not apply (a non-unit, a singular representation, a
/// root on the unit circle). [`Error::is_refusal`] tells them apart.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision {0} out of range")]
    InvalidPrecision(i64),
    #[error("operands live over different primes ({0} vs {1})")]
    PrimeMismatch(u64, u64),
    #[error("input is zero to the working precision")]
    ZeroInput,
    #[error("input is not a p-adic unit")]
    NotAUnit,
    #[error("input is not a square in Q_{0}")]
    NotASquare(u64),
    #[error("values cannot be distinguished at precision {0}")]
    IndistinguishableAtPrecision(i64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("coefficient domains or group laws differ")]
    DomainMismatch,
    #[error("invalid quotient: {0}")]
    InvalidQuotient(String),
    #[error("group order {order} exceeds the cap {cap}")]
    OrderOverflow { order: u128, cap: u64 },
    #[error("representation size {size} exceeds the cap {cap}")]
    QuotientTooLarge { size: usize, cap: usize },
    #[error("matrix is not square or has inconsistent entries")]
    NotSquare,

    #[error("fixed-point set is infinite for quotient {0}")]
    InfiniteFixedPointSet(String),
    #[error("character product needs an abelian quotient, got {0}")]
    NonAbelianQuotient(String),

    #[error("not a unit of c0: reduction mod {0} is not a monomial")]
    NotACZeroUnit(u64),
    #[error("not a 1-unit: F - 1 is not divisible by {0}")]
    NotAOneUnit(u64),
    #[error("regular representation is singular")]
    SingularRho,

    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("Newton polygon has a zero-slope segment (root on the unit circle)")]
    ZeroSlopePresent,
    #[error("polynomial is not primitive at p")]
    NotPrimitive,
    #[error("univariate polynomial expected, got dimension {0}")]
    NotUnivariate(usize),

    #[error("modulus {n} is divisible by p = {p}")]
    ModulusNotCoprimeToP { n: u64, p: u64 },
    #[error("quotient family must have strictly increasing index")]
    FamilyNotIncreasing,
    #[error("need at least two records, got {0}")]
    TooFewRecords(usize),

    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("inconsistent dimensions in input: {0}")]
    DimensionInconsistent(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI's JSON output.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            ZeroDenominator => "ZERO_DENOMINATOR",
            NotPrime(_) => "NOT_PRIME",
            InvalidPrecision(_) => "INVALID_PRECISION",
            PrimeMismatch(..) => "PRIME_MISMATCH",
            ZeroInput => "ZERO_INPUT",
            NotAUnit => "NOT_A_UNIT",
            NotASquare(_) => "NOT_A_SQUARE",
            IndistinguishableAtPrecision(_) => "INDISTINGUISHABLE",
            DimensionMismatch(..) => "DIMENSION_MISMATCH",
            DomainMismatch => "DOMAIN_MISMATCH",
            InvalidQuotient(_) => "INVALID_QUOTIENT",
            OrderOverflow { .. } => "ORDER_OVERFLOW",
            QuotientTooLarge { .. } => "QUOTIENT_TOO_LARGE",
            NotSquare => "NOT_SQUARE",
            InfiniteFixedPointSet(_) => "INFINITE_FIX",
            NonAbelianQuotient(_) => "NON_ABELIAN_QUOTIENT",
            NotACZeroUnit(_) => "NOT_C0_UNIT",
            NotAOneUnit(_) => "NOT_ONE_UNIT",
            SingularRho => "SINGULAR_RHO",
            ZeroPolynomial => "ZERO_POLYNOMIAL",
            ZeroSlopePresent => "ZERO_SLOPE",
            NotPrimitive => "NOT_PRIMITIVE",
            NotUnivariate(_) => "NOT_UNIVARIATE",
            ModulusNotCoprimeToP { .. } => "MODULUS_NOT_COPRIME",
            FamilyNotIncreasing => "FAMILY_NOT_INCREASING",
            TooFewRecords(_) => "TOO_FEW_RECORDS",
            Syntax { .. } => "SYNTAX_ERROR",
            DimensionInconsistent(_) => "DIMENSION_INCONSISTENT",
        }
    }

    /// True when the input was well formed but the mathematics refuses it.
    pub fn is_refusal(&self) -> bool {
        use Error::*;
        matches!(
            self,
            ZeroInput
                | NotAUnit
                | NotASquare(_)
                | IndistinguishableAtPrecision(_)
                | InfiniteFixedPointSet(_)
                | NotACZeroUnit(_)
                | NotAOneUnit(_)
                | SingularRho
                | ZeroPolynomial
                | ZeroSlopePresent
                | NotPrimitive
                | NonAbelianQuotient(_)
        )
    }
}
