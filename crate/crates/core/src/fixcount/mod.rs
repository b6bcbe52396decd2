//! Fixed points of finite quotients: `|Fix| = |det rho(f~)|` for the
//! reduction `f~` of `f` to the group ring of the quotient.

mod character;
mod det;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{split_valuation, valuation_u64};
use crate::error::{Error, Result};
use crate::groupring::{build_quotient_group, reduce_to_quotient, rho_matrix, Limits, PolyMatrix, QuotientSpec};
use crate::padic::PadicScalar;

pub use character::fix_count_char_crt;
pub use det::{det_bareiss, det_crt, det_exact, det_mod_prime, det_mod_prime_power, IntMatrix, BAREISS_CUTOFF};

/// One quotient's contribution to the entropy limit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixCountRecord {
    pub quotient: QuotientSpec,
    /// The index `(Gamma : Gamma_n)`, i.e. the quotient's order.
    pub index: u64,
    #[serde(with = "decimal")]
    pub fix_count: BigInt,
    /// `det rho(f~)` with its sign.
    #[serde(with = "decimal")]
    pub signed_det: BigInt,
    pub p: u64,
    /// `v_p(fix_count)`.
    pub p_valuation: u32,
    /// `fix_count / p^p_valuation` modulo `p^N`.
    pub unit_residue: PadicScalar,
    /// `log_p fix_count`, known one digit further for each factor `p` in the index.
    pub unit_log: PadicScalar,
    /// `unit_log / index`, known modulo `p^N`.
    pub normalized: PadicScalar,
}

impl FixCountRecord {
    /// Bookkeeping for a nonzero determinant of the quotient's
    /// representation.
    pub fn from_det(quotient: QuotientSpec, index: u64, det: BigInt, p: u64, prec: u32) -> Result<Self> {
        if det.is_zero() {
            return Err(Error::InfiniteFixedPointSet(quotient.to_string()));
        }
        let fix = det.abs();
        let (v, unit) = split_valuation(&fix, p);
        let loss = valuation_u64(index, p);
        let unit_log = PadicScalar::from_integer(&unit, p, prec + loss)?.log()?;
        let normalized = unit_log.div_u64(index);
        Ok(Self {
            quotient,
            index,
            fix_count: fix,
            signed_det: det,
            p,
            p_valuation: v,
            unit_residue: PadicScalar::from_integer(&unit, p, prec)?,
            unit_log,
            normalized,
        })
    }
}

/// `|Fix|` for the quotient `q`, through the regular representation.
pub fn fix_count(f: &PolyMatrix, q: &QuotientSpec, p: u64, prec: u32, limits: &Limits) -> Result<FixCountRecord> {
    let group = build_quotient_group(q, limits)?;
    let reduced = reduce_to_quotient(f, &group)?;
    let rho = rho_matrix(&reduced, limits)?;
    let det = det_exact(&rho);
    FixCountRecord::from_det(q.clone(), group.order() as u64, det, p, prec)
}

/// Serde adapter writing big integers as decimal strings.
pub mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::{Law, LaurentPoly, RingMatrix};
    use num_traits::ToPrimitive;

    fn example() -> PolyMatrix {
        RingMatrix::scalar(LaurentPoly::from_i64_terms(Law::abelian(1), [(vec![2], 2), (vec![1], -1), (vec![0], 2)]))
    }

    #[test]
    fn example_counts() {
        let lim = Limits::default();
        let counts: Vec<i64> = (1..=3)
            .map(|n| fix_count(&example(), &QuotientSpec::cyclic(n), 2, 8, &lim).unwrap().fix_count.to_i64().unwrap())
            .collect();
        assert_eq!(counts, vec![3, 15, 27]);
    }

    #[test]
    fn zero_determinant_is_refused() {
        // t - 1 vanishes at the trivial character.
        let f = RingMatrix::scalar(LaurentPoly::from_i64_terms(Law::abelian(1), [(vec![1], 1), (vec![0], -1)]));
        let err = fix_count(&f, &QuotientSpec::cyclic(4), 2, 8, &Limits::default()).unwrap_err();
        assert_eq!(err, Error::InfiniteFixedPointSet("C4".into()));
    }

    #[test]
    fn record_bookkeeping_and_json() {
        let r = fix_count(&example(), &QuotientSpec::cyclic(2), 2, 8, &Limits::default()).unwrap();
        assert_eq!(r.index, 2);
        assert_eq!(r.p_valuation, 0);
        // normalized * index = unit_log to precision N.
        let back = r.normalized.try_mul(&PadicScalar::from_i64(2, 2, 8).unwrap()).unwrap();
        assert!(back.equals_at(&r.unit_log, 8).unwrap());
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains(r#""fix_count":"15""#));
        let parsed: FixCountRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, r);
    }
}
