use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::valuation;
use crate::error::{Error, Result};
use crate::padic::{rational_valuation, PadicScalar};

/// Maximum number of variables `t1..t9`.
pub const MAX_VARS: usize = 9;

/// A group element of Z^d or of the discrete Heisenberg group, stored as
/// a fixed-width exponent vector. Unused trailing slots are zero.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Exponent(pub [i32; MAX_VARS]);

impl Exponent {
    pub fn from_slice(e: &[i32]) -> Self {
        let mut out = [0; MAX_VARS];
        out[..e.len()].copy_from_slice(e);
        Exponent(out)
    }

    pub fn unit(i: usize) -> Self {
        let mut out = [0; MAX_VARS];
        out[i] = 1;
        Exponent(out)
    }

    pub fn as_slice(&self, d: usize) -> &[i32] {
        &self.0[..d]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&x| x != 0).map_or(1, |i| i + 1);
        write!(f, "{:?}", &self.0[..last])
    }
}

/// The group law on exponent vectors.
///
/// `Heisenberg` uses triples `(a, b, c)` for the matrix
/// `[[1, a, c], [0, 1, b], [0, 0, 1]]`, so
/// `(a, b, c)(a', b', c') = (a + a', b + b', c + c' + a b')`.
/// With `x = (1,0,0)`, `y = (0,1,0)` and `z = (0,0,1)` one has `[x, y] = z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Law {
    Abelian { d: usize },
    Heisenberg,
}

impl Law {
    pub fn abelian(d: usize) -> Self {
        assert!((1..=MAX_VARS).contains(&d), "dimension {d} out of range");
        Law::Abelian { d }
    }

    pub fn dim(&self) -> usize {
        match self {
            Law::Abelian { d } => *d,
            Law::Heisenberg => 3,
        }
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self, Law::Abelian { .. })
    }

    #[inline]
    pub fn compose(&self, a: &Exponent, b: &Exponent) -> Exponent {
        let mut out = [0; MAX_VARS];
        match self {
            Law::Abelian { d } => {
                for i in 0..*d {
                    out[i] = a.0[i] + b.0[i];
                }
            }
            Law::Heisenberg => {
                out[0] = a.0[0] + b.0[0];
                out[1] = a.0[1] + b.0[1];
                out[2] = a.0[2] + b.0[2] + a.0[0] * b.0[1];
            }
        }
        Exponent(out)
    }

    pub fn inverse(&self, a: &Exponent) -> Exponent {
        let mut out = [0; MAX_VARS];
        match self {
            Law::Abelian { d } => {
                for i in 0..*d {
                    out[i] = -a.0[i];
                }
            }
            Law::Heisenberg => {
                out[0] = -a.0[0];
                out[1] = -a.0[1];
                out[2] = -a.0[2] + a.0[0] * a.0[1];
            }
        }
        Exponent(out)
    }
}

/// Coefficient rings for [`LaurentPoly`].
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `v_p`, `None` for zero.
    fn valuation(&self, p: u64) -> Option<i64>;
    /// Whether two coefficients can be combined (same prime for p-adics).
    fn compatible(&self, _other: &Self) -> bool {
        true
    }
}

impl Coeff for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn valuation(&self, p: u64) -> Option<i64> {
        valuation(self, p).map(i64::from)
    }
}

impl Coeff for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn valuation(&self, p: u64) -> Option<i64> {
        rational_valuation(self, p)
    }
}

/// p-adic coefficients; mixing primes panics, so callers go through the
/// checked `try_*` methods of [`LaurentPoly`] which test compatibility.
impl Coeff for PadicScalar {
    fn is_zero(&self) -> bool {
        PadicScalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("compatible p-adic coefficients")
    }
    fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("compatible p-adic coefficients")
    }
    fn neg(&self) -> Self {
        PadicScalar::neg(self)
    }
    fn valuation(&self, p: u64) -> Option<i64> {
        assert_eq!(p, self.prime());
        PadicScalar::valuation(self)
    }
    fn compatible(&self, other: &Self) -> bool {
        self.prime() == other.prime()
    }
}

/// Finitely supported element of the group ring of Z^d (a Laurent
/// polynomial in `t1..td`) or of the Heisenberg group.
///
/// Terms are kept in lexicographic exponent order with no zero
/// coefficients, so equal elements compare and print identically.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly<C = BigInt> {
    law: Law,
    terms: BTreeMap<Exponent, C>,
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero(law: Law) -> Self {
        Self { law, terms: BTreeMap::new() }
    }

    pub fn constant(law: Law, c: C) -> Self {
        Self::monomial(law, Exponent::default(), c)
    }

    pub fn monomial(law: Law, e: Exponent, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { law, terms }
    }

    /// Sums duplicate exponents and drops zeros.
    pub fn from_terms(law: Law, it: impl IntoIterator<Item = (Exponent, C)>) -> Self {
        let mut terms: BTreeMap<Exponent, C> = BTreeMap::new();
        for (e, c) in it {
            accumulate(&mut terms, e, c);
        }
        terms.retain(|_, c| !c.is_zero());
        Self { law, terms }
    }

    pub fn law(&self) -> Law {
        self.law
    }

    pub fn dim(&self) -> usize {
        self.law.dim()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &C)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &Exponent) -> Option<&C> {
        self.terms.get(e)
    }

    /// Coefficient of the neutral element: the trace functional.
    pub fn constant_term(&self) -> Option<&C> {
        self.terms.get(&Exponent::default())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.law != other.law {
            return match (self.law, other.law) {
                (Law::Abelian { d: a }, Law::Abelian { d: b }) => Err(Error::DimensionMismatch(a, b)),
                _ => Err(Error::DomainMismatch),
            };
        }
        let probe = self.terms.values().chain(other.terms.values()).next();
        if let Some(c0) = probe {
            if !self.terms.values().chain(other.terms.values()).all(|c| c.compatible(c0)) {
                return Err(Error::DomainMismatch);
            }
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg_poly())
    }

    /// Convolution product.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            accumulate(&mut terms, *e, c.clone());
        }
        terms.retain(|_, c| !c.is_zero());
        Self { law: self.law, terms }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Exponent, C> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                accumulate(&mut terms, self.law.compose(ea, eb), ca.mul(cb));
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Self { law: self.law, terms }
    }

    pub fn neg_poly(&self) -> Self {
        Self { law: self.law, terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect() }
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::from_terms(self.law, self.terms.iter().map(|(e, c)| (*e, s.mul(c))))
    }

    /// The involution: every group element is inverted.
    pub fn star(&self) -> Self {
        Self::from_terms(self.law, self.terms.iter().map(|(e, c)| (self.law.inverse(e), c.clone())))
    }

    /// Left multiplication by a group element.
    pub fn shift(&self, g: &Exponent) -> Self {
        Self::from_terms(self.law, self.terms.iter().map(|(e, c)| (self.law.compose(g, e), c.clone())))
    }

    /// `max_gamma |x_gamma|_p`, a power of `p`, or zero.
    pub fn sup_norm(&self, p: u64) -> BigRational {
        match self.min_valuation(p) {
            None => BigRational::zero(),
            Some(v) => pow_p_rational(p, -v),
        }
    }

    /// Smallest coefficient valuation, `None` for the zero element.
    pub fn min_valuation(&self, p: u64) -> Option<i64> {
        self.terms.values().filter_map(|c| c.valuation(p)).min()
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        LaurentPoly::from_terms(self.law, self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    /// Reinterprets the element under another law with the same exponent
    /// vectors (used to widen the dimension).
    pub fn with_law(&self, law: Law) -> Result<Self> {
        let d = law.dim();
        if self.terms.keys().any(|e| e.0[d..].iter().any(|&x| x != 0)) {
            return Err(Error::DimensionMismatch(self.dim(), d));
        }
        Ok(Self { law, terms: self.terms.clone() })
    }
}

impl LaurentPoly<BigInt> {
    pub fn one(law: Law) -> Self {
        Self::constant(law, BigInt::one())
    }

    pub fn from_i64_terms(law: Law, it: impl IntoIterator<Item = (Vec<i32>, i64)>) -> Self {
        Self::from_terms(law, it.into_iter().map(|(e, c)| (Exponent::from_slice(&e), BigInt::from(c))))
    }

    /// Coefficients reduced into `[0, m)`; zero residues are dropped.
    pub fn reduce_mod(&self, m: &BigInt) -> Self {
        Self::from_terms(self.law, self.terms.iter().map(|(e, c)| (*e, c.mod_floor(m))))
    }

    pub fn divisible_by(&self, d: &BigInt) -> bool {
        self.terms.values().all(|c| Zero::is_zero(&(c % d)))
    }

    /// Exact division of every coefficient by `d`.
    pub fn div_exact_scalar(&self, d: &BigInt) -> Self {
        debug_assert!(self.divisible_by(d));
        Self { law: self.law, terms: self.terms.iter().map(|(e, c)| (*e, c / d)).collect() }
    }

    /// Sum of the absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Exact division in the commutative Laurent ring, by leading-term
    /// elimination in lexicographic order. `None` if `other` does not
    /// divide `self`.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        assert!(self.law.is_abelian() && self.law == other.law);
        if other.is_zero() {
            return None;
        }
        let law = self.law;
        let (lead_b, lc_b) = other.terms.iter().next_back().map(|(e, c)| (*e, c.clone()))?;
        let (low_b, _) = other.terms.iter().next()?;
        let low_a = match self.terms.keys().next() {
            None => return Some(Self::zero(law)),
            Some(e) => *e,
        };
        let floor = law.compose(&low_a, &law.inverse(low_b));
        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        let inv_b = law.inverse(&lead_b);
        while let Some((lead_r, lc_r)) = rem.terms.iter().next_back().map(|(e, c)| (*e, c.clone())) {
            let m = law.compose(&lead_r, &inv_b);
            if m < floor {
                return None;
            }
            let (q, r) = lc_r.div_rem(&lc_b);
            if !Zero::is_zero(&r) {
                return None;
            }
            let t = Self::monomial(law, m, q.clone());
            rem = rem.add_unchecked(&t.mul_unchecked(other).neg_poly());
            quot.insert(m, q);
        }
        Some(Self { law, terms: quot })
    }

    /// Univariate view: coefficients `a_0..a_n` of `t^-lo * f` and the
    /// shift `lo`. Only for `d = 1`.
    pub fn to_dense_univariate(&self) -> Result<(i32, Vec<BigInt>)> {
        if self.law != Law::abelian(1) {
            return Err(Error::NotUnivariate(self.dim()));
        }
        let lo = match self.terms.keys().next() {
            None => return Err(Error::ZeroPolynomial),
            Some(e) => e.0[0],
        };
        let hi = self.terms.keys().next_back().unwrap().0[0];
        let mut out = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            out[(e.0[0] - lo) as usize] = c.clone();
        }
        Ok((lo, out))
    }

    pub fn from_dense_univariate(shift: i32, coeffs: &[BigInt]) -> Self {
        Self::from_terms(
            Law::abelian(1),
            coeffs.iter().enumerate().map(|(i, c)| (Exponent::from_slice(&[shift + i as i32]), c.clone())),
        )
    }
}

fn accumulate<C: Coeff>(terms: &mut BTreeMap<Exponent, C>, e: Exponent, c: C) {
    match terms.get_mut(&e) {
        Some(slot) => *slot = slot.add(&c),
        None => {
            terms.insert(e, c);
        }
    }
}

pub(crate) fn pow_p_rational(p: u64, k: i64) -> BigRational {
    let base = BigInt::from(p);
    if k >= 0 {
        BigRational::from_integer(num_traits::pow(base, k as usize))
    } else {
        BigRational::new(BigInt::one(), num_traits::pow(base, (-k) as usize))
    }
}

impl<C: Coeff> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: Self) -> LaurentPoly<C> {
        self.try_add(rhs).expect("compatible operands")
    }
}

impl<C: Coeff> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: Self) -> LaurentPoly<C> {
        self.try_sub(rhs).expect("compatible operands")
    }
}

impl<C: Coeff> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: Self) -> LaurentPoly<C> {
        self.try_mul(rhs).expect("compatible operands")
    }
}

impl<C: Coeff> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        self.neg_poly()
    }
}

impl<C: Coeff> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LaurentPoly").field("law", &self.law).field("terms", &self.terms).finish()
    }
}

impl fmt::Display for LaurentPoly<BigInt> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::print_poly(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t1(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_i64_terms(Law::abelian(1), terms.iter().map(|&(e, c)| (vec![e], c)))
    }

    #[test]
    fn convolution_examples() {
        let a = t1(&[(1, 1), (0, -1)]);
        let b = t1(&[(-1, 1), (0, -1)]);
        assert_eq!(&a * &b, t1(&[(0, 2), (1, -1), (-1, -1)]));
        let f = t1(&[(2, 2), (1, -1), (0, 2)]);
        assert_eq!(&f * &LaurentPoly::one(Law::abelian(1)), f);
        // -t * (1 - 2t - 2t^-1) = 2t^2 - t + 2
        let u = t1(&[(1, -1)]);
        let w = t1(&[(0, 1), (1, -2), (-1, -2)]);
        assert_eq!(&u * &w, f);
    }

    #[test]
    fn mismatched_operands() {
        let a = LaurentPoly::one(Law::abelian(1));
        let b = LaurentPoly::one(Law::abelian(2));
        assert_eq!(a.try_mul(&b), Err(Error::DimensionMismatch(1, 2)));
        let h = LaurentPoly::one(Law::Heisenberg);
        assert_eq!(h.try_add(&LaurentPoly::one(Law::abelian(3))), Err(Error::DomainMismatch));
        let x = LaurentPoly::constant(Law::abelian(1), PadicScalar::one(2, 4));
        let y = LaurentPoly::constant(Law::abelian(1), PadicScalar::one(3, 4));
        assert_eq!(x.try_mul(&y), Err(Error::DomainMismatch));
    }

    #[test]
    fn involution_examples() {
        let f = t1(&[(2, 2), (1, -1), (0, 2)]);
        assert_eq!(f.star(), t1(&[(-2, 2), (-1, -1), (0, 2)]));
        assert_eq!(f.star().star(), f);
    }

    #[test]
    fn heisenberg_law() {
        let law = Law::Heisenberg;
        let x = Exponent::unit(0);
        let y = Exponent::unit(1);
        let xy = law.compose(&x, &y);
        let yx = law.compose(&y, &x);
        assert_ne!(xy, yx);
        let comm = law.compose(&law.compose(&xy, &law.inverse(&x)), &law.inverse(&y));
        assert_eq!(comm, Exponent::unit(2));
        let g = Exponent::from_slice(&[2, -3, 5]);
        assert!(law.compose(&g, &law.inverse(&g)).is_identity());
        assert!(law.compose(&law.inverse(&g), &g).is_identity());
    }

    #[test]
    fn sup_norm_examples() {
        let f = t1(&[(2, 2), (1, -1), (0, 2)]);
        assert_eq!(f.sup_norm(2), BigRational::one());
        let g = t1(&[(1, 2), (0, 4)]);
        assert_eq!(g.sup_norm(2), BigRational::new(1.into(), 2.into()));
        assert_eq!(LaurentPoly::<BigInt>::zero(Law::abelian(1)).sup_norm(2), BigRational::zero());
        let r: LaurentPoly<BigRational> = f.map_coeffs(|c| BigRational::new(c.clone(), 4.into()));
        assert_eq!(r.sup_norm(2), BigRational::from_integer(4.into()));
    }

    #[test]
    fn exact_division() {
        let a = t1(&[(1, 1), (0, -1)]);
        let b = t1(&[(2, 3), (-1, 1), (0, 5)]);
        let ab = &a * &b;
        assert_eq!(ab.div_exact(&a), Some(b.clone()));
        assert_eq!(ab.div_exact(&b), Some(a.clone()));
        assert_eq!(b.div_exact(&a), None);
    }
}
