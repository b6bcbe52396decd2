use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::finite::{reduce_poly, FiniteGroup, GroupRingElem, Limits};
use super::laurent::{Law, LaurentPoly};
use crate::error::{Error, Result};
use crate::fixcount::IntMatrix;

/// Integral group rings usable as matrix entries.
pub trait RingElement: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn try_add(&self, other: &Self) -> Result<Self>;
    fn try_sub(&self, other: &Self) -> Result<Self>;
    fn try_mul(&self, other: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn scale(&self, s: &BigInt) -> Self;
    fn is_zero(&self) -> bool;
    fn star(&self) -> Self;
    /// Coefficient of the neutral element.
    fn trace_coeff(&self) -> BigInt;
    /// Coefficients reduced into `[0, m)`.
    fn reduce_mod(&self, m: &BigInt) -> Self;
    fn divisible_by(&self, d: &BigInt) -> bool;
    fn compatible(&self, other: &Self) -> bool;
}

impl RingElement for LaurentPoly<BigInt> {
    fn zero_like(&self) -> Self {
        LaurentPoly::zero(self.law())
    }
    fn one_like(&self) -> Self {
        LaurentPoly::one(self.law())
    }
    fn try_add(&self, o: &Self) -> Result<Self> {
        LaurentPoly::try_add(self, o)
    }
    fn try_sub(&self, o: &Self) -> Result<Self> {
        LaurentPoly::try_sub(self, o)
    }
    fn try_mul(&self, o: &Self) -> Result<Self> {
        LaurentPoly::try_mul(self, o)
    }
    fn neg(&self) -> Self {
        self.neg_poly()
    }
    fn scale(&self, s: &BigInt) -> Self {
        LaurentPoly::scale(self, s)
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn star(&self) -> Self {
        LaurentPoly::star(self)
    }
    fn trace_coeff(&self) -> BigInt {
        self.constant_term().cloned().unwrap_or_default()
    }
    fn reduce_mod(&self, m: &BigInt) -> Self {
        LaurentPoly::reduce_mod(self, m)
    }
    fn divisible_by(&self, d: &BigInt) -> bool {
        LaurentPoly::divisible_by(self, d)
    }
    fn compatible(&self, o: &Self) -> bool {
        self.law() == o.law()
    }
}

impl RingElement for GroupRingElem {
    fn zero_like(&self) -> Self {
        GroupRingElem::zero(self.group().clone())
    }
    fn one_like(&self) -> Self {
        GroupRingElem::one(self.group().clone())
    }
    fn try_add(&self, o: &Self) -> Result<Self> {
        GroupRingElem::try_add(self, o)
    }
    fn try_sub(&self, o: &Self) -> Result<Self> {
        GroupRingElem::try_sub(self, o)
    }
    fn try_mul(&self, o: &Self) -> Result<Self> {
        GroupRingElem::try_mul(self, o)
    }
    fn neg(&self) -> Self {
        GroupRingElem::neg(self)
    }
    fn scale(&self, s: &BigInt) -> Self {
        GroupRingElem::scale(self, s)
    }
    fn is_zero(&self) -> bool {
        GroupRingElem::is_zero(self)
    }
    fn star(&self) -> Self {
        GroupRingElem::star(self)
    }
    fn trace_coeff(&self) -> BigInt {
        self.constant_term().clone()
    }
    fn reduce_mod(&self, m: &BigInt) -> Self {
        GroupRingElem::reduce_mod(self, m)
    }
    fn divisible_by(&self, d: &BigInt) -> bool {
        GroupRingElem::divisible_by(self, d)
    }
    fn compatible(&self, o: &Self) -> bool {
        self.group() == o.group()
    }
}

/// Square matrix over a group ring, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RingMatrix<E> {
    r: usize,
    entries: Vec<E>,
}

impl<E: RingElement> RingMatrix<E> {
    pub fn new(r: usize, entries: Vec<E>) -> Result<Self> {
        if r == 0 || entries.len() != r * r {
            return Err(Error::NotSquare);
        }
        if !entries.iter().all(|e| e.compatible(&entries[0])) {
            return Err(Error::DomainMismatch);
        }
        Ok(Self { r, entries })
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let r = rows.len();
        if rows.iter().any(|row| row.len() != r) {
            return Err(Error::NotSquare);
        }
        Self::new(r, rows.into_iter().flatten().collect())
    }

    pub fn scalar(e: E) -> Self {
        Self { r: 1, entries: vec![e] }
    }

    pub fn identity_like(&self) -> Self {
        let (zero, one) = (self.entries[0].zero_like(), self.entries[0].one_like());
        let entries = (0..self.r * self.r).map(|k| if k % (self.r + 1) == 0 { one.clone() } else { zero.clone() }).collect();
        Self { r: self.r, entries }
    }

    pub fn size(&self) -> usize {
        self.r
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.entries[i * self.r + j]
    }

    pub fn entries(&self) -> &[E] {
        &self.entries
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.r != other.r {
            return Err(Error::DimensionMismatch(self.r, other.r));
        }
        if !self.entries[0].compatible(&other.entries[0]) {
            return Err(Error::DomainMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.try_add(b)).collect::<Result<_>>()?;
        Ok(Self { r: self.r, entries })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.try_sub(b)).collect::<Result<_>>()?;
        Ok(Self { r: self.r, entries })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let r = self.r;
        let mut entries = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                let mut acc = self.entries[0].zero_like();
                for k in 0..r {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.try_add(&a.try_mul(b)?)?;
                    }
                }
                entries.push(acc);
            }
        }
        Ok(Self { r, entries })
    }

    pub fn neg(&self) -> Self {
        self.map(|e| e.neg())
    }

    pub fn map<F: RingElement>(&self, f: impl Fn(&E) -> F) -> RingMatrix<F> {
        RingMatrix { r: self.r, entries: self.entries.iter().map(f).collect() }
    }

    pub fn try_map<F: RingElement>(&self, f: impl Fn(&E) -> Result<F>) -> Result<RingMatrix<F>> {
        Ok(RingMatrix { r: self.r, entries: self.entries.iter().map(f).collect::<Result<_>>()? })
    }

    /// Transpose with every entry starred.
    pub fn star(&self) -> Self {
        let r = self.r;
        let entries = (0..r * r).map(|k| self.get(k % r, k / r).star()).collect();
        Self { r, entries }
    }

    /// Sum of the diagonal entries.
    pub fn trace(&self) -> E {
        let mut acc = self.entries[0].zero_like();
        for i in 0..self.r {
            acc = acc.try_add(self.get(i, i)).expect("uniform entries");
        }
        acc
    }

    pub fn reduce_mod(&self, m: &BigInt) -> Self {
        self.map(|e| e.reduce_mod(m))
    }

    pub fn divisible_by(&self, d: &BigInt) -> bool {
        self.entries.iter().all(|e| e.divisible_by(d))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }
}

impl RingMatrix<LaurentPoly<BigInt>> {
    pub fn law(&self) -> Law {
        self.entries[0].law()
    }

    /// `max_ij ||a_ij||`.
    pub fn sup_norm(&self, p: u64) -> BigRational {
        self.entries.iter().map(|e| e.sup_norm(p)).max().unwrap_or_else(BigRational::zero)
    }

    pub fn is_commutative(&self) -> bool {
        self.law().is_abelian()
    }
}

/// Applies the reduction map entrywise.
pub fn reduce_to_quotient(
    f: &RingMatrix<LaurentPoly<BigInt>>,
    group: &Arc<FiniteGroup>,
) -> Result<RingMatrix<GroupRingElem>> {
    f.try_map(|e| reduce_poly(e, group))
}

/// The matrix of right multiplication by `f*` on `(Z[G])^r` in the basis of
/// group elements: block `(j, i)` has entry `a_gamma` at row
/// `delta gamma^-1`, column `delta`, where `a_gamma` is the coefficient of
/// `gamma` in `f_ji`. Then `rho(fg) = rho(f) rho(g)` and
/// `trace(rho(f)) = m * tr(f)`.
pub fn rho_matrix(f: &RingMatrix<GroupRingElem>, limits: &Limits) -> Result<IntMatrix> {
    let r = f.size();
    let g = f.get(0, 0).group().clone();
    let m = g.order();
    let n = r * m;
    if n > limits.max_rho_dim {
        return Err(Error::QuotientTooLarge { size: n, cap: limits.max_rho_dim });
    }
    let mut out = IntMatrix::zeros(n);
    for j in 0..r {
        for i in 0..r {
            for (gamma, a) in f.get(j, i).coeffs().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let gi = g.inv(gamma);
                for delta in 0..m {
                    let row = j * m + g.mul(delta, gi);
                    let col = i * m + delta;
                    *out.get_mut(row, col) += a;
                }
            }
        }
    }
    Ok(out)
}

/// `x` with coefficients reduced into the symmetric range `(-m/2, m/2]`.
pub fn symmetric_mod(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r + &r > *m {
        r - m
    } else {
        r
    }
}

impl LaurentPoly<BigInt> {
    pub fn reduce_mod_symmetric(&self, m: &BigInt) -> Self {
        LaurentPoly::from_terms(self.law(), self.terms().map(|(e, c)| (*e, symmetric_mod(c, m))))
    }
}
