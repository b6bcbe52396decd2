//! The p-adic Fuglede-Kadison determinant `log_p det_Gamma = tr_Gamma log`.
//!
//! On a 1-unit `F = 1 + pG` it is the sum `-sum_nu tr((1 - F)^nu)_e / nu`,
//! accumulated with coefficients reduced modulo `p^(N + guard)`; terms that
//! vanish modulo that power are dropped from the support, which is sound
//! because only the coefficient of the identity is ever read.
//!
//! A general unit of `c_0(Z^d)` is first written `p^a c t^nu (1 + pg)`; the
//! first and third factors contribute nothing and `c` contributes `log_p c`.
//! Over a finite group the determinant is `(1/|G|) log_p det rho(f)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::arith::{big_pow, inv_mod, valuation_u64};
use crate::error::{Error, Result};
use crate::fixcount::det_exact;
use crate::groupring::{
    rho_matrix, Exponent, FiniteMatrix, LaurentPoly, Limits, PolyMatrix, RingElement, RingMatrix,
};
use crate::padic::{divide_by_index, PadicScalar, SeriesPlan};

/// `f = p^a * c * gamma * (1 + p g)` with `c` a p-adic unit and `gamma` a
/// group element; `g` is known modulo `p^precision`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitDecomposition {
    pub p: u64,
    pub a: u32,
    /// The coefficient of `gamma` in `f / p^a`, exactly.
    pub c: BigInt,
    pub nu: Exponent,
    /// Coefficients in the symmetric range modulo `p^precision`.
    pub g: LaurentPoly,
    pub precision: u32,
}

impl UnitDecomposition {
    /// The unit `c` as a p-adic number.
    pub fn c_padic(&self, prec: u32) -> PadicScalar {
        PadicScalar::from_integer(&self.c, self.p, prec).expect("valid prime and precision")
    }

    /// The 1-unit factor `1 + p g`, coefficients modulo `p^(precision + 1)`.
    pub fn one_unit(&self) -> LaurentPoly {
        let law = self.g.law();
        LaurentPoly::one(law).try_add(&self.g.scale(&BigInt::from(self.p))).expect("same law")
    }

    /// `p^a c gamma (1 + p g)`, which agrees with `f` modulo
    /// `p^(a + precision + 1)`.
    pub fn reexpand(&self) -> LaurentPoly {
        let lead = big_pow(self.p, self.a) * &self.c;
        self.one_unit().shift(&self.nu).scale(&lead)
    }
}

/// Writes `f` as `p^a c gamma (1 + p g)`, refusing when `f / p^a` is not a
/// monomial modulo `p`. Over Z^d that is exactly the unit criterion of
/// `c_0`; over the Heisenberg group the monomial test is sufficient.
pub fn c0_unit_normalize(f: &LaurentPoly, p: u64, prec: u32) -> Result<UnitDecomposition> {
    let a = f.min_valuation(p).ok_or(Error::ZeroInput)? as u32;
    let pa = big_pow(p, a);
    let pb = BigInt::from(p);
    let mut units = f.terms().filter(|(_, c)| !(*c / &pa).is_multiple_of(&pb));
    let (nu, c) = units.next().map(|(e, c)| (*e, c / &pa)).expect("some coefficient has valuation a");
    if units.next().is_some() {
        return Err(Error::NotACZeroUnit(p));
    }
    let law = f.law();
    let top = big_pow(p, prec + 1);
    let c_inv = inv_mod(&c, &top).expect("unit");
    // w = c^-1 gamma^-1 f / p^a, then g = (w - 1) / p.
    let w = f.div_exact_scalar(&pa).shift(&law.inverse(&nu)).scale(&c_inv).reduce_mod(&top);
    let w1 = w.try_sub(&LaurentPoly::one(law))?;
    debug_assert!(w1.divisible_by(&pb));
    let g = w1.div_exact_scalar_floor(&pb).reduce_mod_symmetric(&big_pow(p, prec));
    Ok(UnitDecomposition { p, a, c, nu, g, precision: prec })
}

impl LaurentPoly<BigInt> {
    /// Floor division of every coefficient.
    pub(crate) fn div_exact_scalar_floor(&self, d: &BigInt) -> Self {
        LaurentPoly::from_terms(self.law(), self.terms().map(|(e, c)| (*e, c.div_floor(d))))
    }
}

fn check_one_unit<E: RingElement>(f: &RingMatrix<E>, q: &BigInt) -> bool {
    f.try_sub(&f.identity_like()).map_or(false, |d| d.divisible_by(q))
}

/// `tr_Gamma tr log F` modulo `p^prec` for a 1-unit `F ≡ 1 (mod p)`.
///
/// For `p = 2` and `F` not congruent to 1 modulo 4, `F^2` is used instead
/// and the result halved.
pub fn tr_log_one_unit<E: RingElement>(f: &RingMatrix<E>, p: u64, prec: u32) -> Result<PadicScalar> {
    if prec == 0 {
        return Err(Error::InvalidPrecision(0));
    }
    if !check_one_unit(f, &BigInt::from(p)) {
        return Err(Error::NotAOneUnit(p));
    }
    if p == 2 && !check_one_unit(f, &BigInt::from(4)) {
        let sq = f.try_mul(f)?;
        let twice = tr_log_series(&sq, 2, prec + 1, 2)?;
        return Ok(PadicScalar::from_residue(&(twice >> 1), 2, prec));
    }
    let min_val = if p == 2 { 2 } else { 1 };
    let v = tr_log_series(f, p, prec, min_val)?;
    Ok(PadicScalar::from_residue(&v, p, prec))
}

/// `-sum_nu tr((1 - F)^nu)_e / nu` modulo `p^target`, as an integer in
/// `[0, p^target)`, given `1 - F ≡ 0 (mod p^min_val)`.
fn tr_log_series<E: RingElement>(f: &RingMatrix<E>, p: u64, target: u32, min_val: u32) -> Result<BigInt> {
    let plan = SeriesPlan::new(p, target, min_val);
    let m = big_pow(p, plan.work);
    let x = f.identity_like().try_sub(f)?.reduce_mod(&m);
    let mut power = x.clone();
    let mut acc = BigInt::zero();
    for nu in 1..=plan.terms {
        if power.is_zero() {
            break;
        }
        let t = power.trace().trace_coeff().mod_floor(&m);
        acc -= divide_by_index(&t, nu, p, plan.work);
        if nu < plan.terms {
            power = power.try_mul(&x)?.reduce_mod(&m);
        }
    }
    Ok(acc.mod_floor(&big_pow(p, target)))
}

/// `log_p det_Gamma f` for a unit `f` of `c_0`: `log_p c + tr log(1 + p g)`.
pub fn logdet_unit(f: &LaurentPoly, p: u64, prec: u32) -> Result<PadicScalar> {
    let dec = c0_unit_normalize(f, p, prec + 2)?;
    let unit_log = dec.c_padic(prec).log()?;
    let one_unit = RingMatrix::scalar(dec.one_unit());
    unit_log.try_add(&tr_log_one_unit(&one_unit, p, prec)?)
}

/// Determinant of a matrix over the commutative ring Z[Z^d]: the Leibniz
/// formula up to size 4, Bareiss elimination with exact division above.
pub fn det_laurent_matrix(f: &PolyMatrix) -> Result<LaurentPoly> {
    if !f.law().is_abelian() {
        return Err(Error::DomainMismatch);
    }
    let r = f.size();
    if r <= 4 {
        return Ok(leibniz(f));
    }
    let law = f.law();
    let mut a: Vec<Vec<LaurentPoly>> = (0..r).map(|i| (0..r).map(|j| f.get(i, j).clone()).collect()).collect();
    let mut negate = false;
    let mut prev = LaurentPoly::one(law);
    for k in 0..r - 1 {
        if a[k][k].is_zero() {
            match (k + 1..r).find(|&i| !a[i][k].is_zero()) {
                None => return Ok(LaurentPoly::zero(law)),
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
            }
        }
        for i in k + 1..r {
            for j in k + 1..r {
                let v = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = v.div_exact(&prev).expect("Bareiss quotients are exact");
            }
            a[i][k] = LaurentPoly::zero(law);
        }
        prev = a[k][k].clone();
    }
    let d = a[r - 1][r - 1].clone();
    Ok(if negate { d.neg_poly() } else { d })
}

fn leibniz(f: &PolyMatrix) -> LaurentPoly {
    let r = f.size();
    let mut perm: Vec<usize> = (0..r).collect();
    let mut acc = LaurentPoly::zero(f.law());
    permutations(&mut perm, 0, &mut |p| {
        let mut term = LaurentPoly::one(f.law());
        for (i, &j) in p.iter().enumerate() {
            term = &term * f.get(i, j);
            if term.is_zero() {
                return;
            }
        }
        acc = if parity(p) { &acc - &term } else { &acc + &term };
    });
    acc
}

fn permutations(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// `true` for odd permutations.
fn parity(p: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                odd = !odd;
            }
        }
    }
    odd
}

/// `(1/|G|) log_p det rho(f)` over a finite group.
pub fn logdet_finite(f: &FiniteMatrix, p: u64, prec: u32, limits: &Limits) -> Result<PadicScalar> {
    let m = f.get(0, 0).group().order() as u64;
    let det = det_exact(&rho_matrix(f, limits)?);
    if det.is_zero() {
        return Err(Error::SingularRho);
    }
    let loss = valuation_u64(m, p);
    Ok(PadicScalar::from_integer(&det, p, prec + loss)?.log()?.div_u64(m))
}

/// Whether `f` is a 1-unit at `p`.
pub fn is_one_unit<E: RingElement>(f: &RingMatrix<E>, p: u64) -> bool {
    check_one_unit(f, &BigInt::from(p))
}
