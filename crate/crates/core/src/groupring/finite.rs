use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::laurent::{Exponent, Law, LaurentPoly};
use crate::error::{Error, Result};

/// Resource caps for quotient construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest admissible group order.
    pub max_order: u64,
    /// Largest admissible size `r * m` of a regular representation.
    pub max_rho_dim: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_order: 100_000, max_rho_dim: 4096 }
    }
}

/// A finite quotient of Z^d or of the Heisenberg group.
///
/// `Cyclic(n)` is Z/n, `Heisenberg(n)` the upper unitriangular 3x3
/// matrices over Z/n, and `Product` a direct product. For Z^d the quotient
/// by `n_1 Z x ... x n_d Z` is the product of `Cyclic(n_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum QuotientSpec {
    Cyclic { n: u64 },
    Heisenberg { n: u64 },
    Product { factors: Vec<QuotientSpec> },
}

impl QuotientSpec {
    pub fn cyclic(n: u64) -> Self {
        QuotientSpec::Cyclic { n }
    }

    pub fn heisenberg(n: u64) -> Self {
        QuotientSpec::Heisenberg { n }
    }

    pub fn product(factors: Vec<QuotientSpec>) -> Self {
        QuotientSpec::Product { factors }
    }

    /// `(n_1, ..., n_d)` as a product of cyclic groups.
    pub fn torus(moduli: &[u64]) -> Self {
        if moduli.len() == 1 {
            Self::cyclic(moduli[0])
        } else {
            Self::product(moduli.iter().map(|&n| Self::cyclic(n)).collect())
        }
    }

    /// The natural quotient of modulus `n` for a law: `(n, ..., n)` for
    /// Z^d, `heisenberg(n)` for the Heisenberg group.
    pub fn diagonal(law: Law, n: u64) -> Self {
        match law {
            Law::Abelian { d } => Self::torus(&vec![n; d]),
            Law::Heisenberg => Self::heisenberg(n),
        }
    }

    fn flatten(&self, out: &mut Vec<Component>) -> Result<()> {
        match self {
            QuotientSpec::Cyclic { n } | QuotientSpec::Heisenberg { n } if *n == 0 => {
                Err(Error::InvalidQuotient("modulus must be at least 1".into()))
            }
            QuotientSpec::Cyclic { n } => {
                out.push(Component::Cyclic(*n));
                Ok(())
            }
            QuotientSpec::Heisenberg { n } => {
                out.push(Component::Heisenberg(*n));
                Ok(())
            }
            QuotientSpec::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::InvalidQuotient("empty product".into()));
                }
                factors.iter().try_for_each(|f| f.flatten(out))
            }
        }
    }

    /// Group order, without building the group.
    pub fn order(&self) -> Result<u128> {
        let mut comps = Vec::new();
        self.flatten(&mut comps)?;
        let mut m: u128 = 1;
        for c in &comps {
            m = m.saturating_mul(c.size());
        }
        Ok(m)
    }
}

impl fmt::Display for QuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientSpec::Cyclic { n } => write!(f, "C{n}"),
            QuotientSpec::Heisenberg { n } => write!(f, "H{n}"),
            QuotientSpec::Product { factors } => {
                for (i, q) in factors.iter().enumerate() {
                    if i > 0 {
                        f.write_str("x")?;
                    }
                    match q {
                        QuotientSpec::Product { .. } => write!(f, "({q})")?,
                        _ => write!(f, "{q}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for QuotientSpec {
    type Err = Error;

    /// Parses the display form, e.g. `C3`, `C3xC5`, `H2`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidQuotient(s.to_string());
        let parts: Vec<&str> = s.trim().split('x').collect();
        let mut factors = Vec::with_capacity(parts.len());
        for part in &parts {
            let part = part.trim();
            let (kind, num) = part.split_at(part.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?);
            let n: u64 = num.parse().map_err(|_| bad())?;
            factors.push(match kind {
                "C" => QuotientSpec::cyclic(n),
                "H" => QuotientSpec::heisenberg(n),
                _ => return Err(bad()),
            });
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { QuotientSpec::product(factors) })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Component {
    Cyclic(u64),
    Heisenberg(u64),
}

impl Component {
    fn size(&self) -> u128 {
        match *self {
            Component::Cyclic(n) => n as u128,
            Component::Heisenberg(n) => (n as u128).pow(3),
        }
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        match *self {
            Component::Cyclic(n) => (a + b) % n,
            Component::Heisenberg(n) => {
                let (a0, a1, a2) = (a / (n * n), (a / n) % n, a % n);
                let (b0, b1, b2) = (b / (n * n), (b / n) % n, b % n);
                let c0 = (a0 + b0) % n;
                let c1 = (a1 + b1) % n;
                let c2 = (a2 + b2 + a0 * b1) % n;
                (c0 * n + c1) * n + c2
            }
        }
    }

    fn inv(&self, a: u64) -> u64 {
        match *self {
            Component::Cyclic(n) => (n - a % n) % n,
            Component::Heisenberg(n) => {
                let (a0, a1, a2) = (a / (n * n), (a / n) % n, a % n);
                let c0 = (n - a0) % n;
                let c1 = (n - a1) % n;
                let c2 = (n - a2 + a0 * a1 % n) % n;
                (c0 * n + c1) * n + c2
            }
        }
    }
}

/// Orders up to this size get a full multiplication table.
const TABLE_CAP: usize = 1024;
/// Orders up to this size get a full associativity check.
const FULL_CHECK_CAP: usize = 512;

/// An explicit finite group with elements `0..m`, identity `0`.
///
/// Elements are tuples over the factors in mixed radix, first factor most
/// significant; a Heisenberg factor `(a, b, c)` is `a n^2 + b n + c`.
pub struct FiniteGroup {
    spec: QuotientSpec,
    comps: Vec<Component>,
    radix: Vec<u64>,
    order: usize,
    table: Option<Vec<u32>>,
    inverse: Vec<u32>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.spec, self.order)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for FiniteGroup {}

/// Builds and verifies the group for `spec`.
pub fn build_quotient_group(spec: &QuotientSpec, limits: &Limits) -> Result<Arc<FiniteGroup>> {
    FiniteGroup::new(spec, limits).map(Arc::new)
}

impl FiniteGroup {
    pub fn new(spec: &QuotientSpec, limits: &Limits) -> Result<Self> {
        let mut comps = Vec::new();
        spec.flatten(&mut comps)?;
        let order = spec.order()?;
        if order > limits.max_order as u128 {
            return Err(Error::OrderOverflow { order, cap: limits.max_order });
        }
        let m = order as usize;
        let radix: Vec<u64> = comps.iter().map(|c| c.size() as u64).collect();
        let mut g = Self { spec: spec.clone(), comps, radix, order: m, table: None, inverse: Vec::new() };
        g.inverse = (0..m).map(|a| g.compute_inv(a as u64) as u32).collect();
        if m <= TABLE_CAP {
            let mut t = vec![0u32; m * m];
            for a in 0..m {
                for b in 0..m {
                    t[a * m + b] = g.compute_mul(a as u64, b as u64) as u32;
                }
            }
            g.table = Some(t);
        }
        g.verify()?;
        Ok(g)
    }

    fn split(&self, mut a: u64) -> Vec<u64> {
        let mut out = vec![0; self.radix.len()];
        for i in (0..self.radix.len()).rev() {
            out[i] = a % self.radix[i];
            a /= self.radix[i];
        }
        out
    }

    fn join(&self, parts: &[u64]) -> u64 {
        parts.iter().zip(&self.radix).fold(0, |acc, (x, r)| acc * r + x)
    }

    fn compute_mul(&self, a: u64, b: u64) -> u64 {
        let (xa, xb) = (self.split(a), self.split(b));
        let parts: Vec<u64> =
            self.comps.iter().enumerate().map(|(i, c)| c.mul(xa[i], xb[i])).collect();
        self.join(&parts)
    }

    fn compute_inv(&self, a: u64) -> u64 {
        let xa = self.split(a);
        let parts: Vec<u64> = self.comps.iter().enumerate().map(|(i, c)| c.inv(xa[i])).collect();
        self.join(&parts)
    }

    fn verify(&self) -> Result<()> {
        let m = self.order;
        let fail = |what: &str| Err(Error::InvalidQuotient(format!("{}: {what} fails", self.spec)));
        for a in 0..m {
            if self.mul(a, 0) != a || self.mul(0, a) != a {
                return fail("identity");
            }
            if self.mul(a, self.inv(a)) != 0 || self.mul(self.inv(a), a) != 0 {
                return fail("inverse");
            }
        }
        let assoc = |a: usize, b: usize, c: usize| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
        if m <= FULL_CHECK_CAP {
            for a in 0..m {
                for b in 0..m {
                    let ab = self.mul(a, b);
                    for c in 0..m {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return fail("associativity");
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
            for _ in 0..4096 {
                let (a, b, c) = (rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m));
                if !assoc(a, b, c) {
                    return fail("associativity");
                }
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &QuotientSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order + b] as usize,
            None => self.compute_mul(a as u64, b as u64) as usize,
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn is_abelian(&self) -> bool {
        self.comps.iter().all(|c| match c {
            Component::Cyclic(_) => true,
            Component::Heisenberg(n) => *n == 1,
        })
    }

    /// Elements commuting with everything.
    pub fn center(&self) -> Vec<usize> {
        (0..self.order).filter(|&a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a))).collect()
    }

    /// Cyclic moduli when the group is a product of cyclic factors.
    pub fn cyclic_moduli(&self) -> Option<Vec<u64>> {
        self.comps
            .iter()
            .map(|c| match c {
                Component::Cyclic(n) => Some(*n),
                Component::Heisenberg(_) => None,
            })
            .collect()
    }

    /// Image of a group element of Z^d or of the Heisenberg group.
    pub fn project(&self, law: Law, e: &Exponent) -> Result<usize> {
        let parts: Vec<u64> = match law {
            Law::Abelian { d } => {
                let moduli = self.cyclic_moduli().filter(|m| m.len() == d).ok_or_else(|| {
                    Error::InvalidQuotient(format!("{} is not a quotient of Z^{d}", self.spec))
                })?;
                moduli.iter().enumerate().map(|(i, &n)| (e.0[i] as i64).rem_euclid(n as i64) as u64).collect()
            }
            Law::Heisenberg => match self.comps.as_slice() {
                [Component::Heisenberg(n)] => {
                    let n = *n as i64;
                    let r = |x: i32| (x as i64).rem_euclid(n) as u64;
                    let n = n as u64;
                    vec![(r(e.0[0]) * n + r(e.0[1])) * n + r(e.0[2])]
                }
                _ => {
                    return Err(Error::InvalidQuotient(format!(
                        "{} is not a quotient of the Heisenberg group",
                        self.spec
                    )))
                }
            },
        };
        Ok(self.join(&parts) as usize)
    }
}

/// An element of the integral group ring of a finite group, as a dense
/// coefficient vector indexed by group elements.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupRingElem {
    group: Arc<FiniteGroup>,
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for GroupRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRingElem({}, {:?})", self.group.spec, self.coeffs)
    }
}

impl GroupRingElem {
    pub fn new(group: Arc<FiniteGroup>, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != group.order() {
            return Err(Error::DimensionMismatch(coeffs.len(), group.order()));
        }
        Ok(Self { group, coeffs })
    }

    pub fn zero(group: Arc<FiniteGroup>) -> Self {
        let m = group.order();
        Self { group, coeffs: vec![BigInt::zero(); m] }
    }

    pub fn one(group: Arc<FiniteGroup>) -> Self {
        Self::basis(group, 0, BigInt::one())
    }

    pub fn basis(group: Arc<FiniteGroup>, g: usize, c: BigInt) -> Self {
        let mut out = Self::zero(group);
        out.coeffs[g] = c;
        out
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || self.group == other.group {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { group: self.group.clone(), coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { group: self.group.clone(), coeffs })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let g = &self.group;
        let mut out = vec![BigInt::zero(); g.order()];
        let rhs: Vec<(usize, &BigInt)> =
            other.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for &(b, cb) in &rhs {
                out[g.mul(a, b)] += ca * cb;
            }
        }
        Ok(Self { group: g.clone(), coeffs: out })
    }

    pub fn neg(&self) -> Self {
        Self { group: self.group.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self { group: self.group.clone(), coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn star(&self) -> Self {
        let g = &self.group;
        let mut out = vec![BigInt::zero(); g.order()];
        for (a, c) in self.coeffs.iter().enumerate() {
            out[g.inv(a)] = c.clone();
        }
        Self { group: g.clone(), coeffs: out }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn constant_term(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn reduce_mod(&self, m: &BigInt) -> Self {
        Self { group: self.group.clone(), coeffs: self.coeffs.iter().map(|c| c.mod_floor(m)).collect() }
    }

    pub fn divisible_by(&self, d: &BigInt) -> bool {
        self.coeffs.iter().all(|c| (c % d).is_zero())
    }
}

/// The reduction map from Z[Gamma] to Z[Gamma / Gamma_n]: coefficients of
/// elements in the same coset are summed.
pub fn reduce_poly(f: &LaurentPoly<BigInt>, group: &Arc<FiniteGroup>) -> Result<GroupRingElem> {
    let mut out = GroupRingElem::zero(group.clone());
    for (e, c) in f.terms() {
        out.coeffs[group.project(f.law(), e)?] += c;
    }
    Ok(out)
}
