//! Elements of Q_p at finite precision.
//!
//! A nonzero [`PadicScalar`] is `p^v * u` with `u` a unit known modulo
//! `p^N`; `N` is the relative precision and `v + N` the absolute one.
//! Zero is a tracked state: a value known to vanish modulo `p^k`.
//!
//! The logarithm is the Iwasawa branch (`log_p(p) = 0`): the valuation is
//! dropped, the Teichmüller factor is stripped, and the power series is
//! summed on the remaining 1-unit. For `p = 2` the series is applied to the
//! square of the unit and halved.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{big_pow, floor_log, inv_mod, is_prime_u64, split_valuation, valuation_u64};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "wire::PadicWire", into = "wire::PadicWire")]
pub struct PadicScalar {
    p: u64,
    repr: Repr,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    /// Known to be divisible by `p^abs`.
    Zero { abs: i64 },
    Nonzero { val: i64, prec: u32, unit: BigInt },
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn check_prec(prec: u32) -> Result<()> {
    if prec == 0 {
        Err(Error::InvalidPrecision(0))
    } else {
        Ok(())
    }
}

impl PadicScalar {
    /// Embeds `num / den` into Q_p with relative precision `prec`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, p: u64, prec: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        check_prime(p)?;
        check_prec(prec)?;
        if num.is_zero() {
            return Ok(Self::zero(p, prec as i64));
        }
        let (vn, un) = split_valuation(num, p);
        let (vd, ud) = split_valuation(den, p);
        let m = big_pow(p, prec);
        let inv = inv_mod(&ud, &m).expect("unit part is coprime to p");
        let unit = (un * inv).mod_floor(&m);
        Ok(Self {
            p,
            repr: Repr::Nonzero { val: vn as i64 - vd as i64, prec, unit },
        })
    }

    pub fn from_integer(n: &BigInt, p: u64, prec: u32) -> Result<Self> {
        Self::from_ratio(n, &BigInt::one(), p, prec)
    }

    pub fn from_i64(n: i64, p: u64, prec: u32) -> Result<Self> {
        Self::from_integer(&BigInt::from(n), p, prec)
    }

    pub fn from_rational(q: &BigRational, p: u64, prec: u32) -> Result<Self> {
        Self::from_ratio(q.numer(), q.denom(), p, prec)
    }

    /// The element of Z_p represented by the integer `value` modulo `p^abs`.
    pub fn from_residue(value: &BigInt, p: u64, abs: u32) -> Self {
        let m = big_pow(p, abs);
        let r = value.mod_floor(&m);
        if r.is_zero() {
            return Self::zero(p, abs as i64);
        }
        let (v, u) = split_valuation(&r, p);
        let prec = abs - v;
        let unit = u.mod_floor(&big_pow(p, prec));
        Self { p, repr: Repr::Nonzero { val: v as i64, prec, unit } }
    }

    pub fn zero(p: u64, abs: i64) -> Self {
        Self { p, repr: Repr::Zero { abs } }
    }

    pub fn one(p: u64, prec: u32) -> Self {
        Self { p, repr: Repr::Nonzero { val: 0, prec, unit: BigInt::one() } }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    /// Valuation, or `None` for zero-to-precision.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { val, .. } => Some(*val),
        }
    }

    pub fn unit(&self) -> Option<&BigInt> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { unit, .. } => Some(unit),
        }
    }

    /// Relative precision; zero has none.
    pub fn precision(&self) -> u32 {
        match &self.repr {
            Repr::Zero { .. } => 0,
            Repr::Nonzero { prec, .. } => *prec,
        }
    }

    /// The value is known modulo `p^abs_precision()`.
    pub fn abs_precision(&self) -> i64 {
        match &self.repr {
            Repr::Zero { abs } => *abs,
            Repr::Nonzero { val, prec, .. } => val + *prec as i64,
        }
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.p, other.p))
        }
    }

    /// Drops digits so the value is known modulo `p^abs` (never gains).
    pub fn truncate(&self, abs: i64) -> Self {
        if abs >= self.abs_precision() {
            return self.clone();
        }
        match &self.repr {
            Repr::Zero { .. } => Self::zero(self.p, abs),
            Repr::Nonzero { val, unit, .. } => {
                if abs <= *val {
                    Self::zero(self.p, abs)
                } else {
                    let prec = (abs - val) as u32;
                    Self {
                        p: self.p,
                        repr: Repr::Nonzero {
                            val: *val,
                            prec,
                            unit: unit.mod_floor(&big_pow(self.p, prec)),
                        },
                    }
                }
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let p = self.p;
        let abs = self.abs_precision().min(other.abs_precision());
        let (a, b) = match (&self.repr, &other.repr) {
            (Repr::Zero { .. }, Repr::Zero { .. }) => return Ok(Self::zero(p, abs)),
            (Repr::Zero { .. }, _) => return Ok(other.truncate(abs)),
            (_, Repr::Zero { .. }) => return Ok(self.truncate(abs)),
            (
                Repr::Nonzero { val: va, unit: ua, .. },
                Repr::Nonzero { val: vb, unit: ub, .. },
            ) => ((*va, ua), (*vb, ub)),
        };
        let vmin = a.0.min(b.0);
        if abs <= vmin {
            return Ok(Self::zero(p, abs));
        }
        let span = (abs - vmin) as u32;
        let m = big_pow(p, span);
        let sa = a.1 * big_pow(p, (a.0 - vmin) as u32);
        let sb = b.1 * big_pow(p, (b.0 - vmin) as u32);
        let s = (sa + sb).mod_floor(&m);
        if s.is_zero() {
            return Ok(Self::zero(p, abs));
        }
        let (k, u) = split_valuation(&s, p);
        let prec = span - k;
        Ok(Self {
            p,
            repr: Repr::Nonzero {
                val: vmin + k as i64,
                prec,
                unit: u.mod_floor(&big_pow(p, prec)),
            },
        })
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Nonzero { val, prec, unit } => {
                let m = big_pow(self.p, *prec);
                Self {
                    p: self.p,
                    repr: Repr::Nonzero { val: *val, prec: *prec, unit: (&m - unit).mod_floor(&m) },
                }
            }
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let p = self.p;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => Self::zero(p, a + b),
            (Repr::Zero { abs }, Repr::Nonzero { val, .. })
            | (Repr::Nonzero { val, .. }, Repr::Zero { abs }) => Self::zero(p, abs + val),
            (
                Repr::Nonzero { val: va, prec: pa, unit: ua },
                Repr::Nonzero { val: vb, prec: pb, unit: ub },
            ) => {
                let prec = (*pa).min(*pb);
                let m = big_pow(p, prec);
                Self {
                    p,
                    repr: Repr::Nonzero { val: va + vb, prec, unit: (ua * ub).mod_floor(&m) },
                }
            }
        })
    }

    pub fn inv(&self) -> Result<Self> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::ZeroInput),
            Repr::Nonzero { val, prec, unit } => {
                let m = big_pow(self.p, *prec);
                let inv = inv_mod(unit, &m).expect("unit");
                Ok(Self { p: self.p, repr: Repr::Nonzero { val: -val, prec: *prec, unit: inv } })
            }
        }
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        self.try_mul(&other.inv()?)
    }

    /// Division by an exact nonzero integer; relative precision is kept,
    /// absolute precision drops by `v_p(n)`.
    pub fn div_u64(&self, n: u64) -> Self {
        assert!(n != 0);
        let k = valuation_u64(n, self.p) as i64;
        let rest = n / self.p.pow(k as u32);
        match &self.repr {
            Repr::Zero { abs } => Self::zero(self.p, abs - k),
            Repr::Nonzero { val, prec, unit } => {
                let m = big_pow(self.p, *prec);
                let inv = inv_mod(&BigInt::from(rest), &m).expect("coprime");
                Self {
                    p: self.p,
                    repr: Repr::Nonzero { val: val - k, prec: *prec, unit: (unit * inv).mod_floor(&m) },
                }
            }
        }
    }

    /// Number of p-adic digits on which the two values provably agree:
    /// `v(a - b)` capped at the coarser absolute precision.
    pub fn agreement(&self, other: &Self) -> Result<i64> {
        let d = self.try_sub(other)?;
        Ok(match d.valuation() {
            None => d.abs_precision(),
            Some(v) => v,
        })
    }

    /// Whether `self ≡ other (mod p^abs)`. Errors when either side is not
    /// known that far.
    pub fn equals_at(&self, other: &Self, abs: i64) -> Result<bool> {
        let known = self.abs_precision().min(other.abs_precision());
        if known < abs {
            return Err(Error::IndistinguishableAtPrecision(abs));
        }
        Ok(self.agreement(other)? >= abs)
    }

    /// Integer representative of a value in Z_p modulo `p^abs_precision()`.
    /// `None` if the valuation is negative.
    pub fn to_residue(&self) -> Option<BigInt> {
        match &self.repr {
            Repr::Zero { .. } => Some(BigInt::zero()),
            Repr::Nonzero { val, unit, .. } => {
                if *val < 0 {
                    None
                } else {
                    Some(unit * big_pow(self.p, *val as u32))
                }
            }
        }
    }

    /// The Teichmüller representative of a unit: the root of unity
    /// congruent to it modulo `p` (modulo 4 when `p = 2`).
    pub fn teichmuller(&self) -> Result<Self> {
        let (prec, unit) = match &self.repr {
            Repr::Nonzero { val: 0, prec, unit } => (*prec, unit),
            _ => return Err(Error::NotAUnit),
        };
        let p = self.p;
        let m = big_pow(p, prec);
        let w = if p == 2 {
            if prec < 2 {
                return Err(Error::IndistinguishableAtPrecision(2));
            }
            if (unit % 4u32).is_one() {
                BigInt::one()
            } else {
                &m - 1u32
            }
        } else {
            let pb = BigInt::from(p);
            let mut x = unit.clone();
            loop {
                let next = x.modpow(&pb, &m);
                if next == x {
                    break x;
                }
                x = next;
            }
        };
        Ok(Self { p, repr: Repr::Nonzero { val: 0, prec, unit: w } })
    }

    /// Iwasawa logarithm. The result lies in Z_p (`2Z_2` or `pZ_p`) and is
    /// known modulo `p^N` where `N` is the input's relative precision.
    pub fn log(&self) -> Result<Self> {
        let (prec, unit) = match &self.repr {
            Repr::Zero { .. } => return Err(Error::ZeroInput),
            Repr::Nonzero { prec, unit, .. } => (*prec, unit),
        };
        let p = self.p;
        if p == 2 {
            // log u = log(u^2) / 2 with u^2 in 1 + 8Z_2, known mod 2^(N+1).
            let target = prec + 1;
            let sq = (unit * unit).mod_floor(&big_pow(2, target));
            let l = log_one_unit(&(sq - 1u32), 2, target, 3);
            return Ok(Self::from_residue(&(l >> 1), 2, prec));
        }
        let m = big_pow(p, prec);
        let omega = self.unit_part().teichmuller()?;
        let w_inv = inv_mod(omega.unit().unwrap(), &m).unwrap();
        let w = (unit * w_inv).mod_floor(&m);
        let l = log_one_unit(&(w - 1u32), p, prec, 1);
        Ok(Self::from_residue(&l, p, prec))
    }

    /// `p^-v * self`.
    pub fn unit_part(&self) -> Self {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Nonzero { prec, unit, .. } => {
                Self { p: self.p, repr: Repr::Nonzero { val: 0, prec: *prec, unit: unit.clone() } }
            }
        }
    }

    /// Square root with a fixed sign convention: for odd `p` the root whose
    /// residue mod `p` is the smaller of the two in `[1, p)`; for `p = 2`
    /// the root congruent to 1 mod 4. For `p = 2` one digit of relative
    /// precision is lost.
    pub fn sqrt(&self) -> Result<Self> {
        let p = self.p;
        let (val, prec, unit) = match &self.repr {
            Repr::Zero { abs } => return Ok(Self::zero(p, abs.div_floor(&2))),
            Repr::Nonzero { val, prec, unit } => (*val, *prec, unit),
        };
        if val % 2 != 0 {
            return Err(Error::NotASquare(p));
        }
        if p == 2 {
            if prec < 3 {
                return Err(Error::IndistinguishableAtPrecision(3));
            }
            if (unit % 8u32) != BigInt::one() {
                return Err(Error::NotASquare(p));
            }
            let mut s = BigInt::one();
            for k in 4..=prec {
                let mk = big_pow(2, k);
                if !((&s * &s) - unit).mod_floor(&mk).is_zero() {
                    s += big_pow(2, k - 2);
                }
            }
            let out_prec = prec - 1;
            let s = s.mod_floor(&big_pow(2, out_prec));
            return Ok(Self { p, repr: Repr::Nonzero { val: val / 2, prec: out_prec, unit: s } });
        }
        let u0 = (unit % BigInt::from(p)).to_u64().unwrap();
        let r = sqrt_mod_prime(u0, p).ok_or(Error::NotASquare(p))?;
        let r = r.min(p - r);
        let mut s = BigInt::from(r);
        let mut k = 1u32;
        while k < prec {
            k = (2 * k).min(prec);
            let mk = big_pow(p, k);
            let f = (&s * &s - unit).mod_floor(&mk);
            let d = inv_mod(&(&s * 2u32), &mk).unwrap();
            s = (&s - f * d).mod_floor(&mk);
        }
        Ok(Self { p, repr: Repr::Nonzero { val: val / 2, prec, unit: s } })
    }

    /// Base-p digit string, most significant first, with a radix point for
    /// negative valuations. Zero-to-precision prints as `O(p^k)`.
    pub fn digits(&self) -> String {
        match &self.repr {
            Repr::Zero { abs } => format!("O({}^{})", self.p, abs),
            Repr::Nonzero { val, prec, unit } => {
                let mut ds = Vec::with_capacity(*prec as usize);
                let mut u = unit.clone();
                let pb = BigInt::from(self.p);
                for _ in 0..*prec {
                    let (q, r) = u.div_rem(&pb);
                    ds.push(r.to_u64().unwrap());
                    u = q;
                }
                // ds is least significant first.
                let digit = |d: u64| -> String {
                    if self.p <= 10 {
                        d.to_string()
                    } else {
                        format!("[{d}]")
                    }
                };
                let mut out = String::new();
                if *val >= 0 {
                    for d in ds.iter().rev() {
                        out.push_str(&digit(*d));
                    }
                    for _ in 0..*val {
                        out.push('0');
                    }
                } else {
                    let frac = (-*val) as usize;
                    let mut ds = ds;
                    while ds.len() < frac + 1 {
                        ds.push(0);
                    }
                    for (i, d) in ds.iter().enumerate().rev() {
                        out.push_str(&digit(*d));
                        if i == frac {
                            out.push('.');
                        }
                    }
                }
                format!("...{out}")
            }
        }
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero { abs } => write!(f, "O({}^{})", self.p, abs),
            Repr::Nonzero { val: 0, unit, .. } => {
                write!(f, "{} + O({}^{})", unit, self.p, self.abs_precision())
            }
            Repr::Nonzero { val, unit, .. } => {
                write!(f, "{}^{} * {} + O({}^{})", self.p, val, unit, self.p, self.abs_precision())
            }
        }
    }
}

/// Truncation plan for the logarithm series on `1 + y` with `v(y) >= min_val`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesPlan {
    /// Last term summed.
    pub terms: u64,
    /// Extra digits carried to absorb the divisions by `nu`.
    pub guard: u32,
    /// Working modulus exponent, `target + guard`.
    pub work: u32,
}

impl SeriesPlan {
    /// Every dropped term `nu > terms` satisfies
    /// `nu * min_val - floor(log_p nu) >= target + guard`, and
    /// `guard = floor(log_p terms) + 2`.
    pub fn new(p: u64, target: u32, min_val: u32) -> Self {
        assert!(min_val >= 1);
        let mut guard = 2u32;
        loop {
            let need = (target + guard) as i64;
            // nu*min_val - floor(log nu) is nondecreasing in nu.
            let mut n: u64 = 0;
            while ((n + 1) * min_val as u64) as i64 - (floor_log(p, n + 1) as i64) < need {
                n += 1;
            }
            let terms = n.max(1);
            let g = floor_log(p, terms) + 2;
            if g <= guard {
                return Self { terms, guard, work: target + guard };
            }
            guard = g;
        }
    }
}

/// `log(1 + y)` modulo `p^target` for an integer `y` with `v_p(y) >= min_val`.
pub(crate) fn log_one_unit(y: &BigInt, p: u64, target: u32, min_val: u32) -> BigInt {
    let plan = SeriesPlan::new(p, target, min_val);
    let m = big_pow(p, plan.work);
    let y = y.mod_floor(&m);
    let mut pw = BigInt::one();
    let mut acc = BigInt::zero();
    for nu in 1..=plan.terms {
        pw = (pw * &y).mod_floor(&m);
        let term = divide_by_index(&pw, nu, p, plan.work);
        if nu % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.mod_floor(&big_pow(p, target))
}

/// `x / nu` modulo `p^(work - v_p(nu))` where `x` is known modulo `p^work`
/// and divisible by `p^v_p(nu)`.
pub(crate) fn divide_by_index(x: &BigInt, nu: u64, p: u64, work: u32) -> BigInt {
    let k = valuation_u64(nu, p);
    let rest = nu / p.pow(k);
    let shifted = if k == 0 {
        x.clone()
    } else {
        let d = big_pow(p, k);
        debug_assert!((x % &d).is_zero());
        x / d
    };
    let m = big_pow(p, work - k);
    let inv = inv_mod(&BigInt::from(rest), &m).unwrap();
    (shifted * inv).mod_floor(&m)
}

/// Tonelli-Shanks. `None` if `a` is a non-residue.
pub(crate) fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    use crate::arith::{mul_mod, pow_mod};
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Partial sums of `sqrt(1 + x) = sum_nu binom(1/2, nu) x^nu`, exactly.
/// Entry `k` holds the sum of the first `k + 1` terms.
pub fn sqrt_series_partial_sums(x: &BigRational, terms: usize) -> Vec<BigRational> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut coeff = BigRational::one();
    let mut power = BigRational::one();
    let mut sum = BigRational::zero();
    let mut out = Vec::with_capacity(terms);
    for nu in 0..terms {
        if nu > 0 {
            let k = BigRational::from_integer(BigInt::from(nu as u64 - 1));
            coeff = coeff * (&half - k) / BigRational::from_integer(BigInt::from(nu as u64));
            power = power * x;
        }
        sum = sum + &coeff * &power;
        out.push(sum.clone());
    }
    out
}

/// `|x|_p` exponent helper for rationals: `v_p(x)`, `None` for zero.
pub fn rational_valuation(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let (vn, _) = split_valuation(x.numer(), p);
    let (vd, _) = split_valuation(x.denom(), p);
    Some(vn as i64 - vd as i64)
}

mod wire {
    use super::*;

    #[derive(Serialize, Deserialize)]
    pub struct PadicWire {
        p: u64,
        zero: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        valuation: Option<i64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unit: Option<String>,
        precision: u32,
        abs_precision: i64,
        #[serde(default)]
        digits: String,
    }

    impl From<PadicScalar> for PadicWire {
        fn from(x: PadicScalar) -> Self {
            Self {
                p: x.p,
                zero: x.is_zero(),
                valuation: x.valuation(),
                unit: x.unit().map(|u| u.to_string()),
                precision: x.precision(),
                abs_precision: x.abs_precision(),
                digits: x.digits(),
            }
        }
    }

    impl TryFrom<PadicWire> for PadicScalar {
        type Error = String;
        fn try_from(w: PadicWire) -> std::result::Result<Self, String> {
            if !is_prime_u64(w.p) {
                return Err(format!("{} is not prime", w.p));
            }
            if w.zero {
                return Ok(PadicScalar::zero(w.p, w.abs_precision));
            }
            let val = w.valuation.ok_or("missing valuation")?;
            let unit: BigInt = w
                .unit
                .ok_or("missing unit")?
                .parse()
                .map_err(|e| format!("bad unit: {e}"))?;
            if w.precision == 0 {
                return Err("precision must be positive".into());
            }
            let m = big_pow(w.p, w.precision);
            if unit.is_negative() || unit >= m || (&unit % w.p).is_zero() {
                return Err("unit out of canonical range".into());
            }
            if val + w.precision as i64 != w.abs_precision {
                return Err("inconsistent precision".into());
            }
            Ok(PadicScalar { p: w.p, repr: Repr::Nonzero { val, prec: w.precision, unit } })
        }
    }
}
