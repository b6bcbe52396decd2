//! One-variable p-adic Mahler measure.
//!
//! For `f = a_m T^m + ... + a_r T^r` with no root on the p-adic unit circle,
//! `m_p(f) = log_p a_r - sum_{0 < |alpha| < 1} log_p alpha`. Only the
//! product of the roots inside the disk is needed, and that product is
//! `±g(0)` for the monic factor `g` carrying those roots. `g` is obtained
//! from `f ≡ c T^s (mod p)` by quadratic Hensel lifting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{big_pow, inv_mod, split_valuation};
use crate::error::{Error, Result};
use crate::groupring::LaurentPoly;
use crate::padic::PadicScalar;

/// A slope `num / den` in lowest terms, `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slope {
    pub num: i64,
    pub den: i64,
}

impl Slope {
    fn new(num: i64, den: i64) -> Self {
        let g = num.gcd(&den).max(1);
        Self { num: num / g, den: den / g }
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub slope: Slope,
    pub length: u32,
}

/// Lower convex hull of `(i, v_p(a_i))`. A segment of slope `s` and length
/// `l` stands for `l` roots of valuation `-s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    /// `(exponent, valuation)` of the hull vertices, left to right.
    pub vertices: Vec<(i64, u32)>,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    pub fn has_zero_slope(&self) -> bool {
        self.segments.iter().any(|s| s.slope.is_zero())
    }

    /// `(root valuation, multiplicity)` per segment.
    pub fn root_valuations(&self) -> Vec<(Slope, u32)> {
        self.segments.iter().map(|s| (Slope { num: -s.slope.num, den: s.slope.den }, s.length)).collect()
    }
}

fn dense(f: &LaurentPoly) -> Result<(i32, Vec<BigInt>)> {
    f.to_dense_univariate()
}

/// Newton polygon of a univariate Laurent polynomial.
pub fn newton_polygon(f: &LaurentPoly, p: u64) -> Result<NewtonPolygon> {
    let (shift, coeffs) = dense(f)?;
    let pts: Vec<(i64, i64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64, split_valuation(c, p).0 as i64))
        .collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // Drop b unless it lies strictly below the chord from a to pt.
            let cross = (b.0 - a.0) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| Segment { slope: Slope::new(w[1].1 - w[0].1, w[1].0 - w[0].0), length: (w[1].0 - w[0].0) as u32 })
        .collect();
    Ok(NewtonPolygon {
        vertices: hull.iter().map(|&(i, v)| (i + shift as i64, v as u32)).collect(),
        segments,
    })
}

/// `f ≡ g h (mod p^precision)` with `g` monic, `g ≡ T^s (mod p)`.
/// Coefficients are little-endian residues in `[0, p^precision)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeSplit {
    pub g: Vec<BigInt>,
    pub h: Vec<BigInt>,
    pub precision: u32,
}

fn reduce(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    a.iter().map(|x| x.mod_floor(m)).collect()
}

fn mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    reduce(&out, m)
}

fn sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    (0..n).map(|i| (a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).mod_floor(m)).collect()
}

/// Quotient and remainder by a monic `g`.
fn divrem_monic(a: &[BigInt], g: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let s = g.len() - 1;
    let mut r = reduce(a, m);
    if r.len() <= s {
        r.resize(s, BigInt::zero());
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - s];
    for k in (0..q.len()).rev() {
        let c = r[k + s].clone();
        if c.is_zero() {
            continue;
        }
        for (j, gj) in g.iter().enumerate() {
            r[k + j] = (&r[k + j] - &c * gj).mod_floor(m);
        }
        q[k] = c;
    }
    r.truncate(s);
    (q, r)
}

fn add_into(a: &mut Vec<BigInt>, b: &[BigInt], m: &BigInt) {
    if a.len() < b.len() {
        a.resize(b.len(), BigInt::zero());
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x = (&*x + y).mod_floor(m);
    }
}

/// Splits `f` (little-endian integer coefficients) into the factor with
/// roots inside the open unit disk and the factor with roots outside.
///
/// Requires `f` primitive with `f ≡ c T^s (mod p)`; the lifting step is
/// `e = f - gh`, `rho = e tau mod g`, `g += rho`, `h += (e - rho h) div g`,
/// with `tau ≡ h^-1 (mod g)` refreshed by the Newton step
/// `tau <- tau (2 - tau h) mod g`.
pub fn slope_split(f: &[BigInt], p: u64, prec: u32) -> Result<SlopeSplit> {
    let pb = BigInt::from(p);
    if f.iter().all(Zero::is_zero) {
        return Err(Error::ZeroPolynomial);
    }
    if f.iter().all(|c| c.is_multiple_of(&pb)) {
        return Err(Error::NotPrimitive);
    }
    let mut units = f.iter().enumerate().filter(|(_, c)| !c.is_multiple_of(&pb));
    let s = units.next().unwrap().0;
    if units.next().is_some() {
        return Err(Error::ZeroSlopePresent);
    }
    let mut g = vec![BigInt::zero(); s + 1];
    g[s] = BigInt::one();
    let mut h = reduce(&f[s..], &pb);
    let mut tau = vec![inv_mod(&f[s], &pb).expect("unit")];
    let mut k = 1u32;
    while k < prec {
        let k2 = (2 * k).min(prec);
        let m = big_pow(p, k2);
        let e = sub(f, &mul(&g, &h, &m), &m);
        let (_, rho) = divrem_monic(&mul(&e, &tau, &m), &g, &m);
        let (delta, _) = divrem_monic(&sub(&e, &mul(&rho, &h, &m), &m), &g, &m);
        add_into(&mut g, &rho, &m);
        add_into(&mut h, &delta, &m);
        h.truncate(f.len() - s);
        let two_minus = sub(&[BigInt::from(2)], &mul(&tau, &h, &m), &m);
        tau = divrem_monic(&mul(&tau, &two_minus, &m), &g, &m).1;
        k = k2;
    }
    let m = big_pow(p, prec);
    let (g, mut h) = (reduce(&g, &m), reduce(&h, &m));
    h.resize(f.len() - s, BigInt::zero());
    debug_assert_eq!(sub(&mul(&g, &h, &m), f, &m).iter().filter(|c| !c.is_zero()).count(), 0);
    Ok(SlopeSplit { g, h, precision: prec })
}

/// Both lines of the one-variable formula and the data behind them.
#[derive(Clone, Debug, PartialEq)]
pub struct MahlerResult {
    /// `log_p a_r - log_p(±g(0))`.
    pub value: PadicScalar,
    /// `log_p a_m + log_p(±h(0)/a_m)`, from the outside factor.
    pub outside_form: PadicScalar,
    /// Number of roots inside the unit disk.
    pub inside_roots: usize,
    pub polygon: NewtonPolygon,
}

/// `m_p(f)` modulo `p^prec` for a univariate `f` with no root on the unit
/// circle.
pub fn mahler_1d(f: &LaurentPoly, p: u64, prec: u32) -> Result<PadicScalar> {
    Ok(mahler_1d_detailed(f, p, prec)?.value)
}

pub fn mahler_1d_detailed(f: &LaurentPoly, p: u64, prec: u32) -> Result<MahlerResult> {
    let polygon = newton_polygon(f, p)?;
    let (_, coeffs) = dense(f)?;
    // p-content and the power of T contribute log_p p = 0 and nothing.
    let content = coeffs.iter().filter(|c| !c.is_zero()).map(|c| split_valuation(c, p).0).min().unwrap();
    let pc = big_pow(p, content);
    let coeffs: Vec<BigInt> = coeffs.iter().map(|c| c / &pc).collect();
    if polygon.has_zero_slope() {
        return Err(Error::ZeroSlopePresent);
    }
    let (a_r, a_m) = (&coeffs[0], coeffs.last().unwrap());
    // g(0) has valuation v_p(a_r) and lead(h) has valuation v_p(a_m); both
    // must still carry prec + 1 significant digits.
    let target = prec + split_valuation(a_r, p).0.max(split_valuation(a_m, p).0) + 1;
    let split = slope_split(&coeffs, p, target)?;
    let log_of = |x: &BigInt| -> Result<PadicScalar> { PadicScalar::from_integer(x, p, prec)?.log() };
    let g0 = PadicScalar::from_residue(&split.g[0], p, target);
    let value = log_of(a_r)?.try_sub(&g0.log()?)?.truncate(prec as i64);
    let h0 = PadicScalar::from_residue(&split.h[0], p, target);
    let h_lead = PadicScalar::from_residue(split.h.last().unwrap(), p, target);
    let outside = h0.try_div(&h_lead)?;
    let outside_form = log_of(a_m)?.try_add(&outside.log()?)?.truncate(prec as i64);
    debug_assert!(value.equals_at(&outside_form, prec as i64).unwrap_or(false));
    Ok(MahlerResult { value, outside_form, inside_roots: split.g.len() - 1, polygon })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_poly;
    use num_traits::ToPrimitive;

    fn poly(s: &str) -> LaurentPoly {
        parse_poly(s, None).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn polygon_examples() {
        let np = newton_polygon(&poly("2*t^2 - t + 2"), 2).unwrap();
        assert_eq!(np.vertices, vec![(0, 1), (1, 0), (2, 1)]);
        let slopes: Vec<Slope> = np.segments.iter().map(|s| s.slope).collect();
        assert_eq!(slopes, vec![Slope { num: -1, den: 1 }, Slope { num: 1, den: 1 }]);
        let np = newton_polygon(&poly("t - 1"), 5).unwrap();
        assert!(np.has_zero_slope());
        let np = newton_polygon(&poly("3*t + 1"), 3).unwrap();
        assert_eq!(np.segments, vec![Segment { slope: Slope { num: 1, den: 1 }, length: 1 }]);
        let np = newton_polygon(&poly("t^4 + 4"), 2).unwrap();
        assert_eq!(np.segments, vec![Segment { slope: Slope { num: -1, den: 2 }, length: 4 }]);
        assert_eq!(newton_polygon(&LaurentPoly::zero(crate::groupring::Law::abelian(1)), 2), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn split_examples() {
        // 2T^2 - T + 2: g = T - alpha_-, h = 2T - 2 alpha_+ ... up to units.
        let f = ints(&[2, -1, 2]);
        let s = slope_split(&f, 2, 12).unwrap();
        assert_eq!(s.g.len(), 2);
        assert!(s.g[1].is_one());
        let m = big_pow(2, 12);
        assert!(sub(&mul(&s.g, &s.h, &m), &f, &m).iter().all(Zero::is_zero));
        // alpha_- is a root of g, alpha_+ = 1/alpha_-; with w = 2 alpha_+
        // known from the binomial series, w * alpha_- = 2.
        let alpha_minus = (-&s.g[0]).mod_floor(&m);
        assert_eq!((BigInt::from(621) * alpha_minus).mod_floor(&big_pow(2, 11)), BigInt::from(2));
        let s = slope_split(&ints(&[-3, 1]), 3, 5).unwrap();
        assert_eq!(s.g, ints(&[240, 1]));
        assert_eq!(s.h, ints(&[1]));
        let s = slope_split(&ints(&[1, 3, 9]), 3, 5).unwrap();
        assert_eq!(s.g, ints(&[1]));
        assert_eq!(s.h, ints(&[1, 3, 9]));
        assert_eq!(slope_split(&ints(&[2, 4]), 2, 5), Err(Error::NotPrimitive));
        assert_eq!(slope_split(&ints(&[1, 1]), 2, 5), Err(Error::ZeroSlopePresent));
    }

    #[test]
    fn mahler_examples() {
        let r = mahler_1d_detailed(&poly("2*t^2 - t + 2"), 2, 8).unwrap();
        assert_eq!(r.value.to_residue().unwrap().to_i64(), Some(164));
        assert_eq!(r.value, r.outside_form);
        assert_eq!(r.inside_roots, 1);
        assert!(mahler_1d(&poly("t - 4"), 2, 8).unwrap().is_zero());
        assert!(mahler_1d(&poly("t - 3"), 3, 8).unwrap().is_zero());
        // 3T - 1 has its root 1/3 outside; m = log 3 + log(1/3) = 0, and
        // T - 5 at p = 3 has a zero slope.
        assert_eq!(mahler_1d(&poly("t - 5"), 3, 8), Err(Error::ZeroSlopePresent));
        let seven = PadicScalar::from_i64(7, 3, 6).unwrap().log().unwrap();
        assert_eq!(mahler_1d(&poly("3*t - 7"), 3, 6).unwrap(), seven);
        // Both end coefficients divisible by p after removing the content.
        let three = PadicScalar::from_i64(3, 2, 6).unwrap().log().unwrap();
        assert_eq!(mahler_1d(&poly("8*t - 6"), 2, 6).unwrap(), three);
    }
}
