//! Integer helpers shared by the exact kernels: word-size modular
//! arithmetic, primality, CRT reconstruction and p-adic valuations of
//! big integers.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo the prime `q`.
pub fn inv_mod_prime(a: u64, q: u64) -> u64 {
    debug_assert!(a % q != 0);
    pow_mod(a, q - 2, q)
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors by trial division (inputs here are group moduli).
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Upper end of the prime range used for CRT work; products of two
/// residues fit comfortably in `u128`.
pub const WORD_PRIME_BOUND: u64 = 1 << 62;

/// The `count` largest primes below 2^62 that are congruent to 1 modulo
/// `step`, in descending order. `step = 1` gives plain word primes.
pub fn primes_one_mod(step: u64, count: usize) -> Vec<u64> {
    let step = step.max(1);
    let mut out = Vec::with_capacity(count);
    let mut k = (WORD_PRIME_BOUND - 2) / step;
    while out.len() < count {
        assert!(k > 0, "ran out of primes congruent to 1 mod {step}");
        let q = k * step + 1;
        if is_prime_u64(q) {
            out.push(q);
        }
        k -= 1;
    }
    out
}

/// Number of word primes needed to pin down an integer of absolute value
/// below `2^bound_bits` through a symmetric CRT residue.
pub fn primes_needed(bound_bits: f64, prime: u64) -> usize {
    let per = (prime as f64).log2() - 1.0;
    (((bound_bits.max(0.0) + 2.0) / per).ceil() as usize).max(1)
}

/// Reconstructs the integer with the given residues, choosing the
/// representative of least absolute value.
pub fn crt_symmetric(residues: &[u64], primes: &[u64]) -> BigInt {
    assert_eq!(residues.len(), primes.len());
    // Garner mixed-radix form.
    let n = primes.len();
    let mut coeffs: Vec<u64> = Vec::with_capacity(n);
    for i in 0..n {
        let q = primes[i];
        let mut x = residues[i] % q;
        let mut prod = 1u64;
        let mut acc = 0u64;
        for j in 0..i {
            acc = add_mod(acc, mul_mod(coeffs[j] % q, prod, q), q);
            prod = mul_mod(prod, primes[j] % q, q);
        }
        x = sub_mod(x, acc, q);
        x = mul_mod(x, inv_mod_prime(prod, q), q);
        coeffs.push(x);
    }
    let mut value = BigInt::zero();
    let mut modulus = BigInt::one();
    for (c, &q) in coeffs.iter().zip(primes) {
        value += &modulus * BigInt::from(*c);
        modulus *= BigInt::from(q);
    }
    let half: BigInt = &modulus >> 1;
    if value > half {
        value -= modulus;
    }
    value
}

pub fn big_pow(p: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// Splits `n != 0` as `p^v * rest` with `p` not dividing `rest`.
pub fn split_valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut rest = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = rest.div_rem(&pb);
        if !r.is_zero() {
            return (v, rest);
        }
        rest = q;
        v += 1;
    }
}

pub fn valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        None
    } else {
        Some(split_valuation(n, p).0)
    }
}

pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// `floor(log_p(n))` for `n >= 1`.
pub fn floor_log(p: u64, n: u64) -> u32 {
    debug_assert!(n >= 1 && p >= 2);
    let mut k = 0;
    let mut acc = p as u128;
    while acc <= n as u128 {
        acc *= p as u128;
        k += 1;
    }
    k
}

/// Non-negative remainder.
pub fn modulo(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(m);
    let ext = a.extended_gcd(m);
    if !ext.gcd.is_one() {
        return None;
    }
    Some(ext.x.mod_floor(m))
}

/// Residue of a big integer modulo a word prime.
pub fn residue(a: &BigInt, q: u64) -> u64 {
    let (sign, mag) = (a.sign(), a.magnitude());
    let r = (mag % BigUint::from(q)).to_u64().unwrap();
    if sign == Sign::Minus && r != 0 {
        q - r
    } else {
        r
    }
}

/// log2 of |a|, for bound bookkeeping. Returns 0 for zero.
pub fn log2_abs(a: &BigInt) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    let bits = a.bits();
    if bits <= 1000 {
        a.abs().to_f64().map(|f| f.log2()).unwrap_or(bits as f64)
    } else {
        bits as f64
    }
}
