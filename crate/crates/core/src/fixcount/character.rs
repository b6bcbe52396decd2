//! The character route for abelian quotients: the fixed-point count of
//! `(n_1, ..., n_d)` is, up to sign, `prod_zeta det f(zeta)` over all
//! tuples of roots of unity `zeta_i^(n_i) = 1`. The product is an integer;
//! it is evaluated in prime fields containing the roots and recovered by CRT.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::{crt_symmetric, log2_abs, mul_mod, pow_mod, prime_factors, primes_needed, primes_one_mod, residue};
use crate::error::{Error, Result};
use crate::groupring::{Law, Limits, PolyMatrix};

use super::det::det_mod_prime;

/// An element of exact order `l` in `F_q^*`, for `l | q - 1`.
fn root_of_unity(l: u64, q: u64) -> u64 {
    let factors = prime_factors(l);
    let e = (q - 1) / l;
    (2..q)
        .map(|x| pow_mod(x, e, q))
        .find(|&w| factors.iter().all(|&f| pow_mod(w, l / f, q) != 1))
        .expect("q = 1 mod l")
}

/// `prod_zeta det f(zeta)` for the quotient of Z^d by `n_1 Z x ... x n_d Z`.
/// A single modulus is applied to every coordinate.
pub fn fix_count_char_crt(f: &PolyMatrix, moduli: &[u64], limits: &Limits) -> Result<BigInt> {
    let d = match f.law() {
        Law::Abelian { d } => d,
        Law::Heisenberg => return Err(Error::NonAbelianQuotient("Heisenberg quotient".into())),
    };
    let n: Vec<u64> = match moduli.len() {
        1 => vec![moduli[0]; d],
        k if k == d => moduli.to_vec(),
        k => return Err(Error::DimensionMismatch(k, d)),
    };
    if n.iter().any(|&x| x == 0) {
        return Err(Error::InvalidQuotient("modulus must be at least 1".into()));
    }
    let order: u128 = n.iter().map(|&x| x as u128).product();
    if order > limits.max_order as u128 {
        return Err(Error::OrderOverflow { order, cap: limits.max_order });
    }
    let r = f.size();
    // |det f(zeta)| <= prod_i (sum_j l1(f_ij)^2)^(1/2).
    let mut bits = 0.0;
    for i in 0..r {
        let s: BigInt = (0..r).map(|j| f.get(i, j).l1_norm().pow(2)).sum();
        if s.is_zero() {
            return Ok(BigInt::zero());
        }
        bits += log2_abs(&s) / 2.0;
    }
    bits *= order as f64;
    let l = n.iter().fold(1u64, |acc, &x| acc.lcm(&x));
    let primes = primes_one_mod(l, primes_needed(bits, crate::arith::WORD_PRIME_BOUND));
    let residues: Vec<u64> = primes.par_iter().map(|&q| product_mod(f, &n, l, q)).collect();
    Ok(crt_symmetric(&residues, &primes))
}

fn product_mod(f: &PolyMatrix, n: &[u64], l: u64, q: u64) -> u64 {
    let d = n.len();
    let r = f.size();
    let w = root_of_unity(l, q);
    // powers[i][t] = zeta_i^t with zeta_i of order n_i.
    let powers: Vec<Vec<u64>> = n
        .iter()
        .map(|&ni| {
            let z = pow_mod(w, l / ni, q);
            let mut out = Vec::with_capacity(ni as usize);
            let mut acc = 1u64;
            for _ in 0..ni {
                out.push(acc);
                acc = mul_mod(acc, z, q);
            }
            out
        })
        .collect();
    let entries: Vec<Vec<(Vec<u64>, u64)>> = f
        .entries()
        .iter()
        .map(|e| {
            e.terms()
                .map(|(ex, c)| {
                    let red = (0..d).map(|i| (ex.0[i] as i64).rem_euclid(n[i] as i64) as u64).collect();
                    (red, residue(c, q))
                })
                .collect()
        })
        .collect();
    let mut k = vec![0u64; d];
    let mut acc = 1u64;
    loop {
        let mut m = Vec::with_capacity(r * r);
        for terms in &entries {
            let mut v = 0u64;
            for (ex, c) in terms {
                let mut t = *c;
                for i in 0..d {
                    t = mul_mod(t, powers[i][((ex[i] * k[i]) % n[i]) as usize], q);
                }
                v = (v + t) % q;
            }
            m.push(v);
        }
        acc = mul_mod(acc, det_mod_prime(m, r, q), q);
        if acc == 0 {
            return 0;
        }
        // Next character in mixed radix.
        let mut i = d;
        loop {
            if i == 0 {
                return acc;
            }
            i -= 1;
            k[i] += 1;
            if k[i] < n[i] {
                break;
            }
            k[i] = 0;
        }
    }
}
