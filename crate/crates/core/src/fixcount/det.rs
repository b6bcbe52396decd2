//! Exact integer determinants.
//!
//! Small matrices go through Bareiss fraction-free elimination. Larger ones
//! are reduced modulo enough word-size primes to exceed twice the Hadamard
//! bound, eliminated in parallel, and reconstructed by CRT.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{
    big_pow, crt_symmetric, inv_mod, inv_mod_prime, log2_abs, mul_mod, primes_needed, primes_one_mod,
    residue, split_valuation, sub_mod,
};
use crate::padic::PadicScalar;

/// Size below which [`det_exact`] uses fraction-free elimination.
pub const BAREISS_CUTOFF: usize = 64;

/// Dense square integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[BigInt]> = self.data.chunks(self.n.max(1)).collect();
        f.debug_list().entries(rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>())).finish()
    }
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![BigInt::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Self { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
            .expect("square")
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    /// `log2` of the Hadamard bound `prod_i ||row_i||_2`; `None` if some
    /// row vanishes (the determinant is then zero).
    pub fn hadamard_bits(&self) -> Option<f64> {
        let mut bits = 0.0;
        for i in 0..self.n {
            let s: BigInt = self.row(i).iter().map(|x| x * x).sum();
            if s.is_zero() {
                return None;
            }
            bits += log2_abs(&s) / 2.0;
        }
        Some(bits)
    }

    fn residues(&self, q: u64) -> Vec<u64> {
        self.data.iter().map(|x| residue(x, q)).collect()
    }
}

/// Exact determinant.
pub fn det_exact(m: &IntMatrix) -> BigInt {
    if m.size() < BAREISS_CUTOFF {
        det_bareiss(m)
    } else {
        det_crt(m)
    }
}

/// Bareiss fraction-free Gaussian elimination.
pub fn det_bareiss(m: &IntMatrix) -> BigInt {
    let n = m.size();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                None => return BigInt::zero(),
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
            }
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            for j in k + 1..n {
                let v = &pivot_row[k] * &row[j] - &row[k] * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Determinant modulo a word prime by Gaussian elimination.
pub fn det_mod_prime(mut a: Vec<u64>, n: usize, q: u64) -> u64 {
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i * n + k] != 0) else {
            return 0;
        };
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            det = q - det;
            if det == q {
                det = 0;
            }
        }
        let pk = a[k * n + k];
        det = mul_mod(det, pk, q);
        let inv = inv_mod_prime(pk, q);
        for i in k + 1..n {
            let f = a[i * n + k];
            if f == 0 {
                continue;
            }
            let f = mul_mod(f, inv, q);
            for j in k + 1..n {
                let t = mul_mod(f, a[k * n + j], q);
                a[i * n + j] = sub_mod(a[i * n + j], t, q);
            }
            a[i * n + k] = 0;
        }
    }
    det
}

/// Determinant by residues modulo word primes and CRT; the number of primes
/// is fixed by the Hadamard bound.
pub fn det_crt(m: &IntMatrix) -> BigInt {
    let n = m.size();
    let Some(bits) = m.hadamard_bits() else {
        return BigInt::zero();
    };
    let primes = primes_one_mod(1, primes_needed(bits, crate::arith::WORD_PRIME_BOUND));
    let residues: Vec<u64> = primes.par_iter().map(|&q| det_mod_prime(m.residues(q), n, q)).collect();
    crt_symmetric(&residues, &primes)
}

/// Determinant in Z/p^k, by elimination pivoting on an entry of least
/// valuation; the result is exact in that ring and is returned as a p-adic
/// number known modulo `p^k`.
pub fn det_mod_prime_power(m: &IntMatrix, p: u64, k: u32) -> PadicScalar {
    let n = m.size();
    let modulus = big_pow(p, k);
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| m.row(i).iter().map(|x| x.mod_floor(&modulus)).collect()).collect();
    let mut det = BigInt::one();
    let mut negate = false;
    for c in 0..n {
        // Least-valuation pivot in the remaining block.
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(c) {
            for (j, x) in row.iter().enumerate().skip(c) {
                if x.is_zero() {
                    continue;
                }
                let v = split_valuation(x, p).0;
                if best.map_or(true, |b| v < b.0) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, pi, pj)) = best else {
            return PadicScalar::zero(p, k as i64);
        };
        if pi != c {
            a.swap(pi, c);
            negate = !negate;
        }
        if pj != c {
            for row in a.iter_mut() {
                row.swap(pj, c);
            }
            negate = !negate;
        }
        let pv = big_pow(p, v);
        let piv = a[c][c].clone();
        let unit_inv = inv_mod(&(&piv / &pv), &modulus).expect("unit");
        det = (det * &piv).mod_floor(&modulus);
        let (head, tail) = a.split_at_mut(c + 1);
        let prow = &head[c];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let f = ((&row[c] / &pv) * &unit_inv).mod_floor(&modulus);
            for j in c + 1..n {
                row[j] = (&row[j] - &f * &prow[j]).mod_floor(&modulus);
            }
            row[c] = BigInt::zero();
        }
    }
    if negate {
        det = (-det).mod_floor(&modulus);
    }
    PadicScalar::from_residue(&det, p, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> IntMatrix {
        IntMatrix::from_rows((0..n).map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect()).collect())
            .unwrap()
    }

    /// Cofactor expansion: an oracle independent of elimination.
    fn det_cofactor(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            let minor: Vec<Vec<BigInt>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
            let t = &m[0][j] * det_cofactor(&minor);
            if j % 2 == 0 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        acc
    }

    #[test]
    fn examples() {
        assert_eq!(det_exact(&IntMatrix::from_i64(&[&[4, -1], &[-1, 4]])), BigInt::from(15));
        assert_eq!(det_exact(&IntMatrix::identity(7)), BigInt::one());
        let rep = IntMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]]);
        assert_eq!(det_exact(&rep), BigInt::zero());
        assert_eq!(det_crt(&rep), BigInt::zero());
        assert_eq!(det_exact(&IntMatrix::zeros(0)), BigInt::one());
    }

    #[test]
    fn elimination_agrees_with_cofactors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=7 {
            for _ in 0..5 {
                let m = random_matrix(&mut rng, n, 20);
                let rows: Vec<Vec<BigInt>> = (0..n).map(|i| m.row(i).to_vec()).collect();
                let oracle = det_cofactor(&rows);
                assert_eq!(det_bareiss(&m), oracle);
                assert_eq!(det_crt(&m), oracle);
            }
        }
    }

    #[test]
    fn crt_agrees_with_bareiss_on_large_entries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [12, 30, 70] {
            let m = random_matrix(&mut rng, n, 1_000_000_000);
            assert_eq!(det_crt(&m), det_bareiss(&m));
        }
    }

    #[test]
    fn prime_power_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 6, 30);
            let exact = det_bareiss(&m);
            for (p, k) in [(2u64, 10u32), (3, 6), (5, 4)] {
                let got = det_mod_prime_power(&m, p, k);
                let want = exact.mod_floor(&big_pow(p, k));
                assert_eq!(got.to_residue().unwrap().mod_floor(&big_pow(p, k)), want);
            }
        }
    }
}
