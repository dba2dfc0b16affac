//! `c`-wise independent tuples from random polynomials over `F_p`.
//!
//! The seed encodes `c` coefficients; coordinate `i` is the polynomial
//! evaluated at the point `i`, reduced mod `m_i`. Over `F_p` any `c`
//! coordinates are exactly independent and uniform. The reduction leaves each
//! coordinate within statistical distance `m_i / p` of uniform on `0..m_i`.

use crate::error::{Error, Result};

/// Largest supported independence order.
pub const MAX_ORDER: usize = 16;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime strictly greater than `max(k, max m_i, 2c)`.
pub fn select_prime(k: usize, moduli: &[u32], c: usize) -> u64 {
    let floor = (k as u64).max(moduli.iter().copied().max().unwrap_or(0) as u64).max(2 * c as u64);
    (floor + 1..).find(|&q| is_prime(q)).expect("primes are unbounded")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CwiseGenerator {
    prime: u64,
    c: usize,
    moduli: Vec<u32>,
    seed_count: u64,
}

impl CwiseGenerator {
    /// Requires `p` prime, `p >= k` (distinct evaluation points) and
    /// `p > max m_i`.
    pub fn new(prime: u64, c: usize, moduli: Vec<u32>) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::InvalidArgument(format!("{prime} is not prime")));
        }
        if c == 0 || c > MAX_ORDER {
            return Err(Error::InvalidArgument(format!("independence order must lie in 1..={MAX_ORDER}")));
        }
        if (moduli.len() as u64) > prime || moduli.iter().any(|&m| m == 0 || m as u64 >= prime) {
            return Err(Error::InvalidArgument(format!(
                "prime {prime} too small for {} coordinates with moduli {moduli:?}",
                moduli.len()
            )));
        }
        let seed_count = (0..c)
            .try_fold(1u64, |acc, _| acc.checked_mul(prime))
            .filter(|&s| s <= 1 << 40)
            .ok_or_else(|| Error::Capacity(format!("{prime}^{c} seeds exceed 2^40")))?;
        Ok(CwiseGenerator { prime, c, moduli, seed_count })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Independence order `c`; the polynomial degree is `c - 1`.
    pub fn order(&self) -> usize {
        self.c
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    /// `p^c`.
    pub fn seed_count(&self) -> u64 {
        self.seed_count
    }

    /// Unreduced values in `F_p`: `sum_j coef_j i^j` with `coef_j` the base-`p`
    /// digits of `seed`.
    pub fn field_values(&self, seed: u64, out: &mut [u64]) -> Result<()> {
        if seed >= self.seed_count {
            return Err(Error::InvalidArgument(format!("seed {seed} out of range for {} seeds", self.seed_count)));
        }
        let p = self.prime;
        let mut coefs = [0u64; MAX_ORDER];
        let mut s = seed;
        for c in coefs.iter_mut().take(self.c) {
            *c = s % p;
            s /= p;
        }
        let coefs = &coefs[..self.c];
        for (i, o) in out.iter_mut().enumerate().take(self.moduli.len()) {
            let x = i as u64 % p;
            *o = coefs.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p);
        }
        Ok(())
    }

    /// The tuple `f_i = (field value at i) mod m_i`.
    pub fn tuple(&self, seed: u64, out: &mut [u32]) -> Result<()> {
        let mut vals = vec![0u64; self.moduli.len()];
        self.field_values(seed, &mut vals)?;
        for ((o, v), &m) in out.iter_mut().zip(vals).zip(&self.moduli) {
            *o = (v % m as u64) as u32;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(select_prime(3, &[2, 3, 2], 7), 17);
        assert_eq!(select_prime(20, &[2], 7), 23);
        assert_eq!(select_prime(2, &[30], 7), 31);
        assert_eq!(select_prime(1, &[2], 1), 3);
    }

    #[test]
    fn constructor_validation() {
        assert!(CwiseGenerator::new(12, 2, vec![2]).is_err());
        assert!(CwiseGenerator::new(5, 2, vec![5]).is_err());
        assert!(CwiseGenerator::new(3, 2, vec![2; 4]).is_err());
        assert!(CwiseGenerator::new(3, 0, vec![2]).is_err());
        assert!(matches!(CwiseGenerator::new(1009, 7, vec![2]), Err(Error::Capacity(_))));
    }

    #[test]
    fn degree_zero_is_constant() {
        let g = CwiseGenerator::new(11, 1, vec![2, 3, 5]).unwrap();
        let mut out = [0u32; 3];
        for seed in 0..11 {
            g.tuple(seed, &mut out).unwrap();
            assert_eq!(out, [(seed % 2) as u32, (seed % 3) as u32, (seed % 5) as u32]);
        }
        assert!(g.tuple(11, &mut out).is_err());
    }

    #[test]
    fn pairs_are_nearly_independent_uniform() {
        let moduli = vec![2u32, 3, 4];
        let p = 11u64;
        let g = CwiseGenerator::new(p, 2, moduli.clone()).unwrap();
        let mut tuples = Vec::new();
        let mut out = [0u32; 3];
        for seed in 0..g.seed_count() {
            g.tuple(seed, &mut out).unwrap();
            tuples.push(out);
        }
        for i in 0..3 {
            for j in i + 1..3 {
                let mut joint: HashMap<(u32, u32), u64> = HashMap::new();
                for t in &tuples {
                    *joint.entry((t[i], t[j])).or_default() += 1;
                }
                let (mi, mj) = (moduli[i], moduli[j]);
                for a in 0..mi {
                    for b in 0..mj {
                        let freq = *joint.get(&(a, b)).unwrap_or(&0) as f64 / tuples.len() as f64;
                        let ideal = 1.0 / (mi * mj) as f64;
                        assert!((freq - ideal).abs() <= 2.0 * (mi * mj) as f64 / p as f64);
                    }
                }
            }
        }
    }

    #[test]
    fn any_c_field_values_are_exactly_independent() {
        // p = 7, c = 3: every triple of points sees every triple of values once.
        let g = CwiseGenerator::new(7, 3, vec![2; 6]).unwrap();
        let mut vals = [0u64; 6];
        let mut counts: HashMap<(usize, usize, usize, u64, u64, u64), u64> = HashMap::new();
        for seed in 0..g.seed_count() {
            g.field_values(seed, &mut vals).unwrap();
            for a in 0..6 {
                for b in a + 1..6 {
                    for c in b + 1..6 {
                        *counts.entry((a, b, c, vals[a], vals[b], vals[c])).or_default() += 1;
                    }
                }
            }
        }
        assert_eq!(counts.len(), 20 * 343);
        assert!(counts.values().all(|&n| n == 1));
    }

    #[test]
    fn seven_wise_exact_counting_for_tiny_prime() {
        let g = CwiseGenerator::new(7, 7, vec![2; 7]).unwrap();
        let mut vals = [0u64; 7];
        let mut seen = vec![false; 7usize.pow(7)];
        for seed in 0..g.seed_count() {
            g.field_values(seed, &mut vals).unwrap();
            let idx = vals.iter().rev().fold(0usize, |acc, &v| acc * 7 + v as usize);
            assert!(!seen[idx]);
            seen[idx] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }
}
