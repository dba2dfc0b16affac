//! Tuples whose character products are `pi/8`-strong with constant
//! probability.
//!
//! A unit complex `lambda` is `theta`-strong when `|arg lambda| >= theta`, with
//! `arg` in `[-pi, pi)`. For levels `h = 0..=H`, `H = floor(log2 k)`, the
//! generator restricts a `c`-wise independent tuple `u` to a pairwise
//! independent random subset `w^(h)` of density `min(2^(1-h), 1)` and mixes
//! the levels with independent bits:
//!
//! ```text
//! f_i = sum_h b_h * w_i^(h) * u_i   (mod m_i)
//! ```
//!
//! One `u` seed and one `w` seed serve every level; level `h` thresholds the
//! same pairwise hash at density `2^(1-h)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::smallbias::cwise::{select_prime, CwiseGenerator};
use crate::smallbias::domain_size;

/// Tolerance on `|lambda| = 1` for [`theta_strong`].
pub const UNIT_TOLERANCE: f64 = 1e-9;

/// Slack on the `arg` comparison so that exactly representable boundary
/// phases such as `e^{i pi/8}` count as strong.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// `|arg lambda| >= theta`.
pub fn theta_strong(lambda: Complex64, theta: f64) -> Result<bool> {
    if !lambda.re.is_finite() || !lambda.im.is_finite() || (lambda.norm() - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::InvalidArgument(format!("{lambda} is not on the unit circle")));
    }
    let mut arg = lambda.arg();
    if arg == PI {
        arg = -PI;
    }
    Ok(arg.abs() >= theta - BOUNDARY_TOLERANCE)
}

/// Exact test for `exp(2 pi i num / den)` being `pi/8`-strong:
/// `2 pi min(num, den - num) / den >= pi/8`.
pub fn rational_strong(num: u64, den: u64) -> bool {
    let num = num % den;
    16 * num.min(den - num) >= den
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm_of(moduli: &[u32]) -> u64 {
    moduli.iter().fold(1u64, |acc, &m| acc / gcd(acc, m as u64) * m as u64)
}

/// Constants of the strong-product construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrongProductParams {
    /// Independence order of `u`.
    pub c: usize,
    pub theta_strong: f64,
    pub theta_intermediate: f64,
    /// Guaranteed floor on the strong fraction.
    pub success_prob: f64,
}

impl Default for StrongProductParams {
    fn default() -> Self {
        StrongProductParams { c: 7, theta_strong: PI / 8.0, theta_intermediate: PI / 4.0, success_prob: 1.0 / 16.0 }
    }
}

impl StrongProductParams {
    /// Density of the level-`h` subset, `min(1/2^(h-1), 1)`.
    pub fn membership_probability(h: u32) -> f64 {
        if h <= 1 {
            1.0
        } else {
            0.5f64.powi(h as i32 - 1)
        }
    }
}

#[derive(Debug, Clone)]
pub struct StrongProductGenerator {
    params: StrongProductParams,
    moduli: Vec<u32>,
    prime: u64,
    u: CwiseGenerator,
    levels: u32,
    /// `ceil(p * density)` per level; `None` when every level is full.
    thresholds: Option<Vec<u64>>,
    w_count: u64,
}

impl StrongProductGenerator {
    pub fn new(params: StrongProductParams, moduli: &[u32]) -> Result<Self> {
        if moduli.is_empty() || moduli.iter().any(|&m| m < 2) {
            return Err(Error::InvalidArgument(format!("moduli must be at least 2, got {moduli:?}")));
        }
        domain_size(moduli)?;
        let k = moduli.len();
        let prime = select_prime(k, moduli, params.c);
        let u = CwiseGenerator::new(prime, params.c.min(k), moduli.to_vec())?;
        let levels = k.ilog2() + 1;
        let (thresholds, w_count) = if levels > 2 {
            let t = (0..levels)
                .map(|h| (prime as f64 * StrongProductParams::membership_probability(h)).ceil() as u64)
                .collect();
            (Some(t), prime * prime)
        } else {
            (None, 1)
        };
        Ok(StrongProductGenerator { params, moduli: moduli.to_vec(), prime, u, levels, thresholds, w_count })
    }

    pub fn params(&self) -> &StrongProductParams {
        &self.params
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// `H + 1`.
    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn u_seed_count(&self) -> u64 {
        self.u.seed_count()
    }

    pub fn w_seed_count(&self) -> u64 {
        self.w_count
    }

    pub fn mixing_bits(&self) -> u32 {
        self.levels
    }

    /// Number of `F_p` factors in the seed space.
    pub fn field_factors(&self) -> u32 {
        self.u.order() as u32 + if self.thresholds.is_some() { 2 } else { 0 }
    }

    /// `p^c' * (p^2 if subsets are sampled) * 2^(H+1)`.
    pub fn seed_count(&self) -> u64 {
        (self.u.seed_count() * self.w_count) << self.levels
    }

    /// Per-coordinate multipliers `W_i = sum_h b_h w_i^(h)` for a `w` seed and
    /// mixing bits `b`.
    pub fn multipliers(&self, w_seed: u64, b: u64, out: &mut [u32]) {
        let (a0, a1) = (w_seed % self.prime, w_seed / self.prime);
        for (i, o) in out.iter_mut().enumerate() {
            let hash = (a0 + a1 * i as u64) % self.prime;
            *o = (0..self.levels)
                .filter(|&h| {
                    b >> h & 1 == 1 && self.thresholds.as_ref().is_none_or(|t| hash < t[h as usize])
                })
                .count() as u32;
        }
    }

    /// Seed layout: `u_seed + U * (w_seed + W * b)`.
    pub fn sample(&self, seed: u64, out: &mut [u32]) -> Result<()> {
        if seed >= self.seed_count() {
            return Err(Error::InvalidArgument(format!("seed {seed} out of range for {} seeds", self.seed_count())));
        }
        let uc = self.u.seed_count();
        let (u_seed, rest) = (seed % uc, seed / uc);
        let (w_seed, b) = (rest % self.w_count, rest / self.w_count);
        self.u.tuple(u_seed, out)?;
        let mut mult = vec![0u32; out.len()];
        self.multipliers(w_seed, b, &mut mult);
        for ((o, w), &m) in out.iter_mut().zip(mult).zip(&self.moduli) {
            *o = (*o * w) % m;
        }
        Ok(())
    }

    /// Counts of `u` tuples reduced mod `m_i`, in mixed radix.
    pub(crate) fn u_histogram(&self) -> Result<Vec<u64>> {
        let mut hist = vec![0u64; domain_size(&self.moduli)? as usize];
        let mut t = vec![0u32; self.moduli.len()];
        for s in 0..self.u.seed_count() {
            self.u.tuple(s, &mut t)?;
            hist[super::encode(&self.moduli, &t)] += 1;
        }
        Ok(hist)
    }

    /// Counts of multiplier vectors over `(w_seed, b)`.
    pub(crate) fn multiplier_histogram(&self) -> Vec<(Vec<u32>, u64)> {
        let mut map = std::collections::BTreeMap::new();
        let mut mult = vec![0u32; self.moduli.len()];
        for b in 0..1u64 << self.levels {
            for w in 0..self.w_count {
                self.multipliers(w, b, &mut mult);
                *map.entry(mult.clone()).or_insert(0u64) += 1;
            }
        }
        map.into_iter().collect()
    }
}

/// Fraction of generator seeds for which `prod_i zeta_{m_i}^{e_i f_i}` is
/// `pi/8`-strong, for every nonzero exponent vector `e` (mixed radix index
/// `1..prod m_i`). Exact, using independence of the `u` and `(w, b)` parts.
pub fn strong_fractions(gen: &StrongProductGenerator) -> Result<Vec<(Vec<u32>, f64)>> {
    let moduli = gen.moduli();
    let domain = domain_size(moduli)? as usize;
    let lcm = lcm_of(moduli);
    let scale: Vec<u64> = moduli.iter().map(|&m| lcm / m as u64).collect();
    let u_counts = gen.u_histogram()?;
    let u_support: Vec<(Vec<u32>, u64)> = u_counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(idx, &c)| {
            let mut t = vec![0u32; moduli.len()];
            super::decode(moduli, idx, &mut t);
            (t, c)
        })
        .collect();
    let w_support = gen.multiplier_histogram();
    let total = gen.seed_count() as f64;
    let mut e = vec![0u32; moduli.len()];
    let mut out = Vec::with_capacity(domain - 1);
    for idx in 1..domain {
        super::decode(moduli, idx, &mut e);
        let mut strong = 0u64;
        for (w, wc) in &w_support {
            for (u, uc) in &u_support {
                let num: u64 = (0..moduli.len())
                    .map(|i| (e[i] as u64 * u[i] as u64 * w[i] as u64 % moduli[i] as u64) * scale[i])
                    .sum();
                if rational_strong(num % lcm, lcm) {
                    strong += wc * uc;
                }
            }
        }
        out.push((e.clone(), strong as f64 / total));
    }
    Ok(out)
}
