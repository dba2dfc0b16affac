//! Exact permanents.
//!
//! [`permanent_naive`] sums over all permutations and is the ground truth for
//! small sizes. [`permanent_ryser`] and [`permanent_glynn_exact`] are the
//! `O(2^n n)` inclusion-exclusion formulas driven by Gray-code sweeps, so each
//! step updates the row sums with a single column. [`permanent_gengly_exact`]
//! averages the roots-of-unity estimator over its whole domain, which
//! computes the permanent of a matrix with repeated columns from the compact
//! `n x k` base.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::estimate::log_gengly_prefactor;
use crate::gray::{BinaryGray, MixedRadixGray};
use crate::kahan::KahanSum;
use crate::matrix::{ComplexMatrix, MultiplicitySpec};
use crate::roots::root_table;

pub const NAIVE_MAX_N: usize = 10;
pub const GRAY_MAX_N: usize = 30;
pub const GENGLY_MAX_DOMAIN: u64 = 1 << 24;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn require_square(a: &ComplexMatrix, limit: usize, what: &'static str) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("permanent needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    let n = a.rows();
    if n > limit {
        return Err(Error::SizeLimit { what, size: n as u64, limit: limit as u64 });
    }
    Ok(n)
}

/// Sum over all `n!` permutations of the products `a[i][sigma(i)]`.
pub fn permanent_naive(a: &ComplexMatrix) -> Result<Complex64> {
    require_square(a, NAIVE_MAX_N, "naive permanent")?;
    fn descend(a: &ComplexMatrix, row: usize, used: u32, prefix: Complex64, acc: &mut KahanSum) {
        let n = a.rows();
        if row == n {
            acc.add(prefix);
            return;
        }
        for j in 0..n {
            if used & (1 << j) == 0 {
                let v = a.get(row, j);
                if v != ZERO {
                    descend(a, row + 1, used | (1 << j), prefix * v, acc);
                }
            }
        }
    }
    let mut acc = KahanSum::new();
    descend(a, 0, 0, ONE, &mut acc);
    Ok(acc.total())
}

fn columns(a: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..a.cols()).map(|j| a.column(j)).collect()
}

/// Ryser's formula, `(-1)^n sum_S (-1)^{|S|} prod_i sum_{j in S} a_ij`, with
/// subsets visited in Gray-code order.
pub fn permanent_ryser(a: &ComplexMatrix) -> Result<Complex64> {
    let n = require_square(a, GRAY_MAX_N, "Ryser permanent")?;
    if n == 0 {
        return Ok(ONE);
    }
    let cols = columns(a);
    let mut in_set = vec![false; n];
    let mut row_sums = vec![ZERO; n];
    let mut odd = false;
    let mut acc = KahanSum::new();
    for j in BinaryGray::new(n as u32) {
        let j = j as usize;
        in_set[j] = !in_set[j];
        odd = !odd;
        if in_set[j] {
            row_sums.iter_mut().zip(&cols[j]).for_each(|(r, x)| *r += x);
        } else {
            row_sums.iter_mut().zip(&cols[j]).for_each(|(r, x)| *r -= x);
        }
        let prod: Complex64 = row_sums.iter().product();
        acc.add(if odd { -prod } else { prod });
    }
    let total = acc.total();
    Ok(if n % 2 == 1 { -total } else { total })
}

/// Glynn's formula: the mean of `Gly_x(A)` over all sign vectors.
///
/// `Gly_{-x} = Gly_x`, so only vectors with `x_1 = +1` are visited and the
/// sum is divided by `2^(n-1)`.
pub fn permanent_glynn_exact(a: &ComplexMatrix) -> Result<Complex64> {
    let n = require_square(a, GRAY_MAX_N, "Glynn permanent")?;
    if n == 0 {
        return Ok(ONE);
    }
    let cols = columns(a);
    let mut signs = vec![1.0f64; n];
    let mut row_sums: Vec<Complex64> = (0..n).map(|i| a.row(i).iter().sum()).collect();
    let mut negative = false;
    let mut acc = KahanSum::new();
    acc.add(row_sums.iter().product());
    for bit in BinaryGray::new(n as u32 - 1) {
        let j = bit as usize + 1;
        // x_j goes from signs[j] to -signs[j]
        let delta = -2.0 * signs[j];
        signs[j] = -signs[j];
        negative = !negative;
        row_sums.iter_mut().zip(&cols[j]).for_each(|(r, x)| *r += x * delta);
        let prod: Complex64 = row_sums.iter().product();
        acc.add(if negative { -prod } else { prod });
    }
    Ok(acc.total() / (1u64 << (n - 1)) as f64)
}

/// Size of the roots-of-unity domain `prod (s_i + 1)`, saturating.
pub fn gengly_domain_size(spec: &MultiplicitySpec) -> u64 {
    spec.mults().iter().fold(1u64, |acc, &s| acc.saturating_mul(s as u64 + 1))
}

/// Mean of the generalized Glynn estimator over the full domain
/// `R[s_1+1] x ... x R[s_k+1]`; equals the permanent of `spec.expand()`.
///
/// The domain is walked in reflected mixed-radix Gray order so each step
/// updates the row sums with one base column.
pub fn permanent_gengly_exact(spec: &MultiplicitySpec) -> Result<Complex64> {
    let size = gengly_domain_size(spec);
    if size > GENGLY_MAX_DOMAIN {
        return Err(Error::SizeLimit { what: "roots-of-unity domain", size, limit: GENGLY_MAX_DOMAIN });
    }
    let b = spec.base();
    let moduli = spec.moduli();
    let tables: Vec<Vec<Complex64>> = moduli.iter().map(|&m| root_table(m)).collect();
    let scales: Vec<f64> = spec.mults().iter().map(|&s| (s as f64).sqrt()).collect();
    let cols = columns(b);

    // y_i = sqrt(s_i) x_i; conj(y_i)^{s_i} = s_i^{s_i/2} x_i because x_i^{s_i+1} = 1.
    let mut row_sums: Vec<Complex64> =
        (0..b.rows()).map(|r| b.row(r).iter().zip(&scales).map(|(x, s)| x * s).sum()).collect();
    let mut phases = vec![0u32; moduli.len()];
    let term = |phases: &[u32], row_sums: &[Complex64]| -> Complex64 {
        let phase: Complex64 = phases.iter().zip(&tables).map(|(&p, t)| t[p as usize]).product();
        phase * row_sums.iter().product::<Complex64>()
    };

    let mut acc = KahanSum::new();
    acc.add(term(&phases, &row_sums));
    for step in MixedRadixGray::new(&moduli) {
        let i = step.digit;
        let t = &tables[i];
        let delta = (t[step.to as usize] - t[step.from as usize]) * scales[i];
        row_sums.iter_mut().zip(&cols[i]).for_each(|(r, x)| *r += x * delta);
        phases[i] = step.to;
        acc.add(term(&phases, &row_sums));
    }
    let mean = acc.total() / size as f64;
    Ok(mean * log_gengly_prefactor(spec.mults()).exp())
}
