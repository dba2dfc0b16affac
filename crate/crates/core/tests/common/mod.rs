//! Independent oracles and instance generators shared by the integration
//! tests.

#![allow(dead_code, clippy::needless_range_loop)]

use permest::{Complex64, ComplexMatrix, MultiplicitySpec};
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Entries uniform in the square `[-1, 1] x [-1, 1]`.
pub fn random_complex(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// Real entries uniform in `[0, 1)`.
pub fn random_nonnegative(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| c(rng.random_range(0.0..1.0), 0.0))
}

/// Random positive multiplicities summing to `n` over `k` columns.
pub fn random_mults(rng: &mut impl Rng, n: usize, k: usize) -> Vec<usize> {
    let mut s = vec![1usize; k];
    for _ in k..n {
        s[rng.random_range(0..k)] += 1;
    }
    s
}

/// Random spec with `n <= max_n` and `prod (s_i + 1) <= max_domain`.
pub fn random_spec(rng: &mut impl Rng, max_n: usize, max_domain: usize, nonnegative: bool) -> MultiplicitySpec {
    loop {
        let n = rng.random_range(1..=max_n);
        let k = rng.random_range(1..=n);
        let s = random_mults(rng, n, k);
        if s.iter().map(|&x| x + 1).product::<usize>() > max_domain {
            continue;
        }
        let b = if nonnegative { random_nonnegative(rng, n, k) } else { random_complex(rng, n, k) };
        return MultiplicitySpec::new(b, s).unwrap();
    }
}

/// Largest singular value by one-sided Jacobi rotations.
pub fn jacobi_spectral_norm(a: &ComplexMatrix) -> f64 {
    let (m, n) = (a.rows(), a.cols());
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for r in 0..m {
                    let x = cols[p][r];
                    let y = cols[q][r] * phase.conj();
                    cols[p][r] = x * cs - y * sn;
                    cols[q][r] = x * sn + y * cs;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    cols.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).fold(0.0, f64::max)
}

/// `|a - b| <= max(rel * max(|a|, |b|), abs)`.
pub fn close(a: Complex64, b: Complex64, rel: f64, abs: f64) -> bool {
    (a - b).norm() <= (rel * a.norm().max(b.norm())).max(abs)
}

/// All phase tuples of a mixed-radix domain, coordinate 0 fastest.
pub fn all_tuples(moduli: &[u32]) -> Vec<Vec<u32>> {
    let total: usize = moduli.iter().map(|&m| m as usize).product();
    (0..total)
        .map(|mut idx| {
            moduli
                .iter()
                .map(|&m| {
                    let d = (idx % m as usize) as u32;
                    idx /= m as usize;
                    d
                })
                .collect()
        })
        .collect()
}

/// `|E prod_i zeta_{m_i}^{e_i x_i}|` maximised over nonzero `e`, by direct
/// summation over weighted points.
pub fn brute_force_bias(moduli: &[u32], points: &[(Vec<u32>, u64)]) -> f64 {
    let total: u64 = points.iter().map(|(_, w)| w).sum();
    all_tuples(moduli)
        .into_iter()
        .skip(1)
        .map(|e| {
            let s: Complex64 = points
                .iter()
                .map(|(x, w)| {
                    let turns: f64 =
                        e.iter().zip(x).zip(moduli).map(|((&ei, &xi), &m)| (ei * xi % m) as f64 / m as f64).sum();
                    Complex64::from_polar(*w as f64, std::f64::consts::TAU * turns)
                })
                .sum();
            s.norm() / total as f64
        })
        .fold(0.0, f64::max)
}
