//! Linear-optics amplitudes through permanents.
//!
//! For a `k x k` interferometer `U`, input occupations `t` and output
//! occupations `s` with `n` photons each, the transition amplitude is
//!
//! ```text
//! Per(U_{s,t}) / sqrt(prod s_i! prod t_j!)
//! ```
//!
//! where `U_{s,t}` takes `s_i` copies of row `i` and `t_j` copies of column
//! `j`. Estimation fixes the input to the standard state, one photon in each
//! of the first `n` modes, so only rows repeat.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::estimate::{
    estimate_derandomized, estimate_derandomized_multi, estimate_random, estimate_random_multi, ln_factorial,
    Estimate,
};
use crate::exact::permanent_ryser;
use crate::matrix::{ComplexMatrix, MultiplicitySpec};
use crate::smallbias::{build_binary_space, build_complex_space, SampleSpace};

/// Photon counts per mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OccupationPattern {
    counts: Vec<usize>,
}

impl OccupationPattern {
    pub fn new(counts: Vec<usize>) -> Self {
        OccupationPattern { counts }
    }

    /// One photon in each of the first `n` of `k` modes.
    pub fn standard(k: usize, n: usize) -> Result<Self> {
        if n > k {
            return Err(Error::InvalidArgument(format!("{n} photons do not fit one per mode in {k} modes")));
        }
        Ok(OccupationPattern { counts: (0..k).map(|i| (i < n) as usize).collect() })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn modes(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `ln prod s_i!`.
    fn ln_factorials(&self) -> f64 {
        self.counts.iter().map(|&s| ln_factorial(s)).sum()
    }
}

impl std::str::FromStr for OccupationPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let counts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidArgument(format!("bad occupation count '{t}'"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(OccupationPattern { counts })
    }
}

/// Every pattern of `n` photons over `k` modes, in lexicographic order.
pub fn all_patterns(k: usize, n: usize) -> Vec<OccupationPattern> {
    fn rec(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<OccupationPattern>) {
        if cur.len() + 1 == k {
            cur.push(left);
            out.push(OccupationPattern::new(cur.clone()));
            cur.pop();
            return;
        }
        for c in (0..=left).rev() {
            cur.push(c);
            rec(k, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        rec(k, n, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeResult {
    pub amplitude: Complex64,
    pub probability: f64,
    pub amp_error_bound: f64,
    pub prob_error_bound: f64,
    /// Probability that the error bounds hold.
    pub confidence: f64,
    pub samples_used: u64,
}

/// The `n x n` matrix with `s_i` copies of row `i` and `t_j` copies of
/// column `j` of `U`.
pub fn transition_matrix(
    u: &ComplexMatrix,
    row_pattern: &OccupationPattern,
    col_pattern: &OccupationPattern,
) -> Result<ComplexMatrix> {
    if !u.is_square() {
        return Err(Error::Dimension(format!("interferometer must be square, got {}x{}", u.rows(), u.cols())));
    }
    let k = u.rows();
    if row_pattern.modes() != k || col_pattern.modes() != k {
        return Err(Error::Dimension(format!(
            "patterns over {} and {} modes for a {k}-mode interferometer",
            row_pattern.modes(),
            col_pattern.modes()
        )));
    }
    let n = row_pattern.total();
    if col_pattern.total() != n {
        return Err(Error::InvalidArgument(format!("{n} photons out but {} in", col_pattern.total())));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("patterns hold no photons".into()));
    }
    let repeat = |p: &OccupationPattern| -> Vec<usize> {
        p.counts().iter().enumerate().flat_map(|(i, &c)| std::iter::repeat_n(i, c)).collect()
    };
    let rows = repeat(row_pattern);
    let cols = repeat(col_pattern);
    Ok(ComplexMatrix::from_fn(n, n, |r, c| u.get(rows[r], cols[c])))
}

/// Amplitude from input `col_pattern` to output `row_pattern`, computed
/// exactly.
pub fn amplitude_exact(
    u: &ComplexMatrix,
    row_pattern: &OccupationPattern,
    col_pattern: &OccupationPattern,
) -> Result<AmplitudeResult> {
    let a = transition_matrix(u, row_pattern, col_pattern)?;
    let norm = (0.5 * (row_pattern.ln_factorials() + col_pattern.ln_factorials())).exp();
    let amplitude = permanent_ryser(&a)? / norm;
    Ok(AmplitudeResult {
        amplitude,
        probability: amplitude.norm_sqr(),
        amp_error_bound: 0.0,
        prob_error_bound: 0.0,
        confidence: 1.0,
        samples_used: 1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AmplitudeMode {
    Random { delta: f64, seed: u64 },
    /// Builds a small-bias space for the pattern.
    Derandomized { force_construction: bool },
}

/// The base matrix `B[c][j] = U[mode_j][c]` (`c < n`, modes with `s_j >= 1`)
/// with multiplicities `s_j`; its expansion is the transpose of the
/// transition matrix from the standard input.
pub fn estimation_spec(u: &ComplexMatrix, pattern: &OccupationPattern) -> Result<MultiplicitySpec> {
    if !u.is_square() || pattern.modes() != u.rows() {
        return Err(Error::Dimension(format!(
            "pattern over {} modes for a {}x{} interferometer",
            pattern.modes(),
            u.rows(),
            u.cols()
        )));
    }
    let n = pattern.total();
    if n == 0 || n > u.rows() {
        return Err(Error::InvalidArgument(format!(
            "the standard input needs 1..={} photons, pattern has {n}",
            u.rows()
        )));
    }
    let occupied: Vec<usize> = (0..pattern.modes()).filter(|&i| pattern.counts()[i] > 0).collect();
    let base = ComplexMatrix::from_fn(n, occupied.len(), |c, j| u.get(occupied[j], c));
    MultiplicitySpec::new(base, occupied.iter().map(|&i| pattern.counts()[i]).collect())
}

fn from_estimate(e: &Estimate, pattern: &OccupationPattern) -> AmplitudeResult {
    let norm = (0.5 * pattern.ln_factorials()).exp();
    let amplitude = e.value / norm;
    let g = e.guarantee();
    let d = g.additive_error_bound / norm;
    let a = amplitude.norm();
    AmplitudeResult {
        amplitude,
        probability: a * a,
        amp_error_bound: d,
        // ||alpha|^2 - |a|^2| <= d (2|a| + d) whenever |alpha - a| <= d
        prob_error_bound: d * (2.0 * a + d),
        confidence: g.confidence,
        samples_used: e.samples_used,
    }
}

/// Estimated amplitude from the standard input to output `pattern`, with
/// additive error `epsilon * sqrt(prod s! / prod s^s) * |B|^n`.
pub fn amplitude_estimate(
    u: &ComplexMatrix,
    pattern: &OccupationPattern,
    epsilon: f64,
    mode: AmplitudeMode,
) -> Result<AmplitudeResult> {
    let spec = estimation_spec(u, pattern)?;
    let binary = spec.mults().iter().all(|&s| s == 1);
    let est = match mode {
        AmplitudeMode::Random { delta, seed } if binary => estimate_random(&spec.expand(), epsilon, delta, seed)?,
        AmplitudeMode::Random { delta, seed } => estimate_random_multi(&spec, epsilon, delta, seed)?,
        AmplitudeMode::Derandomized { force_construction } => {
            spec.base().require_nonnegative_real()?;
            if binary {
                let space = build_binary_space(spec.n(), epsilon)?;
                estimate_derandomized(&spec.expand(), &space)?
            } else {
                let space = build_complex_space(&spec.moduli(), epsilon, force_construction)?;
                estimate_derandomized_multi(&spec, &space)?
            }
        }
    };
    Ok(from_estimate(&est, pattern))
}

/// As [`amplitude_estimate`] in derandomized mode, over a caller-supplied
/// space whose moduli are `s_j + 1` for the occupied modes (all 2 when every
/// occupied mode holds one photon).
pub fn amplitude_estimate_with_space(
    u: &ComplexMatrix,
    pattern: &OccupationPattern,
    space: &dyn SampleSpace,
) -> Result<AmplitudeResult> {
    let spec = estimation_spec(u, pattern)?;
    let est = if spec.mults().iter().all(|&s| s == 1) && space.moduli().len() == spec.n() {
        estimate_derandomized(&spec.expand(), space)?
    } else {
        estimate_derandomized_multi(&spec, space)?
    };
    Ok(from_estimate(&est, pattern))
}

/// `prod s_i! / s_i^{s_i}`, with `0! = 0^0 = 1`.
pub fn bunching_bound(pattern: &OccupationPattern) -> f64 {
    pattern
        .counts()
        .iter()
        .map(|&s| ln_factorial(s) - if s == 0 { 0.0 } else { s as f64 * (s as f64).ln() })
        .sum::<f64>()
        .exp()
}

/// Block-diagonal unitary whose `i`-th block is the `s_i`-point Fourier
/// matrix `F(a, b) = exp(2 pi i ab / s_i) / sqrt(s_i)`.
pub fn saturating_unitary(pattern: &OccupationPattern) -> Result<ComplexMatrix> {
    if pattern.counts().is_empty() || pattern.counts().contains(&0) {
        return Err(Error::InvalidArgument("every block needs a positive size".into()));
    }
    let n = pattern.total();
    let mut u = ComplexMatrix::zeros(n, n);
    let mut offset = 0;
    for &s in pattern.counts() {
        let scale = 1.0 / (s as f64).sqrt();
        for a in 0..s {
            for b in 0..s {
                u.set(offset + a, offset + b, crate::roots::unit_root((a * b) as u64, s as u64) * scale);
            }
        }
        offset += s;
    }
    Ok(u)
}

/// Output pattern over `n` modes with all `s_i` photons in the first mode of
/// block `i`; from the standard input through [`saturating_unitary`] its
/// probability equals [`bunching_bound`].
pub fn saturating_outcome(pattern: &OccupationPattern) -> Result<OccupationPattern> {
    if pattern.counts().contains(&0) {
        return Err(Error::InvalidArgument("every block needs a positive size".into()));
    }
    let mut counts = vec![0usize; pattern.total()];
    let mut offset = 0;
    for &s in pattern.counts() {
        counts[offset] = s;
        offset += s;
    }
    Ok(OccupationPattern::new(counts))
}

/// Unitary from the QR decomposition of a complex Gaussian matrix, with the
/// phases fixed so that `R` has a positive diagonal.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)))
                .collect()
        })
        .collect();
    for j in 0..n {
        for i in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let proj: Complex64 = done[i].iter().zip(&rest[0]).map(|(q, v)| q.conj() * v).sum();
            for (v, q) in rest[0].iter_mut().zip(&done[i]) {
                *v -= proj * q;
            }
        }
        let norm = cols[j].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        cols[j].iter_mut().for_each(|v| *v /= norm);
    }
    ComplexMatrix::from_fn(n, n, |r, c| cols[c][r])
}
