//! Glynn-type estimators and the algorithms built on them.
//!
//! For a sign vector `x`, `Gly_x(A) = x_1...x_n prod_i (A x)_i` is an
//! unbiased estimator of `Per(A)` bounded by `|A|^n`. For a base matrix `B`
//! with column multiplicities `s_i` and `x` drawn from products of
//! `(s_i+1)`-th roots of unity, the generalized estimator
//!
//! ```text
//! GenGly_x = (prod s_i! / prod s_i^{s_i}) prod conj(y_i)^{s_i} prod_rows (B y)_r,   y_i = sqrt(s_i) x_i
//! ```
//!
//! is unbiased for the permanent of the expanded matrix and bounded by
//! `prod s_i! / sqrt(prod s_i^{s_i}) |B|^n`.
//!
//! Randomized estimates average `ceil(4 ln(4/delta) / eps^2)` samples: Hoeffding
//! on the real and imaginary parts separately, each to `eps * bound / sqrt 2`,
//! union-bounded. Derandomized estimates average over every point of a
//! [`SampleSpace`] and require nonnegative real entries.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{gengly_domain_size, permanent_gengly_exact, permanent_glynn_exact};
use crate::kahan::KahanSum;
use crate::matrix::{ComplexMatrix, MultiplicitySpec};
use crate::roots::root_table;
use crate::smallbias::SampleSpace;

/// Upper limit on randomized sample counts.
pub const MAX_SAMPLES: u64 = 1 << 40;

/// A point of `R[m_1] x ... x R[m_k]`, stored as integer phases:
/// coordinate `i` is `exp(2 pi i phase_i / m_i)`. The binary case has every
/// modulus equal to 2, phase 0 meaning `+1` and phase 1 meaning `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhaseVector {
    moduli: Vec<u32>,
    phases: Vec<u32>,
}

impl PhaseVector {
    pub fn new(moduli: Vec<u32>, phases: Vec<u32>) -> Result<Self> {
        if moduli.len() != phases.len() {
            return Err(Error::Dimension(format!("{} moduli but {} phases", moduli.len(), phases.len())));
        }
        if let Some(i) = moduli.iter().zip(&phases).position(|(&m, &p)| m == 0 || p >= m) {
            return Err(Error::InvalidArgument(format!(
                "phase {} out of range for modulus {} at coordinate {i}",
                phases[i], moduli[i]
            )));
        }
        Ok(PhaseVector { moduli, phases })
    }

    /// Sign vector from `+1`/`-1` values.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let phases = signs
            .iter()
            .map(|&s| match s {
                1 => Ok(0),
                -1 => Ok(1),
                other => Err(Error::InvalidArgument(format!("sign must be +1 or -1, got {other}"))),
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(PhaseVector { moduli: vec![2; signs.len()], phases })
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn phases(&self) -> &[u32] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn is_binary(&self) -> bool {
        self.moduli.iter().all(|&m| m == 2)
    }

    pub fn value(&self, i: usize) -> Complex64 {
        crate::roots::unit_root(self.phases[i] as u64, self.moduli[i] as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimateMode {
    Random { delta: f64, seed: u64 },
    Derandomized,
    Exhaustive,
}

impl EstimateMode {
    pub fn name(&self) -> &'static str {
        match self {
            EstimateMode::Random { .. } => "random",
            EstimateMode::Derandomized => "derandomized",
            EstimateMode::Exhaustive => "exhaustive",
        }
    }
}

/// An estimate of a permanent together with the scale of its guarantee:
/// `|value - Per| <= epsilon * bound_term`, with certainty unless the mode is
/// random.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub bound_term: f64,
    pub epsilon: f64,
    pub samples_used: u64,
    pub mode: EstimateMode,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuaranteeReport {
    pub additive_error_bound: f64,
    pub confidence: f64,
}

impl Estimate {
    pub fn guarantee(&self) -> GuaranteeReport {
        let confidence = match self.mode {
            EstimateMode::Random { delta, .. } => 1.0 - delta,
            _ => 1.0,
        };
        GuaranteeReport { additive_error_bound: self.epsilon * self.bound_term, confidence }
    }
}

pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `ln( prod s_i! / sqrt(prod s_i^{s_i}) )`, with `0^0 = 1`.
pub fn log_gengly_prefactor(mults: &[usize]) -> f64 {
    mults
        .iter()
        .map(|&s| ln_factorial(s) - if s == 0 { 0.0 } else { 0.5 * s as f64 * (s as f64).ln() })
        .sum()
}

fn validate_eps_delta(epsilon: f64, delta: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

/// `ceil(4 ln(4/delta) / eps^2)`.
pub fn sample_count(epsilon: f64, delta: f64) -> Result<u64> {
    validate_eps_delta(epsilon, delta)?;
    let m = (4.0 * (4.0 / delta).ln() / (epsilon * epsilon)).ceil();
    if m > MAX_SAMPLES as f64 {
        return Err(Error::Capacity(format!("{m} samples exceeds the limit of {MAX_SAMPLES}")));
    }
    Ok(m as u64)
}

/// Evaluates `Gly_x(A)` for binary phase vectors without re-validating.
struct GlyEvaluator<'a> {
    a: &'a ComplexMatrix,
    signs: Vec<f64>,
}

impl<'a> GlyEvaluator<'a> {
    fn new(a: &'a ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!("Glynn estimator needs a square matrix, got {}x{}", a.rows(), a.cols())));
        }
        Ok(GlyEvaluator { a, signs: vec![1.0; a.rows()] })
    }

    fn eval(&mut self, phases: &[u32]) -> Complex64 {
        let mut sign = 1.0;
        for (s, &p) in self.signs.iter_mut().zip(phases) {
            *s = if p == 0 { 1.0 } else { -1.0 };
            sign *= *s;
        }
        let mut prod = Complex64::new(sign, 0.0);
        for i in 0..self.a.rows() {
            let row_sum: Complex64 = self.a.row(i).iter().zip(&self.signs).map(|(x, s)| x * s).sum();
            prod *= row_sum;
        }
        prod
    }
}

/// Evaluates `GenGly_x` with the prefactor folded in once.
struct GenGlyEvaluator<'a> {
    spec: &'a MultiplicitySpec,
    tables: Vec<Vec<Complex64>>,
    scales: Vec<f64>,
    prefactor: f64,
    y: Vec<Complex64>,
}

impl<'a> GenGlyEvaluator<'a> {
    fn new(spec: &'a MultiplicitySpec) -> Self {
        GenGlyEvaluator {
            spec,
            tables: spec.moduli().iter().map(|&m| root_table(m)).collect(),
            scales: spec.mults().iter().map(|&s| (s as f64).sqrt()).collect(),
            prefactor: log_gengly_prefactor(spec.mults()).exp(),
            y: vec![Complex64::new(0.0, 0.0); spec.k()],
        }
    }

    fn eval(&mut self, phases: &[u32]) -> Complex64 {
        // conj(y_i)^{s_i} = s_i^{s_i/2} x_i^{-s_i} = s_i^{s_i/2} x_i
        let mut phase = Complex64::new(self.prefactor, 0.0);
        for (i, &p) in phases.iter().enumerate() {
            let x = self.tables[i][p as usize];
            self.y[i] = x * self.scales[i];
            phase *= x;
        }
        let b = self.spec.base();
        let mut prod = phase;
        for r in 0..b.rows() {
            let row_sum: Complex64 = b.row(r).iter().zip(&self.y).map(|(bv, y)| bv * y).sum();
            prod *= row_sum;
        }
        prod
    }
}

/// `Gly_x(A)` for a binary phase vector of length `n`.
pub fn gly(a: &ComplexMatrix, x: &PhaseVector) -> Result<Complex64> {
    let mut ev = GlyEvaluator::new(a)?;
    if x.len() != a.rows() || !x.is_binary() {
        return Err(Error::Dimension(format!(
            "Glynn estimator of an {n}x{n} matrix needs a binary vector of length {n}",
            n = a.rows()
        )));
    }
    Ok(ev.eval(x.phases()))
}

/// `GenGly_x` for `x` in `R[s_1+1] x ... x R[s_k+1]`.
pub fn gengly(spec: &MultiplicitySpec, x: &PhaseVector) -> Result<Complex64> {
    if x.moduli() != spec.moduli().as_slice() {
        return Err(Error::Dimension(format!(
            "phase vector moduli {:?} do not match s_i + 1 = {:?}",
            x.moduli(),
            spec.moduli()
        )));
    }
    Ok(GenGlyEvaluator::new(spec).eval(x.phases()))
}

/// `|A|^n`, the bound on `|Gly_x(A)|` and on `|Per(A)|`.
pub fn gly_bound(a: &ComplexMatrix) -> Result<f64> {
    Ok(a.norm()?.powi(a.rows() as i32))
}

/// `prod s_i! / sqrt(prod s_i^{s_i}) * |B|^n`, computed in log space.
pub fn permanent_upper_bound(spec: &MultiplicitySpec) -> Result<f64> {
    let norm = spec.base().norm()?;
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok((log_gengly_prefactor(spec.mults()) + spec.n() as f64 * norm.ln()).exp())
}

fn random_bits(rng: &mut ChaCha8Rng, phases: &mut [u32]) {
    for chunk in phases.chunks_mut(64) {
        let word = rng.next_u64();
        for (j, p) in chunk.iter_mut().enumerate() {
            *p = (word >> j & 1) as u32;
        }
    }
}

/// Randomized estimate: the mean of `Gly_x(A)` over
/// `sample_count(epsilon, delta)` uniform sign vectors. With probability at
/// least `1 - delta` the result is within `epsilon |A|^n` of `Per(A)`.
pub fn estimate_random(a: &ComplexMatrix, epsilon: f64, delta: f64, rng_seed: u64) -> Result<Estimate> {
    let m = sample_count(epsilon, delta)?;
    let mut ev = GlyEvaluator::new(a)?;
    let bound_term = gly_bound(a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut phases = vec![0u32; a.rows()];
    let mut acc = KahanSum::new();
    for _ in 0..m {
        random_bits(&mut rng, &mut phases);
        acc.add(ev.eval(&phases));
    }
    Ok(Estimate {
        value: acc.total() / m as f64,
        bound_term,
        epsilon,
        samples_used: m,
        mode: EstimateMode::Random { delta, seed: rng_seed },
    })
}

/// The roots-of-unity analogue of [`estimate_random`] for a matrix given by
/// a base and column multiplicities; the guarantee scale is
/// [`permanent_upper_bound`].
pub fn estimate_random_multi(spec: &MultiplicitySpec, epsilon: f64, delta: f64, rng_seed: u64) -> Result<Estimate> {
    let m = sample_count(epsilon, delta)?;
    let bound_term = permanent_upper_bound(spec)?;
    let moduli = spec.moduli();
    let mut ev = GenGlyEvaluator::new(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut phases = vec![0u32; spec.k()];
    let mut acc = KahanSum::new();
    for _ in 0..m {
        for (p, &md) in phases.iter_mut().zip(&moduli) {
            *p = rng.random_range(0..md);
        }
        acc.add(ev.eval(&phases));
    }
    Ok(Estimate {
        value: acc.total() / m as f64,
        bound_term,
        epsilon,
        samples_used: m,
        mode: EstimateMode::Random { delta, seed: rng_seed },
    })
}

fn average_over_space(space: &dyn SampleSpace, mut f: impl FnMut(&[u32]) -> Complex64) -> Result<Complex64> {
    let mut acc = KahanSum::new();
    let mut weight = 0u64;
    space.for_each_weighted(&mut |phases, w| {
        acc.add(f(phases) * w as f64);
        weight += w;
    })?;
    debug_assert_eq!(weight, space.support_size());
    Ok(acc.total() / weight as f64)
}

/// Deterministic estimate: the mean of `Gly_x(A)` over every point of a
/// binary sample space. For an `eps`-biased space and entrywise nonnegative
/// real `A`, the result is within `eps |A|^n` of `Per(A)` with certainty.
pub fn estimate_derandomized(a: &ComplexMatrix, space: &dyn SampleSpace) -> Result<Estimate> {
    let mut ev = GlyEvaluator::new(a)?;
    a.require_nonnegative_real()?;
    if space.moduli().len() != a.rows() || space.moduli().iter().any(|&m| m != 2) {
        return Err(Error::Dimension(format!(
            "need a binary sample space over {} coordinates",
            a.rows()
        )));
    }
    let bound_term = gly_bound(a)?;
    let value = average_over_space(space, |p| ev.eval(p))?;
    Ok(Estimate {
        value,
        bound_term,
        epsilon: space.declared_epsilon(),
        samples_used: space.support_size(),
        mode: EstimateMode::Derandomized,
    })
}

/// Deterministic estimate over a roots-of-unity sample space whose moduli are
/// `s_i + 1`. Requires the base matrix to be entrywise nonnegative real.
pub fn estimate_derandomized_multi(spec: &MultiplicitySpec, space: &dyn SampleSpace) -> Result<Estimate> {
    spec.base().require_nonnegative_real()?;
    if space.moduli() != spec.moduli().as_slice() {
        return Err(Error::Dimension(format!(
            "sample space moduli {:?} do not match s_i + 1 = {:?}",
            space.moduli(),
            spec.moduli()
        )));
    }
    let bound_term = permanent_upper_bound(spec)?;
    let mut ev = GenGlyEvaluator::new(spec);
    let value = average_over_space(space, |p| ev.eval(p))?;
    Ok(Estimate {
        value,
        bound_term,
        epsilon: space.declared_epsilon(),
        samples_used: space.support_size(),
        mode: EstimateMode::Derandomized,
    })
}

/// Exact value reported as an estimate with zero error: the Glynn average
/// over all `2^(n-1)` sign classes.
pub fn estimate_exhaustive(a: &ComplexMatrix) -> Result<Estimate> {
    let value = permanent_glynn_exact(a)?;
    Ok(Estimate {
        value,
        bound_term: gly_bound(a)?,
        epsilon: 0.0,
        samples_used: 1u64 << a.rows().saturating_sub(1),
        mode: EstimateMode::Exhaustive,
    })
}

/// Exact value via the roots-of-unity average over the full domain.
pub fn estimate_exhaustive_multi(spec: &MultiplicitySpec) -> Result<Estimate> {
    let value = permanent_gengly_exact(spec)?;
    Ok(Estimate {
        value,
        bound_term: permanent_upper_bound(spec)?,
        epsilon: 0.0,
        samples_used: gengly_domain_size(spec),
        mode: EstimateMode::Exhaustive,
    })
}
