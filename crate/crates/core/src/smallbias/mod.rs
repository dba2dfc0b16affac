//! Enumerable sample spaces over products of cyclic groups and their bias
//! audits.
//!
//! A point of a space is a [`PhaseVector`](crate::PhaseVector)-style array of
//! integer phases, coordinate `i` ranging over `0..moduli[i]`. The bias of a
//! distribution `D` is the largest magnitude of a nontrivial character mean,
//!
//! ```text
//! max_{e != 0} | E_{x ~ D} prod_i exp(2 pi i e_i x_i / m_i) |,
//! ```
//!
//! which for binary coordinates is the largest parity bias. Audits compute it
//! exactly from the full distribution.

pub mod binary;
pub mod complex;
pub mod cwise;
pub mod expander;
pub mod strong;

use std::fmt::Debug;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::roots::root_table;

pub use binary::{build_binary_space, exhaustive_binary_space, BinarySpace};
pub use complex::{build_complex_space, exhaustive_complex_space, ComplexSampleSpace};

/// Upper limit on the seed length of any space.
pub const MAX_SEED_BITS: u32 = 40;

/// Upper limit on `support * |domain|` for enumeration audits.
pub const AUDIT_LIMIT: u64 = 1 << 32;

/// A finite distribution over phase vectors given as the image of a uniform
/// seed.
pub trait SampleSpace: Debug + Send + Sync {
    fn moduli(&self) -> &[u32];

    /// Number of seeds; each carries equal weight.
    fn support_size(&self) -> u64;

    fn declared_epsilon(&self) -> f64;

    fn seed_bits(&self) -> u32 {
        ceil_log2(self.support_size())
    }

    /// Writes the phases of the point for `seed` into `out`.
    fn point(&self, seed: u64, out: &mut [u32]) -> Result<()>;

    /// Text form accepted by [`parse_descriptor`].
    fn descriptor(&self) -> String;

    /// True when the space is the uniform distribution over the whole domain.
    fn is_exhaustive(&self) -> bool;

    /// Calls `f(point, weight)` for a collection of points whose weights sum
    /// to [`support_size`](Self::support_size) and together form the
    /// distribution.
    fn for_each_weighted(&self, f: &mut dyn FnMut(&[u32], u64)) -> Result<()> {
        let mut out = vec![0u32; self.moduli().len()];
        for seed in 0..self.support_size() {
            self.point(seed, &mut out)?;
            f(&out, 1);
        }
        Ok(())
    }

    /// Seed counts per domain point, indexed in mixed radix with coordinate 0
    /// least significant.
    fn histogram(&self) -> Result<Vec<u64>> {
        let domain = domain_size(self.moduli())?;
        check_audit_cost(self.support_size(), domain)?;
        let mut hist = vec![0u64; domain as usize];
        let moduli = self.moduli().to_vec();
        self.for_each_weighted(&mut |p, w| hist[encode(&moduli, p)] += w)?;
        Ok(hist)
    }
}

pub(crate) fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// `prod m_i`, or a capacity error beyond `u32` range.
pub fn domain_size(moduli: &[u32]) -> Result<u64> {
    let mut size = 1u64;
    for &m in moduli {
        size = size.checked_mul(m as u64).filter(|&s| s <= u32::MAX as u64).ok_or({
            Error::SizeLimit { what: "sample domain", size: u64::MAX, limit: u32::MAX as u64 }
        })?;
    }
    Ok(size)
}

fn check_audit_cost(support: u64, domain: u64) -> Result<()> {
    let cost = support.saturating_mul(domain);
    if cost > AUDIT_LIMIT {
        return Err(Error::SizeLimit { what: "bias audit (support x domain)", size: cost, limit: AUDIT_LIMIT });
    }
    Ok(())
}

pub(crate) fn encode(moduli: &[u32], phases: &[u32]) -> usize {
    let mut idx = 0usize;
    for (&m, &p) in moduli.iter().zip(phases).rev() {
        idx = idx * m as usize + p as usize;
    }
    idx
}

pub(crate) fn decode(moduli: &[u32], mut idx: usize, out: &mut [u32]) {
    for (o, &m) in out.iter_mut().zip(moduli) {
        *o = (idx % m as usize) as u32;
        idx /= m as usize;
    }
}

/// Largest nontrivial character mean of the distribution given by `hist`
/// over the mixed-radix domain `moduli`. Uses a separable per-axis transform
/// (a Walsh-Hadamard transform when every modulus is 2).
pub fn character_bias_from_histogram(hist: &[u64], moduli: &[u32]) -> Result<f64> {
    let domain = domain_size(moduli)? as usize;
    if hist.len() != domain {
        return Err(Error::Dimension(format!("histogram has {} cells, domain has {domain}", hist.len())));
    }
    let total: u64 = hist.iter().sum();
    if total == 0 {
        return Err(Error::InvalidArgument("empty distribution".into()));
    }
    if domain == 1 {
        return Ok(0.0);
    }
    let max = if moduli.iter().all(|&m| m == 2) {
        let mut f: Vec<f64> = hist.iter().map(|&c| c as f64).collect();
        walsh_hadamard(&mut f);
        f[1..].iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    } else {
        let mut f: Vec<Complex64> = hist.iter().map(|&c| Complex64::new(c as f64, 0.0)).collect();
        let mut stride = 1usize;
        for &m in moduli {
            dft_axis(&mut f, m as usize, stride);
            stride *= m as usize;
        }
        f[1..].iter().fold(0.0f64, |acc, v| acc.max(v.norm()))
    };
    Ok(max / total as f64)
}

fn walsh_hadamard(f: &mut [f64]) {
    let mut h = 1;
    while h < f.len() {
        for block in f.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

fn dft_axis(f: &mut [Complex64], m: usize, stride: usize) {
    if m == 1 {
        return;
    }
    let roots = root_table(m as u32);
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for block in f.chunks_mut(m * stride) {
        for offset in 0..stride {
            for (e, b) in buf.iter_mut().enumerate() {
                *b = (0..m).map(|x| block[offset + x * stride] * roots[(e * x) % m]).sum();
            }
            for (x, b) in buf.iter().enumerate() {
                block[offset + x * stride] = *b;
            }
        }
    }
}

/// Exact parity bias of a binary space.
pub fn measure_bias(space: &dyn SampleSpace) -> Result<f64> {
    if space.moduli().iter().any(|&m| m != 2) {
        return Err(Error::InvalidArgument("parity bias needs a binary space".into()));
    }
    character_bias_from_histogram(&space.histogram()?, space.moduli())
}

/// Exact character bias of a space over any product of cyclic groups.
pub fn measure_complex_bias(space: &dyn SampleSpace) -> Result<f64> {
    character_bias_from_histogram(&space.histogram()?, space.moduli())
}

fn descriptor_fields<'a>(text: &'a str, kind: &str, keys: &[&str]) -> Result<Vec<&'a str>> {
    let mut tokens = text.split_whitespace();
    let head = tokens.next().ok_or_else(|| Error::Descriptor("empty descriptor".into()))?;
    if head != kind {
        return Err(Error::Descriptor(format!("expected '{kind}', found '{head}'")));
    }
    let mut values = vec![None; keys.len()];
    for tok in tokens {
        let (k, v) = tok.split_once('=').ok_or_else(|| Error::Descriptor(format!("malformed field '{tok}'")))?;
        let slot = keys.iter().position(|&key| key == k).ok_or_else(|| Error::Descriptor(format!("unknown key '{k}'")))?;
        if values[slot].replace(v).is_some() {
            return Err(Error::Descriptor(format!("duplicate key '{k}'")));
        }
    }
    values
        .into_iter()
        .zip(keys)
        .map(|(v, k)| v.ok_or_else(|| Error::Descriptor(format!("missing key '{k}'"))))
        .collect()
}

pub(crate) fn parse_field<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Descriptor(format!("bad value for {key}: '{value}'")))
}

/// Rebuilds a space from its descriptor, re-checking its bias guarantee.
pub fn parse_descriptor(text: &str) -> Result<Box<dyn SampleSpace>> {
    match text.split_whitespace().next() {
        Some("binary") => {
            let f = descriptor_fields(text, "binary", &["n", "m", "poly", "eps"])?;
            let poly = u32::from_str_radix(f[2].trim_start_matches("0x"), 16)
                .map_err(|_| Error::Descriptor(format!("bad value for poly: '{}'", f[2])))?;
            Ok(Box::new(BinarySpace::from_parts(
                parse_field("n", f[0])?,
                parse_field("m", f[1])?,
                poly,
                parse_field("eps", f[3])?,
            )?))
        }
        Some("complex") => {
            let f = descriptor_fields(text, "complex", &["k", "s", "p", "c", "r", "l", "eps", "mode"])?;
            let mults = f[1].split(',').map(|s| parse_field::<u32>("s", s)).collect::<Result<Vec<u32>>>()?;
            let fields = complex::DescriptorFields {
                k: parse_field("k", f[0])?,
                mults,
                prime: parse_field("p", f[2])?,
                c: parse_field("c", f[3])?,
                r: parse_field("r", f[4])?,
                walk_length: parse_field("l", f[5])?,
                eps: parse_field("eps", f[6])?,
                mode: f[7].to_string(),
            };
            Ok(Box::new(ComplexSampleSpace::from_descriptor(fields)?))
        }
        Some(other) => Err(Error::Descriptor(format!("unknown space kind '{other}'"))),
        None => Err(Error::Descriptor("empty descriptor".into())),
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;

    /// An explicit multiset of points, for audit tests.
    #[derive(Debug)]
    pub struct ListSpace {
        pub moduli: Vec<u32>,
        pub points: Vec<Vec<u32>>,
    }

    impl SampleSpace for ListSpace {
        fn moduli(&self) -> &[u32] {
            &self.moduli
        }
        fn support_size(&self) -> u64 {
            self.points.len() as u64
        }
        fn declared_epsilon(&self) -> f64 {
            1.0
        }
        fn point(&self, seed: u64, out: &mut [u32]) -> Result<()> {
            out.copy_from_slice(&self.points[seed as usize]);
            Ok(())
        }
        fn descriptor(&self) -> String {
            "list".into()
        }
        fn is_exhaustive(&self) -> bool {
            false
        }
    }

    /// Direct evaluation of every character mean.
    pub fn brute_force_bias(space: &dyn SampleSpace) -> f64 {
        let moduli = space.moduli().to_vec();
        let domain: usize = moduli.iter().map(|&m| m as usize).product();
        let mut pts = Vec::new();
        space
            .for_each_weighted(&mut |p, w| pts.push((p.to_vec(), w)))
            .unwrap();
        let total: u64 = pts.iter().map(|(_, w)| w).sum();
        let mut e = vec![0u32; moduli.len()];
        let mut best = 0.0f64;
        for idx in 1..domain {
            decode(&moduli, idx, &mut e);
            let mut acc = Complex64::new(0.0, 0.0);
            for (p, w) in &pts {
                let angle: f64 =
                    e.iter().zip(p).zip(&moduli).map(|((&ei, &pi), &m)| (ei * pi) as f64 / m as f64).sum();
                acc += Complex64::from_polar(*w as f64, std::f64::consts::TAU * angle);
            }
            best = best.max(acc.norm() / total as f64);
        }
        best
    }
}
