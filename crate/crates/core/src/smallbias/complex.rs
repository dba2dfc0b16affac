//! Small-bias spaces over `Z_{m_1} x ... x Z_{m_k}`.
//!
//! Each vertex of an expander over the (padded) strong-product seed space
//! yields a tuple `f^(v)`. A seed is a walk `v_1..v_L` plus bits `d_1..d_L`,
//! and the output is `sum_j d_j f^(v_j) mod m`. For a character `e`,
//! averaging over `d` gives `E prod_j (1 + lambda_j)/2` with
//! `lambda_j = zeta^{e . f^(v_j)}`, and each `pi/8`-strong `lambda_j` shrinks
//! the term to at most `beta = |1 + e^{i pi/8}|/2`.
//!
//! The walk length is the smallest one whose exact bias, computed from the
//! full output distribution, is at most the requested `eps`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::smallbias::expander::{AmplifierParams, MggExpander, DEGREE};
use crate::smallbias::strong::{StrongProductGenerator, StrongProductParams};
use crate::smallbias::{
    ceil_log2, character_bias_from_histogram, decode, domain_size, encode, SampleSpace, MAX_SEED_BITS,
};

/// Domains up to this size are served by the uniform space unless
/// construction is forced.
pub const EXHAUSTIVE_FALLBACK_DOMAIN: u64 = 1 << 20;

/// Largest domain for the uniform space.
pub const MAX_EXHAUSTIVE_DOMAIN: u64 = 1 << 24;

/// Limit on `vertices * |domain|` for the walk distribution.
pub const DISTRIBUTION_CELL_LIMIT: u64 = 1 << 24;

/// Repetitions per amplified sample in the analytic bound.
pub const ANALYTIC_GROUP_SIZE: u32 = 17;

/// `|1 + e^{i pi/8}| / 2`.
pub fn beta() -> f64 {
    0.5 * (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, PI / 8.0)).norm()
}

/// Strong fraction `p = 1/(2t)` guaranteed per walk in the analytic bound.
pub fn strong_fraction_target() -> f64 {
    1.0 / (2.0 * ANALYTIC_GROUP_SIZE as f64)
}

/// `ceil(max(log_{1/2}(eps/2) / q, log_beta(eps/2) / p))` with `q = p`.
pub fn analytic_walk_length(epsilon: f64) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let p = strong_fraction_target();
    let half = (epsilon / 2.0).ln() / 0.5f64.ln() / p;
    let strong = (epsilon / 2.0).ln() / beta().ln() / p;
    Ok(half.max(strong).ceil() as u64)
}

/// Seed bits of a walk of the analytic length: `r + 3(l-1) + l`.
pub fn analytic_seed_bits(moduli: &[u32], epsilon: f64) -> Result<u64> {
    let gen = StrongProductGenerator::new(StrongProductParams::default(), moduli)?;
    let l = analytic_walk_length(epsilon)?;
    Ok(padded_base(&gen).r_bits as u64 + 4 * l - 3)
}

struct PaddedBase {
    side: u64,
    size: u64,
    r_bits: u32,
}

/// Pads the generator's seed space `p^a 2^b` to `p^(2 ceil(a/2)) 2^(2 ceil(b/2))`.
fn padded_base(gen: &StrongProductGenerator) -> PaddedBase {
    let a = gen.field_factors().div_ceil(2);
    let b = gen.mixing_bits().div_ceil(2);
    let side = (gen.prime() as u128).pow(a) << b;
    let size = side * side;
    let r_bits = 128 - (size - 1).leading_zeros();
    let clamp = |x: u128| x.min(u64::MAX as u128) as u64;
    PaddedBase { side: clamp(side), size: clamp(size), r_bits }
}

#[derive(Debug)]
struct Construction {
    gen: StrongProductGenerator,
    amp: AmplifierParams,
    base_size: u64,
    r_bits: u32,
    /// Encoded tuple for every expander vertex.
    outputs: Vec<u32>,
    measured_bias: f64,
    histogram: OnceLock<Vec<u64>>,
}

#[derive(Debug)]
enum Kind {
    Exhaustive,
    Constructed(Box<Construction>),
}

#[derive(Debug)]
pub struct ComplexSampleSpace {
    moduli: Vec<u32>,
    eps: f64,
    kind: Kind,
}

/// Fields of a `complex ...` descriptor.
#[derive(Debug, Clone, PartialEq)]
pub struct DescriptorFields {
    pub k: usize,
    pub mults: Vec<u32>,
    pub prime: u64,
    pub c: usize,
    pub r: u32,
    pub walk_length: u32,
    pub eps: f64,
    pub mode: String,
}

fn validate_moduli(moduli: &[u32]) -> Result<u64> {
    if moduli.is_empty() || moduli.iter().any(|&m| m < 2) {
        return Err(Error::InvalidArgument(format!("moduli must be at least 2, got {moduli:?}")));
    }
    domain_size(moduli)
}

/// Incrementally extends walks by one vertex, tracking the count of
/// `(end vertex, output)` pairs.
struct WalkDistribution<'a> {
    g: MggExpander,
    moduli: &'a [u32],
    outputs: &'a [u32],
    domain: usize,
    cells: Vec<u64>,
    scratch: Vec<u64>,
    length: u32,
}

impl<'a> WalkDistribution<'a> {
    fn new(g: MggExpander, moduli: &'a [u32], outputs: &'a [u32], domain: usize) -> Self {
        let n = outputs.len();
        let mut cells = vec![0u64; n * domain];
        for (v, &o) in outputs.iter().enumerate() {
            cells[v * domain] += 1;
            cells[v * domain + o as usize] += 1;
        }
        WalkDistribution { g, moduli, outputs, domain, scratch: vec![0; n * domain], cells, length: 1 }
    }

    fn step(&mut self) {
        let d = self.domain;
        self.scratch.iter_mut().for_each(|x| *x = 0);
        for v in 0..self.outputs.len() {
            let src = &self.cells[v * d..(v + 1) * d];
            for w in self.g.neighbors(v as u64) {
                let w = w as usize;
                for (t, &s) in self.scratch[w * d..(w + 1) * d].iter_mut().zip(src) {
                    *t += s;
                }
            }
        }
        self.cells.iter_mut().for_each(|x| *x = 0);
        let k = self.moduli.len();
        let mut shift = vec![0u32; k];
        let mut x = vec![0u32; k];
        let mut y = vec![0u32; k];
        for (w, &o) in self.outputs.iter().enumerate() {
            decode(self.moduli, o as usize, &mut shift);
            for idx in 0..d {
                let c = self.scratch[w * d + idx];
                if c == 0 {
                    continue;
                }
                decode(self.moduli, idx, &mut x);
                for i in 0..k {
                    y[i] = (x[i] + shift[i]) % self.moduli[i];
                }
                self.cells[w * d + idx] += c;
                self.cells[w * d + encode(self.moduli, &y)] += c;
            }
        }
        self.length += 1;
    }

    fn histogram(&self) -> Vec<u64> {
        let mut hist = vec![0u64; self.domain];
        for chunk in self.cells.chunks(self.domain) {
            for (h, &c) in hist.iter_mut().zip(chunk) {
                *h += c;
            }
        }
        hist
    }
}

fn support_for(base_size: u64, walk_length: u32) -> Option<u64> {
    let walks = (1..walk_length).try_fold(base_size, |acc, _| acc.checked_mul(DEGREE))?;
    walks.checked_mul(1u64.checked_shl(walk_length)?)
}

/// Smallest multiplier at or above `0.618 n` that is a unit mod `n`. Vertex
/// `v` uses base seed `a v mod n`, so both grid coordinates of the expander
/// affect the tuple.
fn vertex_multiplier(n: u64) -> u64 {
    let start = ((n as f64) * (5f64.sqrt() - 1.0) / 2.0) as u64;
    (start.max(1)..).find(|&a| gcd(a, n) == 1).expect("1 is a unit")
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Everything except the walk length: the generator, its padded seed space
/// and the tuple at every vertex.
struct Pipeline {
    gen: StrongProductGenerator,
    base: PaddedBase,
    outputs: Vec<u32>,
    domain: usize,
}

fn pipeline(moduli: &[u32]) -> Result<Pipeline> {
    let domain = validate_moduli(moduli)?;
    let gen = StrongProductGenerator::new(StrongProductParams::default(), moduli)?;
    let base = padded_base(&gen);
    if base.r_bits > MAX_SEED_BITS {
        return Err(Error::Capacity(format!(
            "base seed space of {} bits exceeds {MAX_SEED_BITS}",
            base.r_bits
        )));
    }
    let cells = (base.size as u128) * domain as u128;
    if cells > DISTRIBUTION_CELL_LIMIT as u128 {
        return Err(Error::Capacity(format!(
            "cannot audit a construction over {moduli:?}: {} vertices x {domain} outcomes exceeds {DISTRIBUTION_CELL_LIMIT}",
            base.size
        )));
    }
    let n0 = gen.seed_count();
    let scramble = vertex_multiplier(base.size);
    let mut tuple = vec![0u32; moduli.len()];
    let mut outputs = Vec::with_capacity(base.size as usize);
    for v in 0..base.size {
        gen.sample(scramble * v % base.size % n0, &mut tuple)?;
        outputs.push(encode(moduli, &tuple) as u32);
    }
    Ok(Pipeline { gen, base, outputs, domain: domain as usize })
}

fn finish(moduli: &[u32], eps: f64, p: Pipeline, walk_length: u32, hist: Vec<u64>, bias: f64) -> ComplexSampleSpace {
    let q = if bias > 0.0 { -bias.log2() / walk_length as f64 } else { f64::INFINITY };
    let amp = AmplifierParams {
        expander: MggExpander::new(p.base.side).expect("side checked by seed-bit limit"),
        degree: DEGREE,
        walk_length,
        group_size: 1,
        p: strong_fraction_target(),
        q,
    };
    let histogram = OnceLock::new();
    let _ = histogram.set(hist);
    ComplexSampleSpace {
        moduli: moduli.to_vec(),
        eps,
        kind: Kind::Constructed(Box::new(Construction {
            gen: p.gen,
            amp,
            base_size: p.base.size,
            r_bits: p.base.r_bits,
            outputs: p.outputs,
            measured_bias: bias,
            histogram,
        })),
    }
}

/// A complex small-bias space over `moduli` with bias at most `epsilon`.
///
/// Domains of at most [`EXHAUSTIVE_FALLBACK_DOMAIN`] points get the uniform
/// space unless `force_construction` is set. Otherwise the walk length is
/// the smallest whose audited bias is at most `epsilon`; if none fits in
/// [`MAX_SEED_BITS`] the result is a capacity error.
pub fn build_complex_space(moduli: &[u32], epsilon: f64, force_construction: bool) -> Result<ComplexSampleSpace> {
    let domain = validate_moduli(moduli)?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if !force_construction && domain <= EXHAUSTIVE_FALLBACK_DOMAIN {
        return exhaustive_complex_space(moduli);
    }
    let p = pipeline(moduli)?;
    let mut dist = WalkDistribution::new(MggExpander::new(p.base.side)?, moduli, &p.outputs, p.domain);
    loop {
        let length = dist.length;
        let hist = dist.histogram();
        let bias = character_bias_from_histogram(&hist, moduli)?;
        if bias <= epsilon {
            drop(dist);
            return Ok(finish(moduli, epsilon, p, length, hist, bias));
        }
        let next_bits = support_for(p.base.size, length + 1).map(ceil_log2).unwrap_or(u32::MAX);
        if next_bits > MAX_SEED_BITS {
            let l = analytic_walk_length(epsilon)?;
            return Err(Error::Capacity(format!(
                "no walk within {MAX_SEED_BITS} seed bits reaches bias {epsilon} over {moduli:?} \
                 (best {bias:.4} at length {length}; the analytic length {l} needs {} bits)",
                p.base.r_bits as u64 + 4 * l - 3
            )));
        }
        dist.step();
    }
}

/// The construction with a fixed walk length; fails unless its audited bias
/// is at most `epsilon`.
pub fn complex_space_with_walk_length(moduli: &[u32], walk_length: u32, epsilon: f64) -> Result<ComplexSampleSpace> {
    validate_moduli(moduli)?;
    if walk_length == 0 {
        return Err(Error::InvalidArgument("walk length must be at least 1".into()));
    }
    let p = pipeline(moduli)?;
    let bits = support_for(p.base.size, walk_length).map(ceil_log2).unwrap_or(u32::MAX);
    if bits > MAX_SEED_BITS {
        return Err(Error::Capacity(format!("walk length {walk_length} needs {bits} seed bits")));
    }
    let mut dist = WalkDistribution::new(MggExpander::new(p.base.side)?, moduli, &p.outputs, p.domain);
    while dist.length < walk_length {
        dist.step();
    }
    let hist = dist.histogram();
    drop(dist);
    let bias = character_bias_from_histogram(&hist, moduli)?;
    if bias > epsilon {
        return Err(Error::Descriptor(format!(
            "walk length {walk_length} gives bias {bias}, above the declared {epsilon}"
        )));
    }
    Ok(finish(moduli, epsilon, p, walk_length, hist, bias))
}

/// The uniform distribution over the whole domain.
pub fn exhaustive_complex_space(moduli: &[u32]) -> Result<ComplexSampleSpace> {
    let domain = validate_moduli(moduli)?;
    if domain > MAX_EXHAUSTIVE_DOMAIN {
        return Err(Error::Capacity(format!("uniform space over {domain} points exceeds {MAX_EXHAUSTIVE_DOMAIN}")));
    }
    Ok(ComplexSampleSpace { moduli: moduli.to_vec(), eps: 0.0, kind: Kind::Exhaustive })
}

impl ComplexSampleSpace {
    /// Bias computed when the space was built; 0 for the uniform space.
    pub fn measured_bias(&self) -> f64 {
        match &self.kind {
            Kind::Exhaustive => 0.0,
            Kind::Constructed(c) => c.measured_bias,
        }
    }

    /// Walk length, or `None` for the uniform space.
    pub fn walk_length(&self) -> Option<u32> {
        match &self.kind {
            Kind::Exhaustive => None,
            Kind::Constructed(c) => Some(c.amp.walk_length),
        }
    }

    pub fn amplifier(&self) -> Option<&AmplifierParams> {
        match &self.kind {
            Kind::Exhaustive => None,
            Kind::Constructed(c) => Some(&c.amp),
        }
    }

    pub fn generator(&self) -> Option<&StrongProductGenerator> {
        match &self.kind {
            Kind::Exhaustive => None,
            Kind::Constructed(c) => Some(&c.gen),
        }
    }

    pub fn beta(&self) -> f64 {
        beta()
    }

    pub fn prime(&self) -> u64 {
        super::cwise::select_prime(self.moduli.len(), &self.moduli, StrongProductParams::default().c)
    }

    /// Seed bits of the padded strong-product space.
    pub fn base_seed_bits(&self) -> u32 {
        match &self.kind {
            Kind::Exhaustive => ceil_log2(self.support_size()),
            Kind::Constructed(c) => c.r_bits,
        }
    }

    pub(crate) fn from_descriptor(f: DescriptorFields) -> Result<Self> {
        if f.mults.len() != f.k || f.k == 0 {
            return Err(Error::Descriptor(format!("k={} but {} multiplicities", f.k, f.mults.len())));
        }
        if f.mults.contains(&0) {
            return Err(Error::Descriptor("multiplicities must be positive".into()));
        }
        let moduli: Vec<u32> = f.mults.iter().map(|&s| s + 1).collect();
        let c = StrongProductParams::default().c;
        if f.c != c {
            return Err(Error::Descriptor(format!("c must be {c}")));
        }
        let space = match f.mode.as_str() {
            "exhaustive" => {
                if f.eps != 0.0 || f.walk_length != 0 {
                    return Err(Error::Descriptor("the uniform space has l=0 eps=0".into()));
                }
                exhaustive_complex_space(&moduli)?
            }
            "constructed" => complex_space_with_walk_length(&moduli, f.walk_length, f.eps)?,
            other => return Err(Error::Descriptor(format!("unknown mode '{other}'"))),
        };
        if space.prime() != f.prime {
            return Err(Error::Descriptor(format!("p={} but the construction uses {}", f.prime, space.prime())));
        }
        if space.base_seed_bits() != f.r {
            return Err(Error::Descriptor(format!("r={} but the construction uses {}", f.r, space.base_seed_bits())));
        }
        Ok(space)
    }
}

impl SampleSpace for ComplexSampleSpace {
    fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    fn support_size(&self) -> u64 {
        match &self.kind {
            Kind::Exhaustive => self.moduli.iter().map(|&m| m as u64).product(),
            Kind::Constructed(c) => support_for(c.base_size, c.amp.walk_length).expect("checked at construction"),
        }
    }

    fn declared_epsilon(&self) -> f64 {
        self.eps
    }

    fn point(&self, seed: u64, out: &mut [u32]) -> Result<()> {
        if seed >= self.support_size() {
            return Err(Error::InvalidArgument(format!("seed {seed} out of range")));
        }
        if out.len() != self.moduli.len() {
            return Err(Error::Dimension(format!("output has {} slots, space has {}", out.len(), self.moduli.len())));
        }
        match &self.kind {
            Kind::Exhaustive => decode(&self.moduli, seed as usize, out),
            Kind::Constructed(c) => {
                let walks = c.amp.walk_count().expect("checked at construction");
                let (walk_seed, d) = (seed % walks, seed / walks);
                let walk = super::expander::amplify(&c.amp, c.base_size, walk_seed)?;
                out.iter_mut().for_each(|o| *o = 0);
                let mut f = vec![0u32; out.len()];
                for (j, v) in walk.into_iter().enumerate() {
                    if d >> j & 1 == 1 {
                        decode(&self.moduli, c.outputs[v as usize] as usize, &mut f);
                        for ((o, &fi), &m) in out.iter_mut().zip(&f).zip(&self.moduli) {
                            *o = (*o + fi) % m;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn descriptor(&self) -> String {
        let s: Vec<String> = self.moduli.iter().map(|m| (m - 1).to_string()).collect();
        let (l, mode) = match self.walk_length() {
            None => (0, "exhaustive"),
            Some(l) => (l, "constructed"),
        };
        format!(
            "complex k={} s={} p={} c={} r={} l={} eps={} mode={}",
            self.moduli.len(),
            s.join(","),
            self.prime(),
            StrongProductParams::default().c,
            self.base_seed_bits(),
            l,
            self.eps,
            mode
        )
    }

    fn is_exhaustive(&self) -> bool {
        matches!(self.kind, Kind::Exhaustive)
    }

    fn for_each_weighted(&self, f: &mut dyn FnMut(&[u32], u64)) -> Result<()> {
        let mut p = vec![0u32; self.moduli.len()];
        match &self.kind {
            Kind::Exhaustive => {
                for idx in 0..self.support_size() as usize {
                    decode(&self.moduli, idx, &mut p);
                    f(&p, 1);
                }
            }
            Kind::Constructed(_) => {
                for (idx, &w) in self.histogram()?.iter().enumerate() {
                    if w > 0 {
                        decode(&self.moduli, idx, &mut p);
                        f(&p, w);
                    }
                }
            }
        }
        Ok(())
    }

    fn histogram(&self) -> Result<Vec<u64>> {
        match &self.kind {
            Kind::Exhaustive => Ok(vec![1; self.support_size() as usize]),
            Kind::Constructed(c) => Ok(c
                .histogram
                .get_or_init(|| {
                    let domain = domain_size(&self.moduli).expect("validated") as usize;
                    let mut dist = WalkDistribution::new(c.amp.expander, &self.moduli, &c.outputs, domain);
                    while dist.length < c.amp.walk_length {
                        dist.step();
                    }
                    dist.histogram()
                })
                .clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smallbias::testing::brute_force_bias;
    use crate::smallbias::{measure_complex_bias, parse_descriptor};

    #[test]
    fn beta_identity() {
        let direct = 0.5 * (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, PI / 8.0)).norm();
        assert!((beta() - direct).abs() < 1e-15);
        assert!((beta() - (PI / 16.0).cos()).abs() < 1e-15);
        assert!((beta() - 0.98078).abs() < 1e-5);
    }

    #[test]
    fn analytic_length_meets_both_targets() {
        let p = strong_fraction_target();
        for eps in [0.5, 0.25, 0.1, 0.01] {
            let l = analytic_walk_length(eps).unwrap() as f64;
            assert!(beta().powf(p * l) <= eps / 2.0 * (1.0 + 1e-12));
            assert!(0.5f64.powf(p * l) <= eps / 2.0 * (1.0 + 1e-12));
            assert!(beta().powf(p * (l - 1.0)) > eps / 2.0);
        }
        // far beyond the seed-bit limit
        assert!(analytic_seed_bits(&[2, 2], 0.5).unwrap() > MAX_SEED_BITS as u64);
    }

    #[test]
    fn exhaustive_space_has_zero_bias() {
        for moduli in [vec![2u32, 3], vec![4, 4, 2], vec![3]] {
            let s = exhaustive_complex_space(&moduli).unwrap();
            assert!(measure_complex_bias(&s).unwrap() < 1e-12);
            assert!(s.is_exhaustive());
        }
        assert!(build_complex_space(&[2, 3], 0.1, false).unwrap().is_exhaustive());
        assert!(matches!(exhaustive_complex_space(&[1 << 13, 1 << 12]), Err(Error::Capacity(_))));
    }

    #[test]
    fn constructed_examples() {
        for (moduli, eps) in [(vec![2u32, 2], 0.5), (vec![3], 0.3)] {
            let s = build_complex_space(&moduli, eps, true).unwrap();
            assert!(!s.is_exhaustive());
            let bias = measure_complex_bias(&s).unwrap();
            assert!(bias <= eps, "{moduli:?}: {bias}");
            assert_eq!(bias, s.measured_bias());
            assert!(s.seed_bits() <= MAX_SEED_BITS);
        }
    }

    #[test]
    fn walk_length_is_minimal() {
        let s = build_complex_space(&[3], 0.3, true).unwrap();
        let l = s.walk_length().unwrap();
        if l > 1 {
            assert!(complex_space_with_walk_length(&[3], l - 1, 0.3).is_err());
        }
    }

    #[test]
    fn distribution_matches_seed_enumeration() {
        let s = complex_space_with_walk_length(&[2, 2], 2, 1.0).unwrap();
        let mut direct = vec![0u64; 4];
        let mut out = [0u32; 2];
        for seed in 0..s.support_size() {
            s.point(seed, &mut out).unwrap();
            direct[encode(&[2, 2], &out)] += 1;
        }
        assert_eq!(direct, s.histogram().unwrap());
        let bias = measure_complex_bias(&s).unwrap();
        assert!((bias - brute_force_bias(&s)).abs() < 1e-12);
    }

    #[test]
    fn unreachable_epsilon_is_a_capacity_error() {
        assert!(matches!(build_complex_space(&[2, 2], 1e-3, true), Err(Error::Capacity(_))));
        assert!(matches!(build_complex_space(&[4; 4], 0.5, true), Err(Error::Capacity(_))));
    }

    #[test]
    fn descriptor_roundtrip() {
        let s = build_complex_space(&[2, 2], 0.5, true).unwrap();
        let d = s.descriptor();
        assert!(d.starts_with("complex k=2 s=1,1 p=17 c=7 "), "{d}");
        assert!(d.ends_with("mode=constructed"));
        let parsed = parse_descriptor(&d).unwrap();
        assert_eq!(parsed.descriptor(), d);
        assert_eq!(parsed.histogram().unwrap(), s.histogram().unwrap());

        let e = exhaustive_complex_space(&[3, 2]).unwrap();
        assert_eq!(e.descriptor(), "complex k=2 s=2,1 p=17 c=7 r=3 l=0 eps=0 mode=exhaustive");
        assert_eq!(parse_descriptor(&e.descriptor()).unwrap().support_size(), 6);

        // a declared eps below the audited bias is rejected
        let tight = d.replace("eps=0.5", "eps=0.001");
        assert!(parse_descriptor(&tight).is_err());
        assert!(parse_descriptor(&d.replace("p=17", "p=19")).is_err());
        assert!(parse_descriptor(&d.replace("c=7", "c=3")).is_err());
        assert!(parse_descriptor(&d.replace("mode=constructed", "mode=other")).is_err());
    }
}
