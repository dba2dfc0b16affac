//! Small-bias spaces over `{0,1}^n` from powering in `GF(2^m)`.
//!
//! A seed is a pair `(r, s)` of field elements and coordinate `i` is the inner
//! product bit `<r, s^i>`. For a nonzero `a`, `sum a_i s^i` is a nonzero
//! polynomial in `s` of degree at most `n-1`, so it vanishes for at most `n-1`
//! values of `s`; otherwise the bit is unbiased over `r`. The bias is therefore
//! at most `(n-1)/2^m`.

use crate::error::{Error, Result};
use crate::smallbias::{SampleSpace, MAX_SEED_BITS};

/// Largest supported field degree.
pub const MAX_FIELD_BITS: u32 = 20;

/// Largest `n` for the uniform space.
pub const MAX_EXHAUSTIVE_BITS: usize = 24;

/// Irreducible polynomials over `GF(2)`, indexed by degree; bit `j` is the
/// coefficient of `X^j`.
pub const IRREDUCIBLE: [u32; 21] = [
    0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11B, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x402B, 0x8003,
    0x1002B, 0x20009, 0x40081, 0x80027, 0x100009,
];

/// Product in `GF(2)[X] / poly` for a degree-`m` modulus.
pub fn gf_mul(mut a: u32, mut b: u32, m: u32, poly: u32) -> u32 {
    let top = 1u32 << m;
    let mut acc = 0u32;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= poly;
        }
    }
    acc
}

fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

fn poly_mod(mut a: u64, b: u64) -> u64 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Irreducibility over `GF(2)` by trial division with every polynomial of
/// degree `1..=deg/2`.
pub fn is_irreducible(poly: u32) -> bool {
    let p = poly as u64;
    if p < 2 {
        return false;
    }
    let d = degree(p);
    (2u64..1 << (d / 2 + 1)).all(|q| poly_mod(p, q) != 0)
}

/// `binary n=.. m=.. poly=.. eps=..`; `m = 0` is the uniform space.
#[derive(Debug, Clone, PartialEq)]
pub struct BinarySpace {
    n: usize,
    m: u32,
    poly: u32,
    eps: f64,
    moduli: Vec<u32>,
}

impl BinarySpace {
    /// Validates a descriptor's fields, including the bias guarantee.
    pub fn from_parts(n: usize, m: u32, poly: u32, eps: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Descriptor("n must be at least 1".into()));
        }
        if m == 0 {
            if poly != 0 || eps != 0.0 {
                return Err(Error::Descriptor("the uniform space has poly=0 eps=0".into()));
            }
            return exhaustive_binary_space(n);
        }
        if m > MAX_FIELD_BITS {
            return Err(Error::Descriptor(format!("field degree {m} exceeds {MAX_FIELD_BITS}")));
        }
        if degree(poly as u64) != m as i32 || !is_irreducible(poly) {
            return Err(Error::Descriptor(format!("poly {poly:#x} is not an irreducible of degree {m}")));
        }
        if !(eps > 0.0 && eps < 1.0) || analytic_bias(n, m) > eps {
            return Err(Error::Descriptor(format!("eps={eps} is not guaranteed by n={n} m={m}")));
        }
        Ok(BinarySpace { n, m, poly, eps, moduli: vec![2; n] })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Field degree; 0 for the uniform space.
    pub fn field_bits(&self) -> u32 {
        self.m
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }
}

fn analytic_bias(n: usize, m: u32) -> f64 {
    (n - 1) as f64 / (1u64 << m) as f64
}

/// The powering space with `m = ceil(log2(n / eps))`, whose bias is at most
/// `(n-1)/2^m < eps`, using `2m` seed bits.
pub fn build_binary_space(n: usize, epsilon: f64) -> Result<BinarySpace> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let m = (n as f64 / epsilon).log2().ceil().max(1.0);
    if m > MAX_FIELD_BITS as f64 {
        return Err(Error::Capacity(format!(
            "n={n}, eps={epsilon} needs {} seed bits, limit is {MAX_SEED_BITS}",
            2.0 * m
        )));
    }
    let m = m as u32;
    Ok(BinarySpace { n, m, poly: IRREDUCIBLE[m as usize], eps: epsilon, moduli: vec![2; n] })
}

/// The uniform distribution over `{0,1}^n`: `n` seed bits, bias 0.
pub fn exhaustive_binary_space(n: usize) -> Result<BinarySpace> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if n > MAX_EXHAUSTIVE_BITS {
        return Err(Error::Capacity(format!("uniform space over {n} bits exceeds {MAX_EXHAUSTIVE_BITS}")));
    }
    Ok(BinarySpace { n, m: 0, poly: 0, eps: 0.0, moduli: vec![2; n] })
}

impl SampleSpace for BinarySpace {
    fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    fn support_size(&self) -> u64 {
        if self.m == 0 {
            1 << self.n
        } else {
            1 << (2 * self.m)
        }
    }

    fn declared_epsilon(&self) -> f64 {
        self.eps
    }

    fn seed_bits(&self) -> u32 {
        if self.m == 0 {
            self.n as u32
        } else {
            2 * self.m
        }
    }

    fn point(&self, seed: u64, out: &mut [u32]) -> Result<()> {
        if seed >= self.support_size() {
            return Err(Error::InvalidArgument(format!("seed {seed} out of range")));
        }
        if out.len() != self.n {
            return Err(Error::Dimension(format!("output has {} slots, space has {}", out.len(), self.n)));
        }
        if self.m == 0 {
            for (i, o) in out.iter_mut().enumerate() {
                *o = (seed >> i & 1) as u32;
            }
            return Ok(());
        }
        let mask = (1u64 << self.m) - 1;
        let r = (seed & mask) as u32;
        let s = (seed >> self.m) as u32;
        let mut power = 1u32;
        for o in out.iter_mut() {
            *o = (r & power).count_ones() & 1;
            power = gf_mul(power, s, self.m, self.poly);
        }
        Ok(())
    }

    fn descriptor(&self) -> String {
        format!("binary n={} m={} poly={:x} eps={}", self.n, self.m, self.poly, self.eps)
    }

    fn is_exhaustive(&self) -> bool {
        self.m == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smallbias::testing::brute_force_bias;
    use crate::smallbias::{measure_bias, parse_descriptor};

    #[test]
    fn table_polynomials_are_irreducible() {
        for (m, &p) in IRREDUCIBLE.iter().enumerate().skip(1) {
            assert_eq!(degree(p as u64), m as i32);
            assert!(is_irreducible(p), "degree {m}: {p:#x}");
        }
        assert!(!is_irreducible(0x5)); // (X+1)^2
        assert!(!is_irreducible(0x11)); // (X^2+X+1)^2
    }

    #[test]
    fn field_multiplication_has_inverses() {
        for m in [3u32, 5, 8] {
            let poly = IRREDUCIBLE[m as usize];
            for a in 1..1u32 << m {
                assert!((1..1u32 << m).any(|b| gf_mul(a, b, m, poly) == 1), "m={m} a={a}");
            }
        }
        // X * X^7 = X^8 = X^4 + X^3 + X + 1 modulo 0x11B
        assert_eq!(gf_mul(0x2, 0x80, 8, 0x11B), 0x1B);
    }

    #[test]
    fn spec_examples() {
        let s = build_binary_space(4, 0.5).unwrap();
        assert!(measure_bias(&s).unwrap() <= 0.5);
        let s = build_binary_space(1, 0.3).unwrap();
        assert_eq!(measure_bias(&s).unwrap(), 0.0);
        let s = build_binary_space(10, 0.1).unwrap();
        assert!(measure_bias(&s).unwrap() <= 0.1);
        assert!(s.support_size() <= 1 << 20);
        let s = build_binary_space(8, 0.25).unwrap();
        assert!(measure_bias(&s).unwrap() <= 0.25);
    }

    #[test]
    fn uniform_space_audits_to_zero() {
        for n in 1..=12 {
            let s = exhaustive_binary_space(n).unwrap();
            assert!(measure_bias(&s).unwrap() < 1e-12);
            assert_eq!(s.seed_bits(), n as u32);
        }
        assert!(matches!(exhaustive_binary_space(25), Err(Error::Capacity(_))));
    }

    #[test]
    fn audit_matches_brute_force() {
        for (n, eps) in [(3, 0.5), (5, 0.4), (6, 0.3)] {
            let s = build_binary_space(n, eps).unwrap();
            assert!((measure_bias(&s).unwrap() - brute_force_bias(&s)).abs() < 1e-12);
        }
    }

    #[test]
    fn bias_respects_declared_epsilon_on_a_grid() {
        for n in [2usize, 5, 9, 14] {
            for eps in [0.5, 0.3, 0.2, 0.1] {
                let s = build_binary_space(n, eps).unwrap();
                let bias = measure_bias(&s).unwrap();
                assert!(bias <= eps, "n={n} eps={eps} bias={bias}");
                assert!(bias <= analytic_bias(n, s.field_bits()) + 1e-15);
            }
        }
    }

    #[test]
    fn capacity_and_argument_errors() {
        assert!(matches!(build_binary_space(1000, 1e-4), Err(Error::Capacity(_))));
        assert!(build_binary_space(0, 0.5).is_err());
        assert!(build_binary_space(3, 1.0).is_err());
        let s = build_binary_space(4, 0.5).unwrap();
        let mut out = [0u32; 4];
        assert!(s.point(s.support_size(), &mut out).is_err());
    }

    #[test]
    fn descriptor_roundtrip_and_validation() {
        for s in [build_binary_space(10, 0.1).unwrap(), exhaustive_binary_space(6).unwrap()] {
            let parsed = parse_descriptor(&s.descriptor()).unwrap();
            assert_eq!(parsed.descriptor(), s.descriptor());
            let mut a = vec![0u32; s.n()];
            let mut b = vec![0u32; s.n()];
            for seed in (0..s.support_size()).step_by(97) {
                s.point(seed, &mut a).unwrap();
                parsed.point(seed, &mut b).unwrap();
                assert_eq!(a, b);
            }
        }
        assert_eq!(exhaustive_binary_space(6).unwrap().descriptor(), "binary n=6 m=0 poly=0 eps=0");
        // reducible modulus
        assert!(parse_descriptor("binary n=4 m=2 poly=5 eps=0.9").is_err());
        // eps smaller than the guarantee
        assert!(parse_descriptor("binary n=10 m=4 poly=13 eps=0.1").is_err());
        // any irreducible of the right degree is accepted
        assert!(parse_descriptor("binary n=4 m=3 poly=d eps=0.5").is_ok());
    }
}
