//! Roots of unity indexed by integer phase.

use std::f64::consts::TAU;

use num_complex::Complex64;

/// `exp(2 pi i j / m)`. Multiples of a quarter turn are returned exactly.
pub fn unit_root(j: u64, m: u64) -> Complex64 {
    assert!(m > 0);
    let j = j % m;
    if (4 * j).is_multiple_of(m) {
        return match 4 * j / m {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let angle = TAU * j as f64 / m as f64;
    Complex64::new(angle.cos(), angle.sin())
}

/// All `m`-th roots of unity, `table[j] = exp(2 pi i j / m)`.
pub fn root_table(m: u32) -> Vec<Complex64> {
    (0..m as u64).map(|j| unit_root(j, m as u64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(unit_root(1, 2), Complex64::new(-1.0, 0.0));
        assert_eq!(unit_root(3, 4), Complex64::new(0.0, -1.0));
        assert_eq!(unit_root(6, 8), Complex64::new(0.0, -1.0));
        assert_eq!(unit_root(5, 5), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn character_orthogonality() {
        for m in 1..=12u64 {
            for e in 0..2 * m {
                let s: Complex64 = (0..m).map(|x| unit_root(e * x, m)).sum::<Complex64>() / m as f64;
                let expect = if e % m == 0 { 1.0 } else { 0.0 };
                assert!((s - expect).norm() < 1e-12, "m={m} e={e} got {s}");
            }
        }
    }
}
