//! Dense complex matrices, the plain-text matrix format, column-multiplicity
//! expansion and the spectral norm.
//!
//! File format: the first non-comment line is `rows cols`; each following line
//! holds one row as `2*cols` whitespace-separated decimals alternating real and
//! imaginary parts. Lines starting with `#` and blank lines are skipped.

use std::fmt::Write as _;
use std::io::Read;

use num_complex::Complex64;

use crate::error::{Error, ParseErrorKind, Result};

/// Row-major dense matrix of finite complex doubles.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "entry ({}, {}) is not finite",
                pos / cols.max(1),
                pos % cols.max(1)
            )));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Builds a matrix from real entries given row-major.
    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(rows, cols, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Column `j` as an owned vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ComplexMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * c).collect() }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(l, j);
                }
            }
        }
        Ok(out)
    }

    /// Reorders rows so that row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(perm[i], j))
    }

    /// Reorders columns so that column `j` of the result is column `perm[j]`.
    pub fn permute_cols(&self, perm: &[usize]) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, perm[j]))
    }

    /// True when every entry has zero imaginary part and nonnegative real part.
    pub fn is_nonnegative_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0 && z.re >= 0.0)
    }

    /// Fails with a domain error naming the first entry that is negative or
    /// has a nonzero imaginary part.
    pub fn require_nonnegative_real(&self) -> Result<()> {
        match self.data.iter().position(|z| !(z.im == 0.0 && z.re >= 0.0)) {
            None => Ok(()),
            Some(pos) => Err(Error::Domain(format!(
                "entry ({}, {}) = {} is not a nonnegative real",
                pos / self.cols,
                pos % self.cols,
                self.data[pos]
            ))),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Spectral norm with the default tolerance and iteration budget.
    pub fn norm(&self) -> Result<f64> {
        spectral_norm(self, DEFAULT_NORM_TOL, DEFAULT_NORM_MAX_ITER).map(|r| r.value)
    }

    /// Serializes in the plain-text format with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let mut first = true;
            for z in self.row(i) {
                for v in [z.re, z.im] {
                    if !first {
                        out.push(' ');
                    }
                    first = false;
                    write!(out, "{v:.16e}").unwrap();
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn read_from(mut reader: impl Read) -> Result<Self> {
        let mut bytes = Vec::new();
        reader
            .read_to_end(&mut bytes)
            .map_err(|e| Error::InvalidArgument(format!("cannot read matrix: {e}")))?;
        let text = String::from_utf8_lossy(&bytes);
        parse_matrix(&text)
    }
}

impl std::str::FromStr for ComplexMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_matrix(s)
    }
}

fn parse_value(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| Error::parse(line, ParseErrorKind::NonNumeric(tok.to_string())))?;
    if !v.is_finite() {
        return Err(Error::parse(line, ParseErrorKind::NonFinite(tok.to_string())));
    }
    Ok(v)
}

/// Parses the plain-text matrix format. Line numbers in errors are 1-based
/// and count every physical line, comments included.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(Error::parse(1, ParseErrorKind::Empty))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(Error::parse(header_line, ParseErrorKind::BadHeader));
    }
    let parse_dim = |tok: &str| {
        tok.parse::<usize>()
            .map_err(|_| Error::parse(header_line, ParseErrorKind::NonNumeric(tok.to_string())))
    };
    let rows = parse_dim(dims[0])?;
    let cols = parse_dim(dims[1])?;

    let mut data = Vec::with_capacity(rows * cols);
    let mut last_line = header_line;
    for row in 0..rows {
        let Some((line_no, line)) = lines.next() else {
            return Err(Error::parse(last_line + 1, ParseErrorKind::MissingRow { row: row + 1 }));
        };
        last_line = line_no;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 * cols {
            return Err(Error::parse(
                line_no,
                ParseErrorKind::RowLength { expected: 2 * cols, found: toks.len() },
            ));
        }
        for pair in toks.chunks(2) {
            let re = parse_value(pair[0], line_no)?;
            let im = parse_value(pair[1], line_no)?;
            data.push(Complex64::new(re, im));
        }
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(Error::parse(line_no, ParseErrorKind::ExtraRow));
    }
    ComplexMatrix::new(rows, cols, data)
}

/// An `n x k` base matrix together with column multiplicities `s_1..s_k`
/// summing to `n`. It stands for the `n x n` matrix in which column `i` of
/// the base appears `s_i` times.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicitySpec {
    base: ComplexMatrix,
    mults: Vec<usize>,
}

impl MultiplicitySpec {
    pub fn new(base: ComplexMatrix, mults: Vec<usize>) -> Result<Self> {
        if mults.len() != base.cols() {
            return Err(Error::Dimension(format!(
                "{} multiplicities for a matrix with {} columns",
                mults.len(),
                base.cols()
            )));
        }
        if mults.contains(&0) {
            return Err(Error::InvalidArgument("every multiplicity must be at least 1".into()));
        }
        let total: usize = mults.iter().sum();
        if total != base.rows() {
            return Err(Error::Dimension(format!(
                "multiplicities sum to {total} but the matrix has {} rows",
                base.rows()
            )));
        }
        Ok(MultiplicitySpec { base, mults })
    }

    /// The trivial spec: every column used once.
    pub fn trivial(a: ComplexMatrix) -> Result<Self> {
        let k = a.cols();
        Self::new(a, vec![1; k])
    }

    pub fn base(&self) -> &ComplexMatrix {
        &self.base
    }

    pub fn mults(&self) -> &[usize] {
        &self.mults
    }

    pub fn n(&self) -> usize {
        self.base.rows()
    }

    pub fn k(&self) -> usize {
        self.base.cols()
    }

    /// Cyclic group orders `s_i + 1` of the roots-of-unity sample domain.
    pub fn moduli(&self) -> Vec<u32> {
        self.mults.iter().map(|&s| s as u32 + 1).collect()
    }

    /// The `n x n` matrix with column `i` of the base repeated `s_i` times.
    pub fn expand(&self) -> ComplexMatrix {
        let col_of: Vec<usize> = self
            .mults
            .iter()
            .enumerate()
            .flat_map(|(i, &s)| std::iter::repeat_n(i, s))
            .collect();
        ComplexMatrix::from_fn(self.n(), self.n(), |i, j| self.base.get(i, col_of[j]))
    }
}

pub const DEFAULT_NORM_TOL: f64 = 1e-10;
pub const DEFAULT_NORM_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralNormResult {
    pub value: f64,
    pub iterations: usize,
    pub residual: f64,
}

// Deterministic start vector. Entries follow the golden-ratio sequence so the
// vector is never orthogonal to a structured top singular vector the way the
// all-ones vector can be.
fn start_vector(n: usize) -> Vec<Complex64> {
    const PHI: f64 = 0.618_033_988_749_894_9;
    let v: Vec<Complex64> = (0..n)
        .map(|j| Complex64::new(1.0 + ((j + 1) as f64 * PHI).fract(), 0.0))
        .collect();
    normalize(v)
}

fn normalize(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|z| *z /= norm);
    }
    v
}

/// Largest singular value by power iteration on `A^H A`.
///
/// Converges when the relative eigen-residual `|A^H A v - lambda v| / lambda`
/// drops to `tol`; the reported residual is that quantity.
pub fn spectral_norm(a: &ComplexMatrix, tol: f64, max_iter: usize) -> Result<SpectralNormResult> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::InvalidArgument("spectral norm of an empty matrix".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if a.entries().iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return Ok(SpectralNormResult { value: 0.0, iterations: 0, residual: 0.0 });
    }
    let (m, n) = (a.rows(), a.cols());
    let mut v = start_vector(n);
    let mut av = vec![Complex64::new(0.0, 0.0); m];
    let mut best = 0.0f64;
    let mut residual = f64::INFINITY;
    for iter in 1..=max_iter {
        for (i, out) in av.iter_mut().enumerate() {
            *out = a.row(i).iter().zip(&v).map(|(x, y)| x * y).sum();
        }
        let mut z = vec![Complex64::new(0.0, 0.0); n];
        for (i, w) in av.iter().enumerate() {
            for (zj, aij) in z.iter_mut().zip(a.row(i)) {
                *zj += aij.conj() * w;
            }
        }
        let lambda: f64 = av.iter().map(|w| w.norm_sqr()).sum();
        best = best.max(lambda.sqrt());
        if lambda == 0.0 {
            // Start vector landed in the null space of a nonzero matrix;
            // perturb deterministically and continue.
            v = normalize((0..n).map(|j| Complex64::new(1.0, j as f64)).collect());
            continue;
        }
        residual = z
            .iter()
            .zip(&v)
            .map(|(zj, vj)| (zj - vj * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt()
            / lambda;
        if residual <= tol {
            return Ok(SpectralNormResult { value: lambda.sqrt(), iterations: iter, residual });
        }
        v = normalize(z);
    }
    Err(Error::NoConvergence { iterations: max_iter, best, residual })
}
