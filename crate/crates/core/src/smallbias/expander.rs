//! Walks on the 8-regular Margulis-Gabber-Galil expander over `Z_M x Z_M`.
//!
//! Vertex `(x, y)` is stored as `x + M y`. Its neighbours are
//! `(x ± 2y, y)`, `(x ± (2y+1), y)`, `(x, y ± 2x)`, `(x, y ± (2x+1))`.
//! A walk seed encodes a start vertex and one of 8 edges per step.

use crate::error::{Error, Result};

pub const DEGREE: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MggExpander {
    side: u64,
}

impl MggExpander {
    pub fn new(side: u64) -> Result<Self> {
        if side == 0 || side > 1 << 20 {
            return Err(Error::InvalidArgument(format!("expander side {side} out of range")));
        }
        Ok(MggExpander { side })
    }

    pub fn side(&self) -> u64 {
        self.side
    }

    pub fn vertex_count(&self) -> u64 {
        self.side * self.side
    }

    pub fn neighbor(&self, v: u64, edge: u64) -> u64 {
        let m = self.side;
        let (x, y) = (v % m, v / m);
        let (ty, tx) = (2 * y % m, 2 * x % m);
        let (nx, ny) = match edge {
            0 => ((x + ty) % m, y),
            1 => ((x + m - ty) % m, y),
            2 => ((x + ty + 1) % m, y),
            3 => ((x + 2 * m - ty - 1) % m, y),
            4 => (x, (y + tx) % m),
            5 => (x, (y + m - tx) % m),
            6 => (x, (y + tx + 1) % m),
            7 => (x, (y + 2 * m - tx - 1) % m),
            _ => panic!("edge label {edge} out of range"),
        };
        nx + m * ny
    }

    pub fn neighbors(&self, v: u64) -> [u64; 8] {
        std::array::from_fn(|e| self.neighbor(v, e as u64))
    }
}

/// A walk of `walk_length` vertices over the seed space of a base generator,
/// with `group_size` base samples per vertex. `p` and `q` are the strong
/// fraction and decay rate of the amplified construction.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplifierParams {
    pub expander: MggExpander,
    pub degree: u64,
    pub walk_length: u32,
    pub group_size: u32,
    pub p: f64,
    pub q: f64,
}

impl AmplifierParams {
    /// `M^2 * 8^(L-1)`, or `None` on overflow.
    pub fn walk_count(&self) -> Option<u64> {
        (1..self.walk_length).try_fold(self.expander.vertex_count(), |acc, _| acc.checked_mul(DEGREE))
    }
}

/// Vertices visited by walk `walk_seed` over a base space of `base_size`
/// seeds: `walk_seed = start + M^2 * (edge_1 + 8 edge_2 + ...)`.
pub fn amplify(params: &AmplifierParams, base_size: u64, walk_seed: u64) -> Result<Vec<u64>> {
    if params.expander.vertex_count() != base_size {
        return Err(Error::Dimension(format!(
            "expander has {} vertices, base space has {base_size} seeds",
            params.expander.vertex_count()
        )));
    }
    if params.walk_length == 0 {
        return Err(Error::InvalidArgument("walk length must be at least 1".into()));
    }
    let count = params.walk_count().ok_or_else(|| Error::Capacity("walk seed space overflows".into()))?;
    if walk_seed >= count {
        return Err(Error::InvalidArgument(format!("walk seed {walk_seed} out of range for {count}")));
    }
    let mut v = walk_seed % base_size;
    let mut steps = walk_seed / base_size;
    let mut walk = Vec::with_capacity(params.walk_length as usize);
    walk.push(v);
    for _ in 1..params.walk_length {
        v = params.expander.neighbor(v, steps % DEGREE);
        steps /= DEGREE;
        walk.push(v);
    }
    Ok(walk)
}

/// Exact probability, over all walks of `walk_length` vertices, that fewer than
/// `threshold` vertices lie in `target`. Dynamic programming over
/// `(vertex, hits)`.
pub fn walk_failure_probability(g: &MggExpander, walk_length: u32, target: &[bool], threshold: u32) -> Result<f64> {
    let n = g.vertex_count() as usize;
    if target.len() != n {
        return Err(Error::Dimension(format!("target has {} entries, expander has {n} vertices", target.len())));
    }
    if walk_length == 0 {
        return Err(Error::InvalidArgument("walk length must be at least 1".into()));
    }
    let cap = threshold as usize;
    if cap == 0 {
        return Ok(0.0);
    }
    // prob[v * cap + h]: mass at v with h < cap hits so far; reaching cap drops it.
    let mut prob = vec![0.0f64; n * cap];
    for v in 0..n {
        let h = target[v] as usize;
        if h < cap {
            prob[v * cap + h] = 1.0 / n as f64;
        }
    }
    let mut next = vec![0.0f64; n * cap];
    for _ in 1..walk_length {
        next.iter_mut().for_each(|x| *x = 0.0);
        for v in 0..n {
            for w in g.neighbors(v as u64) {
                let w = w as usize;
                let add = target[w] as usize;
                for h in 0..cap - add {
                    next[w * cap + h + add] += prob[v * cap + h] / DEGREE as f64;
                }
            }
        }
        std::mem::swap(&mut prob, &mut next);
    }
    Ok(prob.iter().sum())
}
