use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::RecoveryError;

/// Step-1 vertex list, generated on demand so huge sets never materialize.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexSet {
    /// All of `{−1, 1}^d`, in binary counting order starting at `(−1, …, −1)`.
    Exhaustive { d: usize },
    /// `count` i.i.d. uniform sign vectors; duplicates are kept.
    Random { d: usize, count: u128, seed: u64 },
}

/// Full vertex set when `n_v ≥ 2^d`, otherwise `n_v` seeded random draws.
pub fn build_vertex_set(d: usize, n_v: u128, seed: u64) -> Result<VertexSet, RecoveryError> {
    if n_v == 0 || d == 0 {
        return Err(RecoveryError::InvalidParameter(format!("vertex set with d = {d}, n_v = {n_v}")));
    }
    if d < 128 && n_v >= 1u128 << d {
        return Ok(VertexSet::Exhaustive { d });
    }
    Ok(VertexSet::Random { d, count: n_v, seed })
}

/// Exhaustive set, failing when `2^d` does not fit the count type.
pub fn exhaustive_vertex_set(d: usize) -> Result<VertexSet, RecoveryError> {
    if d >= 128 {
        return Err(RecoveryError::VertexCountOverflow { d, s: d });
    }
    Ok(VertexSet::Exhaustive { d })
}

impl VertexSet {
    pub fn dim(&self) -> usize {
        match *self {
            Self::Exhaustive { d } | Self::Random { d, .. } => d,
        }
    }

    pub fn len(&self) -> u128 {
        match *self {
            Self::Exhaustive { d } => 1u128 << d,
            Self::Random { count, .. } => count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> VertexIter {
        let rng = match *self {
            Self::Random { seed, .. } => Some(ChaCha8Rng::seed_from_u64(seed)),
            Self::Exhaustive { .. } => None,
        };
        VertexIter { set: self.clone(), next: 0, rng }
    }

    /// Materializes the set; intended for small sets.
    pub fn to_vec(&self) -> Vec<Vec<f64>> {
        self.iter().collect()
    }
}

pub struct VertexIter {
    set: VertexSet,
    next: u128,
    rng: Option<ChaCha8Rng>,
}

impl Iterator for VertexIter {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        if self.next >= self.set.len() {
            return None;
        }
        let i = self.next;
        self.next += 1;
        let d = self.set.dim();
        Some(match self.rng.as_mut() {
            None => (0..d).map(|k| if (i >> k) & 1 == 1 { 1.0 } else { -1.0 }).collect(),
            Some(rng) => (0..d).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect(),
        })
    }
}
