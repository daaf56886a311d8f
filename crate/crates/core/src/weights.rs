//! Simplex-lattice weight vectors and their neighborhoods.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::SeedPath;

/// Lattices larger than this are refused.
pub const MAX_LATTICE_SIZE: u128 = 5_000_000;

/// A point `h / H` of the simplex lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    values: Vec<f64>,
}

impl WeightVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn distance(&self, other: &WeightVector) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSet {
    m: usize,
    h: usize,
    vectors: Vec<WeightVector>,
    /// Integer lattice coordinates, used for exact distance comparisons.
    counts: Vec<Vec<u32>>,
}

impl WeightSet {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[WeightVector] {
        &self.vectors
    }

    fn int_distance2(&self, a: usize, b: usize) -> u64 {
        self.counts[a]
            .iter()
            .zip(&self.counts[b])
            .map(|(x, y)| {
                let d = *x as i64 - *y as i64;
                (d * d) as u64
            })
            .sum()
    }
}

/// `C(h + m - 1, m - 1)`, saturating.
pub fn lattice_size(m: usize, h: usize) -> u128 {
    let (n, k) = ((h + m - 1) as u128, (m - 1).min(h) as u128);
    let mut c: u128 = 1;
    for i in 0..k {
        c = match c.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    c
}

fn compositions(m: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() + 1 == m {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=total {
        prefix.push(first);
        compositions(m, total - first, prefix, out);
        prefix.pop();
    }
}

/// All vectors `(h_1/H, ..., h_m/H)` with `sum h_i = H`, in lexicographic
/// order.
pub fn simplex_lattice(m: usize, h: usize) -> Result<WeightSet> {
    if m < 2 {
        return Err(Error::domain("a weight lattice needs m >= 2"));
    }
    if h < 1 {
        return Err(Error::domain("lattice granularity H must be at least 1"));
    }
    let size = lattice_size(m, h);
    if size > MAX_LATTICE_SIZE {
        return Err(Error::capacity(format!(
            "lattice with m={m}, H={h} has {size} vectors (limit {MAX_LATTICE_SIZE})"
        )));
    }
    let mut counts = Vec::with_capacity(size as usize);
    compositions(m, h as u32, &mut Vec::with_capacity(m), &mut counts);
    let vectors = counts
        .iter()
        .map(|c| WeightVector {
            values: c.iter().map(|&v| v as f64 / h as f64).collect(),
        })
        .collect();
    Ok(WeightSet { m, h, vectors, counts })
}

/// Smallest `H` whose lattice has at least `min_count` vectors.
pub fn smallest_h(m: usize, min_count: u64) -> Result<usize> {
    if m < 2 {
        return Err(Error::domain("a weight lattice needs m >= 2"));
    }
    if min_count < 1 {
        return Err(Error::domain("min_count must be at least 1"));
    }
    let mut h = 1;
    while lattice_size(m, h) < min_count as u128 {
        h += 1;
    }
    Ok(h)
}

/// Number of vectors in a `t`-fraction neighborhood of a set of `mu`.
pub fn neighborhood_size(mu: usize, t: f64) -> Result<usize> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::domain(format!("neighborhood fraction {t} is outside (0, 1]")));
    }
    // the epsilon keeps products like 0.1 * 100 from rounding up to 11
    Ok(((t * mu as f64 - 1e-9).ceil() as usize).clamp(1, mu))
}

/// Indices of the `ceil(t * mu)` vectors closest to `vectors[index]`, the
/// anchor itself first. Ties go to the lexicographically smaller vector.
pub fn neighborhood(set: &WeightSet, index: usize, t: f64) -> Result<Vec<usize>> {
    if index >= set.len() {
        return Err(Error::Index { index, len: set.len() });
    }
    let size = neighborhood_size(set.len(), t)?;
    let mut order: Vec<(u64, usize)> = (0..set.len()).map(|j| (set.int_distance2(index, j), j)).collect();
    if size < order.len() {
        order.select_nth_unstable(size - 1);
        order.truncate(size);
    }
    order.sort_unstable();
    Ok(order.into_iter().map(|(_, j)| j).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceSummary {
    pub mean: f64,
    /// 95% normal-approximation half-width.
    pub half_width: f64,
    pub pairs: usize,
}

/// Mean Euclidean distance between a random anchor and a random other member
/// of its `t`-neighborhood.
pub fn mean_neighbor_distance(set: &WeightSet, t: f64, pairs: usize, seed: u64) -> Result<DistanceSummary> {
    if pairs < 1 {
        return Err(Error::domain("need at least one pair"));
    }
    let size = neighborhood_size(set.len(), t)?;
    if size <= 1 {
        return Err(Error::domain(format!(
            "a {t} neighborhood of {} vectors holds only the anchor",
            set.len()
        )));
    }
    let mut rng = SeedPath::root(seed).label("weight-pairs").rng();
    let mut cache: Vec<Option<Vec<usize>>> = vec![None; set.len()];
    let mut dists = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let anchor = rng.random_range(0..set.len());
        if cache[anchor].is_none() {
            cache[anchor] = Some(neighborhood(set, anchor, t)?);
        }
        let hood = cache[anchor].as_ref().expect("cached");
        // position 0 is the anchor
        let other = hood[rng.random_range(1..hood.len())];
        dists.push(set.vectors[anchor].distance(&set.vectors[other]));
    }
    let n = pairs as f64;
    let mean = dists.iter().sum::<f64>() / n;
    let half_width = if pairs > 1 {
        let var = dists.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1.0);
        1.959_963_984_540_054 * (var / n).sqrt()
    } else {
        0.0
    };
    Ok(DistanceSummary { mean, half_width, pairs })
}
