//! Exact hypervolume by recursive dimension sweep.
//!
//! Points are swept in decreasing order of their last objective; each slab
//! between consecutive values contributes its height times the
//! (d-1)-dimensional hypervolume of the points that reach it. The three
//! dimensional case uses an incremental staircase so the recursion bottoms
//! out in `O(n log n)`.

use std::collections::BTreeMap;

use ordered_float::OrderedFloat;

use crate::dominance::covers;

/// Hypervolume of `points` (all weakly dominating `r`) over the first `d`
/// coordinates.
pub(crate) fn volume(points: &[&[f64]], r: &[f64], d: usize) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    match d {
        1 => points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max) - r[0],
        2 => volume2(points, r),
        3 => volume3(points, r),
        _ => volume_limit(points, r, d),
    }
}

fn volume2(points: &[&[f64]], r: &[f64]) -> f64 {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| b[0].total_cmp(&a[0]));
    let mut reach = r[1];
    let mut area = 0.0;
    for p in sorted {
        if p[1] > reach {
            area += (p[0] - r[0]) * (p[1] - reach);
            reach = p[1];
        }
    }
    area
}

/// Two-dimensional staircase keyed by the first coordinate; second
/// coordinates decrease as keys increase.
struct Staircase {
    steps: BTreeMap<OrderedFloat<f64>, f64>,
    rx: f64,
    ry: f64,
    area: f64,
}

impl Staircase {
    fn new(rx: f64, ry: f64) -> Self {
        Staircase {
            steps: BTreeMap::new(),
            rx,
            ry,
            area: 0.0,
        }
    }

    fn insert(&mut self, x: f64, y: f64) {
        let key = OrderedFloat(x);
        // height of the staircase just left of x
        let base = match self.steps.range(key..).next() {
            Some((_, &sy)) if sy >= y => return,
            Some((_, &sy)) => sy,
            None => self.ry,
        };
        self.steps.remove(&key);
        let mut right = x;
        let mut base = base;
        let mut added = 0.0;
        loop {
            let pred = self.steps.range(..key).next_back().map(|(k, v)| (*k, *v));
            match pred {
                Some((qx, qy)) => {
                    added += (right - qx.0) * (y - base);
                    if qy > y {
                        break;
                    }
                    self.steps.remove(&qx);
                    right = qx.0;
                    base = qy;
                }
                None => {
                    added += (right - self.rx) * (y - base);
                    break;
                }
            }
        }
        self.steps.insert(key, y);
        self.area += added;
    }
}

fn volume3(points: &[&[f64]], r: &[f64]) -> f64 {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| b[2].total_cmp(&a[2]));
    let mut stairs = Staircase::new(r[0], r[1]);
    let mut total = 0.0;
    for (i, p) in sorted.iter().enumerate() {
        stairs.insert(p[0], p[1]);
        let next = sorted.get(i + 1).map_or(r[2], |q| q[2]);
        let h = p[2] - next;
        if h > 0.0 {
            total += stairs.area * h;
        }
    }
    total
}

/// Sums exclusive slabs: after sorting on the last objective, point `i` adds
/// its own box minus the part already covered by the points before it. Those
/// points, clipped to `i`'s box, all share its last coordinate, so the
/// covered part is a (d-1)-dimensional volume times a height.
fn volume_limit(points: &[&[f64]], r: &[f64], d: usize) -> f64 {
    let last = d - 1;
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| b[last].total_cmp(&a[last]));
    let mut total = 0.0;
    let mut clipped: Vec<Vec<f64>> = Vec::with_capacity(sorted.len());
    for (i, p) in sorted.iter().enumerate() {
        let h = p[last] - r[last];
        if h <= 0.0 {
            break;
        }
        clipped.clear();
        clipped.extend(
            sorted[..i]
                .iter()
                .map(|q| q[..last].iter().zip(&p[..last]).map(|(a, b)| a.min(*b)).collect::<Vec<f64>>()),
        );
        let refs: Vec<&[f64]> = clipped.iter().map(Vec::as_slice).collect();
        let shadow = reduce(&refs);
        let own: f64 = p[..last].iter().zip(r).map(|(a, b)| a - b).product();
        total += h * (own - volume(&shadow, r, last)).max(0.0);
    }
    total
}

#[allow(dead_code)]
fn volume_sweep(points: &[&[f64]], r: &[f64], d: usize) -> f64 {
    let last = d - 1;
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| b[last].total_cmp(&a[last]));
    // projections onto the first d-1 coordinates, kept non-dominated
    let mut front: Vec<&[f64]> = Vec::new();
    let mut total = 0.0;
    for (i, p) in sorted.iter().enumerate() {
        let proj = &p[..last];
        if !front.iter().any(|q| covers(q, proj)) {
            front.retain(|q| !covers(proj, q));
            front.push(proj);
        }
        let next = sorted.get(i + 1).map_or(r[last], |q| q[last]);
        let h = p[last] - next;
        if h > 0.0 {
            total += h * volume(&front, r, last);
        }
    }
    total
}

/// Drops weakly dominated points (keeping one copy of duplicates).
pub(crate) fn reduce<'a>(points: &[&'a [f64]]) -> Vec<&'a [f64]> {
    let mut front: Vec<&[f64]> = Vec::with_capacity(points.len());
    for &p in points {
        if front.iter().any(|q| covers(q, p)) {
            continue;
        }
        front.retain(|q| !covers(p, q));
        front.push(p);
    }
    front
}

/// Volume of the region dominated by `p` and by no point of `others`.
pub(crate) fn exclusive(p: &[f64], others: &[&[f64]], r: &[f64]) -> f64 {
    if others.iter().any(|q| covers(q, p)) {
        return 0.0;
    }
    let clipped: Vec<Vec<f64>> = others
        .iter()
        .map(|q| q.iter().zip(p).map(|(a, b)| a.min(*b)).collect())
        .collect();
    let refs: Vec<&[f64]> = clipped.iter().map(Vec::as_slice).collect();
    let shadow = reduce(&refs);
    let own: f64 = p.iter().zip(r).map(|(a, b)| a - b).product();
    (own - volume(&shadow, r, r.len())).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn limit_and_sweep_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..200 {
            let d = 4 + trial % 3;
            let n = 1 + trial % 40;
            let pts: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..d).map(|_| rng.random_range(0..4) as f64 / 3.0 + rng.random::<f64>() * (trial % 2) as f64).collect())
                .collect();
            let refs: Vec<&[f64]> = pts.iter().map(Vec::as_slice).collect();
            let front = reduce(&refs);
            let r = vec![0.0; d];
            let a = volume_limit(&front, &r, d);
            let b = volume_sweep(&front, &r, d);
            assert!((a - b).abs() < 1e-9 * b.max(1.0), "{a} vs {b}");
        }
    }
}
