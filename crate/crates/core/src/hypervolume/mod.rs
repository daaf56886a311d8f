//! Hypervolume: exact measure, per-point contributions, Monte-Carlo estimate.
//!
//! Everything uses the maximization convention: a point `p` covers the box
//! `[r, p]` above the reference `r`.

mod exact;
mod fronts;
mod monte_carlo;

use std::fs;
use std::path::Path;

use rayon::prelude::*;

pub use fronts::{generate_front, FrontKind};
pub use monte_carlo::{hv_monte_carlo, wilson_interval, McOptions};

use crate::dominance::{covers, ObjectiveVector};
use crate::error::{check_dim, Error, Result};

/// Default bound on the number of points for exact computation when m >= 7.
pub const DEFAULT_EXACT_CAP: usize = 300;

/// Dimension from which the exact cap applies.
pub const CAP_FROM_DIM: usize = 7;

#[derive(Debug, Clone)]
pub struct HvProblem {
    points: Vec<ObjectiveVector>,
    reference: ObjectiveVector,
    exact_cap: usize,
}

impl HvProblem {
    pub fn new(points: Vec<ObjectiveVector>, reference: ObjectiveVector) -> Result<Self> {
        for p in &points {
            check_dim(reference.dim(), p.dim())?;
        }
        Ok(HvProblem {
            points,
            reference,
            exact_cap: DEFAULT_EXACT_CAP,
        })
    }

    /// Overrides the exact-computation cap (only consulted when m >= 7).
    pub fn with_exact_cap(mut self, cap: usize) -> Self {
        self.exact_cap = cap;
        self
    }

    pub fn points(&self) -> &[ObjectiveVector] {
        &self.points
    }

    pub fn reference(&self) -> &ObjectiveVector {
        &self.reference
    }

    pub fn dim(&self) -> usize {
        self.reference.dim()
    }

    pub fn exact_cap(&self) -> usize {
        self.exact_cap
    }

    /// Points weakly dominating the reference; the rest contribute nothing.
    pub(crate) fn effective(&self) -> Vec<&[f64]> {
        self.points
            .iter()
            .map(|p| p.values())
            .filter(|p| covers(p, &self.reference))
            .collect()
    }

    fn check_cap(&self, n: usize) -> Result<()> {
        if self.dim() >= CAP_FROM_DIM && n > self.exact_cap {
            return Err(Error::capacity(format!(
                "exact hypervolume of {n} points in {} objectives exceeds the cap of {}",
                self.dim(),
                self.exact_cap
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HvEstimate {
    pub value: f64,
    /// Confidence bounds on `value`; absent for exact results.
    pub interval: Option<(f64, f64)>,
    /// Monte-Carlo draws used (0 for exact results).
    pub samples: u64,
    pub exact: bool,
}

impl HvEstimate {
    pub(crate) fn exact(value: f64) -> Self {
        HvEstimate {
            value,
            interval: None,
            samples: 0,
            exact: true,
        }
    }

    pub fn width(&self) -> f64 {
        self.interval.map_or(0.0, |(lo, hi)| hi - lo)
    }
}

pub fn hv_exact(problem: &HvProblem) -> Result<HvEstimate> {
    let pts = problem.effective();
    problem.check_cap(pts.len())?;
    let front = exact::reduce(&pts);
    let r = problem.reference.values();
    Ok(HvEstimate::exact(exact::volume(&front, r, r.len())))
}

/// Hypervolume lost by removing point `index`.
pub fn hv_contribution(problem: &HvProblem, index: usize) -> Result<f64> {
    let len = problem.points.len();
    if index >= len {
        return Err(Error::Index { index, len });
    }
    let pts = problem.effective();
    problem.check_cap(pts.len())?;
    Ok(contribution_of(problem, index, &pts))
}

/// Contributions of every point, in input order.
pub fn hv_contributions(problem: &HvProblem) -> Result<Vec<f64>> {
    let pts = problem.effective();
    problem.check_cap(pts.len())?;
    Ok((0..problem.points.len())
        .into_par_iter()
        .map(|i| contribution_of(problem, i, &pts))
        .collect())
}

fn contribution_of(problem: &HvProblem, index: usize, pts: &[&[f64]]) -> f64 {
    let r = problem.reference.values();
    let p = problem.points[index].values();
    if !covers(p, r) {
        return 0.0;
    }
    // skip exactly one copy of p: the one that is this index
    let mut skipped = false;
    let others: Vec<&[f64]> = pts
        .iter()
        .copied()
        .filter(|q| {
            if !skipped && std::ptr::eq(q.as_ptr(), p.as_ptr()) {
                skipped = true;
                false
            } else {
                true
            }
        })
        .collect();
    exact::exclusive(p, &others, r)
}

/// Parses one comma-separated vector per line; blank lines and `#` comments
/// are skipped.
pub fn parse_points(text: &str) -> Result<Vec<ObjectiveVector>> {
    let mut out: Vec<ObjectiveVector> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v = parse_vector(line).map_err(|e| Error::malformed(i + 1, e.to_string()))?;
        if let Some(first) = out.first() {
            if first.dim() != v.dim() {
                return Err(Error::malformed(
                    i + 1,
                    format!("expected {} values, found {}", first.dim(), v.dim()),
                ));
            }
        }
        out.push(v);
    }
    Ok(out)
}

pub fn load_points(path: impl AsRef<Path>) -> Result<Vec<ObjectiveVector>> {
    parse_points(&fs::read_to_string(path)?)
}

/// Parses `"0.5,1,2"` into a vector.
pub fn parse_vector(s: &str) -> Result<ObjectiveVector> {
    let values = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::domain(format!("`{}` is not a number", t.trim())))
        })
        .collect::<Result<Vec<f64>>>()?;
    ObjectiveVector::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ov(v: &[f64]) -> ObjectiveVector {
        ObjectiveVector::new(v.to_vec()).unwrap()
    }

    fn problem(points: &[Vec<f64>], r: &[f64]) -> HvProblem {
        HvProblem::new(points.iter().map(|p| ov(p)).collect(), ov(r)).unwrap()
    }

    /// Inclusion-exclusion over all non-empty subsets.
    fn oracle(points: &[Vec<f64>], r: &[f64]) -> f64 {
        let pts: Vec<&Vec<f64>> = points
            .iter()
            .filter(|p| p.iter().zip(r).all(|(a, b)| a >= b))
            .collect();
        let n = pts.len();
        let mut total = 0.0;
        for mask in 1u32..(1 << n) {
            let mut corner: Vec<f64> = vec![f64::INFINITY; r.len()];
            for (i, p) in pts.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    for (c, v) in corner.iter_mut().zip(p.iter()) {
                        *c = c.min(*v);
                    }
                }
            }
            let vol: f64 = corner.iter().zip(r).map(|(c, b)| c - b).product();
            if mask.count_ones() % 2 == 1 {
                total += vol;
            } else {
                total -= vol;
            }
        }
        total
    }

    fn random_set(rng: &mut ChaCha8Rng, n: usize, m: usize, grid: bool) -> Vec<Vec<f64>> {
        (0..n)
            .map(|_| {
                (0..m)
                    .map(|_| {
                        if grid {
                            rng.random_range(0..5) as f64 * 0.25
                        } else {
                            rng.random::<f64>()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn exact_examples() {
        let p = problem(&[vec![0.5, 0.5]], &[0.0, 0.0]);
        assert_eq!(hv_exact(&p).unwrap().value, 0.25);
        let p = problem(&[vec![0.5, 1.0], vec![1.0, 0.5]], &[0.0, 0.0]);
        let est = hv_exact(&p).unwrap();
        assert!((est.value - 0.75).abs() < 1e-15);
        assert!(est.exact && est.interval.is_none() && est.samples == 0);
    }

    #[test]
    fn exact_matches_inclusion_exclusion() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..400 {
            let m = 1 + trial % 6;
            let n = 1 + trial % 12;
            let grid = trial % 3 == 0;
            let pts = random_set(&mut rng, n, m, grid);
            let r = vec![if grid { 0.25 } else { 0.1 }; m];
            let got = hv_exact(&problem(&pts, &r)).unwrap().value;
            let want = oracle(&pts, &r);
            assert!((got - want).abs() < 1e-9, "m={m} n={n}: {got} vs {want}");
        }
    }

    #[test]
    fn contribution_examples() {
        let p = problem(&[vec![0.5, 1.0], vec![1.0, 0.5]], &[0.0, 0.0]);
        assert!((hv_contribution(&p, 0).unwrap() - 0.25).abs() < 1e-15);
        let single = problem(&[vec![0.3, 0.7, 0.2]], &[0.0; 3]);
        assert_eq!(hv_contribution(&single, 0).unwrap(), hv_exact(&single).unwrap().value);
        let dominated = problem(&[vec![0.5, 0.5], vec![0.4, 0.4]], &[0.0, 0.0]);
        assert_eq!(hv_contribution(&dominated, 1).unwrap(), 0.0);
        assert!(matches!(hv_contribution(&dominated, 2), Err(Error::Index { .. })));
    }

    #[test]
    fn contributions_match_leave_one_out() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..120 {
            let m = 2 + trial % 5;
            let n = 2 + trial % 15;
            let pts = random_set(&mut rng, n, m, trial % 4 == 0);
            let r = vec![0.0; m];
            let full = problem(&pts, &r);
            let total = hv_exact(&full).unwrap().value;
            let contribs = hv_contributions(&full).unwrap();
            for (i, c) in contribs.iter().enumerate() {
                let mut rest = pts.clone();
                rest.remove(i);
                let without = hv_exact(&problem(&rest, &r)).unwrap().value;
                assert!((c - (total - without)).abs() < 1e-9);
                assert_eq!(*c, hv_contribution(&full, i).unwrap());
            }
            assert!(contribs.iter().sum::<f64>() <= total + 1e-9);
        }
    }

    #[test]
    fn duplicates_contribute_nothing() {
        let p = problem(&[vec![0.5, 0.5], vec![0.5, 0.5]], &[0.0, 0.0]);
        assert_eq!(hv_contributions(&p).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn points_below_reference_are_dropped() {
        let p = problem(&[vec![0.5, 0.5], vec![2.0, -1.0]], &[0.0, 0.0]);
        assert_eq!(hv_exact(&p).unwrap().value, 0.25);
        assert_eq!(hv_contribution(&p, 1).unwrap(), 0.0);
    }

    #[test]
    fn cap_applies_from_seven_objectives() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pts = random_set(&mut rng, 12, 7, false);
        let p = problem(&pts, &[0.0; 7]).with_exact_cap(10);
        assert!(matches!(hv_exact(&p), Err(Error::Capacity(_))));
        assert!(hv_exact(&p.with_exact_cap(12)).is_ok());
        let pts = random_set(&mut rng, 12, 6, false);
        assert!(hv_exact(&problem(&pts, &[0.0; 6]).with_exact_cap(1)).is_ok());
    }

    #[test]
    fn parse_points_examples() {
        let pts = parse_points("# front\n0.5, 1\n\n1,0.5\n").unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[1].values(), &[1.0, 0.5]);
        assert!(matches!(parse_points("1,2\n1,2,3\n"), Err(Error::Malformed { line: 2, .. })));
        assert!(matches!(parse_points("1,x\n"), Err(Error::Malformed { line: 1, .. })));
    }

    fn point_sets() -> impl Strategy<Value = (usize, Vec<Vec<f64>>)> {
        (2usize..6).prop_flat_map(|m| {
            let pt = prop::collection::vec((0u8..6).prop_map(|v| v as f64 / 5.0), m);
            (Just(m), prop::collection::vec(pt, 1..14))
        })
    }

    proptest! {
        #[test]
        fn adding_a_point_never_decreases(
            (m, pts) in point_sets(),
            extra in prop::collection::vec(0.0f64..1.0, 6),
        ) {
            let r = vec![0.0; m];
            let before = hv_exact(&problem(&pts, &r)).unwrap().value;
            let mut more = pts.clone();
            more.push(extra[..m].to_vec());
            let after = hv_exact(&problem(&more, &r)).unwrap().value;
            prop_assert!(after >= before - 1e-12);
        }

        #[test]
        fn dominated_points_are_neutral((m, pts) in point_sets()) {
            let r = vec![0.0; m];
            let full = hv_exact(&problem(&pts, &r)).unwrap().value;
            let keep = crate::dominance::nondominated_indices(&pts).unwrap();
            let nd: Vec<Vec<f64>> = keep.iter().map(|&i| pts[i].clone()).collect();
            let reduced = hv_exact(&problem(&nd, &r)).unwrap().value;
            prop_assert!((full - reduced).abs() < 1e-12);
        }

        #[test]
        fn scale_covariance((m, pts) in point_sets(), c in 0.1f64..10.0) {
            let r = vec![-0.5; m];
            let base = hv_exact(&problem(&pts, &r)).unwrap().value;
            let scaled: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|v| v * c).collect()).collect();
            let sr: Vec<f64> = r.iter().map(|v| v * c).collect();
            let got = hv_exact(&problem(&scaled, &sr)).unwrap().value;
            let want = base * c.powi(m as i32);
            prop_assert!((got - want).abs() <= 1e-9 * want.max(1.0));
        }
    }
}
