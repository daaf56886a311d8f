use rand::Rng;

use super::{HvEstimate, HvProblem};
use crate::archive::{Backend, ParetoArchive};
use crate::error::{Error, Result};
use crate::rng::SeedPath;

/// Normal quantile for a two-sided interval at the given confidence.
fn z_value(confidence: f64) -> Result<f64> {
    const TABLE: [(f64, f64); 3] = [
        (0.90, 1.644_853_626_951_472_2),
        (0.95, 1.959_963_984_540_054),
        (0.99, 2.575_829_303_548_900_4),
    ];
    TABLE
        .iter()
        .find(|(c, _)| (c - confidence).abs() < 1e-9)
        .map(|&(_, z)| z)
        .ok_or_else(|| Error::domain(format!("unsupported confidence {confidence}; use 0.90, 0.95 or 0.99")))
}

/// Continuity-corrected Wilson score interval for a binomial proportion.
pub fn wilson_interval(hits: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::domain("Wilson interval needs at least one trial"));
    }
    if hits > trials {
        return Err(Error::domain(format!("{hits} hits out of {trials} trials")));
    }
    let z = z_value(confidence)?;
    let n = trials as f64;
    let p = hits as f64 / n;
    let q = 1.0 - p;
    let z2 = z * z;
    let denom = 2.0 * (n + z2);
    let lo = if hits == 0 {
        0.0
    } else {
        let rad = (z2 - 2.0 - 1.0 / n + 4.0 * p * (n * q + 1.0)).max(0.0);
        ((2.0 * n * p + z2 - 1.0 - z * rad.sqrt()) / denom).max(0.0)
    };
    let hi = if hits == trials {
        1.0
    } else {
        let rad = (z2 + 2.0 - 1.0 / n + 4.0 * p * (n * q - 1.0)).max(0.0);
        ((2.0 * n * p + z2 + 1.0 + z * rad.sqrt()) / denom).min(1.0)
    };
    Ok((lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McOptions {
    /// Stop once the scaled interval is at most this wide.
    pub target_width: f64,
    pub confidence: f64,
    /// Samples drawn between interval checks.
    pub batch: u64,
    pub max_samples: u64,
    pub seed: u64,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions {
            target_width: 0.01,
            confidence: 0.95,
            batch: 10_000,
            max_samples: 10_000_000,
            seed: crate::rng::DEFAULT_SEED,
        }
    }
}

/// Estimates the hypervolume by uniform sampling of the box spanned by the
/// reference and the ideal point of the set.
pub fn hv_monte_carlo(problem: &HvProblem, opts: &McOptions) -> Result<HvEstimate> {
    if !(opts.target_width > 0.0) {
        return Err(Error::domain("target width must be positive"));
    }
    if opts.batch == 0 || opts.max_samples == 0 {
        return Err(Error::domain("batch and max_samples must be positive"));
    }
    z_value(opts.confidence)?;

    let pts = problem.effective();
    let r = problem.reference().values();
    let m = r.len();
    if pts.is_empty() {
        return Ok(HvEstimate::exact(0.0));
    }
    let mut ideal = r.to_vec();
    for p in &pts {
        for (hi, v) in ideal.iter_mut().zip(p.iter()) {
            *hi = hi.max(*v);
        }
    }
    let extent: Vec<f64> = ideal.iter().zip(r).map(|(hi, lo)| hi - lo).collect();
    let volume: f64 = extent.iter().product();
    if volume <= 0.0 {
        return Ok(HvEstimate {
            value: 0.0,
            interval: Some((0.0, 0.0)),
            samples: 0,
            exact: true,
        });
    }

    let mut tree: ParetoArchive = ParetoArchive::new(Backend::NdTree, m)?;
    for p in &pts {
        tree.update_raw(p.to_vec(), ());
    }

    let mut rng = SeedPath::root(opts.seed).label("hv-mc").rng();
    let mut sample = vec![0.0; m];
    let mut hits = 0u64;
    let mut drawn = 0u64;
    loop {
        let take = opts.batch.min(opts.max_samples - drawn);
        for _ in 0..take {
            for ((s, lo), w) in sample.iter_mut().zip(r).zip(&extent) {
                *s = lo + rng.random::<f64>() * w;
            }
            if tree.is_dominated_raw(&sample) {
                hits += 1;
            }
        }
        drawn += take;
        let (lo, hi) = wilson_interval(hits, drawn, opts.confidence)?;
        if (hi - lo) * volume <= opts.target_width || drawn >= opts.max_samples {
            return Ok(HvEstimate {
                value: hits as f64 / drawn as f64 * volume,
                interval: Some((lo * volume, hi * volume)),
                samples: drawn,
                exact: false,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dominance::ObjectiveVector;
    use crate::hypervolume::{generate_front, hv_exact, FrontKind};

    fn ov(v: &[f64]) -> ObjectiveVector {
        ObjectiveVector::new(v.to_vec()).unwrap()
    }

    fn two_point() -> HvProblem {
        HvProblem::new(vec![ov(&[0.5, 1.0]), ov(&[1.0, 0.5])], ov(&[0.0, 0.0])).unwrap()
    }

    /// Direct transcription of the continuity-corrected score bounds.
    fn reference_bounds(x: f64, n: f64, z: f64) -> (f64, f64) {
        let p = x / n;
        let lo = (2.0 * n * p + z * z - 1.0
            - z * (z * z - 2.0 - 1.0 / n + 4.0 * p * (n * (1.0 - p) + 1.0)).sqrt())
            / (2.0 * (n + z * z));
        let hi = (2.0 * n * p + z * z + 1.0
            + z * (z * z + 2.0 - 1.0 / n + 4.0 * p * (n * (1.0 - p) - 1.0)).sqrt())
            / (2.0 * (n + z * z));
        (lo, hi)
    }

    #[test]
    fn wilson_examples() {
        let (lo, hi) = wilson_interval(50, 100, 0.95).unwrap();
        let (elo, ehi) = reference_bounds(50.0, 100.0, 1.959964);
        assert!((lo - elo).abs() < 1e-6 && (hi - ehi).abs() < 1e-6);
        // textbook values for 50/100 at 95% with continuity correction
        assert!((lo - 0.3990).abs() < 5e-4 && (hi - 0.6010).abs() < 5e-4);
        assert_eq!(wilson_interval(0, 40, 0.90).unwrap().0, 0.0);
        assert_eq!(wilson_interval(40, 40, 0.99).unwrap().1, 1.0);
        assert!(wilson_interval(3, 2, 0.95).is_err());
        assert!(wilson_interval(0, 0, 0.95).is_err());
        assert!(wilson_interval(1, 2, 0.8).is_err());
    }

    #[test]
    fn wilson_brackets_the_proportion() {
        for n in [1u64, 2, 7, 50, 1000] {
            for x in 0..=n {
                let (lo, hi) = wilson_interval(x, n, 0.95).unwrap();
                let p = x as f64 / n as f64;
                assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0, "{x}/{n}");
            }
        }
    }

    #[test]
    fn empty_and_degenerate_sets() {
        let empty = HvProblem::new(vec![], ov(&[0.0, 0.0])).unwrap();
        let est = hv_monte_carlo(&empty, &McOptions::default()).unwrap();
        assert_eq!((est.value, est.samples), (0.0, 0));
        let flat = HvProblem::new(vec![ov(&[0.0, 1.0])], ov(&[0.0, 0.0])).unwrap();
        let est = hv_monte_carlo(&flat, &McOptions::default()).unwrap();
        assert!(est.exact && est.value == 0.0 && est.width() == 0.0);
    }

    #[test]
    fn single_point_always_hits() {
        let p = HvProblem::new(vec![ov(&[0.5, 0.25])], ov(&[0.0, 0.0])).unwrap();
        let opts = McOptions { batch: 100, ..McOptions::default() };
        let est = hv_monte_carlo(&p, &opts).unwrap();
        assert_eq!(est.value, 0.125);
        let (lo, hi) = est.interval.unwrap();
        assert_eq!(hi, 0.125);
        assert!(lo < 0.125 && hi - lo <= opts.target_width);
    }

    #[test]
    fn seeded_runs_cover_exact_value() {
        let p = two_point();
        let mut covered = 0;
        for seed in 0..100 {
            let opts = McOptions { seed, ..McOptions::default() };
            let est = hv_monte_carlo(&p, &opts).unwrap();
            let (lo, hi) = est.interval.unwrap();
            assert!(lo <= est.value && est.value <= hi);
            assert!(hi - lo <= 0.01);
            if lo <= 0.75 && 0.75 <= hi {
                covered += 1;
            }
        }
        assert!(covered >= 93, "covered {covered}/100");
    }

    #[test]
    fn reproducible_and_more_samples_never_widen() {
        let pts = generate_front(FrontKind::Linear, 4, 30, 2).unwrap();
        let p = HvProblem::new(pts, ov(&[0.0; 4])).unwrap();
        let exact = hv_exact(&p).unwrap().value;
        let mut prev = f64::INFINITY;
        for max in [2_000u64, 4_000, 8_000, 16_000] {
            let opts = McOptions { target_width: 1e-6, batch: 1_000, max_samples: max, seed: 9, ..McOptions::default() };
            let a = hv_monte_carlo(&p, &opts).unwrap();
            assert_eq!(a, hv_monte_carlo(&p, &opts).unwrap());
            assert_eq!(a.samples, max);
            assert!(a.width() <= prev);
            prev = a.width();
            assert!((a.value - exact).abs() < 3.0 * a.width());
        }
    }

    #[test]
    fn parameter_errors() {
        let p = two_point();
        for opts in [
            McOptions { target_width: 0.0, ..McOptions::default() },
            McOptions { confidence: 0.5, ..McOptions::default() },
            McOptions { batch: 0, ..McOptions::default() },
        ] {
            assert!(matches!(hv_monte_carlo(&p, &opts), Err(Error::Domain(_))));
        }
    }
}
