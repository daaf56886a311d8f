//! Hypervolume behaviour on synthetic fronts.
//!
//! Fronts are min-max normalized to `[0,1]^m` and measured against the
//! origin. Three series run:
//! * `m-sweep`: every front kind, small N, growing m; exact value,
//!   contributions and a Monte-Carlo estimate.
//! * `n-sweep`: linear fronts at fixed m with growing N; exact contributions
//!   and Monte-Carlo.
//! * `mc-sweep`: linear fronts at a larger m with growing N; Monte-Carlo only.
//!   By default these fronts are reflected (`y -> 1 - y`, still a linear
//!   front): unreflected, a linear front at m=8 covers about `1/m!` of the box
//!   and the sampler meets any width target after its first batch.
//!
//! Monte-Carlo runs stop at interval width `5 / N`.

use rayon::prelude::*;

use super::{fmt_f64, fmt_opt, instance_seed, summarize, Check, Config, ExperimentOutput, Reader};
use crate::dominance::ObjectiveVector;
use crate::error::{Error, Result};
use crate::hypervolume::{
    generate_front, hv_contributions, hv_exact, hv_monte_carlo, FrontKind, HvProblem, McOptions,
};
use crate::rng::{SeedPath, DEFAULT_SEED};

/// Rescales every objective to `[0, 1]`; constant objectives map to 1.
pub fn normalize_front(points: &[ObjectiveVector]) -> Vec<ObjectiveVector> {
    let Some(first) = points.first() else {
        return Vec::new();
    };
    let m = first.dim();
    let mut lo = vec![f64::INFINITY; m];
    let mut hi = vec![f64::NEG_INFINITY; m];
    for p in points {
        for i in 0..m {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    points
        .iter()
        .map(|p| {
            let v = (0..m)
                .map(|i| if hi[i] > lo[i] { (p[i] - lo[i]) / (hi[i] - lo[i]) } else { 1.0 })
                .collect();
            ObjectiveVector::new(v).expect("finite by construction")
        })
        .collect()
}

/// `y -> 1 - y` on every coordinate.
pub fn reflect_front(points: &[ObjectiveVector]) -> Vec<ObjectiveVector> {
    points
        .iter()
        .map(|p| ObjectiveVector::new(p.iter().map(|v| 1.0 - v).collect()).expect("finite by construction"))
        .collect()
}

/// Counts the seeded Monte-Carlo runs whose interval contains the exact value.
pub fn mc_coverage(problem: &HvProblem, opts: McOptions, runs: usize) -> Result<(usize, usize)> {
    let exact = hv_exact(problem)?.value;
    let covered = (0..runs)
        .into_par_iter()
        .map(|i| {
            let est = hv_monte_carlo(
                problem,
                &McOptions {
                    seed: SeedPath::root(opts.seed).label("coverage").index(i as u64).value(),
                    ..opts
                },
            )?;
            let (lo, hi) = est.interval.unwrap_or((est.value, est.value));
            Ok((lo <= exact && exact <= hi) as usize)
        })
        .collect::<Result<Vec<usize>>>()?
        .into_iter()
        .sum();
    Ok((covered, runs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Series {
    MSweep,
    NSweep,
    McSweep,
}

impl Series {
    fn name(self) -> &'static str {
        match self {
            Series::MSweep => "m-sweep",
            Series::NSweep => "n-sweep",
            Series::McSweep => "mc-sweep",
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    series: Series,
    kind: FrontKind,
    m: usize,
    n: usize,
    seed: u64,
    reflected: bool,
}

#[derive(Debug, Clone)]
struct Outcome {
    hv: Option<f64>,
    mean_contribution: Option<f64>,
    mc_value: f64,
    mc_interval: (f64, f64),
    mc_samples: u64,
    target: f64,
}

struct McSettings {
    confidence: f64,
    batch: u64,
    max_samples: u64,
}

fn measure(cell: Cell, mc: &McSettings) -> Result<Outcome> {
    let mut front = normalize_front(&generate_front(cell.kind, cell.m, cell.n, cell.seed)?);
    if cell.reflected {
        front = reflect_front(&front);
    }
    let problem = HvProblem::new(front, ObjectiveVector::new(vec![0.0; cell.m])?)?;
    let (hv, mean_contribution) = match cell.series {
        Series::McSweep => (None, None),
        _ => {
            let hv = hv_exact(&problem)?.value;
            let contribs = hv_contributions(&problem)?;
            (Some(hv), Some(summarize(&contribs).mean))
        }
    };
    let target = 5.0 / cell.n as f64;
    let est = hv_monte_carlo(
        &problem,
        &McOptions {
            target_width: target,
            confidence: mc.confidence,
            batch: mc.batch,
            max_samples: mc.max_samples,
            seed: SeedPath::root(cell.seed).label("hv-study-mc").value(),
        },
    )?;
    Ok(Outcome {
        hv,
        mean_contribution,
        mc_value: est.value,
        mc_interval: est.interval.unwrap_or((est.value, est.value)),
        mc_samples: est.samples,
        target,
    })
}

pub(super) fn run(cfg: &Config) -> Result<ExperimentOutput> {
    let r = Reader::new(cfg);
    let kinds = r.item_list("kinds", &FrontKind::ALL)?;
    let sweep_m = r.usize_list("sweep_m", &[4, 6, 8, 10])?;
    let sweep_n = r.scalar("sweep_n", 20usize)?;
    let size_m = r.scalar("size_m", 6usize)?;
    let size_n = r.usize_list("size_n", &[200, 400, 600, 800, 1000])?;
    let mc_m = r.scalar("mc_m", 8usize)?;
    let mc_n = r.usize_list("mc_n", &[200, 400, 800])?;
    let mc_reflect = r.bool("mc_reflect", true)?;
    let reps = r.scalar("reps", 3usize)?;
    let mc = McSettings {
        confidence: r.scalar("confidence", 0.95f64)?,
        batch: r.scalar("mc_batch", 1000u64)?,
        max_samples: r.scalar("mc_max_samples", 50_000_000u64)?,
    };
    let coverage_runs = r.scalar("coverage_runs", 100usize)?;
    let seed = r.scalar("seed", DEFAULT_SEED)?;
    let mut out = ExperimentOutput::new(
        r.finish()?,
        vec![
            "series",
            "kind",
            "m",
            "n",
            "seed",
            "reflected",
            "hv_exact",
            "mean_contribution",
            "mc_value",
            "mc_lo",
            "mc_hi",
            "mc_samples",
            "target_width",
        ],
    );
    if reps == 0 {
        return Err(Error::domain("reps must be at least 1"));
    }

    let mut cells = Vec::new();
    let mut push = |series, kind, m, n| {
        let reflected = series == Series::McSweep && mc_reflect;
        for i in 0..reps {
            cells.push(Cell { series, kind, m, n, seed: instance_seed(seed, i), reflected });
        }
    };
    for &kind in &kinds {
        for &m in &sweep_m {
            push(Series::MSweep, kind, m, sweep_n);
        }
    }
    for &n in &size_n {
        push(Series::NSweep, FrontKind::Linear, size_m, n);
    }
    for &n in &mc_n {
        push(Series::McSweep, FrontKind::Linear, mc_m, n);
    }

    let outcomes = cells.par_iter().map(|&c| measure(c, &mc)).collect::<Result<Vec<_>>>()?;
    for (c, o) in cells.iter().zip(&outcomes) {
        out.rows.push(vec![
            c.series.name().into(),
            c.kind.to_string(),
            c.m.to_string(),
            c.n.to_string(),
            c.seed.to_string(),
            c.reflected.to_string(),
            fmt_opt(o.hv),
            fmt_opt(o.mean_contribution),
            fmt_f64(o.mc_value),
            fmt_f64(o.mc_interval.0),
            fmt_f64(o.mc_interval.1),
            o.mc_samples.to_string(),
            fmt_f64(o.target),
        ]);
    }

    let mean_of = |series: Series, kind: FrontKind, m: usize, n: usize, pick: &dyn Fn(&Outcome) -> Option<f64>| {
        let v: Vec<f64> = cells
            .iter()
            .zip(&outcomes)
            .filter(|(c, _)| c.series == series && c.kind == kind && c.m == m && c.n == n)
            .filter_map(|(_, o)| pick(o))
            .collect();
        (!v.is_empty()).then(|| summarize(&v).mean)
    };

    if let (Some(&small), Some(&large)) = (size_n.iter().min(), size_n.iter().max()) {
        if small < large {
            let a = mean_of(Series::NSweep, FrontKind::Linear, size_m, small, &|o| o.mean_contribution);
            let b = mean_of(Series::NSweep, FrontKind::Linear, size_m, large, &|o| o.mean_contribution);
            if let (Some(a), Some(b)) = (a, b) {
                let ratio = a / b;
                let expected = large as f64 / small as f64;
                out.checks.push(Check::new(
                    format!("mean contribution shrinks like 1/N (N={small} vs {large})"),
                    (3.0..=8.0).contains(&ratio),
                    format!("ratio {ratio:.3}, 1/N predicts {expected:.1}"),
                ));
            }
        }
    }

    if kinds.contains(&FrontKind::Convex) && sweep_m.len() > 1 {
        let values: Vec<(usize, f64)> = sweep_m
            .iter()
            .filter_map(|&m| mean_of(Series::MSweep, FrontKind::Convex, m, sweep_n, &|o| o.hv).map(|v| (m, v)))
            .collect();
        let decreasing = values.windows(2).all(|w| w[1].1 < w[0].1);
        let detail: Vec<String> = values.iter().map(|(m, v)| format!("m={m}: {v:.3e}")).collect();
        out.checks.push(Check::new(
            "convex fronts: hypervolume falls as m grows",
            decreasing,
            detail.join(", "),
        ));
    }

    let mut sorted_mc = mc_n.clone();
    sorted_mc.sort_unstable();
    for w in sorted_mc.windows(2) {
        if w[1] == 2 * w[0] {
            let a = mean_of(Series::McSweep, FrontKind::Linear, mc_m, w[0], &|o| Some(o.mc_samples as f64));
            let b = mean_of(Series::McSweep, FrontKind::Linear, mc_m, w[1], &|o| Some(o.mc_samples as f64));
            if let (Some(a), Some(b)) = (a, b) {
                let ratio = b / a;
                out.checks.push(Check::new(
                    format!("m={mc_m}: samples(N={}) / samples(N={}) in [2, 8]", w[1], w[0]),
                    (2.0..=8.0).contains(&ratio),
                    format!("{a:.0} -> {b:.0}, ratio {ratio:.3}"),
                ));
            }
        }
    }

    if coverage_runs > 0 {
        for (label, problem) in coverage_fixtures(seed)? {
            let n = problem.points().len();
            let opts = McOptions {
                target_width: 5.0 / n as f64,
                confidence: 0.95,
                batch: mc.batch,
                max_samples: mc.max_samples,
                seed,
            };
            let (hit, runs) = mc_coverage(&problem, opts, coverage_runs)?;
            let need = (0.93 * runs as f64).ceil() as usize;
            out.checks.push(Check::new(
                format!("Monte-Carlo interval covers the exact value ({label})"),
                hit >= need,
                format!("{hit}/{runs} runs, need {need}"),
            ));
        }
    }
    Ok(out)
}

/// The two-point square fixture and a 20-point linear front in 3-D.
pub(crate) fn coverage_fixtures(seed: u64) -> Result<Vec<(&'static str, HvProblem)>> {
    let two = HvProblem::new(
        vec![ObjectiveVector::new(vec![0.5, 1.0])?, ObjectiveVector::new(vec![1.0, 0.5])?],
        ObjectiveVector::new(vec![0.0, 0.0])?,
    )?;
    let linear = HvProblem::new(
        generate_front(FrontKind::Linear, 3, 20, seed)?,
        ObjectiveVector::new(vec![0.0; 3])?,
    )?;
    Ok(vec![("two points", two), ("20-point linear front", linear)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_spans_unit_box() {
        let pts = generate_front(FrontKind::Concave, 3, 50, 1).unwrap();
        let norm = normalize_front(&pts);
        for i in 0..3 {
            let lo = norm.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min);
            let hi = norm.iter().map(|p| p[i]).fold(f64::NEG_INFINITY, f64::max);
            assert_eq!((lo, hi), (0.0, 1.0));
        }
        let single = normalize_front(&pts[..1]);
        assert_eq!(single[0].values(), &[1.0, 1.0, 1.0]);
        // 1 - (1 - y) is only exact up to rounding
        let back = reflect_front(&reflect_front(&norm));
        for (b, n) in back.iter().zip(&norm) {
            assert!(b.values().iter().zip(n.values()).all(|(x, y)| (x - y).abs() < 1e-15));
        }
    }
}
