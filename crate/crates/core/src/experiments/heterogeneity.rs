//! Spread of per-objective evaluation times as m grows.

use std::fmt;
use std::str::FromStr;

use rand_distr::{Beta, Distribution, Uniform};
use rayon::prelude::*;

use super::{fmt_f64, summarize, Check, Config, ExperimentOutput, Reader, Summary};
use crate::error::{Error, Result};
use crate::rng::{SeedPath, StreamRng, DEFAULT_SEED};

/// Distribution of one objective's evaluation time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LatencyModel {
    Beta { alpha: f64, beta: f64 },
    Uniform { lo: f64, hi: f64 },
}

impl LatencyModel {
    pub fn new_beta(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
            return Err(Error::domain("beta parameters must be positive"));
        }
        Ok(LatencyModel::Beta { alpha, beta })
    }

    pub fn new_uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi && lo.is_finite() && hi.is_finite()) {
            return Err(Error::domain("uniform bounds need lo < hi"));
        }
        Ok(LatencyModel::Uniform { lo, hi })
    }

    pub fn sample(&self, rng: &mut StreamRng, count: usize) -> Vec<f64> {
        match *self {
            LatencyModel::Beta { alpha, beta } => {
                let d = Beta::new(alpha, beta).expect("validated parameters");
                (0..count).map(|_| d.sample(rng)).collect()
            }
            LatencyModel::Uniform { lo, hi } => {
                let d = Uniform::new(lo, hi).expect("validated bounds");
                (0..count).map(|_| d.sample(rng)).collect()
            }
        }
    }

    pub fn defaults() -> Vec<LatencyModel> {
        vec![
            LatencyModel::Beta { alpha: 2.0, beta: 8.0 },
            LatencyModel::Beta { alpha: 8.0, beta: 2.0 },
            LatencyModel::Beta { alpha: 5.0, beta: 5.0 },
            LatencyModel::Uniform { lo: 1.0, hi: 50.0 },
        ]
    }
}

impl fmt::Display for LatencyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatencyModel::Beta { alpha, beta } => write!(f, "beta({alpha},{beta})"),
            LatencyModel::Uniform { lo, hi } => write!(f, "uniform({lo},{hi})"),
        }
    }
}

impl FromStr for LatencyModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::domain(format!("cannot parse distribution `{s}`; use beta(a,b) or uniform(lo,hi)"));
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let (a, b) = args.split_once(',').ok_or_else(bad)?;
        let a: f64 = a.trim().parse().map_err(|_| bad())?;
        let b: f64 = b.trim().parse().map_err(|_| bad())?;
        match name.trim().to_ascii_lowercase().as_str() {
            "beta" => LatencyModel::new_beta(a, b),
            "uniform" => LatencyModel::new_uniform(a, b),
            _ => Err(bad()),
        }
    }
}

/// Smallest and largest pairwise absolute difference.
fn spread(mut times: Vec<f64>) -> (f64, f64) {
    times.sort_by(f64::total_cmp);
    let min = times.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    (min, times[times.len() - 1] - times[0])
}

pub(super) fn run(cfg: &Config) -> Result<ExperimentOutput> {
    let r = Reader::new(cfg);
    let models = r.item_list("distributions", &LatencyModel::defaults())?;
    let ms = r.usize_list("m", &(2..=25).collect::<Vec<_>>())?;
    let reps = r.scalar("reps", 100usize)?;
    let seed = r.scalar("seed", DEFAULT_SEED)?;
    let mut out = ExperimentOutput::new(r.finish()?, vec!["distribution", "m", "rep", "min_diff", "max_diff"]);
    if ms.iter().any(|&m| m < 2) {
        return Err(Error::domain("heterogeneity needs m >= 2"));
    }
    if reps == 0 {
        return Err(Error::domain("reps must be at least 1"));
    }

    let cells: Vec<(usize, usize)> = (0..models.len())
        .flat_map(|d| ms.iter().map(move |&m| (d, m)))
        .collect();
    let results: Vec<Vec<(f64, f64)>> = cells
        .par_iter()
        .map(|&(d, m)| {
            let model = models[d];
            let mut rng = SeedPath::root(seed).label("latency").label(&model.to_string()).index(m as u64).rng();
            (0..reps).map(|_| spread(model.sample(&mut rng, m))).collect()
        })
        .collect();

    for (&(d, m), reps) in cells.iter().zip(&results) {
        for (rep, (lo, hi)) in reps.iter().enumerate() {
            out.rows.push(vec![models[d].to_string(), m.to_string(), rep.to_string(), fmt_f64(*lo), fmt_f64(*hi)]);
        }
    }

    let max_summary = |d: usize, m: usize| -> Option<Summary> {
        cells
            .iter()
            .position(|&c| c == (d, m))
            .map(|i| summarize(&results[i].iter().map(|r| r.1).collect::<Vec<_>>()))
    };

    if ms.contains(&2) {
        let ok = cells
            .iter()
            .zip(&results)
            .filter(|(c, _)| c.1 == 2)
            .all(|(_, reps)| reps.iter().all(|(lo, hi)| lo == hi));
        out.checks.push(Check::new("m=2: min and max difference coincide", ok, "every rep"));
    }
    for (d, model) in models.iter().enumerate() {
        if let (Some(a), Some(b)) = (max_summary(d, 5), max_summary(d, 25)) {
            out.checks.push(Check::new(
                format!("{model}: max difference grows from m=5 to m=25"),
                b.mean > a.mean,
                format!("{:.4} -> {:.4}", a.mean, b.mean),
            ));
        }
    }
    let find = |want: LatencyModel| models.iter().position(|&m| m == want);
    if let (Some(sym), Some(skew)) = (
        find(LatencyModel::Beta { alpha: 5.0, beta: 5.0 }),
        find(LatencyModel::Beta { alpha: 2.0, beta: 8.0 }),
    ) {
        if let (Some(a), Some(b)) = (max_summary(sym, 25), max_summary(skew, 25)) {
            let sigma = (a.se * a.se + b.se * b.se).sqrt();
            out.checks.push(Check::new(
                "m=25: beta(5,5) max difference exceeds beta(2,8) by 3 sigma",
                a.mean - b.mean > 3.0 * sigma,
                format!("{:.4} vs {:.4} (sigma {:.4})", a.mean, b.mean, sigma),
            ));
        }
    }
    Ok(out)
}
