//! Distances between neighboring weight vectors of a simplex lattice.
//!
//! For each m the lattice uses the smallest `H` with at least `min_count`
//! vectors, so the set size varies with m.

use rayon::prelude::*;

use super::{fmt_f64, Check, Config, ExperimentOutput, Reader};
use crate::error::{Error, Result};
use crate::rng::{SeedPath, DEFAULT_SEED};
use crate::weights::{mean_neighbor_distance, simplex_lattice, smallest_h, DistanceSummary};

struct Row {
    m: usize,
    t: f64,
    summary: DistanceSummary,
    mu: usize,
    h: usize,
}

pub(super) fn run(cfg: &Config) -> Result<ExperimentOutput> {
    let r = Reader::new(cfg);
    let ms = r.usize_list("m", &(2..=20).collect::<Vec<_>>())?;
    let ts = r.f64_list("t", &[1.0, 0.2, 0.1])?;
    let pairs = r.scalar("pairs", 900usize)?;
    let min_count = r.scalar("min_count", 100u64)?;
    let seed = r.scalar("seed", DEFAULT_SEED)?;
    let mut out = ExperimentOutput::new(r.finish()?, vec!["m", "T", "mean", "half_width", "mu", "h"]);
    if ms.iter().any(|&m| m < 2) {
        return Err(Error::domain("weight lattices need m >= 2"));
    }

    let rows = ms
        .par_iter()
        .map(|&m| {
            let h = smallest_h(m, min_count)?;
            let set = simplex_lattice(m, h)?;
            ts.iter()
                .map(|&t| {
                    let s = SeedPath::root(seed).index(m as u64).label(&t.to_string()).value();
                    Ok(Row { m, t, summary: mean_neighbor_distance(&set, t, pairs, s)?, mu: set.len(), h })
                })
                .collect::<Result<Vec<Row>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();

    for row in &rows {
        out.rows.push(vec![
            row.m.to_string(),
            row.t.to_string(),
            fmt_f64(row.summary.mean),
            fmt_f64(row.summary.half_width),
            row.mu.to_string(),
            row.h.to_string(),
        ]);
    }

    if min_count == 100 {
        let (a, b) = (smallest_h(2, 100)?, smallest_h(3, 100)?);
        out.checks.push(Check::new(
            "smallest lattice of 100 vectors: H=99 for m=2, H=13 for m=3",
            a == 99 && b == 13,
            format!("m=2: {a}, m=3: {b}"),
        ));
    }
    let find = |m: usize, t: f64| rows.iter().find(|r| r.m == m && r.t == t);
    if let Some(row) = find(2, 1.0) {
        let v = row.summary.mean;
        out.checks.push(Check::new(
            "m=2, T=1: mean distance in [0.4, 0.6]",
            (0.4..=0.6).contains(&v),
            format!("{v:.4}"),
        ));
    }
    let high: Vec<&Row> = rows.iter().filter(|r| r.m >= 14 && r.t == 1.0).collect();
    if !high.is_empty() {
        let low = high.iter().map(|r| r.summary.mean).fold(f64::INFINITY, f64::min);
        out.checks.push(Check::new(
            "T=1, m>=14: mean distance above 0.85",
            low > 0.85,
            format!("lowest {low:.4} over {} settings", high.len()),
        ));
    }
    let tenth: Vec<&Row> = rows.iter().filter(|r| r.m > 12 && r.t == 0.1).collect();
    if !tenth.is_empty() {
        let low = tenth.iter().map(|r| r.summary.mean).fold(f64::INFINITY, f64::min);
        out.checks.push(Check::new(
            "T=0.1, m>12: mean distance above 0.5",
            low > 0.5,
            format!("lowest {low:.4} over {} settings", tenth.len()),
        ));
    }
    Ok(out)
}
