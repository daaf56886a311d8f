//! Streams every solution of an NK-landscape through each archive backend.
//!
//! Steps are grouped into deciles of archive size: a step belongs to decile
//! `ceil(10 S / F)` (between 1 and 10), where `S` is the largest archive size
//! seen before the step and `F` the final size. Per decile
//! the bench records offered and inserted solutions, comparisons and,
//! optionally, wall time.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::{instance_seed, Check, Config, ExperimentOutput, Reader};
use crate::archive::{lexicographic, Backend, ParetoArchive};
use crate::dominance::nondominated_indices;
use crate::error::{Error, Result};
use crate::landscape::NkInstance;
use crate::rng::{SeedPath, DEFAULT_SEED};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecileStats {
    pub offered: u64,
    pub inserted: u64,
    pub comparisons: u64,
    pub elapsed_ns: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveRun {
    pub backend: Backend,
    pub m: usize,
    pub seed: u64,
    pub deciles: [DecileStats; 10],
    /// Final members in lexicographic order.
    pub snapshot: Vec<Vec<f64>>,
}

/// Order in which solutions reach the archive.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum StreamOrder {
    /// Seeded shuffle, the same for every backend.
    #[default]
    Random,
    /// Ascending solution index.
    Index,
    /// Descending solution index.
    Reverse,
}

impl fmt::Display for StreamOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StreamOrder::Random => "random",
            StreamOrder::Index => "index",
            StreamOrder::Reverse => "reverse",
        })
    }
}

impl FromStr for StreamOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "random" => Ok(StreamOrder::Random),
            "index" => Ok(StreamOrder::Index),
            "reverse" => Ok(StreamOrder::Reverse),
            other => Err(Error::domain(format!("unknown order `{other}`; use random, index or reverse"))),
        }
    }
}

fn stream_order(len: usize, seed: u64, mode: StreamOrder) -> Vec<u32> {
    let mut order: Vec<u32> = (0..len as u32).collect();
    match mode {
        StreamOrder::Random => order.shuffle(&mut SeedPath::root(seed).label("archive-order").rng()),
        StreamOrder::Index => {}
        StreamOrder::Reverse => order.reverse(),
    }
    order
}

fn stream(backend: Backend, vectors: &[Vec<f64>], order: &[u32], timing: bool) -> Result<ArchiveRun> {
    let m = vectors.first().map_or(1, Vec::len);
    let mut archive: ParetoArchive = ParetoArchive::new(backend, m)?;
    // (size before, comparisons, inserted, ns)
    let mut steps: Vec<(u32, u64, bool, u64)> = Vec::with_capacity(order.len());
    for &idx in order {
        let before = archive.len();
        let comps = archive.comparison_count();
        let start = timing.then(Instant::now);
        let outcome = archive.update_raw(vectors[idx as usize].clone(), ());
        let ns = start.map_or(0, |t| t.elapsed().as_nanos() as u64);
        steps.push((before as u32, archive.comparison_count() - comps, outcome.is_inserted(), ns));
    }
    let last = archive.len().max(1);

    let mut deciles = [DecileStats::default(); 10];
    let mut running = 0u32;
    for (size, comps, inserted, ns) in steps {
        running = running.max(size);
        let d = ((10 * running as usize).div_ceil(last)).clamp(1, 10) - 1;
        let s = &mut deciles[d];
        s.offered += 1;
        s.inserted += inserted as u64;
        s.comparisons += comps;
        s.elapsed_ns += ns;
    }
    let mut snapshot: Vec<Vec<f64>> = archive.snapshot().into_iter().map(|v| v.into_inner()).collect();
    snapshot.sort_by(|a, b| lexicographic(a, b));
    Ok(ArchiveRun { backend, m, seed: 0, deciles, snapshot })
}

/// Per-solution comparison cost in the last non-empty decile over the first,
/// pooled over `runs`.
pub fn decile_ratio<'a>(runs: impl IntoIterator<Item = &'a ArchiveRun>) -> f64 {
    let mut pooled = [DecileStats::default(); 10];
    for r in runs {
        for (p, d) in pooled.iter_mut().zip(&r.deciles) {
            p.offered += d.offered;
            p.comparisons += d.comparisons;
        }
    }
    let cost = |d: &DecileStats| d.comparisons as f64 / d.offered as f64;
    let first = pooled.iter().find(|d| d.offered > 0);
    let last = pooled.iter().rev().find(|d| d.offered > 0);
    match (first, last) {
        (Some(a), Some(b)) => cost(b) / cost(a),
        _ => f64::NAN,
    }
}

/// Streams each instance through every backend and compares the final
/// archive against the brute-force non-dominated filter (duplicates
/// collapsed).
pub fn archive_correctness(n: usize, k: usize, ms: &[usize], instances: usize, seed: u64) -> Result<Check> {
    let cells: Vec<(usize, u64)> = ms
        .iter()
        .flat_map(|&m| (0..instances).map(move |i| (m, instance_seed(seed, i))))
        .collect();
    let mismatches = cells
        .par_iter()
        .map(|&(m, s)| {
            let inst = NkInstance::generate(n, k, m, s)?;
            let all = inst.evaluate_all()?;
            let mut oracle: Vec<Vec<f64>> = nondominated_indices(&all)?.into_iter().map(|i| all[i].clone()).collect();
            oracle.sort_by(|a, b| lexicographic(a, b));
            oracle.dedup();
            let order = stream_order(all.len(), s, StreamOrder::Random);
            let mut bad = Vec::new();
            for backend in Backend::ALL {
                if stream(backend, &all, &order, false)?.snapshot != oracle {
                    bad.push(format!("{backend} m={m} seed={s}"));
                }
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>>>()?
        .concat();
    Ok(Check::new(
        format!("archives equal the brute-force filter (n={n}, {} instances per m)", instances),
        mismatches.is_empty(),
        if mismatches.is_empty() {
            format!("{} streams x {} backends", cells.len(), Backend::ALL.len())
        } else {
            format!("mismatch: {}", mismatches.join("; "))
        },
    ))
}

pub(super) fn run(cfg: &Config) -> Result<ExperimentOutput> {
    let r = Reader::new(cfg);
    let n = r.scalar("n", 16usize)?;
    let k = r.scalar("k", 0usize)?;
    let ms = r.usize_list("m", &[3, 5, 10, 20])?;
    let instances = r.scalar("instances", 3usize)?;
    let backends = r.item_list("backends", &Backend::ALL)?;
    let order = r.scalar("order", StreamOrder::Random)?;
    let timing = r.bool("timing", false)?;
    let seed = r.scalar("seed", DEFAULT_SEED)?;
    let oracle_n = r.scalar("oracle_n", 10usize)?;
    let oracle_ms = r.usize_list("oracle_m", &[3, 10, 20])?;
    let oracle_instances = r.scalar("oracle_instances", 30usize)?;
    let mut out = ExperimentOutput::new(
        r.finish()?,
        vec!["backend", "n", "k", "m", "seed", "decile", "offered", "inserted", "comparisons", "elapsed_ns"],
    );
    if instances == 0 {
        return Err(Error::domain("instances must be at least 1"));
    }

    let cells: Vec<(usize, u64)> = ms
        .iter()
        .flat_map(|&m| (0..instances).map(move |i| (m, instance_seed(seed, i))))
        .collect();
    let prepared = cells
        .par_iter()
        .map(|&(m, s)| {
            let all = NkInstance::generate(n, k, m, s)?.evaluate_all()?;
            let order = stream_order(all.len(), s, order);
            Ok((all, order))
        })
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, Backend)> = (0..cells.len())
        .flat_map(|c| backends.iter().map(move |&b| (c, b)))
        .collect();
    let runs = jobs
        .par_iter()
        .map(|&(c, b)| {
            let (all, order) = &prepared[c];
            let mut run = stream(b, all, order, timing)?;
            run.seed = cells[c].1;
            Ok(run)
        })
        .collect::<Result<Vec<ArchiveRun>>>()?;
    drop(prepared);

    for run in &runs {
        for (d, s) in run.deciles.iter().enumerate() {
            out.rows.push(vec![
                run.backend.to_string(),
                n.to_string(),
                k.to_string(),
                run.m.to_string(),
                run.seed.to_string(),
                (d + 1).to_string(),
                s.offered.to_string(),
                s.inserted.to_string(),
                s.comparisons.to_string(),
                s.elapsed_ns.to_string(),
            ]);
        }
    }

    let disagreements: Vec<String> = runs
        .chunks(backends.len())
        .filter(|group| group.iter().any(|r| r.snapshot != group[0].snapshot))
        .map(|group| format!("m={} seed={}", group[0].m, group[0].seed))
        .collect();
    out.checks.push(Check::new(
        "final archives identical across backends",
        disagreements.is_empty(),
        if disagreements.is_empty() {
            format!("{} streams", cells.len())
        } else {
            disagreements.join("; ")
        },
    ));

    let ratio = |m: usize, b: Backend| decile_ratio(runs.iter().filter(|r| r.m == m && r.backend == b));
    // trend checks only describe the random order
    let trends = order == StreamOrder::Random;
    if trends && ms.contains(&3) && backends.contains(&Backend::List) && backends.contains(&Backend::NdTree) {
        let (list, tree) = (ratio(3, Backend::List), ratio(3, Backend::NdTree));
        out.checks.push(Check::new(
            "m=3: ND-Tree cost grows slower than the list",
            tree < list,
            format!("last/first decile cost: nd-tree {tree:.3}, list {list:.3}"),
        ));
    }
    if trends && ms.contains(&20) {
        let ratios: Vec<(Backend, f64)> = backends.iter().map(|&b| (b, ratio(20, b))).collect();
        let detail: Vec<String> = ratios.iter().map(|(b, v)| format!("{b} {v:.2}")).collect();
        out.checks.push(Check::new(
            "m=20: every backend's cost grows more than twofold",
            ratios.iter().all(|(_, v)| *v > 2.0),
            format!("last/first decile cost: {}", detail.join(", ")),
        ));
    }
    if oracle_instances > 0 {
        out.checks.push(archive_correctness(oracle_n, k, &oracle_ms, oracle_instances, seed)?);
    }
    Ok(out)
}
