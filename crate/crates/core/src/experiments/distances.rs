//! Hamming and objective-space distances between random solutions and
//! between Pareto-optimal ones.

use rand::Rng;
use rayon::prelude::*;

use super::{fmt_f64, instance_seed, summarize, Check, Config, ExperimentOutput, Reader};
use crate::error::{Error, Result};
use crate::landscape::{NkInstance, Solution};
use crate::rng::{SeedPath, StreamRng, DEFAULT_SEED};

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Two distinct indices below `len` (which must be at least 2).
fn distinct_pair(rng: &mut StreamRng, len: usize) -> (usize, usize) {
    let i = rng.random_range(0..len);
    (i, (i + rng.random_range(1..len)) % len)
}

struct Cell {
    m: usize,
    seed: u64,
    random: (f64, f64),
    pareto: Option<(f64, f64)>,
}

pub(super) fn run(cfg: &Config) -> Result<ExperimentOutput> {
    let r = Reader::new(cfg);
    let n = r.scalar("n", 10usize)?;
    let k = r.scalar("k", 0usize)?;
    let ms = r.usize_list("m", &(2..=20).collect::<Vec<_>>())?;
    let instances = r.scalar("instances", 30usize)?;
    let pairs = r.scalar("pairs", 30usize)?;
    let seed = r.scalar("seed", DEFAULT_SEED)?;
    let mut out = ExperimentOutput::new(
        r.finish()?,
        vec!["m", "seed", "space", "pairs", "hamming", "euclidean", "status"],
    );
    if instances == 0 || pairs == 0 || n == 0 {
        return Err(Error::domain("n, instances and pairs must be at least 1"));
    }

    let jobs: Vec<(usize, u64)> = ms
        .iter()
        .flat_map(|&m| (0..instances).map(move |i| (m, instance_seed(seed, i))))
        .collect();
    let cells = jobs
        .par_iter()
        .map(|&(m, s)| {
            let inst = NkInstance::generate(n, k, m, s)?;
            let all = inst.evaluate_all()?;
            let mut rng = SeedPath::root(s).label("distances").index(m as u64).rng();

            let mut ham = 0.0;
            let mut euc = 0.0;
            for _ in 0..pairs {
                let (i, j) = distinct_pair(&mut rng, all.len());
                ham += Solution::from_index(i as u64, n).hamming(&Solution::from_index(j as u64, n)) as f64;
                euc += euclid(&all[i], &all[j]);
            }
            let random = (ham / pairs as f64, euc / pairs as f64);

            let front = inst.enumerate_pareto_set()?;
            let pareto = (front.len() >= 2).then(|| {
                let mut ham = 0.0;
                let mut euc = 0.0;
                for _ in 0..pairs {
                    let (i, j) = distinct_pair(&mut rng, front.len());
                    ham += front[i].0.hamming(&front[j].0) as f64;
                    euc += euclid(&front[i].1, &front[j].1);
                }
                (ham / pairs as f64, euc / pairs as f64)
            });
            Ok(Cell { m, seed: s, random, pareto })
        })
        .collect::<Result<Vec<Cell>>>()?;

    for c in &cells {
        out.rows.push(vec![
            c.m.to_string(),
            c.seed.to_string(),
            "random".into(),
            pairs.to_string(),
            fmt_f64(c.random.0),
            fmt_f64(c.random.1),
            "ok".into(),
        ]);
        match c.pareto {
            Some((h, e)) => out.rows.push(vec![
                c.m.to_string(),
                c.seed.to_string(),
                "pareto".into(),
                pairs.to_string(),
                fmt_f64(h),
                fmt_f64(e),
                "ok".into(),
            ]),
            None => out.rows.push(vec![
                c.m.to_string(),
                c.seed.to_string(),
                "pareto".into(),
                "0".into(),
                String::new(),
                String::new(),
                "skipped-small-front".into(),
            ]),
        }
    }

    let half = n as f64 / 2.0;
    let mut worst = 0.0f64;
    for &m in &ms {
        let rand: Vec<f64> = cells.iter().filter(|c| c.m == m).map(|c| c.random.0).collect();
        worst = worst.max((summarize(&rand).mean - half).abs());
    }
    out.checks.push(Check::new(
        format!("random-pair Hamming distance within 0.5 of {half} at every m"),
        worst <= 0.5,
        format!("largest deviation {worst:.3}"),
    ));

    let compare = |m: usize| {
        let rand: Vec<f64> = cells.iter().filter(|c| c.m == m).map(|c| c.random.0).collect();
        let par: Vec<f64> = cells.iter().filter(|c| c.m == m).filter_map(|c| c.pareto.map(|p| p.0)).collect();
        (summarize(&rand), summarize(&par))
    };
    let high: Vec<usize> = ms.iter().copied().filter(|&m| m >= 15).collect();
    if !high.is_empty() {
        let gap = high
            .iter()
            .map(|&m| {
                let (a, b) = compare(m);
                (a.mean - b.mean).abs()
            })
            .fold(0.0f64, f64::max);
        out.checks.push(Check::new(
            "m>=15: Pareto-pair Hamming within 0.5 of random pairs",
            gap <= 0.5,
            format!("largest gap {gap:.3}"),
        ));
    }
    if ms.contains(&2) {
        let (a, b) = compare(2);
        let sigma = (a.se * a.se + b.se * b.se).sqrt();
        out.checks.push(Check::new(
            "m=2: Pareto pairs closer than random pairs by 3 sigma",
            b.count > 0 && a.mean - b.mean > 3.0 * sigma,
            format!("pareto {:.3} vs random {:.3} (sigma {:.3}, {} fronts)", b.mean, a.mean, sigma, b.count),
        ));
    }
    Ok(out)
}
