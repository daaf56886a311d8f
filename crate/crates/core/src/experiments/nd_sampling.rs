//! How often random solutions are mutually non-dominated.
//!
//! `nd-pairs` draws μ independent pairs of distinct random solutions and asks
//! whether every pair is incomparable; `nd-population` draws populations of
//! μ solutions with replacement and measures how many escape domination.
//! Both repeat `samples` times per instance. `nd-pairs` additionally runs the
//! same protocol on independent uniform vectors, where the closed-form model
//! is exact.

use rand::Rng;
use rayon::prelude::*;

use super::{fmt_f64, instance_seed, summarize, Check, Config, ExperimentOutput, Reader};
use crate::dominance::{all_pairs_nd_probability, nondominated_indices, relation, DominanceRelation};
use crate::error::{Error, Result};
use crate::landscape::NkInstance;
use crate::rng::{SeedPath, DEFAULT_SEED};

const DEFAULT_MUS: [usize; 4] = [1, 10, 100, 1000];

fn default_ms() -> Vec<usize> {
    (2..=20).collect()
}

fn incomparable(a: &[f64], b: &[f64]) -> bool {
    relation(a, b) == DominanceRelation::Incomparable
}

/// Outcome of the uniform-vector protocol for one `(m, mu)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformNd {
    pub m: usize,
    pub mu: usize,
    pub trials: usize,
    /// Trials in which all μ pairs were incomparable.
    pub successes: usize,
    pub pairwise: f64,
    pub theoretical: f64,
}

impl UniformNd {
    pub fn proportion(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    pub fn standard_error(&self) -> f64 {
        (self.theoretical * (1.0 - self.theoretical) / self.trials as f64).sqrt()
    }

    /// Distance to the model in standard errors (0 when both are degenerate).
    pub fn z_score(&self) -> f64 {
        let diff = (self.proportion() - self.theoretical).abs();
        let se = self.standard_error();
        if diff == 0.0 {
            0.0
        } else if se == 0.0 {
            f64::INFINITY
        } else {
            diff / se
        }
    }
}

/// Empirical all-pairs non-dominance of uniform vectors in `[0,1]^m`.
pub fn uniform_nd_fidelity(m: usize, mu: usize, trials: usize, seed: u64) -> Result<UniformNd> {
    if m < 1 || mu < 1 || trials < 1 {
        return Err(Error::domain("m, mu and trials must be positive"));
    }
    let theoretical = all_pairs_nd_probability(m, mu as u64)?;
    let mut rng = SeedPath::root(seed).label("uniform-nd").index(m as u64).index(mu as u64).rng();
    let (mut a, mut b) = (vec![0.0; m], vec![0.0; m]);
    let mut successes = 0;
    let mut nd_pairs = 0u64;
    for _ in 0..trials {
        let mut all = true;
        for _ in 0..mu {
            a.iter_mut().for_each(|v| *v = rng.random::<f64>());
            b.iter_mut().for_each(|v| *v = rng.random::<f64>());
            if incomparable(&a, &b) {
                nd_pairs += 1;
            } else {
                all = false;
            }
        }
        successes += all as usize;
    }
    Ok(UniformNd {
        m,
        mu,
        trials,
        successes,
        pairwise: nd_pairs as f64 / (trials * mu) as f64,
        theoretical,
    })
}

struct Common {
    n: usize,
    k: usize,
    ms: Vec<usize>,
    mus: Vec<usize>,
    instances: usize,
    samples: usize,
    seed: u64,
}

fn read_common(r: &Reader) -> Result<Common> {
    let c = Common {
        n: r.scalar("n", 10usize)?,
        k: r.scalar("k", 0usize)?,
        ms: r.usize_list("m", &default_ms())?,
        mus: r.usize_list("mu", &DEFAULT_MUS)?,
        instances: r.scalar("instances", 30usize)?,
        samples: r.scalar("samples", 30usize)?,
        seed: r.scalar("seed", DEFAULT_SEED)?,
    };
    if c.instances == 0 || c.samples == 0 || c.mus.contains(&0) {
        return Err(Error::domain("instances, samples and every mu must be at least 1"));
    }
    Ok(c)
}

fn cells(c: &Common) -> Vec<(usize, u64)> {
    c.ms.iter()
        .flat_map(|&m| (0..c.instances).map(move |i| (m, instance_seed(c.seed, i))))
        .collect()
}

pub(super) fn run_pairs(cfg: &Config) -> Result<ExperimentOutput> {
    let r = Reader::new(cfg);
    let c = read_common(&r)?;
    let uniform_ms = r.usize_list("uniform_m", &[2, 5, 10])?;
    let uniform_mus = r.usize_list("uniform_mu", &[1, 10, 100])?;
    let uniform_trials = r.scalar("uniform_trials", 1000usize)?;
    let mut out = ExperimentOutput::new(
        r.finish()?,
        vec!["source", "m", "mu", "seed", "samples", "proportion_all_nd", "proportion_pairwise_nd", "theoretical"],
    );
    if c.n < 1 {
        return Err(Error::domain("n must be at least 1 to draw distinct pairs"));
    }

    let results = cells(&c)
        .into_par_iter()
        .map(|(m, s)| {
            let inst = NkInstance::generate(c.n, c.k, m, s)?;
            let all = inst.evaluate_all()?;
            let space = all.len();
            let mut rows = Vec::with_capacity(c.mus.len());
            for &mu in &c.mus {
                let mut rng = SeedPath::root(s).label("nd-pairs").index(m as u64).index(mu as u64).rng();
                let mut all_nd = 0usize;
                let mut pair_fraction = 0.0;
                for _ in 0..c.samples {
                    let mut nd = 0usize;
                    for _ in 0..mu {
                        let i = rng.random_range(0..space);
                        let j = (i + rng.random_range(1..space)) % space;
                        nd += incomparable(&all[i], &all[j]) as usize;
                    }
                    all_nd += (nd == mu) as usize;
                    pair_fraction += nd as f64 / mu as f64;
                }
                rows.push((
                    m,
                    mu,
                    s,
                    all_nd as f64 / c.samples as f64,
                    pair_fraction / c.samples as f64,
                    all_pairs_nd_probability(m, mu as u64)?,
                ));
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<_> = results.into_iter().flatten().collect();
    for &(m, mu, s, all, pair, theory) in &rows {
        out.rows.push(vec![
            "nk".into(),
            m.to_string(),
            mu.to_string(),
            s.to_string(),
            c.samples.to_string(),
            fmt_f64(all),
            fmt_f64(pair),
            fmt_f64(theory),
        ]);
    }

    let uniform_cells: Vec<(usize, usize)> = uniform_ms
        .iter()
        .flat_map(|&m| uniform_mus.iter().map(move |&mu| (m, mu)))
        .collect();
    let uniform = uniform_cells
        .into_par_iter()
        .map(|(m, mu)| uniform_nd_fidelity(m, mu, uniform_trials, c.seed))
        .collect::<Result<Vec<_>>>()?;
    for u in &uniform {
        out.rows.push(vec![
            "uniform".into(),
            u.m.to_string(),
            u.mu.to_string(),
            c.seed.to_string(),
            u.trials.to_string(),
            fmt_f64(u.proportion()),
            fmt_f64(u.pairwise),
            fmt_f64(u.theoretical),
        ]);
    }

    let worst = uniform.iter().map(UniformNd::z_score).fold(0.0, f64::max);
    out.checks.push(Check::new(
        "uniform vectors follow the all-pairs model within 4 standard errors",
        worst <= 4.0,
        format!("{} settings, worst deviation {worst:.2} SE", uniform.len()),
    ));

    let mean_where = |m: usize, mu: usize, pick: fn(&(usize, usize, u64, f64, f64, f64)) -> f64| -> Option<f64> {
        let v: Vec<f64> = rows.iter().filter(|r| r.0 == m && r.1 == mu).map(pick).collect();
        (!v.is_empty()).then(|| summarize(&v).mean)
    };
    if let Some(p) = mean_where(16, 1000, |r| r.3) {
        out.checks.push(Check::new(
            "all 1000 pairs non-dominated at m=16 in most samples",
            p > 0.5,
            format!("mean proportion {p:.4}"),
        ));
    }
    let single: Vec<_> = rows.iter().filter(|r| r.1 == 1).collect();
    if !single.is_empty() {
        let same = single.iter().all(|r| r.3 == r.4);
        out.checks.push(Check::new(
            "with a single pair both statistics coincide",
            same,
            format!("{} rows with mu=1", single.len()),
        ));
    }
    Ok(out)
}

pub(super) fn run_population(cfg: &Config) -> Result<ExperimentOutput> {
    let r = Reader::new(cfg);
    let c = read_common(&r)?;
    let mut out = ExperimentOutput::new(
        r.finish()?,
        vec!["m", "mu", "seed", "samples", "prob_one_nondominated", "proportion_nondominated"],
    );

    let results = cells(&c)
        .into_par_iter()
        .map(|(m, s)| {
            let inst = NkInstance::generate(c.n, c.k, m, s)?;
            let all = inst.evaluate_all()?;
            let space = all.len();
            let mut rows = Vec::with_capacity(c.mus.len());
            for &mu in &c.mus {
                let mut rng = SeedPath::root(s).label("nd-population").index(m as u64).index(mu as u64).rng();
                let mut one = 0usize;
                let mut share = 0.0;
                for _ in 0..c.samples {
                    let focal = &all[rng.random_range(0..space)];
                    let pop: Vec<&[f64]> = (0..mu).map(|_| all[rng.random_range(0..space)].as_slice()).collect();
                    let beaten = pop.iter().any(|p| relation(p, focal) == DominanceRelation::Dominates);
                    one += (!beaten) as usize;
                    share += nondominated_indices(&pop)?.len() as f64 / mu as f64;
                }
                rows.push((m, mu, s, one as f64 / c.samples as f64, share / c.samples as f64));
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<_> = results.into_iter().flatten().collect();
    for &(m, mu, s, one, share) in &rows {
        out.rows.push(vec![
            m.to_string(),
            mu.to_string(),
            s.to_string(),
            c.samples.to_string(),
            fmt_f64(one),
            fmt_f64(share),
        ]);
    }

    let mean_where = |m: usize, mu: usize, pick: fn(&(usize, usize, u64, f64, f64)) -> f64| -> Option<f64> {
        let v: Vec<f64> = rows.iter().filter(|r| r.0 == m && r.1 == mu).map(pick).collect();
        (!v.is_empty()).then(|| summarize(&v).mean)
    };
    if let Some(p) = mean_where(2, 1000, |r| r.3) {
        out.checks.push(Check::new(
            "m=2: a solution rarely survives 1000 rivals",
            p < 0.05,
            format!("mean probability {p:.4}"),
        ));
    }
    let mut low = f64::INFINITY;
    let mut seen = 0;
    for &m in c.ms.iter().filter(|&&m| m >= 13) {
        for &mu in c.mus.iter().filter(|&&mu| mu <= 1000) {
            for pick in [|r: &(usize, usize, u64, f64, f64)| r.3, |r: &(usize, usize, u64, f64, f64)| r.4] {
                if let Some(p) = mean_where(m, mu, pick) {
                    low = low.min(p);
                    seen += 1;
                }
            }
        }
    }
    if seen > 0 {
        out.checks.push(Check::new(
            "m>=13: both statistics above 0.85",
            low > 0.85,
            format!("lowest mean {low:.4} over {seen} settings"),
        ));
    }
    if let Some(p) = mean_where(2, 10, |r| r.4) {
        out.checks.push(Check::new(
            "m=2, mu=10: non-dominated share in [0.15, 0.45]",
            (0.15..=0.45).contains(&p),
            format!("mean share {p:.4}"),
        ));
    }
    Ok(out)
}
