//! Share of Pareto-optimal solutions in NK-landscapes as m grows.

use rayon::prelude::*;

use super::{fmt_f64, instance_seed, summarize, Check, Config, ExperimentOutput, Reader};
use crate::error::Result;
use crate::landscape::NkInstance;
use crate::rng::DEFAULT_SEED;

pub(super) fn run(cfg: &Config) -> Result<ExperimentOutput> {
    let r = Reader::new(cfg);
    let n = r.scalar("n", 10usize)?;
    let k = r.scalar("k", 0usize)?;
    let ms = r.usize_list("m", &(2..=20).collect::<Vec<_>>())?;
    let instances = r.scalar("instances", 30usize)?;
    let seed = r.scalar("seed", DEFAULT_SEED)?;
    let mut out = ExperimentOutput::new(r.finish()?, vec!["m", "seed", "proportion"]);
    if instances == 0 {
        return Err(crate::Error::domain("instances must be at least 1"));
    }

    let cells: Vec<(usize, u64)> = ms
        .iter()
        .flat_map(|&m| (0..instances).map(move |i| (m, instance_seed(seed, i))))
        .collect();
    let props = cells
        .par_iter()
        .map(|&(m, s)| NkInstance::generate(n, k, m, s)?.proportion_pareto_optimal())
        .collect::<Result<Vec<f64>>>()?;

    for (&(m, s), p) in cells.iter().zip(&props) {
        out.rows.push(vec![m.to_string(), s.to_string(), fmt_f64(*p)]);
    }

    let mean_at = |m: usize| -> Option<f64> {
        let v: Vec<f64> = cells
            .iter()
            .zip(&props)
            .filter(|((cm, _), _)| *cm == m)
            .map(|(_, p)| *p)
            .collect();
        (!v.is_empty()).then(|| summarize(&v).mean)
    };
    if let Some(p) = mean_at(2) {
        out.checks.push(Check::new("pareto share at m=2 below 0.05", p < 0.05, format!("mean {p:.4}")));
    }
    if let Some(p) = mean_at(7) {
        out.checks.push(Check::new(
            "pareto share at m=7 in [0.35, 0.65]",
            (0.35..=0.65).contains(&p),
            format!("mean {p:.4}"),
        ));
    }
    if let Some(p) = mean_at(20) {
        out.checks.push(Check::new("pareto share at m=20 above 0.99", p > 0.99, format!("mean {p:.4}")));
    }
    Ok(out)
}
