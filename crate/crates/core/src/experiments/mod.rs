//! Batch harness reproducing the empirical studies as CSV tables.
//!
//! Each experiment reads a flat [`Config`], runs its cells in parallel on the
//! current rayon pool and collects rows in a fixed cell order, so the output
//! depends only on the configuration. Every experiment also evaluates a set
//! of [`Check`]s on its own results; the CLI turns failed checks into a
//! nonzero exit under `--check`.

mod archive_bench;
mod config;
mod distances;
mod heterogeneity;
mod hv_study;
mod nd_sampling;
mod proportion;
mod weight_distances;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

pub use archive_bench::{archive_correctness, decile_ratio, ArchiveRun, StreamOrder};
pub use config::{parse_usize_list, Config, Reader};
pub use heterogeneity::LatencyModel;
pub use hv_study::{mc_coverage, normalize_front, reflect_front};
pub use nd_sampling::uniform_nd_fidelity;

use crate::error::{Error, Result};

/// Build identifier written into every CSV.
pub const VERSION: &str = concat!("pareto-lab ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Experiment {
    ParetoProportion,
    NdPairs,
    NdPopulation,
    Heterogeneity,
    Distances,
    ArchiveBench,
    HvStudy,
    WeightDistances,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::ParetoProportion,
        Experiment::NdPairs,
        Experiment::NdPopulation,
        Experiment::Heterogeneity,
        Experiment::Distances,
        Experiment::ArchiveBench,
        Experiment::HvStudy,
        Experiment::WeightDistances,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::ParetoProportion => "pareto-proportion",
            Experiment::NdPairs => "nd-pairs",
            Experiment::NdPopulation => "nd-population",
            Experiment::Heterogeneity => "heterogeneity",
            Experiment::Distances => "distances",
            Experiment::ArchiveBench => "archive-bench",
            Experiment::HvStudy => "hv-study",
            Experiment::WeightDistances => "weight-distances",
        }
    }

    pub fn run(self, cfg: &Config) -> Result<ExperimentOutput> {
        let out = match self {
            Experiment::ParetoProportion => proportion::run(cfg),
            Experiment::NdPairs => nd_sampling::run_pairs(cfg),
            Experiment::NdPopulation => nd_sampling::run_population(cfg),
            Experiment::Heterogeneity => heterogeneity::run(cfg),
            Experiment::Distances => distances::run(cfg),
            Experiment::ArchiveBench => archive_bench::run(cfg),
            Experiment::HvStudy => hv_study::run(cfg),
            Experiment::WeightDistances => weight_distances::run(cfg),
        }?;
        Ok(ExperimentOutput { experiment: self, ..out })
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s.trim())
            .ok_or_else(|| {
                let names: Vec<&str> = Experiment::ALL.iter().map(|e| e.name()).collect();
                Error::domain(format!("unknown experiment `{s}`; expected one of {}", names.join(", ")))
            })
    }
}

/// A pass/fail statement about an experiment's results.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub experiment: Experiment,
    /// Effective settings after defaults, sorted by key.
    pub resolved: Vec<(String, String)>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub checks: Vec<Check>,
}

impl ExperimentOutput {
    pub(crate) fn new(resolved: Vec<(String, String)>, header: Vec<&'static str>) -> Self {
        ExperimentOutput {
            experiment: Experiment::ParetoProportion,
            resolved,
            header,
            rows: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// SHA-256 of the resolved settings, one `key=value` per line.
    pub fn config_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.experiment.name().as_bytes());
        h.update(b"\n");
        for (k, v) in &self.resolved {
            h.update(format!("{k}={v}\n").as_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn provenance(&self) -> String {
        let settings: Vec<String> = self.resolved.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!(
            "# {VERSION} experiment={} config-sha256={} {}",
            self.experiment.name(),
            self.config_hash(),
            settings.join(" ")
        )
    }

    /// The full CSV document: provenance comment, header, rows.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        buf.extend_from_slice(self.provenance().as_bytes());
        buf.push(b'\n');
        {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut buf);
            w.write_record(&self.header)?;
            for row in &self.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Ok(buf)
    }

    /// Writes `<dir>/<name>.csv` and returns its path.
    pub fn write_to_dir(&self, dir: impl AsRef<Path>) -> Result<PathBuf> {
        fs::create_dir_all(&dir)?;
        let path = dir.as_ref().join(format!("{}.csv", self.experiment.name()));
        fs::write(&path, self.to_csv()?)?;
        Ok(path)
    }
}

/// Runs `exp` on a dedicated pool of `jobs` workers.
pub fn run_with_jobs(exp: Experiment, cfg: &Config, jobs: usize) -> Result<ExperimentOutput> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::domain(format!("cannot start worker pool: {e}")))?;
    pool.install(|| exp.run(cfg))
}

/// Mean, sample standard deviation and standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub sd: f64,
    pub se: f64,
}

pub fn summarize(values: &[f64]) -> Summary {
    let count = values.len();
    if count == 0 {
        return Summary { count, mean: f64::NAN, sd: f64::NAN, se: f64::NAN };
    }
    let n = count as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = if count > 1 {
        (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Summary { count, mean, sd, se: sd / n.sqrt() }
}

/// Seed of instance `i` for a base seed.
pub(crate) fn instance_seed(base: u64, i: usize) -> u64 {
    base.wrapping_add(i as u64)
}

pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub(crate) fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}
