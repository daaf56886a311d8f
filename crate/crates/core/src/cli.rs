//! The `pareto-lab` command line.
//!
//! Exit codes: 0 on success, 1 when an experiment run with `--check` fails a
//! check, 2 on usage errors and unreadable or invalid input.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::experiments::{run_with_jobs, Config, Experiment, StreamOrder};
use crate::hypervolume::{hv_exact, hv_monte_carlo, load_points, parse_vector, HvProblem, McOptions};
use crate::landscape::{NkInstance, Solution};
use crate::rng::DEFAULT_SEED;
use crate::scalarization::{Functional, GeneralScalarizer, Halfspace, PolyhedralSet, ScalarValue, Sense};
use crate::weights::{simplex_lattice, smallest_h};

const AFTER_HELP: &str = "Every random choice derives from --seed; the default seed is 20240611.";

#[derive(Debug, Parser)]
#[command(name = "pareto-lab", version, about = "Many-objective optimization toolkit", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate an NK-landscape instance file.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the objective vector of bit strings.
    Evaluate {
        #[arg(long)]
        instance: PathBuf,
        /// Bit string such as 0110; repeat for several.
        #[arg(long = "solution", required = true)]
        solutions: Vec<String>,
    },
    /// Print the share of Pareto-optimal solutions.
    Pareto {
        #[arg(long)]
        instance: PathBuf,
        /// Also list every Pareto-optimal solution and its objectives.
        #[arg(long)]
        list: bool,
    },
    /// Stream landscapes through the archive backends and write the benchmark CSV.
    ArchiveBench(ArchiveBenchArgs),
    /// Exact hypervolume of a point file.
    Hv {
        #[command(flatten)]
        input: HvInput,
    },
    /// Monte-Carlo hypervolume with a Wilson stopping rule.
    HvMc {
        #[command(flatten)]
        input: HvInput,
        #[arg(long, default_value_t = 0.01)]
        target_width: f64,
        #[arg(long, default_value_t = 0.95)]
        confidence: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 10_000_000)]
        max_samples: u64,
        #[arg(long, default_value_t = 10_000)]
        batch: u64,
    },
    /// Optimize a scalarizing functional over every solution of an instance (maximizes unless --minimize).
    Scalarize(ScalarizeArgs),
    /// Write a simplex-lattice weight set.
    Weights {
        #[arg(long)]
        m: usize,
        #[arg(long = "H", short = 'H', conflicts_with = "min_count", required_unless_present = "min_count")]
        h: Option<usize>,
        /// Use the smallest H giving at least this many vectors.
        #[arg(long)]
        min_count: Option<u64>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one of the batch experiments and write `<out>/<name>.csv`.
    Experiment {
        /// One of: pareto-proportion, nd-pairs, nd-population, heterogeneity,
        /// distances, archive-bench, hv-study, weight-distances.
        name: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Exit with status 1 when any check fails.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Overrides the config's seed (default 20240611).
        #[arg(long)]
        seed: Option<u64>,
        /// Extra `key=value` setting; repeatable, wins over the config file.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

#[derive(Debug, Args)]
struct ArchiveBenchArgs {
    #[arg(long, default_value_t = 16)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// Objective counts, e.g. `3,5,10,20` or `3..20`.
    #[arg(long, default_value = "3,5,10,20")]
    m: String,
    #[arg(long, default_value_t = 3)]
    instances: usize,
    /// Comma-separated subset of list, nd-tree, quad-tree.
    #[arg(long, default_value = "list,nd-tree,quad-tree")]
    backends: String,
    #[arg(long, value_enum, default_value_t = OrderArg::Random)]
    order: OrderArg,
    /// Record wall time per decile (makes the CSV machine-dependent).
    #[arg(long)]
    timing: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Exit with status 1 when any check fails.
    #[arg(long)]
    check: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrderArg {
    Random,
    Index,
    Reverse,
}

impl From<OrderArg> for StreamOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Random => StreamOrder::Random,
            OrderArg::Index => StreamOrder::Index,
            OrderArg::Reverse => StreamOrder::Reverse,
        }
    }
}

#[derive(Debug, Args)]
struct HvInput {
    /// One comma-separated vector per line.
    #[arg(long)]
    points: PathBuf,
    /// Reference point, e.g. `0,0`.
    #[arg(long = "ref", allow_hyphen_values = true)]
    reference: String,
}

impl HvInput {
    fn problem(&self) -> Result<HvProblem> {
        HvProblem::new(load_points(&self.points)?, parse_vector(&self.reference)?)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FunctionalArg {
    Chebyshev,
    Wsum,
    Eps,
    Ps,
    General,
}

#[derive(Debug, Args)]
struct ScalarizeArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    functional: FunctionalArg,
    /// chebyshev: lambda; wsum: a.
    #[arg(long, allow_hyphen_values = true)]
    weights: Option<String>,
    /// chebyshev: reference point w; ps: reference point a; general: w.
    #[arg(long = "ref", allow_hyphen_values = true)]
    reference: Option<String>,
    /// eps: the m-1 bounds for the objectives other than --j.
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<String>,
    /// eps: index of the optimized objective.
    #[arg(long)]
    j: Option<usize>,
    /// ps and general: direction k.
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    /// general: file of rows `a_1,...,a_m,alpha` meaning `<a, y> <= alpha`.
    #[arg(long)]
    rows: Option<PathBuf>,
    /// Treat the landscape objectives as minimized (default: maximized).
    #[arg(long)]
    minimize: bool,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

fn vector(flag: &str, value: &Option<String>) -> Result<Vec<f64>> {
    let s = value.as_deref().ok_or_else(|| usage(format!("--{flag} is required for this functional")))?;
    Ok(parse_vector(s)?.into_inner())
}

fn read_rows(path: &PathBuf) -> Result<Vec<Halfspace>> {
    let text = fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut v = parse_vector(line).map_err(|e| Error::malformed(i + 1, e.to_string()))?.into_inner();
        if v.len() < 2 {
            return Err(Error::malformed(i + 1, "a row needs coefficients and an offset"));
        }
        let alpha = v.pop().expect("checked length");
        rows.push(Halfspace { a: v, alpha });
    }
    Ok(rows)
}

fn functional(a: &ScalarizeArgs, m: usize) -> Result<Functional> {
    Ok(match a.functional {
        FunctionalArg::Chebyshev => Functional::Chebyshev {
            lambda: vector("weights", &a.weights)?,
            w: match &a.reference {
                Some(_) => vector("ref", &a.reference)?,
                None => vec![0.0; m],
            },
        },
        FunctionalArg::Wsum => Functional::WeightedSum { a: vector("weights", &a.weights)? },
        FunctionalArg::Eps => Functional::EpsilonConstraint {
            j: a.j.ok_or_else(|| usage("--j is required for eps"))?,
            eps: vector("eps", &a.eps)?,
        },
        FunctionalArg::Ps => Functional::PascolettiSerafini { a: vector("ref", &a.reference)?, k: vector("k", &a.k)? },
        FunctionalArg::General => {
            let path = a.rows.as_ref().ok_or_else(|| usage("--rows is required for general"))?;
            let w = match &a.reference {
                Some(_) => vector("ref", &a.reference)?,
                None => vec![0.0; m],
            };
            Functional::General(GeneralScalarizer::new(PolyhedralSet::new(read_rows(path)?)?, w, vector("k", &a.k)?)?)
        }
    })
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

fn run_experiment(
    exp: Experiment,
    cfg: &Config,
    out_dir: &PathBuf,
    jobs: usize,
    check: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let result = run_with_jobs(exp, cfg, jobs)?;
    let path = result.write_to_dir(out_dir)?;
    writeln!(out, "wrote {} ({} rows)", path.display(), result.rows.len())?;
    for c in &result.checks {
        writeln!(out, "{c}")?;
    }
    Ok(if check && !result.passed() { 1 } else { 0 })
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Generate { n, k, m, seed, out: path } => {
            let inst = NkInstance::generate(n, k, m, seed)?;
            inst.save(&path)?;
            writeln!(err, "seed {seed}")?;
            writeln!(out, "wrote {}", path.display())?;
        }
        Command::Evaluate { instance, solutions } => {
            let inst = NkInstance::load(&instance)?;
            for s in &solutions {
                let y = inst.evaluate(&Solution::parse(s)?)?;
                writeln!(out, "{s} {}", join(&y))?;
            }
        }
        Command::Pareto { instance, list } => {
            let inst = NkInstance::load(&instance)?;
            if list {
                for (x, y) in inst.enumerate_pareto_set()? {
                    writeln!(out, "{x} {}", join(&y))?;
                }
            }
            writeln!(out, "{}", inst.proportion_pareto_optimal()?)?;
        }
        Command::ArchiveBench(a) => {
            let mut cfg = Config::default();
            cfg.set("n", a.n);
            cfg.set("k", a.k);
            cfg.set("m", &a.m);
            cfg.set("instances", a.instances);
            cfg.set("backends", a.backends.replace(',', ";"));
            cfg.set("order", StreamOrder::from(a.order));
            cfg.set("timing", a.timing);
            cfg.set("seed", a.seed);
            return run_experiment(Experiment::ArchiveBench, &cfg, &a.out, a.jobs, a.check, out);
        }
        Command::Hv { input } => {
            writeln!(out, "{}", hv_exact(&input.problem()?)?.value)?;
        }
        Command::HvMc { input, target_width, confidence, seed, max_samples, batch } => {
            let est = hv_monte_carlo(
                &input.problem()?,
                &McOptions { target_width, confidence, batch, max_samples, seed },
            )?;
            writeln!(out, "value {}", est.value)?;
            if let Some((lo, hi)) = est.interval {
                writeln!(out, "interval {lo} {hi}")?;
            }
            writeln!(out, "samples {}", est.samples)?;
        }
        Command::Scalarize(a) => {
            let inst = NkInstance::load(&a.instance)?;
            let f = functional(&a, inst.m())?;
            let sense = if a.minimize { Sense::Minimize } else { Sense::Maximize };
            let best = crate::scalarization::scalarize_landscape(&inst, &f, sense)?;
            let value = match best.value {
                ScalarValue::Value(v) => v.to_string(),
                ScalarValue::Infeasible => "infeasible".into(),
            };
            writeln!(out, "solution {}", best.solution)?;
            writeln!(out, "objectives {}", join(&best.objectives))?;
            writeln!(out, "{} {value}", f.name())?;
        }
        Command::Weights { m, h, min_count, out: path } => {
            let h = match (h, min_count) {
                (Some(h), _) => h,
                (None, Some(c)) => smallest_h(m, c)?,
                (None, None) => return Err(usage("pass --H or --min-count")),
            };
            let set = simplex_lattice(m, h)?;
            let mut text = String::new();
            for v in set.vectors() {
                text.push_str(&join(v.values()));
                text.push('\n');
            }
            match path {
                Some(p) => {
                    fs::write(&p, text)?;
                    writeln!(out, "wrote {} vectors (H={h}) to {}", set.len(), p.display())?;
                }
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Experiment { name, config, out: dir, check, jobs, seed, overrides } => {
            let exp: Experiment = name.parse()?;
            let mut cfg = match config {
                Some(p) => Config::load(p)?,
                None => Config::default(),
            };
            for o in &overrides {
                let (k, v) = o
                    .split_once('=')
                    .ok_or_else(|| usage(format!("--set expects KEY=VALUE, got `{o}`")))?;
                cfg.set(k.trim(), v.trim());
            }
            if let Some(s) = seed {
                cfg.set("seed", s);
            }
            return run_experiment(exp, &cfg, &dir, jobs, check, out);
        }
    }
    Ok(0)
}

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
