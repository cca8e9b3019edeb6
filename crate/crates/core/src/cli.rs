//! Command-line front end.
//!
//! Data (tables, CSV, reports) goes to standard output or the `--output`
//! file; progress and diagnostics go to standard error. Exit codes: 0
//! success, 2 usage, 3 I/O, 4 numeric validation.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::format::sig9;
use crate::inequality::{classical_bound, quantum_value, vbc_value, CLASSICAL_BOUND};
use crate::montecarlo::report;
use crate::sweep::{
    default_purity_grid, epsilon_of_fidelity, eta_of_purity, sweep, DEFAULT_FIDELITIES,
};
use crate::switch::NoiseParams;
use crate::{process, sweep as sweep_mod, switch};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "switchlab",
    version,
    about = "Quantum-switch causal-order test laboratory"
)]
pub struct Cli {
    /// Flat key=value file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker thread cap (default: machine parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the three terms and the total for one noise point.
    Ideal(NoiseArgs),
    /// Dump the full probability table as CSV.
    Probs {
        #[command(flatten)]
        noise: NoiseArgs,
        #[arg(long, value_enum, default_value_t = Backend::Kraus)]
        backend: Backend,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Enumerate deterministic strategies and print the classical bound.
    Bound {
        /// Also print every maximising strategy.
        #[arg(long)]
        list: bool,
    },
    /// Value against purity for several switch fidelities, as CSV.
    Sweep {
        #[arg(long, default_value_t = 151)]
        steps: usize,
        #[arg(long, value_delimiter = ',')]
        fidelities: Option<Vec<f64>>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Finite-count emulation with repetition statistics.
    Montecarlo {
        #[command(flatten)]
        noise: NoiseArgs,
        /// Counts per setting.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Per-repetition CSV destination.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Kraus,
    Process,
}

#[derive(Debug, Clone, Default, Args)]
pub struct NoiseArgs {
    #[arg(long, conflicts_with = "purity")]
    pub eta: Option<f64>,
    #[arg(long)]
    pub purity: Option<f64>,
    #[arg(long, conflicts_with = "f_switch")]
    pub epsilon: Option<f64>,
    #[arg(long = "f-switch")]
    pub f_switch: Option<f64>,
}

/// Fully resolved configuration for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub eta: f64,
    pub epsilon: f64,
    pub n_per_setting: u64,
    pub reps: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn noise(&self) -> Result<NoiseParams> {
        NoiseParams::new(self.eta, self.epsilon)
    }
}

/// Parse a flat `key = value` file. Blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    const KEYS: [&str; 9] = [
        "eta", "purity", "epsilon", "f_switch", "n", "reps", "seed", "output", "threads",
    ];
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Config {
            line: i + 1,
            message: format!("expected key=value, got {line:?}"),
        })?;
        let key = k.trim();
        if !KEYS.contains(&key) {
            return Err(Error::Config {
                line: i + 1,
                message: format!("unknown key {key:?}"),
            });
        }
        map.insert(key.to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn config_value<T: std::str::FromStr>(
    map: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>> {
    map.get(key)
        .map(|v| {
            v.parse().map_err(|_| Error::Config {
                line: 0,
                message: format!("cannot parse {key} = {v:?}"),
            })
        })
        .transpose()
}

/// One of an exclusive pair, flags first, then the config file.
fn resolve_pair(
    flags: (Option<f64>, Option<f64>),
    map: &BTreeMap<String, String>,
    keys: (&str, &str),
) -> Result<(Option<f64>, Option<f64>)> {
    if flags.0.is_some() || flags.1.is_some() {
        return Ok(flags);
    }
    let a = config_value(map, keys.0)?;
    let b = config_value(map, keys.1)?;
    if a.is_some() && b.is_some() {
        return Err(Error::Config {
            line: 0,
            message: format!("{} and {} are mutually exclusive", keys.0, keys.1),
        });
    }
    Ok((a, b))
}

impl RunConfig {
    pub fn resolve(
        noise: &NoiseArgs,
        n: Option<u64>,
        reps: Option<usize>,
        seed: Option<u64>,
        output: Option<PathBuf>,
        file: &BTreeMap<String, String>,
    ) -> Result<Self> {
        Self::resolve_inner(noise, n, reps, seed, output, file).map_err(|e| match e {
            Error::OutOfRange { .. } => Error::InvalidArgument(e.to_string()),
            other => other,
        })
    }

    fn resolve_inner(
        noise: &NoiseArgs,
        n: Option<u64>,
        reps: Option<usize>,
        seed: Option<u64>,
        output: Option<PathBuf>,
        file: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let eta = match resolve_pair((noise.eta, noise.purity), file, ("eta", "purity"))? {
            (Some(eta), _) => eta,
            (None, Some(p)) => eta_of_purity(p)?,
            (None, None) => 1.0,
        };
        let epsilon = match resolve_pair(
            (noise.epsilon, noise.f_switch),
            file,
            ("epsilon", "f_switch"),
        )? {
            (Some(e), _) => e,
            (None, Some(f)) => epsilon_of_fidelity(f)?,
            (None, None) => 1.0,
        };
        let cfg = RunConfig {
            eta,
            epsilon,
            n_per_setting: n
                .map_or_else(|| config_value(file, "n"), |v| Ok(Some(v)))?
                .unwrap_or(7000),
            reps: reps
                .map_or_else(|| config_value(file, "reps"), |v| Ok(Some(v)))?
                .unwrap_or(500),
            seed: seed
                .map_or_else(|| config_value(file, "seed"), |v| Ok(Some(v)))?
                .unwrap_or(1),
            output: output.or_else(|| file.get("output").map(PathBuf::from)),
        };
        cfg.noise()?;
        Ok(cfg)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::Config { .. } => EXIT_USAGE,
        Error::Io(_) => EXIT_IO,
        Error::OutOfRange { .. } | Error::Validation(_) | Error::DimensionMismatch { .. } => {
            EXIT_NUMERIC
        }
    }
}

fn open_output<'a>(
    path: &Option<PathBuf>,
    stdout: &'a mut dyn Write,
) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

/// Run with explicit argument list and streams; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(stdout, "{rendered}")
            } else {
                write!(stderr, "{rendered}")
            };
            return code;
        }
    };
    match dispatch(&cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(
    cli: &Cli,
    stdout: &mut (dyn Write + Send),
    stderr: &mut (dyn Write + Send),
) -> Result<()> {
    let file = match &cli.config {
        Some(path) => parse_config(&std::fs::read_to_string(path)?)?,
        None => BTreeMap::new(),
    };
    let threads = match cli.threads {
        Some(t) => Some(t),
        None => config_value(&file, "threads")?,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            return Err(Error::InvalidArgument("--threads must be positive".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| execute(&cli.command, &file, stdout, stderr))
}

fn execute(
    command: &Command,
    file: &BTreeMap<String, String>,
    stdout: &mut (dyn Write + Send),
    stderr: &mut (dyn Write + Send),
) -> Result<()> {
    match command {
        Command::Ideal(noise) => {
            let cfg = RunConfig::resolve(noise, None, None, None, None, file)?;
            cmd_ideal(&cfg, stdout)
        }
        Command::Probs {
            noise,
            backend,
            output,
        } => {
            let cfg = RunConfig::resolve(noise, None, None, None, output.clone(), file)?;
            cmd_probs(&cfg, *backend, stdout)
        }
        Command::Bound { list } => cmd_bound(*list, stdout, stderr),
        Command::Sweep {
            steps,
            fidelities,
            output,
        } => {
            let output = output
                .clone()
                .or_else(|| file.get("output").map(PathBuf::from));
            let fids = fidelities
                .clone()
                .unwrap_or_else(|| DEFAULT_FIDELITIES.to_vec());
            cmd_sweep(*steps, &fids, output.as_deref(), stdout, stderr)
        }
        Command::Montecarlo {
            noise,
            n,
            reps,
            seed,
            output,
        } => {
            let cfg = RunConfig::resolve(noise, *n, *reps, *seed, output.clone(), file)?;
            cmd_montecarlo(&cfg, stdout, stderr)
        }
    }
}

pub fn cmd_ideal(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let v = vbc_value(&switch::behavior(cfg.noise()?)?);
    writeln!(out, "eta: {}", sig9(cfg.eta))?;
    writeln!(out, "epsilon: {}", sig9(cfg.epsilon))?;
    writeln!(out, "p1: {}", sig9(v.p1))?;
    writeln!(out, "p2: {}", sig9(v.p2))?;
    writeln!(out, "p3: {}", sig9(v.p3))?;
    writeln!(out, "total: {}", sig9(v.total))?;
    writeln!(out, "classical bound: {}", sig9(CLASSICAL_BOUND))?;
    writeln!(out, "quantum maximum: {}", sig9(quantum_value()))?;
    Ok(())
}

pub fn cmd_probs(cfg: &RunConfig, backend: Backend, stdout: &mut dyn Write) -> Result<()> {
    let noise = cfg.noise()?;
    let table = match backend {
        Backend::Kraus => switch::behavior(noise)?,
        Backend::Process => process::behavior(noise)?,
    };
    let mut out = open_output(&cfg.output, stdout)?;
    table.write_csv(&mut out)?;
    out.flush()?;
    Ok(())
}

pub fn cmd_bound(list: bool, out: &mut dyn Write, diag: &mut dyn Write) -> Result<()> {
    let start = Instant::now();
    let bound = classical_bound();
    let elapsed = start.elapsed();
    let v = bound.max_value;
    writeln!(
        out,
        "classical bound: {}/{} (={})",
        v.numer(),
        v.denom(),
        *v.numer() as f64 / *v.denom() as f64
    )?;
    writeln!(out, "strategies evaluated: {}", bound.evaluated)?;
    writeln!(out, "maximizers: {}", bound.maximizers.len())?;
    if list {
        for s in &bound.maximizers {
            writeln!(out, "{s}")?;
        }
    }
    writeln!(diag, "enumeration took {:.3} s", elapsed.as_secs_f64())?;
    Ok(())
}

pub fn cmd_sweep(
    steps: usize,
    fidelities: &[f64],
    output: Option<&Path>,
    stdout: &mut dyn Write,
    diag: &mut dyn Write,
) -> Result<()> {
    if steps < 2 {
        return Err(Error::InvalidArgument("--steps must be at least 2".into()));
    }
    let grid = if steps == 151 {
        default_purity_grid()
    } else {
        (0..steps)
            .map(|i| 0.25 + 0.75 * i as f64 / (steps - 1) as f64)
            .collect()
    };
    let rows = sweep(&grid, fidelities)?;
    let mut out = open_output(&output.map(Path::to_path_buf), stdout)?;
    sweep_mod::write_csv(&rows, &mut out)?;
    out.flush()?;
    writeln!(diag, "rows: {}", rows.len())?;
    Ok(())
}

pub fn cmd_montecarlo(cfg: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> Result<()> {
    let table = switch::behavior(cfg.noise()?)?;
    let start = Instant::now();
    let r = report(&table, cfg.n_per_setting, cfg.reps, cfg.seed)?;
    writeln!(out, "eta: {}", sig9(cfg.eta))?;
    writeln!(out, "epsilon: {}", sig9(cfg.epsilon))?;
    writeln!(out, "n per setting: {}", r.n_per_setting)?;
    writeln!(out, "reps: {}", r.reps)?;
    writeln!(out, "seed: {}", r.seed)?;
    let names = ["p1", "p2", "p3", "total"];
    let means = [r.mean.p1, r.mean.p2, r.mean.p3, r.mean.total];
    for ((name, m), s) in names.iter().zip(means).zip(r.sigma) {
        writeln!(out, "{name}: {} ± {}", sig9(m), sig9(s))?;
    }
    writeln!(out, "z-score: {} σ above 7/4", sig9(r.z_score))?;
    if let Some(path) = &cfg.output {
        let mut f = BufWriter::new(File::create(path)?);
        r.write_csv(&mut f)?;
        f.flush()?;
        writeln!(diag, "per-rep values written to {}", path.display())?;
    }
    writeln!(diag, "sampling took {:.3} s", start.elapsed().as_secs_f64())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let map = parse_config("# comment\n eta = 0.9\n\nseed=5\n").unwrap();
        assert_eq!(map["eta"], "0.9");
        assert_eq!(map["seed"], "5");
        assert!(parse_config("bogus=1").is_err());
        assert!(parse_config("eta 0.9").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = parse_config("eta=0.5\nepsilon=0.25\nreps=9").unwrap();
        let flags = NoiseArgs {
            purity: Some(1.0),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(&flags, None, Some(4), None, None, &file).unwrap();
        assert_eq!(cfg.eta, 1.0);
        assert_eq!(cfg.epsilon, 0.25);
        assert_eq!(cfg.reps, 4);
        assert_eq!(cfg.seed, 1);
    }

    #[test]
    fn exclusive_pair_in_file_rejected() {
        let file = parse_config("eta=0.5\npurity=0.9").unwrap();
        assert!(RunConfig::resolve(&NoiseArgs::default(), None, None, None, None, &file).is_err());
    }

    #[test]
    fn exit_codes() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["switchlab", "nope"], &mut out, &mut err), EXIT_USAGE);
        assert_eq!(
            run(
                ["switchlab", "ideal", "--eta", "0.5", "--purity", "0.9"],
                &mut out,
                &mut err
            ),
            EXIT_USAGE
        );
        assert_eq!(
            run(["switchlab", "ideal", "--eta", "1.5"], &mut out, &mut err),
            EXIT_USAGE
        );
        assert_eq!(
            run(
                ["switchlab", "montecarlo", "--reps", "1"],
                &mut out,
                &mut err
            ),
            EXIT_USAGE
        );
        assert_eq!(
            run(
                ["switchlab", "probs", "-o", "/nonexistent-dir/x.csv"],
                &mut out,
                &mut err
            ),
            EXIT_IO
        );
    }
}
