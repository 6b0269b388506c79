//! Command-line front end. [`run_command`] is what the `lmp` binary calls.

mod config;
mod report;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use config::{
    apply_override, BandConfig, BenchmarkConfig, DictionaryConfig, LinkConfig, NoiseConfig,
    SelectionConfig,
};
pub use report::emit_plot;

use crate::blocksparse::{min_block_singular, read_instance, write_matrix, DEFAULT_RANK_TOLERANCE};
use crate::detectors::check_zd_guarantee;
use crate::nuws::{greedy_select, selection_matrix, write_dictionary, write_selection};
use crate::rfsim::{read_results, run_sweep, write_results};

/// Environment variable naming the directory searched for `--config <name>`.
pub const CONFIG_DIR_ENV: &str = "LMP_CONFIG_DIR";

/// Failure categories, each printed with its own prefix.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(String),
    Validation(String),
    Io(String),
    Run(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Run(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Config(_) => 3,
            CliError::Validation(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Validation(m) => write!(f, "invalid configuration: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Run(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::Io(e) => CliError::Io(e.to_string()),
            other => CliError::Run(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "lmp",
    version,
    about = "Compressive whitespace detection benchmark"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Config file, a name looked up in $LMP_CONFIG_DIR, or `default`.
    #[arg(long, global = true, default_value = "default")]
    config: String,
    /// Overrides the config seed.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(..=i64::MAX as u64))]
    seed: Option<u64>,
    /// Overrides a config field, e.g. `--set link.path_loss_exponent=3`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Worker threads for parallel work; defaults to all cores.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Prints the effective configuration before running.
    #[arg(long, global = true)]
    print_config: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Builds the wavelet dictionary and writes it.
    DictGen {
        #[arg(long, default_value = "dictionary.txt")]
        out: PathBuf,
    },
    /// Greedy NUWS row selection for every configured M.
    MatrixSelect {
        #[arg(long, default_value = "selection")]
        out_dir: PathBuf,
    },
    /// Monte-Carlo error-rate sweep.
    Sweep {
        #[arg(long, default_value = "results.csv")]
        out: PathBuf,
        /// Reads matrices from a `matrix-select` directory instead of
        /// running the selection.
        #[arg(long)]
        selection_dir: Option<PathBuf>,
    },
    /// Evaluates the ZD-GroTh success condition on an instance file.
    Guarantee {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Renders a results table as SVG.
    Report {
        #[arg(long, default_value = "results.csv")]
        results: PathBuf,
        #[arg(long, default_value = "report.svg")]
        out: PathBuf,
    },
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| io_err(path, e))
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| io_err(path, e))
}

fn resolve_config_path(name: &str) -> CliResult<Option<PathBuf>> {
    if name == "default" {
        return Ok(None);
    }
    let direct = PathBuf::from(name);
    if direct.is_file() {
        return Ok(Some(direct));
    }
    if let Some(dir) = std::env::var_os(CONFIG_DIR_ENV) {
        let dir = PathBuf::from(dir);
        for candidate in [dir.join(name), dir.join(format!("{name}.toml"))] {
            if candidate.is_file() {
                return Ok(Some(candidate));
            }
        }
    }
    Err(CliError::Config(format!("cannot find config '{name}'")))
}

/// Loads the configuration and applies `--set` and `--seed`.
fn load_config(common: &Common) -> CliResult<BenchmarkConfig> {
    let mut doc = match resolve_config_path(&common.config)? {
        None => toml::Table::new(),
        Some(path) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            text.parse::<toml::Table>()
                .map_err(|e| CliError::Config(format!("{}: {}", path.display(), e.message())))?
        }
    };
    for o in &common.overrides {
        apply_override(&mut doc, o).map_err(CliError::Config)?;
    }
    let mut cfg: BenchmarkConfig = doc
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Config(e.message().to_string()))?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

/// Parses `args` (including the program name) and runs the subcommand,
/// writing human-readable output to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> CliResult<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                write!(out, "{e}").map_err(|e| CliError::Io(e.to_string()))?;
                return Ok(());
            }
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            return Err(CliError::Usage(first.to_string()));
        }
    };
    let cfg = load_config(&cli.common)?;
    if cli.common.print_config {
        write!(out, "{}", cfg.to_toml()).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(w) = cli.common.workers {
            if w == 0 {
                return Err(CliError::Usage("--workers must be at least 1".into()));
            }
            b = b.num_threads(w);
        }
        b.build().map_err(|e| CliError::Run(e.to_string()))?
    };
    let mut buf = Vec::new();
    let result = pool.install(|| execute(&cli.command, &cfg, &mut buf));
    out.write_all(&buf)
        .map_err(|e| CliError::Io(e.to_string()))?;
    result
}

fn execute(command: &Command, cfg: &BenchmarkConfig, out: &mut dyn Write) -> CliResult<()> {
    let w = |out: &mut dyn Write, s: String| -> CliResult<()> {
        writeln!(out, "{s}").map_err(|e| CliError::Io(e.to_string()))
    };
    match command {
        Command::DictGen { out: path } => {
            let plan = cfg.plan().map_err(CliError::Validation)?;
            let dict = cfg.grid().build(plan.signal_len())?;
            let mut f = create(path)?;
            write_dictionary(&mut f, &dict)?;
            f.flush().map_err(|e| io_err(path, e))?;
            w(
                out,
                format!(
                    "wrote {} rows of length {} to {}",
                    dict.len(),
                    dict.signal_len(),
                    path.display()
                ),
            )
        }
        Command::MatrixSelect { out_dir } => {
            let plan = cfg.plan().map_err(CliError::Validation)?;
            let n = plan.signal_len();
            if cfg.m_values.is_empty() || cfg.m_values.iter().any(|&m| m == 0 || m > n) {
                return Err(CliError::Validation(format!("every M must lie in 1..={n}")));
            }
            let partition = plan.partition();
            let dict = cfg.grid().build(n)?;
            let m_max = *cfg.m_values.iter().max().expect("nonempty");
            let sel = greedy_select(
                &dict,
                &partition,
                m_max,
                cfg.candidates_per_step(),
                cfg.selection.seed,
                DEFAULT_RANK_TOLERANCE,
            )?;
            fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
            let mut f = create(&out_dir.join("dictionary.txt"))?;
            write_dictionary(&mut f, &dict)?;
            f.flush().map_err(|e| CliError::Io(e.to_string()))?;

            let traj_path = out_dir.join("coherence_trajectory.txt");
            let mut f = create(&traj_path)?;
            for (step, mu) in sel.coherence_trajectory.iter().enumerate() {
                writeln!(f, "{} {mu:?}", step + 1).map_err(|e| io_err(&traj_path, e))?;
            }
            f.flush().map_err(|e| io_err(&traj_path, e))?;

            for &m in &cfg.m_values {
                let chosen = &sel.chosen[..m];
                let mut f = create(&out_dir.join(format!("selection_m{m}.txt")))?;
                write_selection(&mut f, chosen)?;
                f.flush().map_err(|e| CliError::Io(e.to_string()))?;
                let a = selection_matrix(&dict, chosen, &partition)?;
                let mut f = create(&out_dir.join(format!("matrix_m{m}.txt")))?;
                write_matrix(&mut f, &a)?;
                f.flush().map_err(|e| CliError::Io(e.to_string()))?;
                w(
                    out,
                    format!(
                        "M={m} coherence={:.6} min_singular={:.6e}",
                        sel.coherence_trajectory[m - 1],
                        min_block_singular(&a)
                    ),
                )?;
            }
            w(out, format!("wrote selection to {}", out_dir.display()))
        }
        Command::Sweep {
            out: path,
            selection_dir,
        } => {
            let sweep = cfg.sweep_config().map_err(CliError::Validation)?;
            let source = match selection_dir {
                Some(d) => crate::rfsim::MatrixSource::SelectionDir(d.clone()),
                None => cfg.matrix_source(),
            };
            let curve = run_sweep(&sweep, &source, cfg.seed)?;
            let mut f = create(path)?;
            write_results(&mut f, &curve)?;
            f.flush().map_err(|e| io_err(path, e))?;
            w(
                out,
                format!("wrote {} cells to {}", curve.points().len(), path.display()),
            )
        }
        Command::Guarantee { instance } => {
            let inst = read_instance(open(instance)?)
                .map_err(|e| CliError::Run(format!("{}: {e}", instance.display())))?;
            let r = check_zd_guarantee(&inst.matrix, &inst.signal, inst.noise_norm)?;
            let b = r.correlation_bounds();
            for (k, v) in [
                ("lhs", r.lhs),
                ("rhs", r.rhs),
                ("coherence", r.coherence),
                ("min_singular", r.min_singular),
                ("min_used_norm", r.min_used_norm),
                ("used_norm_sum", r.used_norm_sum),
                ("noise_norm", r.noise_norm),
                ("unused_upper", b.unused_upper),
                ("used_lower", b.used_lower),
            ] {
                w(out, format!("{k} {v}"))?;
            }
            w(out, format!("holds {}", r.holds))
        }
        Command::Report { results, out: path } => {
            let curve = read_results(open(results)?)
                .map_err(|e| CliError::Run(format!("{}: {e}", results.display())))?;
            let svg = emit_plot(&curve)?;
            fs::write(path, svg).map_err(|e| io_err(path, e))?;
            w(out, format!("wrote {}", path.display()))
        }
    }
}

/// Runs the command line and returns the process exit status, printing
/// diagnostics to stderr.
pub fn run_command<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(args, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
