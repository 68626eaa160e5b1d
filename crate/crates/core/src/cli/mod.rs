//! The `cmv` batch runner.
//!
//! Every diagnostic is a subcommand; `run` executes a JSON experiment config
//! and `sweep` expands a config over a parameter grid.

pub mod config;
pub mod output;
pub mod sweep;
pub mod tasks;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{ConfigError, ExperimentConfig, Format, Task};
pub use output::{Table, TaskOutput};

/// Exit status for runs whose hard invariants all hold.
pub const EXIT_OK: i32 = 0;
/// Exit status when any invariant or oracle check failed.
pub const EXIT_INVARIANT: i32 = 1;
/// Exit status for usage and configuration errors.
pub const EXIT_USAGE: i32 = 2;

/// splitmix64 finalizer applied to `base ^ golden·(index + 1)`.
pub fn mix_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Parser)]
#[command(name = "cmv", version, about = "Quasi-periodic CMV matrix experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the task named in a config file (or --task).
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        task: Option<Task>,
    },
    /// Expand a config over one or more axes and merge the results.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        task: Option<Task>,
        /// `name=v1,v2,...` with name one of lambda, omega, z, n, size;
        /// z values are angles in turns. Repeat for a cartesian product.
        #[arg(long = "axis", required = true)]
        axes: Vec<String>,
    },
    Lyapunov(Common),
    Ldt(Common),
    Avalanche(Common),
    Multiscale(Common),
    Positivity(Common),
    UniformBound(Common),
    GreenCheck(Common),
    DavisSimon(Common),
    RestrictionCheck(Common),
    Spectrum(Common),
    Localize(Common),
    DioCheck(Common),
    DetformCheck(Common),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON experiment config.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed for sampling and instance generation.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads; affects speed only.
    #[arg(long, env = "CMV_THREADS")]
    pub threads: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long)]
    pub instances: Option<usize>,
    /// Spectral parameter `re,im`; repeatable.
    #[arg(long = "z", value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Vec<[f64; 2]>,
}

fn parse_complex(s: &str) -> Result<[f64; 2], String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected re,im, got {s:?}"))?;
    let re = re.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let im = im.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok([re, im])
}

impl Command {
    fn parts(&self) -> (&Common, Option<Task>) {
        match self {
            Command::Run { common, task } | Command::Sweep { common, task, .. } => (common, *task),
            Command::Lyapunov(c) => (c, Some(Task::Lyapunov)),
            Command::Ldt(c) => (c, Some(Task::Ldt)),
            Command::Avalanche(c) => (c, Some(Task::Avalanche)),
            Command::Multiscale(c) => (c, Some(Task::Multiscale)),
            Command::Positivity(c) => (c, Some(Task::Positivity)),
            Command::UniformBound(c) => (c, Some(Task::UniformBound)),
            Command::GreenCheck(c) => (c, Some(Task::GreenCheck)),
            Command::DavisSimon(c) => (c, Some(Task::DavisSimon)),
            Command::RestrictionCheck(c) => (c, Some(Task::RestrictionCheck)),
            Command::Spectrum(c) => (c, Some(Task::Spectrum)),
            Command::Localize(c) => (c, Some(Task::Localize)),
            Command::DioCheck(c) => (c, Some(Task::DioCheck)),
            Command::DetformCheck(c) => (c, Some(Task::DetformCheck)),
        }
    }
}

/// Load the config (if any) and apply flag overrides.
pub fn resolve_config(
    common: &Common,
    task: Option<Task>,
    require_file: bool,
) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError::at("", format!("cannot read {}: {e}", path.display())))?;
            let mut value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| ConfigError::at("", format!("{}: {e}", path.display())))?;
            // a subcommand supplies the task, so the file may omit it
            if let (Some(t), Some(obj)) = (task, value.as_object_mut()) {
                obj.insert(
                    "task".into(),
                    serde_json::to_value(t).expect("task serializes"),
                );
            }
            ExperimentConfig::from_json(&value.to_string())?
        }
        None if require_file => return Err(ConfigError::at("", "--config is required")),
        None => match task {
            Some(t) => ExperimentConfig::new(t),
            None => return Err(ConfigError::at("task", "no task given")),
        },
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
        cfg.sampling.seed = seed;
    }
    if let Some(l) = common.lambda {
        cfg.scheme.lambda = l;
    }
    if let Some(w) = common.omega {
        cfg.scheme.omega = w;
    }
    if let Some(n) = common.n {
        cfg.params.n = Some(n);
    }
    if let Some(s) = common.size {
        cfg.params.size = Some(s);
        cfg.params.sizes = None;
    }
    if let Some(i) = common.instances {
        cfg.params.instances = Some(i);
    }
    if !common.z.is_empty() {
        cfg.params.z = Some(common.z.clone());
        cfg.params.z_grid = None;
    }
    if let Some(f) = common.format {
        cfg.output.format = f;
    }
    if let Some(p) = &common.out {
        cfg.output.path = Some(p.display().to_string());
    }
    cfg.scheme
        .build()
        .map_err(|e| ConfigError::at("scheme", e.to_string()))?;
    Ok(cfg)
}

/// Run one config: hash column added, output written, summary returned.
pub fn execute(cfg: &ExperimentConfig) -> Result<TaskOutput, ConfigError> {
    let hash = cfg.hash();
    let mut out = tasks::run_task(cfg)?;
    out.table
        .prepend(&[("config_hash", serde_json::Value::String(hash))]);
    Ok(out)
}

fn emit(cfg: &ExperimentConfig, out: &TaskOutput) -> Result<(), String> {
    let hash = cfg.hash();
    let text = output::render(cfg, &hash, out, cfg.output.format);
    let line = format!(
        "{}: {} [rows={} failures={} config={}]",
        cfg.task.name(),
        out.summary,
        out.table.rows.len(),
        out.failures.len(),
        &hash[..16]
    );
    match &cfg.output.path {
        Some(p) => {
            output::write_atomic(std::path::Path::new(p), &text)
                .map_err(|e| format!("cannot write {p}: {e}"))?;
            println!("{line}");
        }
        None => {
            print!("{text}");
            eprintln!("{line}");
        }
    }
    for f in &out.failures {
        eprintln!("failure: {f}");
    }
    Ok(())
}

/// Entry point shared by the binary and the tests; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (common, task) = cli.command.parts();
    if let Some(t) = common.threads {
        // the global pool can only be set once per process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global();
    }
    let require_file = matches!(cli.command, Command::Run { .. } | Command::Sweep { .. });
    let cfg = match resolve_config(common, task, require_file) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = match &cli.command {
        Command::Sweep { axes, .. } => match sweep::parse_axes(axes) {
            Ok(axes) => sweep::sweep(&cfg, &axes),
            Err(e) => Err(e),
        },
        _ => execute(&cfg),
    };
    match result {
        Ok(out) => {
            if let Err(e) = emit(&cfg, &out) {
                eprintln!("{e}");
                return EXIT_USAGE;
            }
            if out.failures.is_empty() {
                EXIT_OK
            } else {
                EXIT_INVARIANT
            }
        }
        Err(e) => {
            eprintln!("config error: {e}");
            EXIT_USAGE
        }
    }
}
