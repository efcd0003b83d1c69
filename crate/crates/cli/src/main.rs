use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Parser, Subcommand, ValueEnum};
use wmr_pendulum::{ControlMode, SwingUpLaw};
use wmr_pendulum_cli::{parse_config, run, RunConfig};

#[derive(Parser)]
#[command(
    name = "wmr-pendulum",
    version,
    about = "Pendulum on a differential-drive robot"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one or more configurations and write CSV and summary files.
    Run(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Continuous,
    Sampled,
    Passive,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Configuration file; repeat for a batch.
    #[arg(long = "config", required = true)]
    configs: Vec<PathBuf>,
    /// Output directory; batches write one subdirectory per configuration.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Integration step in seconds.
    #[arg(long)]
    dt: Option<f64>,
    /// Simulated duration in seconds.
    #[arg(long)]
    t_final: Option<f64>,
    /// Control mode.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Zero-order-hold period for sampled mode.
    #[arg(long)]
    sample_period: Option<f64>,
    /// Use the swing-up law in its printed form and compare it against the corrected one.
    #[arg(long)]
    printed_eq24: bool,
    /// Worker threads for batches.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn load(path: &Path, args: &RunArgs) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut cfg = parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let sc = &mut cfg.scenario;
    if let Some(dt) = args.dt {
        sc.dt = dt;
    }
    if let Some(t) = args.t_final {
        sc.t_final = t;
    }
    let period = args.sample_period.or(match sc.mode {
        ControlMode::Sampled { period } => Some(period),
        _ => None,
    });
    match args.mode {
        Some(Mode::Continuous) => sc.mode = ControlMode::Continuous,
        Some(Mode::Passive) => sc.mode = ControlMode::Passive,
        Some(Mode::Sampled) => {
            sc.mode = ControlMode::Sampled {
                period: period.ok_or("sampled mode needs --sample-period")?,
            }
        }
        None => {
            if let (ControlMode::Sampled { .. }, Some(period)) = (sc.mode, args.sample_period) {
                sc.mode = ControlMode::Sampled { period };
            }
        }
    }
    if args.printed_eq24 {
        sc.swing_up_law = SwingUpLaw::Printed;
    }
    cfg.validate()
        .map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(cfg)
}

fn run_one(path: &Path, args: &RunArgs, batch: bool) -> Result<String, String> {
    let cfg = load(path, args)?;
    let name = path
        .file_stem()
        .map_or_else(|| "run".into(), |s| s.to_string_lossy().into_owned());
    let base = args.out.clone().unwrap_or_else(|| cfg.out_dir.clone());
    let dir = if batch { base.join(&name) } else { base };
    let outcome = run(&cfg, &name, &dir).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(format!(
        "{}\nwritten to {}\n",
        outcome.summary.render(),
        dir.display()
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run(args) = cli.command;
    let batch = args.configs.len() > 1;
    let next = AtomicUsize::new(0);
    let results = Mutex::new(vec![None; args.configs.len()]);
    std::thread::scope(|scope| {
        for _ in 0..args.jobs.clamp(1, args.configs.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = args.configs.get(i) else {
                    break;
                };
                let r = run_one(path, &args, batch);
                results
                    .lock()
                    .expect("no worker panics while holding the lock")[i] = Some(r);
            });
        }
    });
    let mut failed = false;
    for r in results
        .into_inner()
        .expect("workers finished")
        .into_iter()
        .flatten()
    {
        match r {
            Ok(text) => print!("{text}"),
            Err(e) => {
                eprintln!("error: {e}");
                failed = true;
            }
        }
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
