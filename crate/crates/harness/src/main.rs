use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mhd_couette_harness::linear::{cmd_linear_sweep, cmd_mode_solve};
use mhd_couette_harness::simulate::{cmd_simulate, cmd_threshold_search, SearchStatus};
use mhd_couette_harness::weights_check::cmd_weights_check;
use mhd_couette_harness::{load_config, HarnessError, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "mhdc", about = "2D MHD Couette experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Solve the mode system for every configured mode.
    ModeSolve(RunArgs),
    /// Sweep the parameter grid and fit growth exponents.
    LinearSweep(RunArgs),
    /// Run one nonlinear simulation.
    Simulate(RunArgs),
    /// Bisect the stability threshold in the initial amplitude.
    ThresholdSearch(RunArgs),
    /// Sample the weight inequalities.
    WeightsCheck(RunArgs),
    Version,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// TOML run configuration.
    #[arg(short, long)]
    config: PathBuf,
    /// Output directory, overriding `out_dir`.
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Field override, e.g. `--set params.nu=1e-3`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl RunArgs {
    fn load(&self) -> Result<(RunConfig, PathBuf), HarnessError> {
        let mut overrides = self.overrides.clone();
        if let Some(seed) = self.seed {
            overrides.push(format!("rng_seed={seed}"));
        }
        let cfg = load_config(&self.config, &overrides)?;
        let dir = self.out.clone().unwrap_or_else(|| cfg.out_dir.clone());
        std::fs::create_dir_all(&dir)?;
        Ok((cfg, dir))
    }
}

fn run(cmd: Cmd) -> Result<(), HarnessError> {
    match cmd {
        Cmd::ModeSolve(a) => {
            let (cfg, dir) = a.load()?;
            let out = cmd_mode_solve(&cfg, &dir)?;
            println!(
                "{} rows -> {}",
                out.rows.len(),
                dir.join("mode_sweep.csv").display()
            );
        }
        Cmd::LinearSweep(a) => {
            let (cfg, dir) = a.load()?;
            cmd_linear_sweep(&cfg, &dir)?;
        }
        Cmd::Simulate(a) => {
            let (cfg, dir) = a.load()?;
            let s = cmd_simulate(&cfg, &dir)?;
            println!("{} steps, sup HN_neq = {}", s.steps, s.sup_hn_neq);
        }
        Cmd::ThresholdSearch(a) => {
            let (cfg, dir) = a.load()?;
            let r = cmd_threshold_search(&cfg, &dir)?;
            match r.status {
                SearchStatus::Converged => println!(
                    "eps* = {} after {} trials (eps*/2 stable: {})",
                    r.eps_lo,
                    r.trials,
                    r.monotone_check.unwrap_or(false)
                ),
                _ => println!("unbracketed: [{}, {}]", r.eps_lo, r.eps_hi),
            }
        }
        Cmd::WeightsCheck(a) => {
            let (cfg, dir) = a.load()?;
            let r = cmd_weights_check(&cfg, &dir)?;
            println!("{} checks passed", r.checks.iter().filter(|c| c.passed()).count());
        }
        Cmd::Version => println!("mhdc {}", env!("CARGO_PKG_VERSION")),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
