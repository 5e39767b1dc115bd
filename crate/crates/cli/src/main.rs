//! `losmap`: LoS-based environment mapping experiments.
//!
//! Exit codes: 0 on success, 1 for configuration or usage errors, 2 when an
//! experiment fails at run time.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use losmap::harness::{self, ExperimentConfig, LinkQuality, OutputFile};
use losmap::Error;

#[derive(Parser)]
#[command(name = "losmap", version, about = "Occupancy mapping from the LoS state of a wall-mounted antenna array")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One trial over random terminal positions: trace CSV plus a map per location.
    Map(Common),
    /// Mean IoU against number of locations for each array size (perfect LoS).
    SweepIou(Common),
    /// Empirical LoS error rate against the closed-form prediction.
    LosError(Common),
    /// Mean IoU against estimate SNR for each K-factor, with perfect-LoS reference.
    IouVsNoise(Common),
    /// Maps over the fixed positions listed under [render] in the config.
    Render(Common),
    /// Parse and check a config, then print the resolved settings.
    ValidateConfig(Common),
}

#[derive(Args)]
struct Common {
    /// TOML config; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    trials: Option<usize>,
    /// Use ground-truth LoS bits instead of detecting them.
    #[arg(long)]
    perfect_los: bool,
    #[arg(long)]
    cell_size: Option<f64>,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_path(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(trials) = self.trials {
            cfg.num_trials = trials;
        }
        if let Some(cs) = self.cell_size {
            cfg.cell_size = cs;
        }
        if self.perfect_los {
            cfg.link = LinkQuality::Perfect;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn describe(cfg: &ExperimentConfig) -> String {
    let link = match cfg.link {
        LinkQuality::Perfect => "perfect".to_string(),
        LinkQuality::Estimated { gamma_v_db } => format!("{gamma_v_db} dB"),
    };
    format!(
        "room {} x {} m, {} obstacles\nantennas {}\ncarrier {} GHz, K {} dB, gamma_v {}\nlocations {}, trials {}, cell {} m, seed {}\ndetector {:?}",
        cfg.layout.width,
        cfg.layout.length,
        cfg.layout.obstacles.len(),
        cfg.num_antennas,
        cfg.carrier_ghz,
        cfg.k_db,
        link,
        cfg.num_locations,
        cfg.num_trials,
        cfg.cell_size,
        cfg.seed,
        cfg.detector,
    )
}

fn run(command: Command) -> ExitCode {
    let common = match &command {
        Command::Map(c)
        | Command::SweepIou(c)
        | Command::LosError(c)
        | Command::IouVsNoise(c)
        | Command::Render(c)
        | Command::ValidateConfig(c) => c,
    };
    let cfg = match common.load() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let jobs = common.jobs;
    let files: Result<Vec<OutputFile>, Error> = match &command {
        Command::ValidateConfig(_) => {
            println!("{}", describe(&cfg));
            return ExitCode::SUCCESS;
        }
        Command::Map(_) => harness::map_outputs(&cfg),
        Command::SweepIou(_) => harness::sweep_iou_outputs(&cfg, jobs),
        Command::LosError(_) => harness::los_error_outputs(&cfg, jobs),
        Command::IouVsNoise(_) => harness::iou_vs_noise_outputs(&cfg, jobs),
        Command::Render(_) => harness::render_outputs(&cfg),
    };
    match files.and_then(|files| {
        harness::write_all(&common.out, &files)?;
        Ok(files)
    }) {
        Ok(files) => {
            for f in &files {
                println!("{}", common.out.join(&f.name).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage_error = e.use_stderr();
            let _ = e.print();
            return if usage_error { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    run(cli.command)
}
