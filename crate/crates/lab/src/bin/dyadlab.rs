use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use dyadlab::{run, Experiment, ExperimentConfig, LabError};

/// Seeded experiments on exact dyadic step-function models.
#[derive(Debug, Parser)]
#[command(name = "dyadlab", version)]
struct Cli {
    /// sharpness | domination | weaktype | apchar | cover
    experiment: String,
    /// Flat `key = value` config file
    #[arg(long)]
    config: PathBuf,
    /// CSV destination (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    depth: Option<u32>,
}

fn load(cli: &Cli) -> Result<ExperimentConfig, LabError> {
    let exp: Experiment = cli.experiment.parse()?;
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| LabError::Config(format!("{}: {e}", cli.config.display())))?;
    let mut cfg = ExperimentConfig::parse(&text, Some(exp))?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(d) = cli.depth {
        cfg.depth = d;
    }
    if cli.out.is_some() {
        cfg.out = cli.out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main_inner(cli: &Cli) -> Result<(), LabError> {
    let cfg = load(cli)?;
    log::info!("running {} with seed {}", cfg.experiment, cfg.seed);
    let report = run(&cfg)?;
    match &cfg.out {
        Some(path) => report.table.write_to(BufWriter::new(File::create(path)?))?,
        None => report.table.write_to(io::stdout().lock())?,
    }
    for c in &report.checks {
        log::info!("check {}: {} ({})", c.name, if c.pass { "pass" } else { "FAIL" }, c.detail);
    }
    match report.first_failure() {
        Some(c) => Err(LabError::Certification(format!("{}: {}", c.name, c.detail))),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match main_inner(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error kind={} code={} message={msg:?}", e.kind(), e.exit_code());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
