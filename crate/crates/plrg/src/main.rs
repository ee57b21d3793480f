use clap::{Args, Parser, Subcommand};
use plrg::config::{Experiment, ExperimentConfig};
use plrg::plot::PlotKind;
use plrg::{run, HarnessError};
use std::path::PathBuf;
use std::process::ExitCode;

/// Power-law random graphs without Bernoulli edges: seeded experiments.
#[derive(Debug, Parser)]
#[command(name = "plrg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
#[command(rename_all = "snake_case")]
enum Command {
    Motifs(Overrides),
    EdgesVertices(Overrides),
    Supercritical(Overrides),
    Graphex(Overrides),
    Height(Overrides),
    Graphon(Overrides),
    Bernoulli(Overrides),
    Regimes(Overrides),
    /// Run the experiment described by a JSON configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        output: OutputFlags,
    },
}

#[derive(Debug, Args)]
struct Overrides {
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    gamma: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u64>>,
    #[arg(long)]
    reps: Option<u64>,
    #[arg(long, env = "PLRG_SEED")]
    seed: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    x0: Option<f64>,
    #[arg(long)]
    window: Option<f64>,
    #[arg(long)]
    resolution: Option<usize>,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Debug, Args)]
struct OutputFlags {
    /// Exit with status 3 if any acceptance threshold fails.
    #[arg(long)]
    check: bool,
    #[arg(long)]
    threads: Option<usize>,
    /// Plot data to emit; repeat or comma-separate.
    #[arg(long, value_enum, value_delimiter = ',')]
    plot: Vec<PlotKind>,
}

impl Overrides {
    fn apply(self, experiment: Experiment) -> (ExperimentConfig, OutputFlags) {
        let mut c = ExperimentConfig::defaults(experiment);
        if let Some(v) = self.alpha {
            c.alpha = v;
        }
        if let Some(v) = self.gamma {
            c.gamma = v;
        }
        if let Some(v) = self.n {
            c.n_list = v;
        }
        if let Some(v) = self.reps {
            c.reps = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.grid {
            c.x_grid = v;
        }
        if let Some(v) = self.out {
            c.output_dir = v;
        }
        if let Some(v) = self.x0 {
            c.x0 = v;
        }
        if let Some(v) = self.window {
            c.window = v;
        }
        if let Some(v) = self.resolution {
            c.resolution = v;
        }
        (c, self.output)
    }
}

fn resolve(command: Command) -> Result<(ExperimentConfig, OutputFlags), HarnessError> {
    let (experiment, o) = match command {
        Command::Run { config, output } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| HarnessError::Config(format!("{}: {e}", config.display())))?;
            return Ok((ExperimentConfig::from_json(&text)?, output));
        }
        Command::Motifs(o) => (Experiment::Motifs, o),
        Command::EdgesVertices(o) => (Experiment::EdgesVertices, o),
        Command::Supercritical(o) => (Experiment::Supercritical, o),
        Command::Graphex(o) => (Experiment::Graphex, o),
        Command::Height(o) => (Experiment::Height, o),
        Command::Graphon(o) => (Experiment::Graphon, o),
        Command::Bernoulli(o) => (Experiment::Bernoulli, o),
        Command::Regimes(o) => (Experiment::Regimes, o),
    };
    Ok(o.apply(experiment))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = resolve(cli.command).and_then(|(config, flags)| {
        if flags.threads == Some(0) {
            return Err(HarnessError::Config("--threads must be at least 1".into()));
        }
        run(&config, flags.threads, &flags.plot).map(|o| (o, flags.check))
    });
    match outcome {
        Ok((o, check)) => {
            for c in &o.report.checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            println!("wrote {}", o.csv_path.display());
            println!("wrote {}", o.manifest_path.display());
            if check && !o.report.all_passed() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("plrg: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
