use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fdstates::scenario::{run_scenario, verify_closed_forms, ScenarioConfig, ScenarioError, VerifySettings, PRESETS};

#[derive(Parser)]
#[command(name = "fdstates", version, about = "Driven Kerr oscillator scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario from a JSON file or a preset name.
    Run {
        scenario: String,
        /// Output directory for the CSV and report.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the number of samples (continuous engine).
        #[arg(long)]
        samples: Option<usize>,
        /// Override the damping rate (kicked_dissipative engine).
        #[arg(long)]
        gamma: Option<f64>,
    },
    /// Compare numerical evolution against the closed-form coefficients.
    Verify {
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        #[arg(long)]
        samples: Option<usize>,
        /// Maximum tolerated probability deviation.
        #[arg(long, default_value_t = 1e-2)]
        bound: f64,
        /// Also write `verify.report.json` here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in presets.
    Presets,
}

fn run(cli: Cli) -> Result<ExitCode, ScenarioError> {
    match cli.command {
        Command::Run { scenario, out, samples, gamma } => {
            let mut config = ScenarioConfig::load(&scenario)?;
            if let Some(m) = samples {
                config.sample_count = m;
            }
            if let Some(g) = gamma {
                config.gamma = Some(g);
            }
            config.validate()?;
            let output = run_scenario(&config, &out)?;
            log::info!("wrote {} and {}", output.csv_path.display(), output.report_path.display());
            println!("{}", serde_json::to_string_pretty(&output.report).expect("report serializes"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { nmax, samples, bound, out } => {
            let mut settings = VerifySettings { bound, ..VerifySettings::default() };
            if let Some(m) = samples {
                settings.samples = m;
            }
            let report = verify_closed_forms(nmax, &settings)?;
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|source| ScenarioError::Io { path: dir.clone(), source })?;
                let path = dir.join("verify.report.json");
                std::fs::write(&path, format!("{json}\n")).map_err(|source| ScenarioError::Io { path, source })?;
            }
            println!("{json}");
            for check in report.checks.iter().filter(|c| !c.passed) {
                eprintln!("order {}: max deviation {:.3e} exceeds {:.1e}", check.order, check.max_deviation, bound);
            }
            Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Presets => {
            for (name, _) in PRESETS {
                println!("{name}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
