use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use cavity_qfi_cli::scenario::{mode_name, parse_formats, parse_mode};
use cavity_qfi_cli::{
    error_line, run_scenario, run_validation, CliError, Level, Mutation, Scenario, PRESETS,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "cavity-qfi",
    version,
    about = "QFI of a qubit in a leaky cavity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a preset or custom scenario and write its data files.
    Run(RunArgs),
    /// Run the oracle cross-checks.
    Validate(ValidateArgs),
    /// List the built-in presets.
    Presets,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Start from a built-in preset; other flags override its fields.
    #[arg(long)]
    preset: Option<String>,
    /// Spectral width λ in units of γ₀.
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Atom–cavity coupling Ω in units of γ₀.
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Atomic frequency ω₀ in units of γ₀ (default 50).
    #[arg(long, allow_negative_numbers = true)]
    omega0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
    /// dressed, standard or raw (cavity-carried excitation).
    #[arg(long)]
    family: Option<String>,
    /// rederived or paper-faithful.
    #[arg(long)]
    mode: Option<String>,
    /// Horizon in units of 1/γ₀.
    #[arg(long, allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Base name of the output files.
    #[arg(long)]
    name: Option<String>,
    /// Comma-separated subset of csv,json,svg.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Comma-separated columns drawn in the SVG.
    #[arg(long, default_value = "F_closed")]
    plot: String,
    /// Output directory.
    #[arg(long, env = "QFI_OUT_DIR", default_value = ".")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// quick or full.
    #[arg(long, default_value = "quick")]
    level: String,
    /// Corrupt the dressed closed form to confirm the suite notices.
    #[arg(long, hide = true)]
    mutate_dressed_sign: bool,
}

fn scenario_from(args: &RunArgs) -> Result<Scenario, CliError> {
    let mut s = match &args.preset {
        Some(name) => Scenario::preset(name)?,
        None => {
            let (Some(lambda), Some(omega)) = (args.lambda, args.omega) else {
                return Err(CliError::BadArgument(
                    "either --preset or both --lambda and --omega are required".into(),
                ));
            };
            Scenario::custom(lambda, omega)
        }
    };
    if let Some(x) = args.lambda {
        s.lambda = x;
    }
    if let Some(x) = args.omega {
        s.omega = x;
    }
    if let Some(x) = args.omega0 {
        s.omega0 = x;
    }
    if let Some(x) = args.theta {
        s.theta = x;
    }
    if let Some(x) = args.phi {
        s.phi = x;
    }
    if let Some(f) = &args.family {
        s.family = f.parse()?;
    }
    if let Some(m) = &args.mode {
        s.mode = parse_mode(m)?;
    }
    if let Some(x) = args.t_max {
        s.t_max = x;
    }
    if let Some(n) = args.samples {
        s.samples = n;
    }
    if let Some(n) = &args.name {
        s.name = n.clone();
    }
    s.formats = parse_formats(&args.format)?;
    s.plot_columns = args.plot.split(',').map(|c| c.trim().to_string()).collect();
    s.validate()?;
    Ok(s)
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run(args) => {
            let s = scenario_from(&args)?;
            for path in run_scenario(&s, &args.out)? {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Validate(args) => {
            let level: Level = args.level.parse()?;
            let mutation = if args.mutate_dressed_sign {
                Mutation::FlipDressedCrossTerm
            } else {
                Mutation::None
            };
            let started = Instant::now();
            let report = run_validation(level, mutation)?;
            for check in &report.checks {
                println!("{check}");
            }
            println!("elapsed {:.2}s", started.elapsed().as_secs_f64());
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::ValidationFailed {
                    failed: report.failures(),
                    total: report.checks.len(),
                })
            }
        }
        Command::Presets => {
            for (name, lambda, omega, family, mode) in PRESETS {
                println!(
                    "{name:<12} lambda={lambda} omega={omega} family={family} mode={}",
                    mode_name(mode)
                );
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // help and version requests
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            eprintln!("{}", error_line("usage", first));
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_line(e.kind(), &e.to_string()));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
