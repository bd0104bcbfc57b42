use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use ruin_cli::{run_command, CliError, Command, Options, Precision, Scenario};

#[derive(Parser)]
#[command(name = "ruin", version, about = "Finite-horizon ruin probabilities under proportional reinsurance")]
struct Args {
    #[arg(value_enum)]
    command: CommandArg,
    /// Scenario file (TOML).
    #[arg(long)]
    scenario: PathBuf,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for `simulate`; overrides the scenario.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
    /// `full` prints shortest round-trip values instead of 6 significant digits.
    #[arg(long, value_enum, default_value = "short")]
    precision: PrecisionArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum CommandArg {
    RuinTable,
    Lundberg,
    Asymptotic,
    Retention,
    Simulate,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionArg {
    Short,
    Full,
}

fn run(args: Args) -> Result<(), CliError> {
    let command = match args.command {
        CommandArg::RuinTable => Command::RuinTable,
        CommandArg::Lundberg => Command::Lundberg,
        CommandArg::Asymptotic => Command::Asymptotic,
        CommandArg::Retention => Command::Retention,
        CommandArg::Simulate => Command::Simulate,
    };
    let options = Options {
        precision: match args.precision {
            PrecisionArg::Short => Precision::Short,
            PrecisionArg::Full => Precision::Full,
        },
        seed: args.seed,
        threads: args.threads,
    };
    let scenario = Scenario::load(&args.scenario)?;
    let output = run_command(command, &scenario, &options)?;
    for w in &output.warnings {
        eprintln!("{w}");
    }
    match args.out {
        Some(path) => std::fs::write(path, output.csv)?,
        None => std::io::stdout().lock().write_all(output.csv.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
