use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nonclassic_cli::{run, write_outputs, CliError, Command, Overrides, RunConfig};

#[derive(Parser)]
#[command(
    name = "nonclassic",
    version,
    about = "Higher-order nonclassicality of multiphoton processes"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Antibunching and sub-Poissonian criteria along an exact trajectory.
    Criteria(Common),
    /// Exact evolution against the short-time closed forms.
    Compare(Common),
    /// Five-wave mixing against third-harmonic generation.
    Depth(Common),
    /// Built-in invariant checks.
    Selftest(Common),
}

#[derive(Args)]
struct Common {
    /// TOML configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long)]
    alpha_sq: Option<f64>,
    #[arg(long)]
    t_start: Option<f64>,
    #[arg(long)]
    t_stop: Option<f64>,
    #[arg(long)]
    t_count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

fn execute(command: Command, args: &Common) -> Result<i32, CliError> {
    let mut config = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    config.apply(&Overrides {
        g: args.g,
        alpha_sq: args.alpha_sq,
        t_start: args.t_start,
        t_stop: args.t_stop,
        t_count: args.t_count,
        seed: args.seed,
    });
    let outcome = run(command, &config)?;
    let written = write_outputs(&outcome, &config, &args.out_dir)?;
    print!("{}", outcome.summary);
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(outcome.verdict.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        Sub::Criteria(a) => (Command::Criteria, a),
        Sub::Compare(a) => (Command::Compare, a),
        Sub::Depth(a) => (Command::Depth, a),
        Sub::Selftest(a) => (Command::Selftest, a),
    };
    let code = match execute(command, args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
